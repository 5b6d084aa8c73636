"""Losses, Bayes risk, the value of an experiment, regret and entropy utilities.

The value of an experiment under a loss and prior is the risk of the best
decision rule that only sees the experiment's output.  It is computed as an
expected posterior minimum, never by materializing the concave envelope of
the loss as a function object: every use goes through a min over actions at
a concrete posterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .kernels import (
    Distribution,
    FiniteSpace,
    MarkovKernel,
    _mismatch,
    bayes_inverse,
    compose,
    pushforward,
)

_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class LossMatrix:
    """Bounded loss over hypotheses (rows) and actions (columns)."""

    theta: FiniteSpace
    actions: FiniteSpace
    values: np.ndarray
    sup_norm: float = field(init=False)

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        expected = (self.theta.size, self.actions.size)
        if v.shape != expected:
            raise ValueError(f"loss needs shape {expected}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("loss entries must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sup_norm", float(np.abs(v).max()))


def zero_one_loss(space: FiniteSpace) -> LossMatrix:
    """Misclassification loss with actions identified with hypotheses."""
    return LossMatrix(space, space, 1.0 - np.eye(space.size))


@dataclass(frozen=True, eq=False)
class LearningProblem:
    """Hypotheses, data, an experiment connecting them, a loss and a prior."""

    theta: FiniteSpace
    data_space: FiniteSpace
    experiment: MarkovKernel
    loss: LossMatrix
    prior: Distribution

    def __post_init__(self) -> None:
        if self.experiment.source != self.theta:
            raise _mismatch("problem: experiment input", self.theta, self.experiment.source)
        if self.experiment.target != self.data_space:
            raise _mismatch("problem: experiment output", self.data_space, self.experiment.target)
        if self.loss.theta != self.theta:
            raise _mismatch("problem: loss hypotheses", self.theta, self.loss.theta)
        if self.prior.space != self.theta:
            raise _mismatch("problem: prior", self.theta, self.prior.space)


def _min_expected_loss(loss: LossMatrix, mass: np.ndarray) -> float:
    """Smallest expected loss over actions at a fixed distribution on hypotheses."""
    return float((mass @ loss.values).min())


def bayes_risk(loss: LossMatrix, prior: Distribution, rule: MarkovKernel) -> float:
    """Expected loss of a rule mapping hypotheses straight to actions."""
    if prior.space != loss.theta:
        raise _mismatch("bayes_risk: prior", loss.theta, prior.space)
    if rule.source != loss.theta:
        raise _mismatch("bayes_risk: rule input", loss.theta, rule.source)
    if rule.target != loss.actions:
        raise _mismatch("bayes_risk: rule output", loss.actions, rule.target)
    return float(prior.mass @ np.sum(rule.matrix.T * loss.values, axis=1))


def bayes_act(loss: LossMatrix, posterior: Distribution) -> int:
    """Index of the action minimizing expected loss; ties go to the lowest index."""
    if posterior.space != loss.theta:
        raise _mismatch("bayes_act", loss.theta, posterior.space)
    return int(np.argmin(posterior.mass @ loss.values))


def value(loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> float:
    """Risk of the best decision rule that factors through the experiment.

    Equal to the marginal-weighted average of the posterior minimum expected
    loss; computed via the joint so outputs of zero marginal mass drop out.
    """
    if experiment.source != loss.theta:
        raise _mismatch("value: experiment input", loss.theta, experiment.source)
    if prior.space != loss.theta:
        raise _mismatch("value: prior", loss.theta, prior.space)
    jm = experiment.matrix * prior.mass[None, :]
    return float((jm @ loss.values).min(axis=1).sum())


def bayes_decision_rule(loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> MarkovKernel:
    """Deterministic rule picking the best action at each posterior."""
    if experiment.source != loss.theta:
        raise _mismatch("bayes_decision_rule: experiment input", loss.theta, experiment.source)
    posts = bayes_inverse(experiment, prior)
    scores = posts.matrix.T @ loss.values
    acts = np.argmin(scores, axis=1)
    m = np.zeros((loss.actions.size, experiment.target.size))
    m[acts, np.arange(experiment.target.size)] = 1.0
    return MarkovKernel(experiment.target, loss.actions, m)


def regret(loss: LossMatrix, p: Distribution, q: Distribution) -> float:
    """Excess loss from acting optimally for q when the truth follows p.

    Coincides with the Bregman divergence generated by the concave envelope
    of the loss; always nonnegative up to rounding.
    """
    if p.space != loss.theta or q.space != loss.theta:
        raise _mismatch("regret", loss.theta, p.space if p.space != loss.theta else q.space)
    a = bayes_act(loss, q)
    return float(p.mass @ loss.values[:, a] - _min_expected_loss(loss, p.mass))


def feature_gap(
    loss: LossMatrix,
    prior: Distribution,
    experiment: MarkovKernel,
    encoder: MarkovKernel,
) -> float:
    """Value lost by deciding from encoded data instead of raw data (>= 0)."""
    return value(loss, prior, compose(encoder, experiment)) - value(loss, prior, experiment)


def information_gap(loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> float:
    """Value gained over the experiment that reveals nothing (>= 0)."""
    if prior.space != loss.theta:
        raise _mismatch("information_gap: prior", loss.theta, prior.space)
    return _min_expected_loss(loss, prior.mass) - value(loss, prior, experiment)


def entropy(dist: Distribution) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    return float(-xlogy(dist.mass, dist.mass).sum() / _LN2)


def conditional_entropy(prior: Distribution, encoder: MarkovKernel) -> float:
    """H(input | output) in bits under the joint of prior and encoder."""
    if prior.space != encoder.source:
        raise _mismatch("conditional_entropy", encoder.source, prior.space)
    jm = encoder.matrix * prior.mass[None, :]
    pz = jm.sum(axis=1)
    return float((xlogy(jm, pz[:, None]).sum() - xlogy(jm, jm).sum()) / _LN2)


def mutual_information(prior: Distribution, encoder: MarkovKernel) -> float:
    """I(input ; output) in bits under the joint of prior and encoder."""
    if prior.space != encoder.source:
        raise _mismatch("mutual_information", encoder.source, prior.space)
    jm = encoder.matrix * prior.mass[None, :]
    pz = jm.sum(axis=1)
    ref = pz[:, None] * prior.mass[None, :]
    return float((xlogy(jm, jm).sum() - xlogy(jm, ref).sum()) / _LN2)


def kl_divergence_bits(p: np.ndarray, q: np.ndarray) -> float:
    """KL(p || q) in bits; +inf when p puts mass where q has none."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    support = p > 0
    if np.any(q[support] <= 0):
        return math.inf
    ps = p[support]
    return float(np.sum(ps * np.log2(ps / q[support])))
