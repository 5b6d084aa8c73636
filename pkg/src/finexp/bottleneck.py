"""Supervised feature learning by alternating minimization.

The objective splits the value lost to encoding into a sum of regrets
between posteriors and per-code centroid posteriors, plus an optional
mutual-information penalty scaled by beta.  Each coordinate update has a
closed-form minimizer: centroids move to posterior means, the reference
code prior moves to the encoder's marginal, and encoder columns follow a
Gibbs rule (a hard argmin assignment in the beta = 0 limit).  Every update
weakly decreases the objective, so traces are non-increasing and the
beta = 0 dynamics terminate at a finite fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .decisions import LossMatrix
from .kernels import (
    Distribution,
    FiniteSpace,
    MarkovKernel,
    bayes_inverse,
    pushforward,
)

_CONVERGENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class IBState:
    """Encoder, per-code centroid posteriors, reference code prior and trace."""

    encoder: MarkovKernel
    centroid_posteriors: MarkovKernel
    latent_prior: Distribution
    beta: float
    objective_trace: tuple[float, ...] = ()


def _regret_table(loss: LossMatrix, posteriors: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Regret of acting for centroid z when the truth follows posterior x; shape [x, z]."""
    exp_post = posteriors.T @ loss.values
    acts = np.argmin(centroids.T @ loss.values, axis=1)
    return exp_post[:, acts] - exp_post.min(axis=1)[:, None]


def _problem_views(loss, prior, experiment):
    posts = bayes_inverse(experiment, prior)
    px = pushforward(experiment, prior)
    return posts, px


def ib_distortion(state: IBState, loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> float:
    """The regret part of the objective (the value lost to encoding at a fixed point)."""
    posts, px = _problem_views(loss, prior, experiment)
    table = _regret_table(loss, posts.matrix, state.centroid_posteriors.matrix)
    return float(np.einsum("x,zx,xz->", px.mass, state.encoder.matrix, table))


def _kl_nats(p: np.ndarray, q: np.ndarray) -> float:
    """KL(p || q) in nats; +inf when p puts mass where q has none.

    Natural log keeps the Gibbs encoder update the exact minimizer of the
    penalized column subproblem (the entropy utilities report bits, but the
    objective must match its own coordinate updates).
    """
    support = p > 0
    if np.any(q[support] <= 0):
        return math.inf
    ps = p[support]
    return float(np.sum(ps * np.log(ps / q[support])))


def ib_objective(state: IBState, loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> float:
    """Regret term plus beta times the KL penalty; +inf on an infeasible reference prior."""
    distortion = ib_distortion(state, loss, prior, experiment)
    if state.beta == 0:
        return distortion
    px = pushforward(experiment, prior)
    penalty = 0.0
    for x in np.flatnonzero(px.mass > 0):
        kl = _kl_nats(state.encoder.matrix[:, x], state.latent_prior.mass)
        if math.isinf(kl):
            return math.inf
        penalty += px.mass[x] * kl
    return distortion + state.beta * penalty


def _centroids(
    loss: LossMatrix,
    posts: MarkovKernel,
    px: Distribution,
    encoder: MarkovKernel,
) -> MarkovKernel:
    """Posterior-mean centroid per code; dead codes reseed to the worst-served input.

    A code with zero marginal mass contributes nothing to the objective, so
    its centroid is free; parking it on the posterior of the input farthest
    (in regret) from the live centroids gives the next assignment step an
    escape from poor local optima.
    """
    enc_inv = bayes_inverse(encoder, px)
    centroids = posts.matrix @ enc_inv.matrix
    dead = enc_inv.filled_columns
    if dead:
        live = [z for z in range(centroids.shape[1]) if z not in dead]
        table = _regret_table(loss, posts.matrix, centroids[:, live])
        score = px.mass * table.min(axis=1)
        for z in dead:
            worst = int(np.argmax(score))
            centroids[:, z] = posts.matrix[:, worst]
            score[worst] = -1.0
    return MarkovKernel(encoder.target, posts.target, centroids)


def centroid_step(state: IBState, loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> IBState:
    posts, px = _problem_views(loss, prior, experiment)
    return replace(state, centroid_posteriors=_centroids(loss, posts, px, state.encoder))


def latent_prior_step(state: IBState, loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> IBState:
    px = pushforward(experiment, prior)
    return replace(state, latent_prior=pushforward(state.encoder, px))


def encoder_step(state: IBState, loss: LossMatrix, prior: Distribution, experiment: MarkovKernel) -> IBState:
    posts, px = _problem_views(loss, prior, experiment)
    table = _regret_table(loss, posts.matrix, state.centroid_posteriors.matrix)
    k = state.centroid_posteriors.source.size
    if state.beta == 0:
        assign = np.argmin(table, axis=1)
        enc = np.zeros((k, px.space.size))
        enc[assign, np.arange(px.space.size)] = 1.0
    else:
        with np.errstate(divide="ignore"):
            logw = np.log(state.latent_prior.mass)[None, :] - table / state.beta
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        enc = (w / w.sum(axis=1, keepdims=True)).T
    return replace(state, encoder=MarkovKernel(px.space, state.encoder.target, enc))


def _seed_assignment(
    loss: LossMatrix, posts: np.ndarray, px: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Farthest-point seeding over posterior columns under regret.

    Greedily picks code representatives until every supported input sits at
    zero regret from some seed or k seeds exist, then assigns each input to
    its nearest seed.  With k at least the number of distinct posteriors
    this starts the beta = 0 dynamics at zero distortion.
    """
    support = np.flatnonzero(px > 0)
    seeds = [int(rng.choice(support))]
    while len(seeds) < k:
        table = _regret_table(loss, posts, posts[:, seeds])
        nearest = table[support].min(axis=1)
        if nearest.max() <= 1e-15:
            break
        seeds.append(int(support[np.argmax(nearest)]))
    table = _regret_table(loss, posts, posts[:, seeds])
    return np.argmin(table, axis=1)


def ib_learn(
    loss: LossMatrix,
    prior: Distribution,
    experiment: MarkovKernel,
    latent_size: int,
    beta: float = 0.0,
    max_iters: int = 200,
    seed: int = 0,
) -> IBState:
    """Alternate centroid, reference-prior and encoder updates until the objective stalls."""
    if latent_size < 1:
        raise ValueError("latent_size must be at least 1")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    rng = np.random.default_rng(seed)
    posts, px = _problem_views(loss, prior, experiment)
    latent = FiniteSpace.of_size(latent_size, prefix="z")

    assign = _seed_assignment(loss, posts.matrix, px.mass, latent_size, rng)
    enc = np.zeros((latent_size, px.space.size))
    enc[assign, np.arange(px.space.size)] = 1.0
    encoder = MarkovKernel(px.space, latent, enc)

    state = IBState(
        encoder=encoder,
        centroid_posteriors=_centroids(loss, posts, px, encoder),
        latent_prior=pushforward(encoder, px),
        beta=float(beta),
    )
    trace = [ib_objective(state, loss, prior, experiment)]
    for _ in range(max_iters):
        state = centroid_step(state, loss, prior, experiment)
        state = latent_prior_step(state, loss, prior, experiment)
        state = encoder_step(state, loss, prior, experiment)
        trace.append(ib_objective(state, loss, prior, experiment))
        if trace[-2] - trace[-1] < _CONVERGENCE_TOL:
            break
    return replace(state, objective_trace=tuple(trace))
