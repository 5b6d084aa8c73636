"""Deficiency distances between experiments, solved as exact linear programs.

How far one experiment is from simulating another: the prior-weighted
directed deficiency is the smallest average l1 error achievable by
post-processing, the directed deficiency takes the worst case over
hypotheses (equivalently, the supremum over priors), and the weighted
deficiency symmetrizes.  Every solve returns the optimizing post-processing
kernel as a feasibility witness together with a residual certificate.

The optimization is a plain dense LP.  With the witness V (columns are
output distributions per observed symbol) and slack s bounding the absolute
residuals entrywise, the weighted program is

    min  sum_{y,theta} prior(theta) * s[y,theta]
    s.t. -s <= U - V T <= s,  columns of V sum to 1,  V, s >= 0

and the worst-case program replaces the objective by a single bound t on
every per-hypothesis residual sum.  Problem sizes here are desk scale, so
the dense formulation is deliberate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .kernels import Distribution, FiniteSpace, MarkovKernel, _mismatch


@dataclass(frozen=True, eq=False)
class DeficiencyResult:
    """Optimal value, the kernel attaining it, and a residual certificate."""

    delta: float
    witness: MarkovKernel
    objective_gap: float


@dataclass(frozen=True, eq=False)
class FactorResult:
    """Outcome of an exact-factorization test at a tolerance."""

    factors: bool
    delta: float
    witness: MarkovKernel | None


def weighted_objective(
    first: MarkovKernel, second: MarkovKernel, prior: Distribution, v: MarkovKernel
) -> float:
    """Prior-averaged l1 residual of approximating ``second`` by ``v . first``."""
    resid = second.matrix - v.matrix @ first.matrix
    return float(prior.mass @ np.abs(resid).sum(axis=0))


def worst_case_objective(first: MarkovKernel, second: MarkovKernel, v: MarkovKernel) -> float:
    """Largest per-hypothesis l1 residual of approximating ``second`` by ``v . first``."""
    resid = second.matrix - v.matrix @ first.matrix
    return float(np.abs(resid).sum(axis=0).max())


def _check_pair(first: MarkovKernel, second: MarkovKernel) -> None:
    if first.source != second.source:
        raise _mismatch("deficiency: experiments must share hypotheses", first.source, second.source)


def _solve(c, a_ub, b_ub, a_eq, b_eq):
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        # the feasible set is a nonempty polytope by construction, so any
        # failure is a solver defect rather than a modeling outcome
        raise RuntimeError(f"internal LP failure (status {res.status}): {res.message}")
    return res


def _witness_kernel(raw: np.ndarray, source: FiniteSpace, target: FiniteSpace) -> MarkovKernel:
    v = np.clip(raw, 0.0, None)
    sums = v.sum(axis=0)
    dead = sums <= 0
    if np.any(dead):
        v[:, dead] = 1.0 / target.size
        sums = v.sum(axis=0)
    return MarkovKernel(source, target, v / sums)


def _residual_blocks(first: MarkovKernel, second: MarkovKernel):
    """Inequality rows enforcing -s <= U - V T <= s, in (v, s) variable order."""
    ny = second.target.size
    ns = ny * first.source.size
    block = np.kron(np.eye(ny), first.matrix.T)
    eye_s = np.eye(ns)
    a = np.block([[-block, -eye_s], [block, -eye_s]])
    u_flat = second.matrix.reshape(-1)
    b = np.concatenate([-u_flat, u_flat])
    return a, b


def _column_sum_rows(nx: int, ny: int, extra: int):
    a = np.hstack([np.kron(np.ones((1, ny)), np.eye(nx)), np.zeros((nx, extra))])
    return a, np.ones(nx)


def weighted_directed_deficiency(
    first: MarkovKernel, second: MarkovKernel, prior: Distribution
) -> DeficiencyResult:
    """Smallest prior-averaged l1 error in simulating ``second`` from ``first``.

    Hypotheses carrying zero prior mass simply drop out of the objective.
    """
    _check_pair(first, second)
    if prior.space != first.source:
        raise _mismatch("deficiency: prior", first.source, prior.space)
    nx, ny, nt = first.target.size, second.target.size, first.source.size
    nv, ns = ny * nx, ny * nt

    a_ub, b_ub = _residual_blocks(first, second)
    a_eq, b_eq = _column_sum_rows(nx, ny, ns)
    c = np.concatenate([np.zeros(nv), np.tile(prior.mass, ny)])

    res = _solve(c, a_ub, b_ub, a_eq, b_eq)
    witness = _witness_kernel(res.x[:nv].reshape(ny, nx), first.target, second.target)
    delta = max(0.0, float(res.fun))
    gap = abs(weighted_objective(first, second, prior, witness) - delta)
    return DeficiencyResult(delta=delta, witness=witness, objective_gap=gap)


def directed_deficiency(first: MarkovKernel, second: MarkovKernel) -> DeficiencyResult:
    """Worst case over hypotheses (equivalently priors) of the simulation error."""
    _check_pair(first, second)
    nx, ny, nt = first.target.size, second.target.size, first.source.size
    nv, ns = ny * nx, ny * nt

    a_res, b_res = _residual_blocks(first, second)
    # per-hypothesis residual sums bounded by the single variable t
    a_top = np.hstack([np.zeros((nt, nv)), np.kron(np.ones((1, ny)), np.eye(nt)), -np.ones((nt, 1))])
    a_ub = np.vstack([np.hstack([a_res, np.zeros((a_res.shape[0], 1))]), a_top])
    b_ub = np.concatenate([b_res, np.zeros(nt)])
    a_eq, b_eq = _column_sum_rows(nx, ny, ns + 1)
    c = np.concatenate([np.zeros(nv + ns), [1.0]])

    res = _solve(c, a_ub, b_ub, a_eq, b_eq)
    witness = _witness_kernel(res.x[:nv].reshape(ny, nx), first.target, second.target)
    delta = max(0.0, float(res.fun))
    gap = abs(worst_case_objective(first, second, witness) - delta)
    return DeficiencyResult(delta=delta, witness=witness, objective_gap=gap)


def weighted_deficiency(first: MarkovKernel, second: MarkovKernel, prior: Distribution) -> float:
    """Symmetrized weighted deficiency: max of the two directed solves."""
    d12 = weighted_directed_deficiency(first, second, prior).delta
    d21 = weighted_directed_deficiency(second, first, prior).delta
    return max(d12, d21)


def factors_through(
    first: MarkovKernel,
    second: MarkovKernel,
    prior: Distribution,
    tol: float = 1e-6,
) -> FactorResult:
    """Does ``second`` equal some post-processing of ``first``?

    Needs a strictly positive prior: a zero-mass hypothesis would let the
    test ignore mismatches on it.
    """
    if np.any(prior.mass <= 0):
        raise ValueError("factors_through needs a strictly positive prior")
    res = weighted_directed_deficiency(first, second, prior)
    ok = res.delta <= tol
    return FactorResult(factors=ok, delta=res.delta, witness=res.witness if ok else None)
