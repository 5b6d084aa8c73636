"""Seeded property suites exercising the toolkit's guarantees end to end.

Each suite draws random instances from a seeded generator and emits one or
more named checks per trial.  A check records a violation amount and the
tolerance it is judged against: violation <= tolerance passes, and the
reported slack is tolerance minus violation (so the worst slack across a
suite is its distance from failing).  Identical arguments always reproduce
identical reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .bottleneck import ib_distortion, ib_learn
from .decisions import feature_gap, regret, value
from .deficiency import weighted_deficiency, weighted_directed_deficiency
from .kernels import FiniteSpace, bayes_inverse, compose, identity, pushforward
from .reconstruction import autoencode, generic_quality, hellman_raviv_check, stack
from .sampling import random_distribution, random_kernel, random_loss


class Check(NamedTuple):
    name: str
    violation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violation <= self.tolerance

    @property
    def slack(self) -> float:
        return self.tolerance - self.violation


@dataclass
class SuiteReport:
    suite: str
    trials: int
    checks: int
    failures: int
    worst_slack: float
    worst_check: str

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_jsonable(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "checks": self.checks,
            "passes": self.checks - self.failures,
            "failures": self.failures,
            "worst_slack": float(self.worst_slack),
            "worst_check": self.worst_check,
            "passed": self.passed,
        }


def _space_sizes(rng: np.random.Generator, max_dim: int, n: int, low: int = 2) -> list[int]:
    hi = max(low, max_dim)
    return [int(rng.integers(low, hi + 1)) for _ in range(n)]


def _problem(rng, max_dim, n_outputs=1):
    """Random hypotheses, prior, and experiments into fresh output spaces."""
    sizes = _space_sizes(rng, max_dim, 1 + n_outputs)
    theta = FiniteSpace.of_size(sizes[0], "t")
    prior = random_distribution(rng, theta)
    outs = []
    for i, size in enumerate(sizes[1:]):
        space = FiniteSpace.of_size(size, f"o{i}_")
        outs.append(random_kernel(rng, theta, space))
    return theta, prior, outs


def _batch_values(joint: np.ndarray, losses: np.ndarray) -> np.ndarray:
    """Value of one experiment under a batch of losses; losses shaped [n, theta, action]."""
    return np.einsum("xt,nta->nxa", joint, losses).min(axis=2).sum(axis=1)


def suite_randomization(rng, trials, max_dim) -> Iterable[Check]:
    """Simulation error bounds the value advantage, loss by loss."""
    for i in range(trials):
        theta, prior, (t_exp, u_exp) = _problem(rng, max_dim, 2)
        actions = FiniteSpace.of_size(int(rng.integers(2, max(3, max_dim) + 1)), "a")
        loss = random_loss(rng, theta, actions)
        delta = weighted_directed_deficiency(t_exp, u_exp, prior).delta
        lhs = value(loss, prior, t_exp)
        rhs = value(loss, prior, u_exp) + delta * loss.sup_norm
        yield Check(f"trial{i}", lhs - rhs, 1e-6)


def suite_value_gap_bound(rng, trials, max_dim, losses_per_trial: int = 500) -> Iterable[Check]:
    """Sampled normalized value gaps never exceed the symmetric deficiency."""
    for i in range(trials):
        theta, prior, (t_exp, u_exp) = _problem(rng, max_dim, 2)
        delta = weighted_deficiency(t_exp, u_exp, prior)
        na = int(rng.integers(2, max(3, max_dim) + 1))
        losses = rng.uniform(-1.0, 1.0, size=(losses_per_trial, theta.size, na))
        norms = np.abs(losses).max(axis=(1, 2))
        jt = t_exp.matrix * prior.mass[None, :]
        ju = u_exp.matrix * prior.mass[None, :]
        ratios = np.abs(_batch_values(jt, losses) - _batch_values(ju, losses)) / norms
        yield Check(f"trial{i}", float(ratios.max()) - delta, 1e-6)


def suite_binary_cost_sweep(rng, trials, max_dim, grid_points: int = 200) -> Iterable[Check]:
    """On binary hypotheses a cost-sweep of two-action losses nearly attains the deficiency.

    The sweep uses per-hypothesis-centered costs: recentering rows changes
    no value difference but halves the sup-norm, and without it the sampled
    supremum cannot approach the deficiency at all.
    """
    grid = np.linspace(1.0 / (grid_points + 1), grid_points / (grid_points + 1), grid_points)
    cost_cols = np.stack([grid, -(1.0 - grid)], axis=1)  # action-one column per grid point
    norms = np.maximum(grid, 1.0 - grid)
    for i in range(trials):
        theta = FiniteSpace.of_size(2, "t")
        prior = random_distribution(rng, theta)
        hi = min(max_dim, 4)
        t_exp = random_kernel(rng, theta, FiniteSpace.of_size(int(rng.integers(2, hi + 1)), "x"))
        u_exp = random_kernel(rng, theta, FiniteSpace.of_size(int(rng.integers(2, hi + 1)), "y"))
        delta = weighted_deficiency(t_exp, u_exp, prior)
        jt = t_exp.matrix * prior.mass[None, :]
        ju = u_exp.matrix * prior.mass[None, :]
        # two centered actions means the per-symbol minimum is -|.|
        vt = np.minimum(jt @ cost_cols.T, -(jt @ cost_cols.T)).sum(axis=0)
        vu = np.minimum(ju @ cost_cols.T, -(ju @ cost_cols.T)).sum(axis=0)
        sampled = float((np.abs(vt - vu) / norms).max())
        yield Check(f"trial{i}", delta - sampled, 0.05)


def suite_encoder_shift_bound(rng, trials, max_dim) -> Iterable[Check]:
    """Encoding an experiment moves it by at most the encoder's reconstruction quality."""
    for i in range(trials):
        theta, prior, (t_exp,) = _problem(rng, max_dim, 1)
        code = FiniteSpace.of_size(int(rng.integers(2, max_dim + 1)), "z")
        encoder = random_kernel(rng, t_exp.target, code)
        lhs = weighted_deficiency(t_exp, compose(encoder, t_exp), prior)
        rhs = generic_quality(encoder, pushforward(t_exp, prior))
        yield Check(f"trial{i}", lhs - rhs, 1e-6)


def suite_quality_certificate(rng, trials, max_dim, problems_per_encoder: int = 100) -> Iterable[Check]:
    """Reconstruction quality certifies the feature gap for every consistent problem.

    Each trial fixes one encoder and pits a batch of consistent problems
    against it (the data prior, and with it the quality, follows from each
    problem's experiment and prior); the LP cross-check runs once per trial.
    """
    for i in range(trials):
        x_space = FiniteSpace.of_size(int(rng.integers(2, max_dim + 1)), "x")
        code = FiniteSpace.of_size(int(rng.integers(2, max_dim + 1)), "z")
        encoder = random_kernel(rng, x_space, code)
        worst = -np.inf
        data_prior = None
        eps = 0.0
        for _ in range(problems_per_encoder):
            theta = FiniteSpace.of_size(int(rng.integers(2, max_dim + 1)), "t")
            prior = random_distribution(rng, theta)
            t_exp = random_kernel(rng, theta, x_space)
            data_prior = pushforward(t_exp, prior)
            eps = generic_quality(encoder, data_prior)
            actions = FiniteSpace.of_size(int(rng.integers(2, max(3, max_dim) + 1)), "a")
            loss = random_loss(rng, theta, actions)
            gap = feature_gap(loss, prior, t_exp, encoder)
            worst = max(worst, gap - eps * loss.sup_norm)
        yield Check(f"trial{i}_bound", worst, 1e-6)
        lp = weighted_directed_deficiency(encoder, identity(x_space), data_prior).delta
        yield Check(f"trial{i}_lp_match", abs(eps - lp), 1e-6)


def suite_stacking(rng, trials, max_dim) -> Iterable[Check]:
    """Composed reconstruction quality is bounded by the sum over layers."""
    for i in range(trials):
        n = int(rng.integers(3, max_dim + 1))
        prior = random_distribution(rng, FiniteSpace.of_size(n, "x"))
        k1 = int(rng.integers(2, n + 1))
        k2 = int(rng.integers(1, k1 + 1))
        chain = stack(prior, [k1, k2], restarts=8, seed=int(rng.integers(0, 2**31 - 1)))
        yield Check(f"trial{i}", chain.total_quality - sum(chain.layer_quality), 1e-6)


def suite_triangle(rng, trials, max_dim) -> Iterable[Check]:
    """The symmetric deficiency is a metric: triangle inequality and zero self-distance."""
    for i in range(trials):
        theta, prior, (t1, t2, t3) = _problem(rng, max_dim, 3)
        d12 = weighted_deficiency(t1, t2, prior)
        d23 = weighted_deficiency(t2, t3, prior)
        d13 = weighted_deficiency(t1, t3, prior)
        yield Check(f"trial{i}_triangle", d13 - (d12 + d23), 1e-6)
        yield Check(f"trial{i}_self", weighted_directed_deficiency(t1, t1, prior).delta, 1e-7)


def suite_gap_regret_identity(rng, trials, max_dim) -> Iterable[Check]:
    """The feature gap equals the double expectation of posterior regrets.

    The right-hand side is summed term by term with the scalar regret
    helper, independent of the vectorized paths.
    """
    for i in range(trials):
        theta, prior, (t_exp,) = _problem(rng, max_dim, 1)
        code = FiniteSpace.of_size(int(rng.integers(2, max_dim + 1)), "z")
        encoder = random_kernel(rng, t_exp.target, code)
        actions = FiniteSpace.of_size(int(rng.integers(2, max(3, max_dim) + 1)), "a")
        loss = random_loss(rng, theta, actions)

        lhs = feature_gap(loss, prior, t_exp, encoder)
        posts = bayes_inverse(t_exp, prior)
        coarse = bayes_inverse(compose(encoder, t_exp), prior)
        data_prior = pushforward(t_exp, prior)
        rhs = 0.0
        for x in range(t_exp.target.size):
            for z in range(code.size):
                w = data_prior.mass[x] * encoder.matrix[z, x]
                if w > 0:
                    rhs += w * regret(loss, posts.column(x), coarse.column(z))
        yield Check(f"trial{i}", abs(lhs - rhs), 1e-9)


def suite_ib(rng, trials, max_dim) -> Iterable[Check]:
    """Alternating minimization: monotone traces, and zero residual gap when codes suffice."""
    for i in range(trials):
        theta, prior, (t_exp,) = _problem(rng, max_dim, 1)
        actions = FiniteSpace.of_size(int(rng.integers(2, max(3, max_dim) + 1)), "a")
        loss = random_loss(rng, theta, actions)
        seed = int(rng.integers(0, 2**31 - 1))

        hard = ib_learn(loss, prior, t_exp, latent_size=t_exp.target.size, beta=0.0, seed=seed)
        steps = np.diff(np.array(hard.objective_trace))
        yield Check(f"trial{i}_monotone0", float(steps.max(initial=0.0)), 1e-9)
        yield Check(f"trial{i}_gap", ib_distortion(hard, loss, prior, t_exp), 1e-9)

        beta = float(10.0 ** rng.uniform(-2, 1))
        soft = ib_learn(loss, prior, t_exp, latent_size=2, beta=beta, seed=seed)
        steps = np.diff(np.array(soft.objective_trace))
        yield Check(f"trial{i}_monotone_beta", float(steps.max(initial=0.0)), 1e-9)


def suite_hellman_raviv(rng, trials, max_dim) -> Iterable[Check]:
    """Reconstruction quality never beats its conditional-entropy bound."""
    for i in range(trials):
        n = int(rng.integers(2, max_dim + 1))
        nz = int(rng.integers(1, max_dim + 1))
        prior = random_distribution(rng, FiniteSpace.of_size(n, "x"))
        encoder = random_kernel(rng, prior.space, FiniteSpace.of_size(nz, "z"))
        eps, h_bits, _ = hellman_raviv_check(encoder, prior)
        yield Check(f"trial{i}", eps - h_bits, 1e-9)


def suite_oracle_value(rng, trials, max_dim) -> Iterable[Check]:
    """Value agrees with brute force over every deterministic decision rule."""
    hi = min(max_dim, 4)
    for i in range(trials):
        nt = int(rng.integers(2, hi + 1))
        nx = int(rng.integers(2, hi + 1))
        na = int(rng.integers(2, hi + 1))
        theta = FiniteSpace.of_size(nt, "t")
        x_space = FiniteSpace.of_size(nx, "x")
        actions = FiniteSpace.of_size(na, "a")
        t_exp = random_kernel(rng, theta, x_space)
        prior = random_distribution(rng, theta)
        loss = random_loss(rng, theta, actions)

        best = np.inf
        for rule in itertools.product(range(na), repeat=nx):
            risk = 0.0
            for th in range(nt):
                for x in range(nx):
                    risk += prior.mass[th] * t_exp.matrix[x, th] * loss.values[th, rule[x]]
            best = min(best, risk)
        yield Check(f"trial{i}", abs(value(loss, prior, t_exp) - best), 1e-9)


def suite_oracle_generic(rng, trials, max_dim) -> Iterable[Check]:
    """The closed-form reconstruction quality matches the LP deficiency."""
    for i in range(trials):
        n = int(rng.integers(2, max_dim + 1))
        nz = int(rng.integers(1, max_dim + 1))
        prior = random_distribution(rng, FiniteSpace.of_size(n, "x"))
        encoder = random_kernel(rng, prior.space, FiniteSpace.of_size(nz, "z"))
        lp = weighted_directed_deficiency(encoder, identity(prior.space), prior).delta
        yield Check(f"trial{i}", abs(generic_quality(encoder, prior) - lp), 1e-6)


def suite_oracle_autoencode(rng, trials, max_dim) -> Iterable[Check]:
    """Restarted alternation versus exhaustive search over encoder/decoder pairs.

    Per trial the learner must never beat the true optimum; across the
    suite it must hit the optimum in at least 95 percent of runs.
    """
    hits = 0
    for i in range(trials):
        n = int(rng.integers(2, min(max_dim, 5) + 1))
        k = int(rng.integers(1, min(3, n) + 1))
        prior = random_distribution(rng, FiniteSpace.of_size(n, "x"))

        decoders = np.array(list(itertools.product(range(n), repeat=k)))
        arange = np.arange(n)
        best_prob = 0.0
        for f in itertools.product(range(k), repeat=n):
            decoded = decoders[:, list(f)]
            best_prob = max(best_prob, float(((decoded == arange) * prior.mass).sum(axis=1).max()))
        eps_opt = 2.0 * (1.0 - best_prob)

        run = autoencode(prior, k, restarts=16, seed=int(rng.integers(0, 2**31 - 1)))
        yield Check(f"trial{i}_never_better", eps_opt - run.epsilon, 1e-9)
        if run.epsilon <= eps_opt + 1e-9:
            hits += 1
    yield Check("exact_rate", 0.95 - hits / trials, 0.0)


SUITES: dict[str, Callable] = {
    "randomization": suite_randomization,
    "value_gap_bound": suite_value_gap_bound,
    "binary_cost_sweep": suite_binary_cost_sweep,
    "encoder_shift_bound": suite_encoder_shift_bound,
    "quality_certificate": suite_quality_certificate,
    "stacking": suite_stacking,
    "triangle": suite_triangle,
    "gap_regret_identity": suite_gap_regret_identity,
    "ib": suite_ib,
    "hellman_raviv": suite_hellman_raviv,
    "oracle_value": suite_oracle_value,
    "oracle_generic": suite_oracle_generic,
    "oracle_autoencode": suite_oracle_autoencode,
}

_SUITE_SALT = {name: i for i, name in enumerate(SUITES)}


def run_suite(name: str, trials: int = 100, seed: int = 0, max_dim: int = 6) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng([seed, _SUITE_SALT[name]])
    checks = list(SUITES[name](rng, trials, max_dim))
    failures = sum(not c.passed for c in checks)
    worst = min(checks, key=lambda c: c.slack)
    return SuiteReport(
        suite=name,
        trials=trials,
        checks=len(checks),
        failures=failures,
        worst_slack=worst.slack,
        worst_check=worst.name,
    )


def run_all(trials: int = 100, seed: int = 0, max_dim: int = 6) -> list[SuiteReport]:
    return [run_suite(name, trials=trials, seed=seed, max_dim=max_dim) for name in SUITES]
