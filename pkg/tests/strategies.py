"""Shared hypothesis strategies for small spaces, distributions and kernels."""

import numpy as np
from hypothesis import strategies as st

from finexp.decisions import LossMatrix
from finexp.kernels import Distribution, FiniteSpace, MarkovKernel

sizes = st.integers(min_value=1, max_value=5)
sizes2 = st.integers(min_value=2, max_value=5)

# entries bounded away from zero keep normalization well conditioned
_weight = st.floats(min_value=0.01, max_value=1.0)


def spaces(prefix="x", min_size=1, max_size=5):
    return st.integers(min_size, max_size).map(lambda n: FiniteSpace.of_size(n, prefix))


@st.composite
def distributions(draw, space=None, prefix="x"):
    if space is None:
        space = draw(spaces(prefix))
    w = np.array(draw(st.lists(_weight, min_size=space.size, max_size=space.size)))
    return Distribution(space, w / w.sum())


@st.composite
def kernels(draw, source=None, target=None, source_prefix="x", target_prefix="y"):
    if source is None:
        source = draw(spaces(source_prefix))
    if target is None:
        target = draw(spaces(target_prefix))
    w = np.array(
        draw(
            st.lists(
                st.lists(_weight, min_size=target.size, max_size=target.size),
                min_size=source.size,
                max_size=source.size,
            )
        )
    ).T
    return MarkovKernel(source, target, w / w.sum(axis=0))


@st.composite
def losses(draw, theta=None, actions=None):
    if theta is None:
        theta = draw(spaces("t"))
    if actions is None:
        actions = draw(spaces("a", min_size=2))
    entry = st.floats(min_value=-1.0, max_value=1.0)
    v = np.array(
        draw(
            st.lists(
                st.lists(entry, min_size=actions.size, max_size=actions.size),
                min_size=theta.size,
                max_size=theta.size,
            )
        )
    )
    return LossMatrix(theta, actions, v)


@st.composite
def kernel_chains(draw, length=2):
    """Conformable chain k1: S0 -> S1, k2: S1 -> S2, ..."""
    chain_spaces = [draw(spaces(f"s{i}_")) for i in range(length + 1)]
    return tuple(
        draw(kernels(source=chain_spaces[i], target=chain_spaces[i + 1]))
        for i in range(length)
    )


@st.composite
def experiments(draw, max_size=5):
    """(prior, experiment) sharing a hypothesis space."""
    theta = draw(spaces("t", min_size=2, max_size=max_size))
    prior = draw(distributions(space=theta))
    data = draw(spaces("x", min_size=2, max_size=max_size))
    return prior, draw(kernels(source=theta, target=data))
