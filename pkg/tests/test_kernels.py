import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finexp.kernels import (
    Distribution,
    FiniteSpace,
    JointDistribution,
    MarkovKernel,
    POINT,
    SpaceMismatchError,
    bayes_inverse,
    compose,
    deterministic,
    identity,
    joint,
    point_mass,
    pushforward,
    uniform,
    uninformative,
    variational_divergence,
)

import strategies as strat


def bsc(p):
    theta = FiniteSpace.of_size(2, "t")
    out = FiniteSpace.of_size(2, "x")
    return MarkovKernel(theta, out, [[1 - p, p], [p, 1 - p]])


class TestConstruction:
    def test_space_needs_distinct_labels(self):
        with pytest.raises(ValueError, match="distinct"):
            FiniteSpace(("a", "a"))
        with pytest.raises(ValueError):
            FiniteSpace(())

    def test_distribution_rejects_bad_sum(self):
        x = FiniteSpace.of_size(2)
        with pytest.raises(ValueError, match="sums to"):
            Distribution(x, [0.5, 0.4])

    def test_distribution_rejects_negative(self):
        x = FiniteSpace.of_size(2)
        with pytest.raises(ValueError, match="negative"):
            Distribution(x, [1.1, -0.1])

    def test_distribution_renormalizes_tiny_drift(self):
        x = FiniteSpace.of_size(2)
        d = Distribution(x, [0.5 + 3e-10, 0.5])
        assert d.mass.sum() == pytest.approx(1.0, abs=1e-12)

    def test_kernel_rejects_bad_column(self):
        x = FiniteSpace.of_size(2)
        with pytest.raises(ValueError, match="column 1"):
            MarkovKernel(x, x, [[1.0, 0.3], [0.0, 0.6]])

    def test_kernel_shape_checked(self):
        x = FiniteSpace.of_size(2)
        y = FiniteSpace.of_size(3)
        with pytest.raises(ValueError, match="shape"):
            MarkovKernel(x, y, np.eye(2))

    def test_immutability(self):
        d = uniform(FiniteSpace.of_size(3))
        with pytest.raises(ValueError):
            d.mass[0] = 0.9

    def test_joint_total_mass_checked(self):
        x = FiniteSpace.of_size(2)
        with pytest.raises(ValueError, match="sums to"):
            JointDistribution((x, x), [[0.5, 0.1], [0.1, 0.1]])


class TestCompose:
    def test_identity_is_neutral(self):
        t = bsc(0.1)
        out = compose(identity(t.target), t)
        np.testing.assert_allclose(out.matrix, t.matrix)

    def test_uninformative_absorbs(self):
        t = bsc(0.2)
        out = compose(uninformative(t.target), t)
        np.testing.assert_allclose(out.matrix, uninformative(t.source).matrix)
        assert out.target == POINT

    def test_swap_times_channel(self):
        # hand multiplication: [[0,1],[1,0]] @ [[0.9,0.2],[0.1,0.8]]
        x = FiniteSpace.of_size(2)
        swap = MarkovKernel(x, x, [[0, 1], [1, 0]])
        chan = MarkovKernel(x, x, [[0.9, 0.2], [0.1, 0.8]])
        np.testing.assert_allclose(compose(swap, chan).matrix, [[0.1, 0.8], [0.9, 0.2]])

    def test_mismatch_names_both_spaces(self):
        t = bsc(0.1)
        other = identity(FiniteSpace.of_size(3, "z"))
        with pytest.raises(SpaceMismatchError, match="z0"):
            compose(other, t)

    @settings(max_examples=60)
    @given(strat.kernel_chains(length=3))
    def test_associative(self, chain):
        k1, k2, k3 = chain
        left = compose(compose(k3, k2), k1)
        right = compose(k3, compose(k2, k1))
        np.testing.assert_allclose(left.matrix, right.matrix, atol=1e-12)


class TestPushforward:
    def test_identity(self):
        pi = Distribution(FiniteSpace.of_size(2), [0.3, 0.7])
        np.testing.assert_allclose(pushforward(identity(pi.space), pi).mass, pi.mass)

    def test_bsc_uniform_stays_uniform(self):
        t = bsc(0.1)
        out = pushforward(t, uniform(t.source))
        np.testing.assert_allclose(out.mass, [0.5, 0.5])

    def test_uninformative_gives_point(self):
        pi = Distribution(FiniteSpace.of_size(3), [0.2, 0.5, 0.3])
        out = pushforward(uninformative(pi.space), pi)
        np.testing.assert_allclose(out.mass, [1.0])

    @settings(max_examples=60)
    @given(st.data())
    def test_functorial(self, data):
        k1, k2 = data.draw(strat.kernel_chains(length=2))
        pi = data.draw(strat.distributions(space=k1.source))
        via_compose = pushforward(compose(k2, k1), pi)
        stepwise = pushforward(k2, pushforward(k1, pi))
        np.testing.assert_allclose(via_compose.mass, stepwise.mass, atol=1e-12)


class TestJoint:
    def test_identity_uniform_is_diagonal(self):
        x = FiniteSpace.of_size(2)
        j = joint(identity(x), uniform(x))
        np.testing.assert_allclose(j.matrix, np.diag([0.5, 0.5]))

    def test_bsc_table(self):
        j = joint(bsc(0.1), uniform(FiniteSpace.of_size(2, "t")))
        np.testing.assert_allclose(j.matrix, [[0.45, 0.05], [0.05, 0.45]])

    @settings(max_examples=60)
    @given(strat.experiments())
    def test_total_mass_one(self, pe):
        prior, exp = pe
        assert joint(exp, prior).matrix.sum() == pytest.approx(1.0, abs=1e-12)


class TestBayesInverse:
    def test_identity_uniform(self):
        x = FiniteSpace.of_size(2)
        inv = bayes_inverse(identity(x), uniform(x))
        np.testing.assert_allclose(inv.matrix, np.eye(2))
        assert inv.filled_columns == ()

    def test_symmetric_channel_is_self_inverse(self):
        t = bsc(0.1)
        inv = bayes_inverse(t, uniform(t.source))
        np.testing.assert_allclose(inv.matrix, t.matrix)

    def test_zero_marginal_column_flagged_uniform(self):
        theta = FiniteSpace.of_size(2, "t")
        x = FiniteSpace.of_size(3, "x")
        never = MarkovKernel(theta, x, [[0.5, 0.5], [0.5, 0.5], [0.0, 0.0]])
        inv = bayes_inverse(never, uniform(theta))
        assert inv.filled_columns == (2,)
        np.testing.assert_allclose(inv.matrix[:, 2], [0.5, 0.5])

    @settings(max_examples=80)
    @given(strat.experiments())
    def test_joint_consistency(self, pe):
        # reversing the kernel through the prior preserves the joint
        prior, exp = pe
        marginal = pushforward(exp, prior)
        forward = joint(exp, prior).matrix
        backward = joint(bayes_inverse(exp, prior), marginal).matrix
        np.testing.assert_allclose(backward, forward.T, atol=1e-9)


class TestVariationalDivergence:
    def test_self_distance_zero(self):
        p = Distribution(FiniteSpace.of_size(3), [0.2, 0.3, 0.5])
        assert variational_divergence(p, p) == 0.0

    def test_disjoint_supports(self):
        x = FiniteSpace.of_size(2)
        assert variational_divergence(point_mass(x, "x0"), point_mass(x, "x1")) == 2.0

    def test_hand_value(self):
        x = FiniteSpace.of_size(2)
        p = Distribution(x, [0.7, 0.3])
        q = Distribution(x, [0.4, 0.6])
        assert variational_divergence(p, q) == pytest.approx(0.6, abs=1e-15)

    @settings(max_examples=80)
    @given(st.data())
    def test_information_processing(self, data):
        k = data.draw(strat.kernels())
        p = data.draw(strat.distributions(space=k.source))
        q = data.draw(strat.distributions(space=k.source))
        before = variational_divergence(p, q)
        after = variational_divergence(pushforward(k, p), pushforward(k, q))
        assert after <= before + 1e-12

    @settings(max_examples=80)
    @given(st.data())
    def test_mixture_identity(self, data):
        # l1 distance of joints equals the prior-weighted average of column distances
        t = data.draw(strat.kernels())
        u = data.draw(strat.kernels(source=t.source, target=t.target))
        prior = data.draw(strat.distributions(space=t.source))
        lhs = np.abs(joint(t, prior).matrix - joint(u, prior).matrix).sum()
        rhs = sum(
            prior.mass[i] * variational_divergence(t.column(i), u.column(i))
            for i in range(t.source.size)
        )
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestDeterministic:
    def test_identity_matrix(self):
        x = FiniteSpace.of_size(3)
        np.testing.assert_allclose(identity(x).matrix, np.eye(3))

    def test_mod_two_map(self):
        src = FiniteSpace(("0", "1", "2", "3"))
        dst = FiniteSpace(("even", "odd"))
        k = deterministic(src, dst, lambda lab: "even" if int(lab) % 2 == 0 else "odd")
        np.testing.assert_allclose(k.matrix, [[1, 0, 1, 0], [0, 1, 0, 1]])

    def test_missing_image_rejected(self):
        src = FiniteSpace.of_size(2)
        dst = FiniteSpace.of_size(2, "y")
        with pytest.raises(ValueError, match="x1"):
            deterministic(src, dst, {"x0": "y0"})

    def test_image_outside_target_rejected(self):
        src = FiniteSpace.of_size(2)
        dst = FiniteSpace.of_size(2, "y")
        with pytest.raises(ValueError, match="not in space"):
            deterministic(src, dst, {"x0": "y0", "x1": "nope"})
