import numpy as np
import pytest

from normdescent.core.exceptions import ConfigError, InvalidArgumentError, SingularMatrixError
from normdescent.optimizers.adam import AdamState, adam_step, safe_ratio
from normdescent.optimizers.descent import orthogonalize, sign_descent_step, spectral_descent_step
from normdescent.optimizers.line_search import LineSearchState, escape_diagnostics, line_search_update
from normdescent.optimizers.prodigy import ProdigyState, prodigy_step, sign_prodigy_eta
from normdescent.optimizers.registry import OPTIMIZERS, build_optimizer
from normdescent.optimizers.shampoo import ShampooState, shampoo_step
from normdescent.schemas.experiment import OptimizerConfig
from normdescent.schemas.optimizers import (
    LineSearchAnchor,
    LineSearchPolicy,
    OptimizerName,
    OrthoBackend,
    ShampooMode,
    UpdateOrder,
)
from normdescent.schemas.polynomial import PolynomialSpec


def _prodigy_etas(order: UpdateOrder, steps: int, eta: float = 0.5):
    """Step sizes of sign-Prodigy on the 1-D loss with constant gradient 1."""
    w = [np.zeros((1, 1))]
    state = ProdigyState.start(w, eta=eta, beta1=0.0, beta2=0.0, epsilon=0.0, update_order=order)
    etas = [state.eta]
    for _ in range(steps):
        w = prodigy_step(state, w, [np.ones((1, 1))])
        etas.append(state.eta)
    return etas, w


class TestAdam:
    def test_zero_betas_give_sign_descent(self):
        state = AdamState.zeros([np.zeros((2, 1))], beta1=0.0, beta2=0.0, epsilon=0.0, lr=0.1)
        new_w = adam_step(state, [np.zeros((2, 1))], [np.array([[4.0], [-9.0]])])
        np.testing.assert_allclose(new_w[0], [[-0.1], [0.1]])

    @pytest.mark.parametrize("scale", [1e-170, 1.0, 1e150])
    def test_zero_betas_match_sign_descent_at_any_scale(self, rng, scale):
        w = [rng.standard_normal((3, 2))]
        g = [scale * rng.standard_normal((3, 2))]
        state = AdamState.zeros(w, beta1=0.0, beta2=0.0, epsilon=0.0, lr=0.1)
        np.testing.assert_array_equal(adam_step(state, w, g)[0], sign_descent_step(w, g, 0.1)[0])

    def test_zero_gradient_leaves_weights(self):
        w = [np.array([[1.0, 2.0]])]
        state = AdamState.zeros(w, beta1=0.0, beta2=0.0, epsilon=0.0)
        np.testing.assert_array_equal(adam_step(state, w, [np.zeros((1, 2))])[0], w[0])

    def test_bias_correction_on_constant_gradient(self):
        w = [np.zeros((1, 1))]
        state = AdamState.zeros(w, epsilon=0.0, lr=0.01, bias_correction=True)
        for _ in range(5):
            w = adam_step(state, w, [np.full((1, 1), 3.0)])
        assert float(w[0][0, 0]) == pytest.approx(-0.05, rel=1e-12)
        assert state.step_count == 5

    def test_safe_ratio(self):
        np.testing.assert_array_equal(safe_ratio(np.array([1.0, 2.0]), np.array([0.0, 4.0])), [0.0, 0.5])


class TestShampoo:
    def test_example_gradient(self):
        w = [np.zeros((2, 2))]
        state = ShampooState.zeros(w, lr=0.1)
        new_w = shampoo_step(state, w, [np.array([[0.0, 2.0], [1.0, 0.0]])])
        np.testing.assert_allclose(new_w[0], -0.1 * np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-10)

    def test_orthogonal_gradient_passes_through(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        state = ShampooState.zeros([np.zeros((3, 3))], lr=1.0)
        new_w = shampoo_step(state, [np.zeros((3, 3))], [q])
        np.testing.assert_allclose(new_w[0], -q, atol=1e-9)

    def test_single_step_is_orthogonalization(self, rng):
        g = rng.standard_normal((4, 3))
        state = ShampooState.zeros([np.zeros((4, 3))], lr=1.0, epsilon=0.0)
        new_w = shampoo_step(state, [np.zeros((4, 3))], [g])
        np.testing.assert_allclose(-new_w[0], orthogonalize(g, OrthoBackend.SVD), atol=1e-8)

    def test_ill_conditioned_step_is_orthogonalization(self):
        g = np.zeros((4, 3))
        g[2, 0], g[0, 1], g[3, 2] = 1.0, -1e-3, 1e-7
        state = ShampooState.zeros([np.zeros((4, 3))], lr=1.0, epsilon=0.0)
        new_w = shampoo_step(state, [np.zeros((4, 3))], [g])
        expected = np.zeros((4, 3))
        expected[2, 0], expected[0, 1], expected[3, 2] = 1.0, -1.0, 1.0
        np.testing.assert_allclose(-new_w[0], expected, atol=1e-9)
        np.testing.assert_allclose(spectral_descent_step([np.zeros((4, 3))], [g], 1.0)[0], new_w[0], atol=1e-9)

    def test_accumulators_stay_symmetric(self, rng):
        w = [rng.standard_normal((3, 2))]
        state = ShampooState.zeros(w, mode=ShampooMode.EMA)
        for _ in range(4):
            w = shampoo_step(state, w, [rng.standard_normal((3, 2))])
        for acc in state.l_acc + state.r_acc:
            np.testing.assert_array_equal(acc, acc.T)

    def test_zero_gradient_without_epsilon(self):
        state = ShampooState.zeros([np.zeros((2, 2))], epsilon=0.0)
        with pytest.raises(SingularMatrixError):
            shampoo_step(state, [np.zeros((2, 2))], [np.zeros((2, 2))])


class TestProdigy:
    @pytest.mark.parametrize("scale_epsilon, factor", [(False, 1.0 / 101.0), (True, 1.0 / (1.0 + 1e-4))])
    def test_epsilon_scaling_on_a_small_gradient(self, scale_epsilon, factor):
        w = [np.zeros((1, 1))]
        state = ProdigyState.start(w, eta=1e-6, beta1=0.0, beta2=0.0, epsilon=1e-8, scale_epsilon=scale_epsilon)
        new_w = prodigy_step(state, w, [np.full((1, 1), 1e-4)])
        assert float(new_w[0][0, 0]) == pytest.approx(-1e-6 * factor, rel=1e-9)

    def test_lookahead_doubles(self):
        etas, _ = _prodigy_etas(UpdateOrder.LOOKAHEAD, 6)
        assert etas[:4] == [0.5, 0.5, 0.5, 1.0]
        for t in range(2, 6):
            assert etas[t + 1] == pytest.approx(2.0 * etas[t], rel=1e-12)

    def test_current_order_follows_fibonacci(self):
        etas, w = _prodigy_etas(UpdateOrder.CURRENT, 6, eta=1.0)
        assert etas == pytest.approx([1.0, 1.0, 1.0, 2.0, 3.0, 5.0, 8.0])
        assert float(w[0][0, 0]) == pytest.approx(-13.0)

    def test_eta_never_decreases(self, rng):
        w = [rng.standard_normal((3, 2))]
        state = ProdigyState.start(w, eta=1e-4)
        previous = state.eta
        for _ in range(30):
            w = prodigy_step(state, w, [rng.standard_normal((3, 2))])
            assert state.eta >= previous
            previous = state.eta

    def test_zero_gradient_keeps_eta(self):
        w = [np.ones((2, 1))]
        state = ProdigyState.start(w, eta=0.3, beta1=0.0, beta2=0.0, epsilon=0.0)
        new_w = prodigy_step(state, w, [np.zeros((2, 1))])
        assert state.eta == 0.3
        np.testing.assert_array_equal(new_w[0], w[0])

    def test_matches_the_direct_rule(self, rng):
        w0 = [rng.standard_normal((2, 2))]
        state = ProdigyState.start(w0, eta=0.1, beta1=0.0, beta2=0.0, epsilon=0.0)
        w = w0
        for _ in range(5):
            g = [rng.standard_normal((2, 2)) + 1.0]
            expected = sign_prodigy_eta(state.eta, w0, w, g)
            w = prodigy_step(state, w, g)
            assert state.eta == pytest.approx(expected, rel=1e-12)

    def test_state_survives_json(self, rng):
        w = [rng.standard_normal((2, 3))]
        state = ProdigyState.start(w, eta=0.01)
        prodigy_step(state, w, [rng.standard_normal((2, 3))])
        restored = ProdigyState.model_validate_json(state.model_dump_json())
        assert restored.eta == state.eta
        np.testing.assert_array_equal(restored.s[0], state.s[0])


class TestDescent:
    def test_sign_descent_example(self):
        new_w = sign_descent_step([np.zeros((3, 1))], [np.array([[2.0], [-1.0], [0.0]])], 0.1)
        np.testing.assert_allclose(new_w[0], [[-0.1], [0.1], [0.0]])

    def test_spectral_backends_agree(self, rng):
        g = rng.standard_normal((6, 4))
        svd = spectral_descent_step([np.zeros((6, 4))], [g], 0.2)
        ns = spectral_descent_step(
            [np.zeros((6, 4))], [g], 0.2, OrthoBackend.NEWTON_SCHULZ, PolynomialSpec.cubic(iterations=60)
        )
        assert np.linalg.norm(svd[0] - ns[0]) < 1e-5

    def test_zero_layer_orthogonalizes_to_zero(self):
        assert not np.any(orthogonalize(np.zeros((2, 3)), OrthoBackend.NEWTON_SCHULZ))


class TestLineSearch:
    def test_doubling_until_the_gradient_turns(self):
        w0 = [np.zeros((2, 1))]
        state = LineSearchState.start(w0, 1.0, policy=LineSearchPolicy.DOUBLING)
        g = [np.array([[1.0], [1.0]])]
        w1 = [np.array([[-1.0], [-1.0]])]
        assert line_search_update(state, w1, g) == 2.0
        assert line_search_update(state, w1, g) == 4.0
        assert line_search_update(state, w1, [-g[0]]) == 4.0
        assert state.frozen
        assert line_search_update(state, w1, g) == 4.0

    @pytest.mark.parametrize("policy", [LineSearchPolicy.DOUBLING, LineSearchPolicy.COSINE_RULE])
    def test_zero_displacement_keeps_eta(self, policy):
        w0 = [np.zeros((2, 1))]
        state = LineSearchState.start(w0, 1.0, policy=policy)
        assert line_search_update(state, w0, [np.array([[1.0], [-2.0]])]) == 1.0
        assert not state.frozen

    def test_cosine_rule_floor(self):
        w0 = [np.zeros((2, 1))]
        state = LineSearchState.start(w0, 1.0, policy=LineSearchPolicy.COSINE_RULE)
        w = [np.array([[1.0], [1.0]])]
        assert line_search_update(state, w, [np.array([[1.0], [1.0]])]) == pytest.approx(1e-3)

    def test_cosine_rule_grows_while_aligned(self):
        w0 = [np.zeros((2, 1))]
        state = LineSearchState.start(w0, 1.0, policy=LineSearchPolicy.COSINE_RULE)
        w = [np.array([[-1.0], [0.0]])]
        assert line_search_update(state, w, [np.array([[1.0], [0.0]])]) == pytest.approx(2.0)

    def test_prodigy_max(self):
        w0 = [np.zeros((2, 1))]
        state = LineSearchState.start(w0, 0.1)
        w = [np.array([[-1.0], [-1.0]])]
        assert line_search_update(state, w, [np.array([[1.0], [1.0]])]) == pytest.approx(1.0)

    def test_previous_anchor(self):
        w0 = [np.zeros((1, 1))]
        state = LineSearchState.start(
            w0, 1.0, policy=LineSearchPolicy.COSINE_RULE, anchor=LineSearchAnchor.PREVIOUS
        )
        g = [np.ones((1, 1))]
        line_search_update(state, [np.full((1, 1), -1.0)], g)
        # against w0 this step would look aligned; against the previous iterate it reverses
        assert line_search_update(state, [np.full((1, 1), -0.5)], g) == pytest.approx(2e-3)

    def test_zero_gradient_rejected(self):
        state = LineSearchState.start([np.zeros((1, 1))], 1.0, policy=LineSearchPolicy.DOUBLING)
        with pytest.raises(InvalidArgumentError):
            line_search_update(state, [np.zeros((1, 1))], [np.zeros((1, 1))])

    def test_escape_diagnostics(self):
        d = escape_diagnostics([np.zeros((2, 1))], [np.array([[-1.0], [0.0]])], [np.array([[3.0], [4.0]])])
        assert d.cos_theta == pytest.approx(0.6)
        assert d.norm_ratio == pytest.approx(5.0 / 7.0)
        assert d.displacement_rms == pytest.approx(1.0 / np.sqrt(2.0))

    def test_escape_diagnostics_at_the_start(self):
        d = escape_diagnostics([np.ones((2, 1))], [np.ones((2, 1))], [np.zeros((2, 1))])
        assert d == (0.0, 0.0, 0.0)


class TestRegistry:
    def test_every_name_is_registered(self):
        assert set(OPTIMIZERS) == set(OptimizerName)

    def test_build_and_step(self, rng):
        w = [rng.standard_normal((2, 3))]
        g = [rng.standard_normal((2, 3))]
        for name in OptimizerName:
            opt = build_optimizer(OptimizerConfig(name=name), w)
            outcome = opt.step(w, g)
            assert outcome.weights[0].shape == (2, 3)
            assert len(outcome.dual_values) == 1

    def test_steepest_defaults_to_dimension_ratio(self):
        opt = build_optimizer(OptimizerConfig(name="steepest"), [np.zeros((2, 6))])
        assert opt.sharpness == 3.0

    def test_steepest_reads_the_lambda_alias(self):
        config = OptimizerConfig.model_validate({"name": "steepest", "lambda": 4.0})
        assert build_optimizer(config, [np.zeros((2, 2))]).sharpness == 4.0

    def test_unknown_name(self):
        config = OptimizerConfig.model_construct(name="lion")
        with pytest.raises(ConfigError, match="unknown optimizer"):
            build_optimizer(config, [np.zeros((1, 1))])

    def test_state_roundtrip(self, rng):
        w = [rng.standard_normal((2, 2))]
        opt = build_optimizer(OptimizerConfig(name="adam"), w)
        opt.step(w, [rng.standard_normal((2, 2))])
        clone = build_optimizer(OptimizerConfig(name="adam"), w)
        clone.load_state(opt.dump_state())
        assert clone.state.step_count == 1
        np.testing.assert_array_equal(clone.state.m[0], opt.state.m[0])
