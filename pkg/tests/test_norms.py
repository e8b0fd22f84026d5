import math

import numpy as np
import pytest
from pydantic import ValidationError

from normdescent.core.exceptions import InvalidArgumentError, ShapeError
from normdescent.norms.duality import dual_norm, lmo_direction
from normdescent.norms.oracles import (
    brute_force_dual,
    operator_norm_maximizer,
    operator_ratios,
    sampled_operator_norm,
)
from normdescent.norms.primal import (
    batched_norm,
    flattened_linf,
    layer_norms,
    matrix_norm,
    max_of_max_norm,
    modular_norm,
    norm,
    vector_norm,
)
from normdescent.schemas.norms import INF, ModularNormSpec, NormKind, NormSpec

M = np.array([[1.0, -5.0], [2.0, 3.0]])

ALL_SPECS = [
    NormSpec.lp(1.0),
    NormSpec.lp(1.5),
    NormSpec.lp(2.0),
    NormSpec.lp(4.0),
    NormSpec.lp("inf"),
    NormSpec.rms(),
    NormSpec.frobenius(),
    NormSpec.spectral(),
    NormSpec.nuclear(),
    NormSpec.schatten(3.0),
    NormSpec.l1_to_lp(1.0),
    NormSpec.l1_to_lp(2.0),
    NormSpec.l1_to_lp("inf"),
    NormSpec.lp_to_linf(1.0),
    NormSpec.lp_to_linf(2.0),
    NormSpec.lp_to_linf("inf"),
    NormSpec.rms_to_rms(),
    NormSpec.l1_to_rms(),
]


def _shape(spec):
    return (5, 1) if spec.is_vector else (4, 3)


class TestNormSpec:
    def test_infinity_spellings(self):
        assert NormSpec.lp("inf").p == INF
        assert NormSpec.model_validate({"kind": "vector_lp", "p": "Infinity"}).p == INF

    def test_infinity_serializes_as_string(self):
        assert NormSpec.lp("inf").model_dump() == {"kind": "vector_lp", "p": "inf"}

    def test_exponent_below_one_rejected(self):
        with pytest.raises(ValidationError):
            NormSpec.lp(0.5)

    def test_parametric_kind_needs_exponent(self):
        with pytest.raises(ValidationError):
            NormSpec(kind=NormKind.SCHATTEN)

    def test_fixed_kind_takes_no_exponent(self):
        with pytest.raises(ValidationError):
            NormSpec(kind=NormKind.SPECTRAL, p=2.0)

    def test_labels(self):
        assert NormSpec.l1_to_linf().label == "l1->linf"
        assert NormSpec.l1_to_lp(2.0).label == "l1->l2"
        assert NormSpec.nuclear().label == "S1"
        assert str(NormSpec.rms_to_rms()) == "rms->rms"


class TestPrimal:
    def test_vector_examples(self):
        v = [3.0, -4.0]
        assert vector_norm(v, NormSpec.lp(2.0)) == 5.0
        assert vector_norm(v, NormSpec.lp("inf")) == 4.0

    def test_sign_vector_has_unit_rms(self, rng):
        s = np.sign(rng.standard_normal(17))
        assert vector_norm(s, NormSpec.rms()) == pytest.approx(1.0, abs=1e-15)

    def test_vector_norm_needs_a_column(self):
        with pytest.raises(ShapeError):
            vector_norm(np.ones((2, 2)), NormSpec.lp(2.0))

    def test_matrix_norm_rejects_vector_variant(self):
        with pytest.raises(InvalidArgumentError):
            matrix_norm(M, NormSpec.lp(2.0))

    def test_induced_examples(self):
        assert matrix_norm(M, NormSpec.l1_to_linf()) == 5.0
        assert matrix_norm(M, NormSpec.l1_to_lp(2.0)) == pytest.approx(math.sqrt(34.0), rel=1e-15)
        assert matrix_norm(M, NormSpec.lp_to_linf(2.0)) == pytest.approx(math.sqrt(26.0), rel=1e-15)

    def test_identity_examples(self):
        i2 = np.eye(2)
        assert matrix_norm(i2, NormSpec.spectral()) == pytest.approx(1.0)
        assert matrix_norm(i2, NormSpec.frobenius()) == pytest.approx(math.sqrt(2.0))
        assert matrix_norm(i2, NormSpec.l1_to_linf()) == 1.0
        assert matrix_norm(i2, NormSpec.nuclear()) == pytest.approx(2.0)

    def test_scaled_norms(self, rng):
        m = rng.standard_normal((3, 7))
        spectral = matrix_norm(m, NormSpec.spectral())
        assert matrix_norm(m, NormSpec.rms_to_rms()) == pytest.approx(math.sqrt(7 / 3) * spectral, rel=1e-12)
        col_l2 = matrix_norm(m, NormSpec.l1_to_lp(2.0))
        assert matrix_norm(m, NormSpec.l1_to_rms()) == pytest.approx(col_l2 / math.sqrt(3), rel=1e-12)

    def test_zero_matrix(self):
        for spec in ALL_SPECS:
            assert norm(np.zeros(_shape(spec)), spec) == 0.0

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_closed_forms_match_numpy(self, rng, spec):
        m = rng.standard_normal(_shape(spec))
        assert norm(m, spec) == pytest.approx(float(batched_norm(m[np.newaxis], spec)[0]), rel=1e-10)

    def test_max_of_max_examples(self):
        assert max_of_max_norm([[[1.0, -2.0]], [[3.0], [0.0]]]) == 3.0
        assert max_of_max_norm([M]) == 5.0

    def test_max_of_max_equals_flattened_linf(self, rng):
        for _ in range(100):
            layers = [rng.standard_normal(tuple(rng.integers(1, 5, 2))) for _ in range(3)]
            assert max_of_max_norm(layers) == flattened_linf(layers)

    def test_modular_examples(self, rng):
        w = [rng.standard_normal((2, 3)), rng.standard_normal((3, 1))]
        both = ModularNormSpec.uniform(NormSpec.l1_to_linf(), 2)
        assert modular_norm(w, both) == max_of_max_norm(w)
        spec = ModularNormSpec.from_lists([2.0, 1.0], [NormSpec.spectral(), NormSpec.spectral()])
        assert modular_norm([[[1.0]], [[3.0]]], spec) == pytest.approx(3.0)
        doubled = ModularNormSpec.from_lists([4.0, 2.0], spec.norms)
        assert modular_norm([[[1.0]], [[3.0]]], doubled) == pytest.approx(6.0)

    def test_layer_norms(self):
        values = layer_norms([M, [3.0, -4.0]], [NormSpec.l1_to_linf(), NormSpec.lp(2.0)])
        assert values == [5.0, pytest.approx(5.0)]
        with pytest.raises(InvalidArgumentError):
            layer_norms([M], [NormSpec.spectral(), NormSpec.spectral()])

    def test_modular_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            modular_norm([np.ones((1, 1))], ModularNormSpec.uniform(NormSpec.spectral(), 2))


class TestDuality:
    def test_linf_dual_and_direction(self):
        g = [2.0, -1.0]
        assert dual_norm(g, NormSpec.lp("inf")) == 3.0
        np.testing.assert_array_equal(lmo_direction(g, NormSpec.lp("inf")), [[1.0], [-1.0]])

    def test_l1_tie_goes_to_the_first_entry(self):
        g = [-3.0, 3.0, 1.0]
        np.testing.assert_array_equal(lmo_direction(g, NormSpec.lp(1.0)), [[-1.0], [0.0], [0.0]])
        assert dual_norm(g, NormSpec.lp(1.0)) == 3.0

    def test_l2_direction(self):
        np.testing.assert_allclose(lmo_direction([3.0, 4.0], NormSpec.lp(2.0)), [[0.6], [0.8]])

    def test_l2_is_self_dual(self, rng):
        g = rng.standard_normal((6, 1))
        assert dual_norm(g, NormSpec.lp(2.0)) == pytest.approx(np.linalg.norm(g), rel=1e-15)

    def test_spectral_examples(self):
        g = np.diag([2.0, 0.5])
        assert dual_norm(g, NormSpec.spectral()) == pytest.approx(2.5)
        np.testing.assert_allclose(lmo_direction(g, NormSpec.spectral()), np.eye(2), atol=1e-15)

    def test_zero_gradient_direction_rejected(self):
        with pytest.raises(InvalidArgumentError):
            lmo_direction(np.zeros((2, 2)), NormSpec.spectral())

    def test_sign_zero_is_zero(self):
        np.testing.assert_array_equal(lmo_direction([2.0, -1.0, 0.0], NormSpec.lp("inf")), [[1.0], [-1.0], [0.0]])

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_direction_attains_dual_with_unit_norm(self, rng, spec):
        g = rng.standard_normal(_shape(spec))
        t = lmo_direction(g, spec)
        assert float(np.sum(g * t)) == pytest.approx(dual_norm(g, spec), rel=1e-10)
        assert norm(t, spec) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
    def test_brute_force_never_exceeds_dual(self, rng, spec):
        g = rng.standard_normal(_shape(spec))
        sampled = brute_force_dual(g, spec, samples=2000, seed=3)
        assert sampled <= dual_norm(g, spec) + 1e-10
        tight = brute_force_dual(g, spec, samples=10, seed=3, candidates=[lmo_direction(g, spec)])
        assert tight == pytest.approx(dual_norm(g, spec), rel=1e-10)

    def test_brute_force_is_close_in_two_dimensions(self, rng):
        g = rng.standard_normal((2, 1))
        sampled = brute_force_dual(g, NormSpec.lp("inf"), samples=100_000, seed=0)
        assert sampled == pytest.approx(dual_norm(g, NormSpec.lp("inf")), rel=0.02)


class TestOperatorNorms:
    INDUCED = [NormSpec.l1_to_lp(p) for p in (1.0, 2.0, "inf")] + [
        NormSpec.lp_to_linf(p) for p in (1.0, 2.0, "inf")
    ] + [NormSpec.spectral(), NormSpec.rms_to_rms(), NormSpec.l1_to_rms()]

    @pytest.mark.parametrize("spec", INDUCED, ids=str)
    def test_sampling_never_beats_closed_form(self, rng, spec):
        m = rng.standard_normal((4, 5))
        assert sampled_operator_norm(m, spec, samples=20_000, seed=1) <= matrix_norm(m, spec) * (1 + 1e-12)

    @pytest.mark.parametrize("spec", INDUCED, ids=str)
    def test_maximizer_attains_closed_form(self, rng, spec):
        m = rng.standard_normal((4, 5))
        x = operator_norm_maximizer(m, spec)
        assert float(operator_ratios(m, x[np.newaxis, :], spec)[0]) == pytest.approx(matrix_norm(m, spec), rel=1e-12)

    def test_basis_inputs_give_the_l1_norms(self):
        basis = np.eye(2)
        ratios = operator_ratios(M, basis, NormSpec.l1_to_lp(2.0))
        assert max(ratios) == pytest.approx(math.sqrt(34.0))

    def test_example_matrix_brute_force(self):
        assert sampled_operator_norm(M, NormSpec.l1_to_lp(2.0), 100_000, 0) == pytest.approx(
            math.sqrt(34.0), rel=1e-2
        )
        assert sampled_operator_norm(M, NormSpec.lp_to_linf(2.0), 100_000, 0) == pytest.approx(
            math.sqrt(26.0), rel=1e-2
        )

    def test_non_induced_norm_rejected(self):
        from normdescent.core.exceptions import UnsupportedNormError

        with pytest.raises(UnsupportedNormError):
            operator_norm_maximizer(M, NormSpec.frobenius())
