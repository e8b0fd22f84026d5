import pytest

from normdescent.core.exceptions import InvalidArgumentError
from normdescent.services.verification import MODULE_SUITES, check_names, run_suite

EXPECTED = {
    "linalg": [
        "svd_roundtrip",
        "orthogonalization_agreement",
        "shampoo_identity",
        "newton_schulz_singular_value_action",
        "inverse_root_identity",
    ],
    "norms": [
        "induced_norm_exactness",
        "duality_consistency",
        "max_of_max_identity",
        "scaled_norm_coherence",
        "homogeneity_and_triangle",
    ],
    "steepest": [
        "steepest_optimality",
        "modular_equalization",
        "scale_equivariance",
        "sharpness_scaling",
        "max_of_max_matches_flattened_sign_descent",
    ],
    "optimizers": [
        "adam_sign_reduction",
        "reduction_equivalences",
        "prodigy_monotonicity",
        "prodigy_escape_doubling",
        "shampoo_accumulator_symmetry",
        "sign_step_rms_identity",
    ],
    "models": ["majorization", "guaranteed_descent", "gradient_exactness"],
}


class TestSuites:
    @pytest.mark.parametrize("suite", MODULE_SUITES)
    def test_registered_checks(self, suite):
        assert check_names(suite) == EXPECTED[suite]

    def test_all_adds_the_pipeline_checks(self):
        names = check_names("all")
        assert names[: len(names) - 2] == [n for s in MODULE_SUITES for n in EXPECTED[s]]
        assert names[-2:] == ["train_determinism", "exit_code_contract"]

    @pytest.mark.parametrize("suite", MODULE_SUITES)
    def test_suite_passes(self, suite):
        report = run_suite(suite, seed=0)
        failures = [(r.name, r.error, r.detail) for r in report.results if not r.passed]
        assert report.passed, failures
        assert report.total == len(EXPECTED[suite])
        assert report.failed == 0
        assert {r.suite for r in report.results} == {suite}

    def test_unknown_suite(self):
        with pytest.raises(InvalidArgumentError, match="valid suites"):
            run_suite("bogus")

    def test_same_seed_same_errors(self):
        a = run_suite("norms", seed=5)
        b = run_suite("norms", seed=5)
        assert [r.error for r in a.results] == [r.error for r in b.results]
