"""Property suites behind ``verify``.

Each check draws from its own named generator, returns the worst error it
measured, and passes when that error is within its tolerance.
"""
import math
import tempfile
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import structlog

from normdescent.core.exceptions import (
    ConfigError,
    InvalidArgumentError,
    NormDescentError,
    NumericalAbort,
    exit_code_for,
)
from normdescent.core.rng import SeedStream
from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.orthogonalize import (
    newton_schulz_iterates,
    orthogonalize_newton_schulz,
    orthogonalize_via_svd,
)
from normdescent.linalg.roots import spd_inverse_root
from normdescent.models.dataset import make_dataset
from normdescent.models.gradcheck import central_difference, relative_error
from normdescent.models.linear import LinearModel, majorization_gap, spectral_sharpness, square_loss, square_loss_grad
from normdescent.models.two_layer import TwoLayerNet, two_layer_forward_backward
from normdescent.norms.duality import dual_norm, lmo_direction
from normdescent.norms.oracles import operator_norm_maximizer, operator_ratios, sampled_operator_norm
from normdescent.norms.primal import batched_norm, flattened_linf, matrix_norm, max_of_max_norm, norm
from normdescent.optimizers.adam import AdamState, adam_step
from normdescent.optimizers.descent import sign_descent_step, spectral_descent_step
from normdescent.optimizers.prodigy import ProdigyState, prodigy_step, sign_prodigy_eta
from normdescent.optimizers.shampoo import ShampooState, shampoo_step
from normdescent.schemas.norms import ModularNormSpec, NormKind, NormSpec
from normdescent.schemas.optimizers import OrthoBackend, ShampooMode, UpdateOrder
from normdescent.schemas.polynomial import PolynomialSpec
from normdescent.schemas.reports import InvariantResult, VerificationReport
from normdescent.services.training import parse_experiment_configs, run_experiment
from normdescent.steepest.solvers import solve_max_of_max, solve_modular, solve_single, solve_spectral_layers

logger = structlog.get_logger(__name__)

MODULE_SUITES = ("linalg", "norms", "steepest", "optimizers", "models")
SUITES = MODULE_SUITES + ("all",)
CANDIDATES = 100_000

Check = Callable[[np.random.Generator], float]
_CHECKS: Dict[str, List[Tuple[str, float, Check]]] = {}


def invariant(suite: str, name: str, tolerance: float):
    def register(fn: Check) -> Check:
        _CHECKS.setdefault(suite, []).append((name, tolerance, fn))
        return fn

    return register


def check_names(suite: str) -> List[str]:
    return [name for s in _expand(suite) for name, _, _ in _CHECKS.get(s, [])]


def _expand(suite: str) -> Tuple[str, ...]:
    if suite not in SUITES:
        raise InvalidArgumentError(f"unknown suite {suite!r}; valid suites: {', '.join(SUITES)}")
    return MODULE_SUITES + ("cli",) if suite == "all" else (suite,)


def run_suite(suite: str, seed: int = 0) -> VerificationReport:
    suites = _expand(suite)
    root = SeedStream(seed)
    results = []
    for s in suites:
        for name, tolerance, fn in _CHECKS.get(s, []):
            rng = root.child(s).generator(name)
            detail = ""
            try:
                error = float(fn(rng))
            except NormDescentError as exc:
                logger.warning("invariant_errored", suite=s, invariant=name, error=exc.message)
                error, detail = math.inf, f"{type(exc).__name__}: {exc.message}"
            passed = math.isfinite(error) and error <= tolerance
            if not passed:
                logger.warning("invariant_failed", suite=s, invariant=name, error=error, tolerance=tolerance)
            results.append(
                InvariantResult(suite=s, name=name, passed=passed, error=error, tolerance=tolerance, detail=detail)
            )
    failed = sum(not r.passed for r in results)
    logger.info("suite_finished", suite=suite, total=len(results), failed=failed)
    return VerificationReport(suite=suite, passed=failed == 0, total=len(results), failed=failed, results=results)


# helpers


def random_with_condition(rng: np.random.Generator, rows: int, cols: int, cond: float) -> np.ndarray:
    k = min(rows, cols)
    u, _ = np.linalg.qr(rng.standard_normal((rows, k)))
    v, _ = np.linalg.qr(rng.standard_normal((cols, k)))
    sigma = np.geomspace(1.0, 1.0 / cond, k) * rng.uniform(0.5, 2.0)
    return (u * sigma) @ v.T


def random_spd(rng: np.random.Generator, n: int, cond: float) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.geomspace(1.0, 1.0 / cond, n) * rng.uniform(0.5, 2.0)
    return (q * lam) @ q.T


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _unit_gaussians(rng: np.random.Generator, k: int, shape: Tuple[int, int]) -> np.ndarray:
    t = rng.standard_normal((k,) + shape)
    return t / np.linalg.norm(t.reshape(k, -1), axis=1)[:, None, None]


# linalg


@invariant("linalg", "svd_roundtrip", 1e-8)
def _svd_roundtrip(rng):
    worst = 0.0
    for rows, cols in [(1, 1), (3, 3), (5, 2), (2, 5), (16, 12), (12, 16), (64, 64)]:
        g = rng.standard_normal((rows, cols))
        f = reduced_svd(g)
        worst = max(worst, float(np.linalg.norm(f.reconstruct() - g) / np.linalg.norm(g)))
        r = f.rank
        worst = max(worst, float(np.max(np.abs(f.u.T @ f.u - np.eye(r)))), float(np.max(np.abs(f.v.T @ f.v - np.eye(r)))))
    return worst


@invariant("linalg", "orthogonalization_agreement", 1e-6)
def _orthogonalization_agreement(rng):
    spec = PolynomialSpec.cubic(iterations=100)
    worst = 0.0
    for i in range(100):
        rows, cols = [(8, 6), (6, 8), (10, 10), (16, 12)][i % 4]
        g = random_with_condition(rng, rows, cols, rng.uniform(1.0, 100.0))
        diff = orthogonalize_newton_schulz(g, spec) - orthogonalize_via_svd(g)
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


@invariant("linalg", "shampoo_identity", 1e-8)
def _shampoo_identity(rng):
    worst = 0.0
    for rows, cols in [(6, 4), (4, 6), (5, 5), (16, 12)]:
        g = random_with_condition(rng, rows, cols, rng.uniform(1.0, 20.0))
        left, right = g @ g.T, g.T @ g
        forms = [
            spd_inverse_root(left, 4) @ g @ spd_inverse_root(right, 4),
            spd_inverse_root(left, 2) @ g,
            g @ spd_inverse_root(right, 2),
            orthogonalize_via_svd(g),
        ]
        for a in forms:
            for b in forms:
                worst = max(worst, float(np.linalg.norm(a - b)))
    return worst


@invariant("linalg", "newton_schulz_singular_value_action", 1e-13)
def _newton_schulz_diagonal(rng):
    spec = PolynomialSpec.cubic(iterations=30)
    worst = 0.0
    for n in (2, 3, 6):
        d = rng.uniform(0.05, 3.0, n) * rng.choice([-1.0, 1.0], n)
        expected = None
        for x in newton_schulz_iterates(np.diag(d), spec):
            expected = np.diag(x).copy() if expected is None else spec.scalar_map(expected)
            worst = max(worst, float(np.max(np.abs(np.diag(x) - expected))))
            worst = max(worst, float(np.max(np.abs(x - np.diag(np.diag(x))))))
    return worst


@invariant("linalg", "inverse_root_identity", 1e-7)
def _inverse_root_identity(rng):
    worst = 0.0
    for n in (2, 4, 8):
        for p in (1, 2, 3, 4):
            s = random_spd(rng, n, rng.uniform(1.0, 1e4))
            root = spd_inverse_root(s, p)
            residual = np.linalg.matrix_power(root, p) @ s - np.eye(n)
            worst = max(worst, float(np.linalg.norm(residual) / math.sqrt(n)))
    return worst


# norms

_INDUCED = [NormSpec.l1_to_lp(p) for p in (1.0, 2.0, "inf")] + [NormSpec.lp_to_linf(p) for p in (1.0, 2.0, "inf")]

_DUALITY_SPECS = [
    NormSpec.lp(1.0), NormSpec.lp(1.5), NormSpec.lp(2.0), NormSpec.lp(3.0), NormSpec.lp("inf"), NormSpec.rms(),
    NormSpec.frobenius(), NormSpec.spectral(), NormSpec.nuclear(), NormSpec.schatten(3.0),
    NormSpec.l1_to_lp(1.0), NormSpec.l1_to_lp(2.0), NormSpec.l1_to_lp(3.0), NormSpec.l1_to_lp("inf"),
    NormSpec.lp_to_linf(1.0), NormSpec.lp_to_linf(2.0), NormSpec.lp_to_linf("inf"),
    NormSpec.rms_to_rms(), NormSpec.l1_to_rms(),
]


@invariant("norms", "induced_norm_exactness", 1e-12)
def _induced_exactness(rng):
    worst = 0.0
    for rows, cols in [(2, 2), (3, 5), (8, 8)]:
        m = rng.standard_normal((rows, cols))
        for spec in _INDUCED:
            value = matrix_norm(m, spec)
            if spec.kind is NormKind.INDUCED_L1_TO_LP:
                basis = float(np.max(np.linalg.norm(m, ord=spec.p, axis=0)))
                worst = max(worst, _rel(basis, value))
            sampled = sampled_operator_norm(m, spec, CANDIDATES, int(rng.integers(2**31)))
            worst = max(worst, max(0.0, sampled - value) / value)
            attained = float(operator_ratios(m, operator_norm_maximizer(m, spec)[None, :], spec)[0])
            worst = max(worst, _rel(attained, value))
    return worst


@invariant("norms", "duality_consistency", 1e-10)
def _duality_consistency(rng):
    worst = 0.0
    for spec in _DUALITY_SPECS:
        shape = (6, 1) if spec.is_vector else (4, 3)
        for _ in range(5):
            g = rng.standard_normal(shape)
            t = lmo_direction(g, spec)
            dual = dual_norm(g, spec)
            worst = max(worst, _rel(float(np.sum(g * t)), dual), abs(norm(t, spec) - 1.0))
    return worst


@invariant("norms", "max_of_max_identity", 0.0)
def _max_of_max_identity(rng):
    worst = 0.0
    for _ in range(1000):
        layers = [rng.standard_normal(tuple(rng.integers(1, 6, 2))) for _ in range(int(rng.integers(1, 5)))]
        worst = max(worst, abs(max_of_max_norm(layers) - flattened_linf(layers)))
    return worst


@invariant("norms", "scaled_norm_coherence", 1e-12)
def _scaled_coherence(rng):
    worst = 0.0
    for rows, cols in [(2, 5), (5, 2), (4, 4), (7, 3)]:
        m = rng.standard_normal((rows, cols))
        spectral = matrix_norm(m, NormSpec.spectral())
        worst = max(worst, _rel(matrix_norm(m, NormSpec.rms_to_rms()), math.sqrt(cols / rows) * spectral))
        col_l2 = matrix_norm(m, NormSpec.l1_to_lp(2.0))
        worst = max(worst, _rel(matrix_norm(m, NormSpec.l1_to_rms()), col_l2 / math.sqrt(rows)))
    return worst


@invariant("norms", "homogeneity_and_triangle", 1e-10)
def _homogeneity_triangle(rng):
    worst = 0.0
    for spec in _DUALITY_SPECS:
        shape = (6, 1) if spec.is_vector else (4, 3)
        for _ in range(5):
            a, b = rng.standard_normal(shape), rng.standard_normal(shape)
            c = float(rng.uniform(-5.0, 5.0))
            na, nb = norm(a, spec), norm(b, spec)
            worst = max(worst, _rel(norm(c * a, spec), abs(c) * na))
            worst = max(worst, max(0.0, norm(a + b, spec) - na - nb) / (na + nb))
    return worst


# steepest


def _min_candidate_objective(rng, gs, spec: ModularNormSpec, lam: float, center, eta: float) -> float:
    """Smallest objective over random updates: half global, half near ``center``."""
    k = CANDIDATES
    linear = np.zeros(k)
    scaled = np.zeros(k)
    radius = rng.uniform(0.0, 2.0 * max(eta, 1e-12), k)
    local = np.arange(k) % 2 == 1
    for g, c, entry in zip(gs, center, spec.entries):
        t = _unit_gaussians(rng, k, g.shape) * radius[:, None, None]
        t[local] = c + 0.3 * t[local]
        linear += np.einsum("ij,kij->k", g, t)
        scaled = np.maximum(scaled, entry.scale * batched_norm(t, entry.norm))
    return float(np.min(linear + 0.5 * lam * scaled**2))


@invariant("steepest", "steepest_optimality", 1e-10)
def _steepest_optimality(rng):
    worst = 0.0
    singles = [(NormSpec.lp(2.0), (4, 1)), (NormSpec.lp("inf"), (4, 1)), (NormSpec.spectral(), (2, 2))]
    for spec, shape in singles:
        g = rng.standard_normal(shape)
        lam = float(rng.uniform(0.5, 3.0))
        sol = solve_single(g, spec, lam)
        closed = -dual_norm(g, spec) ** 2 / (2.0 * lam)
        worst = max(worst, _rel(sol.objective_value, closed))
        sampled = _min_candidate_objective(rng, [g], ModularNormSpec.uniform(spec, 1), lam, sol.updates, sol.step_size)
        worst = max(worst, max(0.0, sol.objective_value - sampled) / abs(closed))

    gs = [rng.standard_normal((2, 2)), rng.standard_normal((3, 2))]
    spec = ModularNormSpec.from_lists([1.0, 2.0], [NormSpec.spectral(), NormSpec.spectral()])
    lam = float(rng.uniform(0.5, 3.0))
    sol = solve_modular(gs, spec, lam)
    worst = max(worst, _rel(sol.objective_value, -0.5 * lam * sol.step_size**2))
    sampled = _min_candidate_objective(rng, gs, spec, lam, sol.updates, sol.step_size)
    worst = max(worst, max(0.0, sol.objective_value - sampled) / abs(sol.objective_value))

    spectral = solve_spectral_layers(gs, lam)
    unit = ModularNormSpec.uniform(NormSpec.spectral(), 2)
    sampled = _min_candidate_objective(rng, gs, unit, lam, spectral.updates, spectral.step_size)
    worst = max(worst, max(0.0, spectral.objective_value - sampled) / abs(spectral.objective_value))
    return worst


@invariant("steepest", "modular_equalization", 1e-9)
def _modular_equalization(rng):
    choices = [NormSpec.spectral(), NormSpec.l1_to_linf(), NormSpec.rms_to_rms()]
    worst = 0.0
    for _ in range(100):
        gs = [rng.standard_normal(tuple(rng.integers(1, 6, 2))) for _ in range(3)]
        norms_ = [choices[int(i)] for i in rng.integers(0, 3, 3)]
        spec = ModularNormSpec.from_lists(list(rng.uniform(0.5, 2.0, 3)), norms_)
        sol = solve_modular(gs, spec, float(rng.uniform(0.5, 3.0)))
        sizes = [e.scale * norm(dw, e.norm) for dw, e in zip(sol.updates, spec.entries)]
        worst = max(worst, max(_rel(s, sol.step_size) for s in sizes))
    return worst


@invariant("steepest", "scale_equivariance", 1e-10)
def _scale_equivariance(rng):
    worst = 0.0
    for spec in _DUALITY_SPECS:
        g = rng.standard_normal((6, 1) if spec.is_vector else (4, 3))
        c = float(rng.uniform(0.1, 10.0))
        base = solve_single(g, spec, 1.5).updates[0]
        scaled = solve_single(c * g, spec, 1.5).updates[0]
        worst = max(worst, float(np.linalg.norm(scaled - c * base) / np.linalg.norm(c * base)))
    return worst


@invariant("steepest", "sharpness_scaling", 1e-15)
def _sharpness_scaling(rng):
    worst = 0.0
    for spec in _DUALITY_SPECS:
        g = rng.standard_normal((6, 1) if spec.is_vector else (4, 3))
        lam = float(rng.uniform(0.5, 3.0))
        one = solve_single(g, spec, lam)
        two = solve_single(g, spec, 2.0 * lam)
        worst = max(worst, _rel(two.step_size, 0.5 * one.step_size))
        worst = max(worst, float(np.max(np.abs(two.updates[0] - 0.5 * one.updates[0]))) / one.step_size)
    return worst


@invariant("steepest", "max_of_max_matches_flattened_sign_descent", 1e-13)
def _max_of_max_consistency(rng):
    worst = 0.0
    for _ in range(20):
        g = rng.standard_normal(tuple(rng.integers(1, 6, 2)))
        lam = float(rng.uniform(0.5, 3.0))
        layered = solve_max_of_max([g], lam)
        flat = solve_single(g.reshape(-1, 1), NormSpec.lp("inf"), lam)
        worst = max(worst, _rel(layered.step_size, flat.step_size))
        diff = layered.updates[0].reshape(-1, 1) - flat.updates[0]
        worst = max(worst, float(np.max(np.abs(diff))) / flat.step_size)
    return worst


# optimizers


def _random_layers(rng, shapes):
    return [rng.standard_normal(s) for s in shapes]


@invariant("optimizers", "adam_sign_reduction", 1.0)
def _adam_sign_reduction(rng):
    """Largest disagreement between zero-beta Adam and sign descent, in ulps."""
    worst = 0.0
    lr = 0.1
    for _ in range(100):
        shapes = [tuple(rng.integers(1, 6, 2)) for _ in range(2)]
        w = _random_layers(rng, shapes)
        scale = 10.0 ** rng.uniform(-200.0, 150.0)
        g = [scale * gi for gi in _random_layers(rng, shapes)]
        state = AdamState.zeros(w, beta1=0.0, beta2=0.0, epsilon=0.0, lr=lr)
        adam = adam_step(state, w, g)
        sign = sign_descent_step(w, g, lr)
        for a, s in zip(adam, sign):
            worst = max(worst, float(np.max(np.abs(a - s) / np.spacing(np.abs(s)))))
    return worst


@invariant("optimizers", "reduction_equivalences", 1e-8)
def _reductions(rng):
    worst = 0.0
    lr = 0.1
    for _ in range(100):
        rows, cols = int(rng.integers(2, 17)), int(rng.integers(2, 13))
        w = [rng.standard_normal((rows, cols))]
        g = [random_with_condition(rng, rows, cols, rng.uniform(1.0, 20.0))]
        state = ShampooState.zeros(w, epsilon=0.0, lr=lr)
        shampoo = shampoo_step(state, w, g)[0]
        spectral = spectral_descent_step(w, g, lr, OrthoBackend.SVD)[0]
        worst = max(worst, float(np.linalg.norm(shampoo - spectral) / np.linalg.norm(spectral - w[0])))

    w = _random_layers(rng, [(3, 2), (2, 4)])
    state = ProdigyState.start(w, eta=1e-3, beta1=0.0, beta2=0.0, epsilon=0.0)
    for _ in range(50):
        g = _random_layers(rng, [(3, 2), (2, 4)])
        expected = sign_prodigy_eta(state.eta, state.w0, w, g)
        w = prodigy_step(state, w, g)
        worst = max(worst, _rel(state.eta, expected))
    return worst


@invariant("optimizers", "prodigy_monotonicity", 0.0)
def _prodigy_monotone(rng):
    worst = 0.0
    for beta1, beta2 in [(0.0, 0.0), (0.9, 0.999), (0.5, 0.9)]:
        w = _random_layers(rng, [(4, 3)])
        state = ProdigyState.start(w, eta=1e-6, beta1=beta1, beta2=beta2)
        for _ in range(1000):
            before = state.eta
            w = prodigy_step(state, w, _random_layers(rng, [(4, 3)]))
            worst = max(worst, before - state.eta)
    return worst


@invariant("optimizers", "prodigy_escape_doubling", 1e-12)
def _prodigy_doubling(rng):
    eta0 = 1e-6
    w = [np.zeros((1, 1))]
    g = [np.ones((1, 1))]
    state = ProdigyState.start(w, eta=eta0, beta1=0.0, beta2=0.0, epsilon=0.0, update_order=UpdateOrder.LOOKAHEAD)
    etas = [state.eta]
    for _ in range(20):
        w = prodigy_step(state, w, g)
        etas.append(state.eta)
    # etas[t] is eta_t; doubling from t = 2 on
    worst = max(_rel(etas[1], eta0), _rel(etas[2], eta0))
    for t in range(2, 20):
        worst = max(worst, _rel(etas[t + 1], 2.0 * etas[t]))
    return worst


@invariant("optimizers", "shampoo_accumulator_symmetry", 1e-10)
def _shampoo_symmetry(rng):
    worst = 0.0
    for mode in (ShampooMode.SUM, ShampooMode.EMA):
        w = _random_layers(rng, [(4, 3)])
        state = ShampooState.zeros(w, mode=mode, lr=1e-4, epsilon=1e-8)
        for _ in range(1000):
            w = shampoo_step(state, w, _random_layers(rng, [(4, 3)]))
        for acc in state.l_acc + state.r_acc:
            worst = max(worst, float(np.max(np.abs(acc - acc.T)) / np.max(np.abs(acc))))
    return worst


@invariant("optimizers", "sign_step_rms_identity", 1e-12)
def _rms_identity(rng):
    worst = 0.0
    for _ in range(20):
        shapes = [tuple(rng.integers(1, 6, 2)) for _ in range(2)]
        w, g = _random_layers(rng, shapes), _random_layers(rng, shapes)
        lr = float(rng.uniform(1e-3, 1.0))
        new = sign_descent_step(w, g, lr)
        step = np.concatenate([np.ravel(a - b) for a, b in zip(new, w)])
        worst = max(worst, _rel(float(np.linalg.norm(step)) / math.sqrt(step.size), lr))
    return worst


# models


@invariant("models", "majorization", 1e-10)
def _majorization(rng):
    worst = 0.0
    for d_in, d_out in [(4, 4), (8, 2), (2, 8)]:
        for _ in range(1000):
            data = make_dataset(d_in, d_out, int(rng.integers(1, 6)), int(rng.integers(2**31)))
            model = LinearModel(w=rng.standard_normal((d_out, d_in)))
            gap = majorization_gap(model, rng.standard_normal((d_out, d_in)), data)
            worst = max(worst, -gap)
    return worst


@invariant("models", "guaranteed_descent", 1e-12)
def _guaranteed_descent(rng):
    worst = 0.0
    for _ in range(10):
        d_in, d_out = int(rng.integers(2, 9)), int(rng.integers(1, 6))
        data = make_dataset(d_in, d_out, int(rng.integers(5, 30)), int(rng.integers(2**31)), noise=0.1)
        w = rng.standard_normal((d_out, d_in))
        lam = spectral_sharpness(data)
        losses = []
        for _ in range(100):
            model = LinearModel(w=w)
            losses.append(square_loss(model, data))
            w = w + solve_spectral_layers([square_loss_grad(model, data)], lam).updates[0]
        worst = max(worst, float(np.max(np.diff(losses))) / losses[0])
    return max(worst, 0.0)


@invariant("models", "gradient_exactness", 1e-5)
def _gradient_exactness(rng):
    worst = 0.0
    for _ in range(50):
        data = make_dataset(4, 3, 6, int(rng.integers(2**31)))
        w = rng.standard_normal((3, 4))
        analytic = square_loss_grad(LinearModel(w=w), data)
        numeric = central_difference(lambda x: square_loss(LinearModel(w=x), data), w)
        worst = max(worst, relative_error(analytic, numeric))

        # keep pre-activations away from the ramp kink
        for _ in range(20):
            w1 = rng.standard_normal((5, 4))
            if np.min(np.abs(data.inputs @ w1.T)) > 1e-3:
                break
        w2 = rng.standard_normal((3, 5))
        _, (g1, g2) = two_layer_forward_backward(TwoLayerNet(w1=w1, w2=w2), data)
        n1 = central_difference(lambda x: two_layer_forward_backward(TwoLayerNet(w1=x, w2=w2), data)[0], w1)
        n2 = central_difference(lambda x: two_layer_forward_backward(TwoLayerNet(w1=w1, w2=x), data)[0], w2)
        worst = max(worst, relative_error(g1, n1), relative_error(g2, n2))
    return worst


# cli (only in "all")

_PIPELINE_CONFIG = {
    "name": "verify-pipeline",
    "task": "linear",
    "optimizer": {"name": "steepest"},
    "dataset": {"d_in": 4, "d_out": 2, "n": 16},
    "steps": 12,
    "seed": 3,
    "checkpoint_every": 5,
}


def _run_pipeline(config: dict, path: Path) -> int:
    try:
        run_experiment(parse_experiment_configs(config)[0], str(path))
    except (NormDescentError, ValueError) as exc:
        return exit_code_for(exc)
    return 0


@invariant("cli", "train_determinism", 0.0)
def _determinism(rng):
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "run.csv"
        _run_pipeline(_PIPELINE_CONFIG, path)
        first = path.read_bytes()
        _run_pipeline(_PIPELINE_CONFIG, path)
        return 0.0 if path.read_bytes() == first else 1.0


@invariant("cli", "exit_code_contract", 0.0)
def _exit_codes(rng):
    invalid = dict(_PIPELINE_CONFIG, steps=0)
    diverging = dict(_PIPELINE_CONFIG, optimizer={"name": "sign_descent", "lr": 1e200})
    expected = [(_PIPELINE_CONFIG, 0), (invalid, ConfigError.exit_code), (diverging, NumericalAbort.exit_code)]
    mismatches = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, (config, code) in enumerate(expected):
            mismatches += _run_pipeline(config, Path(tmp) / f"run{i}.csv") != code
    return float(mismatches)
