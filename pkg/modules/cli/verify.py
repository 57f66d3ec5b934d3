# modules/cli/verify.py
"""
Identity suite behind `main.py verify`.

Every check compares an operator-side computation against an independent
reference (brute-force enumeration, closed formula, quadrature). With
break_me the operator side runs on lambda + 1e-3 while references keep the
configured lambda, so a healthy suite must then report failures.

Checks whose truncation has not converged at the chosen degree are reported
as skipped rather than failed.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

import config
from core.errors import KacZetaError
from core.model import ModelParams, partition_function_bruteforce, trivial_zero, validate_params
from core.run_config import RunConfig
from core.specialfns import hermite, mehler_kernel, mehler_partial_sum
from core.utils import get_logger, timed
from modules.kacgutz.basis import enumerate_basis
from modules.kacgutz.kernel import (gaussian_identity_check, kac_B_matrix, kernel_trace_quadrature,
                                    quadratic_form_identity)
from modules.kacgutz.matrix import assemble_matrix, gtrace_closed
from modules.ruelle.eigenfamilies import half_eigenfunction
from modules.ruelle.transfer import (ruelle_residual, ruelle_trace_closed, ruelle_trace_power,
                                     spectrum_beta0)
from modules.spectral.asymptotics import (asymptotic_branches, binom_identity_check, half_reduction_check,
                                          relative_deviation)
from modules.spectral.bargmann import bargmann_quadrature, fock_monomial
from modules.spectral.eigen import (default_degree, degeneracy_count, eigenvalues, polydim,
                                    reconstruct_eigenfunction)
from modules.spectral.roots import find_real_zeros_poles
from modules.spectral.zeta import series_radius, zeta, zeta_series_partial

logger = get_logger("modules.cli.verify")

BREAK_SHIFT = 1e-3

# degree for the lambda = 1/2 spectrum where the default is too coarse
HALF_DEGREE = {2: 20, 3: 16}


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "tolerance": self.tolerance, "detail": self.detail, "skipped": self.skipped}


def _within(name: str, value: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(value <= tol), float(value), tol, detail)


def _skip(name: str, detail: str) -> CheckResult:
    return CheckResult(name, True, None, None, detail, skipped=True)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def perturbed(params: ModelParams) -> ModelParams:
    return validate_params(params.m, params.lam + BREAK_SHIFT, params.J)


def half_model(params: ModelParams) -> ModelParams:
    """The lambda = 1/2 model with the configured channel weights, normalised to sum J = 1."""
    return validate_params(params.m, [0.5] * params.m, params.J / params.total_J)


def half_degree(m: int) -> int:
    return HALF_DEGREE.get(m, default_degree(m))


@dataclass
class VerifyContext:
    reference: ModelParams
    operator: ModelParams
    half_reference: ModelParams
    half_operator: ModelParams
    N: int
    threads: int = 1
    deterministic: bool = False
    results: List[CheckResult] = field(default_factory=list)


# ----------------------
# Checks
# ----------------------
def check_trace_partition(ctx: VerifyContext) -> CheckResult:
    worst = 0.0
    for beta in (-1.0, 0.0, 0.5, 1.0):
        for n in range(1, 7):
            Z = partition_function_bruteforce(ctx.reference, beta, n, ctx.threads, ctx.deterministic)
            trace = ruelle_trace_power(ctx.operator, beta, n, ctx.threads, ctx.deterministic)
            worst = max(worst, _rel(float(np.prod(1.0 - ctx.operator.lam ** n)) * trace.real, Z))
    return _within("trace_partition", worst, 1e-10, "prod(1-lambda^n) trace L^n vs brute-force Z_n")


def check_closed_trace(ctx: VerifyContext) -> CheckResult:
    worst = 0.0
    for beta in (-1.0, 0.0, 1.0):
        ref = ruelle_trace_closed(ctx.reference, beta).real
        worst = max(worst, _rel(gtrace_closed(ctx.operator, beta), ref),
                    _rel(ruelle_trace_power(ctx.operator, beta, 1).real, ref))
    return _within("closed_trace", worst, 1e-12, "trace G = trace L = fixed-point sum at n = 1")


def check_beta0_spectrum(ctx: VerifyContext) -> CheckResult:
    N = min(ctx.N, 10)
    spectrum = eigenvalues(ctx.operator, 0.0, N, with_tail=False)
    expected = np.array(spectrum_beta0(ctx.reference, N))
    return _within("beta0_spectrum", float(np.max(np.abs(spectrum.eigenvalues - expected) / expected)), 1e-12,
                   f"beta = 0 spectrum against 2 lambda^alpha, N={N}")


def _zeta_converged(value) -> bool:
    return max(value.drift().values(), default=0.0) <= config.TOLERANCES["det_drift"]


def check_beta0_zeta(ctx: VerifyContext) -> CheckResult:
    z = 0.25
    value = zeta(ctx.operator, 0.0, z, ctx.N, ctx.threads)
    if not _zeta_converged(value):
        return _skip("beta0_zeta", f"determinants still drifting at N={ctx.N}")
    return _within("beta0_zeta", _rel(value.value, 1.0 / (1.0 - 2.0 * z)), 1e-8, "zeta(0, 1/4) = 2")


def check_zeta_series(ctx: VerifyContext) -> CheckResult:
    beta = 0.3
    z = 0.25 * series_radius(ctx.reference, beta)
    value = zeta(ctx.operator, beta, z, ctx.N, ctx.threads)
    if not _zeta_converged(value):
        return _skip("zeta_series", f"determinants still drifting at N={ctx.N}")
    series = zeta_series_partial(ctx.reference, beta, z, 16, ctx.threads, ctx.deterministic)
    return _within("zeta_series", _rel(value.value, series), 1e-6, f"determinant product vs series at z={z:.6g}")


def check_reality(ctx: VerifyContext) -> CheckResult:
    basis = enumerate_basis(ctx.operator.m, min(ctx.N, 20))
    worst = 0.0
    for beta in (-2.0, -1.0, 1.0, 2.0):
        G = assemble_matrix(ctx.operator, beta, basis).entries
        ev = np.linalg.eigvals(G)
        worst = max(worst, float(np.max(np.abs(ev.imag))) / max(float(np.max(np.abs(ev))), 1e-300))
    return _within("reality", worst, 1e-8, "max |Im rho| / ||G|| of a nonsymmetric solve")


def check_positivity(ctx: VerifyContext) -> CheckResult:
    worst = 0.0
    for beta in (0.0, 0.5, 1.0, 2.0):
        spectrum = eigenvalues(ctx.operator, beta, min(ctx.N, 20), with_tail=False)
        worst = max(worst, -float(spectrum.eigenvalues.min()) / spectrum.norm)
    return _within("positivity", worst, 1e-10, "-min rho / ||S|| for beta >= 0")


def check_mehler(ctx: VerifyContext) -> CheckResult:
    grid = np.linspace(-1.0, 1.0, 9)
    worst = 0.0
    for x in grid:
        for y in grid:
            xs = np.full(ctx.reference.m, x)
            ys = np.full(ctx.reference.m, y)
            worst = max(worst, abs(mehler_partial_sum(ctx.operator, xs, ys, 40) - mehler_kernel(ctx.reference, xs, ys)))
    return _within("mehler", worst, 1e-10, "partial sums at N=40 vs closed kernel")


def check_b_matrix(ctx: VerifyContext) -> CheckResult:
    gamma = float(ctx.reference.gamma[0])
    worst = 0.0
    rng = np.random.default_rng(config.SAMPLING["seed"])
    for n in range(2, 9):
        report = kac_B_matrix(ctx.reference.total_J, gamma, n)
        if not report.positive_definite:
            return CheckResult("b_matrix", False, report.min_eigenvalue, 0.0, f"B not positive definite at n={n}")
        worst = max(worst, report.det_relative_error)
        for _ in range(10):
            lhs, rhs = quadratic_form_identity(gamma, rng.standard_normal(n))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return _within("b_matrix", worst, 1e-10, "det(B) closed form and quadratic-form identity, n=2..8")


def check_binomial(ctx: VerifyContext) -> CheckResult:
    bad = [(m, r, l) for m in range(2, 11) for r in range(11) for l in range(m)
           if len(set(binom_identity_check(m, r, l))) != 1]
    return CheckResult("binomial", not bad, float(len(bad)), 0.0, f"{len(bad)} failing (m, r, l) triples")


def check_half_eigenvalue(ctx: VerifyContext) -> CheckResult:
    beta = 1.0
    spectrum = eigenvalues(ctx.half_operator, beta, half_degree(ctx.half_operator.m), with_tail=False)
    rho1 = math.exp(beta * ctx.half_reference.total_J)
    gap = float(np.min(np.abs(spectrum.eigenvalues - rho1))) / rho1
    if gap > 1e-8:
        return CheckResult("half_eigenvalue", False, gap, 1e-8, "e^{beta sum J} missing from the lambda = 1/2 spectrum")
    m = ctx.half_operator.m
    for n in range(3 if m > 1 else 1):
        found = degeneracy_count(spectrum, rho1 * 0.5 ** n, 1e-6)
        if found != polydim(m, n):
            return CheckResult("half_eigenvalue", False, float(found), float(polydim(m, n)),
                               f"multiplicity of e^beta/2^{n} is {found}, expected {polydim(m, n)}")
    return _within("half_eigenvalue", gap, 1e-8, "e^{beta sum J} 2^{-n} with multiplicities C(m+n-2, n)")


def check_trivial_zero(ctx: VerifyContext) -> CheckResult:
    target = trivial_zero(ctx.half_reference).real
    roots = find_real_zeros_poles(ctx.half_operator, 1.0, (0.5, 0.9), half_degree(ctx.half_operator.m), 0.05,
                                  ctx.threads)
    if not roots:
        return CheckResult("trivial_zero", False, None, 1e-8, "no real root near log 2")
    miss = min(abs(r.beta - target) for r in roots)
    return _within("trivial_zero", miss, 1e-8, "factor root at beta = log 2 / sum J")


def check_reconstruction(ctx: VerifyContext) -> CheckResult:
    beta = 1.0
    reference = validate_params(1, [0.5], [1.0])
    operator = validate_params(1, ctx.half_operator.lam[:1], [1.0])
    spectrum = eigenvalues(operator, beta, 40, with_tail=False)
    _, v = spectrum.top("odd")
    F = reconstruct_eigenfunction(operator, beta, v, spectrum.basis)
    residual = ruelle_residual(reference, beta, F, math.exp(beta))
    return _within("reconstruction", residual, 1e-6, "residual of the top odd eigenvector polynomial against e^beta")


def check_bargmann(ctx: VerifyContext) -> CheckResult:
    worst = 0.0
    for a in range(3):
        for z in (0.0, 0.5, 0.3 + 0.2j):
            value = bargmann_quadrature(lambda x, a=a: hermite((a,), x), [z])
            worst = max(worst, abs(value - fock_monomial((a,), [z])))
    return _within("bargmann", worst, 1e-8, "B h_alpha = zeta_alpha, alpha <= 2")


def check_gaussian(ctx: VerifyContext) -> CheckResult:
    worst = 0.0
    for A, x in (([[2.0]], [0.3]), ([[0.5]], [-1.0]), ([[2.0, 0.5], [0.5, 1.0]], [0.2, -0.1])):
        lhs, rhs = gaussian_identity_check(A, x)
        worst = max(worst, abs(lhs - rhs) / lhs)
    return _within("gaussian_identity", worst, config.TOLERANCES["gaussian_identity"], "Cramer's Gaussian identity")


def check_kernel_trace(ctx: VerifyContext) -> CheckResult:
    if ctx.operator.m > 2:
        return _skip("kernel_trace", "quadrature supported for m <= 2")
    beta = 1.0
    value = kernel_trace_quadrature(ctx.operator, beta)
    return _within("kernel_trace", _rel(value, ruelle_trace_closed(ctx.reference, beta).real), 1e-8,
                   "int K_beta(xi, xi) vs closed trace")


def check_symmetry(ctx: VerifyContext) -> CheckResult:
    basis = enumerate_basis(ctx.operator.m, min(ctx.N, 12))
    worst = 0.0
    for beta in (-1.0, 1.0):
        G = assemble_matrix(ctx.operator, beta, basis)
        worst = max(worst, G.symmetry_defect() / float(np.max(np.abs(G.similarity_transform()))))
    return _within("symmetry", worst, config.TOLERANCES["symmetry"], "max |S - S^T| / max |S| for S = D^-1 G D")


def check_eigenfamilies(ctx: VerifyContext) -> CheckResult:
    m = ctx.half_reference.m
    worst = 0.0
    for beta in (-0.8, 0.3, 1.0):
        pairs = [half_eigenfunction(ctx.half_reference, beta)]
        if m > 1:
            pairs.append(half_eigenfunction(ctx.half_reference, beta, [1.0, -1.0] + [0.0] * (m - 2), degree=1))
        for F, rho in pairs:
            worst = max(worst, ruelle_residual(ctx.half_operator, beta, F, rho, ctx.threads))
    return _within("eigenfamilies", worst, config.TOLERANCES["residual"],
                   "residuals of the sinh family with rho = e^{beta sum J} and e^{beta sum J}/2")


def expected_multiplicity(single: np.ndarray, m: int, target: float, rel_tol: float) -> int:
    """Number of (k, n) with rho_k 2^{-n} = target, each counted C(m+n-2, n) times."""
    count = 0
    for rho in single[single > 0]:
        n = round(math.log2(rho / target))
        if n >= 0 and abs(rho * 0.5 ** n - target) <= rel_tol * target:
            count += polydim(m, n)
    return count


def check_model_reduction(ctx: VerifyContext) -> CheckResult:
    m = ctx.half_operator.m
    if m == 1:
        return _skip("model_reduction", "needs m >= 2")
    beta, tol = 1.0, 1e-6
    single = eigenvalues(validate_params(1, [0.5], [ctx.half_reference.total_J]), beta, 60,
                         with_tail=False).eigenvalues
    spectrum = eigenvalues(ctx.half_operator, beta, half_degree(m), with_tail=False)
    for rho in single[:5]:
        for n in range(3):
            target = rho * 0.5 ** n
            found = degeneracy_count(spectrum, target, tol)
            expected = expected_multiplicity(single, m, target, tol)
            if found != expected:
                return CheckResult("model_reduction", False, float(found), float(expected),
                                   f"rho={rho:.10g} / 2^{n} found {found} times, expected {expected}")
    return CheckResult("model_reduction", True, 0.0, 0.0,
                       "top 5 single-channel branches rho 2^-n, n <= 2, with multiplicities C(m+n-2, n)")


def check_asymptotics(ctx: VerifyContext) -> CheckResult:
    if np.any(ctx.reference.lam >= 0.5):
        return _skip("asymptotics", "needs every lambda_l < 1/2")
    N = max(ctx.N, 60) if ctx.operator.m == 1 else ctx.N
    deviations = []
    for beta in (5.0, 10.0):
        (_, observed, predicted), = asymptotic_branches(ctx.operator, beta, "+inf", "even", N=N, count=1)
        deviations.append(relative_deviation(observed, predicted))
    return _within("asymptotics", deviations[1], deviations[0],
                   "leading even eigenvalue approaches lambda^0 e^{beta J.(1-Lambda)^-1 lambda} from beta 5 to 10")


def check_half_reduction(ctx: VerifyContext) -> CheckResult:
    if ctx.half_reference.m == 1:
        return _skip("half_reduction", "needs m >= 2")
    worst = 0.0
    for rho1 in (0.5, 0.3):
        product, closed = half_reduction_check(ctx.half_reference, math.log(rho1) / ctx.half_reference.total_J)
        worst = max(worst, _rel(product, closed))
    return _within("half_reduction", worst, 1e-10, "rho_1 branches collapse to (1 - rho_1/2)/(1 - rho_1)")


CHECKS: List[Callable[[VerifyContext], CheckResult]] = [
    check_trace_partition, check_closed_trace, check_beta0_spectrum, check_beta0_zeta, check_zeta_series,
    check_reality, check_positivity, check_symmetry, check_mehler, check_b_matrix, check_binomial,
    check_half_eigenvalue, check_eigenfamilies, check_model_reduction, check_half_reduction, check_trivial_zero,
    check_asymptotics, check_reconstruction, check_bargmann, check_gaussian, check_kernel_trace,
]

# failures a single check may raise without ending the suite
CHECK_ERRORS = (KacZetaError, ArithmeticError)


def run_suite(cfg: RunConfig) -> List[CheckResult]:
    reference = cfg.params()
    operator = perturbed(reference) if cfg.break_me else reference
    half_reference = half_model(reference)
    half_operator = perturbed(half_reference) if cfg.break_me else half_reference
    ctx = VerifyContext(reference, operator, half_reference, half_operator,
                        cfg.degree or default_degree(reference.m), cfg.workers, cfg.deterministic)
    if cfg.break_me:
        logger.warning("break-me: operator side runs on lambda + %g", BREAK_SHIFT)
    for check in CHECKS:
        name = check.__name__.replace("check_", "")
        try:
            with timed(logger, f"check {name}"):
                result = check(ctx)
        except CHECK_ERRORS as exc:
            logger.error("check %s raised %s: %s", name, type(exc).__name__, exc)
            result = CheckResult(name, False, None, None, f"{type(exc).__name__}: {exc}")
        logger.info("check %s: %s", result.name, "skipped" if result.skipped else ("ok" if result.passed else "FAILED"))
        ctx.results.append(result)
    return ctx.results


def cmd_verify(cfg: RunConfig) -> dict:
    results = run_suite(cfg)
    return {"command": "verify", "config": cfg.with_z(config.MODEL["z"]).to_dict(),
            "checks": [r.to_dict() for r in results],
            "passed": all(r.passed for r in results)}
