"""
Property suites behind ``skewforge selftest``.

Each suite draws its random inputs from one seed and records every check as a
residual against a tolerance. A check fails when its residual exceeds the
tolerance; the report keeps the worst residual per suite so two runs with the
same seed print identical reports.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import detect, measures, qstate, specfun
from .safety import CORRELATION_THRESHOLD, orthonormality_defect

logger = logging.getLogger(__name__)

SUITES = ("specfun", "qstate", "measures", "detect")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    worst_residual: float = 0.0
    worst_check: Optional[str] = None

    @property
    def passed(self):
        return not self.failures

    def check(self, label, residual, tol):
        """Record one check; residual is how far the property is violated (0 = exact)."""
        residual = float(residual)
        self.checks += 1
        if not np.isfinite(residual) or residual > tol:
            self.failures.append(f"{label}: residual {residual:.3e} > {tol:.0e}")
            logger.debug("selftest %s failed: %s", self.name, self.failures[-1])
        if residual > self.worst_residual or not np.isfinite(residual):
            self.worst_residual = residual
            self.worst_check = label

    def to_dict(self):
        return {
            "suite": self.name,
            "checks": self.checks,
            "failed": len(self.failures),
            "worst_residual": self.worst_residual,
            "worst_check": self.worst_check,
            "failures": list(self.failures),
        }


@dataclass
class SelftestReport:
    seed: int
    suites: List[SuiteResult]

    @property
    def passed(self):
        return all(s.passed for s in self.suites)

    def to_dict(self):
        return {"seed": self.seed, "passed": self.passed, "suites": [s.to_dict() for s in self.suites]}


def _relative(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(np.abs(b), 1e-300))


def _specfun_suite(result, seed):
    samples = 10.0 ** np.arange(-6, 7)
    grid = np.logspace(-3, 2, 20)
    xs, ys = np.meshgrid(grid, grid)
    rng = np.random.default_rng(seed)
    for spec in specfun.catalog():
        name = spec.identifier
        result.check(f"{name} f(1) = 1", abs(spec.f(1.0) - 1), 0.0)
        result.check(f"{name} symmetry", _relative(spec.f(samples), samples * spec.f(1 / samples)), 1e-12)
        values = spec.f(np.linspace(0, 50, 501))
        result.check(f"{name} nondecreasing", max(0.0, -np.min(np.diff(values))), 0.0)

        lhs = specfun.arithmetic_mean(xs, ys) - spec.tilde_mean(xs, ys)
        rhs = spec.f_zero / 2 * (xs - ys) ** 2 / spec.mean(xs, ys)
        off = xs != ys
        result.check(f"{name} tilde identity", _relative(lhs[off], rhs[off]), 1e-10)

        c = rng.uniform(0.1, 10)
        result.check(f"{name} homogeneity", _relative(spec.mean(c * xs, c * ys), c * spec.mean(xs, ys)), 1e-12)

        tilde = spec.tilde_mean(xs, ys)
        scale = specfun.arithmetic_mean(xs, ys)
        below = np.max((specfun.harmonic_mean(xs, ys) - tilde) / scale)
        above = np.max((tilde - scale) / scale)
        result.check(f"{name} harmonic <= tilde mean <= arithmetic", max(0.0, below, above), 1e-12)

    wyd_half = specfun.MonotoneFunctionSpec(specfun.WYD, 0.5)
    wy = specfun.MonotoneFunctionSpec(specfun.WY)
    t = np.concatenate([[0.0], np.logspace(-6, 6, 400), 1 + np.linspace(-2e-4, 2e-4, 41)])
    result.check("wyd:0.5 = wy", _relative(wyd_half.f(t), wy.f(t)), 1e-10)


def _qstate_suite(result, seed):
    seeds = qstate.child_seeds(seed, 80)
    for n in (2, 3, 4, 5):
        result.check(f"gell-mann orthonormality n={n}", orthonormality_defect(qstate.gell_mann_basis(n).stack()), 1e-12)
    for k, n in enumerate((2, 3, 4, 5, 6) * 4):
        rho = qstate.random_density(seeds[k], n, rank=1 + k % n)
        result.check(f"trace n={n}", abs(np.trace(rho.matrix).real - 1), 1e-12)
        result.check(f"reconstruction n={n}", np.max(np.abs(rho.reconstruct() - rho.matrix)), 1e-12)
        result.check(f"spectrum sign n={n}", max(0.0, -np.min(rho.spectrum)), 0.0)
    for k in range(5):
        result.check("haar unitarity", qstate.unitarity_defect(qstate.haar_unitary(seeds[20 + k], 4)), 1e-12)
    for k in range(5):
        a = qstate.random_density(seeds[25 + k], 2)
        b = qstate.random_density(seeds[30 + k], 3)
        state = detect.product_state(a, b)
        result.check("partial trace a", np.max(np.abs(state.reduced('a').matrix - a.matrix)), 1e-12)
        result.check("partial trace b", np.max(np.abs(state.reduced('b').matrix - b.matrix)), 1e-12)

    for k, n in enumerate((2, 3, 4, 5, 6) * 2):
        H = qstate.random_observable(seeds[40 + k], n).matrix
        values, vectors = qstate.eigh(H)
        rebuilt = vectors @ np.diag(values) @ vectors.conj().T
        result.check(f"eigh reconstruction n={n}", np.linalg.norm(rebuilt - H) / max(np.linalg.norm(H), 1.0), 1e-12)
        result.check(f"eigh ascending n={n}", max(0.0, -np.min(np.diff(values))), 0.0)

    for k, n in enumerate((2, 3, 4, 5)):
        basis = qstate.gell_mann_basis(n)
        M = qstate.random_observable(seeds[50 + k], n).matrix
        result.check(f"gell-mann expansion n={n}", np.max(np.abs(basis.expand(basis.coefficients(M)) - M)), 1e-12)

    for k, (m, n) in enumerate([(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)]):
        A = qstate.random_observable(seeds[60 + k], m).matrix
        B = qstate.random_observable(seeds[70 + k], n).matrix
        lhs = qstate.tensor(A, np.eye(n)) @ qstate.tensor(np.eye(m), B)
        result.check(f"tensor mixed product {m}x{n}", np.max(np.abs(lhs - qstate.tensor(A, B))), 1e-12)


def _rotated_bases(basis, seed, count=10):
    return [qstate.rotate_basis(basis, s) for s in qstate.child_seeds(seed, count)]


def _measures_suite(result, seed):
    seeds = qstate.child_seeds(seed, 250)
    catalog = specfun.catalog()
    sld = specfun.MonotoneFunctionSpec(specfun.SLD)
    wy = specfun.MonotoneFunctionSpec(specfun.WY)
    for k in range(20):
        n = 2 + k % 4
        rho = qstate.random_density(seeds[k], n)
        bases = [qstate.gell_mann_basis(n), qstate.eigen_adapted_basis(rho)]
        bases += _rotated_bases(qstate.gell_mann_basis(n), seeds[100 + k])
        for spec in catalog:
            name = spec.identifier
            report = measures.q_uncertainty_routes(spec, rho)
            result.check(f"{name} route agreement", report.max_deviation, 1e-8)
            q = report.q_spectral
            result.check(f"{name} bounds", max(0.0, -q, q - (n - 1)), 1e-10)
            spread = max(abs(measures.q_uncertainty_basis(spec, rho, b) - q) for b in bases)
            result.check(f"{name} basis independence", spread, 1e-8)
            if spec.name != specfun.SLD:
                result.check(f"{name} below sld", max(0.0, q - measures.q_uncertainty_spectral(sld, rho)), 1e-9)
        result.check("wy closed form", abs(measures.q_uncertainty_spectral(wy, rho) - measures.qwy_closed_form(rho)), 1e-9)

        H = qstate.random_observable(seeds[20 + k], n)
        G = qstate.random_observable(seeds[40 + k], n)
        U = qstate.haar_unitary(seeds[60 + k], n)
        rotated = qstate.conjugate(rho, U)
        X = measures.commutator(rho, H)
        for spec in catalog:
            name = spec.identifier
            skew = measures.skew_information(spec, rho, H)
            result.check(f"{name} I <= V", max(0.0, skew - measures.variance(rho, H)), 1e-10)
            metric = measures.monotone_metric(spec, rho, X, X)
            result.check(f"{name} K(i[rho,H], i[rho,H]) = I", abs(metric - skew) / max(skew, 1.0), 1e-9)
            forward = measures.monotone_metric(spec, rho, H, G)
            backward = measures.monotone_metric(spec, rho, G, H)
            result.check(f"{name} K symmetry", abs(forward - backward) / max(abs(forward), 1.0), 1e-9)
            moved = measures.skew_information(spec, rotated, U @ H.matrix @ U.conj().T)
            result.check(f"{name} unitary invariance of I", abs(moved - skew) / max(skew, 1.0), 1e-9)
            q_moved = measures.q_uncertainty_spectral(spec, rotated) - measures.q_uncertainty_spectral(spec, rho)
            result.check(f"{name} unitary invariance of Q", abs(q_moved), 1e-9)
        result.check("wy commutator oracle",
                     abs(measures.skew_information(wy, rho, H) - measures.wigner_yanase_commutator(rho, H)), 1e-9)

    for n in range(2, 9):
        pure = qstate.random_density(seeds[80 + n], n, rank=1)
        mixed = qstate.maximally_mixed(n)
        for spec in catalog:
            result.check(f"{spec.identifier} pure Q = n-1", abs(measures.q_uncertainty_spectral(spec, pure) - (n - 1)), 1e-10)
            result.check(f"{spec.identifier} mixed Q = 0", abs(measures.q_uncertainty_spectral(spec, mixed)), 1e-12)

    for k in range(50):
        n = 2 + k % 3
        sa, sb, sh, sw = qstate.child_seeds(seeds[200 + k], 4)
        a, b = qstate.random_density(sa, n), qstate.random_density(sb, n)
        H = qstate.random_observable(sh, n)
        w = float(np.random.default_rng(sw).uniform(0.05, 0.95))
        mixed = qstate.mixture([a, b], [w, 1 - w])
        for spec in catalog:
            name = spec.identifier
            bound = w * measures.skew_information(spec, a, H) + (1 - w) * measures.skew_information(spec, b, H)
            result.check(f"{name} convexity of I", max(0.0, measures.skew_information(spec, mixed, H) - bound), 1e-9)
            q_bound = w * measures.q_uncertainty_spectral(spec, a) + (1 - w) * measures.q_uncertainty_spectral(spec, b)
            result.check(f"{name} convexity of Q", max(0.0, measures.q_uncertainty_spectral(spec, mixed) - q_bound), 1e-9)

    for k in range(50):
        m, n = [(2, 2), (2, 3), (3, 3)][k % 3]
        state = qstate.BipartiteState((m, n), qstate.random_density(seeds[120 + k], m * n))
        for spec in catalog:
            result.check(f"{spec.identifier} weak superadditivity {m}x{n}",
                         max(0.0, -measures.local_correlation(spec, state)), 1e-9)

    for k in range(5):
        psi = qstate.random_density(seeds[170 + k], 6, rank=1)
        state = qstate.BipartiteState((2, 3), psi)
        for spec in catalog:
            gap = measures.q_uncertainty_spectral(spec, state.reduced('a')) - measures.q_uncertainty_spectral(spec, psi)
            result.check(f"{spec.identifier} pure partial trace", max(0.0, gap), 1e-9)


def _detect_suite(result, seed):
    seeds = qstate.child_seeds(seed, 130)
    catalog = specfun.catalog()
    sld = specfun.MonotoneFunctionSpec(specfun.SLD)
    for k in range(50):
        dims = [(2, 2), (2, 3), (3, 3)][k % 3]
        state = detect.random_product_state(seeds[k], *dims)
        for spec in catalog:
            result.check(f"{spec.identifier} product F_bar", abs(detect.f_bar(spec, state)), 1e-8)

    branches = [qstate.random_density(seeds[50], 2), qstate.random_density(seeds[51], 2)]
    cq = detect.classical_quantum_state([0.5, 0.5], branches)
    for spec in catalog:
        result.check(f"{spec.identifier} cq F_bar > 0",
                     max(0.0, CORRELATION_THRESHOLD - detect.f_bar(spec, cq)), 0.0)

    for k in range(50):
        m = 2 + k % 2
        state = detect.random_separable_state(seeds[60 + k], m, m)
        threshold = detect.entanglement_threshold(m)
        for spec in catalog:
            result.check(f"{spec.identifier} separable F_hat {m}x{m}", max(0.0, detect.f_hat(spec, state) - threshold), 1e-8)
        result.check(f"separable V_hat {m}x{m}", max(0.0, threshold - detect.v_hat(state)), 1e-8)

    for k in range(10):
        m, n = [(2, 2), (2, 3), (3, 3)][k % 3]
        state = qstate.BipartiteState((m, n), qstate.random_density(seeds[110 + k], m * n))
        bases = _rotated_bases(qstate.gell_mann_basis(m), seeds[120 + k])
        for spec in catalog:
            name = spec.identifier
            reference = detect.f_bar(spec, state)
            spread = max(abs(detect.f_bar(spec, state, b) - reference) for b in bases)
            result.check(f"{name} F_bar basis independence {m}x{n}", spread / max(reference, 1.0), 1e-8)
            if m == n:
                reference = detect.f_hat(spec, state)
                spread = max(abs(detect.f_hat(spec, state, b) - reference) for b in bases)
                result.check(f"{name} F_hat basis independence {m}x{m}", spread / max(reference, 1.0), 1e-8)

    for p in np.linspace(0, 1, 11):
        state = detect.isotropic_state(p, 3)
        for spec in catalog:
            numeric = detect.f_hat(spec, state)
            closed = detect.f_hat_isotropic_closed_form(spec, p, 3)
            result.check(f"{spec.identifier} isotropic closed form", abs(numeric - closed) / max(closed, 1.0), 1e-8)
        result.check("isotropic V_hat", abs(detect.v_hat(state) - detect.v_hat_isotropic_closed_form(p, 3)), 1e-8)
    result.check("isotropic p=0.7 F_hat^sld", abs(detect.f_hat_isotropic_closed_form(sld, 0.7) - 4.2609), 5e-4)


_RUNNERS = {
    "specfun": _specfun_suite,
    "qstate": _qstate_suite,
    "measures": _measures_suite,
    "detect": _detect_suite,
}


def run_selftest(seed=42, suites=SUITES):
    """Run the named suites; exceptions inside a suite count as one failed check."""
    results = []
    for name in suites:
        result = SuiteResult(name)
        try:
            _RUNNERS[name](result, seed)
        except Exception as e:  # a crash is a failed suite, not a crashed command
            logger.debug("selftest suite %s raised", name, exc_info=True)
            result.checks += 1
            result.failures.append(f"raised {type(e).__name__}: {e}")
        results.append(result)
    return SelftestReport(seed, results)

