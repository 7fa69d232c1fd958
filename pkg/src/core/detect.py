"""
Correlation and entanglement detectors for bipartite states.

F_bar (correlations seen by local observables of system a) vanishes exactly
on product states. F_hat sums I^f over the local sums A_j (x) 1 + 1 (x) B_j;
separable states never exceed 2m - 2, so a larger value certifies
entanglement. V_hat is the variance counterpart, where separable states stay
at or above 2m - 2. Both entanglement criteria are sufficient only: staying on
the safe side of the threshold proves nothing.
"""

import logging
from dataclasses import dataclass, field
from typing import Mapping, Tuple

import numpy as np

from .errors import DimensionError, DomainError, UnsupportedError
from .measures import (
    MeanSuperoperatorContext,
    local_correlation,
    variance,
)
from .qstate import (
    BipartiteState,
    DensityMatrix,
    child_seeds,
    gell_mann_basis,
    mixture,
    random_density,
    tensor,
)
from .safety import CORRELATION_THRESHOLD, VERDICT_BAND
from .specfun import eval_mean

logger = logging.getLogger(__name__)

F_BAR = "f_bar"
F_HAT = "f_hat"
V_HAT = "v_hat"

ENTANGLED = "entangled"
CORRELATED = "correlated"
PRODUCT = "product"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DetectionReport:
    """One detector value with its threshold and verdict."""

    measure_name: str
    spec_name: str
    value: float
    threshold: float
    verdict: str
    dims: Tuple[int, int]
    details: Mapping[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {
            "measure": self.measure_name,
            "spec": self.spec_name,
            "value": self.value,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "dims": list(self.dims),
            **({"details": dict(self.details)} if self.details else {}),
        }


def _require_square(state, what):
    m, n = state.dims
    if m != n:
        raise DomainError(f"{what} needs equal subsystem dimensions (m = n), got {m}x{n}")
    if m < 2:
        raise DomainError(f"{what} needs subsystems of dimension at least 2, got {m}x{n}")
    return m


def entanglement_threshold(m):
    """2m - 2, the separable ceiling of F_hat and floor of V_hat."""
    return 2.0 * m - 2.0


def _local_sums(state, basis, basis_b):
    m = state.dims[0]
    basis = basis if basis is not None else gell_mann_basis(m)
    basis_b = basis_b if basis_b is not None else basis
    if basis.dim != m or basis_b.dim != m:
        raise DimensionError("local bases must match the subsystem dimension", expected=m,
                             actual=(basis.dim, basis_b.dim))
    identity = np.eye(m)
    return np.stack([tensor(A, identity) + tensor(identity, B)
                     for A, B in zip(basis.stack(), basis_b.stack())])


def f_bar(spec, state, basis=None):
    """sum_j I^f(rho^ab, A_j (x) 1) - sum_j I^f(rho^a, A_j)."""
    value = local_correlation(spec, state, 'a', basis)
    if value < -VERDICT_BAND:
        logger.warning("F_bar = %.3e is negative beyond tolerance for %s", value, spec.identifier)
        return value
    return max(value, 0.0)


def f_hat(spec, state, basis=None, basis_b=None):
    """sum_j I^f(rho^ab, A_j (x) 1 + 1 (x) B_j), defined for m = n."""
    _require_square(state, "F_hat")
    return MeanSuperoperatorContext.of(spec, state.state).skew_sum(_local_sums(state, basis, basis_b))


def v_hat(state, basis=None, basis_b=None):
    """sum_j V(rho^ab, A_j (x) 1 + 1 (x) B_j), defined for m = n."""
    _require_square(state, "V_hat")
    return float(sum(variance(state.state, X) for X in _local_sums(state, basis, basis_b)))


def maximally_entangled_vector(d):
    """|Omega> = sum_i |ii> / sqrt(d)."""
    omega = np.zeros(d * d, dtype=np.complex128)
    omega[::d + 1] = 1 / np.sqrt(d)
    return omega


def isotropic_state(p, d=3):
    """(1 - p) 1/d^2 + p |Omega><Omega|."""
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    d = int(d)
    omega = maximally_entangled_vector(d)
    matrix = (1 - p) * np.eye(d * d) / d ** 2 + p * np.outer(omega, omega.conj())
    return BipartiteState((d, d), DensityMatrix.from_matrix(matrix))


def f_hat_isotropic_closed_form(spec, p, d=3, strict=False):
    """(20/3) f(0) p^2 / m^f(1/9 + 8p/9, 1/9 - p/9) for the 3x3 isotropic state.

    Other d fall back to the numeric sum, or raise UnsupportedError when
    ``strict`` is set.
    """
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if d != 3:
        if strict:
            raise UnsupportedError(f"closed form of F_hat is known for d = 3 only, got d = {d}")
        logger.debug("no closed form for d = %s, evaluating F_hat numerically", d)
        return f_hat(spec, isotropic_state(p, d))
    if p == 0:
        return 0.0
    return 20 / 3 * spec.f_zero * p ** 2 / eval_mean(spec, 1 / 9 + 8 * p / 9, 1 / 9 - p / 9)


def v_hat_isotropic_closed_form(p, d=3):
    """2d - 2/d + 2p(1 - 1/d); 16/3 + 4p/3 at d = 3."""
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return 2 * d - 2 / d + 2 * p * (1 - 1 / d)


def product_state(rho_a, rho_b):
    return BipartiteState((rho_a.dim, rho_b.dim), DensityMatrix.from_matrix(tensor(rho_a, rho_b)))


def classical_quantum_state(probs, branch_states):
    """sum_j p_j |j><j| (x) rho_j."""
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or len(probs) != len(branch_states) or len(probs) == 0:
        raise DimensionError("one probability per branch state is required",
                             expected=len(branch_states), actual=probs.size)
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise DomainError(f"probabilities must be non-negative and sum to 1, got {probs}")
    dims = {rho.dim for rho in branch_states}
    if len(dims) != 1:
        raise DimensionError("branch states must share one dimension", actual=sorted(dims))
    m, n = len(probs), dims.pop()
    matrix = np.zeros((m * n, m * n), dtype=np.complex128)
    for j, (p, rho) in enumerate(zip(probs, branch_states)):
        projector = np.zeros((m, m))
        projector[j, j] = 1
        matrix += p * tensor(projector, rho)
    return BipartiteState((m, n), DensityMatrix.from_matrix(matrix))


def random_product_state(seed, m, n):
    seed_a, seed_b = child_seeds(seed, 2)
    return product_state(random_density(seed_a, m), random_density(seed_b, n))


def random_separable_state(seed, m, n, terms=None):
    """sum_j w_j rho^a_j (x) rho^b_j with 2-5 Ginibre product terms and normalized uniform weights."""
    rng = np.random.default_rng(seed)
    terms = int(rng.integers(2, 6)) if terms is None else int(terms)
    weights = rng.uniform(size=terms)
    weights /= weights.sum()
    seeds = child_seeds(seed, 2 * terms)
    products = [
        DensityMatrix.from_matrix(tensor(random_density(seeds[2 * j], m), random_density(seeds[2 * j + 1], n)))
        for j in range(terms)
    ]
    return BipartiteState((m, n), mixture(products, weights))


def detect_correlation(spec, state):
    """F_bar verdict: correlated above CORRELATION_THRESHOLD, product otherwise."""
    value = f_bar(spec, state)
    verdict = CORRELATED if value > CORRELATION_THRESHOLD else PRODUCT
    return DetectionReport(F_BAR, spec.identifier, value, 0.0, verdict, state.dims)


def variance_criterion(state):
    """V_hat < 2m - 2 certifies entanglement."""
    m = _require_square(state, "the variance criterion")
    value = v_hat(state)
    threshold = entanglement_threshold(m)
    verdict = ENTANGLED if value < threshold - VERDICT_BAND else INCONCLUSIVE
    return DetectionReport(V_HAT, "variance", value, threshold, verdict, state.dims)


def detect_entanglement(spec, state):
    """Entangled if F_hat > 2m - 2 or V_hat < 2m - 2 (outside the guard band)."""
    m = _require_square(state, "entanglement detection")
    threshold = entanglement_threshold(m)
    skew = f_hat(spec, state)
    spread = v_hat(state)
    fired = skew > threshold + VERDICT_BAND or spread < threshold - VERDICT_BAND
    verdict = ENTANGLED if fired else INCONCLUSIVE
    logger.debug("F_hat^%s = %.12g, V_hat = %.12g, threshold %g -> %s",
                 spec.identifier, skew, spread, threshold, verdict)
    return DetectionReport(F_HAT, spec.identifier, skew, threshold, verdict, state.dims,
                           details={V_HAT: spread})
