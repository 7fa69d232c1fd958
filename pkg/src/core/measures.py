"""
Variance, metric adjusted skew information and the quantum uncertainty Q^f.

Everything here works in the eigenbasis of rho. There the superoperator
m^f(L_rho, R_rho) acts on a matrix entry (k, l) as multiplication by
m^f(lambda_k, lambda_l), so

    I^f(rho, H) = f(0)/2 * sum_kl (lambda_k - lambda_l)^2 / m^f(lambda_k, lambda_l) * |H_kl|^2

with H_kl the entries of H in that basis. Pairs with lambda_k == lambda_l
(exact comparison on the clamped spectrum) contribute nothing.

Q^f has three independent routes: summing I^f over an observable basis, the
spectral double sum, and the arithmetic-minus-tilde-mean sum. They are
reported side by side because their agreement is the correctness signal.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.special import xlogy

from .errors import DimensionError, KernelSupportError
from .qstate import gell_mann_basis, tensor
from .safety import KERNEL_TOL, VARIANCE_FLOOR
from .specfun import MonotoneFunctionSpec, arithmetic_mean, eval_mean, eval_tilde_mean

logger = logging.getLogger(__name__)


def _operand(rho, H, what="observable"):
    matrix = H.matrix if hasattr(H, 'matrix') else np.asarray(H, dtype=np.complex128)
    if matrix.shape != (rho.dim, rho.dim):
        raise DimensionError(
            f"{what} of shape {matrix.shape} does not act on a {rho.dim}-dimensional state",
            expected=rho.dim, actual=matrix.shape[0] if matrix.ndim else None,
        )
    return matrix


@dataclass(frozen=True, eq=False)
class MeanSuperoperatorContext:
    """m^f(L_rho, R_rho) in the eigenbasis of rho."""

    spectrum: npt.NDArray[np.float64]
    eigenvectors: npt.NDArray[np.complex128]
    spec: MonotoneFunctionSpec

    @classmethod
    def of(cls, spec, rho):
        return cls(rho.spectrum, rho.eigenvectors, spec)

    @cached_property
    def mean_matrix(self):
        """m^f(lambda_k, lambda_l)."""
        lam = self.spectrum
        return eval_mean(self.spec, lam[:, None], lam[None, :])

    @cached_property
    def kernel(self):
        """Entries where m^f vanishes, i.e. lambda_k = lambda_l = 0."""
        return self.mean_matrix == 0

    @cached_property
    def skew_weights(self):
        """f(0)/2 (lambda_k - lambda_l)^2 / m^f(lambda_k, lambda_l), 0 on equal pairs."""
        lam = self.spectrum
        gap = lam[:, None] - lam[None, :]
        live = gap != 0
        weights = np.zeros_like(self.mean_matrix)
        np.divide(gap ** 2, self.mean_matrix, out=weights, where=live)
        return self.spec.f_zero / 2 * weights

    def to_eigenbasis(self, operators):
        """V^dagger X V for one matrix or a stack shaped (k, n, n)."""
        V = self.eigenvectors
        return V.conj().T @ operators @ V

    def skew_sum(self, operators):
        """sum over a stack of I^f contributions; a single matrix gives I^f itself."""
        rotated = self.to_eigenbasis(operators)
        return float(np.sum(self.skew_weights * np.abs(rotated) ** 2))


def variance(rho, H):
    """V(rho, H) = tr rho H^2 - (tr rho H)^2."""
    matrix = _operand(rho, H)
    mean = rho.expectation(matrix)
    value = rho.expectation(matrix @ matrix) - mean ** 2
    if value < -VARIANCE_FLOOR:
        logger.warning("variance %.3e below the floor, clamped to 0", value)
    return max(value, 0.0)


def skew_information(spec, rho, H):
    """Metric adjusted skew information I^f(rho, H)."""
    matrix = _operand(rho, H)
    return MeanSuperoperatorContext.of(spec, rho).skew_sum(matrix)


def monotone_metric(spec, rho, A, B):
    """K^f_rho(A, B) = f(0)/2 tr A [m^f(L_rho, R_rho)]^{-1} B."""
    context = MeanSuperoperatorContext.of(spec, rho)
    a = context.to_eigenbasis(_operand(rho, A, "first operand"))
    b = context.to_eigenbasis(_operand(rho, B, "second operand"))
    kernel = context.kernel
    if np.any(kernel):
        leak = max(np.max(np.abs(a[kernel])), np.max(np.abs(b[kernel])))
        if leak > KERNEL_TOL:
            raise KernelSupportError(
                f"operand has weight {leak:.3e} on the kernel of m^f(L_rho, R_rho) (rank {rho.rank} state)"
            )
    inverse = np.zeros_like(context.mean_matrix)
    np.divide(1.0, context.mean_matrix, out=inverse, where=~kernel)
    # tr(A X) = sum_kl A_lk X_kl with X_kl = B_kl / m_kl
    value = np.sum(a.T * b * inverse)
    return float(spec.f_zero / 2 * value.real)


def commutator(rho, H):
    """i[rho, H], Hermitian for Hermitian H."""
    matrix = _operand(rho, H)
    return 1j * (rho.matrix @ matrix - matrix @ rho.matrix)


def _check_basis(rho, basis):
    if basis.dim != rho.dim:
        raise DimensionError(f"basis of dimension {basis.dim} used with a {rho.dim}-dimensional state",
                             expected=rho.dim, actual=basis.dim)


def q_uncertainty_basis(spec, rho, basis):
    """Q^f(rho) = sum_j I^f(rho, H_j) over an orthonormal observable basis."""
    _check_basis(rho, basis)
    return MeanSuperoperatorContext.of(spec, rho).skew_sum(basis.stack())


def q_uncertainty_spectral(spec, rho):
    """Q^f(rho) = f(0)/2 sum_kl (lambda_k - lambda_l)^2 / m^f(lambda_k, lambda_l)."""
    return float(np.sum(MeanSuperoperatorContext.of(spec, rho).skew_weights))


def q_uncertainty_tilde(spec, rho):
    """Q^f(rho) = sum_kl [m_a(lambda_k, lambda_l) - m^{f~}(lambda_k, lambda_l)]."""
    lam = rho.spectrum
    x, y = lam[:, None], lam[None, :]
    return float(np.sum(arithmetic_mean(x, y) - eval_tilde_mean(spec, x, y)))


def sqrt_density(rho):
    """sqrt(rho) from the cached spectral decomposition."""
    V = rho.eigenvectors
    return (V * np.sqrt(rho.spectrum)) @ V.conj().T


def qwy_closed_form(rho):
    """Q^{WY}(rho) = n - (tr sqrt(rho))^2."""
    return float(rho.dim - np.sum(np.sqrt(rho.spectrum)) ** 2)


def wigner_yanase_commutator(rho, H):
    """I^{WY}(rho, H) = -1/2 tr [sqrt(rho), H]^2, straight from the definition."""
    matrix = _operand(rho, H)
    root = sqrt_density(rho)
    bracket = root @ matrix - matrix @ root
    return float(-0.5 * np.trace(bracket @ bracket).real)


def von_neumann_entropy(rho):
    """S(rho) = -tr rho log rho, natural log, 0 log 0 = 0."""
    return float(-np.sum(xlogy(rho.spectrum, rho.spectrum)))


def total_variance(rho):
    """U(rho) = n - tr rho^2, the variance summed over any observable basis."""
    return float(rho.dim - rho.purity)


def brukner_zeilinger_information(rho):
    """tr rho^2 - 1/n."""
    return float(rho.purity - 1 / rho.dim)


def local_correlation(spec, state, keep='a', basis=None):
    """sum_j I^f(rho^ab, X_j) - sum_j I^f(rho^keep, A_j) for local X_j = A_j (x) 1 or 1 (x) A_j.

    Non-negative by weak superadditivity; zero exactly on product states.
    """
    m, n = state.dims
    local_dim = m if keep == 'a' else n
    if local_dim == 1 and basis is None:
        # only the identity acts on a one-dimensional factor
        return 0.0
    basis = basis if basis is not None else gell_mann_basis(local_dim)
    reduced = state.reduced(keep)
    _check_basis(reduced, basis)
    identity = np.eye(n if keep == 'a' else m)
    if keep == 'a':
        lifted = np.stack([tensor(A, identity) for A in basis.stack()])
    else:
        lifted = np.stack([tensor(identity, A) for A in basis.stack()])
    joint = MeanSuperoperatorContext.of(spec, state.state).skew_sum(lifted)
    return joint - q_uncertainty_basis(spec, reduced, basis)


@dataclass(frozen=True)
class UncertaintyReport:
    """Q^f by all three routes plus auxiliary measures of one state."""

    spec_name: str
    dim: int
    q_basis: float
    q_spectral: float
    q_tilde: float
    max_deviation: float
    entropy: float
    total_variance: float
    upper_bound: float
    within_bounds: bool
    q_wy_closed: Optional[float] = None

    def to_dict(self):
        document = {
            "spec": self.spec_name,
            "dim": self.dim,
            "routes": {"basis": self.q_basis, "spectral": self.q_spectral, "tilde": self.q_tilde},
            "max_deviation": self.max_deviation,
            "entropy": self.entropy,
            "total_variance": self.total_variance,
            "upper_bound": self.upper_bound,
            "within_bounds": self.within_bounds,
        }
        if self.q_wy_closed is not None:
            document["routes"]["wy_closed_form"] = self.q_wy_closed
        return document


def q_uncertainty_routes(spec, rho, basis=None):
    """Evaluate every Q^f route; the closed form joins in for wy."""
    if basis is None and rho.dim > 1:
        basis = gell_mann_basis(rho.dim)
    routes = {
        # a one-dimensional system only has the identity, which commutes with rho
        "basis": q_uncertainty_basis(spec, rho, basis) if basis is not None else 0.0,
        "spectral": q_uncertainty_spectral(spec, rho),
        "tilde": q_uncertainty_tilde(spec, rho),
    }
    closed = qwy_closed_form(rho) if spec.name == "wy" else None
    values = list(routes.values()) + ([closed] if closed is not None else [])
    deviation = max((abs(a - b) for a, b in combinations(values, 2)), default=0.0)
    upper = rho.dim - 1
    within = all(-1e-10 <= v <= upper + 1e-10 for v in values)
    logger.debug("Q^%s routes %s, deviation %.3e", spec.identifier, routes, deviation)
    return UncertaintyReport(
        spec_name=spec.identifier,
        dim=rho.dim,
        q_basis=routes["basis"],
        q_spectral=routes["spectral"],
        q_tilde=routes["tilde"],
        max_deviation=float(deviation),
        entropy=von_neumann_entropy(rho),
        total_variance=total_variance(rho),
        upper_bound=float(upper),
        within_bounds=bool(within),
        q_wy_closed=closed,
    )
