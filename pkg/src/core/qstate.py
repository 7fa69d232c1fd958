"""
Dense complex Hermitian linear algebra for finite-dimensional quantum states.

Density matrices carry their spectral decomposition, computed once at
construction; every measure downstream reads the cached spectrum instead of
diagonalizing again. Random generators take explicit integer seeds and never
touch global RNG state.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .errors import ContractViolationError, DimensionError, DomainError, StateInvariantError
from .safety import (
    ORTHONORMAL_TOL,
    check_finite,
    check_hermitian,
    check_square,
    check_unit_trace,
    clamp_spectrum,
    orthonormality_defect,
)

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

RANK_TOL = 1e-12


def as_complex_matrix(entries, what="matrix"):
    """Coerce to a finite, square complex128 array."""
    matrix = np.array(entries, dtype=np.complex128)
    check_square(matrix, what)
    return check_finite(matrix, what)


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix, symmetrized exactly at construction."""

    matrix: ComplexMatrix

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix, "observable")
        matrix = check_hermitian(matrix, "observable")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self):
        return self.matrix.shape[0]


def _as_array(operand):
    if isinstance(operand, (Observable, DensityMatrix)):
        return operand.matrix
    return as_complex_matrix(operand)


def eigh(M):
    """Eigendecomposition of a Hermitian matrix: values ascending, unitary columns."""
    matrix = check_hermitian(_as_array(M), "eigh input")
    values, vectors = scipy.linalg.eigh(matrix)
    return values, vectors


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    ``spectrum`` is sorted descending, clamped to be non-negative and sums
    to one; ``eigenvectors`` holds the matching orthonormal columns.
    """

    matrix: ComplexMatrix
    spectrum: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    @classmethod
    def from_matrix(cls, entries):
        matrix = as_complex_matrix(entries, "density matrix")
        matrix = check_hermitian(matrix, "density matrix", error=StateInvariantError)
        matrix = check_unit_trace(matrix)
        values, vectors = scipy.linalg.eigh(matrix)
        values = np.ascontiguousarray(clamp_spectrum(values[::-1]))
        vectors = np.ascontiguousarray(vectors[:, ::-1])
        for array in (matrix, values, vectors):
            array.setflags(write=False)
        return cls(matrix, values, vectors)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def rank(self):
        return int(np.count_nonzero(self.spectrum > RANK_TOL))

    @cached_property
    def purity(self):
        """tr rho^2 from the spectrum."""
        return float(np.sum(self.spectrum ** 2))

    def expectation(self, H):
        """tr(rho H) for a Hermitian H (real part)."""
        return float(np.real(np.einsum("ab,ba->", self.matrix, _as_array(H))))

    def reconstruct(self):
        return (self.eigenvectors * self.spectrum) @ self.eigenvectors.conj().T


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """n^2 trace-orthonormal observables spanning the Hermitian n x n matrices."""

    dim: int
    elements: Tuple[Observable, ...]

    def __post_init__(self):
        elements = tuple(e if isinstance(e, Observable) else Observable(e) for e in self.elements)
        if len(elements) != self.dim ** 2 or any(e.dim != self.dim for e in elements):
            raise DimensionError(
                f"a basis of {self.dim}x{self.dim} observables needs {self.dim ** 2} elements",
                expected=self.dim ** 2, actual=len(elements),
            )
        object.__setattr__(self, 'elements', elements)
        defect = orthonormality_defect(self.stack())
        if defect > ORTHONORMAL_TOL:
            raise ContractViolationError(f"basis is not trace-orthonormal: residual {defect:.3e}")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, index):
        return self.elements[index]

    def stack(self):
        """Elements as one array shaped (n^2, n, n)."""
        return np.stack([e.matrix for e in self.elements])

    def coefficients(self, M):
        """Real coordinates tr(M H_j) of a Hermitian M."""
        matrix = _as_array(M)
        if matrix.shape != (self.dim, self.dim):
            raise DimensionError("operand does not match the basis dimension",
                                 expected=self.dim, actual=matrix.shape[0])
        return np.real(np.einsum('jab,ba->j', self.stack(), matrix))

    def expand(self, coefficients):
        """sum_j c_j H_j."""
        return np.einsum('j,jab->ab', np.asarray(coefficients, dtype=float), self.stack())

    def transform(self, orthogonal):
        """K_i = sum_j a_ij H_j for a real orthogonal a."""
        orthogonal = np.asarray(orthogonal, dtype=float)
        size = len(self.elements)
        if orthogonal.shape != (size, size):
            raise DimensionError("rotation must be square in the number of basis elements",
                                 expected=size, actual=orthogonal.shape)
        rotated = np.einsum('ij,jab->iab', orthogonal, self.stack())
        return HermitianBasis(self.dim, tuple(Observable(m) for m in rotated))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A density matrix on C^m (x) C^n together with its factor dimensions."""

    dims: Tuple[int, int]
    state: DensityMatrix

    def __post_init__(self):
        m, n = (int(d) for d in self.dims)
        if m < 1 or n < 1:
            raise DomainError(f"subsystem dimensions must be positive, got {self.dims}")
        if m * n != self.state.dim:
            raise DimensionError(
                f"dims {m}x{n} do not factor a {self.state.dim}-dimensional state",
                expected=m * n, actual=self.state.dim,
            )
        object.__setattr__(self, 'dims', (m, n))

    @property
    def matrix(self):
        return self.state.matrix

    def reduced(self, keep):
        return partial_trace(self, keep)


def _check_dim(n, minimum, what="dimension"):
    if int(n) != n or n < minimum:
        raise DomainError(f"{what} must be an integer >= {minimum}, got {n}")
    return int(n)


def _matrix_unit(n, row, col):
    unit = np.zeros((n, n), dtype=np.complex128)
    unit[row, col] = 1
    return unit


def gell_mann_basis(n):
    """Normalized generalized Gell-Mann matrices.

    Order: identity / sqrt(n), symmetric pairs, antisymmetric pairs, then the
    n - 1 diagonal generators.
    """
    n = _check_dim(n, 2)
    elements = [np.eye(n, dtype=np.complex128) / np.sqrt(n)]
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        elements.append((_matrix_unit(n, j, k) + _matrix_unit(n, k, j)) / np.sqrt(2))
    for j, k in pairs:
        elements.append(-1j * (_matrix_unit(n, j, k) - _matrix_unit(n, k, j)) / np.sqrt(2))
    for level in range(1, n):
        diagonal = np.zeros(n)
        diagonal[:level] = 1
        diagonal[level] = -level
        elements.append(np.diag(diagonal).astype(np.complex128) / np.sqrt(level * (level + 1)))
    return HermitianBasis(n, tuple(Observable(e) for e in elements))


def _adapted_basis(vectors):
    # projectors, then (|k><j| + |j><k|)/sqrt2, then (i|k><j| - i|j><k|)/sqrt2, k < j
    n = vectors.shape[0]
    columns = [vectors[:, j] for j in range(n)]
    elements = [np.outer(v, v.conj()) for v in columns]
    pairs = [(k, j) for k in range(n) for j in range(k + 1, n)]
    for k, j in pairs:
        outer = np.outer(columns[k], columns[j].conj())
        elements.append((outer + outer.conj().T) / np.sqrt(2))
    for k, j in pairs:
        outer = np.outer(columns[k], columns[j].conj())
        elements.append((1j * outer - 1j * outer.conj().T) / np.sqrt(2))
    return HermitianBasis(n, tuple(Observable(e) for e in elements))


def eigen_adapted_basis(rho):
    """Observable basis built from the eigenvectors of rho."""
    return _adapted_basis(rho.eigenvectors)


def example_basis(n):
    """The adapted basis of the computational basis |0>, ..., |n-1>."""
    n = _check_dim(n, 2)
    return _adapted_basis(np.eye(n, dtype=np.complex128))


def random_orthogonal(seed, size):
    """Seeded Haar-random real orthogonal matrix (QR with sign correction)."""
    rng = np.random.default_rng(seed)
    q, r = scipy.linalg.qr(rng.standard_normal((size, size)))
    return q * np.sign(np.diag(r))


def rotate_basis(basis, seed):
    """Apply a seeded random real orthogonal n^2 x n^2 matrix to the basis."""
    return basis.transform(random_orthogonal(seed, len(basis)))


def tensor(A, B):
    """Kronecker product A (x) B."""
    return np.kron(_as_array(A), _as_array(B))


def partial_trace(state, keep):
    """Reduced state on factor 'a' or 'b'."""
    m, n = state.dims
    blocks = state.matrix.reshape(m, n, m, n)
    if keep == 'a':
        reduced = np.einsum('ijkj->ik', blocks)
    elif keep == 'b':
        reduced = np.einsum('ijil->jl', blocks)
    else:
        raise DomainError(f"keep must be 'a' or 'b', got {keep!r}")
    return DensityMatrix.from_matrix(reduced)


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_density(seed, n, rank=None):
    """rho = G G^dagger / tr(G G^dagger) for a seeded n x rank complex Gaussian G."""
    n = _check_dim(n, 1)
    rank = n if rank is None else rank
    if int(rank) != rank or not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}], got {rank}")
    ginibre = _complex_gaussian(np.random.default_rng(seed), (n, int(rank)))
    product = ginibre @ ginibre.conj().T
    return DensityMatrix.from_matrix(product / np.trace(product).real)


def haar_unitary(seed, n):
    """Seeded Haar-random unitary: QR of a complex Gaussian with phase fixing."""
    n = _check_dim(n, 1)
    q, r = scipy.linalg.qr(_complex_gaussian(np.random.default_rng(seed), (n, n)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_observable(seed, n):
    """Seeded random Hermitian matrix (GUE-like)."""
    n = _check_dim(n, 1)
    gaussian = _complex_gaussian(np.random.default_rng(seed), (n, n))
    return Observable((gaussian + gaussian.conj().T) / 2)


def pure_state(vector):
    """|psi><psi| of a (not necessarily normalized) vector."""
    psi = np.asarray(vector, dtype=np.complex128).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise DomainError("cannot build a pure state from the zero vector")
    psi = psi / norm
    return DensityMatrix.from_matrix(np.outer(psi, psi.conj()))


def maximally_mixed(n):
    n = _check_dim(n, 1)
    return DensityMatrix.from_matrix(np.eye(n, dtype=np.complex128) / n)


def mixture(states, weights):
    """Convex combination sum_j w_j rho_j."""
    weights = np.asarray(weights, dtype=float)
    if len(states) != len(weights) or len(states) == 0:
        raise DimensionError("states and weights must have the same non-zero length",
                             expected=len(states), actual=len(weights))
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise DomainError(f"weights must be a probability vector, got {weights}")
    dims = {rho.dim for rho in states}
    if len(dims) != 1:
        raise DimensionError("all mixed states must share one dimension", actual=sorted(dims))
    return DensityMatrix.from_matrix(sum(w * rho.matrix for w, rho in zip(weights, states)))


def conjugate(rho, U):
    """U rho U^dagger."""
    unitary = np.asarray(U, dtype=np.complex128)
    return DensityMatrix.from_matrix(unitary @ rho.matrix @ unitary.conj().T)


def unitarity_defect(U):
    """max |U^dagger U - 1|."""
    unitary = np.asarray(U, dtype=np.complex128)
    return float(np.max(np.abs(unitary.conj().T @ unitary - np.eye(unitary.shape[0]))))


def child_seeds(seed, count):
    """Deterministic integer seeds derived from one parent seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]
