"""
Tolerance policy and guards applied before any quantity is computed.

Every numerical threshold used across SkewForge lives here so that the
library, the CLI and the selftest agree on what "within tolerance" means.
"""

import logging

import numpy as np

from .errors import ContractViolationError, StateInvariantError

logger = logging.getLogger(__name__)

# Construction-time contracts
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
CLAMP_TOL = 1e-9
NOISE_TOL = 1e-12
ORTHONORMAL_TOL = 1e-9

# Metric and measure conventions
KERNEL_TOL = 1e-10
VARIANCE_FLOOR = 1e-12

# Detector verdicts
VERDICT_BAND = 1e-8
CORRELATION_THRESHOLD = 1e-6


def check_finite(matrix, what="matrix"):
    """Reject NaN/Inf entries."""
    if not np.all(np.isfinite(matrix)):
        raise StateInvariantError(f"{what} has non-finite entries")
    return matrix


def check_square(matrix, what="matrix"):
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise ContractViolationError(f"{what} must be a non-empty square matrix, got shape {matrix.shape}")
    return matrix


def hermitian_defect(matrix):
    """Largest entry of |M - M^dagger|."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def check_hermitian(matrix, what="matrix", tol=HERMITIAN_TOL, error=ContractViolationError):
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    defect = hermitian_defect(matrix)
    if defect > tol:
        raise error(f"{what} is not Hermitian: max |M - M^dagger| = {defect:.3e} > {tol:.0e}")
    return (matrix + matrix.conj().T) / 2


def check_unit_trace(matrix, what="density matrix", tol=TRACE_TOL):
    """Validate tr M = 1 and renormalize.

    A trace already equal to 1 to machine precision is left untouched.
    """
    trace = complex(np.trace(matrix))
    if abs(trace.imag) > tol or abs(trace.real - 1.0) > tol:
        raise StateInvariantError(f"{what} has trace {trace.real:.12g}{trace.imag:+.3e}j, expected 1 within {tol:.0e}")
    if abs(trace.real - 1.0) <= matrix.shape[0] * np.finfo(float).eps:
        return matrix
    return matrix / trace.real


def assess_spectrum(values):
    """Classify the negative part of a spectrum.

    Returns a dict with the smallest eigenvalue and a warning level:
    'low' (nothing to clamp or pure rounding noise), 'high' (clamped, worth
    a warning) or 'critical' (not a state).
    """
    values = np.asarray(values, dtype=float)
    smallest = float(values.min()) if values.size else 0.0
    info = {
        'min_eigenvalue': smallest,
        'clamped': int(np.count_nonzero(values < 0)),
        'warning_level': 'low',
    }
    if smallest < -CLAMP_TOL:
        info['warning_level'] = 'critical'
    elif smallest < -NOISE_TOL:
        info['warning_level'] = 'high'
    return info


def spectral_noise_floor(values):
    """Eigenvalues this close to 0 are rounding noise of the eigensolver: 10 n eps max|lambda|."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    return 10 * values.size * np.finfo(float).eps * float(np.max(np.abs(values)))


def clamp_spectrum(values, what="density matrix"):
    """Set eigenvalues in [-CLAMP_TOL, noise floor] to exactly zero and renormalize to sum 1.

    Zeros come out exact; f(t) - f(0) grows like t^alpha near 0 and would
    amplify eigensolver noise.
    """
    values = np.asarray(values, dtype=float)
    info = assess_spectrum(values)
    if info['warning_level'] == 'critical':
        raise StateInvariantError(
            f"{what} is not positive semidefinite: eigenvalue {info['min_eigenvalue']:.3e} < -{CLAMP_TOL:.0e}"
        )
    if info['warning_level'] == 'high':
        logger.warning("clamped %d negative eigenvalue(s) of %s, smallest %.3e",
                       info['clamped'], what, info['min_eigenvalue'])
    flush = (values < 0) | (np.abs(values) <= spectral_noise_floor(values))
    if not np.any(flush & (values != 0)):
        return values
    clamped = np.where(flush, 0.0, values)
    return clamped / clamped.sum()


def orthonormality_defect(stack):
    """max |tr(H_i H_j) - delta_ij| over a stack of matrices shaped (k, n, n)."""
    flat = stack.reshape(stack.shape[0], -1)
    # tr(H_i H_j) = sum_ab (H_i)_ab (H_j)_ba = <H_i^dagger, H_j> for Hermitian H
    gram = flat.conj() @ flat.T
    return float(np.max(np.abs(gram - np.eye(stack.shape[0]))))
