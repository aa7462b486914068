"""Complex matrix primitives and quantum-information functionals.

Density matrices are plain ``numpy.ndarray`` objects (square, complex,
row-major in the computational tensor-product basis |0...0>, |0...1>, ...).
Validation is explicit: callers that receive matrices from outside the
package run them through :func:`validate_density_matrix` or
:func:`psd_project`.

All functionals are eigendecomposition based, with eigenvalues clamped at
zero where a positive-semidefinite input is only physical up to
floating-point noise (MCMC means, externally supplied point estimates).
"""

from __future__ import annotations

import numpy as np

# Default tolerances for the density-matrix contract.
TRACE_ATOL = 1e-10
HERM_ATOL = 1e-10
EIG_ATOL = 1e-10

# Looser Hermiticity tolerance for functionals that accept numerically
# noisy but conceptually physical inputs.
FUNCTIONAL_HERM_ATOL = 1e-8


class DimensionMismatchError(ValueError):
    """Operands act on different Hilbert-space dimensions."""


class PhysicalityError(ValueError):
    """Matrix violates the density-matrix contract beyond tolerance."""


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m^dagger) / 2."""
    return 0.5 * (m + m.conj().T)


def _as_square(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    return m


def _check_hermitian(m: np.ndarray, atol: float, name: str = "matrix") -> None:
    dev = np.abs(m - m.conj().T).max() if m.size else 0.0
    if dev > atol:
        raise PhysicalityError(f"{name} is not Hermitian: max deviation {dev:.3e} > {atol:.0e}")


def validate_density_matrix(
    rho,
    *,
    trace_atol: float = TRACE_ATOL,
    herm_atol: float = HERM_ATOL,
    eig_atol: float = EIG_ATOL,
    name: str = "rho",
) -> np.ndarray:
    """Return rho as a complex array, raising unless it is unit-trace,
    Hermitian, and positive semidefinite within the given tolerances."""
    rho = _as_square(rho, name)
    _check_hermitian(rho, herm_atol, name)
    tr_dev = abs(rho.trace() - 1.0)
    if tr_dev > trace_atol:
        raise PhysicalityError(f"{name} trace deviates from 1 by {tr_dev:.3e}")
    lam_min = float(np.linalg.eigvalsh(hermitize(rho))[0])
    if lam_min < -eig_atol:
        raise PhysicalityError(f"{name} has negative eigenvalue {lam_min:.3e}")
    return rho


def is_physical(rho, **tolerances) -> bool:
    try:
        validate_density_matrix(rho, **tolerances)
    except (PhysicalityError, DimensionMismatchError):
        return False
    return True


def validate_state_vector(psi, *, atol: float = 1e-12, name: str = "psi") -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionMismatchError(f"{name} must be a vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise PhysicalityError(f"{name} norm deviates from 1 by {abs(norm - 1.0):.3e}")
    return psi


def purity(rho) -> float:
    """Tr(rho^2); 1/D for the maximally mixed state, 1 for pure states."""
    rho = _as_square(rho)
    _check_hermitian(rho, FUNCTIONAL_HERM_ATOL)
    # Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def purity_stack(rhos: np.ndarray) -> np.ndarray:
    """Vectorized Tr(rho^2) over a (..., D, D) stack of Hermitian matrices."""
    return np.sum(np.abs(rhos) ** 2, axis=(-2, -1)).real


def matrix_sqrt(rho, *, atol: float = FUNCTIONAL_HERM_ATOL) -> np.ndarray:
    """Hermitian square root S with S @ S = rho.

    Eigenvalues in [-atol, 0) are clamped to zero; more negative ones are
    an error.
    """
    rho = _as_square(rho)
    _check_hermitian(rho, atol)
    lam, vec = np.linalg.eigh(hermitize(rho))
    if lam[0] < -atol:
        raise PhysicalityError(f"matrix_sqrt input has eigenvalue {lam[0]:.3e} < -{atol:.0e}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    return hermitize((vec * root) @ vec.conj().T)


def fidelity(a, b) -> float:
    """Uhlmann fidelity |Tr sqrt(sqrt(a) b sqrt(a))|^2, in [0, 1].

    Symmetric in (a, b) up to numerical noise.  Both inputs must be
    Hermitian within 1e-8; small negative eigenvalues are clamped before
    the square roots.
    """
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    _check_hermitian(a, FUNCTIONAL_HERM_ATOL, "a")
    _check_hermitian(b, FUNCTIONAL_HERM_ATOL, "b")
    root_a = matrix_sqrt(a)
    lam = np.linalg.eigvalsh(hermitize(root_a @ b @ root_a))
    val = float(np.sqrt(np.clip(lam, 0.0, None)).sum() ** 2)
    return min(max(val, 0.0), 1.0)


def trace_distance(a, b) -> float:
    """(1/2) ||a - b||_1 via the eigenvalues of the Hermitian difference."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    lam = np.linalg.eigvalsh(hermitize(a - b))
    return 0.5 * float(np.sum(np.abs(lam)))


def psd_project(m, *, herm_atol: float = 1e-6) -> np.ndarray:
    """Nearest-physical projection: clamp negative eigenvalues to zero and
    renormalize to unit trace.

    Idempotent on already-physical input (up to eigendecomposition
    round-off).  Raises if the input has no positive spectral weight.
    """
    m = _as_square(m)
    _check_hermitian(m, herm_atol)
    lam, vec = np.linalg.eigh(hermitize(m))
    lam = np.clip(lam, 0.0, None)
    total = lam.sum()
    if total <= 0.0:
        raise PhysicalityError("psd_project input has no positive eigenvalues")
    rho = (vec * (lam / total)) @ vec.conj().T
    return hermitize(rho)
