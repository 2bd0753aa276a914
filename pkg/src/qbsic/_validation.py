"""Input validation helpers shared by every module.

scikit-learn's ``check_array`` rejects complex input, so complex matrices
get their own checkers here.
"""

import numpy as np

from .exceptions import DomainError, InvalidInputError, ShapeError, SizeError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
POVM_TOL = 1e-10

#: Largest matrix side length any operation may produce.
MAX_DIM = 4096


def check_rng(seed):
    """Turn ``seed`` into a ``numpy.random.Generator``.

    Generators are passed through untouched, so callers keep control of
    the stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_dim(d, minimum=1, name="d"):
    if isinstance(d, (bool, np.bool_)) or int(d) != d:
        raise DomainError(f"{name} must be an integer, got {d!r}")
    d = int(d)
    if d < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {d}")
    return d


def check_size(n, max_dim=None):
    max_dim = MAX_DIM if max_dim is None else max_dim
    if n > max_dim:
        raise SizeError(f"matrix side {n} exceeds the size cap {max_dim}")


def check_matrix(m, name="matrix", square=False):
    """Return ``m`` as a finite 2-D complex array."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


def is_hermitian(m, tol=HERMITIAN_TOL):
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def min_eigenvalue(m):
    """Smallest eigenvalue of the Hermitian part of ``m``."""
    h = 0.5 * (m + m.conj().T)
    return float(np.linalg.eigvalsh(h)[0])


def check_density(rho, d=None, name="rho", herm_tol=HERMITIAN_TOL,
                  trace_tol=TRACE_TOL, psd_tol=PSD_TOL):
    """Validate a density operator: Hermitian, unit trace, PSD."""
    rho = check_matrix(rho, name, square=True)
    if d is not None and rho.shape[0] != d:
        raise ShapeError(f"{name} has dimension {rho.shape[0]}, expected {d}")
    if not is_hermitian(rho, herm_tol):
        raise InvalidInputError(f"{name} is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidInputError(f"{name} has trace {tr.real:.3g}, expected 1")
    lam = min_eigenvalue(rho)
    if lam < -psd_tol:
        raise InvalidInputError(f"{name} has negative eigenvalue {lam:.3g}")
    return rho


def check_pure(psi, d=None, name="state", tol=NORM_TOL):
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ShapeError(f"{name} must be a vector, got shape {psi.shape}")
    if d is not None and psi.shape[0] != d:
        raise ShapeError(f"{name} has dimension {psi.shape[0]}, expected {d}")
    if not np.all(np.isfinite(psi)):
        raise InvalidInputError(f"{name} has non-finite entries")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise InvalidInputError(f"{name} has norm {norm:.15g}, expected 1")
    return psi


def check_unitary(u, d=None, name="u", tol=UNITARY_TOL):
    u = check_matrix(u, name, square=True)
    if d is not None and u.shape[0] != d:
        raise ShapeError(f"{name} has dimension {u.shape[0]}, expected {d}")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > tol:
        raise InvalidInputError(f"{name} is not unitary (deviation {err:.3g})")
    return u


def check_povm(effects, d=None, name="povm", tol=POVM_TOL):
    """Validate a POVM given as an array of shape (n, d, d)."""
    effects = np.asarray(effects, dtype=complex)
    if effects.ndim != 3 or effects.shape[1] != effects.shape[2]:
        raise ShapeError(f"{name} must have shape (n, d, d), got {effects.shape}")
    if d is not None and effects.shape[1] != d:
        raise ShapeError(f"{name} acts on dimension {effects.shape[1]}, expected {d}")
    if not np.all(np.isfinite(effects)):
        raise InvalidInputError(f"{name} has non-finite entries")
    for k, e in enumerate(effects):
        if not is_hermitian(e, tol):
            raise InvalidInputError(f"{name} effect {k} is not Hermitian")
        if min_eigenvalue(e) < -tol:
            raise InvalidInputError(f"{name} effect {k} is not positive semidefinite")
    resid = np.max(np.abs(effects.sum(axis=0) - np.eye(effects.shape[1])))
    if resid > tol:
        raise InvalidInputError(
            f"{name} effects do not sum to the identity (residual {resid:.3g})")
    return effects


def check_prob_vector(p, n=None, name="p", neg_tol=1e-12, sum_tol=1e-10):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {p.shape}")
    if n is not None and p.shape[0] != n:
        raise ShapeError(f"{name} has length {p.shape[0]}, expected {n}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if np.any(p < -neg_tol):
        raise InvalidInputError(f"{name} has a negative entry {p.min():.3g}")
    if abs(p.sum() - 1.0) > sum_tol:
        raise InvalidInputError(f"{name} sums to {p.sum():.15g}, not 1")
    return p
