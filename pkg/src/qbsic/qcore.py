"""Complex linear algebra and quantum primitives.

Matrices are plain ``numpy`` complex arrays. Bipartite operators use the
row-major Kronecker convention: the left factor is subsystem ``"A"``.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import (
    check_density,
    check_dim,
    check_matrix,
    check_povm,
    check_pure,
    check_rng,
    check_size,
    check_unitary,
)
from .exceptions import InvalidInputError, ShapeError

BORN_TOL = 1e-10


def tensor(a, b, max_dim=None):
    """Kronecker product ``a ⊗ b``.

    Raises :class:`SizeError` if either side of the product would exceed
    ``max_dim`` (default :data:`qbsic._validation.MAX_DIM`).
    """
    a = check_matrix(a, "a")
    b = check_matrix(b, "b")
    check_size(a.shape[0] * b.shape[0], max_dim)
    check_size(a.shape[1] * b.shape[1], max_dim)
    return np.kron(a, b)


def partial_trace(m, dims, keep="A"):
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    m : array of shape (dA*dB, dA*dB)
    dims : tuple (dA, dB)
    keep : {"A", "B"}
        The subsystem that survives.
    """
    m = check_matrix(m, "m", square=True)
    da, db = (int(x) for x in dims)
    if m.shape[0] != da * db:
        raise ShapeError(f"operator has side {m.shape[0]}, dims {dims} need {da * db}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def born_probs(rho, povm, tol=BORN_TOL):
    """Outcome probabilities ``tr(rho E_i)`` for every effect.

    Entries within ``tol`` of 0 or 1 are clipped onto the boundary; an
    entry further outside [0, 1] means ``rho`` or ``povm`` is broken.
    """
    rho = check_matrix(rho, "rho", square=True)
    povm = np.asarray(povm, dtype=complex)
    if povm.ndim != 3 or povm.shape[1:] != rho.shape:
        raise ShapeError(f"povm shape {povm.shape} does not match rho {rho.shape}")
    p = np.einsum("ij,kji->k", rho, povm).real
    if np.any(p < -tol) or np.any(p > 1 + tol):
        raise InvalidInputError(
            f"Born probability outside [0, 1]: min {p.min():.3g}, max {p.max():.3g}")
    p = np.clip(p, 0.0, 1.0)
    if abs(p.sum() - 1.0) > tol:
        raise InvalidInputError(f"Born probabilities sum to {p.sum():.15g}")
    return p


def trace_distance(a, b):
    """Half the trace norm of ``a - b``."""
    a = check_matrix(a, "a", square=True)
    b = check_matrix(b, "b", square=True)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def ket(k, d):
    """Computational basis vector ``|k>`` in dimension ``d``."""
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def computational_povm(d):
    """Projective measurement in the computational basis."""
    return np.array([projector(ket(k, d)) for k in range(d)])


def basis_povm(basis):
    """Rank-one projective measurement onto the rows of ``basis``."""
    return np.array([projector(v) for v in np.asarray(basis, dtype=complex)])


def random_density(d, rng=None):
    """Random density operator ``G G^† / tr(G G^†)`` from a Ginibre matrix ``G``."""
    d = check_dim(d, 1)
    rng = check_rng(rng)
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return m / np.trace(m).real


def random_pure(d, rng=None):
    d = check_dim(d, 1)
    rng = check_rng(rng)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_unitary(d, rng=None):
    """Haar-random unitary via QR with the phases of ``diag(R)`` removed."""
    d = check_dim(d, 1)
    rng = check_rng(rng)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def cnot(control="B"):
    """Two-qubit CNOT in the ``A ⊗ B`` ordering.

    The default ``control="B"`` copies the right qubit into the left one,
    which is how a friend (left) registers a system (right).
    """
    if control == "B":
        return np.eye(4, dtype=complex)[[0, 3, 2, 1]]
    if control == "A":
        return np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    raise ValueError(f"control must be 'A' or 'B', got {control!r}")


@dataclass(frozen=True)
class WignerCycle:
    """Exterior description of the friend + system and its reversal."""

    joint: np.ndarray
    reversed: np.ndarray
    reversal_distance: float
    friend_marginal: np.ndarray
    system_marginal: np.ndarray


def wigner_cycle(friend, system, u):
    """Evolve ``friend ⊗ |system><system|`` by ``u`` and undo it.

    ``friend`` is the left tensor factor. Returns the joint state
    ``U (rho ⊗ |psi><psi|) U^†``, the state after applying ``U^†`` to it,
    the trace distance between the reversed and initial states, and both
    marginals of the joint state.
    """
    friend = check_density(friend, name="friend")
    system = check_pure(system, name="system")
    df, ds = friend.shape[0], system.shape[0]
    u = check_unitary(u, df * ds)
    initial = tensor(friend, projector(system))
    joint = u @ initial @ u.conj().T
    rev = u.conj().T @ joint @ u
    return WignerCycle(
        joint=joint,
        reversed=rev,
        reversal_distance=trace_distance(rev, initial),
        friend_marginal=partial_trace(joint, (df, ds), keep="A"),
        system_marginal=partial_trace(joint, (df, ds), keep="B"),
    )


__all__ = [
    "tensor", "partial_trace", "born_probs", "trace_distance", "ket", "projector",
    "computational_povm", "basis_povm", "random_density", "random_pure",
    "random_unitary", "cnot", "WignerCycle", "wigner_cycle", "check_povm",
]
