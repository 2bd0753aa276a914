"""Weyl-Heisenberg SIC construction, search and certification.

Displacement operators follow the convention

    D_{p,q} = tau^{pq} X^p Z^q,   X|k> = |k+1 mod d>,   Z|k> = omega^k |k>,

with ``omega = exp(2 pi i / d)`` and ``tau = -exp(i pi / d)``, so that
``tau**2 == omega`` for every ``d``, odd or even.

A fiducial ``|psi>`` generates the candidate set ``{D_{p,q}|psi>}``. It is a
SIC exactly when the frame potential

    F(psi) = sum_{(p,q) != (0,0)} |<psi|D_{p,q}|psi>|^4

reaches its lower bound ``(d-1)/(d+1)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from ._validation import check_dim, check_pure, check_rng
from .exceptions import DomainError, ShapeError

#: Default certification tolerance.
SIC_TOL = 1e-10
#: Singular values at or below this count as zero in the Gram rank.
GRAM_RANK_TOL = 1e-8


def _check_sic_dim(d):
    d = check_dim(d, 1)
    if d < 2:
        raise DomainError(f"SICs need d >= 2, got {d}")
    return d


def tau(d):
    return -np.exp(1j * np.pi / d)


def displacement(d, p, q):
    """Weyl-Heisenberg displacement operator ``D_{p,q}`` (indices mod d)."""
    d = _check_sic_dim(d)
    p, q = int(p) % d, int(q) % d
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), p, axis=0)
    clock = np.diag(omega ** np.arange(d))
    return tau(d) ** (p * q) * shift @ np.linalg.matrix_power(clock, q)


@lru_cache(maxsize=64)
def _displacement_stack(d):
    ops = np.array([displacement(d, p, q) for p in range(d) for q in range(d)])
    ops.setflags(write=False)
    return ops


def displacements(d):
    """All ``d**2`` displacement operators, (p, q) in lexicographic order."""
    return _displacement_stack(_check_sic_dim(d)).copy()


@dataclass(frozen=True)
class Fiducial:
    """Unit vector whose displacement orbit is a SIC candidate."""

    vector: np.ndarray
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = check_pure(self.vector, name="fiducial")
        _check_sic_dim(v.shape[0])
        object.__setattr__(self, "vector", v)

    @property
    def d(self):
        return self.vector.shape[0]

    @classmethod
    def from_vector(cls, v, provenance=None):
        """Build a fiducial from any nonzero vector, normalizing it."""
        v = np.asarray(v, dtype=complex)
        return cls(v / np.linalg.norm(v), dict(provenance or {}))


@dataclass(frozen=True)
class SicSet:
    """A (candidate) SIC: ``d**2`` unit vectors and their projectors.

    ``effects`` are the subnormalized POVM elements ``Pi_i / d``.
    """

    vectors: np.ndarray
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2:
            raise ShapeError(f"vectors must be 2-D, got shape {v.shape}")
        object.__setattr__(self, "vectors", v)

    @property
    def d(self):
        return self.vectors.shape[1]

    @property
    def projectors(self):
        v = self.vectors
        return np.einsum("ka,kb->kab", v, v.conj())

    @property
    def effects(self):
        return self.projectors / self.d

    def __len__(self):
        return self.vectors.shape[0]


@dataclass(frozen=True)
class VerificationReport:
    d: int
    max_overlap_deviation: float
    identity_residual: float
    gram_rank: int
    passed: bool
    tolerance: float

    def to_dict(self):
        return {
            "d": self.d,
            "max_overlap_deviation": self.max_overlap_deviation,
            "identity_residual": self.identity_residual,
            "gram_rank": self.gram_rank,
            "passed": self.passed,
            "tolerance": self.tolerance,
        }


def orbit(fiducial):
    """Displacement orbit of ``fiducial`` as a :class:`SicSet` candidate."""
    ops = _displacement_stack(fiducial.d)
    vectors = ops @ fiducial.vector
    return SicSet(vectors, dict(fiducial.provenance))


def overlaps(vector):
    """``<psi|D_{p,q}|psi>`` for all (p, q), flattened lexicographically."""
    vector = np.asarray(vector, dtype=complex)
    ops = _displacement_stack(vector.shape[0])
    return np.einsum("a,kab,b->k", vector.conj(), ops, vector)


def frame_potential(fiducial):
    """Fourth-power frame potential over the punctured displacement grid."""
    c = np.abs(overlaps(fiducial.vector)) ** 2
    return float(np.sum(c[1:] ** 2))


def frame_potential_bound(d):
    """Lower bound ``(d-1)/(d+1)``, attained exactly by SIC fiducials."""
    return (d - 1) / (d + 1)


def _as_complex(x):
    d = x.shape[0] // 2
    return x[:d] + 1j * x[d:]


def _as_real(z):
    return np.concatenate([z.real, z.imag])


def frame_potential_objective(x):
    """Frame potential of ``x / |x|`` and its gradient in ``x``.

    ``x`` holds real and imaginary parts stacked, length ``2d``. The
    objective is scale invariant, so any nonzero ``x`` is admissible.
    """
    z = _as_complex(np.asarray(x, dtype=float))
    ops = _displacement_stack(z.shape[0])
    n = np.vdot(z, z).real
    dz = ops @ z
    ddz = np.einsum("kba,b->ka", ops.conj(), z)
    c = dz @ z.conj()
    a = np.abs(c) ** 2
    # includes the (0,0) term n**4; subtracted after normalizing
    s = np.sum(a ** 2)
    grad_s = 2.0 * np.einsum("k,ka->a", a * c.conj(), dz) + 2.0 * np.einsum("k,ka->a", a * c, ddz)
    value = s / n ** 4 - 1.0
    grad = grad_s / n ** 4 - 4.0 * s / n ** 5 * z
    # real gradient = 2 * d/d(conj z)
    return float(value), 2.0 * _as_real(grad)


def _overlap_residuals(z):
    """Residuals ``|<psi|D|psi>|^2 - 1/(d+1)`` and their real Jacobian."""
    d = z.shape[0]
    ops = _displacement_stack(d)[1:]
    n = np.vdot(z, z).real
    dz = ops @ z
    ddz = np.einsum("kba,b->ka", ops.conj(), z)
    c = dz @ z.conj()
    a = np.abs(c) ** 2
    r = a / n ** 2 - 1.0 / (d + 1)
    dconj = (c.conj()[:, None] * dz + c[:, None] * ddz) / n ** 2 - 2.0 * (a / n ** 3)[:, None] * z
    jac = 2.0 * np.hstack([dconj.real, dconj.imag])
    return r, jac


def polish(vector, max_steps=200):
    """Gauss-Newton refinement of a near-SIC fiducial.

    Drives every overlap residual towards zero with minimum-norm steps,
    which handles the phase and scale degeneracy of the residuals. Steps
    are halved until the squared residual norm decreases; near degenerate
    roots (d = 3 has a continuous family) convergence drops to linear but
    stays monotone. Returns the unit vector and its max absolute residual.
    """
    z = np.asarray(vector, dtype=complex)
    z = z / np.linalg.norm(z)
    r, jac = _overlap_residuals(z)
    cost = float(r @ r)
    for _ in range(max_steps):
        if np.max(np.abs(r)) < 1e-15:
            break
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        step = _as_complex(step)
        for _ in range(40):
            trial = z + step
            trial = trial / np.linalg.norm(trial)
            r_new, jac_new = _overlap_residuals(trial)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                break
            step = 0.5 * step
        else:
            break
        z, r, jac, cost = trial, r_new, jac_new, cost_new
    return z, float(np.max(np.abs(r)))


def frame_potential_gap(fiducial):
    """``frame_potential(f) - (d-1)/(d+1)``, computed without cancellation.

    For unit vectors the punctured squared overlaps sum to ``d - 1``, so
    the gap equals the sum of squared deviations from ``1/(d+1)``.
    """
    d = fiducial.d
    a = np.abs(overlaps(fiducial.vector)[1:]) ** 2
    return float(np.sum((a - 1.0 / (d + 1)) ** 2))


def verify_sic(candidate, tol=SIC_TOL):
    """Certify a SIC candidate.

    Checks pairwise overlaps against ``1/(d+1)``, the resolution of the
    identity by the effects, and that the projectors span operator space.
    """
    d = candidate.d
    if len(candidate) != d * d:
        raise ShapeError(f"a SIC in d={d} has {d * d} elements, got {len(candidate)}")
    proj = candidate.projectors
    # Gram matrix under the trace inner product; real for Hermitian projectors
    gram = np.einsum("iab,jba->ij", proj, proj).real
    off = ~np.eye(d * d, dtype=bool)
    dev = float(np.max(np.abs(gram[off] - 1.0 / (d + 1))))
    identity_residual = float(np.max(np.abs(proj.sum(axis=0) / d - np.eye(d))))
    rank = int(np.linalg.matrix_rank(gram, tol=GRAM_RANK_TOL))
    passed = dev <= tol and identity_residual <= tol and rank == d * d
    return VerificationReport(
        d=d,
        max_overlap_deviation=dev,
        identity_residual=identity_residual,
        gram_rank=rank,
        passed=bool(passed),
        tolerance=float(tol),
    )


def tetrahedron_fiducial():
    """Analytic qubit fiducial with Bloch vector (1, 1, 1)/sqrt(3)."""
    theta = np.arccos(1.0 / np.sqrt(3.0))
    v = np.array([np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)])
    return Fiducial(v, {"source": "analytic"})


@dataclass(frozen=True)
class RestartDiagnostics:
    restart: int
    iterations: int
    frame_potential_gap: float
    residual: float


@dataclass(frozen=True)
class SearchResult:
    """Outcome of :func:`search_fiducial`.

    ``fiducial`` is always the best vector found; ``success`` says whether
    its orbit certified at the requested tolerance.
    """

    success: bool
    fiducial: Fiducial
    report: VerificationReport
    best_residual: float
    restarts: tuple

    def to_dict(self):
        return {
            "success": self.success,
            "best_residual": self.best_residual,
            "report": self.report.to_dict(),
            "restarts": [vars(r) for r in self.restarts],
        }


def _run_restart(d, rng, max_iter):
    z0 = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    res = minimize(
        frame_potential_objective,
        _as_real(z0 / np.linalg.norm(z0)),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": 0.0, "gtol": 1e-14},
    )
    z, residual = polish(_as_complex(res.x))
    return z, int(res.nit), residual


def search_fiducial(d, restarts=10, max_iter=2000, seed=0, tol=SIC_TOL):
    """Search for a SIC fiducial by frame-potential minimization.

    Each restart starts from its own Gaussian random vector, runs L-BFGS
    on the frame potential and then polishes the overlaps with
    Gauss-Newton. The restart with the lowest final frame potential wins
    (compared through :func:`frame_potential_gap`, since the raw values
    agree to rounding once every restart has converged); ties go to the
    lowest restart index. Every restart is run, and each one
    draws from an independent child of ``seed``, so the result does not
    depend on execution order.

    Non-convergence is reported through ``SearchResult.success``, not
    raised.
    """
    d = _check_sic_dim(d)
    restarts = check_dim(restarts, 1, "restarts")
    max_iter = check_dim(max_iter, 1, "max_iter")
    children = np.random.SeedSequence(seed).spawn(restarts)

    best = None
    diagnostics = []
    for k, child in enumerate(children):
        z, nit, residual = _run_restart(d, check_rng(child), max_iter)
        gap = frame_potential_gap(Fiducial(z))
        diagnostics.append(RestartDiagnostics(k, nit, gap, residual))
        if best is None or gap < best[0]:
            best = (gap, k, z, residual)

    gap, k, z, residual = best
    provenance = {
        "seed": seed,
        "restarts": restarts,
        "max_iter": max_iter,
        "best_restart": k,
        "iterations": diagnostics[k].iterations,
        "residual": residual,
        "frame_potential_gap": gap,
    }
    fid = Fiducial(z, provenance)
    report = verify_sic(orbit(fid), tol)
    return SearchResult(
        success=report.passed,
        fiducial=fid,
        report=report,
        best_residual=residual,
        restarts=tuple(diagnostics),
    )


__all__ = [
    "SIC_TOL", "Fiducial", "SicSet", "VerificationReport", "SearchResult",
    "RestartDiagnostics", "displacement", "displacements", "orbit", "overlaps",
    "frame_potential", "frame_potential_bound", "frame_potential_gap", "frame_potential_objective",
    "polish", "verify_sic", "search_fiducial", "tetrahedron_fiducial", "tau",
]
