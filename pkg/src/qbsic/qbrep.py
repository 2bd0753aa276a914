"""SIC probability representation of states, measurements and dynamics.

A density operator ``rho`` is represented by its SIC outcome probabilities
``p_i = tr(rho Pi_i) / d``, and is recovered exactly by

    rho = sum_i ((d + 1) p_i - 1/d) Pi_i.

With the post-measurement state after SIC outcome ``i`` taken to be
``Pi_i``, conditionals are ``r[j, i] = P(D_j | H_i) = tr(Pi_i D_j)`` and the
Born rule for any orthonormal-basis measurement on the ground reads

    Q(D_j) = (d + 1) * sum_i p_i r[j, i] - 1.
"""

import enum
from dataclasses import dataclass

import numpy as np

from ._validation import (
    check_dim,
    check_matrix,
    check_prob_vector,
    check_unitary,
    min_eigenvalue,
)
from .exceptions import (
    DomainError,
    IdentityViolation,
    InvalidInputError,
    InvalidityError,
    ParameterError,
    ShapeError,
)

IDENTITY_TOL = 1e-12
RANGE_TOL = 1e-10


class PathLabel(enum.Enum):
    """Which experiment a probability refers to.

    ``E1`` is the factual ground-only measurement, ``E2`` the cascade of
    the SIC measurement followed by the ground measurement. Labels are
    report metadata only.
    """

    E1 = "E1"
    E2 = "E2"


def _check_sic_match(sic, d):
    if sic.d != d:
        raise ShapeError(f"SIC dimension {sic.d} does not match {d}")


def rho_to_prob(rho, sic):
    """SIC outcome probabilities ``tr(rho H_i)`` of a density operator."""
    rho = check_matrix(rho, "rho", square=True)
    _check_sic_match(sic, rho.shape[0])
    v = sic.vectors
    # <psi_i|rho|psi_i> / d
    return np.einsum("ka,ab,kb->k", v.conj(), rho, v).real / sic.d


def prob_to_rho(p, sic):
    """Reconstruct the operator whose SIC probabilities are ``p``.

    The result is Hermitian with unit trace for any ``p`` summing to one,
    but it is positive semidefinite only for valid states.
    """
    d = sic.d
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise ShapeError(f"expected {d * d} probabilities, got shape {p.shape}")
    coeff = (d + 1) * p - 1.0 / d
    return np.einsum("k,kab->ab", coeff, sic.projectors)


@dataclass(frozen=True)
class Validity:
    valid: bool
    min_eigenvalue: float


def validity_check(p, sic, tol=RANGE_TOL):
    """Whether ``p`` is the SIC representation of a density operator."""
    lam = min_eigenvalue(prob_to_rho(p, sic))
    return Validity(lam >= -tol, lam)


def conditional_matrix(sic, ground):
    """Conditionals ``r[j, i] = tr(Pi_i D_j)`` for a ground POVM ``ground``.

    Rows index ground outcomes, columns SIC outcomes.
    """
    ground = np.asarray(ground, dtype=complex)
    d = sic.d
    if ground.ndim != 3 or ground.shape[1:] != (d, d):
        raise ShapeError(f"ground POVM shape {ground.shape} does not act on d={d}")
    resid = np.max(np.abs(ground.sum(axis=0) - np.eye(d)))
    if resid > RANGE_TOL:
        raise InvalidInputError(f"ground POVM is incomplete (residual {resid:.3g})")
    v = sic.vectors
    return np.einsum("ka,jab,kb->jk", v.conj(), ground, v).real


def total_probability(p, r):
    """Classical law of total probability ``sum_i p_i r[j, i]``."""
    return np.asarray(r, dtype=float) @ np.asarray(p, dtype=float)


@dataclass(frozen=True)
class Urgleichung:
    ltp: np.ndarray
    q_of_d: np.ndarray


def urgleichung(p, r, d, sic=None, ground=None, tol=RANGE_TOL):
    """Born rule for an orthonormal-basis ground measurement.

    Returns the cascaded probabilities ``ltp`` and ``q_of_d = (d+1) ltp - 1``.
    Raises :class:`InvalidityError` naming the first ground outcome whose
    probability leaves [0, 1]. When ``sic`` and ``ground`` are given, the
    result is also checked against ``tr(rho D_j)`` with ``rho`` rebuilt
    from ``p``.
    """
    d = check_dim(d, 2)
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[1] != d * d or p.shape != (d * d,):
        raise ShapeError(f"need r with {d * d} columns and p of length {d * d}")
    ltp = total_probability(p, r)
    q = (d + 1) * ltp - 1
    bad = np.flatnonzero((q < -tol) | (q > 1 + tol))
    if bad.size:
        j = int(bad[0])
        raise InvalidityError(
            f"Q(D_{j}) = {q[j]:.6g} lies outside [0, 1]: p is not a valid state "
            f"for this ground measurement", index=j)
    if sic is not None and ground is not None:
        rho = prob_to_rho(p, sic)
        direct = np.einsum("ab,jba->j", rho, np.asarray(ground, dtype=complex)).real
        err = np.max(np.abs(q - direct))
        if err > IDENTITY_TOL:
            raise IdentityViolation(f"urgleichung deviates from the Born rule by {err:.3g}")
    return Urgleichung(ltp, q)


def unitary_ground(sic, u):
    """Ground POVM ``D_j = U Pi_j U^† / d``: the SIC rotated by ``u``."""
    return np.einsum("ab,jbc,dc->jad", u, sic.effects, u.conj())


def urgleichung_unitary(p, u, sic):
    """Ground probabilities for the unitarily rotated SIC.

    ``Q(D_j) = (d+1) sum_i p_i P(D_j|H_i) - 1/d`` equals the SIC
    representation of ``U^† rho U``; this is checked before returning.
    """
    d = sic.d
    u = check_unitary(u, d)
    p = np.asarray(p, dtype=float)
    if p.shape != (d * d,):
        raise ShapeError(f"expected {d * d} probabilities, got shape {p.shape}")
    r = conditional_matrix(sic, unitary_ground(sic, u))
    q = (d + 1) * total_probability(p, r) - 1.0 / d
    evolved = u.conj().T @ prob_to_rho(p, sic) @ u
    err = np.max(np.abs(q - rho_to_prob(evolved, sic)))
    if err > IDENTITY_TOL:
        raise IdentityViolation(f"unitary urgleichung deviates by {err:.3g}")
    return q


@dataclass(frozen=True)
class GeneralizedParams:
    """Parameters of the one-parameter family of total-probability rules.

    ``q = 0`` is classical probability, ``q = 2`` quantum theory.
    """

    q: int
    d: int
    n: int

    def __post_init__(self):
        for name in ("q", "d", "n"):
            val = getattr(self, name)
            if isinstance(val, (bool, np.bool_)) or int(val) != val:
                raise DomainError(f"{name} must be an integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        if self.q < 0:
            raise DomainError(f"q must be nonnegative, got {self.q}")
        if self.d < 2:
            raise DomainError(f"d must be >= 2, got {self.d}")
        expected = self.expected_n(self.q, self.d)
        if self.n != expected:
            raise ParameterError(
                f"n = {self.n} is inconsistent with q = {self.q}, d = {self.d} "
                f"(need n = {expected})")

    @staticmethod
    def expected_n(q, d):
        return q * d * (d - 1) // 2 + d

    @classmethod
    def from_qd(cls, q, d):
        if isinstance(q, (bool, np.bool_)) or int(q) != q:
            raise DomainError(f"q must be an integer, got {q!r}")
        return cls(q, d, cls.expected_n(int(q), int(d)))

    @property
    def alpha(self):
        return 0.5 * self.q * self.d + 1

    @property
    def beta(self):
        return 0.5 * self.q


def general_rule(params, p, r):
    """Evaluate ``Q_j = alpha * sum_i p_i r[j, i] - beta``.

    The rule is evaluated as a formula on the given data; no claim is made
    about which ``r`` are admissible for ``q`` other than 0 and 2.
    """
    p = check_prob_vector(p, params.n)
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[1] != params.n:
        raise ShapeError(f"r must have {params.n} columns, got shape {r.shape}")
    if np.any(np.abs(r.sum(axis=0) - 1.0) > RANGE_TOL):
        raise InvalidInputError("columns of r must each sum to 1")
    return params.alpha * total_probability(p, r) - params.beta


@dataclass(frozen=True)
class Bounds:
    p_min: float
    p_max: float


def dimension_bounds(d):
    """Range of cascaded probabilities that map into [0, 1]."""
    d = check_dim(d, 2)
    return Bounds(1.0 / (d + 1), 2.0 / (d + 1))


__all__ = [
    "PathLabel", "rho_to_prob", "prob_to_rho", "Validity", "validity_check",
    "conditional_matrix", "total_probability", "Urgleichung", "urgleichung",
    "unitary_ground", "urgleichung_unitary", "GeneralizedParams", "general_rule",
    "Bounds", "dimension_bounds",
]
