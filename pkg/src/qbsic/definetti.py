"""Exchangeable states from discrete mixtures, and tomography as Bayesian updating."""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ._validation import check_density, check_dim, check_rng, check_size
from .exceptions import ConditioningError, InvalidInputError, ShapeError
from .qcore import born_probs

WEIGHT_TOL = 1e-12
MIN_EVIDENCE = 1e-15


@dataclass(frozen=True)
class Mixture:
    """Discrete prior over single-system density operators."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        if w.ndim != 1 or w.size == 0:
            raise InvalidInputError("a mixture needs at least one weight")
        if states.ndim != 3 or states.shape[0] != w.size:
            raise ShapeError(f"states shape {states.shape} does not match {w.size} weights")
        if np.any(w < 0) or np.any(w > 1) or abs(w.sum() - 1) > WEIGHT_TOL:
            raise InvalidInputError(f"weights must lie in [0, 1] and sum to 1, got {w}")
        for k, rho in enumerate(states):
            check_density(rho, name=f"component {k}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)

    @property
    def d(self):
        return self.states.shape[1]

    def __len__(self):
        return self.weights.size

    def average(self):
        return np.einsum("k,kab->ab", self.weights, self.states)


def _tensor_power(rho, n):
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, rho)
    return out


def extend(mixture, n, max_dim=None):
    """``sum_k w_k rho_k^{⊗n}``: an exchangeable state on ``n`` copies."""
    n = check_dim(n, 1, "n")
    check_size(mixture.d ** n, max_dim)
    return sum(w * _tensor_power(rho, n) for w, rho in zip(mixture.weights, mixture.states))


def permute_factors(op, d, perm):
    """Conjugate an ``n``-factor operator by the factor permutation ``perm``.

    Factor ``k`` of the result is factor ``perm[k]`` of ``op``.
    """
    n = len(perm)
    t = np.asarray(op).reshape((d,) * (2 * n))
    axes = list(perm) + [n + p for p in perm]
    return t.transpose(axes).reshape(d ** n, d ** n)


def exchangeability_deviation(op, d, n):
    """Largest entrywise change of ``op`` over all ``n!`` factor permutations."""
    return max(
        float(np.max(np.abs(permute_factors(op, d, perm) - op)))
        for perm in permutations(range(n))
    )


def bayes_update(mixture, povm, outcome):
    """Posterior mixture after observing ``outcome`` of ``povm``.

    Component states are kept; only the weights move.
    """
    povm = np.asarray(povm, dtype=complex)
    if not 0 <= outcome < povm.shape[0]:
        raise InvalidInputError(f"outcome {outcome} out of range for {povm.shape[0]} effects")
    like = np.einsum("kab,ba->k", mixture.states, povm[outcome]).real
    like = np.clip(like, 0.0, None)
    joint = mixture.weights * like
    evidence = joint.sum()
    if evidence <= MIN_EVIDENCE:
        raise ConditioningError(f"outcome {outcome} has predicted probability {evidence:.3g}")
    return Mixture(joint / evidence, mixture.states)


def posterior_trajectory(mixture, povm, outcomes):
    """Weights after each outcome in turn; row 0 is the prior."""
    rows = [mixture.weights]
    for k in outcomes:
        mixture = bayes_update(mixture, povm, int(k))
        rows.append(mixture.weights)
    return np.array(rows)


def sample_outcomes(rho, povm, samples, seed=None):
    rng = check_rng(seed)
    p = born_probs(rho, povm)
    return rng.choice(p.size, size=int(samples), p=p / p.sum())


def simulate_tomography(truth, mixture, povm, samples, seed=None):
    """Draw outcomes from component ``truth`` and update the prior on them.

    Returns the posterior weight trajectory, shape ``(samples + 1, K)``.
    """
    if not 0 <= truth < len(mixture):
        raise InvalidInputError(f"truth index {truth} out of range")
    outcomes = sample_outcomes(mixture.states[truth], povm, samples, seed)
    return posterior_trajectory(mixture, povm, outcomes)


__all__ = [
    "Mixture", "extend", "permute_factors", "exchangeability_deviation",
    "bayes_update", "posterior_trajectory", "sample_outcomes", "simulate_tomography",
]
