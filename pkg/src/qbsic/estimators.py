"""scikit-learn compatible wrappers around the functional API.

These make the SIC search and the SIC representation usable inside
pipelines, ``clone`` and grid searches. The estimators hold no state beyond
their fitted ``*_`` attributes.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted

from ._validation import check_density, check_prob_vector
from .definetti import Mixture, posterior_trajectory
from .exceptions import ShapeError
from .qbrep import prob_to_rho, rho_to_prob
from .sic import SIC_TOL, SicSet, orbit, search_fiducial, verify_sic


def _check_density_batch(X, d=None):
    X = np.asarray(X, dtype=complex)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise ShapeError(f"expected densities of shape (n, d, d), got {X.shape}")
    if d is not None and X.shape[1] != d:
        raise ShapeError(f"densities have d={X.shape[1]}, fitted with d={d}")
    for k, rho in enumerate(X):
        check_density(rho, name=f"X[{k}]")
    return X


class SicFiducialSearch(BaseEstimator):
    """Find a Weyl-Heisenberg SIC fiducial in dimension ``d``.

    ``fit`` ignores its arguments; they exist for pipeline compatibility.
    If no restart certifies, a ``ConvergenceWarning`` is emitted and
    ``converged_`` is False; the best candidate is still stored.

    Attributes
    ----------
    fiducial_ : Fiducial
    sic_ : SicSet
    report_ : VerificationReport
    search_result_ : SearchResult
    converged_ : bool
    """

    def __init__(self, d=2, restarts=10, max_iter=2000, seed=0, tol=SIC_TOL):
        self.d = d
        self.restarts = restarts
        self.max_iter = max_iter
        self.seed = seed
        self.tol = tol

    def fit(self, X=None, y=None):
        result = search_fiducial(self.d, self.restarts, self.max_iter, self.seed, self.tol)
        if not result.success:
            warnings.warn(
                f"no SIC fiducial certified at tol={self.tol} in d={self.d} "
                f"(best residual {result.best_residual:.3g})", ConvergenceWarning)
        self.search_result_ = result
        self.fiducial_ = result.fiducial
        self.sic_ = orbit(result.fiducial)
        self.report_ = result.report
        self.converged_ = result.success
        return self


class SicProbabilityTransformer(TransformerMixin, BaseEstimator):
    """Map density operators to SIC probability vectors and back.

    ``fit`` reads the dimension off ``X`` (shape ``(n, d, d)``) and, unless
    a certified ``sic`` is supplied, searches for one.
    """

    def __init__(self, sic=None, seed=0, restarts=10, max_iter=2000, tol=SIC_TOL):
        self.sic = sic
        self.seed = seed
        self.restarts = restarts
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        X = _check_density_batch(X)
        d = X.shape[1]
        if self.sic is not None:
            if not isinstance(self.sic, SicSet) or self.sic.d != d:
                raise ShapeError(f"supplied sic does not act on d={d}")
            sic = self.sic
        else:
            search = SicFiducialSearch(d, self.restarts, self.max_iter, self.seed, self.tol)
            sic = search.fit().sic_
        report = verify_sic(sic, self.tol)
        if not report.passed:
            raise ValueError(f"SIC fails certification: {report}")
        self.sic_ = sic
        self.d_ = d
        self.n_features_out_ = d * d
        return self

    def transform(self, X):
        check_is_fitted(self, "sic_")
        X = _check_density_batch(X, self.d_)
        return np.array([rho_to_prob(rho, self.sic_) for rho in X])

    def inverse_transform(self, X):
        check_is_fitted(self, "sic_")
        P = np.atleast_2d(np.asarray(X, dtype=float))
        for p in P:
            check_prob_vector(p, self.n_features_out_)
        return np.array([prob_to_rho(p, self.sic_) for p in P])


class MixtureTomography(BaseEstimator):
    """Bayesian tomography over a discrete prior of candidate states.

    ``fit`` takes a 1-D array of observed outcome indices of ``povm``.

    Attributes
    ----------
    posterior_ : ndarray of shape (n_components,)
    trajectory_ : ndarray of shape (n_outcomes + 1, n_components)
    map_component_ : int
    """

    def __init__(self, prior=None, povm=None):
        self.prior = prior
        self.povm = povm

    def fit(self, X, y=None):
        if not isinstance(self.prior, Mixture):
            raise TypeError("prior must be a Mixture")
        outcomes = np.asarray(X, dtype=int).ravel()
        self.trajectory_ = posterior_trajectory(self.prior, self.povm, outcomes)
        self.posterior_ = self.trajectory_[-1]
        self.map_component_ = int(np.argmax(self.posterior_))
        return self

    def predict_proba(self, X=None):
        check_is_fitted(self, "posterior_")
        return self.posterior_.copy()


__all__ = ["SicFiducialSearch", "SicProbabilityTransformer", "MixtureTomography"]
