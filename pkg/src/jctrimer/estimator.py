"""scikit-learn style wrapper: rows of (g1, theta) in, phase labels or
mean-field features out."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .meanfield.solver import SolverOptions, solve_many
from .model import SystemParams
from .observables import chirality, current

FEATURES = ("e_g", "eps_min", "current_scaled", "chirality_scaled",
            "alpha1_abs", "alpha2_abs", "alpha3_abs")


class TrimerPhaseEstimator(BaseEstimator):
    """Mean-field ground-state classifier for the trimer.

    There is nothing to learn: ``fit`` only validates the fixed system
    parameters and records the input width, so the object can sit in a
    scikit-learn pipeline. ``predict`` returns phase labels and ``transform``
    the per-point features listed in ``FEATURES``.
    """

    def __init__(self, omega0=1000.0, j=0.05, n_random=16, seed=0):
        self.omega0 = omega0
        self.j = j
        self.n_random = n_random
        self.seed = seed

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected columns (g1, theta), got {X.shape[1]} columns")
        self.base_params_ = SystemParams(self.omega0, 1.0, self.j, 0.0)
        self.options_ = SolverOptions(n_random=self.n_random, seed=self.seed)
        self.n_features_in_ = 2
        return self

    def _solve(self, X):
        check_is_fitted(self, "base_params_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        params = [self.base_params_.replace(g1=g, theta=t) for g, t in X]
        sols = solve_many(params, self.options_)
        for sol in sols:
            if isinstance(sol, Exception):
                raise sol
        return params, sols

    def predict(self, X) -> np.ndarray:
        _, sols = self._solve(X)
        return np.array([s.phase.value for s in sols], dtype=object)

    def transform(self, X) -> np.ndarray:
        params, sols = self._solve(X)
        out = np.empty((len(sols), len(FEATURES)))
        for i, (p, s) in enumerate(zip(params, sols)):
            out[i, :4] = (s.ground_energy, s.spectrum.eps_min, current(s.amplitudes, p),
                          chirality(s.amplitudes, p))
            out[i, 4:] = np.abs(s.amplitudes.array) / math.sqrt(p.eta)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)
