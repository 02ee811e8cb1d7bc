"""scikit-learn compatible wrapper around the two-sample test."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted, check_X_y

from .exceptions import InvalidInput
from .hotelling import hotelling_t2, permutation_test
from .linalg import DEFAULT_RANK_TOL
from .simulate import DEFAULT_SEED

_METHODS = ("auto", "exact", "permutation")


class HotellingT2Test(BaseEstimator):
    """Two-sample Hotelling T^2 test with an estimator interface.

    ``fit(X, y)`` splits the rows of ``X`` by the two labels in ``y``; the
    group with the smaller label (``classes_[0]``) plays the role of x.

    Parameters
    ----------
    method : {"auto", "exact", "permutation"}
        "auto" uses the exact F test when n_features < n_samples - 1 and the
        pseudo-inverse permutation test otherwise.
    n_permutations : int
        Relabellings for the permutation test (>= 100).
    random_state : int
        Seed for the permutation test.
    rank_tol : float
        Relative eigenvalue cutoff of the pseudo-inverse.

    Attributes
    ----------
    result_ : HotellingResult
    t2_, p_value_, method_ : shortcuts into ``result_``
    classes_ : ndarray of shape (2,)
    """

    def __init__(self, method="auto", n_permutations=5000, random_state=DEFAULT_SEED,
                 rank_tol=DEFAULT_RANK_TOL):
        self.method = method
        self.n_permutations = n_permutations
        self.random_state = random_state
        self.rank_tol = rank_tol

    def fit(self, X, y):
        if self.method not in _METHODS:
            raise InvalidInput(f"method must be one of {_METHODS}, got {self.method!r}")
        X, y = check_X_y(X, y, dtype=np.float64, ensure_min_samples=4)
        classes = np.unique(y)
        if classes.size != 2:
            raise InvalidInput(f"y must contain exactly two labels, got {classes.size}")
        x_grp, y_grp = X[y == classes[0]], X[y == classes[1]]

        method = self.method
        if method == "auto":
            degenerate = X.shape[1] >= X.shape[0] - 1
            method = "permutation" if degenerate else "exact"
        if method == "exact":
            self.result_ = hotelling_t2(x_grp, y_grp)
        else:
            self.result_ = permutation_test(x_grp, y_grp, self.n_permutations,
                                            self.random_state, self.rank_tol)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self.t2_ = self.result_.t2
        self.p_value_ = self.result_.p_value
        self.method_ = self.result_.method
        return self

    def reject(self, alpha=0.05):
        """True when the fitted p-value is at most ``alpha``."""
        check_is_fitted(self, "result_")
        return self.p_value_ <= alpha

