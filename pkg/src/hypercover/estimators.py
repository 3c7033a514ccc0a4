"""scikit-learn style estimators over a fitted set of centers.

A design is "fitted" as the center set; ``predict``/``transform``/``score``
then answer coverage and quantization questions for query points. The
Monte Carlo routines in this package run on top of these classes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

# rows of queries handled per block of the Euclidean kernel
_BLOCK = 8192


def _nearest_euclidean(X: np.ndarray, centers: np.ndarray, center_half_sq: np.ndarray):
    """Squared distance to, and index of, the nearest center for each row of ``X``.

    The argmax of ``<x, z> - ||z||^2 / 2`` picks the nearest center through a
    single matrix product; the distance to that center is then recomputed
    directly so the reported value carries no cancellation error.
    """
    sq = np.empty(len(X))
    idx = np.empty(len(X), dtype=np.intp)
    for lo in range(0, len(X), _BLOCK):
        block = X[lo:lo + _BLOCK]
        scores = block @ centers.T
        scores -= center_half_sq
        j = scores.argmax(axis=1)
        diff = block - centers[j]
        sq[lo:lo + len(block)] = np.einsum("ij,ij->i", diff, diff)
        idx[lo:lo + len(block)] = j
    return sq, idx


def _nearest_chebyshev(X: np.ndarray, centers: np.ndarray):
    """L-infinity distance to, and index of, the nearest center."""
    n, d = centers.shape
    rows = max(1, 2_000_000 // max(n, 1))
    dist = np.empty(len(X))
    idx = np.empty(len(X), dtype=np.intp)
    for lo in range(0, len(X), rows):
        block = X[lo:lo + rows]
        # running max over coordinates keeps every temporary two-dimensional
        cheb = np.abs(block[:, :1] - centers[:, 0])
        tmp = np.empty_like(cheb)
        for k in range(1, d):
            np.subtract(block[:, k:k + 1], centers[:, k], out=tmp)
            np.abs(tmp, out=tmp)
            np.maximum(cheb, tmp, out=cheb)
        j = cheb.argmin(axis=1)
        dist[lo:lo + len(block)] = cheb[np.arange(len(block)), j]
        idx[lo:lo + len(block)] = j
    return dist, idx


class NearestCenter(BaseEstimator):
    """Nearest-center lookup under the Euclidean or Chebyshev (L-infinity) metric."""

    def __init__(self, metric: str = "euclidean"):
        self.metric = metric

    def fit(self, X, y=None):
        if self.metric not in ("euclidean", "chebyshev"):
            raise ValueError(f"unknown metric {self.metric!r}")
        centers = check_array(X, dtype=np.float64)
        self.centers_ = np.ascontiguousarray(centers)
        self.n_features_in_ = centers.shape[1]
        self._half_sq = 0.5 * np.einsum("ij,ij->i", centers, centers)
        return self

    def _validate(self, X) -> np.ndarray:
        check_is_fitted(self, "centers_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, centers have {self.n_features_in_}")
        return X

    def nearest(self, X):
        """Return ``(distance, index)`` of the nearest center.

        For the Euclidean metric the distance is *squared*.
        """
        X = self._validate(X)
        if self.metric == "euclidean":
            return _nearest_euclidean(X, self.centers_, self._half_sq)
        return _nearest_chebyshev(X, self.centers_)


class BallCover(NearestCenter):
    """Union of radius-``radius`` balls (or cubes, for ``metric='chebyshev'``) around the centers.

    ``predict`` flags covered points and ``score`` is the covered fraction.
    """

    def __init__(self, radius: float = 1.0, metric: str = "euclidean"):
        super().__init__(metric=metric)
        self.radius = radius

    def fit(self, X, y=None):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        return super().fit(X)

    def predict(self, X) -> np.ndarray:
        dist, _ = self.nearest(X)
        bound = self.radius ** 2 if self.metric == "euclidean" else self.radius
        return dist <= bound

    def score(self, X, y=None) -> float:
        return float(self.predict(X).mean())


class Quantizer(TransformerMixin, NearestCenter):
    """Nearest-center quantizer with squared Euclidean loss.

    ``transform`` returns the squared quantization error of each point as a
    column; ``score`` is its negated mean (larger is better).
    """

    def __init__(self):
        super().__init__(metric="euclidean")

    def predict(self, X) -> np.ndarray:
        return self.nearest(X)[1]

    def transform(self, X) -> np.ndarray:
        return self.nearest(X)[0][:, None]

    def score(self, X, y=None) -> float:
        return -float(self.nearest(X)[0].mean())
