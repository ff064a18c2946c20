"""scikit-learn compatible wrappers around the Gabor transform and N-term approximation.

Rows of ``X`` are signals of a common length ``L``. Both estimators build
their :class:`~gaborapprox.frames.GaborSystem` in ``fit`` from ``L`` and the
constructor parameters, so they can sit inside a ``Pipeline``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .frames import CoefficientGrid, GaborSystem, analyze, canonical_dual, synthesize
from .norms import NormParams, parse_norm_params
from .nterm import greedy_nterm
from .signal import WindowSpec, make_window
from .validation import check_lattice, check_signals

__all__ = ["GaborTransform", "NTermApproximator"]


def _build_system(est, L):
    check_lattice(L, est.a, est.b)
    spec = WindowSpec(est.window, width=est.width, center=est.center)
    return canonical_dual(GaborSystem(make_window(spec, L), est.a, est.b))


class GaborTransform(TransformerMixin, BaseEstimator):
    """Lattice Gabor analysis with canonical-dual reconstruction.

    Parameters
    ----------
    a, b : int
        Time and frequency lattice steps; both must divide the signal length.
    window : {"gaussian", "hann", "boxcar"}
    width : float, optional
        Window width in samples; defaults to ``sqrt(L)``.
    center : float
        Offset of the window peak in samples.

    Attributes
    ----------
    system_ : GaborSystem
        Fitted system including the dual window and frame bounds.
    grid_shape_ : tuple
        ``(K, M)``; ``transform`` returns rows of length ``K * M`` (k-major).
    """

    def __init__(self, a=8, b=8, window="gaussian", width=None, center=0.0):
        self.a = a
        self.b = b
        self.window = window
        self.width = width
        self.center = center

    def fit(self, X, y=None):
        X = check_signals(X)
        self.system_ = _build_system(self, X.shape[1])
        self.grid_shape_ = (self.system_.K, self.system_.M)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "system_")
        X = check_signals(X, L=self.system_.L)
        return np.stack([analyze(self.system_, f).data.ravel() for f in X])

    def inverse_transform(self, C):
        check_is_fitted(self, "system_")
        C = np.atleast_2d(np.asarray(C, dtype=np.complex128))
        K, M = self.grid_shape_
        if C.shape[1] != K * M:
            raise ValueError(f"expected rows of length {K * M}, got {C.shape[1]}")
        return np.stack([synthesize(self.system_, row.reshape(K, M), "dual") for row in C])

    def grids(self, X):
        """Coefficient grids for each row of ``X``."""
        K, M = self.grid_shape_
        s = self.system_
        return [CoefficientGrid(row.reshape(K, M), s.a, s.b, s.L) for row in self.transform(X)]


class NTermApproximator(TransformerMixin, BaseEstimator):
    """Replace each signal by its greedy N-term approximation from the Gabor dictionary.

    ``norm`` is a string such as ``"p=2,q=2,weight=flat"``; it sets the
    ranking weight and the norm in which :meth:`errors` are measured.
    """

    def __init__(self, n_terms=8, a=8, b=8, window="gaussian", width=None, center=0.0,
                 refine=True, norm="p=2,q=2,weight=flat"):
        self.n_terms = n_terms
        self.a = a
        self.b = b
        self.window = window
        self.width = width
        self.center = center
        self.refine = refine
        self.norm = norm

    def _norm(self):
        return self.norm if isinstance(self.norm, NormParams) else parse_norm_params(self.norm)

    def fit(self, X, y=None):
        X = check_signals(X)
        self.system_ = _build_system(self, X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def _approx(self, X):
        check_is_fitted(self, "system_")
        X = check_signals(X, L=self.system_.L)
        norm = self._norm()
        return [greedy_nterm(self.system_, f, self.n_terms, norm, self.refine) for f in X]

    def transform(self, X):
        return np.stack([approx for approx, _, _ in self._approx(X)])

    def supports(self, X):
        return [support for _, support, _ in self._approx(X)]

    def errors(self, X):
        """Approximation error of each row in the configured norm."""
        return np.array([err for _, _, err in self._approx(X)])

    def score(self, X, y=None):
        """Negative mean approximation error (higher is better)."""
        return -float(self.errors(X).mean())
