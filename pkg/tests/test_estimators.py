import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from gaborapprox import GaborTransform, NotAFrameError, NTermApproximator


@pytest.fixture
def X(rng):
    return rng.standard_normal((5, 64)) + 1j * rng.standard_normal((5, 64))


def test_params_and_clone():
    est = GaborTransform(a=4, b=8, window="hann", width=16.0)
    assert est.get_params() == {"a": 4, "b": 8, "window": "hann", "width": 16.0, "center": 0.0}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(a=2)
    assert est.a == 2


def test_transform_roundtrip(X):
    est = GaborTransform(a=4, b=4).fit(X)
    C = est.transform(X)
    assert C.shape == (5, 16 * 16) and est.grid_shape_ == (16, 16)
    assert np.allclose(est.inverse_transform(C), X, atol=1e-10)
    assert np.allclose(est.grids(X)[2].data.ravel(), C[2])


def test_not_fitted(X):
    with pytest.raises(NotFittedError):
        GaborTransform().transform(X)


def test_length_mismatch(X):
    est = GaborTransform(a=4, b=4).fit(X)
    with pytest.raises(ValueError):
        est.transform(np.ones((2, 32)))


def test_non_frame_rejected_at_fit(X):
    with pytest.raises(NotAFrameError):
        GaborTransform(a=16, b=16).fit(X)


def test_nterm_approximator(X):
    est = NTermApproximator(n_terms=6, a=4, b=4).fit(X)
    Y = est.transform(X)
    assert Y.shape == X.shape
    assert all(s.N == 6 for s in est.supports(X))
    errs = est.errors(X)
    assert errs.shape == (5,) and np.all(errs > 0)
    assert est.score(X) == pytest.approx(-errs.mean())
    more = NTermApproximator(n_terms=40, a=4, b=4).fit(X)
    assert more.score(X) > est.score(X)


def test_nterm_in_pipeline(X):
    pipe = make_pipeline(NTermApproximator(n_terms=256, a=4, b=4), GaborTransform(a=4, b=4))
    out = pipe.fit_transform(X)
    ref = GaborTransform(a=4, b=4).fit(X).transform(X)
    assert np.allclose(out, ref, atol=1e-8)


def test_nterm_norm_string():
    est = NTermApproximator(norm="p=1,q=inf,weight=poly:s=1")
    assert str(est._norm()) == "p=1,q=inf,weight=poly:s=1"
    assert clone(est).norm == est.norm
