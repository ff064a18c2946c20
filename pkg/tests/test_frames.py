import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborapprox import (
    CapabilityError,
    CoefficientGrid,
    GaborSystem,
    NotAFrameError,
    WindowSpec,
    analyze,
    atom,
    atom_matrix,
    canonical_dual,
    frame_bounds,
    frame_matrix,
    frame_operator_apply,
    is_frame,
    make_window,
    modulate,
    synthesize,
    translate,
)
from gaborapprox.frames import window_concentration
from gaborapprox.validation import ShapeMismatchError

from conftest import random_signal


def brute_coefficients(system, f, which="primal"):
    return np.array([[np.vdot(atom(system, k, n, which), f) for n in range(system.M)]
                     for k in range(system.K)])


def test_atom_is_translate_of_modulate(small_system):
    g = small_system.g
    assert np.allclose(atom(small_system, 2, 3), translate(modulate(g, 12), 8))


def test_analyze_matches_inner_products(small_system, rng):
    f = random_signal(rng, small_system.L)
    assert np.allclose(analyze(small_system, f).data, brute_coefficients(small_system, f), atol=1e-12)
    assert np.allclose(analyze(small_system, f, "dual").data,
                       brute_coefficients(small_system, f, "dual"), atol=1e-12)


def test_atom_matrix_columns(small_system):
    A = atom_matrix(small_system)
    assert A.shape == (32, 64)
    assert np.allclose(A[:, 2 * 8 + 5], atom(small_system, 2, 5))
    assert np.allclose(atom_matrix(small_system, [(1, 1)])[:, 0], atom(small_system, 1, 1))


def test_synthesize_is_adjoint(small_system, rng):
    f = random_signal(rng, 32)
    c = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    lhs = np.vdot(c, analyze(small_system, f).data)
    rhs = np.vdot(synthesize(small_system, c), f)
    assert np.isclose(lhs, rhs)
    assert np.allclose(synthesize(small_system, c), atom_matrix(small_system) @ c.ravel())


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**16))
def test_reconstruction_both_ways(seed):
    system = canonical_dual(GaborSystem.from_window(WindowSpec("hann", width=12), 48, 4, 6))
    f = random_signal(np.random.default_rng(seed), 48)
    assert np.allclose(synthesize(system, analyze(system, f), "dual"), f, atol=1e-10)
    assert np.allclose(synthesize(system, analyze(system, f, "dual")), f, atol=1e-10)


def test_frame_matrix_matches_columns(small_system):
    S = frame_matrix(small_system)
    E = np.eye(32)
    cols = np.stack([frame_operator_apply(small_system, E[:, j]) for j in range(32)], axis=1)
    assert np.allclose(S, cols, atol=1e-12)
    assert np.allclose(S, S.conj().T)


def test_frame_operator_commutes_with_lattice_shifts(small_system, rng):
    f = random_signal(rng, 32)
    lhs = frame_operator_apply(small_system, modulate(translate(f, 4), 4))
    rhs = modulate(translate(frame_operator_apply(small_system, f), 4), 4)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_frame_bounds_sandwich(small_system, rng):
    A, B = frame_bounds(small_system)
    for _ in range(10):
        f = random_signal(rng, 32)
        energy = np.sum(np.abs(analyze(small_system, f).data) ** 2)
        nf = np.vdot(f, f).real
        assert A * nf - 1e-10 <= energy <= B * nf + 1e-10


def test_full_lattice_is_tight_with_dual_g_over_L():
    g = make_window(WindowSpec("gaussian"), 16)
    system = canonical_dual(GaborSystem(g, 1, 1))
    A, B = frame_bounds(system)
    assert np.isclose(A, 16) and np.isclose(B, 16)
    assert np.allclose(system.dual, g / 16)


def test_dual_of_dual_is_window(small_system):
    back = canonical_dual(GaborSystem(small_system.dual, small_system.a, small_system.b))
    assert np.allclose(back.dual, small_system.g, atol=1e-10)


def test_painless_boxcar_dual():
    # window support shorter than L/b makes S diagonal
    g = make_window(WindowSpec("boxcar", width=6, normalization="none"), 24)
    system = canonical_dual(GaborSystem(g, 2, 3))
    S = frame_matrix(system)
    assert np.allclose(S, np.diag(np.diag(S)))
    assert np.allclose(system.dual, g / np.diag(S).real)


def test_undersampled_is_not_a_frame():
    system = GaborSystem.from_window(WindowSpec(), 32, 8, 8)
    assert not is_frame(system)
    with pytest.raises(NotAFrameError):
        canonical_dual(system)


def test_critical_even_gaussian_is_singular():
    system = GaborSystem.from_window(WindowSpec("gaussian", width=4), 16, 4, 4)
    assert not is_frame(system)
    shifted = GaborSystem.from_window(WindowSpec("gaussian", width=4, center=0.5), 16, 4, 4)
    assert is_frame(shifted)


def test_dense_limit():
    system = GaborSystem.from_window(WindowSpec(), 2048, 32, 32)
    with pytest.raises(CapabilityError):
        frame_bounds(system)


def test_lattice_must_divide():
    with pytest.raises(ValueError):
        GaborSystem.from_window(WindowSpec(), 30, 4, 5)


def test_grid_validation_and_json(small_system):
    with pytest.raises(ValueError):
        CoefficientGrid(np.zeros((3, 3)), 4, 4, 32)
    grid = analyze(small_system, np.ones(32))
    back = CoefficientGrid.from_json(json.loads(json.dumps(grid.to_json())))
    assert np.array_equal(back.data, grid.data)
    other = GaborSystem.from_window(WindowSpec(), 32, 8, 2)
    with pytest.raises(ShapeMismatchError):
        synthesize(other, CoefficientGrid(np.zeros((4, 16)), 8, 2, 16))


def test_window_concentration_finite(small_system):
    assert np.isfinite(window_concentration(small_system))
