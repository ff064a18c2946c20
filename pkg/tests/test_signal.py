import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborapprox import GaborSystem, WindowSpec, dft, generate_test_signal, make_window, modulate, translate
from gaborapprox.signal import signal_from_json, signal_to_json
from gaborapprox.validation import ShapeMismatchError, check_signal

from conftest import random_signal


def brute_dft(f):
    L = len(f)
    t = np.arange(L)
    return np.array([np.sum(f * np.exp(-2j * np.pi * w * t / L)) for w in range(L)])


@pytest.mark.parametrize("L", [4, 7, 16, 30])
def test_dft_matches_direct_sum(rng, L):
    f = random_signal(rng, L)
    assert np.allclose(dft(f), brute_dft(f), atol=1e-10)
    assert np.allclose(dft(dft(f), "inverse"), f, atol=1e-12)


def test_dft_of_delta_is_constant():
    f = np.zeros(8)
    f[0] = 1
    assert np.allclose(dft(f), np.ones(8))


def test_dft_bad_direction():
    with pytest.raises(ValueError):
        dft(np.ones(8), "sideways")


def test_translate_and_modulate_definitions():
    f = np.arange(8).astype(complex)
    assert np.array_equal(translate(f, 3), f[(np.arange(8) - 3) % 8])
    t = np.arange(8)
    assert np.allclose(modulate(f, 3), f * np.exp(2j * np.pi * 3 * t / 8))


@settings(max_examples=40, deadline=None)
@given(x=st.integers(-50, 50), w=st.integers(-50, 50), seed=st.integers(0, 2**16))
def test_commutation_relation(x, w, seed):
    L = 24
    f = random_signal(np.random.default_rng(seed), L)
    lhs = modulate(translate(f, x), w)
    rhs = np.exp(2j * np.pi * w * x / L) * translate(modulate(f, w), x)
    assert np.allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(x=st.integers(-40, 40), seed=st.integers(0, 2**16))
def test_translation_is_unitary_and_periodic(x, seed):
    f = random_signal(np.random.default_rng(seed), 20)
    assert np.isclose(np.linalg.norm(translate(f, x)), np.linalg.norm(f))
    assert np.allclose(translate(f, x + 20), translate(f, x))


def test_check_signal_rejects_bad_input():
    with pytest.raises(ValueError):
        check_signal(np.ones(3))
    with pytest.raises(ValueError):
        check_signal(np.array([1, 2, np.nan, 4]))
    with pytest.raises(ValueError):
        check_signal(np.ones((4, 4)))
    with pytest.raises(ShapeMismatchError):
        check_signal(np.ones(8), L=16)


def test_gaussian_matches_periodization_oracle():
    L, width = 32, 8.0
    n = np.arange(L)
    oracle = sum(np.exp(-np.pi * (n + j * L) ** 2 / width**2) for j in range(-5, 6))
    oracle /= np.linalg.norm(oracle)
    assert np.allclose(make_window(WindowSpec("gaussian", width=width), L), oracle, atol=1e-14)


def test_wide_gaussian_needs_many_periods():
    # width comparable to L: periodization terms beyond |j|=4 still matter
    L, width = 16, 16.0
    n = np.arange(L)
    oracle = sum(np.exp(-np.pi * (n + j * L) ** 2 / width**2) for j in range(-20, 21))
    oracle /= np.linalg.norm(oracle)
    assert np.allclose(make_window(WindowSpec("gaussian", width=width), L), oracle, atol=1e-14)


@pytest.mark.parametrize("kind", ["gaussian", "hann", "boxcar"])
def test_windows_unit_norm_and_even(kind):
    g = make_window(WindowSpec(kind, width=9), 64)
    assert np.isclose(np.linalg.norm(g), 1.0)
    assert np.allclose(g, g[(-np.arange(64)) % 64])


def test_boxcar_support():
    g = make_window(WindowSpec("boxcar", width=4, normalization="none"), 16)
    assert np.array_equal(np.nonzero(g)[0], [0, 1, 2, 14, 15])


def test_center_offset_shifts_peak():
    g = make_window(WindowSpec("gaussian", width=4, center=0.5), 16)
    assert np.isclose(g[0], g[1])


@pytest.mark.parametrize("width", [0, -1, 100])
def test_bad_width(width):
    with pytest.raises(ValueError):
        make_window(WindowSpec("gaussian", width=width), 64)


def test_bad_window_kind():
    with pytest.raises(ValueError):
        WindowSpec("triangle")


def test_generator_is_deterministic():
    system = GaborSystem.from_window(WindowSpec(), 64, 8, 8)
    f1, g1 = generate_test_signal("sparse-gabor", {"system": system, "atoms": 3}, 7)
    f2, g2 = generate_test_signal("sparse-gabor", {"system": system, "atoms": 3}, 7)
    assert np.array_equal(f1, f2)
    assert np.array_equal(g1.data, g2.data)
    f3, _ = generate_test_signal("sparse-gabor", {"system": system, "atoms": 3}, 8)
    assert not np.array_equal(f1, f3)


def test_power_law_magnitudes():
    system = GaborSystem.from_window(WindowSpec(), 64, 8, 8)
    _, grid = generate_test_signal("power-law-coeffs", {"system": system, "tau": 1.5, "atoms": 10}, 0)
    mags = np.sort(np.abs(grid.data).ravel())[::-1][:10]
    assert np.allclose(mags, np.arange(1, 11) ** -1.5)
    assert np.count_nonzero(grid.data) == 10


def test_separated_positions():
    system = GaborSystem.from_window(WindowSpec(), 128, 8, 8)
    _, grid = generate_test_signal("sparse-gabor", {"system": system, "atoms": 6, "min_separation": 3}, 2)
    ks, ns = np.nonzero(grid.data)
    for i in range(len(ks)):
        for j in range(i):
            dk = min((ks[i] - ks[j]) % 16, (ks[j] - ks[i]) % 16)
            dn = min((ns[i] - ns[j]) % 16, (ns[j] - ns[i]) % 16)
            assert max(dk, dn) >= 3


@pytest.mark.parametrize("kind", ["chirp", "noise"])
def test_plain_signals(kind):
    f, grid = generate_test_signal(kind, {"L": 32}, 0)
    assert grid is None and f.shape == (32,) and np.all(np.isfinite(f))


def test_generator_errors():
    with pytest.raises(ValueError):
        generate_test_signal("sawtooth", {"L": 32}, 0)
    with pytest.raises(ValueError):
        generate_test_signal("sparse-gabor", {}, 0)


def test_json_roundtrip(rng):
    f = random_signal(rng, 16)
    assert np.array_equal(signal_from_json(signal_to_json(f)), f)
