"""Finite cyclic signals on Z_L: DFT, time-frequency shifts, windows and test signals.

Signals are plain 1-D ``complex128`` numpy arrays; :func:`check_signal`
enforces the invariants (finite entries, length at least 4).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .validation import check_positive_int, check_signal

__all__ = [
    "WindowSpec",
    "dft",
    "translate",
    "modulate",
    "cyclic_distance",
    "make_window",
    "generate_test_signal",
    "signal_to_json",
    "signal_from_json",
]

WINDOW_KINDS = ("gaussian", "hann", "boxcar", "custom")
SIGNAL_KINDS = ("sparse-gabor", "power-law-coeffs", "chirp", "noise")


def dft(f, direction="forward"):
    """Unitary-up-to-L discrete Fourier transform.

    ``forward`` uses the kernel ``exp(-2j*pi*t*w/L)`` without scaling and
    ``inverse`` carries the ``1/L`` factor, so ``dft(dft(f), "inverse") == f``.
    """
    f = check_signal(f)
    if direction == "forward":
        return np.fft.fft(f)
    if direction == "inverse":
        return np.fft.ifft(f)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def translate(f, x):
    """Cyclic translation: ``out[t] = f[(t - x) mod L]``."""
    f = check_signal(f)
    return np.roll(f, int(x) % f.shape[0])


def modulate(f, w):
    """Cyclic modulation: ``out[t] = exp(2j*pi*w*t/L) * f[t]``."""
    f = check_signal(f)
    L = f.shape[0]
    t = np.arange(L)
    # reduce w*t mod L in integers so the phase is exact for large arguments
    return f * np.exp(2j * np.pi * ((int(w) * t) % L) / L)


def cyclic_distance(x, L):
    """Distance of ``x`` to 0 on Z_L."""
    x = np.mod(x, L)
    return np.minimum(x, L - x)


@dataclass(frozen=True)
class WindowSpec:
    """Parameters for :func:`make_window`.

    ``center`` shifts the window peak by a (possibly fractional) number of
    samples; only ``center == 0`` windows are even. ``values`` carries the
    samples of a ``custom`` window.
    """

    kind: str = "gaussian"
    width: Optional[float] = None
    normalization: str = "unit-l2"
    center: float = 0.0
    values: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}; expected one of {WINDOW_KINDS}")
        if self.normalization not in ("unit-l2", "none"):
            raise ValueError(f"normalization must be 'unit-l2' or 'none', got {self.normalization!r}")
        if self.kind == "custom" and self.values is None:
            raise ValueError("custom windows need values")


def _periodized_gaussian(L, width, center):
    n = np.arange(L, dtype=float) - center
    g = np.exp(-np.pi * n**2 / width**2)
    j = 1
    while True:
        added = np.exp(-np.pi * (n + j * L) ** 2 / width**2) + np.exp(-np.pi * (n - j * L) ** 2 / width**2)
        g += added
        if j >= 4 and added.max() < 1e-16:
            break
        j += 1
    return g


def make_window(spec, L):
    """Sample a periodized window of length ``L``.

    >>> g = make_window(WindowSpec("gaussian", width=8), 64)
    >>> round(float(np.linalg.norm(g)), 12)
    1.0
    """
    L = check_positive_int(L, "L")
    if spec.kind == "custom":
        g = check_signal(np.asarray(spec.values), L=L, name="window")
    else:
        width = float(np.sqrt(L)) if spec.width is None else float(spec.width)
        if not width > 0:
            raise ValueError(f"window width must be positive, got {width}")
        if width > L:
            raise ValueError(f"window width {width} exceeds L={L}")
        if spec.kind == "gaussian":
            g = _periodized_gaussian(L, width, spec.center)
        else:
            # signed cyclic offset from the window center, in (-L/2, L/2]
            d = np.mod(np.arange(L) - spec.center + L / 2, L) - L / 2
            if spec.kind == "hann":
                g = np.where(np.abs(d) < width / 2, np.cos(np.pi * d / width) ** 2, 0.0)
            else:
                g = np.where(np.abs(d) <= width / 2, 1.0, 0.0)
        g = g.astype(np.complex128)
    if spec.normalization == "unit-l2":
        nrm = np.linalg.norm(g)
        if nrm == 0:
            raise ValueError("window is identically zero")
        g = g / nrm
    return g


def _random_positions(K, M, count, rng, min_separation):
    """Draw ``count`` distinct lattice cells, pairwise cyclic Chebyshev distance >= min_separation."""
    if count > K * M:
        raise ValueError(f"cannot place {count} atoms on a {K}x{M} lattice")
    order = rng.permutation(K * M)
    chosen = []
    for idx in order:
        k, n = divmod(int(idx), M)
        if min_separation > 1:
            ok = all(
                max(cyclic_distance(k - k2, K), cyclic_distance(n - n2, M)) >= min_separation
                for k2, n2 in chosen
            )
            if not ok:
                continue
        chosen.append((k, n))
        if len(chosen) == count:
            return chosen
    raise ValueError(f"could not place {count} atoms with separation {min_separation}")


def generate_test_signal(kind, params, seed):
    """Build a deterministic test signal.

    Returns ``(signal, grid)``; ``grid`` is the planted
    :class:`~gaborapprox.frames.CoefficientGrid` for the lattice-based kinds
    and ``None`` otherwise.

    Parameters by kind:

    - ``sparse-gabor``: ``system``, ``atoms`` (default 1), optional
      ``coefficients`` (default unit modulus with uniform random phase),
      ``positions`` ((k, n) pairs), ``min_separation`` (cyclic Chebyshev
      distance in lattice cells, default 0).
    - ``power-law-coeffs``: ``system``, ``tau``, ``atoms``, ``min_separation``.
      The j-th largest planted magnitude is ``j**-tau``; phases are uniform.
    - ``chirp``: ``L``, optional ``rate`` (bins per sample, default 0.25).
    - ``noise``: ``L``; standard complex normal samples.
    """
    from .frames import CoefficientGrid, synthesize

    if kind not in SIGNAL_KINDS:
        raise ValueError(f"unknown signal kind {kind!r}; expected one of {SIGNAL_KINDS}")
    params = dict(params or {})
    rng = np.random.default_rng(seed)

    if kind in ("chirp", "noise"):
        if "L" in params:
            L = check_positive_int(params["L"], "L")
        elif "system" in params:
            L = params["system"].L
        else:
            raise ValueError(f"{kind} signals need L")
        if kind == "noise":
            f = (rng.standard_normal(L) + 1j * rng.standard_normal(L)) / np.sqrt(2)
        else:
            rate = float(params.get("rate", 0.25))
            t = np.arange(L)
            f = np.exp(1j * np.pi * rate * t**2 / 2 + 2j * np.pi * rng.random())
        return check_signal(f), None

    system = params.get("system")
    if system is None:
        raise ValueError(f"{kind} signals need a GaborSystem in params['system']")
    K, M = system.K, system.M
    atoms = int(params.get("atoms", 1))
    sep = int(params.get("min_separation", 0))
    data = np.zeros((K, M), dtype=np.complex128)

    if kind == "sparse-gabor":
        positions = params.get("positions")
        if positions is None:
            positions = _random_positions(K, M, atoms, rng, sep)
        coeffs = params.get("coefficients")
        if coeffs is None:
            coeffs = np.exp(2j * np.pi * rng.random(len(positions)))
        if len(coeffs) != len(positions):
            raise ValueError("coefficients and positions differ in length")
        for (k, n), c in zip(positions, coeffs):
            data[k, n] += c
    else:
        tau = float(params["tau"])
        positions = _random_positions(K, M, atoms, rng, sep)
        mags = np.arange(1, atoms + 1, dtype=float) ** -tau
        phases = np.exp(2j * np.pi * rng.random(atoms))
        for (k, n), c in zip(positions, mags * phases):
            data[k, n] = c

    grid = CoefficientGrid(data, system.a, system.b, system.L)
    return synthesize(system, grid, "primal"), grid


def signal_to_json(f):
    """Encode a signal as a list of ``[re, im]`` pairs."""
    f = check_signal(f)
    return [[float(z.real), float(z.imag)] for z in f]


def signal_from_json(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a list of [re, im] pairs")
    return check_signal(arr[:, 0] + 1j * arr[:, 1])
