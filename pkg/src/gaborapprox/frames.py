"""Discrete Gabor systems on Z_L: analysis, synthesis, frame operator and canonical dual.

Atoms follow one phase convention everywhere: atom ``(k, n)`` is
``T_{ak} M_{bn} w``, i.e. the window is modulated first and translated last::

    atom[t] = w[(t - a*k) mod L] * exp(2j*pi*b*n*(t - a*k)/L)

so ``analyze`` returns ``<f, T_{ak} M_{bn} g>`` and ``synthesize`` is its adjoint.
"""

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .signal import WindowSpec, make_window, modulate, translate
from .validation import (
    CapabilityError,
    NotAFrameError,
    ShapeMismatchError,
    check_lattice,
    check_signal,
)

__all__ = [
    "GaborSystem",
    "CoefficientGrid",
    "analyze",
    "synthesize",
    "atom",
    "atom_matrix",
    "frame_operator_apply",
    "frame_matrix",
    "frame_bounds",
    "is_frame",
    "canonical_dual",
    "window_concentration",
]

DENSE_LIMIT = 1024
FRAME_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window ``g`` on Z_L with time step ``a`` and frequency step ``b``.

    ``dual`` and ``bounds`` are attached by :func:`canonical_dual`.
    """

    g: np.ndarray
    a: int
    b: int
    dual: Optional[np.ndarray] = None
    bounds: Optional[tuple] = None

    def __post_init__(self):
        g = check_signal(self.g, name="window")
        check_lattice(g.shape[0], self.a, self.b)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        if self.dual is not None:
            object.__setattr__(self, "dual", check_signal(self.dual, L=g.shape[0], name="dual"))
        if self.bounds is not None:
            A, B = (float(v) for v in self.bounds)
            if not 0 < A <= B:
                raise ValueError(f"frame bounds must satisfy 0 < A <= B, got ({A}, {B})")
            object.__setattr__(self, "bounds", (A, B))

    @classmethod
    def from_window(cls, spec, L, a, b):
        if not isinstance(spec, WindowSpec):
            spec = WindowSpec(**spec) if isinstance(spec, dict) else WindowSpec(spec)
        return cls(make_window(spec, L), a, b)

    @property
    def L(self):
        return self.g.shape[0]

    @property
    def K(self):
        """Number of time positions."""
        return self.L // self.a

    @property
    def M(self):
        """Number of frequency channels."""
        return self.L // self.b

    @property
    def redundancy(self):
        return self.L / (self.a * self.b)

    def window(self, which="primal"):
        if which == "primal":
            return self.g
        if which == "dual":
            if self.dual is None:
                raise ValueError("dual window not computed; call canonical_dual first")
            return self.dual
        raise ValueError(f"which must be 'primal' or 'dual', got {which!r}")

    @cached_property
    def _frame_matrix(self):
        return _assemble_frame_matrix(self.g, self.a, self.b)

    @cached_property
    def _eig_bounds(self):
        ev = np.linalg.eigvalsh(self._frame_matrix)
        return max(float(ev[0]), 0.0), float(ev[-1])


@dataclass(eq=False)
class CoefficientGrid:
    """K x M array of Gabor coefficients tagged with the lattice ``(a, b, L)``."""

    data: np.ndarray
    a: int
    b: int
    L: int

    def __post_init__(self):
        check_lattice(self.L, self.a, self.b)
        data = np.asarray(self.data, dtype=np.complex128)
        shape = (self.L // self.a, self.L // self.b)
        if data.shape != shape:
            raise ShapeMismatchError(f"grid shape {data.shape} does not match lattice shape {shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("coefficient grid contains NaN or Inf")
        self.data = data

    @property
    def shape(self):
        return self.data.shape

    @classmethod
    def zeros(cls, system):
        return cls(np.zeros((system.K, system.M), dtype=np.complex128), system.a, system.b, system.L)

    def matches(self, system):
        return (self.a, self.b, self.L) == (system.a, system.b, system.L)

    def to_json(self):
        return {
            "a": self.a,
            "b": self.b,
            "L": self.L,
            "data": [[[float(z.real), float(z.imag)] for z in row] for row in self.data],
        }

    @classmethod
    def from_json(cls, obj):
        arr = np.asarray(obj["data"], dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1], int(obj["a"]), int(obj["b"]), int(obj["L"]))


def analyze(system, f, which="primal"):
    """Gabor coefficients ``c[k, n] = <f, T_{ak} M_{bn} w>``.

    One length-L FFT per time position: substituting ``u = t - a*k`` gives
    ``c[k, n] = sum_u f[u + a*k] conj(w[u]) exp(-2j*pi*b*n*u/L)``.
    """
    f = check_signal(f, L=system.L)
    w = system.window(which)
    L, a, b = system.L, system.a, system.b
    idx = (np.arange(L)[None, :] + a * np.arange(system.K)[:, None]) % L
    spec = np.fft.fft(f[idx] * np.conj(w)[None, :], axis=1)
    return CoefficientGrid(spec[:, ::b], a, b, L)


def synthesize(system, c, which="primal"):
    """Signal ``sum_{k,n} c[k, n] T_{ak} M_{bn} w``; the adjoint of :func:`analyze`."""
    if not isinstance(c, CoefficientGrid):
        c = CoefficientGrid(c, system.a, system.b, system.L)
    if not c.matches(system):
        raise ShapeMismatchError(f"grid lattice {(c.a, c.b, c.L)} does not match system {(system.a, system.b, system.L)}")
    w = system.window(which)
    L, K, M = system.L, system.K, system.M
    # sum_n c[k,n] exp(2j*pi*n*u/M) is M-periodic in u
    P = M * np.fft.ifft(c.data, axis=1)
    u = np.arange(L)
    Q = P[:, u % M] * w[None, :]
    idx = (u[None, :] - system.a * np.arange(K)[:, None]) % L
    return Q[np.arange(K)[:, None], idx].sum(axis=0)


def atom(system, k, n, which="primal"):
    """The single atom ``T_{ak} M_{bn} w``."""
    return translate(modulate(system.window(which), system.b * n), system.a * k)


def atom_matrix(system, support=None, which="primal"):
    """Matrix whose columns are the atoms indexed by ``support`` (all atoms, k-major, if None)."""
    if support is None:
        ks, ns = np.divmod(np.arange(system.K * system.M), system.M)
    else:
        pairs = np.asarray(list(support), dtype=int).reshape(-1, 2)
        ks, ns = pairs[:, 0], pairs[:, 1]
    w = system.window(which)
    L = system.L
    t = np.arange(L)[:, None]
    shifted = (t - system.a * ks[None, :]) % L
    phase = np.exp(2j * np.pi * ((system.b * ns[None, :] * shifted) % L) / L)
    return w[shifted] * phase


def frame_operator_apply(system, f):
    """``S f = D_g C_g f``."""
    return synthesize(system, analyze(system, f), "primal")


def _assemble_frame_matrix(g, a, b):
    # S[t, s] = M * sum_k g[t - ak] conj(g[s - ak]) when t = s mod M, else 0
    L = g.shape[0]
    K, M = L // a, L // b
    t = np.arange(L)
    G = g[(t[None, :] - a * np.arange(K)[:, None]) % L]
    S = M * (G.T @ np.conj(G))
    S[(t[:, None] - t[None, :]) % M != 0] = 0
    return S


def frame_matrix(system):
    """Dense L x L matrix of the frame operator (L <= 1024)."""
    if system.L > DENSE_LIMIT:
        raise CapabilityError(f"dense frame operator limited to L <= {DENSE_LIMIT}, got L={system.L}")
    return system._frame_matrix


def frame_bounds(system):
    """Optimal frame bounds ``(A, B)``: extreme eigenvalues of the frame operator."""
    if system.L > DENSE_LIMIT:
        raise CapabilityError(f"dense frame bounds limited to L <= {DENSE_LIMIT}, got L={system.L}")
    return system._eig_bounds


def is_frame(system):
    """True when ``A > 1e-10 * B``. Systems with ``a*b > L`` never qualify."""
    if system.a * system.b > system.L:
        return False
    A, B = frame_bounds(system)
    return A > FRAME_THRESHOLD * B


def require_frame(system):
    if system.a * system.b > system.L:
        raise NotAFrameError(f"a*b = {system.a * system.b} > L = {system.L}: undersampled, not a frame")
    if system.L <= DENSE_LIMIT and not is_frame(system):
        A, B = frame_bounds(system)
        raise NotAFrameError(f"not a frame: A/B = {A / B:.3e} below {FRAME_THRESHOLD}")


def canonical_dual(system):
    """Return a copy of ``system`` carrying the canonical dual window ``S^{-1} g`` and its bounds."""
    require_frame(system)
    S = frame_matrix(system)
    gamma = np.linalg.solve(S, system.g)
    return dataclasses.replace(system, dual=gamma, bounds=frame_bounds(system))


def window_concentration(system, weight=None):
    """Weighted l1 norm of the window's own lattice coefficients (an M1-type proxy).

    Recorded for reporting only; every finite window has finite concentration.
    """
    from .norms import NormParams, WeightSpec, mixed_norm

    params = NormParams(1.0, 1.0, weight or WeightSpec())
    return mixed_norm(analyze(system, system.g), params)
