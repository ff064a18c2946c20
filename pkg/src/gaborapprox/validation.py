"""Input validation helpers and package exceptions."""

import numbers

import numpy as np


class NotAFrameError(ValueError):
    """Raised when an operation needs a Gabor frame but the system is not one."""


class CapabilityError(RuntimeError):
    """Raised when a request exceeds a documented size or budget limit."""


class ShapeMismatchError(ValueError):
    pass


MIN_LENGTH = 4


def check_signal(f, L=None, name="f"):
    """Return ``f`` as a finite 1-D complex array, optionally of length ``L``."""
    arr = np.asarray(f)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.shape[0] < MIN_LENGTH:
        raise ValueError(f"{name} must have length >= {MIN_LENGTH}, got {arr.shape[0]}")
    if not np.issubdtype(arr.dtype, np.number):
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if L is not None and arr.shape[0] != L:
        raise ShapeMismatchError(f"{name} has length {arr.shape[0]}, expected {L}")
    return arr


def check_signals(X, L=None):
    """Batch version of :func:`check_signal` for an ``(n_samples, L)`` array."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array of signals, got shape {arr.shape}")
    if arr.shape[1] < MIN_LENGTH:
        raise ValueError(f"signals must have length >= {MIN_LENGTH}, got {arr.shape[1]}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains NaN or Inf")
    if L is not None and arr.shape[1] != L:
        raise ShapeMismatchError(f"signals have length {arr.shape[1]}, expected {L}")
    return arr


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_lattice(L, a, b):
    """Validate lattice parameters: ``a`` and ``b`` must divide ``L``."""
    L = check_positive_int(L, "L")
    a = check_positive_int(a, "a")
    b = check_positive_int(b, "b")
    if L < MIN_LENGTH:
        raise ValueError(f"L must be >= {MIN_LENGTH}, got {L}")
    if L % a:
        raise ValueError(f"time step a={a} does not divide L={L}")
    if L % b:
        raise ValueError(f"frequency step b={b} does not divide L={L}")
    return L, a, b


def check_exponent(p, name="p", allow_below_one=False):
    """Validate a Lebesgue exponent; ``inf`` is allowed."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {p!r}") from None
    if np.isnan(p):
        raise ValueError(f"{name} must not be NaN")
    lower = 0.0 if allow_below_one else 1.0
    if p < lower or (allow_below_one and p == 0):
        raise ValueError(f"{name} must be {'> 0' if allow_below_one else '>= 1'}, got {p}")
    return p
