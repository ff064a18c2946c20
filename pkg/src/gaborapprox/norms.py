"""Moderate weights and weighted mixed norms of Gabor coefficient grids."""

from dataclasses import dataclass, field

import numpy as np

from .frames import CoefficientGrid, analyze, require_frame
from .signal import cyclic_distance
from .validation import check_exponent

__all__ = [
    "WeightSpec",
    "NormParams",
    "parse_norm_params",
    "weight_eval",
    "weight_grid",
    "moderateness_probe",
    "mixed_norm",
    "modulation_norm",
    "ap_seminorm",
]


@dataclass(frozen=True)
class WeightSpec:
    """Polynomial weight ``m(x, w) = (1 + d(x)^2 + d(w)^2)^(s/2)`` with cyclic distance ``d``.

    ``kind="flat"`` gives ``m == 1``. The weight is used as its own
    submultiplicative majorant ``v``; ``C`` is the analytic moderation
    constant ``2^(s/2)`` for ``m(z1 + z2) <= C v(z1) m(z2)``.
    """

    kind: str = "flat"
    s: float = 0.0
    C: float = field(init=False)

    def __post_init__(self):
        if self.kind not in ("flat", "polynomial"):
            raise ValueError(f"weight kind must be 'flat' or 'polynomial', got {self.kind!r}")
        s = float(self.s)
        if s < 0 or np.isnan(s):
            raise ValueError(f"weight order s must be >= 0, got {self.s}")
        if self.kind == "flat":
            s = 0.0
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "C", 2.0 ** (s / 2))

    @property
    def is_flat(self):
        return self.kind == "flat" or self.s == 0

    def __str__(self):
        return "flat" if self.kind == "flat" else f"poly:s={_fmt(self.s)}"


def _fmt(x):
    if np.isinf(x):
        return "inf"
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class NormParams:
    """Exponents ``p`` (time, inner) and ``q`` (frequency, outer) plus a weight."""

    p: float = 2.0
    q: float = 2.0
    weight: WeightSpec = WeightSpec()

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p, "p"))
        object.__setattr__(self, "q", check_exponent(self.q, "q"))
        if isinstance(self.weight, str):
            object.__setattr__(self, "weight", _parse_weight(self.weight))

    def __str__(self):
        return f"p={_fmt(self.p)},q={_fmt(self.q)},weight={self.weight}"


def _parse_weight(text):
    text = text.strip()
    if text == "flat":
        return WeightSpec()
    if text.startswith("poly:"):
        key, _, value = text[len("poly:"):].partition("=")
        if key.strip() != "s" or not value:
            raise ValueError(f"bad polynomial weight {text!r}; expected 'poly:s=<real>'")
        return WeightSpec("polynomial", float(value))
    raise ValueError(f"unknown weight {text!r}; expected 'flat' or 'poly:s=<real>'")


def parse_norm_params(text):
    """Parse strings such as ``"p=1,q=2,weight=poly:s=2"``.

    Missing keys default to ``p=2``, ``q=2``, flat weight; ``inf`` is accepted
    for either exponent.

    >>> str(parse_norm_params("p=1,q=inf"))
    'p=1,q=inf,weight=flat'
    """
    values = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in ("p", "q", "weight"):
            raise ValueError(f"bad norm parameter {item!r}; expected p=..., q=..., weight=...")
        if key in values:
            raise ValueError(f"duplicate norm parameter {key!r}")
        values[key] = value.strip()
    weight = _parse_weight(values["weight"]) if "weight" in values else WeightSpec()
    return NormParams(float(values.get("p", 2)), float(values.get("q", 2)), weight)


def weight_eval(weight, x, freq, L):
    """Value of the weight at the time-frequency point ``(x, freq)`` of Z_L x Z_L."""
    if weight.is_flat:
        return np.ones(np.broadcast(x, freq).shape) if np.ndim(x) or np.ndim(freq) else 1.0
    dx = cyclic_distance(x, L).astype(float)
    dw = cyclic_distance(freq, L).astype(float)
    return (1.0 + dx**2 + dw**2) ** (weight.s / 2)


def weight_grid(weight, a, b, L):
    """Weight sampled at the lattice points ``(a*k, b*n)``, shape ``(L/a, L/b)``."""
    k = np.arange(L // a)[:, None]
    n = np.arange(L // b)[None, :]
    return np.broadcast_to(weight_eval(weight, a * k, b * n, L), (L // a, L // b))


def moderateness_probe(weight, L, trials=1000, seed=0):
    """Largest observed ``m(z1 + z2) / (v(z1) m(z2))`` over random points of Z_L^2, with ``v = m``."""
    rng = np.random.default_rng(seed)
    z1 = rng.integers(0, L, size=(trials, 2))
    z2 = rng.integers(0, L, size=(trials, 2))
    s = z1 + z2
    num = weight_eval(weight, s[:, 0], s[:, 1], L)
    den = weight_eval(weight, z1[:, 0], z1[:, 1], L) * weight_eval(weight, z2[:, 0], z2[:, 1], L)
    return float(np.max(num / den))


def _lp(x, p, axis):
    # x >= 0
    if np.isinf(p):
        return x.max(axis=axis)
    if p == 1:
        return x.sum(axis=axis)
    scale = x.max(axis=axis, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return ((x / safe) ** p).sum(axis=axis) ** (1.0 / p) * np.squeeze(safe, axis=axis)


def mixed_norm(c, params):
    """``( sum_n ( sum_k |c[k,n]|^p m(ak,bn)^p )^(q/p) )^(1/q)``, sup for infinite exponents."""
    if not isinstance(c, CoefficientGrid):
        raise TypeError("mixed_norm expects a CoefficientGrid")
    x = np.abs(c.data)
    if not params.weight.is_flat:
        x = x * weight_grid(params.weight, c.a, c.b, c.L)
    inner = _lp(x, params.p, axis=0)
    return float(_lp(inner, params.q, axis=0))


def modulation_norm(f, system, params):
    """Discrete modulation-space norm: :func:`mixed_norm` of the lattice coefficients of ``f``."""
    require_frame(system)
    return mixed_norm(analyze(system, f), params)


def ap_seminorm(c, p):
    """``(sum |c[k,n]|^p)^(1/p)`` over the grid.

    For a redundant dictionary this is only an upper proxy for the
    A_p seminorm, which is an infimum over all representations.
    """
    p = check_exponent(p, "p", allow_below_one=True)
    data = c.data if isinstance(c, CoefficientGrid) else np.asarray(c)
    return float(_lp(np.abs(data).ravel(), p, axis=0))
