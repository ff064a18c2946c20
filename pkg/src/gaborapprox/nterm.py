"""Best N-term approximation from a Gabor dictionary.

Three computable stand-ins for the infimum over all N-term expansions:

- ``greedy``: keep the N largest weighted canonical (dual-window) coefficients
  and synthesize with the primal window;
- ``greedy+ls``: same support, coefficients replaced by the l2 projection onto
  the span of the selected atoms;
- ``exhaustive``: search every support of size N for the smallest l2 residual.
"""

import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .frames import CoefficientGrid, analyze, atom_matrix, canonical_dual, require_frame, synthesize
from .norms import NormParams, _fmt, modulation_norm, weight_grid
from .validation import CapabilityError, check_signal

__all__ = [
    "Support",
    "SigmaTable",
    "greedy_nterm",
    "ls_refine",
    "exhaustive_sigma",
    "sigma_curve",
    "METHODS",
]

METHODS = ("greedy", "greedy+ls", "exhaustive")
EXHAUSTIVE_BUDGET = 2_000_000
LS_RCOND = 1e-12


@dataclass(frozen=True)
class Support:
    """Set of lattice indices ``(k, n)``, stored sorted."""

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(sorted((int(k), int(n)) for k, n in self.entries))
        if len(set(entries)) != len(entries):
            raise ValueError("support contains duplicate indices")
        object.__setattr__(self, "entries", entries)

    @property
    def N(self):
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def check_bounds(self, system):
        for k, n in self.entries:
            if not (0 <= k < system.K and 0 <= n < system.M):
                raise ValueError(f"support index {(k, n)} outside the {system.K}x{system.M} lattice")
        return self


def _ensure_dual(system):
    if system.dual is None:
        system = canonical_dual(system)
    return system


def _check_N(system, N):
    if not 0 <= N <= system.K * system.M:
        raise ValueError(f"N={N} outside [0, {system.K * system.M}]")


def _ranking(system, coeffs, weight):
    """Flat k-major indices sorted by decreasing weighted magnitude; ties keep smaller (k, n) first."""
    mag = np.abs(coeffs.data)
    if not weight.is_flat:
        mag = mag * weight_grid(weight, system.a, system.b, system.L)
    return np.argsort(-mag.ravel(), kind="stable")


def _support_from_flat(system, flat):
    return Support(tuple(divmod(int(i), system.M) for i in flat))


def ls_refine(system, support, f):
    """Least-squares coefficients of ``f`` on the atoms in ``support``.

    Uses a minimum-norm solution, so linearly dependent atoms are allowed.
    Returns a grid that is zero off the support.
    """
    f = check_signal(f, L=system.L)
    support = support if isinstance(support, Support) else Support(tuple(support))
    if support.N == 0:
        raise ValueError("ls_refine needs a nonempty support")
    support.check_bounds(system)
    A = atom_matrix(system, support.entries)
    coef, *_ = np.linalg.lstsq(A, f, rcond=LS_RCOND)
    grid = CoefficientGrid.zeros(system)
    ks, ns = np.asarray(support.entries).T
    grid.data[ks, ns] = coef
    return grid


def _approximant(system, f, dual_coeffs, support, refine):
    if support.N == 0:
        return np.zeros(system.L, dtype=np.complex128)
    if refine:
        grid = ls_refine(system, support, f)
    else:
        grid = CoefficientGrid.zeros(system)
        ks, ns = np.asarray(support.entries).T
        grid.data[ks, ns] = dual_coeffs.data[ks, ns]
    return synthesize(system, grid, "primal")


def greedy_nterm(system, f, N, norm=None, refine=True):
    """Thresholding approximation with N primal atoms.

    Returns ``(approx, support, error)`` where ``error`` is the norm of
    ``f - approx`` in ``norm`` (default: flat M_{2,2}).
    """
    norm = norm or NormParams()
    require_frame(system)
    _check_N(system, N)
    f = check_signal(f, L=system.L)
    system = _ensure_dual(system)
    coeffs = analyze(system, f, "dual")
    support = _support_from_flat(system, _ranking(system, coeffs, norm.weight)[:N])
    approx = _approximant(system, f, coeffs, support, refine)
    return approx, support, modulation_norm(f - approx, system, norm)


def exhaustive_sigma(system, f, N, budget=EXHAUSTIVE_BUDGET):
    """Exact best N-term l2 error by enumerating every support of size N.

    Returns ``(error, support)``; the error is the l2 norm of the residual.
    """
    f = check_signal(f, L=system.L)
    n_atoms = system.K * system.M
    _check_N(system, N)
    count = math.comb(n_atoms, N)
    if count > budget:
        raise CapabilityError(f"exhaustive search over {count} supports exceeds budget {budget}")
    if N == 0:
        return float(np.linalg.norm(f)), Support()
    atoms = atom_matrix(system)
    best, best_idx = np.inf, None
    for idx in itertools.combinations(range(n_atoms), N):
        A = atoms[:, idx]
        coef, *_ = np.linalg.lstsq(A, f, rcond=LS_RCOND)
        err = np.linalg.norm(f - A @ coef)
        if err < best:
            best, best_idx = err, idx
    return float(best), _support_from_flat(system, best_idx)


@dataclass
class SigmaTable:
    """Approximation errors per N. ``sigmas`` is the running minimum of ``sigmas_raw``."""

    Ns: list
    sigmas_raw: list
    supports: list
    norm: NormParams
    method: str
    sigmas: list = field(default=None)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (len(self.Ns) == len(self.sigmas_raw) == len(self.supports)):
            raise ValueError("Ns, sigmas_raw and supports must have equal length")
        self.Ns = [int(N) for N in self.Ns]
        self.sigmas_raw = [float(s) for s in self.sigmas_raw]
        if self.sigmas is None:
            self.sigmas = np.minimum.accumulate(self.sigmas_raw).tolist() if self.Ns else []

    def sigma(self, N):
        """Monotone sigma at ``N`` (must be a tabulated N)."""
        try:
            return self.sigmas[self.Ns.index(N)]
        except ValueError:
            raise KeyError(f"N={N} not in table") from None

    CSV_HEADER = "N,sigma_raw,sigma_monotone,method,p,q,weight"

    def to_csv(self):
        out = io.StringIO()
        out.write(self.CSV_HEADER + "\n")
        for N, raw, mono in zip(self.Ns, self.sigmas_raw, self.sigmas):
            out.write(
                f"{N},{raw:.17g},{mono:.17g},{self.method},"
                f"{_fmt(self.norm.p)},{_fmt(self.norm.q)},{self.norm.weight}\n"
            )
        return out.getvalue()

    def to_json(self):
        return {
            "N": self.Ns,
            "sigma_raw": self.sigmas_raw,
            "sigma_monotone": self.sigmas,
            "method": self.method,
            "p": _fmt(self.norm.p),
            "q": _fmt(self.norm.q),
            "weight": str(self.norm.weight),
            "supports": [[list(e) for e in s.entries] for s in self.supports],
        }


def sigma_curve(system, f, Ns, norm=None, method="greedy+ls"):
    """Tabulate approximation errors for every N in the strictly increasing list ``Ns``."""
    norm = norm or NormParams()
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    Ns = [int(N) for N in Ns]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("Ns must be strictly increasing")
    require_frame(system)
    for N in Ns:
        _check_N(system, N)
    f = check_signal(f, L=system.L)
    system = _ensure_dual(system)
    coeffs = analyze(system, f, "dual")
    order = _ranking(system, coeffs, norm.weight)

    raw, supports = [], []
    for N in Ns:
        if method == "exhaustive":
            _, support = exhaustive_sigma(system, f, N)
            refine = True
        else:
            support = _support_from_flat(system, order[:N])
            refine = method == "greedy+ls"
        approx = _approximant(system, f, coeffs, support, refine)
        raw.append(modulation_norm(f - approx, system, norm))
        supports.append(support)
    return SigmaTable(Ns, raw, supports, norm, method)
