"""Numerical experiments for Jackson/Bernstein-type estimates on Gabor dictionaries.

The underlying results are asymptotic with unspecified constants, so every
check here is either an exponent fit with a tolerance or a bounded-ratio
statement over a family of inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .frames import analyze, canonical_dual, require_frame, synthesize
from .norms import NormParams, mixed_norm, modulation_norm
from .nterm import SigmaTable, sigma_curve
from .signal import generate_test_signal
from .validation import check_exponent

__all__ = [
    "RateReport",
    "BernsteinReport",
    "bernstein_exponent",
    "sharp_exponent",
    "bernstein_ratio_sweep",
    "series_functional",
    "dyadic_ratio_bounds",
    "rate_fit",
    "direct_theorem_experiment",
    "inverse_theorem_experiment",
    "inverse_family_experiment",
    "dyadic_Ns",
]

NOISE_FLOOR = 1e-13
RATE_TOLERANCE = 0.15
GROWTH_SLACK = 0.1


@dataclass
class RateReport:
    alpha_hat: float
    alpha_theory: float
    window: tuple
    residual: float
    passed: bool
    super_polynomial: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class BernsteinReport:
    Ns: list
    max_ratio: list
    alpha_theory: float
    fitted_growth: float
    C_hat: float
    sharp_exponent: float
    ratios: np.ndarray = field(repr=False, default=None)

    @property
    def bound_holds(self):
        bound = self.C_hat * np.asarray(self.Ns, dtype=float) ** self.alpha_theory
        return bool(np.all(np.asarray(self.max_ratio) <= bound * (1 + 1e-12)))

    @property
    def passed(self):
        return self.bound_holds and self.fitted_growth <= self.alpha_theory + GROWTH_SLACK

    @property
    def within_sharp(self):
        """Whether the fitted growth stays within the plain sequence-space exponent (+0.1)."""
        return self.fitted_growth <= self.sharp_exponent + GROWTH_SLACK

    def to_csv(self):
        lines = ["N,max_ratio,bound"]
        for N, r in zip(self.Ns, self.max_ratio):
            lines.append(f"{N},{r:.17g},{self.C_hat * N ** self.alpha_theory:.17g}")
        return "\n".join(lines) + "\n"


def dyadic_Ns(N_max, include_zero=False):
    """``[1, 2, 4, ..., N_max]`` (``N_max`` appended when it is not a power of two)."""
    Ns = [0] if include_zero else []
    j = 1
    while j <= N_max:
        Ns.append(j)
        j *= 2
    if Ns and Ns[-1] != N_max and N_max > 0:
        Ns.append(N_max)
    return Ns


def _check_ordering(p1, q1, p, q):
    p1, q1 = check_exponent(p1, "p1"), check_exponent(q1, "q1")
    p, q = check_exponent(p, "p"), check_exponent(q, "q")
    if not (p1 <= p < np.inf and q1 <= q < np.inf):
        raise ValueError(f"need 1 <= p1 <= p < inf and 1 <= q1 <= q < inf, got p1={p1}, q1={q1}, p={p}, q={q}")
    return p1, q1, p, q


def bernstein_exponent(p1, q1, p, q, scale="mixed"):
    """Exponent of the Bernstein-type bound ``||s||_{M_{p1,q1}} <= C N^alpha ||s||_{M_{p,q}}``.

    ``diagonal`` (p1 == q1, p == q): ``1/p1 - 1/p + 1``.
    ``mixed``: ``(1/p1 + 1/q1) - (1/p + 1/q) + 2``.
    """
    p1, q1, p, q = _check_ordering(p1, q1, p, q)
    if scale == "diagonal":
        if p1 != q1 or p != q:
            raise ValueError("diagonal exponent needs p1 == q1 and p == q")
        return 1 / p1 - 1 / p + 1
    if scale == "mixed":
        return (1 / p1 + 1 / q1) - (1 / p + 1 / q) + 2
    raise ValueError(f"scale must be 'diagonal' or 'mixed', got {scale!r}")


def _auto_scale(p1, q1, p, q):
    return "diagonal" if p1 == q1 and p == q else "mixed"


def sharp_exponent(p1, q1, p, q, scale=None):
    """Sequence-space exponent without the +1 / +2 offsets."""
    if (scale or _auto_scale(p1, q1, p, q)) == "diagonal":
        return 1 / p1 - 1 / p
    return (1 / p1 + 1 / q1) - (1 / p + 1 / q)


def _fit_slope(x, y):
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    resid = np.log(y) - (slope * np.log(x) + intercept)
    return float(slope), float(np.sqrt(np.mean(resid**2)))


def bernstein_ratio_sweep(system, source, target, Ns, trials, seed, scale=None):
    """Worst observed ``||s||_source / ||s||_target`` over random ``s`` with N atoms.

    Each trial draws a uniform support of size N and i.i.d. standard complex
    normal coefficients from its own stream ``default_rng([seed, N, trial])``,
    so results do not depend on evaluation order and prefixes of a larger
    run reproduce a smaller one. ``scale`` picks the theoretical exponent
    (see :func:`bernstein_exponent`); by default it is ``diagonal`` when both
    norms have equal exponents and ``mixed`` otherwise.
    """
    _check_ordering(source.p, source.q, target.p, target.q)
    scale = scale or _auto_scale(source.p, source.q, target.p, target.q)
    alpha = bernstein_exponent(source.p, source.q, target.p, target.q, scale)
    require_frame(system)
    n_atoms = system.K * system.M
    Ns = [int(N) for N in Ns]
    if any(not 1 <= N <= n_atoms for N in Ns):
        raise ValueError(f"every N must lie in [1, {n_atoms}]")

    ratios = np.empty((len(Ns), trials))
    for i, N in enumerate(Ns):
        for t in range(trials):
            rng = np.random.default_rng([seed, N, t])
            flat = rng.choice(n_atoms, size=N, replace=False)
            coef = (rng.standard_normal(N) + 1j * rng.standard_normal(N)) / np.sqrt(2)
            data = np.zeros(n_atoms, dtype=np.complex128)
            data[flat] = coef
            s = synthesize(system, data.reshape(system.K, system.M))
            c = analyze(system, s)
            ratios[i, t] = mixed_norm(c, source) / mixed_norm(c, target)

    max_ratio = ratios.max(axis=1)
    growth = _fit_slope(Ns, max_ratio)[0] if len(Ns) > 1 else 0.0
    C_hat = float(np.max(max_ratio / np.asarray(Ns, dtype=float) ** alpha))
    return BernsteinReport(
        Ns=Ns,
        max_ratio=max_ratio.tolist(),
        alpha_theory=alpha,
        fitted_growth=growth,
        C_hat=C_hat,
        sharp_exponent=sharp_exponent(source.p, source.q, target.p, target.q, scale),
        ratios=ratios,
    )


def _arrays(table):
    if isinstance(table, SigmaTable):
        return np.asarray(table.Ns), np.asarray(table.sigmas, dtype=float)
    Ns, sigmas = table
    return np.asarray(Ns), np.minimum.accumulate(np.asarray(sigmas, dtype=float))


def series_functional(table, alpha, lam):
    """Direct and dyadic forms of the approximation-space functional.

    ``direct = (sum_N [N^alpha sigma_N]^lam / N)^(1/lam)`` over tabulated N >= 1,
    ``dyadic = (sum_j [(2^j)^alpha sigma_{2^j}]^lam)^(1/lam)`` over 2^j <= max N.
    Returns ``(direct, dyadic, dyadic / direct)``; the ratio is 1 when both vanish.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    Ns, sig = _arrays(table)
    keep = Ns >= 1
    Ns, sig = Ns[keep], sig[keep]
    if Ns.size == 0:
        raise ValueError("series_functional needs at least one N >= 1")
    Nf = Ns.astype(float)
    direct = float(np.sum((Nf**alpha * sig) ** lam / Nf) ** (1 / lam))
    lookup = dict(zip(Ns.tolist(), sig.tolist()))
    terms = []
    j = 1
    while j <= Ns.max():
        if j not in lookup:
            raise ValueError(f"dyadic point N={j} missing from table")
        terms.append((j**alpha * lookup[j]) ** lam)
        j *= 2
    dyadic = float(np.sum(terms) ** (1 / lam))
    if direct == 0:
        return direct, dyadic, 1.0 if dyadic == 0 else np.inf
    return direct, dyadic, dyadic / direct


def dyadic_ratio_bounds(alpha, lam):
    """Interval containing ``dyadic / direct`` for every non-increasing sigma sequence.

    Compares each block ``2^j <= N < 2^(j+1)`` of the direct sum with the
    dyadic terms at its endpoints. Requires every ``1 <= N <= N_max`` in the table.
    """
    e = alpha * lam - 1
    upper_block = max(1.0, 2.0**e)
    c = 2.0 ** (-alpha * lam) * min(1.0, 2.0**e)
    return upper_block ** (-1 / lam), ((1 + c) / c) ** (1 / lam)


def rate_fit(table, N_min, N_max, alpha_theory=float("nan"), floor=NOISE_FLOOR, tol=RATE_TOLERANCE):
    """Fit ``sigma_N ~ N^-alpha`` on ``N_min <= N <= N_max`` by log-log least squares."""
    if not N_min < N_max:
        raise ValueError(f"need N_min < N_max, got {N_min}, {N_max}")
    Ns, sig = _arrays(table)
    sel = (Ns >= max(N_min, 1)) & (Ns <= N_max) & (sig > floor)
    if sel.sum() < 4:
        raise ValueError(f"only {int(sel.sum())} points above the noise floor in [{N_min}, {N_max}]; need 4")
    slope, resid = _fit_slope(Ns[sel].astype(float), sig[sel])
    alpha_hat = -slope
    passed = bool(alpha_hat >= alpha_theory - tol) if not np.isnan(alpha_theory) else True
    return RateReport(alpha_hat, alpha_theory, (int(N_min), int(N_max)), resid, passed)


def direct_theorem_experiment(system, p, q, tau, atoms, seed, window=(4, 256)):
    """Decay of greedy+ls errors in M_q for a planted power-law signal.

    Passes when the fitted rate is at least ``1/p - 1/q - 0.15``. When the
    errors hit the noise floor before four usable points remain, the decay is
    reported as super-polynomial instead of fitted.
    """
    p, q = check_exponent(p, "p"), check_exponent(q, "q")
    if not p < q:
        raise ValueError(f"direct experiment needs p < q, got p={p}, q={q}")
    if tau * p <= 1:
        raise ValueError(f"planted coefficients must lie in l^p: need tau*p > 1, got {tau * p}")
    system = canonical_dual(system) if system.dual is None else system
    f, _ = generate_test_signal("power-law-coeffs", {"system": system, "tau": tau, "atoms": atoms}, seed)
    N_top = min(window[1], system.K * system.M)
    table = sigma_curve(system, f, range(0, N_top + 1), NormParams(q, q), "greedy+ls")
    alpha_theory = 1 / p - 1 / q

    Ns, sig = _arrays(table)
    partial = {}
    for N_max in dyadic_Ns(N_top):
        sel = (Ns >= 1) & (Ns <= N_max)
        partial[N_max] = float(np.sum((Ns[sel] ** alpha_theory * sig[sel]) ** p / Ns[sel]))
    try:
        report = rate_fit(table, window[0], N_top, alpha_theory)
    except ValueError:
        report = RateReport(np.inf, alpha_theory, (window[0], N_top), 0.0, True, super_polynomial=True)
    report.extra = {"partial_sums": partial, "table": table, "signal": f}
    return report


def _dyadic_majorant(table, alpha):
    Ns, sig = _arrays(table)
    lookup = dict(zip(Ns.tolist(), sig.tolist()))
    total, j = 0.0, 1
    while j <= Ns.max():
        if j not in lookup:
            raise ValueError(f"dyadic point N={j} missing from table")
        total += j**alpha * lookup[j]
        j *= 2
    return total


def inverse_theorem_experiment(system, p1, q1, p, q, table, f, scale=None):
    """Compare ``||f||_{M_{p1,q1}}`` with the dyadic majorant ``sum_j (2^j)^alpha sigma_{2^j}``.

    ``table`` must hold errors measured in ``M_{p,q}``.
    """
    p1, q1, p, q = _check_ordering(p1, q1, p, q)
    if (table.norm.p, table.norm.q) != (p, q):
        raise ValueError(f"table measured in M_{{{table.norm.p},{table.norm.q}}}, expected M_{{{p},{q}}}")
    alpha = bernstein_exponent(p1, q1, p, q, scale or _auto_scale(p1, q1, p, q))
    majorant = _dyadic_majorant(table, alpha)
    true_norm = modulation_norm(f, system, NormParams(p1, q1, table.norm.weight))
    if majorant == 0 and true_norm == 0:
        ratio = 1.0
    else:
        ratio = true_norm / majorant
    return {"alpha": alpha, "majorant": majorant, "true_norm": true_norm, "ratio": ratio}


def inverse_family_experiment(system, p1, q1, p, q, n_signals=20, seed=0, tau=1.1, atoms=32,
                              max_spread=1e3, scale=None):
    """Run :func:`inverse_theorem_experiment` over seeded power-law signals.

    Also reruns each signal scaled by 2 to check homogeneity of the ratio.
    """
    system = canonical_dual(system) if system.dual is None else system
    Ns = dyadic_Ns(system.K * system.M)
    norm = NormParams(p, q)
    rows = []
    for i in range(n_signals):
        f, _ = generate_test_signal("power-law-coeffs", {"system": system, "tau": tau, "atoms": atoms}, [seed, i])
        res = inverse_theorem_experiment(system, p1, q1, p, q, sigma_curve(system, f, Ns, norm), f, scale)
        res2 = inverse_theorem_experiment(system, p1, q1, p, q, sigma_curve(system, 2 * f, Ns, norm), 2 * f, scale)
        res["scaled_ratio"] = res2["ratio"]
        res["homogeneity_error"] = abs(res2["ratio"] - res["ratio"]) / abs(res["ratio"])
        rows.append(res)
    ratios = np.array([r["ratio"] for r in rows])
    spread = float(ratios.max() / ratios.min())
    homogeneity = float(max(r["homogeneity_error"] for r in rows))
    return {
        "rows": rows,
        "spread": spread,
        "homogeneity_error": homogeneity,
        "passed": bool(spread <= max_spread and homogeneity <= 1e-10),
    }
