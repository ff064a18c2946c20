"""``gabor`` command-line front end.

Configuration is a flat ``key=value`` text file (``#`` starts a comment);
``--set key=value`` overrides it and ``--seed`` / ``--out`` override
``seed`` / ``output-dir``. Each run writes ``<experiment>-<seed>.json`` and
``<experiment>-<seed>.csv`` and exits 0 only when every report passed.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import suite
from .frames import (
    CoefficientGrid,
    GaborSystem,
    analyze,
    canonical_dual,
    frame_bounds,
    is_frame,
    synthesize,
    window_concentration,
)
from .norms import _fmt, modulation_norm, parse_norm_params
from .nterm import METHODS, greedy_nterm, sigma_curve
from .signal import SIGNAL_KINDS, WindowSpec, generate_test_signal, signal_from_json, signal_to_json
from .theory import (
    bernstein_ratio_sweep,
    direct_theorem_experiment,
    dyadic_Ns,
    dyadic_ratio_bounds,
    inverse_theorem_experiment,
    series_functional,
)
from .validation import CapabilityError, NotAFrameError, ShapeMismatchError, check_lattice

EXPERIMENTS = ("analyze", "synthesize", "dual", "bounds", "norm", "approx", "sigma",
               "bernstein", "direct", "inverse", "series", "all")
SEEDLESS = ("bounds", "dual")

DEFAULTS = {
    "L": "128",
    "a": "8",
    "b": "8",
    "window": "gaussian",
    "width": "",
    "center": "0",
    "norms": "p=2,q=2,weight=flat",
    "Ns": "dyadic",
    "N": "8",
    "method": "greedy+ls",
    "trials": "100",
    "signal": "noise",
    "atoms": "4",
    "separation": "3",
    "tau": "1.1",
    "p": "1",
    "q": "2",
    "scale": "",
    "alpha": "0.5",
    "lam": "1",
    "input": "",
    "grid": "",
    "seed": "",
    "output-dir": ".",
}


class ConfigError(ValueError):
    pass


def read_config(path):
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        values[key.strip()] = value.strip()
    return values


def resolve_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        cfg[key.strip()] = value.strip()
    if args.seed is not None:
        cfg["seed"] = str(args.seed)
    if args.out is not None:
        cfg["output-dir"] = args.out
    unknown = sorted(set(cfg) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _int(cfg, key):
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {cfg[key]!r}") from None


def _float(cfg, key):
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be a real number, got {cfg[key]!r}") from None


def validate(cfg, experiment):
    try:
        check_lattice(_int(cfg, "L"), _int(cfg, "a"), _int(cfg, "b"))
        norms = [parse_norm_params(s) for s in cfg["norms"].split(";") if s.strip()]
        WindowSpec(cfg["window"], width=float(cfg["width"]) if cfg["width"] else None,
                   center=_float(cfg, "center"))
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    if not norms:
        raise ConfigError("norms must list at least one norm")
    if cfg["method"] not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    if cfg["signal"] not in SIGNAL_KINDS:
        raise ConfigError(f"signal must be one of {SIGNAL_KINDS}")
    if experiment not in SEEDLESS and not (cfg["input"] or cfg["grid"]) and not cfg["seed"]:
        raise ConfigError(f"experiment {experiment!r} is randomized: a seed is required (--seed)")
    if cfg["seed"]:
        seed = _int(cfg, "seed")
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
    return norms


def build_system(cfg):
    spec = WindowSpec(cfg["window"], width=float(cfg["width"]) if cfg["width"] else None,
                      center=float(cfg["center"]))
    return GaborSystem.from_window(spec, int(cfg["L"]), int(cfg["a"]), int(cfg["b"]))


def _seed(cfg):
    return int(cfg["seed"]) if cfg["seed"] else 0


def load_signal(cfg, system):
    if cfg["input"]:
        data = json.loads(Path(cfg["input"]).read_text())
        f = signal_from_json(data["signal"] if isinstance(data, dict) else data)
        if f.shape[0] != system.L:
            raise ShapeMismatchError(f"input signal has length {f.shape[0]}, config L={system.L}")
        return f
    params = {"system": system, "atoms": _int(cfg, "atoms"), "tau": _float(cfg, "tau"), "L": system.L}
    if cfg["signal"] == "sparse-gabor":
        params["min_separation"] = _int(cfg, "separation")
    return generate_test_signal(cfg["signal"], params, _seed(cfg))[0]


def parse_Ns(text, n_atoms):
    text = text.strip()
    if text == "dyadic":
        return dyadic_Ns(n_atoms, include_zero=True)
    if text == "all":
        return list(range(n_atoms + 1))
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"Ns must be 'dyadic', 'all' or a comma-separated list, got {text!r}") from None


def _g(x):
    return f"{x:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else str(x)
    return obj


def _recorded(cfg):
    # the output location is not an experiment parameter
    return {k: v for k, v in cfg.items() if k != "output-dir"}


def input_hash(cfg):
    h = hashlib.sha256(json.dumps(_recorded(cfg), sort_keys=True).encode())
    for key in ("input", "grid"):
        if cfg[key]:
            h.update(Path(cfg[key]).read_bytes())
    return h.hexdigest()


def write_report(cfg, experiment, passed, data, csv_text):
    out = Path(cfg["output-dir"])
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{experiment}-{_seed(cfg)}"
    report = {
        "experiment": experiment,
        "params": _recorded(cfg),
        "input_hash": input_hash(cfg),
        "passed": bool(passed),
        "data": _jsonable(data),
    }
    (out / f"{stem}.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out / f"{stem}.csv").write_text(csv_text)
    return bool(passed)


# experiment runners: each returns (passed, data, csv_text)

def run_analyze(cfg, norms):
    system = build_system(cfg)
    grid = analyze(system, load_signal(cfg, system))
    rows = ["k,n,re,im"]
    for k in range(system.K):
        for n in range(system.M):
            z = grid.data[k, n]
            rows.append(f"{k},{n},{_g(z.real)},{_g(z.imag)}")
    return True, {"grid": grid.to_json()}, "\n".join(rows) + "\n"


def run_synthesize(cfg, norms):
    system = canonical_dual(build_system(cfg))
    if cfg["grid"]:
        grid = CoefficientGrid.from_json(json.loads(Path(cfg["grid"]).read_text()))
        out = synthesize(system, grid, "primal")
        passed, data = True, {}
    else:
        f = load_signal(cfg, system)
        out = synthesize(system, analyze(system, f), "dual")
        err = float(np.linalg.norm(f - out) / max(np.linalg.norm(f), np.finfo(float).tiny))
        passed, data = err <= 1e-8, {"reconstruction_error": err}
    data["signal"] = signal_to_json(out)
    rows = ["t,re,im"] + [f"{t},{_g(z.real)},{_g(z.imag)}" for t, z in enumerate(out)]
    return passed, data, "\n".join(rows) + "\n"


def run_dual(cfg, norms):
    system = canonical_dual(build_system(cfg))
    gamma = system.dual
    data = {"bounds": list(system.bounds), "dual": signal_to_json(gamma),
            "window_concentration": window_concentration(system)}
    rows = ["t,gamma_re,gamma_im"] + [f"{t},{_g(z.real)},{_g(z.imag)}" for t, z in enumerate(gamma)]
    return True, data, "\n".join(rows) + "\n"


def run_bounds(cfg, norms):
    system = build_system(cfg)
    A, B = frame_bounds(system)
    frame = is_frame(system)
    data = {"A": A, "B": B, "is_frame": frame, "redundancy": system.redundancy}
    csv_text = f"A,B,ratio,is_frame\n{_g(A)},{_g(B)},{_g(A / B)},{frame}\n"
    return frame, data, csv_text


def run_norm(cfg, norms):
    system = build_system(cfg)
    f = load_signal(cfg, system)
    rows, data = ["p,q,weight,value"], {}
    for params in norms:
        val = modulation_norm(f, system, params)
        data[str(params)] = val
        rows.append(f"{_fmt(params.p)},{_fmt(params.q)},{params.weight},{_g(val)}")
    return True, data, "\n".join(rows) + "\n"


def run_approx(cfg, norms):
    system = build_system(cfg)
    f = load_signal(cfg, system)
    refine = cfg["method"] != "greedy"
    approx, support, err = greedy_nterm(system, f, _int(cfg, "N"), norms[0], refine)
    rows = ["k,n"] + [f"{k},{n}" for k, n in support]
    return True, {"error": err, "support": [list(e) for e in support],
                  "approx": signal_to_json(approx)}, "\n".join(rows) + "\n"


def run_sigma(cfg, norms):
    system = build_system(cfg)
    f = load_signal(cfg, system)
    table = sigma_curve(system, f, parse_Ns(cfg["Ns"], system.K * system.M), norms[0], cfg["method"])
    return True, table.to_json(), table.to_csv()


def _pair(norms):
    if len(norms) < 2:
        raise ConfigError("this experiment needs two norms: 'norms=<source>;<target>'")
    return norms[0], norms[1]


def run_bernstein(cfg, norms):
    system = build_system(cfg)
    source, target = _pair(norms)
    Ns = [N for N in parse_Ns(cfg["Ns"], system.K * system.M) if N >= 1]
    rep = bernstein_ratio_sweep(system, source, target, Ns, _int(cfg, "trials"), _seed(cfg),
                                cfg["scale"] or None)
    data = {"Ns": rep.Ns, "max_ratio": rep.max_ratio, "alpha_theory": rep.alpha_theory,
            "fitted_growth": rep.fitted_growth, "C_hat": rep.C_hat,
            "sharp_exponent": rep.sharp_exponent, "within_sharp": rep.within_sharp}
    return rep.passed, data, rep.to_csv()


def run_direct(cfg, norms):
    system = build_system(cfg)
    rep = direct_theorem_experiment(system, _float(cfg, "p"), _float(cfg, "q"), _float(cfg, "tau"),
                                    _int(cfg, "atoms"), _seed(cfg))
    data = {"alpha_hat": rep.alpha_hat, "alpha_theory": rep.alpha_theory, "window": list(rep.window),
            "residual": rep.residual, "super_polynomial": rep.super_polynomial,
            "partial_sums": rep.extra["partial_sums"]}
    return rep.passed, data, rep.extra["table"].to_csv()


def run_inverse(cfg, norms):
    system = canonical_dual(build_system(cfg))
    source, target = _pair(norms)
    f = load_signal(cfg, system)
    table = sigma_curve(system, f, dyadic_Ns(system.K * system.M), target, cfg["method"])
    res = inverse_theorem_experiment(system, source.p, source.q, target.p, target.q, table, f,
                                     cfg["scale"] or None)
    passed = bool(np.isfinite(res["ratio"]))
    return passed, res, table.to_csv()


def run_series(cfg, norms):
    system = build_system(cfg)
    f = load_signal(cfg, system)
    table = sigma_curve(system, f, range(0, system.K * system.M + 1), norms[0], cfg["method"])
    alpha, lam = _float(cfg, "alpha"), _float(cfg, "lam")
    direct, dyadic, ratio = series_functional(table, alpha, lam)
    lo, hi = dyadic_ratio_bounds(alpha, lam)
    data = {"direct": direct, "dyadic": dyadic, "ratio": ratio, "lower": lo, "upper": hi}
    csv_text = f"direct,dyadic,ratio,lower,upper\n{_g(direct)},{_g(dyadic)},{_g(ratio)},{_g(lo)},{_g(hi)}\n"
    return bool(lo <= ratio <= hi), data, csv_text


def run_all_checks(cfg):
    results = suite.run_all(_seed(cfg))
    summary = {}
    for name, res in results.items():
        write_report(cfg, name, res.passed, res.data, res.csv)
        summary[name] = res.passed
        print(res.line())
    passed = all(summary.values())
    csv_text = "check,passed\n" + "".join(f"{k},{v}\n" for k, v in summary.items())
    write_report(cfg, "all", passed, summary, csv_text)
    return passed


RUNNERS = {
    "analyze": run_analyze,
    "synthesize": run_synthesize,
    "dual": run_dual,
    "bounds": run_bounds,
    "norm": run_norm,
    "approx": run_approx,
    "sigma": run_sigma,
    "bernstein": run_bernstein,
    "direct": run_direct,
    "inverse": run_inverse,
    "series": run_series,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="gabor", description=__doc__.splitlines()[0])
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, help="64-bit seed for randomized experiments")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
    return parser


def _fail(kind, exc, code):
    json.dump({"error": kind, "message": str(exc)}, sys.stderr)
    sys.stderr.write("\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.experiment == "all":
            if not cfg["seed"]:
                raise ConfigError("experiment 'all' is randomized: a seed is required (--seed)")
            return 0 if run_all_checks(cfg) else 1
        norms = validate(cfg, args.experiment)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        return _fail("invalid-config", exc, 2)
    try:
        passed, data, csv_text = RUNNERS[args.experiment](cfg, norms)
    except (NotAFrameError, CapabilityError) as exc:
        write_report(cfg, args.experiment, False, {"error": type(exc).__name__, "message": str(exc)}, "")
        return _fail(type(exc).__name__, exc, 1)
    except (ConfigError, ValueError, OSError) as exc:
        return _fail("invalid-config", exc, 2)
    return 0 if write_report(cfg, args.experiment, passed, data, csv_text) else 1


if __name__ == "__main__":
    sys.exit(main())
