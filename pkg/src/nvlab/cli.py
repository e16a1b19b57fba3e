"""Command-line driver: configuration, sweeps, and deterministic output files.

Subcommands map one-to-one onto the library pipelines:

    classify     stationary-point classification of the phase at one u
    linsolve     oscillatory integral I(t, u) over (t, u) sweeps
    supscan      sup over the default u-grid of |I(t, ·)| per t
    decayfit     power-law fit of a (t, value) CSV produced by supscan/linsolve
    reconstruct  nonlinear potential reconstruction v(z, t)
    optimality   t^{3/4}·I(t, −18) against the sharp constant C

Configuration resolves in three layers — built-in defaults, then an INI-style
config file (flat ``section.key`` namespace, one section per module), then
command-line flags — and the fully resolved mapping is embedded in every
output (as a ``config`` object in JSON, as ``#`` comment lines in CSV), so
each artifact re-runs to byte-identical content.  Floats are printed with 17
significant digits; complex quantities become paired Re/Im columns.

Exit codes: 0 success, 2 configuration/usage errors, 3 numerical errors from
the library (the error is additionally serialized to stderr as JSON).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys

from .asymptotics import constant_C, optimality_check
from .dbar import reconstruct_v
from .errors import ConfigurationError, NVError
from .linearized import decay_fit, integral_I, sup_series
from .phase import stationary_points
from .scattering import load_sampled, profile

__all__ = ["main"]

_DEFAULTS = {
    "profile.name": "P1",
    "profile.theta": "0.1",
    "profile.path": "",
    "reconstruct.depth": "3",
    "scan.support_tol": "1e-9",
    "scan.budget": "8.0",
    "output.format": "",
    "output.path": "",
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigurationError(f"expected RE or RE,IM, got {text!r}") from exc
    raise ConfigurationError(f"expected RE or RE,IM, got {text!r}")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"bad numeric list {text!r}") from exc


def _resolve_config(args: argparse.Namespace) -> dict[str, str]:
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        parser = configparser.ConfigParser()
        read = parser.read(args.config)
        if not read:
            raise ConfigurationError(f"config file not found: {args.config}")
        for section in parser.sections():
            for key, val in parser.items(section):
                cfg[f"{section}.{key}"] = val
    overrides = {
        "profile.name": getattr(args, "profile", None),
        "profile.theta": getattr(args, "theta", None),
        "reconstruct.depth": getattr(args, "depth", None),
        "output.format": getattr(args, "format", None),
        "output.path": getattr(args, "output", None),
    }
    for key, val in overrides.items():
        if val is not None:
            cfg[key] = str(val)
    if float(cfg["profile.theta"]) < 0.0:
        raise ConfigurationError("profile.theta must be >= 0")
    return cfg


def _data_from(cfg: dict[str, str]):
    theta = float(cfg["profile.theta"])
    if cfg["profile.path"]:
        return load_sampled(cfg["profile.path"], theta=theta)
    return profile(cfg["profile.name"], theta=theta)


def _apply_thread_cap() -> None:
    cap = os.environ.get("NV_THREADS")
    if not cap:
        return
    try:
        n = max(1, int(cap))
    except ValueError as exc:
        raise ConfigurationError(f"NV_THREADS must be an integer, got {cap!r}") from exc
    try:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass


def _emit_json(record: dict, cfg: dict[str, str]) -> str:
    record = dict(record)
    record["config"] = dict(sorted(cfg.items()))
    return json.dumps(record, indent=2, sort_keys=False) + "\n"


def _emit_csv(header: list[str], rows: list[list[float]],
              cfg: dict[str, str]) -> str:
    buf = io.StringIO()
    for key in sorted(cfg):
        buf.write(f"# {key} = {cfg[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _cplx(v: complex) -> list[float]:
    return [v.real, v.imag]


# --------------------------------------------------------------------------
# subcommands


def _cmd_classify(args, cfg) -> str:
    u = _parse_complex(args.u)
    sp = stationary_points(u)
    record = {
        "command": "classify",
        "u": _cplx(u),
        "case": str(sp.case.value if hasattr(sp.case, "value") else sp.case),
        "xi_roots": [_cplx(x) for x in sp.xi_roots],
        "zeta_points": [_cplx(x) for x in sp.zeta_points],
        "omega": float(sp.omega),
        "phi": float(sp.phi),
    }
    return _emit_json(record, cfg)


def _cmd_linsolve(args, cfg) -> str:
    data = _data_from(cfg)
    ts = _parse_floats(args.t)
    us = [_parse_complex(u) for u in args.u.split(";")]
    rows = []
    for t in ts:
        for u in us:
            val = integral_I(data, t, u,
                             rel_support_tol=float(cfg["scan.support_tol"]),
                             budget=float(cfg["scan.budget"]))
            rows.append([t, u.real, u.imag, val.real, val.imag, abs(val)])
    return _emit_csv(["t", "re_u", "im_u", "re_I", "im_I", "abs_I"], rows, cfg)


def _cmd_supscan(args, cfg) -> str:
    data = _data_from(cfg)
    ts = _parse_floats(args.t_list)
    rows = [[t, u.real, u.imag, sup]
            for t, u, sup in sup_series(data, ts)]
    return _emit_csv(["t", "re_u_max", "im_u_max", "sup_abs_I"], rows, cfg)


def _cmd_decayfit(args, cfg) -> str:
    ts, vals = [], []
    with open(args.input, newline="") as fh:
        for row in csv.reader(line for line in fh if not line.startswith("#")):
            if not row or not row[0].replace(".", "").lstrip("-").isdigit():
                continue
            ts.append(float(row[0]))
            vals.append(float(row[-1]))
    samples = list(zip(ts, vals))
    plain = decay_fit(samples, with_log=False)
    logged = decay_fit(samples, with_log=True)

    def rec(fit):
        return {"exponent": fit.exponent, "intercept": fit.intercept,
                "log_coefficient": fit.log_coefficient,
                "max_residual": fit.max_residual}

    record = {
        "command": "decayfit",
        "n_points": plain.n_points,
        "t_range": list(plain.t_range),
        "plain": rec(plain),
        "with_log": rec(logged),
    }
    return _emit_json(record, cfg)


def _cmd_reconstruct(args, cfg) -> str:
    data = _data_from(cfg)
    z = _parse_complex(args.z)
    t = float(args.t)
    res = reconstruct_v(data, z, t, depth=int(cfg["reconstruct.depth"]))
    record = {
        "command": "reconstruct",
        "z": _cplx(z),
        "t": t,
        "depth": res.depth,
        "theta": res.theta,
        "v": _cplx(res.v),
        "beta1": _cplx(res.beta1),
        "alpha1": _cplx(res.alpha1),
        "remainder_q": _cplx(res.remainder_q),
        "series_tail_estimate": res.series_tail_estimate,
        "order_terms": [_cplx(c) for c in res.order_terms],
    }
    return _emit_json(record, cfg)


def _cmd_optimality(args, cfg) -> str:
    data = _data_from(cfg)
    ts = _parse_floats(args.t_list)
    rows = [[r.t, r.scaled_I.real, r.scaled_I.imag, r.C.real, r.C.imag,
             r.rel_gap] for r in optimality_check(data, ts)]
    cfg = dict(cfg)
    cfg["optimality.C"] = _fmt(abs(constant_C(data)))
    return _emit_csv(["t", "re_scaled_I", "im_scaled_I", "re_C", "im_C",
                      "rel_gap"], rows, cfg)


_COMMANDS = {
    "classify": _cmd_classify,
    "linsolve": _cmd_linsolve,
    "supscan": _cmd_supscan,
    "decayfit": _cmd_decayfit,
    "reconstruct": _cmd_reconstruct,
    "optimality": _cmd_optimality,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvlab", description="Oscillatory-integral and inverse-scattering "
        "pipelines for the annular spectral plane.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--profile", help="built-in profile name (P1, P2, unit)")
        p.add_argument("--theta", type=float, help="data amplitude")
        p.add_argument("--config", help="INI config file")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"],
                       help="accepted for symmetry; each command has a "
                       "natural format")

    p = sub.add_parser("classify", help="classify stationary points at u")
    p.add_argument("--u", required=True, metavar="RE[,IM]")
    common(p)

    p = sub.add_parser("linsolve", help="I(t,u) over a (t, u) sweep")
    p.add_argument("--t", required=True, metavar="T1,T2,...")
    p.add_argument("--u", required=True, metavar="RE,IM[;RE,IM...]")
    common(p)

    p = sub.add_parser("supscan", help="sup_u |I(t,u)| per t")
    p.add_argument("--t-list", required=True, metavar="T1,T2,...")
    common(p)

    p = sub.add_parser("decayfit", help="fit decay exponent of a (t,value) CSV")
    p.add_argument("--input", required=True, metavar="CSV")
    common(p)

    p = sub.add_parser("reconstruct", help="nonlinear reconstruction v(z,t)")
    p.add_argument("--z", required=True, metavar="RE[,IM]")
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--depth", type=int)
    common(p)

    p = sub.add_parser("optimality", help="t^{3/4} I(t,-18) vs the constant C")
    p.add_argument("--t-list", required=True, metavar="T1,T2,...")
    common(p)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        _apply_thread_cap()
        text = _COMMANDS[args.command](args, cfg)
    except ConfigurationError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    except NVError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 3
    path = cfg["output.path"]
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
