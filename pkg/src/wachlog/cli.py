"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 precision was
insufficient to decide, 64 usage error.  The report is one JSON document on
stdout (or --out); a one-line summary goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import suites
from .coleman import image, rho_consistency
from .errors import (
    DomainError,
    IndeterminateError,
    InvalidFormError,
    OrdinaryUnsupportedError,
    PadicError,
)
from .interpolation import build_module, det_matches, projection_image
from .padic import PrecisionProfile, check_odd_prime
from .phi_module import build_modular
from .wach import build_wach, hodge_filtration, log_matrix

EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 64
PROFILE_ENV = "WACHLOG_PROFILE"
DEFAULTS = {"p": 3, "profile": "20,200,32", "seed": 0, "eta": 0}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wachlog", description="Exact checks for Wach modules and Coleman images.")
    ap.add_argument("--config", help="JSON file with default values; flags override it")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--p", type=int)
        sp.add_argument("--profile")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")
        sp.add_argument("--config", dest="sub_config")

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=sorted(suites.SUITES))
    sp.add_argument("--cases", type=int)

    sp = sub.add_parser("logmatrix", help="log matrix of built-in Wach data")
    common(sp)
    sp.add_argument("--kind", choices=["twist", "ap0", "weight2"])
    sp.add_argument("--k", type=int)
    sp.add_argument("--ap", type=int)
    sp.add_argument("--r", type=int)

    sp = sub.add_parser("image", help="image conditions of the Coleman maps")
    common(sp)
    sp.add_argument("--k", type=int)
    sp.add_argument("--ap", type=int)
    sp.add_argument("--eta", type=int)

    sp = sub.add_parser("submodule", help="interpolation module from conditions")
    common(sp)
    sp.add_argument("--d", type=int)
    sp.add_argument("--conditions", help='JSON list like [{"x": "3", "V": [[1, 0]]}]')

    sp = sub.add_parser("rho", help="weight-2 rho kernel against the image line")
    common(sp)
    sp.add_argument("--ap", type=int)
    return ap


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not text.strip():
        return {}
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def resolve(argv: list[str]) -> dict:
    """Merge defaults, environment, config file and flags into one config."""
    ns = _parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("a command is required: verify, logmatrix, image, submodule or rho")
    cfg = dict(DEFAULTS)
    if os.environ.get(PROFILE_ENV):
        cfg["profile"] = os.environ[PROFILE_ENV]
    cfg.update(load_config(ns.sub_config or ns.config))
    for key, value in vars(ns).items():
        if value is not None and key not in ("config", "sub_config"):
            cfg[key] = value
    try:
        cfg["p"] = check_odd_prime(int(cfg["p"]))
    except (PadicError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid prime {cfg['p']!r}: {exc}") from None
    try:
        cfg["profile"] = PrecisionProfile.parse(cfg["profile"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _need(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"{cfg['command']} needs --{', --'.join(missing)}")


def _gate_form(p: int, k: int, a_p: int) -> None:
    """Reject unit a_p and Weil-bound violations before any computation."""
    try:
        build_modular(k, a_p, p)
    except (OrdinaryUnsupportedError, InvalidFormError, DomainError) as exc:
        raise UsageError(str(exc)) from None


def _status_code(status: str) -> int:
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "indeterminate": EXIT_INDETERMINATE}[status]


def _verify(cfg: dict) -> dict:
    _need(cfg, "suite")
    name, p, prof = cfg["suite"], cfg["p"], cfg["profile"]
    kw = {}
    if cfg.get("cases") is not None:
        kw["cases"] = cfg["cases"]
    if name in ("operators", "mellin", "annihilator"):
        return suites.SUITES[name](p, prof, seed=cfg["seed"], **kw)
    if name == "interpolation":
        return suites.interpolation_suite(p, seed=cfg["seed"])
    if name == "relations":
        return suites.relations()
    if name == "rank_one":
        return suites.rank_one(prof, p)
    if name == "coleman":
        return suites.coleman_suite(prof, seed=cfg["seed"])
    return suites.SUITES[name](prof)


def _logmatrix(cfg: dict) -> dict:
    _need(cfg, "kind")
    p, prof, kind = cfg["p"], cfg["profile"], cfg["kind"]
    if kind == "twist":
        _need(cfg, "r")
        w = build_wach("twist", p, prof, r=cfg["r"])
    elif kind == "ap0":
        _need(cfg, "k")
        _gate_form(p, cfg["k"], 0)
        w = build_wach("ap0", p, prof, k=cfg["k"])
    else:
        _need(cfg, "ap")
        _gate_form(p, 2, cfg["ap"])
        w = build_wach("weight2", p, prof, a_p=cfg["ap"])
    L = log_matrix(w)
    ok = bool(L.checks.get("M(0)=A^T"))
    return {"id": "logmatrix", "status": "pass" if ok else "fail", "wach": w.describe(),
            "hodge_weights": hodge_filtration(w), "log_matrix": L.to_json(),
            "M0": [[str(_signed(e.coeff(0))) for e in row] for row in L.M],
            "precision_used": L.checks.get("M(0) precision")}


def _signed(x) -> Fraction:
    """Representative of x nearest to zero, so -1 prints as -1."""
    v, mod = Fraction(x.value), Fraction(x.prime) ** x.abs_precision
    if v.denominator == 1 and v > mod / 2:
        v -= mod
    return v


def _image(cfg: dict) -> dict:
    _need(cfg, "k", "ap")
    p, k, a = cfg["p"], cfg["k"], cfg["ap"]
    _gate_form(p, k, a)
    if a != 0 and k != 2:
        raise UsageError("built-in Wach data covers a_p = 0 or weight 2 only")
    eta = cfg["eta"]
    if not 0 <= eta < p - 1:
        raise UsageError(f"eta must lie in [0, {p - 2}]")
    data = image(p, k, a, eta, cfg["profile"])
    ok = all(v is True for v in data.checks.values())
    precs = [x.abs_precision for line in data.lines for x in line]
    return {"id": "image", "status": "pass" if ok else "fail", "image": data.to_json(),
            "precision_used": min(precs) if precs else None}


def _submodule(cfg: dict) -> dict:
    _need(cfg, "d", "conditions")
    raw = cfg["conditions"]
    try:
        conds = json.loads(raw) if isinstance(raw, str) else raw
        rows = [(Fraction(c["x"]), [[Fraction(a) for a in v] for v in c.get("V", [])]) for c in conds]
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed conditions: {exc}") from None
    try:
        S = build_module(cfg["p"], cfg["d"], rows)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    proj = [projection_image(S, j)[0] for j in range(S.d)]
    ok = det_matches(S)
    return {"id": "submodule", "status": "pass" if ok else "fail", "module": S.to_json(),
            "det": [str(c) for c in S.det()], "projection_sets": proj, "precision_used": None}


def _rho(cfg: dict) -> dict:
    _need(cfg, "ap")
    _gate_form(cfg["p"], 2, cfg["ap"])
    try:
        rep = rho_consistency(cfg["p"], cfg["ap"], cfg["profile"])
    except IndeterminateError:
        raise
    except PadicError as exc:
        return {"id": "rho", "status": "fail", "detail": str(exc), "precision_used": None}
    return {"id": "rho", "status": "pass", "rho": rep, "precision_used": None}


COMMANDS = {"verify": _verify, "logmatrix": _logmatrix, "image": _image,
            "submodule": _submodule, "rho": _rho}


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = resolve(argv)
        report = COMMANDS[cfg["command"]](cfg)
        code = _status_code(report["status"])
    except UsageError as exc:
        return EXIT_USAGE, {"schema": 1, "status": "usage", "error": str(exc)}
    except IndeterminateError as exc:
        return EXIT_INDETERMINATE, {"schema": 1, "status": "indeterminate", "error": str(exc),
                                    "profile": str(cfg["profile"])}
    except PadicError as exc:
        return EXIT_FAIL, {"schema": 1, "status": "fail", "error": f"{type(exc).__name__}: {exc}",
                           "profile": str(cfg["profile"])}
    report["schema"] = 1
    report["profile"] = str(cfg["profile"])
    report["command"] = cfg["command"]
    report["_out"] = cfg.get("out")
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    out = report.pop("_out", None)
    text = json.dumps(report, sort_keys=True, indent=1, default=str) + "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_USAGE:
        sys.stderr.write(report["error"] + "\n")
    else:
        sys.stderr.write(f"{report.get('command', '?')}: {report['status']} "
                         f"(precision {report.get('precision_used')}, exit {code})\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
