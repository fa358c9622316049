"""
Command-line front end.

    szccs generate FAMILY [PARAMS]      code set JSON
    szccs verify FILE [--Z Z]           verification report, exit 1 on failure
    szccs corr FILE [--i I --j J]       correlation-sum profiles
    szccs train FILE --n-t ...          training matrix and criteria
    szccs simulate CONFIG               LS MSE sweep as CSV
    szccs report CONFIG --out DIR       all of the above as data files

PARAMS is JSON, or a relaxed form with bare keys and words such as
``{q:2,m:4,pi:identity}``.  Exit codes: 0 success, 1 verification failure,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .chansim import SimConfig, run_campaign
from .codeset import CodeSet, certify, verify_szccs
from .construct import (
    Theorem2Params,
    Theorem3Params,
    czcp_codeset,
    lemma1_gcp,
    random_binary,
    theorem2_szccs,
    theorem3_szccs,
    zadoff_chu,
)
from .corr import set_profiles
from .training import build_omega, check_criteria, enlarge

FAMILIES = ("lemma1", "theorem2", "theorem3", "zadoff-chu", "random-binary", "czcp-fixture")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


# -- parameter parsing --------------------------------------------------------

_BARE_KEY = re.compile(r"([{,]\s*)([A-Za-z_][\w']*)\s*:")
_BARE_WORD = re.compile(r'(:\s*|\[\s*|,\s*)([A-Za-z_][\w\-\']*)(?=\s*[,}\]])')


def parse_params(text: str | None) -> dict:
    """Parse strict JSON or the relaxed ``{key:value}`` form into a dict."""
    if text is None or not text.strip():
        return {}
    try:
        out = json.loads(text)
    except json.JSONDecodeError:
        fixed = _BARE_KEY.sub(r'\1"\2":', text)
        fixed = _BARE_WORD.sub(
            lambda mt: mt.group(0) if mt.group(2) in ("true", "false", "null") else f'{mt.group(1)}"{mt.group(2)}"',
            fixed,
        )
        try:
            out = json.loads(fixed)
        except json.JSONDecodeError as exc:
            raise UsageError(f"cannot parse parameters {text!r}: {exc.msg}") from None
    if not isinstance(out, dict):
        raise UsageError("parameters must be an object")
    return out


def _take(params: dict, allowed: tuple[str, ...], family: str) -> dict:
    extra = set(params) - set(allowed)
    if extra:
        raise UsageError(f"unknown parameter(s) for {family}: {', '.join(sorted(extra))}")
    return params


def _need(params: dict, key: str, family: str):
    if key not in params:
        raise UsageError(f"{family} needs parameter {key!r}")
    return params[key]


def build_family(family: str, params: dict, seed: int | None = None) -> CodeSet:
    """Instantiate one of the named families as a :class:`CodeSet`."""
    p = dict(params)
    try:
        if family == "lemma1":
            _take(p, ("q", "m", "pi", "coeffs", "constant", "variant"), family)
            a, b = lemma1_gcp(
                int(_need(p, "q", family)), int(_need(p, "m", family)), p.get("pi"),
                p.get("coeffs"), int(p.get("constant", 0)), p.get("variant", "b"),
            )
            return CodeSet.from_sequences([[a, b]], {"family": family, "params": p})
        if family == "theorem2":
            _take(p, ("q", "m", "pi", "mu_s", "mu"), family)
            tp = Theorem2Params(
                int(_need(p, "q", family)), int(_need(p, "m", family)), p.get("pi"), p.get("mu_s"), int(p.get("mu", 0))
            )
            return theorem2_szccs(tp)
        if family == "theorem3":
            _take(p, ("q", "m", "v", "pi", "lambda_s", "mu_s", "mu", "member"), family)
            tp = Theorem3Params(
                int(_need(p, "q", family)), int(_need(p, "m", family)), int(_need(p, "v", family)),
                p.get("pi"), p.get("lambda_s"), p.get("mu_s"), int(p.get("mu", 0)),
            )
            member = p.get("member", "S")
            if member not in ("S", "S'"):
                raise UsageError("theorem3 member must be 'S' or \"S'\"")
            S, S2 = theorem3_szccs(tp)
            return S if member == "S" else S2
        if family == "zadoff-chu":
            _take(p, ("L", "roots", "M"), family)
            L = int(_need(p, "L", family))
            roots = [int(r) for r in p.get("roots", [1])]
            M = int(p.get("M", 1))
            if M < 1 or len(roots) % M:
                raise UsageError(f"{len(roots)} roots cannot be grouped into codes of M={M}")
            seqs = [zadoff_chu(L, r) for r in roots]
            codes = [seqs[i:i + M] for i in range(0, len(seqs), M)]
            return CodeSet(np.array(codes), provenance={"family": family, "params": {"L": L, "roots": roots, "M": M}})
        if family == "random-binary":
            _take(p, ("L", "K", "M", "seed"), family)
            L, K, M = int(_need(p, "L", family)), int(p.get("K", 1)), int(p.get("M", 1))
            s = p.get("seed", seed)
            if s is None:
                raise UsageError("random-binary needs a seed")
            s = int(s)
            codes = [[random_binary(L, [s, k, mm]) for mm in range(M)] for k in range(K)]
            return CodeSet.from_sequences(codes, {"family": family, "params": {"L": L, "K": K, "M": M, "seed": s}})
        if family == "czcp-fixture":
            _take(p, ("layout",), family)
            return czcp_codeset(p.get("layout", "omega"))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid {family} parameters: {exc}") from None
    raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# -- io helpers -----------------------------------------------------------------

def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read_text(path: str) -> str:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not text.strip():
        raise UsageError(f"{path} is empty")
    return text


def load_codeset(path: str) -> CodeSet:
    try:
        return CodeSet.from_json(_read_text(path))
    except (json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path} is not a valid code set: {exc}") from None


def _exact_flag(args) -> bool | None:
    return getattr(args, "exact", None)


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return int(seed)
    s = int(np.random.SeedSequence().entropy % (2**32))
    print(f"seed: {s}", file=sys.stderr)
    return s


# -- commands ---------------------------------------------------------------

def cmd_generate(args) -> int:
    params = parse_params(args.params)
    seed = args.seed
    if args.family == "random-binary" and "seed" not in params:
        seed = _resolve_seed(seed)
    S = build_family(args.family, params, seed)
    S = CodeSet(S.values, S.q, S.exponents, S.kind, S.zcz, {**S.provenance, "generator": args.family, "version": __version__})
    _emit(S.to_json(indent=None), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    S = load_codeset(args.file)
    Z = args.Z if args.Z is not None else S.zcz
    try:
        if Z is None:
            _, report = certify(S, exact=_exact_flag(args))
        else:
            report = verify_szccs(S, Z, exact=_exact_flag(args))
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from None
    if report is None:
        raise UsageError("nothing to verify for L = 1")
    doc = {"params": {"K": S.K, "M": S.M, "L": S.L}, "report": report.to_dict()}
    _emit(json.dumps(doc), args.out)
    return EXIT_OK if report.verdict else EXIT_FAIL


def cmd_corr(args) -> int:
    S = load_codeset(args.file)
    try:
        C, ex = set_profiles(S.values, exact=_exact_flag(args))
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from None
    L = S.L
    pairs = [(i, j) for i in range(S.K) for j in range(S.K)]
    if args.i is not None or args.j is not None:
        i, j = args.i or 0, args.j if args.j is not None else (args.i or 0)
        if not (0 <= i < S.K and 0 <= j < S.K):
            raise UsageError(f"code indices must lie in 0..{S.K - 1}")
        pairs = [(i, j)]
    shifts = range(-(L - 1), L)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "shift", "re", "im", "abs"])
        for i, j in pairs:
            for u in shifts:
                v = C[i, j, u + L - 1]
                w.writerow([i, j, u, _num(v.real), _num(v.imag), _num(abs(v))])
        _emit(buf.getvalue(), args.out)
    else:
        doc = {
            "L": L, "exact": ex,
            "pairs": [
                {"i": i, "j": j, "re": [_num(v) for v in C[i, j].real], "im": [_num(v) for v in C[i, j].imag]}
                for i, j in pairs
            ],
        }
        _emit(json.dumps(doc), args.out)
    return EXIT_OK


def _num(x):
    x = float(x)
    return int(x) if x == int(x) and abs(x) < 2**53 else x


def _parse_codes(text):
    if text is None:
        return None
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--codes expects comma-separated integers, got {text!r}") from None


def cmd_train(args) -> int:
    S = load_codeset(args.file)
    try:
        om = build_omega(S, args.n_t, args.n_active, args.lam, _parse_codes(args.codes))
        om = enlarge(om, args.enlarge)
        rep = check_criteria(om, exact=_exact_flag(args))
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        _emit(om.to_csv(), args.out)
        print(rep.to_json(), file=sys.stderr)
    else:
        _emit(json.dumps({"omega": om.to_dict(), "criteria": rep.to_dict()}), args.out)
    if args.check and not rep.optimal:
        return EXIT_FAIL
    return EXIT_OK


# -- simulation configs -----------------------------------------------------

def _as_list(v, name):
    if isinstance(v, dict):
        try:
            start, stop, step = float(v["start"]), float(v["stop"]), float(v.get("step", 1))
        except (KeyError, TypeError, ValueError):
            raise UsageError(f"{name} range needs start, stop and optional step") from None
        if step <= 0:
            raise UsageError(f"{name} step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(max(n, 0))]
    if isinstance(v, (list, tuple)):
        return list(v)
    return [v]


def resolve_sim_config(cfg: dict, seed: int | None = None) -> dict:
    """Fill defaults and validate a simulation config; returns the resolved dict."""
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = {"codeset", "codes", "n_t", "n_active", "paths", "zero_slot", "enlarge",
             "ebn0_db", "trials", "seed", "convention"}
    extra = set(cfg) - known
    if extra:
        raise UsageError(f"unknown config key(s): {', '.join(sorted(extra))}")
    if "codeset" not in cfg:
        raise UsageError("config needs a 'codeset' entry")
    out = dict(cfg)
    out.setdefault("n_t", 4)
    out.setdefault("n_active", 2)
    out.setdefault("enlarge", [1])
    out.setdefault("convention", "block")
    out.setdefault("trials", 10000)
    out["paths"] = [int(v) for v in _as_list(_need(cfg, "paths", "config"), "paths")]
    out["enlarge"] = [int(v) for v in _as_list(out["enlarge"], "enlarge")]
    out["ebn0_db"] = [float(v) for v in _as_list(_need(cfg, "ebn0_db", "config"), "ebn0_db")]
    zs = out.get("zero_slot")
    out["zero_slot"] = None if zs is None else [int(v) for v in _as_list(zs, "zero_slot")]
    if not isinstance(out["trials"], int) or out["trials"] < 1:
        raise UsageError("trials must be a positive integer")
    if any(p < 1 for p in out["paths"]) or any(t < 1 for t in out["enlarge"]):
        raise UsageError("paths and enlarge values must be >= 1")
    if not out["ebn0_db"]:
        raise UsageError("ebn0_db must not be empty")
    out["seed"] = int(out["seed"]) if out.get("seed") is not None else _resolve_seed(seed)
    return out


def _config_codeset(src, seed) -> CodeSet:
    if isinstance(src, str):
        return load_codeset(src)
    if isinstance(src, dict) and "file" in src:
        return load_codeset(src["file"])
    if isinstance(src, dict) and "family" in src:
        return build_family(src["family"], src.get("params", {}), seed)
    raise UsageError("codeset must be a file path, {'file': ...} or {'family': ..., 'params': ...}")


def simulate(cfg: dict) -> list[tuple[dict, object]]:
    """Run every sweep of a resolved config; returns ``[(key, SimResult)]``."""
    S = _config_codeset(cfg["codeset"], cfg["seed"])
    ch_seed, nz_seed = (int(v) for v in np.random.SeedSequence(cfg["seed"]).generate_state(2))
    results = []
    for t in cfg["enlarge"]:
        for P in cfg["paths"]:
            slots = cfg["zero_slot"] if cfg["zero_slot"] is not None else [P - 1]
            for w in slots:
                try:
                    om = enlarge(build_omega(S, cfg["n_t"], cfg["n_active"], w, cfg.get("codes")), t)
                    sc = SimConfig(om, P, cfg["ebn0_db"], cfg["trials"], ch_seed, nz_seed, cfg["convention"])
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
                res = run_campaign(sc)
                key = {"J": om.J, "paths": P, "zero_slot": w}
                results.append((key, res))
    return results


def _sim_csv(cfg: dict, results) -> str:
    lines = ["# config: " + json.dumps(cfg, sort_keys=True)]
    header = True
    for key, res in results:
        body = res.to_csv(extra=key).splitlines()
        lines.extend(body if header else body[1:])
        header = False
    return "\n".join(lines) + "\n"


def _load_config(path: str) -> dict:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None


def cmd_simulate(args) -> int:
    cfg = resolve_sim_config(_load_config(args.config), args.seed)
    results = simulate(cfg)
    if args.format == "json":
        doc = {"config": cfg, "sweeps": [{"key": k, **r.to_dict()} for k, r in results]}
        _emit(json.dumps(doc), args.out)
    else:
        _emit(_sim_csv(cfg, results), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    """Write code set, verification, correlation, training and sweep data to a directory."""
    cfg = resolve_sim_config(_load_config(args.config), args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    S = _config_codeset(cfg["codeset"], cfg["seed"])
    (out / "codeset.json").write_text(S.to_json())
    _, rep = certify(S, exact=_exact_flag(args))
    (out / "verify.json").write_text(json.dumps(rep.to_dict() if rep else None))
    C, _ = set_profiles(S.values, exact=_exact_flag(args))
    L = S.L
    with open(out / "corr.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "shift", "abs"])
        for i in range(S.K):
            for j in range(S.K):
                for u in range(-(L - 1), L):
                    w.writerow([i, j, u, _num(abs(C[i, j, u + L - 1]))])
    criteria = []
    for P in cfg["paths"]:
        for wz in cfg["zero_slot"] if cfg["zero_slot"] is not None else [P - 1]:
            om = build_omega(S, cfg["n_t"], cfg["n_active"], wz, cfg.get("codes"))
            r = check_criteria(om, lam=P - 1, exact=_exact_flag(args))
            criteria.append({"paths": P, "zero_slot": wz, **r.to_dict()})
    (out / "criteria.json").write_text(json.dumps(criteria))
    (out / "mse.csv").write_text(_sim_csv(cfg, simulate(cfg)))
    print(json.dumps({"written": sorted(p.name for p in out.iterdir())}))
    return EXIT_OK if rep is None or rep.verdict else EXIT_FAIL


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, help="master seed (printed to stderr when auto-generated)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None,
                      help="integer correlation arithmetic (q in {2, 4} only)")
    mode.add_argument("--float", dest="exact", action="store_false", help="floating-point arithmetic")

    ap = argparse.ArgumentParser(prog="szccs", description="Symmetric ZCZ code sets and sparse MIMO training.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="generate a code set")
    g.add_argument("family", help=" | ".join(FAMILIES))
    g.add_argument("params", nargs="?", help="JSON or relaxed {key:value} parameters")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", parents=[common], help="verify the symmetric ZCZ property")
    v.add_argument("file")
    v.add_argument("--Z", "-Z", type=int, help="zone width (default: declared, else widest present)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("corr", parents=[common], help="correlation-sum profiles")
    c.add_argument("file")
    c.add_argument("--i", type=int)
    c.add_argument("--j", type=int)
    c.set_defaults(func=cmd_corr)

    t = sub.add_parser("train", parents=[common], help="build and check a training matrix")
    t.add_argument("file")
    t.add_argument("--n-t", type=int, required=True)
    t.add_argument("--n-active", type=int, required=True)
    t.add_argument("--lam", type=int, required=True, help="zero slot width / channel memory")
    t.add_argument("--codes", help="comma-separated code indices (0-based)")
    t.add_argument("--enlarge", type=int, default=1)
    t.add_argument("--check", action="store_true", help="exit 1 unless the matrix is optimal")
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("simulate", parents=[common], help="LS channel-estimation MSE sweep")
    s.add_argument("config")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", parents=[common], help="write all data products to a directory")
    r.add_argument("config")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "report" and not args.out:
        ap.error("report needs --out DIR")
    if args.format is None:
        args.format = "csv" if args.command == "simulate" else "json"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
