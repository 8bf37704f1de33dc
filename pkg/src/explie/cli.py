"""Command line interface.

Every subcommand prints one JSON document (or a CSV table) to stdout or
``--out``.  Exit status: 0 when every check passes, 1 when a verification
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import random
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import ALGEBRA_NAMES, Generator, RegistryError, check_axioms, parse_algebra_text, registry_algebra
from .exactnum import Scalar, mat_det, mat_rank, parse_scalar
from .gmodule import DEFAULT_ALGEBRA, MODULE_NAMES, check_compatibility, parse_module_text, registry_module
from .induce import InducedModule, PBWWord
from .quotient import dim_record, radical_membership
from .vandermonde import build_matrix, det_closed_form, random_vspec, reduce_system
from .virasoro import (
    head_combination,
    vir_bound_report,
    vir_module,
    vir_moment_nullvector,
    weight_independence_table,
)

SCHEMA_VERSION = 1

DEFAULTS = {
    "depth": 3,
    "boxes": "1,2,3",
    "seed": 0,
    "format": "json",
    "out": None,
    "samples": 200,
    "trials": 50,
    "systems": 20,
    "imax": 2,
    "lam": "1/2",
    "mu": "1/3",
    "mode": "symbolic",
    "degree": "1",
    "weight": None,
    "a_list": "0,1,2,-1",
    "a": "0",
}


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError as e:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from e


def _degrees(text: str) -> list[int]:
    """'1', '0,2' or a range '0-2'."""
    m = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*", str(text))
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    return _ints(text)


def _weights(text: str | None) -> list[tuple[int, ...]]:
    if text is None or str(text).strip() == "":
        return [()]
    return [tuple(_ints(w)) for w in str(text).split(";") if w.strip()]


def _keyvals(items: Sequence[str] | None) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_config(path: str | None) -> dict:
    """Config file: a JSON object or ``key = value`` lines (``#`` comments)."""
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise UsageError(f"bad JSON config: {e}") from e
        return {str(k).replace("-", "_"): v for k, v in data.items()}
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line {line!r}")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _opt(args, config: dict, key: str):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return DEFAULTS.get(key)


# -- building blocks ----------------------------------------------------------


def _algebra(args, config):
    path = _opt(args, config, "algebra_file")
    if path:
        return parse_algebra_text(Path(path).read_text())
    name = _opt(args, config, "algebra")
    if name is None:
        mod = _opt(args, config, "module")
        name = DEFAULT_ALGEBRA.get(str(mod).replace("_", "-")) if mod else None
    if name is None:
        raise UsageError("--algebra is required")
    params = {**_keyvals(config.get("param") if isinstance(config.get("param"), list) else None),
              **_keyvals(args.param)}
    return registry_algebra(name, **params)


def _module(args, config, algebra):
    path = _opt(args, config, "module_file")
    if path:
        return parse_module_text(Path(path).read_text(), algebra)
    name = _opt(args, config, "module")
    if name is None:
        raise UsageError("--module is required")
    params = _keyvals(args.mparam)
    return registry_module(name, algebra, **params)


def _frac(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"expected a rational number, got {text!r}") from e


# -- subcommands --------------------------------------------------------------


def cmd_vandermonde_verify(args, config) -> tuple[dict, list, bool]:
    seed = int(_opt(args, config, "seed"))
    trials = int(_opt(args, config, "trials"))
    systems = int(_opt(args, config, "systems"))
    rng = random.Random(seed)
    records = []
    for t in range(trials):
        spec = random_vspec(rng)
        m = build_matrix(spec)
        det = mat_det(m)
        closed = det_closed_form(spec)
        rank = mat_rank(m)
        records.append({"trial": t, "blocks": spec.to_json(), "s": spec.s, "det": str(det),
                        "closed_form": str(closed), "match": det == closed, "rank": rank, "full_rank": rank == spec.s})
    sys_records = []
    for t in range(systems):
        spec = random_vspec(rng, max_blocks=4, max_mult=2)
        while spec.s > 4:
            spec = random_vspec(rng, max_blocks=4, max_mult=2)
        unknowns = rng.randint(1, 6)
        d = {(k, j): rng.randint(-3, 3) for k in range(unknowns) for j in range(spec.s)}
        red = reduce_system(d, spec)
        sys_records.append({"trial": t, "blocks": spec.to_json(), "unknowns": unknowns,
                            "null_dim": len(red.finite_null), "equivalent": red.equivalent})
    ok = all(r["match"] and r["full_rank"] for r in records) and all(r["equivalent"] for r in sys_records)
    report = {"command": "vandermonde verify", "seed": seed, "records": records, "systems": sys_records, "pass": ok}
    return report, records + sys_records, ok


def cmd_algebra_check(args, config):
    A = _algebra(args, config)
    seed = int(_opt(args, config, "seed"))
    samples = int(_opt(args, config, "samples"))
    depth = int(_opt(args, config, "depth"))
    rep = check_axioms(A, D=depth, B=3, samples=samples, seed=seed)
    report = {"command": "algebra check", "algebra": A.name, "n": A.n, "seed": seed, **rep.to_json(), "pass": rep.ok}
    return report, [{"algebra": A.name, "checked": rep.checked, "ok": rep.ok}], rep.ok


def cmd_module_check(args, config):
    A = _algebra(args, config)
    M = _module(args, config, A)
    seed = int(_opt(args, config, "seed"))
    samples = int(_opt(args, config, "samples"))
    rep = check_compatibility(M, B=3, samples=samples, seed=seed)
    report = {"command": "module check", "algebra": A.name, "module": M.name, "seed": seed, **rep.to_json(),
              "pass": rep.ok}
    return report, [{"algebra": A.name, "module": M.name, "checked": rep.checked, "ok": rep.ok}], rep.ok


def cmd_dims(args, config):
    A = _algebra(args, config)
    M = _module(args, config, A)
    depth = int(_opt(args, config, "depth"))
    if depth < 1:
        raise UsageError("--depth must be at least 1")
    boxes = _ints(_opt(args, config, "boxes"))
    if any(b <= a for a, b in zip(boxes, boxes[1:])) or not boxes or boxes[0] < 0:
        raise UsageError("--boxes must be a strictly increasing list of non-negative integers")
    I = InducedModule(M, depth=depth)
    weights = _weights(_opt(args, config, "weight"))
    records = []
    for i in _degrees(_opt(args, config, "degree")):
        if i < 0:
            raise UsageError("--degree counts levels below V and must be non-negative")
        if i > depth:
            raise UsageError(f"degree {i} exceeds depth cap {depth}")
        for w in weights:
            rec = dim_record(I, i, w, boxes, symbolic=not args.no_symbolic)
            records.append(rec.to_json())
    ok = all(r["agrees"] is not False for r in records)
    report = {"command": "dims", "algebra": A.name, "module": M.name, "boxes": boxes, "records": records, "pass": ok}
    flat = [{**{k: v for k, v in r.items() if k != "ranks"}, "weight": ",".join(map(str, r["weight"])),
             **{f"rank_B{b}": x for b, x in r["ranks"].items()}} for r in records]
    return report, flat, ok


def cmd_virasoro_bounds(args, config):
    lam, mu = _frac(_opt(args, config, "lam")), _frac(_opt(args, config, "mu"))
    imax = int(_opt(args, config, "imax"))
    cap = max(int(_opt(args, config, "depth")), 3)
    if imax < 0 or imax > cap:
        raise UsageError(f"--imax must lie in 0..{cap}")
    rows = vir_bound_report(imax, lam, mu, a=int(_opt(args, config, "a")), cap=cap)
    ok = all(r["pass"] for r in rows)
    report = {"command": "virasoro bounds", "lambda": str(lam), "mu": str(mu), "rows": rows, "pass": ok}
    return report, rows, ok


def cmd_virasoro_cor32(args, config):
    lam, mu = _frac(_opt(args, config, "lam")), _frac(_opt(args, config, "mu"))
    degrees = _degrees(_opt(args, config, "degree"))
    a_list = _ints(_opt(args, config, "a_list"))
    tables = []
    flat = []
    for i in degrees:
        if i < 1:
            raise UsageError("--degree must be at least 1")
        t = weight_independence_table(i, a_list, lam, mu)
        tables.append(t)
        flat += [{"i": i, **r} for r in t["rows"]]
    ok = all(t["equal"] for t in tables)
    report = {"command": "virasoro cor32", "lambda": str(lam), "mu": str(mu), "tables": tables, "pass": ok}
    return report, flat, ok


def parse_vector(text: str, I: InducedModule) -> dict:
    """``coef * fam:i:a1,..,an fam:i:... | j@w1,..,wn ; ...``  (``@w`` omitted for finite modules)."""
    out: dict = {}
    for term in text.split(";"):
        term = term.strip()
        if not term:
            continue
        if "|" not in term:
            raise UsageError(f"term {term!r} lacks '| base'")
        left, base = (s.strip() for s in term.split("|", 1))
        coef = Scalar(1)
        if "*" in left:
            c, left = left.split("*", 1)
            coef = parse_scalar(c.strip())
        letters = []
        for tok in left.split():
            parts = tok.split(":")
            if len(parts) != 3:
                raise UsageError(f"bad letter {tok!r}; expected family:degree:lattice")
            letters.append(Generator(parts[0], int(parts[1]), tuple(_ints(parts[2]))))
        if "@" in base:
            j, w = base.split("@", 1)
            weight = tuple(_ints(w))
        else:
            j, weight = base, ()
        j = j.strip()
        if j not in I.module.J:
            raise UsageError(f"unknown basis index {j!r}")
        if any(g.i >= 0 for g in letters):
            raise UsageError("letters must have negative degree")
        word = PBWWord(tuple(letters), j, weight if I.module.graded else ())
        out[word] = out.get(word, Scalar(0)) + coef
    return {w: c for w, c in out.items() if c}


def cmd_radical_test(args, config):
    mode = _opt(args, config, "mode")
    if mode not in ("symbolic", "grid", "truncated"):
        raise UsageError("--mode must be symbolic, grid or truncated")
    boxes = _ints(_opt(args, config, "boxes"))
    depth = int(_opt(args, config, "depth"))
    if args.beta_prime is not None:
        lam, mu = _frac(_opt(args, config, "lam")), _frac(_opt(args, config, "mu"))
        I = InducedModule(vir_module(lam, mu), depth=depth)
        inner = _ints(args.inner or "")
        b = vir_moment_nullvector(args.beta_prime, len(inner))
        coeffs = {args.beta_prime: Scalar(1)}
        for x, c in b.items():
            coeffs[x] = coeffs.get(x, Scalar(0)) + c
        x = head_combination(I, coeffs, inner, int(_opt(args, config, "a")))
        source = {"beta_prime": args.beta_prime, "inner": inner, "coefficients": {str(k): str(v) for k, v in sorted(b.items())}}
        names = ("gen-virasoro", "vir-intermediate")
    elif args.vector:
        A = _algebra(args, config)
        M = _module(args, config, A)
        I = InducedModule(M, depth=depth)
        x = parse_vector(args.vector, I)
        source = {"vector": args.vector}
        names = (A.name, M.name)
    else:
        raise UsageError("give --vector or --beta-prime")
    result = radical_membership(I, x, mode, B=boxes[-1] if boxes else 3)
    expect = args.expect
    ok = True if expect is None else (result == (expect == "radical"))
    report = {
        "command": "radical test",
        "algebra": names[0],
        "module": names[1],
        "mode": mode,
        "conclusive": mode != "truncated",
        "terms": sorted([str(w), str(c)] for w, c in x.items()),
        "radical": result,
        "expect": expect,
        "pass": ok,
        **source,
    }
    return report, [{"radical": result, "mode": mode, "pass": ok}], ok


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--depth", type=int, help="depth cap for word lengths (default 3)")
    g.add_argument("--boxes", help="box schedule, e.g. 1,2,3,4")
    g.add_argument("--seed", type=int, help="seed for all sampling (default 0)")
    g.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--config", help="key=value or JSON file with option defaults")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", help=f"one of {', '.join(ALGEBRA_NAMES)}")
    alg.add_argument("--algebra-file", help="algebra definition file")
    alg.add_argument("--param", action="append", help="algebra parameter key=value (repeatable)")

    mod = argparse.ArgumentParser(add_help=False)
    mod.add_argument("--module", help=f"one of {', '.join(MODULE_NAMES)}")
    mod.add_argument("--module-file", help="module definition file")
    mod.add_argument("--mparam", action="append", help="module parameter key=value (repeatable)")

    vir = argparse.ArgumentParser(add_help=False)
    vir.add_argument("--lambda", dest="lam", help="module parameter lambda (default 1/2)")
    vir.add_argument("--mu", help="module parameter mu (default 1/3)")

    parser = argparse.ArgumentParser(prog="explie", description="Exp-polynomial Lie algebras and their induced modules.")
    parser.add_argument("--version", action="version", version=f"explie {__version__}")
    sub = parser.add_subparsers(dest="group", required=True)

    p = sub.add_parser("vandermonde", help="extended Vandermonde checks")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("verify", parents=[common], help="determinant formula and system reduction on random cases")
    q.add_argument("--trials", type=int)
    q.add_argument("--systems", type=int)
    q.set_defaults(func=cmd_vandermonde_verify)

    p = sub.add_parser("algebra", help="algebra checks")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("check", parents=[common, alg], help="antisymmetry and Jacobi on sampled triples")
    q.add_argument("--samples", type=int)
    q.set_defaults(func=cmd_algebra_check)

    p = sub.add_parser("module", help="module checks")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("check", parents=[common, alg, mod], help="module compatibility on sampled triples")
    q.add_argument("--samples", type=int)
    q.set_defaults(func=cmd_module_check)

    q = sub.add_parser("dims", parents=[common, alg, mod], help="weight-space dimensions of the quotient")
    q.add_argument("--degree", help="level i (or list, or range like 0-2)")
    q.add_argument("--weight", help="lattice weight(s): '0' or '-1;0;1' or '1,0;0,1'")
    q.add_argument("--no-symbolic", action="store_true", help="skip the symbolic computation")
    q.set_defaults(func=cmd_dims)

    p = sub.add_parser("virasoro", help="generalized Virasoro tables")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("bounds", parents=[common, vir], help="dimensions against 1*3*...*(2i+1)")
    q.add_argument("--imax", type=int)
    q.add_argument("--a", help="p-coefficient of the weight (default 0)")
    q.set_defaults(func=cmd_virasoro_bounds)
    q = s.add_parser("cor32", aliases=["independence"], parents=[common, vir], help="dimension independence of the weight")
    q.add_argument("--degree", help="level(s) i >= 1")
    q.add_argument("--a-list", dest="a_list", help="p-coefficients, e.g. 0,1,2,-1")
    q.set_defaults(func=cmd_virasoro_cor32)

    p = sub.add_parser("radical", help="radical membership")
    s = p.add_subparsers(dest="action", required=True)
    q = s.add_parser("test", parents=[common, alg, mod, vir], help="test one homogeneous vector")
    q.add_argument("--vector", help="terms 'coef * fam:i:a,.. | j@w,..' separated by ';'")
    q.add_argument("--beta-prime", type=int, help="build the moment vector for d_(-1+kp) (Virasoro)")
    q.add_argument("--inner", help="inner word p-coefficients k_1,..,k_n (Virasoro)")
    q.add_argument("--a", help="weight p-coefficient (Virasoro, default 0)")
    q.add_argument("--mode", help="symbolic (default), grid or truncated")
    q.add_argument("--expect", choices=("radical", "not-radical"), help="fail unless the result matches")
    q.set_defaults(func=cmd_radical_test)
    return parser


def render(report: dict, rows: list, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        keys = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=["schema_version"] + keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({"schema_version": SCHEMA_VERSION,
                        **{k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()}})
        return buf.getvalue()
    return json.dumps({"schema_version": SCHEMA_VERSION, **report}, sort_keys=True, indent=2) + "\n"


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        config = load_config(args.config)
        report, rows, ok = args.func(args, config)
        text = render(report, rows, _opt(args, config, "format"))
    except (UsageError, RegistryError, ValueError, KeyError) as e:
        print(f"explie: error: {e}", file=stderr)
        parser.print_usage(stderr)
        return 2
    out = _opt(args, config, "out")
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run_command())
