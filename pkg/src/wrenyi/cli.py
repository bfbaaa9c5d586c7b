"""Command-line front end.

Subcommands:

    compute <measure>   one measure of a density/weight combination
    verify  <check>     one inequality or identity check
    sweep   <scenario>  parameter sweep from a scenario file -> CSV/JSON
    repro   <id>        bundled reproduction checks (pass/fail lines)

Measure ids: we rwe wre wrp rre rrp mom dev fi wfi.
Check ids:   thm1.1 mei cor1 cor2 cor3 fii cor4 cri scaling lemma4
             id2.11 id2.14 id2.18 id2.22.

Exit codes: 0 success, 2 input error, 3 numeric domain error,
4 reproduction/acceptance failure.  JSON output is deterministic: keys
appear in fixed order and floats are rendered with 17 significant
digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import measures as M
from .densities import parse_density
from .errors import DomainError, InputError, WrenyiError
from .gaussian_forms import verify_identity
from .inequalities import (
    InequalityVerdict,
    check_cor1,
    check_cor2,
    check_cor3,
    check_cor4,
    check_cri,
    check_fii,
    check_mei,
    check_scaling_identity,
    check_thm11,
    lemma4_residual,
)
from .repro import IDENTITY_CASE, run_repro
from .weights import make_constant, parse_weight

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_ACCEPT = 4


# ---------------------------------------------------------------------------
# Deterministic JSON with 17-significant-digit floats
# ---------------------------------------------------------------------------


def _jfloat(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def to_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _jfloat(float(obj))
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        inner = ",".join(f"{to_json(str(k))}:{to_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(to_json(v) for v in obj) + "]"
    return to_json(str(obj))


def _emit(obj) -> None:
    sys.stdout.write(to_json(obj) + "\n")


def _measure_payload(mv: M.MeasureValue) -> dict:
    return {
        "value": mv.value,
        "error": mv.error,
        "branch": mv.branch,
        "flags": dict(mv.flags),
        "warnings": list(mv.warnings),
    }


def _verdict_payload(v: InequalityVerdict, with_terms: bool = True) -> dict:
    out = {
        "id": v.inequality_id,
        "lhs": v.lhs,
        "rhs": v.rhs,
        "slack": v.slack,
        "verdict": v.verdict,
        "equality": v.equality,
        "tolerance": v.tolerance,
        "error": v.error,
        "margins": dict(v.margins),
        "warnings": list(v.warnings),
    }
    if with_terms:
        out["terms"] = {k: t for k, t in v.terms.items() if _is_scalarish(t)}
    return out


def _is_scalarish(t) -> bool:
    return isinstance(t, (int, float, str, np.integer, np.floating)) or t is None


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

MEASURES = ("we", "rwe", "wre", "wrp", "rre", "rrp", "mom", "dev", "fi", "wfi")


def _parse_alpha(text: str) -> float:
    if text is None:
        raise InputError("this operation needs --alpha")
    t = text.strip().lower()
    return math.inf if t in ("inf", "infinity", "oo") else float(t)


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise InputError(f"--{name} is required for this operation")


def cmd_compute(args) -> int:
    if args.measure not in MEASURES:
        raise InputError(f"unknown measure {args.measure!r}; known: {', '.join(MEASURES)}")
    _need(args, "f")
    f = parse_density(args.f)
    w = parse_weight(args.w, base=f) if args.w else make_constant(1.0)
    mid = args.measure
    if mid in ("rwe", "rre", "rrp"):
        _need(args, "g")
        g = parse_density(args.g)
    if mid == "we":
        mv = M.weighted_entropy(f, w)
    elif mid == "rwe":
        mv = M.relative_weighted_entropy(f, g, w)
    elif mid == "wre":
        _need(args, "p")
        mv = M.weighted_renyi_entropy(f, w, args.p)
    elif mid == "wrp":
        _need(args, "p")
        mv = M.weighted_renyi_power(f, w, args.p)
    elif mid == "rre":
        _need(args, "p")
        mv = M.relative_renyi_entropy(f, g, w, args.p)
    elif mid == "rrp":
        _need(args, "p")
        mv = M.relative_renyi_power(f, g, w, args.p)
    elif mid == "mom":
        mv = M.generalized_moment(f, w, _parse_alpha(args.alpha))
    elif mid == "dev":
        mv = M.generalized_deviation(f, w, _parse_alpha(args.alpha))
    elif mid == "fi":
        _need(args, "p")
        mv = M.fisher_information(f, _parse_alpha(args.alpha), args.p)
    else:  # wfi
        _need(args, "p")
        mv = M.weighted_fisher_information(f, w, _parse_alpha(args.alpha), args.p)
    _emit({"measure": mid, **_measure_payload(mv)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

CHECKS = (
    "thm1.1",
    "mei",
    "cor1",
    "cor2",
    "cor3",
    "fii",
    "cor4",
    "cri",
    "scaling",
    "lemma4",
    "id2.11",
    "id2.14",
    "id2.18",
    "id2.22",
)

_LEMMA4_MAPS = {
    "x": (lambda x: x, lambda x: 1.0),
    "atan": (math.atan, lambda x: 1.0 / (1.0 + x * x)),
    "cube": (lambda x: x**3, lambda x: 3.0 * x * x),
}


def cmd_verify(args) -> int:
    cid = args.check
    if cid not in CHECKS:
        raise InputError(f"unknown check {cid!r}; known: {', '.join(CHECKS)}")
    tol = args.tol if args.tol is not None else 1e-8

    if cid.startswith("id2."):
        _need(args, "p")
        alpha = _parse_alpha(args.alpha)
        w = parse_weight(args.w) if args.w else make_constant(1.0)
        residual = verify_identity(IDENTITY_CASE[cid], w, alpha, args.p)
        _emit({"id": cid, "residual": residual, "passed": residual <= max(tol, 1e-5)})
        return EXIT_OK

    if cid == "scaling":
        _need(args, "f", "p", "t")
        g = parse_density(args.f)
        w = parse_weight(args.w, base=g) if args.w else make_constant(1.0)
        residual = check_scaling_identity(w, g, args.t, args.p)
        _emit({"id": cid, "residual": residual, "passed": residual <= max(tol, 1e-7)})
        return EXIT_OK

    if cid == "lemma4":
        _need(args, "f")
        f = parse_density(args.f)
        gname = args.gfn or "x"
        if gname not in _LEMMA4_MAPS:
            raise InputError(
                f"unknown --gfn {gname!r}; known: {', '.join(_LEMMA4_MAPS)}"
            )
        gfn, dgfn = _LEMMA4_MAPS[gname]
        residual = lemma4_residual(f, gfn, None, dg=dgfn)
        _emit({"id": cid, "gfn": gname, "residual": residual, "passed": residual <= max(tol, 1e-7)})
        return EXIT_OK

    _need(args, "f")
    f = parse_density(args.f)
    w = parse_weight(args.w, base=f) if args.w else make_constant(1.0)

    if cid == "thm1.1":
        _need(args, "g", "p")
        g = parse_density(args.g)
        v = check_thm11(f, g, w, args.p, tol)
    elif cid == "mei":
        _need(args, "p")
        v = check_mei(f, w, _parse_alpha(args.alpha), args.p, tol)
    elif cid == "cor1":
        _need(args, "c")
        alpha = _parse_alpha(args.alpha) if args.alpha else 1.0
        v = check_cor1(f, args.c, alpha, args.p if args.p is not None else 1.0, tol)
    elif cid == "cor2":
        _need(args, "c")
        v = check_cor2(f, args.c, tol)
    elif cid == "cor3":
        v = check_cor3(f, tol)
    elif cid == "fii":
        _need(args, "p")
        v = check_fii(f, w, _parse_alpha(args.alpha), args.p, tol)
    elif cid == "cri":
        _need(args, "p")
        v = check_cri(f, w, _parse_alpha(args.alpha), args.p, tol)
    else:  # cor4
        _need(args, "c")
        v1, v2 = check_cor4(f, args.c, tol)
        _emit(
            {
                "id": cid,
                "first": _verdict_payload(v1),
                "second": _verdict_payload(v2),
            }
        )
        return EXIT_OK
    _emit(_verdict_payload(v))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SCALAR_KEYS = {
    "id",
    "f",
    "g",
    "w",
    "p",
    "alpha",
    "c",
    "t",
    "verify",
    "compute",
    "tol",
    "jobs",
    "seed",
    "out_csv",
    "out_json",
}
ORDER_KEYS = ("p", "alpha", "c", "t")


def parse_scenario(path: str) -> dict:
    """Parse the key = value scenario format (lists, linspace, templates)."""
    raw: dict[str, str] = {}
    order: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key in raw:
                raise InputError(f"{path}:{lineno}: duplicate key {key!r}")
            raw[key] = val
            order.append(key)

    templates = " ".join(raw.get(k, "") for k in ("f", "g", "w") + ORDER_KEYS)
    for key in raw:
        if key in SCALAR_KEYS:
            continue
        if "{" + key + "}" not in templates:
            raise InputError(
                f"unknown scenario key {key!r} (not a schema key and never "
                f"referenced as {{{key}}})"
            )

    def parse_values(text: str):
        text = text.strip()
        if text.startswith("linspace:"):
            a, b, n = text[len("linspace:") :].split(",")
            return list(np.linspace(float(a), float(b), int(n)))
        if text.startswith("interior:"):
            a, b, n = text[len("interior:") :].split(",")
            return list(np.linspace(float(a), float(b), int(n) + 2)[1:-1])
        if "," in text:
            return [float(v) for v in text.split(",")]
        try:
            return float(text)
        except ValueError:
            return text

    grids: dict[str, list] = {}
    scalars: dict[str, object] = {}
    for key in order:
        if key in ("id", "f", "g", "w", "verify", "compute", "out_csv", "out_json"):
            scalars[key] = raw[key]
            continue
        parsed = parse_values(raw[key])
        if isinstance(parsed, list):
            grids[key] = parsed
        else:
            scalars[key] = parsed
    return {"grids": grids, "scalars": scalars, "order": order}


def _rows_of(scenario: dict):
    grids = scenario["grids"]
    names = [k for k in scenario["order"] if k in grids]
    rows = [dict()]
    for name in names:
        rows = [dict(r, **{name: v}) for r in rows for v in grids[name]]
    return rows


def _subst(template: str, params: dict) -> str:
    out = template
    for k, v in params.items():
        out = out.replace("{" + k + "}", repr(float(v)) if isinstance(v, float) else str(v))
    if "{" in out:
        raise InputError(f"unresolved placeholder in {template!r}")
    return out


def _resolve_order(scenario, params, key):
    val = scenario["scalars"].get(key, params.get(key))
    if isinstance(val, str):
        val = float(_subst(val, params))
    return val


def evaluate_row(scenario: dict, params: dict) -> dict:
    scalars = scenario["scalars"]
    row: dict[str, object] = {}
    row.update({k: params[k] for k in params})
    env = {k: v for k, v in scalars.items() if isinstance(v, float)}
    env.update(params)
    try:
        f = parse_density(_subst(scalars["f"], env)) if "f" in scalars else None
        g = parse_density(_subst(scalars["g"], env)) if "g" in scalars else None
        w = (
            parse_weight(_subst(scalars["w"], env), base=f)
            if "w" in scalars
            else make_constant(1.0)
        )
        p = _resolve_order(scenario, env, "p")
        alpha = _resolve_order(scenario, env, "alpha")
        c = _resolve_order(scenario, env, "c")
        t = _resolve_order(scenario, env, "t")
        tol = scalars.get("tol", 1e-8)

        for mid in str(scalars.get("compute", "")).split(","):
            mid = mid.strip()
            if not mid:
                continue
            if mid not in MEASURES:
                raise InputError(f"unknown measure {mid!r}")
            mv = _dispatch_measure(mid, f, g, w, p, alpha)
            row[f"{mid}.value"] = mv.value
            row[f"{mid}.error"] = mv.error
            row[f"{mid}.branch"] = mv.branch
            for fk, fv in mv.flags.items():
                row[f"{mid}.flag.{fk}"] = fv

        for cid in str(scalars.get("verify", "")).split(","):
            cid = cid.strip()
            if not cid:
                continue
            for v in _dispatch_check(cid, f, g, w, p, alpha, c, t, tol):
                prefix = v.inequality_id
                row[f"{prefix}.lhs"] = v.lhs
                row[f"{prefix}.rhs"] = v.rhs
                row[f"{prefix}.slack"] = v.slack
                row[f"{prefix}.verdict"] = v.verdict
                row[f"{prefix}.margins"] = ";".join(
                    f"{k}={val:.12g}" for k, val in v.margins.items()
                )
        row["error"] = ""
    except WrenyiError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _dispatch_measure(mid, f, g, w, p, alpha):
    if mid == "we":
        return M.weighted_entropy(f, w)
    if mid == "rwe":
        return M.relative_weighted_entropy(f, g, w)
    if mid == "wre":
        return M.weighted_renyi_entropy(f, w, p)
    if mid == "wrp":
        return M.weighted_renyi_power(f, w, p)
    if mid == "rre":
        return M.relative_renyi_entropy(f, g, w, p)
    if mid == "rrp":
        return M.relative_renyi_power(f, g, w, p)
    if mid == "mom":
        return M.generalized_moment(f, w, alpha)
    if mid == "dev":
        return M.generalized_deviation(f, w, alpha)
    if mid == "fi":
        return M.fisher_information(f, alpha, p)
    return M.weighted_fisher_information(f, w, alpha, p)


def _dispatch_check(cid, f, g, w, p, alpha, c, t, tol):
    if cid not in CHECKS:
        raise InputError(f"unknown check {cid!r}")
    if cid == "thm1.1":
        return [check_thm11(f, g, w, p, tol)]
    if cid == "mei":
        return [check_mei(f, w, alpha, p, tol)]
    if cid == "cor1":
        return [
            check_cor1(
                f, c, alpha if alpha is not None else 1.0, p if p is not None else 1.0, tol
            )
        ]
    if cid == "cor2":
        return [check_cor2(f, c, tol)]
    if cid == "cor3":
        return [check_cor3(f, tol)]
    if cid == "fii":
        return [check_fii(f, w, alpha, p, tol)]
    if cid == "cri":
        return [check_cri(f, w, alpha, p, tol)]
    if cid == "cor4":
        return list(check_cor4(f, c, tol))
    raise InputError(f"check {cid!r} is not sweepable")


def cmd_sweep(args) -> int:
    scenario = parse_scenario(args.scenario)
    scalars = scenario["scalars"]
    rows_params = _rows_of(scenario)
    jobs = int(args.jobs or scalars.get("jobs", 1))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda pr: evaluate_row(scenario, pr), rows_params))
    else:
        rows = [evaluate_row(scenario, pr) for pr in rows_params]

    header: list[str] = ["index"]
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)

    out_csv = args.out or scalars.get("out_csv")
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for i, row in enumerate(rows):
        writer.writerow(
            [i] + [_csv_cell(row.get(k, "")) for k in header[1:]]
        )
    csv_text = buf.getvalue()
    if out_csv:
        _write_file(out_csv, csv_text)
    out_json = scalars.get("out_json")
    json_text = to_json(
        {
            "scenario": {
                "id": scalars.get("id", ""),
                "keys": {k: str(v) for k, v in scalars.items()},
                "grid_sizes": {k: len(v) for k, v in scenario["grids"].items()},
            },
            "rows": [
                {"index": i, **{k: row.get(k, "") for k in header[1:]}}
                for i, row in enumerate(rows)
            ],
        }
    )
    if out_json:
        _write_file(out_json, json_text + "\n")
    if not out_csv and not out_json:
        sys.stdout.write(csv_text)
    failed = sum(1 for row in rows if row.get("error"))
    sys.stderr.write(
        f"sweep: {len(rows)} rows, {failed} errored"
        + (f", csv -> {out_csv}" if out_csv else "")
        + (f", json -> {out_json}" if out_json else "")
        + "\n"
    )
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_file(path: str, text: str) -> None:
    import os

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# repro
# ---------------------------------------------------------------------------


def cmd_repro(args) -> int:
    rows = run_repro(args.example)
    failed = 0
    for name, ok, detail in rows:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f"  ({detail})"
        print(line)
        failed += 0 if ok else 1
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_ACCEPT


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wrenyi",
        description="Weighted Renyi entropy measures and inequality checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--f", help="density descriptor (exp:l laplace:b tent gg:a,p[,t] weighted:<f>;<w> table:<path>)")
        sp.add_argument("--g", help="second density descriptor")
        sp.add_argument("--w", help="weight descriptor (const:v expw:g pow:c abspoly:a0,a1,... fpoly:b0,... fpow:k,m)")
        sp.add_argument("--p", type=float, help="entropy order p")
        sp.add_argument("--alpha", help="moment order alpha (number or 'inf')")
        sp.add_argument("--c", type=float, help="power-weight exponent c")
        sp.add_argument("--t", type=float, help="scale parameter")
        sp.add_argument("--tol", type=float, help="verdict tolerance")
        sp.add_argument("--jobs", type=int, help="parallel sweep workers")
        sp.add_argument("--seed", type=int, default=42, help="oracle seed")
        sp.add_argument("--out", help="output path (CSV for sweep)")
        sp.add_argument("--gfn", help="lemma4 increasing map: x | atan | cube")

    sp = sub.add_parser("compute", help="compute one measure")
    sp.add_argument("measure", help=", ".join(MEASURES))
    common(sp)
    sp.set_defaults(fn=cmd_compute)

    sp = sub.add_parser("verify", help="run one inequality/identity check")
    sp.add_argument("check", help=", ".join(CHECKS))
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("sweep", help="run a scenario sweep")
    sp.add_argument("scenario", help="scenario file path")
    common(sp)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("repro", help="run a bundled reproduction")
    sp.add_argument("example", help="example-1.1 example-1.2 cor3.1-laplace cor3.2-tent cor3.3-g identities-sec2 all")
    common(sp)
    sp.set_defaults(fn=cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        _emit({"error": {"type": "input", "message": str(exc)}})
        return EXIT_INPUT
    except (DomainError, WrenyiError) as exc:
        _emit({"error": {"type": "numeric", "message": str(exc)}})
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
