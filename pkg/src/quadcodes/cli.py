"""Command-line front end: construct, weights, ghw, verify, sweep.

Reports are JSON with "schema": 1.  Nothing time-dependent goes into a report
unless --timing is passed, so the same arguments and seed give byte-identical
output.  Exit status: 0 when every requested check passed, 1 when a check
failed, 2 for bad input, 3 when a size guard refused the work.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import cyclo
from .code import (
    DEFAULT_MAX_CODEWORDS,
    CodeParams,
    build_defining_set,
    code_summary,
    formula_weights,
    minimality_check,
    table_rows,
    weight_distribution,
)
from .errors import HypothesisViolated, SizeGuardExceeded
from .gf import DEFAULT_MAX_FIELD, check_odd_prime, make_field
from .ghw import (
    bruteforce_cost,
    hierarchy_bruteforce,
    hierarchy_formula,
    witness_subspace,
)
from .quadform import (
    BUILTIN_FORMS,
    builtin_form,
    construct_isotropic,
    construct_rank1,
    count_level_set,
    form_from_json,
    isotropic_dim,
    rank1_dim,
    restrict,
)
from .subspace import DEFAULT_MAX_SUBSPACES, random_subspace

SCHEMA = 1
OUT_ENV = "QUADCODES_OUT_DIR"
ALPHA_NOTE = "alpha is taken in GF(p^s2)*, the field of the second block"


# --------------------------------------------------------------------------
# config


def form_name(spec: str) -> str:
    return spec.replace("-", "_")


def load_form(spec: str, F1, seed: int):
    name = form_name(spec)
    if name in BUILTIN_FORMS:
        return builtin_form(name, F1, seed=seed)
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"form {spec!r} is neither a builtin ({', '.join(BUILTIN_FORMS)}) nor a file")
    f = form_from_json(path.read_text(), seed=seed)
    if f.field != F1:
        raise ValueError(f"form file is over {f.field!r}, expected {F1!r}")
    return f


def parse_alpha(spec: str, F2):
    if spec == "one":
        return F2.one()
    coeffs = [int(c) for c in spec.replace(",", " ").split()]
    if len(coeffs) != F2.m:
        raise ValueError(f"alpha needs {F2.m} coordinates, got {len(coeffs)}")
    return F2(coeffs)


def params_from(p: int, s1: int, s2: int, form: str, alpha: str, *, seed: int, max_field: int) -> CodeParams:
    check_odd_prime(p)
    if s1 < 1 or s2 < 1:
        raise ValueError("s1 and s2 must be positive")
    F1 = make_field(p, s1, max_size=max_field)
    F2 = make_field(p, s2, max_size=max_field)
    return CodeParams(load_form(form, F1, seed), parse_alpha(alpha, F2))


def build_params(args) -> CodeParams:
    return params_from(args.p, args.s1, args.s2, args.form, args.alpha, seed=args.seed, max_field=args.max_field)


def config_echo(args) -> dict:
    skip = {"func", "output", "format", "timing", "workers"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def enumerator_dict(W) -> dict:
    return {"enumerator": str(W), "k": W.k, "counts": [list(c) for c in W.counts]}


# --------------------------------------------------------------------------
# commands


def cmd_construct(args) -> dict:
    P = build_params(args)
    D = build_defining_set(P, max_points=args.max_codewords)
    out = {"params": P.describe(), "n": D.n, "D_size": D.n, "k": None}
    W = weight_distribution(D, "enumerate", workers=args.workers, max_work=args.max_codewords)
    out["k"] = code_summary(D, enumerator=W).k
    if args.points:
        out["points"] = D.points.tolist()
    return out


def cmd_weights(args) -> dict:
    P = build_params(args)
    D = build_defining_set(P, max_points=args.max_codewords)
    out = {"params": P.describe(), "method": args.method}
    if args.method == "formula":
        try:
            W = formula_weights(P)
        except HypothesisViolated as exc:
            out["formula"] = {"error": str(exc)}
            return out
        out["formula"] = enumerator_dict(W) | {"table": table_rows(P)}
        out["code"] = {"n": W.n, "k": W.k, "d": min(W.nonzero_weights), "three_weight": len(W.nonzero_weights) == 3}
        return out
    res = weight_distribution(D, args.method, workers=args.workers, max_work=args.max_codewords)
    W = res if args.method == "enumerate" else res.enumerated
    out["code"] = code_summary(D, enumerator=W).as_dict()
    out["enumerate"] = enumerator_dict(W)
    m = minimality_check(W, P.p)
    out["minimality"] = {"ratio_ok": m.ratio_ok, "w_min": m.w_min, "w_max": m.w_max}
    if args.method == "both":
        if res.formula is not None:
            out["formula"] = enumerator_dict(res.formula) | {"table": table_rows(P)}
        out["agreement"] = res.agree
        out["agreement_note"] = res.note
        if P.form.rank >= 1 and not res.agree:
            out["failed"] = ["weights: formula and enumeration disagree"]
    return out


def _r_values(args, s: int) -> list[int]:
    lo = args.r_min or 1
    hi = args.r_max or s
    if not 1 <= lo <= hi <= s:
        raise argparse.ArgumentTypeError(f"r range [{lo}, {hi}] must lie within [1, {s}]")
    return list(range(lo, hi + 1))


def cmd_ghw(args) -> dict:
    P = build_params(args)
    D = build_defining_set(P, max_points=args.max_codewords)
    rs = _r_values(args, P.s)
    out = {"params": P.describe(), "note": ALPHA_NOTE, "r": rs, "method": args.method}
    failed = []
    brute = form = None
    if args.method in ("bruteforce", "both"):
        for r in rs:
            count, work = bruteforce_cost(D, r)
            print(f"d_{r}: {count} subspaces, {work} entries", file=sys.stderr)
        brute = hierarchy_bruteforce(
            D, rs, args.bf_method, workers=args.workers, max_subspaces=args.max_subspaces, max_work=args.max_work
        )
        out["bruteforce"] = _slice(brute.as_dict(), rs)
        if not brute.strictly_increasing():
            failed.append("bruteforce hierarchy is not strictly increasing")
        if not brute.within_bounds():
            failed.append("bruteforce hierarchy violates r <= d_r <= n - s + r")
    if args.method in ("formula", "both"):
        try:
            form = hierarchy_formula(P)
        except HypothesisViolated as exc:
            out["formula"] = {"error": str(exc)}
        else:
            out["formula"] = _slice(form.as_dict(), rs)
            if args.witness:
                out["witnesses"] = [witness_subspace(P, r, D).as_dict() for r in rs]
    if brute is not None and form is not None:
        pairs = [(brute.d[r - 1], form.d[r - 1]) for r in rs if brute.d[r - 1] is not None]
        out["agreement"] = all(a == b for a, b in pairs)
        out["compared"] = [r for r in rs if brute.d[r - 1] is not None]
        if not out["agreement"]:
            failed.append("ghw: bruteforce and formula disagree")
    if failed:
        out["failed"] = failed
    return out


def _slice(d: dict, rs) -> dict:
    return {k: [v[r - 1] for r in rs] for k, v in d.items()}


def identity_checks(p: int, r_max: int, m: int, seed: int, perturb: bool = False) -> list[dict]:
    """Exact checks of the character-sum identities and the level-set counts."""
    results = []

    def record(name, ok, **where):
        results.append({"check": name, "ok": bool(ok), **where})

    g = cyclo.gauss_sum(p)
    record("gauss_square", g * g == cyclo.CycInt.integer(p, cyclo.pstar(p)), p=p)
    first = True
    for r in range(1, r_max + 1):
        for z in range(p):
            lhs, rhs, _ = cyclo.sigma_sum_sides(p, r, z)
            if perturb and first:
                c = list(lhs.coeffs)
                c[1] += 1
                lhs = cyclo.CycInt.make(p, c)
            first = False
            record("sigma_sum", lhs == rhs, p=p, r=r, z=z)
    F = make_field(p, m)
    forms = ("trace_square", "scaled_trace_square", "trace_square_quarter", "trace_linear_square")
    for name in forms:
        f = builtin_form(name, F, seed=seed)
        for b in F.elements():
            lhs, rhs = cyclo.exp_sum_sides(f, b)
            record("exp_sum", lhs == rhs, p=p, m=m, form=name, b=list(b.coeffs))
    rng = np.random.default_rng(seed)
    for name in forms:
        f = builtin_form(name, F, seed=seed)
        for k in range(m + 1):
            for _ in range(5):
                H = random_subspace(rng, m, k, p)
                for beta in range(p):
                    ok = count_level_set(f, H, beta) == count_level_set(f, H, beta, "formula")
                    record("level_set", ok, p=p, m=m, form=name, dim=k, beta=beta, basis=H.rows())
        if f.rank >= 1:
            J = construct_isotropic(f)
            e0 = isotropic_dim(f.rank, f.sign, m, p)
            ok = J.dim == e0 and not f.values(J.points()).any() and f.radical.is_subspace_of(J)
            record("isotropic", ok, p=p, m=m, form=name, dim=J.dim)
        if f.rank >= 2:
            for beta in (1, next(z for z in range(2, p) if cyclo.eta(z, p) == -1)):
                H = construct_rank1(f, beta)
                ok = H.dim == rank1_dim(f.rank) and restrict(f, H) == (1, cyclo.eta(beta, p))
                record("rank1", ok, p=p, m=m, form=name, beta=beta, dim=H.dim)
    return results


def cmd_verify(args) -> dict:
    check_odd_prime(args.p)
    m = args.m or max(1, min(3, int(np.floor(np.log(729) / np.log(args.p)))))
    checks = identity_checks(args.p, args.r_max, m, args.seed, perturb=args.perturb)
    bad = [c for c in checks if not c["ok"]]
    out = {"p": args.p, "r_max": args.r_max, "m": m, "total": len(checks), "passed": len(checks) - len(bad)}
    summary = {}
    for c in checks:
        s = summary.setdefault(c["check"], [0, 0])
        s[0] += 1
        s[1] += c["ok"]
    out["by_check"] = {k: {"total": t, "passed": ok} for k, (t, ok) in summary.items()}
    if bad:
        out["failures"] = bad
        out["failed"] = [f"{c['check']} " + ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("check", "ok")) for c in bad]
    return out


SWEEP_COLUMNS = [
    "p", "s1", "s2", "form", "rank", "sign", "n", "n_ok", "k", "d", "num_weights", "three_weight",
    "weights_agree", "hierarchy_agree", "hierarchy_status", "mds_s", "minimal", "enumerator", "status",
]


def sweep_cell(p, s1, s2, form, cfg, seed) -> dict:
    row = {"p": p, "s1": s1, "s2": s2, "form": form}
    try:
        P = params_from(p, s1, s2, form, cfg.get("alpha", "one"), seed=seed, max_field=cfg.get("max_field", DEFAULT_MAX_FIELD))
        row |= {"rank": P.form.rank, "sign": P.form.sign}
        D = build_defining_set(P)
        cmp = weight_distribution(D, "both", workers=cfg.get("workers", 1), max_work=cfg.get("max_codewords", DEFAULT_MAX_CODEWORDS))
        W = cmp.enumerated
        S = code_summary(D, enumerator=W)
        row |= {
            "n": D.n,
            "n_ok": D.n == p ** (s1 + s2 - 1) - 1 and W.total == p**W.k and W.as_dict().get(0) == 1,
            "k": S.k,
            "d": S.d,
            "num_weights": len(W.nonzero_weights),
            "three_weight": S.is_three_weight,
            "weights_agree": cmp.agree if cmp.formula is not None else "n/a",
            "minimal": minimality_check(W, p).ratio_ok,
            "enumerator": str(W),
        }
        if cfg.get("hierarchy", True):
            H = hierarchy_bruteforce(
                D, None, "direct", max_subspaces=cfg.get("max_subspaces", DEFAULT_MAX_SUBSPACES),
                max_work=cfg.get("max_work", 5 * 10**8),
            )
            skipped = [r for r, x in enumerate(H.d, 1) if x is None]
            row["hierarchy_status"] = "complete" if not skipped else "skipped: guard r=" + ";".join(map(str, skipped))
            row["mds_s"] = H.d[-1] == D.n if H.d[-1] is not None else "n/a"
            increasing = H.strictly_increasing() and H.within_bounds()
            try:
                Fh = hierarchy_formula(P)
                agree = all(a is None or a == b for a, b in zip(H.d, Fh.d))
                row["hierarchy_agree"] = agree and increasing
            except HypothesisViolated:
                row["hierarchy_agree"] = "n/a" if increasing else False
        row["status"] = "ok"
    except SizeGuardExceeded as exc:
        row["status"] = f"skipped: guard ({exc.cost} > {exc.limit})"
    except Exception as exc:  # recorded, sweep continues
        row["status"] = f"error: {type(exc).__name__}: {exc}"
    return row


def run_sweep(cfg: dict, seed: int = 0) -> list[dict]:
    grid = itertools.product(cfg.get("p", []), cfg.get("s1", []), cfg.get("s2", []), cfg.get("forms", []))
    return [sweep_cell(p, s1, s2, form, cfg, seed) for p, s1, s2, form in grid]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: str(row[k]).lower() if isinstance(row.get(k), bool) else row.get(k, "") for k in SWEEP_COLUMNS})
    return buf.getvalue()


def sweep_failures(rows) -> list[str]:
    bad = []
    for row in rows:
        if row.get("status", "").startswith("error"):
            bad.append(f"{row['p']},{row['s1']},{row['s2']},{row['form']}: {row['status']}")
            continue
        for key in ("weights_agree", "hierarchy_agree", "n_ok"):
            if row.get(key) is False:
                bad.append(f"{row['p']},{row['s1']},{row['s2']},{row['form']}: {key} false")
    return bad


# --------------------------------------------------------------------------
# plumbing


def add_common(sp, instance: bool = True):
    sp.add_argument("--seed", type=int, default=0, help="seed for every sampled check")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", "-o", help="report path (default: $%s/<command>.json if set)" % OUT_ENV)
    sp.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    sp.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    if instance:
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--s1", type=int, required=True)
        sp.add_argument("--s2", type=int, required=True)
        sp.add_argument("--alpha", default="one", help="'one' or comma-separated coordinates")
        sp.add_argument("--form", default="trace-square", help="builtin name or path to a form JSON file")
        sp.add_argument("--max-field", type=int, default=DEFAULT_MAX_FIELD)
        sp.add_argument("--max-codewords", type=int, default=DEFAULT_MAX_CODEWORDS)
        sp.add_argument("--max-subspaces", type=int, default=DEFAULT_MAX_SUBSPACES)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadcodes", description="Three-weight codes from quadratic forms.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="build the defining set and report n, k")
    add_common(sp)
    sp.add_argument("--points", action="store_true", help="include the points of D")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("weights", help="weight distribution")
    add_common(sp)
    sp.add_argument("--method", choices=("enumerate", "formula", "both"), default="both")
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("ghw", help="generalized Hamming weights")
    add_common(sp)
    sp.add_argument("--method", choices=("bruteforce", "formula", "both"), default="both")
    sp.add_argument("--bf-method", choices=("direct", "dual"), default="direct")
    sp.add_argument("--r-min", type=int)
    sp.add_argument("--r-max", type=int)
    sp.add_argument("--max-work", type=int, default=5 * 10**8)
    sp.add_argument("--witness", action="store_true", help="attach verified witness subspaces")
    sp.set_defaults(func=cmd_ghw)

    sp = sub.add_parser("verify", help="exact identity checks")
    add_common(sp, instance=False)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r-max", type=int, default=4)
    sp.add_argument("--m", type=int, help="extension degree for the form checks")
    sp.add_argument("--perturb", action="store_true", help="negative control: corrupt one identity")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="grid of instances to CSV")
    add_common(sp, instance=False)
    sp.add_argument("--config", required=True, help="JSON file with lists p, s1, s2, forms")
    sp.set_defaults(func=None)
    return ap


def _destination(args, default_name: str):
    if args.output:
        return Path(args.output)
    env = os.environ.get(OUT_ENV)
    return Path(env) / default_name if env else None


def _text(report: dict, prefix: str = "") -> list[str]:
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines += _text(v, f"{prefix}{k}.")
        elif isinstance(v, bool):
            lines.append(f"{prefix}{k}: {str(v).lower()}")
        else:
            lines.append(f"{prefix}{k}: {json.dumps(v) if isinstance(v, list) else v}")
    return lines


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "sweep":
            cfg = json.loads(Path(args.config).read_text())
            cfg.setdefault("workers", args.workers)
            rows = run_sweep(cfg, args.seed)
            text = sweep_csv(rows)
            dest = _destination(args, "sweep.csv")
            if dest:
                dest.parent.mkdir(parents=True, exist_ok=True)
                dest.write_text(text)
            sys.stdout.write(text)
            bad = sweep_failures(rows)
            for b in bad:
                print(f"FAILED {b}", file=sys.stderr)
            return 1 if bad else 0
        if args.command == "ghw":
            s = args.s1 + args.s2
            if (args.r_min and not 1 <= args.r_min <= s) or (args.r_max and not 1 <= args.r_max <= s):
                ap.error(f"r range must lie within [1, {s}]")
        body = args.func(args)
    except SizeGuardExceeded as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return 3
    except (ValueError, argparse.ArgumentTypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = {"schema": SCHEMA, "command": args.command, "config": config_echo(args)} | body
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    text = json.dumps(report, indent=2) + "\n"
    dest = _destination(args, f"{args.command}.json")
    if dest:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    if args.format == "json":
        sys.stdout.write(text)
    else:
        print("\n".join(_text({k: v for k, v in report.items() if k != "config"})))
    failed = report.get("failed", [])
    for msg in failed:
        print(f"FAILED {msg}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
