"""Command line front end.

    slekit simulate PLAN        write sample traces
    slekit verify-bounds PLAN   hit-probability sweeps against the bound kernels
    slekit minkowski PLAN       Minkowski content moments
    slekit kernel QUERY         evaluate a bound kernel from a JSON query

Values come from command-line flags first, then the plan file, then defaults.
Exit codes: 0 pass, 1 invalid input, 2 runtime error, 3 statistical check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from .bounds import evaluate_query
from .geometry import GeometryDomainError
from .mc import campaign as camp
from .mc.engine import EngineConfig, sample_seed, simulate_sample
from .mc.fit import DegenerateFitError, domination_check, fit_from_counts
from .mc.minkowski import minkowski_profile, region_from_dict
from .sle_core import AdaptiveConfig, adaptive_trace, sample_driving, save_binary, to_csv, trace_from_driving

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME, EXIT_STAT = 0, 1, 2, 3
OUTPUT_ENV = "SLEKIT_OUTPUT_DIR"

log = logging.getLogger("slekit")


class ValidationError(ValueError):
    pass


def _load_json(arg: str):
    if arg == "-":
        return json.load(sys.stdin)
    if arg.lstrip().startswith("{"):
        return json.loads(arg)
    with open(arg) as fh:
        return json.load(fh)


def _merge_flags(plan: dict, args) -> dict:
    plan = dict(plan)
    for key, attr in (("kappa", "kappa"), ("samples", "samples"), ("master_seed", "seed"),
                      ("output_dir", "output_dir")):
        v = getattr(args, attr, None)
        if v is not None:
            plan[key] = v
    eng = dict(plan.get("engine", {}))
    for key in ("dt", "horizon"):
        v = getattr(args, key, None)
        if v is not None:
            eng[key] = v
    plan["engine"] = eng
    if not plan.get("output_dir"):
        plan["output_dir"] = os.environ.get(OUTPUT_ENV, "slekit_out")
    return plan


def _campaign_plan(plan: dict, kind: str) -> dict:
    p = {k: v for k, v in plan.items() if k not in ("output_dir", "synthetic", "factor")}
    p["kind"] = kind
    try:
        return camp.normalize_plan(p)
    except camp.PlanError as exc:
        raise ValidationError(str(exc)) from None


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    camp._atomic_write(path, text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[f"{c:.6g}" if isinstance(c, float) else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


# ------------------------------------------------------------------ simulate


def cmd_simulate(plan: dict, args) -> int:
    kappa = plan.get("kappa")
    try:
        kappa = float(kappa)
    except (TypeError, ValueError):
        raise ValidationError("plan needs a numeric kappa") from None
    if not (0.0 < kappa < 8.0):
        raise ValidationError(f"kappa must lie in (0, 8), got {kappa}")
    samples = int(plan.get("samples", 1))
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    seed = int(plan.get("master_seed", 0))
    eng_d = dict(plan.get("engine", {}))
    eng_d.setdefault("mode", plan.get("mode", "radial"))
    eng_d.setdefault("method", "zipper")
    try:
        eng = EngineConfig(**eng_d)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"engine: {exc}") from None
    pts = [complex(a, b) for a, b in plan.get("queries", {}).get("points", [])]
    r_min = float(plan.get("r_min", 0.01))
    out = Path(plan["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i in range(samples):
        s = sample_seed(seed, i)
        if eng.mode == "radial" and eng.method != "adaptive":
            res = eng.resolved(r_min)
            tr = trace_from_driving(sample_driving(kappa, res.horizon, res.dt, s), res.epsilon, res.method)
        else:
            tr = simulate_sample(kappa, eng, s, pts, r_min)
        name = f"trace_{i:06d}_{s}"
        save_binary(tr, out / f"{name}.bin")
        files.append(f"{name}.bin")
        if args.csv:
            _write(out / f"{name}.csv", to_csv(tr))
            files.append(f"{name}.csv")
        print(f"sample {i}: {len(tr)} points -> {name}.bin")
    manifest = {"command": "simulate", "plan": {k: v for k, v in plan.items() if k != "output_dir"},
                "files": files}
    _write(out / "manifest.json", camp.dumps(manifest))
    return EXIT_OK


# ------------------------------------------------------------- verify-bounds


def verify_sweep(radii_sets, p_hat, kernel, factor=3.0):
    """Domination report rows for one sweep; radius sets are ordered by their largest radius."""
    key = [max(rs) for rs in radii_sets]
    rep = domination_check(key, p_hat, kernel, factor)
    return rep


def cmd_verify_bounds(plan: dict, args) -> int:
    out = Path(plan["output_dir"])
    factor = float(plan.get("factor", 3.0))
    synth = plan.get("synthetic")
    if synth is not None:
        sets = synth["radius_sets"]
        p = [float(x) for x in synth["p_hat"]]
        k = [float(x) for x in synth["kernel"]]
        rows_src = [{"radii": rs, "p_hat": pp, "lo": pp, "hi": pp, "kernel": kk, "hits": None}
                    for rs, pp, kk in zip(sets, p, k)]
        n_ok = None
    else:
        cplan = _campaign_plan(plan, "hits")
        res = camp.run_campaign(cplan, out / "campaign", workers=args.workers)
        agg = res.aggregate
        rows_src = agg["sweep"]
        n_ok = agg["samples_ok"]
        if res.failed:
            log.warning("%d failed samples: %s", len(res.failed), res.failed[:20])
    rep = verify_sweep([r["radii"] for r in rows_src], [r["p_hat"] for r in rows_src],
                       [r["kernel"] for r in rows_src], factor)
    by_key = {max(r["radii"]): r for r in rows_src}
    header = ["r", "p_hat", "lo", "hi", "kernel", "ratio", "C_hat"]
    rows = []
    for r, ratio, c in zip(rep.radii, rep.ratios, rep.running_c):
        src = by_key[r]
        rows.append([r, src["p_hat"], src["lo"], src["hi"], src["kernel"], ratio, c])
    verdict = "PASS" if rep.stable else "FAIL"
    report = {"c_hat": rep.c_hat, "stable": rep.stable, "factor": factor, "verdict": verdict,
              "rows": [dict(zip(header, r)) for r in rows]}
    if n_ok and len(rows_src) >= 3 and len(rows_src[0]["radii"]) == 1:
        try:
            fit = fit_from_counts([r["radii"][0] for r in rows_src], [r["hits"] for r in rows_src], n_ok)
            report["slope"] = fit.slope
            report["slope_stderr"] = fit.slope_stderr
            report["dropped_radii"] = fit.dropped
        except DegenerateFitError as exc:
            report["slope_error"] = str(exc)
    _write(out / "verify_bounds.csv", _csv_text(header, [[repr(float(x)) for x in r] for r in rows]))
    _write(out / "verify_bounds.json", camp.dumps(report))
    print(_table(header, rows))
    if "slope" in report:
        print(f"slope {report['slope']:.4f} +- {report['slope_stderr']:.4f}")
    print(f"C_hat {rep.c_hat:.4g}  domination {verdict} (factor {factor:g})")
    return EXIT_OK if rep.stable else EXIT_STAT


# ----------------------------------------------------------------- minkowski


def _deterministic_minkowski(plan: dict):
    m = plan.get("queries", {}).get("minkowski", {})
    r_list = [float(r) for r in m.get("r_list", [])]
    if not r_list:
        raise ValidationError("minkowski plans need queries.minkowski.r_list")
    d = float(plan.get("d", 1.0))
    horizon = float(plan.get("engine", {}).get("horizon", 12.0))
    h = min(r_list) / 2.0
    drv = sample_driving(0.0, horizon, float(plan.get("engine", {}).get("dt", 0.01)), 0)
    tr = adaptive_trace(drv, (), AdaptiveConfig(h_min=h, h_max=h))
    region = region_from_dict(m.get("region"))
    ests, _ = minkowski_profile(tr, r_list, float(m.get("grid_factor", 8.0)), region, d)
    return r_list, [[e.content] for e in ests]


def cmd_minkowski(plan: dict, args) -> int:
    out = Path(plan["output_dir"])
    if plan.get("deterministic"):
        r_list, contents = _deterministic_minkowski(plan)
        header = ["n", "r", "moment", "lo", "hi"]
        rows = [[1, r, c[0], c[0], c[0]] for r, c in zip(r_list, contents)]
        ok = True
    else:
        cplan = _campaign_plan(plan, "minkowski")
        res = camp.run_campaign(cplan, out / "campaign", workers=args.workers)
        agg = res.aggregate
        r_list = agg["r_list"]
        header = ["n", "r", "moment", "lo", "hi"]
        rows = []
        for n in sorted(agg["moments"], key=int):
            for r, mval, (lo, hi) in zip(r_list, agg["moments"][n], agg["intervals"][n]):
                rows.append([int(n), r, mval, lo, hi])
        ok = agg["jensen_ok"]
    text = _csv_text(header, [[r[0]] + [repr(float(x)) for x in r[1:]] for r in rows])
    _write(out / "minkowski_moments.csv", text)
    print(_table(header, rows))
    if not ok:
        print("Jensen check FAILED")
    return EXIT_OK if ok else EXIT_STAT


# -------------------------------------------------------------------- kernel


def cmd_kernel(query: dict, args) -> int:
    try:
        res = evaluate_query(query)
    except GeometryDomainError as exc:
        raise ValidationError(str(exc)) from None
    print(json.dumps(res, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slekit", description="Numerical SLE bound checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def plan_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("plan", help="plan JSON file, inline JSON, or - for stdin")
        sp.add_argument("--kappa", type=float)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--dt", type=float)
        sp.add_argument("--horizon", type=float)
        sp.add_argument("--output-dir", dest="output_dir",
                        help=f"defaults to ${OUTPUT_ENV} or ./slekit_out")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        return sp

    plan_cmd("simulate", "write sample traces").add_argument("--csv", action="store_true",
                                                              help="also write CSV traces")
    plan_cmd("verify-bounds", "compare hit frequencies with bound kernels")
    plan_cmd("minkowski", "Minkowski content moments")
    kp = sub.add_parser("kernel", help="evaluate a bound kernel")
    kp.add_argument("query", help="query JSON file, inline JSON, or - for stdin")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "kernel":
            return cmd_kernel(_load_json(args.query), args)
        plan = _merge_flags(_load_json(args.plan), args)
        handler = {"simulate": cmd_simulate, "verify-bounds": cmd_verify_bounds,
                   "minkowski": cmd_minkowski}[args.command]
        return handler(plan, args)
    except (ValidationError, camp.PlanError, json.JSONDecodeError, GeometryDomainError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
