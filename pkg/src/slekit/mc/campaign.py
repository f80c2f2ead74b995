"""Persisted, resumable Monte Carlo campaigns.

Layout of a campaign directory::

    manifest.json       plan, seed scheme, code version, timestamps
    shards/NNNNNN.csv   per-sample rows: min distances to the points, first-visit
                        times of the query circles (inf if never), status
    aggregate.json      derived from the shards only

Samples are grouped into fixed-size shards by index.  A shard either exists
completely or not at all, so an interrupted run resumes by skipping the
shards that are already there.  The aggregate is recomputed from the raw
rows in index order, which makes it byte-identical for a given plan.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from .._jit import backend
from ..bounds.kernels import RADIAL, WHOLE_PLANE, bound_kernel, make_specs
from ..geometry import exponents
from ..sle_core.trace import dist_to_trace
from ._pool import map_samples
from .crossing import crossing_times
from .engine import EngineConfig, sample_seed, simulate_sample
from .minkowski import Disc, _contents_one, default_horizon, moments_from_contents, region_from_dict
from .stats import wilson_interval

KINDS = ("hits", "minkowski")


class PlanError(ValueError):
    pass


def _atomic_write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def normalize_plan(plan: dict) -> dict:
    """Validate a plan and fill defaults.  Raises PlanError naming the problem."""
    p = json.loads(json.dumps(plan))
    kind = p.setdefault("kind", "hits")
    if kind not in KINDS:
        raise PlanError(f"kind must be one of {KINDS}")
    mode = p.setdefault("mode", RADIAL)
    if mode not in (RADIAL, WHOLE_PLANE):
        raise PlanError(f"mode must be 'radial' or 'whole-plane', got {mode!r}")
    try:
        kappa = float(p["kappa"])
    except (KeyError, TypeError, ValueError):
        raise PlanError("plan needs a numeric kappa") from None
    if not (0.0 < kappa < 8.0):
        raise PlanError(f"kappa must lie in (0, 8), got {kappa}")
    samples = p.setdefault("samples", 100)
    if not (isinstance(samples, int) and samples >= 1):
        raise PlanError("samples must be a positive integer")
    seed = p.setdefault("master_seed", 0)
    if not (isinstance(seed, int) and 0 <= seed < 2 ** 64):
        raise PlanError("master_seed must be a non-negative 64-bit integer")
    p.setdefault("shard_size", 250)
    if not (isinstance(p["shard_size"], int) and p["shard_size"] >= 1):
        raise PlanError("shard_size must be a positive integer")
    eng = p.setdefault("engine", {})
    eng.setdefault("mode", mode)
    if eng["mode"] != mode:
        raise PlanError("engine.mode disagrees with mode")
    try:
        EngineConfig(**eng)
    except (TypeError, ValueError) as exc:
        raise PlanError(f"engine: {exc}") from None
    if mode == WHOLE_PLANE and eng.get("disc_radius") is None:
        raise PlanError("whole-plane plans need engine.disc_radius")
    q = p.setdefault("queries", {})
    if kind == "hits":
        pts = q.get("points")
        sets = q.get("radius_sets")
        if not pts or not sets:
            raise PlanError("hits plans need queries.points and queries.radius_sets")
        zs = [complex(float(a), float(b)) for a, b in pts]
        for rs in sets:
            if len(rs) != len(zs):
                raise PlanError("each radius set needs one radius per point")
            try:
                make_specs(zs, rs, mode)
            except ValueError as exc:
                raise PlanError(f"point specs: {exc}") from None
        for c in q.setdefault("circles", []):
            if not (isinstance(c, (list, tuple)) and len(c) == 3 and float(c[2]) > 0):
                raise PlanError("queries.circles entries are [x, y, radius] with radius > 0")
        if mode == WHOLE_PLANE:
            R = max(abs(z) for z in zs)
            if eng["disc_radius"] < 4 * R:
                raise PlanError(f"disc_radius must be >= 4 * max|z| = {4 * R}")
    else:
        m = q.setdefault("minkowski", {})
        rl = m.get("r_list")
        if not rl or any(not (r > 0) for r in rl):
            raise PlanError("minkowski plans need a positive queries.minkowski.r_list")
        m.setdefault("n_max", 3)
        if not (1 <= m["n_max"] <= 4):
            raise PlanError("n_max must lie in 1..4")
        m.setdefault("grid_factor", 8.0)
        if m["grid_factor"] < 4:
            raise PlanError("grid_factor must be >= 4 (grid_h <= r/4)")
        m.setdefault("region", None)
        if mode == WHOLE_PLANE and m["region"] is None:
            raise PlanError("whole-plane Minkowski plans need an explicit region")
        region_from_dict(m["region"])
    return p


def _r_min(plan) -> float:
    q = plan["queries"]
    if plan["kind"] == "hits":
        return float(min(min(rs) for rs in q["radius_sets"]))
    return float(min(q["minkowski"]["r_list"]))


def _hit_task(task):
    kappa, eng, seed, pts, r_min, circles = task
    try:
        tr = simulate_sample(kappa, EngineConfig(**eng), seed, pts, r_min)
        row = [float(x) for x in np.atleast_1d(dist_to_trace(tr, pts))]
        if circles:
            rec = crossing_times(tr, circles)
            row += [math.inf if t is None else t for t in rec.times]
        return row, ""
    except Exception as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _mink_task(task):
    try:
        return _contents_one(task), ""
    except Exception as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _columns(plan):
    if plan["kind"] == "hits":
        n = len(plan["queries"]["points"])
        m = len(plan["queries"].get("circles", []))
        return [f"d{k}" for k in range(n)] + [f"tau{j}" for j in range(m)]
    return [f"c{j}" for j in range(len(plan["queries"]["minkowski"]["r_list"]))]


def _compute_shard(plan, lo, hi, workers):
    kappa = float(plan["kappa"])
    seeds = [sample_seed(plan["master_seed"], i) for i in range(lo, hi)]
    if plan["kind"] == "hits":
        pts = np.array([complex(a, b) for a, b in plan["queries"]["points"]])
        r_min = _r_min(plan)
        circles = [(complex(x, y), float(r)) for x, y, r in plan["queries"].get("circles", [])]
        tasks = [(kappa, plan["engine"], s, pts, r_min, circles) for s in seeds]
        out = map_samples(_hit_task, tasks, workers)
    else:
        m = plan["queries"]["minkowski"]
        eng = plan["engine"]
        r_list = [float(r) for r in m["r_list"]]
        region = region_from_dict(m["region"])
        if plan["mode"] == RADIAL and region is None:
            region = Disc(0j, 1.0)
        N = eng.get("disc_radius")
        scale = 1.0 if plan["mode"] == RADIAL else float(N)
        horizon = eng.get("horizon") or default_horizon(min(r_list), scale)
        h_trace = m.get("h_trace") or min(r_list) / 2.0
        d = exponents(kappa).d
        tasks = [(kappa, s, r_list, float(m["grid_factor"]), h_trace, horizon, eng.get("dt", 0.01),
                  plan["mode"], N, region, d) for s in seeds]
        out = map_samples(_mink_task, tasks, workers)
    ncol = len(_columns(plan))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample_index", "seed", *_columns(plan), "status"])
    for i, s, (vals, err) in zip(range(lo, hi), seeds, out):
        if vals is None:
            w.writerow([i, s, *(["nan"] * ncol), "error: " + err.replace("\n", " ")])
        else:
            w.writerow([i, s, *(repr(float(v)) for v in vals), "ok"])
    return buf.getvalue()


def read_shard(path: Path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], rows[1:]
    idx = np.array([int(r[0]) for r in body], dtype=np.int64)
    vals = np.array([[float(x) for x in r[2:-1]] for r in body], dtype=float).reshape(len(body), len(head) - 3)
    status = [r[-1] for r in body]
    return idx, vals, status


@dataclass
class CampaignResult:
    directory: Path
    complete: bool
    aggregate: dict | None
    failed: list = field(default_factory=list)
    computed_shards: int = 0


def _shard_ranges(plan):
    n, k = plan["samples"], plan["shard_size"]
    return [(lo, min(lo + k, n)) for lo in range(0, n, k)]


def _shard_ok(path: Path, lo, hi) -> bool:
    if not path.exists():
        return False
    try:
        idx, _, _ = read_shard(path)
    except (OSError, ValueError, IndexError):
        return False
    return idx.tolist() == list(range(lo, hi))


def run_campaign(plan: dict, out_dir, workers=1, max_shards=None, retry_failed=False) -> CampaignResult:
    """Run (or resume) a campaign.  ``max_shards`` caps the number of newly
    computed shards, which is how interruption is simulated in tests."""
    plan = normalize_plan(plan)
    out = Path(out_dir)
    (out / "shards").mkdir(parents=True, exist_ok=True)
    man_path = out / "manifest.json"
    if man_path.exists():
        old = json.loads(man_path.read_text())
        if old.get("plan") != plan:
            raise PlanError(f"{out} holds a campaign for a different plan")
        manifest = old
    else:
        manifest = {
            "plan": plan,
            "seed_scheme": "numpy SeedSequence(master_seed, spawn_key=(sample_index,)), 64-bit state",
            "code_version": __version__,
            "backend": backend(),
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
    computed = 0
    for lo, hi in _shard_ranges(plan):
        path = out / "shards" / f"{lo // plan['shard_size']:06d}.csv"
        if _shard_ok(path, lo, hi):
            if not retry_failed:
                continue
            _, _, status = read_shard(path)
            if all(s == "ok" for s in status):
                continue
        if max_shards is not None and computed >= max_shards:
            manifest["updated"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
            _atomic_write(man_path, dumps(manifest))
            return CampaignResult(out, False, None, computed_shards=computed)
        _atomic_write(path, _compute_shard(plan, lo, hi, workers))
        computed += 1
    manifest["updated"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    _atomic_write(man_path, dumps(manifest))
    agg = aggregate_campaign(out, plan)
    _atomic_write(out / "aggregate.json", dumps(agg))
    return CampaignResult(out, True, agg, failed=agg["failed_samples"], computed_shards=computed)


def load_raw(out_dir, plan):
    out = Path(out_dir)
    idx_all, vals_all, status_all = [], [], []
    for lo, hi in _shard_ranges(plan):
        path = out / "shards" / f"{lo // plan['shard_size']:06d}.csv"
        idx, vals, status = read_shard(path)
        idx_all.append(idx)
        vals_all.append(vals)
        status_all += status
    return np.concatenate(idx_all), np.vstack(vals_all), status_all


def hit_partial(dist, radius_sets) -> dict:
    """Integer hit counts of one block of samples; merged by addition."""
    dist = np.asarray(dist, dtype=float)
    out = {"n": int(dist.shape[0]), "joint": [], "marginal": []}
    for rs in radius_sets:
        rs = np.asarray(rs, dtype=float)
        hit = dist < rs[None, :]
        out["joint"].append(int(np.count_nonzero(np.all(hit, axis=1))))
        out["marginal"].append([int(x) for x in np.count_nonzero(hit, axis=0)])
    return out


def merge_partials(a: dict, b: dict) -> dict:
    return {
        "n": a["n"] + b["n"],
        "joint": [x + y for x, y in zip(a["joint"], b["joint"])],
        "marginal": [[x + y for x, y in zip(ma, mb)] for ma, mb in zip(a["marginal"], b["marginal"])],
    }


def aggregate_campaign(out_dir, plan) -> dict:
    idx, vals, status = load_raw(out_dir, plan)
    ok = np.array([s == "ok" for s in status], dtype=bool)
    failed = [int(i) for i in idx[~ok]]
    vals = vals[ok]
    agg = {"kind": plan["kind"], "samples_ok": int(ok.sum()), "failed_samples": failed}
    params = exponents(plan["kappa"])
    if plan["kind"] == "hits":
        zs = [complex(a, b) for a, b in plan["queries"]["points"]]
        sets = plan["queries"]["radius_sets"]
        taus = vals[:, len(zs):]
        vals = vals[:, :len(zs)]
        part = hit_partial(vals, sets)
        n = part["n"]
        rows = []
        for rs, k, marg in zip(sets, part["joint"], part["marginal"]):
            lo, hi = wilson_interval(k, n) if n else (0.0, 1.0)
            rows.append({
                "radii": [float(r) for r in rs],
                "hits": k,
                "p_hat": k / n if n else float("nan"),
                "lo": lo,
                "hi": hi,
                "marginal_hits": marg,
                "kernel": bound_kernel(params, make_specs(zs, rs, plan["mode"])),
            })
        agg["sweep"] = rows
        circ = []
        for c, col in zip(plan["queries"].get("circles", []), taus.T):
            k = int(np.count_nonzero(np.isfinite(col)))
            lo, hi = wilson_interval(k, n) if n else (0.0, 1.0)
            circ.append({"circle": [float(v) for v in c], "hits": k,
                         "frequency": k / n if n else float("nan"), "lo": lo, "hi": hi})
        if circ:
            agg["circles"] = circ
    else:
        m = plan["queries"]["minkowski"]
        tab = moments_from_contents(vals, m["r_list"], m["n_max"], plan["master_seed"])
        agg["r_list"] = [float(r) for r in m["r_list"]]
        agg["moments"] = {str(n): tab.moments[n] for n in tab.moments}
        agg["intervals"] = {str(n): [list(iv) for iv in tab.intervals[n]] for n in tab.intervals}
        agg["jensen_ok"] = tab.jensen_ok()
        agg["running_min_mean_content"] = [float(x) for x in np.minimum.accumulate(tab.moments[1])]
    return agg


def load_distances(out_dir, plan=None):
    """Per-sample distance matrix of a finished hits campaign (failed rows dropped)."""
    out = Path(out_dir)
    if plan is None:
        plan = json.loads((out / "manifest.json").read_text())["plan"]
    _, vals, status = load_raw(out, plan)
    ok = np.array([s == "ok" for s in status], dtype=bool)
    return vals[ok][:, :len(plan["queries"]["points"])]
