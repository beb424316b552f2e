"""Check reports and the reproduction suite.

A CheckReport bundles the verdicts of one search configuration.  The suite
runs every row of the expected-verdict table (shipped as package data),
grouping rows that share a configuration into one search.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources

from .model import FrameClass, model_from_json
from .search import (COUNTERMODEL, UNKNOWN, WITNESS, Bounds, Verdict, check_goals, line41_holds, line41_witness,
                     verify_countermodel, verify_model)
from .variants import build_variant

CONSISTENCY = "consistency"
LINE41 = "line41"
CORE = "core"                           # variant name for checks on the bare embedding


def expected_table() -> dict:
    with resources.files("ihoml").joinpath("data/expected_verdicts.json").open() as fh:
        return json.load(fh)


def bounds_from_row(row: dict, seed=None, budget=None) -> Bounds:
    return Bounds(
        max_worlds=row.get("max_worlds", 2), max_entities=row.get("max_entities", 1),
        strategy=row.get("strategy", "auto"), seed=row.get("seed", 0) if seed is None else seed,
        budget=row.get("budget", 10**8) if budget is None else budget,
        samples=row.get("samples", 10**5), prune=row.get("prune", False),
        dims=tuple(tuple(d) for d in row["dims"]) if "dims" in row else None)


def bounds_to_json(b: Bounds) -> dict:
    return {"max_worlds": b.max_worlds, "max_entities": b.max_entities, "dims": [list(d) for d in b.dims_order()],
            "carrier_cap": b.carrier_cap, "strategy": b.strategy, "seed": b.seed, "budget": b.budget,
            "samples": b.samples, "prune": b.prune}


@dataclass
class CheckReport:
    variant: str
    logic: str
    bounds: dict
    verdicts: dict                      # goal -> Verdict
    timings: dict = field(default_factory=dict)

    def to_json(self, deterministic: bool = False) -> dict:
        out = {"variant": self.variant, "logic": self.logic, "bounds": self.bounds,
               "verdicts": {g: v.to_json() for g, v in sorted(self.verdicts.items())}}
        if not deterministic:
            out["timings"] = self.timings
        return out

    def dumps(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_json(deterministic), sort_keys=True, indent=2)


def run_check(variant: str, goals, logic: str, bounds: Bounds) -> CheckReport:
    """Verdicts for ``goals`` (which may include 'consistency' and 'line41')."""
    frame_class = FrameClass.parse(logic)
    goals = list(goals)
    if variant == CORE and set(goals) - {LINE41}:
        raise KeyError(f"the core embedding only has the goal {LINE41}")
    spec = None if variant == CORE else build_variant(variant)
    want_model = CONSISTENCY in goals
    plain = [g for g in goals if g not in (CONSISTENCY, LINE41)]
    t0 = time.perf_counter()
    verdicts = {}
    if plain or want_model:
        res = check_goals(spec, plain, bounds, frame_class, find=want_model)
        for g in plain:
            verdicts[g] = res[g]
        if want_model:
            v = res["__model__"]
            v.goal = CONSISTENCY
            verdicts[CONSISTENCY] = v
    if LINE41 in goals:
        found = line41_witness(bounds)
        if found["model"] is not None:
            verdicts[LINE41] = Verdict(COUNTERMODEL, LINE41, found["model"], {"claim": "downb(phi, Q) <-> phi Q"},
                                       False, {"examined": found["examined"]})
        else:
            verdicts[LINE41] = Verdict("ValidWithinBounds", LINE41, None, None, False,
                                       {"examined": found["examined"]})
    timings = {"seconds": round(time.perf_counter() - t0, 3)}
    return CheckReport(variant, frame_class.value, bounds_to_json(bounds), verdicts, timings)


def verdict_matches(row: dict, verdict: Verdict) -> bool:
    if verdict.tag != row["expect"]:
        return False
    size = row.get("size")
    if size is not None:
        m = verdict.model
        return m is not None and [m.worlds, m.entities] == list(size)
    return True


def _group_key(row):
    keys = ("variant", "logic", "max_worlds", "max_entities", "strategy", "seed", "budget", "samples", "prune")
    return tuple(json.dumps(row.get(k)) for k in keys) + (json.dumps(row.get("dims")),)


def run_suite(variant: str = "all", paper_only: bool = False, seed=None, budget=None, progress=None) -> dict:
    """Run the expected-verdict table; returns {"rows": [...], "reports": [...], "mismatches": n}."""
    table = expected_table()
    rows = [r for r in table["rows"] if variant in ("all", r["variant"]) and (r.get("paper") or not paper_only)]
    groups = {}
    for r in rows:
        groups.setdefault(_group_key(r), []).append(r)
    reports, out_rows = [], []
    observed = {}
    for key, grp in groups.items():
        first = grp[0]
        bounds = bounds_from_row(first, seed, budget)
        goals = list(dict.fromkeys(r["goal"] for r in grp))
        if progress:
            progress(f"{first['variant']} {first['logic']} {', '.join(goals)}")
        rep = run_check(first["variant"], goals, first["logic"], bounds)
        reports.append(rep)
        for r in grp:
            observed[id(r)] = rep.verdicts[r["goal"]]
    mismatches = 0
    for r in rows:
        v = observed[id(r)]
        ok = verdict_matches(r, v)
        mismatches += not ok
        out_rows.append({"variant": r["variant"], "logic": r["logic"], "goal": r["goal"], "claim": r.get("claim", ""),
                         "expected": r["expect"] + (f" {tuple(r['size'])}" if r.get("size") else ""),
                         "observed": v.summary(), "match": ok})
    return {"rows": out_rows, "reports": reports, "mismatches": mismatches}


def suite_to_json(result: dict, deterministic: bool = False) -> str:
    data = {"rows": result["rows"], "mismatches": result["mismatches"],
            "reports": [r.to_json(deterministic) for r in result["reports"]]}
    return json.dumps(data, sort_keys=True, indent=2)


# -- text rendering

def render_verdict(goal: str, v: Verdict) -> str:
    line = f"{goal:<12} {v.tag}"
    if v.model is not None:
        line += f"  ({v.model.worlds} worlds, {v.model.entities} entities)"
    if v.sampled:
        line += "  [sampled: not exhaustive]"
    return line


def render_report(rep: CheckReport, show_models: bool = True) -> str:
    b = rep.bounds
    dims = ", ".join(f"{w}x{e}" for w, e in b["dims"])
    lines = [f"variant {rep.variant}, logic {rep.logic}, sizes (worlds x entities) {dims}, "
             f"strategy {b['strategy']}, seed {b['seed']}, budget {b['budget']}"]
    for goal, v in sorted(rep.verdicts.items()):
        lines.append("  " + render_verdict(goal, v))
        modes = v.stats.get("axiom_modes")
        if modes:
            lines.append("      axioms: " + "; ".join(f"{k} {m}" for k, m in sorted(modes.items())))
        if v.stats.get("schema_instances"):
            lines.append(f"      schema instances: {v.stats['schema_instances']}")
        if show_models and v.model is not None:
            lines.append("      model: " + v.model.describe())
            if v.failing:
                lines.append(f"      failing: {json.dumps(v.failing, sort_keys=True)}")
    return "\n".join(lines)


def render_suite(result: dict) -> str:
    lines = []
    width = max((len(r["goal"]) for r in result["rows"]), default=4)
    for r in result["rows"]:
        mark = "ok  " if r["match"] else "FAIL"
        lines.append(f"{mark} {r['variant']:<9} {r['logic']:<3} {r['goal']:<{width}}  "
                     f"expected {r['expected']:<28} observed {r['observed']}")
    lines.append(f"{len(result['rows']) - result['mismatches']}/{len(result['rows'])} rows match")
    return "\n".join(lines)


# -- reloading

def verdict_from_json(data: dict, variant, logic) -> Verdict:
    model = None
    if "model" in data:
        signature = None if variant is None else dict(variant.signature)
        model = model_from_json(data["model"], FrameClass.parse(logic), signature)
    return Verdict(data["tag"], data.get("goal"), model, data.get("failing"), data.get("sampled", False),
                   data.get("stats", {}))


def report_from_json(data: dict) -> CheckReport:
    spec = None if data["variant"] == CORE else build_variant(data["variant"])
    verdicts = {g: verdict_from_json(v, spec, data["logic"]) for g, v in data["verdicts"].items()}
    return CheckReport(data["variant"], data["logic"], data["bounds"], verdicts, data.get("timings", {}))


def reverify(rep: CheckReport) -> None:
    """Re-check every embedded model by direct evaluation; raises AssertionError on failure."""
    spec = None if rep.variant == CORE else build_variant(rep.variant)
    for goal, v in rep.verdicts.items():
        if v.model is None:
            continue
        if goal == LINE41:
            if line41_holds(v.model):
                raise AssertionError("line41 witness does not falsify the claim")
            continue
        axioms = _axioms_used(spec, v) if v.stats.get("axiom_modes") else None
        if v.tag == WITNESS:
            verify_model(spec, v.model, axioms)
        elif v.tag == COUNTERMODEL:
            failing = verify_countermodel(spec, spec.goals[goal], v.model, axioms)
            if v.failing is not None and failing != v.failing:
                raise AssertionError(f"{goal}: failing instance changed on re-verification")
        elif v.tag == UNKNOWN:
            raise AssertionError(f"{goal}: sampled verdict carries a model")


def _axioms_used(spec, v):
    size = f"{v.model.worlds}x{v.model.entities}"
    replaced = {k.split("@")[0] for k in v.stats["axiom_modes"] if k.endswith("@" + size)}
    return tuple("T2(postulated)" if n in replaced else n for n in spec.axiom_names())
