"""Bounded model finding and countermodel search.

Models are visited in a fixed order: ascending (worlds, entities), then
frames of the class in canonical order, then existsAt tables, then
interpretations of the signature symbols, all in canonical carrier order.
A (frame, existsAt) pair is a *static part*; everything a goal needs beyond
it comes from the interpretation.

Goals that mention neither the interpretation nor the definitions are
evaluated once per static part.  Where such a goal holds, the
interpretations of that part are skipped for it; where it fails, any model
of the axioms in that part is a countermodel.  This is exact.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .carriers import (DEFAULT_CAP, Dims, Value, carrier_size, enumerate_carrier, index_of, raw_to_json,
                       random_value, within_cap)
from .errors import BudgetExhausted, CarrierTooLarge
from .evaluator import Runtime, compile_term, evaluate
from .model import FrameClass, Model, enumerate_frames, model_to_json
from .syntax import parse_term
from .terms import Lam, Prim, Quant, Sym, children, symbols_of
from .types import GAMMA, SIGMA, Fun
from .variants import Goal, Schema, VariantSpec, build_variant

VALID = "ValidWithinBounds"
COUNTERMODEL = "Countermodel"
WITNESS = "ConsistencyWitness"
NO_MODEL = "NoModelWithinBounds"
UNKNOWN = "UnknownSampled"
TAGS = (VALID, COUNTERMODEL, WITNESS, NO_MODEL, UNKNOWN)

DEFAULT_BUDGET = int(os.environ.get("IHOML_BUDGET", 10**8))
SCHEMA_SAMPLES = 10**5
STRATEGIES = ("exhaustive", "randomized", "auto")

# Stand-in for A3 when its third-order quantifier is not enumerable.
_T2_POSTULATE = {"scott": "valid[P G]"}


@dataclass(frozen=True)
class Bounds:
    """Search bounds.  ``budget`` counts candidate interpretations evaluated."""

    max_worlds: int = 2
    max_entities: int = 1
    carrier_cap: int = DEFAULT_CAP
    strategy: str = "auto"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    time_limit: float = None
    samples: int = SCHEMA_SAMPLES
    prune: bool = False
    part_limit: int = 1 << 12
    dims: tuple = None
    workers: int = 1
    local_search: bool = True

    def __post_init__(self):
        if self.max_worlds < 1 or self.max_entities < 1:
            raise ValueError("bounds must be positive")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {', '.join(STRATEGIES)}")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def dims_order(self) -> list:
        """(worlds, entities) pairs in search order."""
        if self.dims is not None:
            return sorted(tuple(d) for d in self.dims)
        return [(w, e) for w in range(1, self.max_worlds + 1) for e in range(1, self.max_entities + 1)]


@dataclass
class Verdict:
    tag: str
    goal: str = None
    model: Model = None
    failing: dict = None
    sampled: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.model is not None

    def to_json(self) -> dict:
        out = {"tag": self.tag, "goal": self.goal, "sampled": self.sampled, "stats": self.stats}
        if self.model is not None:
            out["model"] = model_to_json(self.model)
            out["failing"] = self.failing
        return out

    def summary(self) -> str:
        text = self.tag
        if self.model is not None:
            text += f" ({self.model.worlds} worlds, {self.model.entities} entities)"
        if self.sampled:
            text += " [sampled]"
        return text


# -- compiled per-dims checker

def _needed_defs(term, variant) -> tuple:
    """Definition names ``term`` depends on, in definition order."""
    defs = {name: t for name, _, t in variant.definitions}
    need, todo = set(), set(symbols_of(term)) & set(defs)
    while todo:
        n = todo.pop()
        if n not in need:
            need.add(n)
            todo |= set(symbols_of(defs[n])) & set(defs)
    return tuple(name for name, _, _ in variant.definitions if name in need)


def _reads_existence(t) -> bool:
    """Does ``t`` depend on existsAt, directly or through an actualist quantifier?"""
    if isinstance(t, Sym):
        return t.name == "existsAt"
    if isinstance(t, Quant):
        return t.kind in ("forallE", "existsE") or _reads_existence(t.body)
    return any(_reads_existence(c) for c in children(t))


def _strip_valid(t):
    return t.args[0] if isinstance(t, Prim) and t.op == "valid" else None


class _Checker:
    """Definitions, axioms and goals compiled for one size."""

    def __init__(self, variant: VariantSpec, goals, dims: Dims, cap: int):
        self.variant = variant
        self.dims = dims
        sig = variant.full_signature()
        self.sig = sig
        self.interp_syms = tuple(sorted(variant.signature))
        self.defs = {name: compile_term(t, (), sig, dims, cap) for name, _, t in variant.definitions}
        self.axiom_mode = {}
        self.axioms = []
        for name, t in variant.axioms:
            try:
                comp = compile_term(t, (), sig, dims, cap)
            except CarrierTooLarge:
                if name != "A3" or variant.name not in _T2_POSTULATE:
                    raise
                t = parse_term(_T2_POSTULATE[variant.name], sig)
                comp = compile_term(t, (), sig, dims, cap)
                name = "T2(postulated)"
                self.axiom_mode["A3"] = "replaced by postulated T2"
            inst = _Instances(t, sig, dims, cap) if _strip_valid(t) is not None else None
            self.axioms.append((name, comp, _needed_defs(t, variant), inst))
        self.axiom_names = tuple(a[0] for a in self.axioms)
        self.goals = {}
        dynamic = set(self.interp_syms) | set(self.defs)
        for g in goals:
            self.goals[g.name] = _GoalCheck(g, sig, dims, cap, variant, dynamic)

    def bind(self, rt, interp: dict):
        rt.syms = dict(interp)

    def ensure(self, rt, names):
        syms = rt.syms
        for n in names:
            if n not in syms:
                syms[n] = self.defs[n].fn(rt, [None] * self.defs[n].nslots)

    def axioms_hold(self, rt) -> bool:
        for _, comp, need, _ in self.axioms:
            if need:
                self.ensure(rt, need)
            if not comp.fn(rt, [None] * comp.nslots):
                return False
        return True

    def score(self, rt) -> float:
        """Axioms satisfied in order, plus the satisfied fraction of the first failing one's instances."""
        s = 0.0
        for _, comp, need, inst in self.axioms:
            if need:
                self.ensure(rt, need)
            if comp.fn(rt, [None] * comp.nslots):
                s += 1
                continue
            if inst is not None:
                s += inst.fraction(rt)
            return s
        return s


class _Instances:
    """An axiom ``valid[forall X1 ... forall Xk. body]`` split into per-world instances."""

    LIMIT = 4096

    def __init__(self, term, sig, dims, cap):
        body = _strip_valid(term)
        ctx = []
        total = 1
        while (isinstance(body, Quant) and body.kind == "forall" and isinstance(body.body, Lam)
               and within_cap(body.ty, dims, cap) and total * carrier_size(body.ty, dims) <= self.LIMIT):
            ctx.append((body.body.var, body.ty))
            total *= carrier_size(body.ty, dims)
            body = body.body.body
        self.comp = compile_term(body, tuple(ctx), sig, dims, cap)
        self.tuples = list(itertools.product(*(enumerate_carrier(ty, dims, cap) for _, ty in ctx)))
        self.total = len(self.tuples) * dims.worlds

    def fraction(self, rt) -> float:
        pad = [None] * (self.comp.nslots - (len(self.tuples[0]) if self.tuples else 0))
        ok = 0
        for args in self.tuples:
            ok += sum(self.comp.fn(rt, list(args) + pad))
        return ok / self.total


class _GoalCheck:
    def __init__(self, goal: Goal, sig, dims, cap, variant, dynamic):
        self.goal = goal
        self.name = goal.name
        self.sampled = False
        f = goal.formula
        if isinstance(f, Schema):
            self.schema = f
            self.sampled = not within_cap(f.ty, dims, cap)
            if self.sampled:
                self.instance = compile_term(f.body.body, ((f.body.var, f.ty),), sig, dims, cap)
                term = f.body
            else:
                term = f.as_term()
                self.instance = compile_term(f.body.body, ((f.body.var, f.ty),), sig, dims, cap)
        else:
            self.schema = None
            term = f
        self.term = term
        self.comp = None if self.sampled else compile_term(term, (), sig, dims, cap)
        self.needs = _needed_defs(term, variant)
        self.static = not (symbols_of(term) & dynamic)
        self.world_only = self.static and not _reads_existence(term)

    def holds(self, rt, checker, seed_key=None, samples=SCHEMA_SAMPLES) -> bool:
        if self.needs:
            checker.ensure(rt, self.needs)
        if not self.sampled:
            return bool(self.comp.fn(rt, [None] * self.comp.nslots))
        rng = random.Random(f"{seed_key}:{self.name}")
        inst = self.instance
        for _ in range(samples):
            v = random_value(self.schema.ty, checker.dims, rng)
            env = [v] + [None] * (inst.nslots - 1)
            if not inst.fn(rt, env):
                return False
        return True


# -- interpretation spaces

class _Space:
    """Interpretations of the signature for one static part.

    Every interpreted symbol has type ``a => s``; its table is a tuple over
    the carrier of ``a`` of per-world truth tuples.  With ``components`` the
    per-world tuple is constant on each block (A4 pruning).
    """

    def __init__(self, variant, dims: Dims, components=None):
        self.dims = dims
        self.syms = []
        for name, ty in sorted(variant.signature.items()):
            if not (isinstance(ty, Fun) and ty.cod == SIGMA):
                raise NotImplementedError(f"interpreted symbol {name} must have a type ending in s")
            self.syms.append((name, ty, carrier_size(ty.dom, dims)))
        nW = dims.worlds
        blocks = components or [[w] for w in range(nW)]
        blocks = sorted((sorted(b) for b in blocks), key=lambda b: b[0])
        self.blocks = blocks
        world_block = [0] * nW
        for i, b in enumerate(blocks):
            for w in b:
                world_block[w] = i
        self.world_block = world_block
        nb = len(blocks)
        self.rows = [tuple(bits[world_block[w]] for w in range(nW))
                     for bits in itertools.product((False, True), repeat=nb)]
        self.nbits = sum(n for _, _, n in self.syms) * nb
        self.size = 2 ** self.nbits

    def all(self):
        per_sym = [itertools.product(self.rows, repeat=n) for _, _, n in self.syms]
        names = [name for name, _, _ in self.syms]
        if len(per_sym) == 1:
            name = names[0]
            for table in per_sym[0]:
                yield {name: table}
        else:
            for combo in itertools.product(*(list(p) for p in per_sym)):
                yield dict(zip(names, combo))

    def decode(self, bits):
        out, pos, nb = {}, 0, len(self.blocks)
        for name, _, n in self.syms:
            rows = []
            for _ in range(n):
                chunk = bits[pos:pos + nb]
                rows.append(tuple(chunk[self.world_block[w]] for w in range(self.dims.worlds)))
                pos += nb
            out[name] = tuple(rows)
        return out

    def random_bits(self, rng):
        return [rng.random() < 0.5 for _ in range(self.nbits)]


# -- the search loop

def _static_parts(dims: Dims, frame_class):
    frames = list(enumerate_frames(dims.worlds, frame_class))
    exists = enumerate_carrier(GAMMA, dims)
    return frames, exists


def _prunable(variant, frame_class) -> bool:
    return "A4" in variant.axiom_names() and FrameClass.parse(frame_class) is not FrameClass.K


@dataclass
class _Task:
    variant: VariantSpec
    goals: tuple
    worlds: int
    entities: int
    frame_class: str
    bounds: Bounds
    part_range: tuple
    mode: str          # "exhaustive" or "randomized"
    per_part: int      # sample allotment for randomized parts
    find: bool         # model finding: stop at the first axiom model
    budget: int        # hard cap on candidates for this task


def _run_task(task: _Task) -> dict:
    """Search a range of static parts; pure in its arguments."""
    variant, bounds = task.variant, task.bounds
    dims = Dims(task.entities, task.worlds)
    checker = _Checker(variant, task.goals, dims, bounds.carrier_cap)
    frames, exists = _static_parts(dims, task.frame_class)
    prune = bounds.prune and _prunable(variant, task.frame_class)
    open_goals = [g.name for g in task.goals]
    hits = {}           # goal -> (part, rank, interp, failing)
    witness = None
    stats = {"evaluated": 0, "axiom_models": 0, "parts": 0, "parts_sampled": 0, "pruned": False}
    frame_static = {}   # (frame index, goal) -> bool for goals not reading existsAt
    start = time.monotonic()
    lo, hi = task.part_range
    for part in range(lo, hi):
        if not open_goals and not (task.find and witness is None):
            break
        fi, ei = divmod(part, len(exists))
        frame = frames[fi]
        model = Model(frame, dims.entities, exists[ei], ())
        rt = Runtime(model)
        stats["parts"] += 1
        # static goals first
        need_models = []         # goals needing any axiom model here
        dynamic = []
        for name in open_goals:
            gc = checker.goals[name]
            if gc.static:
                key = (fi, name)
                if gc.world_only and key in frame_static:
                    ok = frame_static[key]
                else:
                    ok = gc.holds(rt, checker, f"{bounds.seed}:{dims}:{part}", bounds.samples)
                    if gc.world_only:
                        frame_static[key] = ok
                if not ok:
                    need_models.append(name)
            else:
                dynamic.append(name)
        if not need_models and not dynamic and not (task.find and witness is None):
            continue
        comps = frame.components() if prune else None
        space = _Space(variant, dims, comps)
        if comps is not None and len(comps) < dims.worlds:
            stats["pruned"] = True
        exhaustive = task.mode == "exhaustive" or (
            task.mode == "auto-part" and space.size <= min(bounds.part_limit, task.per_part))
        if exhaustive:
            candidates = ((interp, None) for interp in space.all())
        else:
            stats["parts_sampled"] += 1
            candidates = _local_search(checker, rt, space, random.Random(f"{bounds.seed}:{dims}:{part}"),
                                       task.per_part, bounds.local_search)
        for rank, (interp, known) in enumerate(candidates):
            stats["evaluated"] += 1
            if stats["evaluated"] > task.budget:
                stats["evaluated"] -= 1
                stats["budget_exhausted"] = True
                return {"hits": hits, "witness": witness, "stats": stats}
            if bounds.time_limit is not None and stats["evaluated"] % 256 == 0 \
                    and time.monotonic() - start > bounds.time_limit:
                stats["timed_out"] = True
                return {"hits": hits, "witness": witness, "stats": stats}
            checker.bind(rt, interp)
            if known is False or (known is None and not checker.axioms_hold(rt)):
                continue
            stats["axiom_models"] += 1
            if task.find and witness is None:
                witness = (part, rank, interp)
            for name in need_models:
                if name in open_goals:
                    hits[name] = (part, rank, interp)
                    open_goals.remove(name)
            for name in list(dynamic):
                if name in open_goals and not checker.goals[name].holds(
                        rt, checker, f"{bounds.seed}:{dims}:{part}:{rank}", bounds.samples):
                    hits[name] = (part, rank, interp)
                    open_goals.remove(name)
                    dynamic.remove(name)
            if not need_models and not dynamic and not (task.find and witness is None):
                break
            need_models = [n for n in need_models if n in open_goals]
            if not need_models and not dynamic and not (task.find and witness is None):
                break
    return {"hits": hits, "witness": witness, "stats": stats}


def _local_search(checker, rt, space, rng, budget, local):
    """Yield (interpretation, is_model) pairs from randomized restarts and local moves.

    A move flips one random bit; if that does not raise the score, the best
    second flip on top of it is tried (the axioms often couple bits in pairs,
    e.g. a property and its complement).  Restarts after a model is reached or
    after ``2 * nbits`` moves without improvement.
    """
    produced = 0
    top = len(checker.axioms)
    n = space.nbits

    def probe(bits):
        nonlocal produced
        produced += 1
        interp = space.decode(bits)
        checker.bind(rt, interp)
        return interp, checker.score(rt)

    while produced < budget:
        bits = space.random_bits(rng)
        interp, cur = probe(bits)
        yield interp, cur == top
        if not local or n == 0:
            continue
        stale = 0
        while produced < budget and stale < 2 * n and cur < top:
            i = rng.randrange(n)
            bits[i] = not bits[i]
            interp, s = probe(bits)
            yield interp, s == top
            if s > cur:
                cur, stale = s, 0
                continue
            best_j, best_s = None, cur
            for j in rng.sample(range(n), n):
                if j == i or produced >= budget:
                    continue
                bits[j] = not bits[j]
                interp, s2 = probe(bits)
                bits[j] = not bits[j]
                yield interp, s2 == top
                if s2 > best_s:
                    best_j, best_s = j, s2
            if best_j is None:
                bits[i] = not bits[i]
                stale += 1
            else:
                bits[best_j] = not bits[best_j]
                cur, stale = best_s, 0


def space_size(variant: VariantSpec, dims: Dims, frame_class, prune=False) -> dict:
    """Exact number of models at one size: frames, existsAt tables and interpretations."""
    frames, exists = _static_parts(dims, frame_class)
    interps = 0
    for frame in frames:
        comps = frame.components() if prune and _prunable(variant, frame_class) else None
        interps += _Space(variant, dims, comps).size
    return {"frames": len(frames), "exists": len(exists), "models": interps * len(exists)}


def enumerate_models(variant, bounds: Bounds, frame_class=FrameClass.KB):
    """All models within bounds in search order (pruned when ``bounds.prune``)."""
    variant = _as_variant(variant)
    for w, e in bounds.dims_order():
        dims = Dims(e, w)
        frames, exists = _static_parts(dims, frame_class)
        prune = bounds.prune and _prunable(variant, frame_class)
        for frame in frames:
            space = _Space(variant, dims, frame.components() if prune else None)
            for ex in exists:
                for interp in space.all():
                    yield _materialize(variant, frame, dims, ex, interp)


def _materialize(variant, frame, dims, exists, interp) -> Model:
    vals = tuple(sorted((name, Value(variant.signature[name], raw)) for name, raw in interp.items()))
    return Model(frame, dims.entities, exists, vals)


def _as_variant(variant) -> VariantSpec:
    return build_variant(variant) if isinstance(variant, str) else variant


# -- public entry points

def check_goals(variant, goal_names, bounds: Bounds = Bounds(), frame_class=FrameClass.KB,
                find: bool = False) -> dict:
    """One shared search for several goals; returns {goal: Verdict} (plus "__model__" when ``find``)."""
    variant = _as_variant(variant)
    frame_class = FrameClass.parse(frame_class)
    goals = tuple(variant.goals[n] if isinstance(n, str) else n for n in goal_names)
    results = {}
    stats = {"strategy": bounds.strategy, "seed": bounds.seed, "budget": bounds.budget,
             "frame_class": frame_class.value, "sizes": [], "evaluated": 0, "axiom_models": 0,
             "parts": 0, "parts_sampled": 0, "pruned": False, "space": 0}
    open_goals = list(goals)
    witness = None
    sampled_any = False
    schema_sampled = set()
    axiom_modes = {}
    budget_left = bounds.budget
    for w, e in bounds.dims_order():
        if not open_goals and not (find and witness is None):
            break
        dims = Dims(e, w)
        size = space_size(variant, dims, frame_class, prune=False)
        stats["space"] += size["models"]
        checker = _Checker(variant, open_goals, dims, bounds.carrier_cap)
        for name, mode in checker.axiom_mode.items():
            axiom_modes[f"{name}@{w}x{e}"] = mode
        for g in open_goals:
            if checker.goals[g.name].sampled:
                schema_sampled.add(g.name)
        frames, exists = _static_parts(dims, frame_class)
        nparts = len(frames) * len(exists)
        mode, per_part = _plan(bounds, size["models"], budget_left, nparts)
        if mode != "exhaustive":
            sampled_any = True
        stats["sizes"].append({"worlds": w, "entities": e, "models": size["models"], "mode": mode})
        out = _dispatch(variant, open_goals, w, e, frame_class, bounds, nparts, mode, per_part, find, budget_left)
        st = out["stats"]
        for k in ("evaluated", "axiom_models", "parts", "parts_sampled"):
            stats[k] += st[k]
        stats["pruned"] |= st["pruned"]
        budget_left -= st["evaluated"]
        for flag in ("timed_out", "budget_exhausted"):
            if st.get(flag):
                stats[flag] = True
                sampled_any = True
        if st["parts_sampled"]:
            sampled_any = True
        for name, hit in sorted(out["hits"].items()):
            part, rank, interp = hit
            fi, ei = divmod(part, len(exists))
            model = _materialize(variant, frames[fi], dims, exists[ei], interp)
            results[name] = (model, checker.axiom_names)
        open_goals = [g for g in open_goals if g.name not in out["hits"]]
        if find and witness is None and out["witness"] is not None:
            part, rank, interp = out["witness"]
            fi, ei = divmod(part, len(exists))
            witness = (_materialize(variant, frames[fi], dims, exists[ei], interp), checker.axiom_names)
        if stats.get("timed_out") or stats.get("budget_exhausted"):
            break
    if axiom_modes:
        stats["axiom_modes"] = axiom_modes
    verdicts = {}
    for g in goals:
        gst = dict(stats)
        if g.name in schema_sampled:
            gst["schema_instances"] = f"sampled {bounds.samples}"
        if g.name in results:
            model, axiom_names = results[g.name]
            failing = verify_countermodel(variant, g, model, axiom_names)
            verdicts[g.name] = Verdict(COUNTERMODEL, g.name, model, failing, False, gst)
        else:
            unsound = sampled_any or stats["pruned"] or g.name in schema_sampled
            verdicts[g.name] = Verdict(UNKNOWN if unsound else VALID, g.name, None, None, unsound, gst)
    if find:
        if witness is not None:
            model, axiom_names = witness
            verify_model(variant, model, axiom_names)
            verdicts["__model__"] = Verdict(WITNESS, None, model, None, False, dict(stats))
        else:
            tag = UNKNOWN if sampled_any or stats["pruned"] else NO_MODEL
            verdicts["__model__"] = Verdict(tag, None, None, None, tag == UNKNOWN, dict(stats))
    return verdicts


def _plan(bounds, total, budget_left, nparts):
    if bounds.strategy == "exhaustive":
        if total > budget_left:
            raise BudgetExhausted(f"{total} models exceed the remaining budget of {budget_left}")
        return "exhaustive", 0
    if bounds.strategy == "auto" and total <= budget_left:
        return "exhaustive", 0
    per_part = max(1, budget_left // max(1, nparts))
    return ("randomized" if bounds.strategy == "randomized" else "auto-part"), per_part


def _dispatch(variant, goals, w, e, frame_class, bounds, nparts, mode, per_part, find, budget):
    workers = max(1, bounds.workers)
    if workers == 1 or nparts < 2:
        return _run_task(_Task(variant, tuple(goals), w, e, frame_class.value, bounds, (0, nparts),
                               mode, per_part, find, budget))
    step = math.ceil(nparts / workers)
    tasks = [_Task(variant, tuple(goals), w, e, frame_class.value, bounds, (lo, min(nparts, lo + step)),
                   mode, per_part, find, budget // math.ceil(nparts / step)) for lo in range(0, nparts, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        outs = list(pool.map(_run_task, tasks))
    return _merge(outs)


def _merge(outs) -> dict:
    """Smallest (part, rank) wins, so the result does not depend on the partition."""
    hits, witness = {}, None
    stats = {"evaluated": 0, "axiom_models": 0, "parts": 0, "parts_sampled": 0, "pruned": False}
    for out in outs:
        for name, hit in out["hits"].items():
            if name not in hits or hit[:2] < hits[name][:2]:
                hits[name] = hit
        if out["witness"] is not None and (witness is None or out["witness"][:2] < witness[:2]):
            witness = out["witness"]
        for k in ("evaluated", "axiom_models", "parts", "parts_sampled"):
            stats[k] += out["stats"][k]
        stats["pruned"] |= out["stats"]["pruned"]
        for flag in ("timed_out", "budget_exhausted"):
            if out["stats"].get(flag):
                stats[flag] = True
    return {"hits": hits, "witness": witness, "stats": stats}


def check_entailment(variant, goal_name: str, bounds: Bounds = Bounds(), frame_class=FrameClass.KB) -> Verdict:
    variant = _as_variant(variant)
    if goal_name not in variant.goals:
        raise KeyError(f"{variant.name} has no goal {goal_name}")
    try:
        return check_goals(variant, [goal_name], bounds, frame_class)[goal_name]
    except BudgetExhausted as err:
        return Verdict(UNKNOWN, goal_name, None, None, True, {"reason": str(err)})


def find_model(variant, bounds: Bounds = Bounds(), frame_class=FrameClass.KB) -> Verdict:
    """First model of the axioms in search order."""
    variant = _as_variant(variant)
    return check_goals(variant, [], bounds, frame_class, find=True)["__model__"]


# -- direct re-verification

def definitions_of(variant: VariantSpec, model: Model) -> dict:
    """Evaluate every definition on ``model`` with the plain evaluator."""
    extra = {}
    for name, _, term in variant.definitions:
        extra[name] = evaluate(term, model=model, extra=extra)
    return extra


def _axiom_terms(variant, names):
    terms = dict(variant.axioms)
    sig = variant.full_signature()
    out = []
    for name in names:
        if name == "T2(postulated)":
            out.append((name, parse_term(_T2_POSTULATE[variant.name], sig)))
        else:
            out.append((name, terms[name]))
    return out


def verify_model(variant: VariantSpec, model: Model, axiom_names=None) -> None:
    """Raise AssertionError unless every axiom holds on ``model``."""
    extra = definitions_of(variant, model)
    for name, term in _axiom_terms(variant, axiom_names or variant.axiom_names()):
        if not evaluate(term, model=model, extra=extra).raw:
            raise AssertionError(f"reported model violates {name}: {model.describe()}")


def verify_countermodel(variant: VariantSpec, goal: Goal, model: Model, axiom_names=None) -> dict:
    """Re-check a countermodel from scratch; return a description of the failing instance."""
    verify_model(variant, model, axiom_names)
    extra = definitions_of(variant, model)
    failing = {}
    f = goal.formula
    if isinstance(f, Schema):
        inst = None
        if within_cap(f.ty, model.dims):
            for raw in enumerate_carrier(f.ty, model.dims):
                if not evaluate(f.instance(Value(f.ty, raw)), model=model, extra=extra).raw:
                    inst = raw
                    break
        else:
            inst = check_schema(f, model, extra=extra).get("counterexample")
        if inst is None:
            raise AssertionError(f"goal {goal.name} holds on the reported countermodel")
        failing["instance"] = raw_to_json(inst)
        term = f.instance(Value(f.ty, inst))
    else:
        term = f
        if evaluate(term, model=model, extra=extra).raw:
            raise AssertionError(f"goal {goal.name} holds on the reported countermodel")
    body = _strip_valid(f.body.body) if isinstance(f, Schema) else _strip_valid(term)
    if body is not None:
        env = {f.body.var: Value(f.ty, inst)} if isinstance(f, Schema) else None
        table = evaluate(body, env=env, model=model, extra=extra).raw
        failing["worlds"] = [w for w, ok in enumerate(table) if not ok]
    return failing


def check_schema(schema: Schema, model: Model, samples: int = SCHEMA_SAMPLES, seed: int = 0,
                 cap: int = DEFAULT_CAP, extra=None) -> dict:
    """Truth of all instances: exhaustive within ``cap``, else ``samples`` seeded instances."""
    extra = extra or {}
    sig = {name: v.ty for name, v in model.interp}
    sig.update({k: v.ty for k, v in extra.items()})
    comp = compile_term(schema.body.body, ((schema.body.var, schema.ty),), sig, model.dims, cap)
    rt = Runtime(model, {k: v.raw for k, v in extra.items()})
    if within_cap(schema.ty, model.dims, cap):
        instances, sampled = enumerate_carrier(schema.ty, model.dims, cap), False
    else:
        rng = random.Random(f"{seed}:{schema.name}")
        instances = (random_value(schema.ty, model.dims, rng) for _ in range(samples))
        sampled = True
    checked = 0
    for raw in instances:
        checked += 1
        if not comp.fn(rt, [raw] + [None] * (comp.nslots - 1)):
            return {"holds": False, "sampled": sampled, "checked": checked, "counterexample": raw,
                    "index": index_of(schema.ty, model.dims, raw)}
    return {"holds": True, "sampled": sampled, "checked": checked, "counterexample": None}


def goal_with_bottom(variant: VariantSpec) -> VariantSpec:
    """The variant with an unsatisfiable axiom appended (no model exists)."""
    return variant.with_axioms(variant.axioms + (("bottom", Prim("valid", (Prim("mfalse"),))),))


_LINE41 = "valid[downb(phi, Q) <-> phi Q]"


def line41_holds(model: Model) -> bool:
    """Does the rigidification claim hold on a model interpreting phi and Q?"""
    claim = parse_term(_LINE41, {"phi": Fun(GAMMA, SIGMA), "Q": GAMMA})
    return bool(evaluate(claim, model=model).raw)


def line41_witness(bounds: Bounds = Bounds(max_worlds=2, max_entities=1)) -> dict:
    """First model (with phi and P interpreted) where downb(phi, P) differs from phi P."""
    phi_ty, p_ty = Fun(GAMMA, SIGMA), GAMMA
    claim = parse_term(_LINE41, {"phi": phi_ty, "Q": p_ty})
    sig = {"phi": phi_ty, "Q": p_ty}
    examined = 0
    for w, e in bounds.dims_order():
        dims = Dims(e, w)
        comp = compile_term(claim, (), sig, dims, bounds.carrier_cap)
        for frame in enumerate_frames(w, FrameClass.K):
            model0 = Model(frame, e, tuple((True,) * w for _ in range(e)), ())
            rt = Runtime(model0)
            for q in enumerate_carrier(p_ty, dims):
                for phi in enumerate_carrier(phi_ty, dims):
                    examined += 1
                    rt.syms = {"phi": phi, "Q": q}
                    if not comp.fn(rt, [None] * comp.nslots):
                        model = Model(frame, e, model0.exists_at,
                                      (("Q", Value(p_ty, q)), ("phi", Value(phi_ty, phi))))
                        if line41_holds(model):
                            raise AssertionError("line-41 witness did not re-verify")
                        return {"model": model, "examined": examined}
    return {"model": None, "examined": examined}


__all__ = ["Bounds", "Verdict", "TAGS", "VALID", "COUNTERMODEL", "WITNESS", "NO_MODEL", "UNKNOWN",
           "check_goals", "check_entailment", "find_model", "check_schema", "enumerate_models", "space_size",
           "verify_model", "verify_countermodel", "definitions_of", "goal_with_bottom", "line41_witness",
           "line41_holds"]
