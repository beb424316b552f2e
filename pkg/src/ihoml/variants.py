"""Axiom and goal catalogs for the Scott, Anderson and Fitting variants.

Everything is written in the surface DSL and parsed (and type checked) at
build time, so the catalogs double as golden files via ``export_dsl``.
Definitions are closed lambda terms referenced from axioms and goals by
symbol name; the evaluator binds them per model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NotApplicable
from .syntax import parse_term, parse_type, print_term, print_type
from .terms import App, Const, Lam, Prim, Quant, Sym, Term
from .typecheck import typecheck
from .types import DELTA, GAMMA, SIGMA, Fun
from .ultrafilters import ultrafilter_pred

VARIANTS = ("scott", "anderson", "fitting")


@dataclass(frozen=True)
class Schema:
    """A goal family: ``body`` is a closed ``ty => o`` lambda, one instance per carrier element."""

    name: str
    ty: object
    body: Lam

    def instance(self, value) -> Term:
        return App(self.body, Const(value))

    def as_term(self) -> Term:
        """All instances at once, as a single HOL quantification."""
        return Quant("all", self.ty, self.body)


@dataclass(frozen=True)
class Goal:
    name: str
    formula: object          # closed o-term or Schema
    note: str = ""

    @property
    def is_schema(self) -> bool:
        return isinstance(self.formula, Schema)

    def term(self) -> Term:
        return self.formula.as_term() if self.is_schema else self.formula


@dataclass(frozen=True)
class VariantSpec:
    name: str
    signature: dict                       # interpreted symbols, i.e. P
    definitions: tuple                    # ((name, type, term), ...) in dependency order
    axioms: tuple                         # ((name, term), ...) in checking order
    goals: dict = field(hash=False)       # name -> Goal
    god: str = "G"
    essence: str = "E"
    necessary_existence: str = "NE"
    sources: dict = field(default_factory=dict, hash=False, compare=False)

    def full_signature(self) -> dict:
        sig = dict(self.signature)
        sig.update((name, ty) for name, ty, _ in self.definitions)
        return sig

    def axiom(self, name) -> Term:
        return dict(self.axioms)[name]

    def axiom_names(self) -> tuple:
        return tuple(name for name, _ in self.axioms)

    def with_axioms(self, axioms) -> "VariantSpec":
        return VariantSpec(self.name, self.signature, self.definitions, tuple(axioms), self.goals,
                           self.god, self.essence, self.necessary_existence, self.sources)

    def without(self, *names) -> "VariantSpec":
        return self.with_axioms((n, t) for n, t in self.axioms if n not in names)

    @property
    def property_type(self):
        return self.signature["P"].dom


# -- DSL sources

_SCOTT_DEFS = (
    ("G", "g", r"\x:e. forall Y:g. P Y -> Y x"),
    ("E", "g => g", r"\Y:g. \x:e. Y x & (forall Z:g. Z x -> box (forallE z. Y z -> Z z))"),
    ("NE", "g", r"\x:e. forall Y:g. E Y x -> box (existsE Y)"),
)

_ANDERSON_DEFS = (
    ("GA", "g", r"\x:e. forall Y:g. P Y <-> box (Y x)"),
    ("EA", "g => g", r"\Y:g. \x:e. forall Z:g. box (Z x) <-> box (forallE z. Y z -> Z z)"),
    ("NEA", "g", r"\x:e. forall Y:g. EA Y x -> box (existsE Y)"),
)

_FITTING_DEFS = (
    ("G", "g", r"\x:e. forall Y:d. P Y -> rigid(Y x)"),
    ("E", "d => g", r"\Y:d. \x:e. rigid(Y x) & (forall Z:d. rigid(Z x) -> box (forallE z. rigid(Y z) -> rigid(Z z)))"),
    ("NE", "g", r"\x:e. forall Y:d. E Y x -> box (existsE z. rigid(Y z))"),
)

_GAMMA_AXIOMS = {
    "A1a": "valid[forall X:g. P (negg X) -> ~P X]",
    "A1b": "valid[forall X:g. ~P X -> P (negg X)]",
    "A2": "valid[forall X:g. forall Y:g. P X & box (forallE z. X z -> Y z) -> P Y]",
    "A3": "valid[forall Z:g => s. forall X:g. (forall Y:g. Z Y -> P Y) & box (forall x:e. X x <-> (forall Y:g. Z Y -> Y x)) -> P X]",
    "A4": "valid[forall X:g. P X -> box (P X)]",
}

_AXIOMS = {
    "scott": (("A1a", _GAMMA_AXIOMS["A1a"]), ("A1b", _GAMMA_AXIOMS["A1b"]), ("A2", _GAMMA_AXIOMS["A2"]),
              ("A3", _GAMMA_AXIOMS["A3"]), ("A4", _GAMMA_AXIOMS["A4"]), ("A5", "valid[P NE]")),
    "anderson": (("A1a", _GAMMA_AXIOMS["A1a"]), ("A2", _GAMMA_AXIOMS["A2"]), ("T2", "valid[P GA]"),
                 ("A4", _GAMMA_AXIOMS["A4"]), ("A5", "valid[P NEA]")),
    "fitting": (("A1a", "valid[forall X:d. P (negd X) -> ~P X]"),
                ("A1b", "valid[forall X:d. ~P X -> P (negd X)]"),
                ("A2", "valid[forall X:d. forall Y:d. P X & box (forallE z. rigid(X z) -> rigid(Y z)) -> P Y]"),
                ("T2", "valid[down(P, G)]"),
                ("A5", "valid[down(P, NE)]")),
}

# T1, T4 and T5 are reconstructions; kept in one table so they can be swapped.
_GOALS = {
    "scott": {
        "T1": "valid[forall X:g. P X -> dia existsE X]",
        "T2": "valid[P G]",
        "T3": "valid[dia existsE G]",
        "T4": "valid[forall x:e. G x -> E G x]",
        "T5": "valid[dia existsE G -> box existsE G]",
        "T6": "valid[box existsE G]",
    },
    "anderson": {
        "T1": "valid[forall X:g. P X -> dia existsE X]",
        "T2": "valid[P GA]",
        "T3": "valid[dia existsE GA]",
        "T4": "valid[forall x:e. GA x -> EA GA x]",
        "T5": "valid[dia existsE GA -> box existsE GA]",
        "T6": "valid[box existsE GA]",
    },
    "fitting": {
        "T1": "valid[forall X:d. P X -> dia (existsE z. rigid(X z))]",
        "T2": "valid[down(P, G)]",
        "T4": "valid[forall x:e. G x -> down1(E, G) x]",
    },
}

# de re: G's extension is frozen at the evaluation world, the modality then
# ranges over worlds where some actual entity falls under that extension
_FITTING_READINGS = {
    ("T3", "deDicto"): "valid[dia existsE G]",
    ("T5", "deDicto"): "valid[dia existsE G -> box existsE G]",
    ("T6", "deDicto"): "valid[box existsE G]",
    ("T3", "deRe"): r"valid[down(\X:d. dia existsE z. rigid(X z), G)]",
    ("T5", "deRe"): r"valid[down(\X:d. dia existsE z. rigid(X z), G) -> down(\X:d. box existsE z. rigid(X z), G)]",
    ("T6", "deRe"): r"valid[down(\X:d. box existsE z. rigid(X z), G)]",
}

_MC = r"\phi:s. valid[phi -> box phi]"

_BARCAN = {
    ("e", "actualist", "BF"): r"\phi:e => s. valid[(forallE x. box (phi x)) -> box (forallE x. phi x)]",
    ("e", "actualist", "CBF"): r"\phi:e => s. valid[box (forallE x. phi x) -> (forallE x. box (phi x))]",
    ("e", "possibilist", "BF"): r"\phi:e => s. valid[(forall x:e. box (phi x)) -> box (forall x:e. phi x)]",
    ("e", "possibilist", "CBF"): r"\phi:e => s. valid[box (forall x:e. phi x) -> (forall x:e. box (phi x))]",
    ("g", "possibilist", "BF"): r"\phi:g => s. valid[(forall X:g. box (phi X)) -> box (forall X:g. phi X)]",
    ("g", "possibilist", "CBF"): r"\phi:g => s. valid[box (forall X:g. phi X) -> (forall X:g. box (phi X))]",
}


def _schema(name, text) -> Schema:
    body = parse_term(text, {})
    return Schema(name, body.ty, body)


def mk_modal_collapse() -> Schema:
    return _schema("MC", _MC)


def mk_barcan(ty: str = "e", flavor: str = "actualist", direction: str = "BF") -> Schema:
    try:
        text = _BARCAN[(ty, flavor, direction)]
    except KeyError:
        raise ValueError(f"no Barcan schema for {ty}/{flavor}/{direction}") from None
    tag = "e_act" if (ty, flavor) == ("e", "actualist") else f"{ty}_{flavor[:4]}"
    return _schema(f"{direction}_{tag}", text)


def mk_P_prime(variant) -> Term:
    """P' = \\X:g. downb(P, X): the properties whose rigidified extension is in P."""
    name = variant if isinstance(variant, str) else variant.name
    if name == "fitting":
        raise NotApplicable("fitting's P already ranges over extensions; P' is not defined")
    return parse_term(r"\X:g. downb(P, X)", {"P": Fun(GAMMA, SIGMA)})


def mk_de_dicto(goal: str) -> Term:
    return _reading(goal, "deDicto")


def mk_de_re(goal: str) -> Term:
    return _reading(goal, "deRe")


def _reading(goal, reading):
    try:
        text = _FITTING_READINGS[(goal, reading)]
    except KeyError:
        raise ValueError(f"no {reading} reading of {goal}") from None
    return parse_term(text, _FITTING_SIG)


_FITTING_SIG = {"P": Fun(DELTA, SIGMA), "G": GAMMA, "E": Fun(DELTA, GAMMA), "NE": GAMMA}


def _ultra_goals(name, sig) -> dict:
    P = Sym("P")
    if name == "fitting":
        return {"U1": Goal("U1", Prim("valid", (ultrafilter_pred("delta", P),)), "P is a d-ultrafilter")}
    P_prime = mk_P_prime(name)
    goals = {
        "U1": Goal("U1", Prim("valid", (ultrafilter_pred("gamma", P),)), "P is a g-ultrafilter"),
        "U2": Goal("U2", Prim("valid", (ultrafilter_pred("gamma", P_prime),)), "P' is a g-ultrafilter"),
        "U3": Goal("U3", Prim("valid", (Prim("rigid", (Prim("eq", (P, P_prime)),)),)), "P equals P'"),
    }
    for g in goals.values():
        typecheck(g.formula, None, sig)
    return goals


@lru_cache(maxsize=None)
def build_variant(name: str) -> VariantSpec:
    if name not in VARIANTS:
        raise ValueError(f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}")
    p_type = Fun(DELTA, SIGMA) if name == "fitting" else Fun(GAMMA, SIGMA)
    sig = {"P": p_type}
    defs_src = {"scott": _SCOTT_DEFS, "anderson": _ANDERSON_DEFS, "fitting": _FITTING_DEFS}[name]
    definitions = []
    sources = {}
    for dname, tytext, text in defs_src:
        ty = parse_type(tytext)
        term = parse_term(text, sig)
        found = typecheck(term, None, sig)
        assert found == ty, (dname, found, ty)
        sig[dname] = ty
        definitions.append((dname, ty, term))
        sources[f"def {dname}"] = text
    axioms = []
    for aname, text in _AXIOMS[name]:
        axioms.append((aname, parse_term(text, sig)))
        sources[f"axiom {aname}"] = text
    goals = {}
    for gname, text in _GOALS[name].items():
        goals[gname] = Goal(gname, parse_term(text, sig))
        sources[f"goal {gname}"] = text
    if name == "fitting":
        for (gname, reading), text in _FITTING_READINGS.items():
            goals[f"{gname}_{reading}"] = Goal(f"{gname}_{reading}", parse_term(text, sig), reading)
            sources[f"goal {gname}_{reading}"] = text
        for gname in ("T3", "T5", "T6"):
            goals[gname] = Goal(gname, goals[f"{gname}_deDicto"].formula, "deDicto")
    goals["MC"] = Goal("MC", mk_modal_collapse(), "schema over s")
    sources["goal MC"] = _MC
    goals.update(_ultra_goals(name, sig))
    for ty, flavor in (("e", "actualist"), ("g", "possibilist")):
        for direction in ("BF", "CBF"):
            schema = mk_barcan(ty, flavor, direction)
            goals[schema.name] = Goal(schema.name, schema, f"schema over {ty} => s")
            sources[f"goal {schema.name}"] = _BARCAN[(ty, flavor, direction)]
    god = "GA" if name == "anderson" else "G"
    return VariantSpec(
        name, {"P": p_type}, tuple(definitions), tuple(axioms), goals,
        god=god, essence="EA" if name == "anderson" else "E",
        necessary_existence="NEA" if name == "anderson" else "NE", sources=sources)


def export_dsl(variant: VariantSpec) -> str:
    """Catalog as DSL text, one declaration per line, printed from the parsed terms."""
    lines = [f"# variant {variant.name}"]
    for sym, ty in variant.signature.items():
        lines.append(f"const {sym} : {print_type(ty)}")
    for dname, ty, term in variant.definitions:
        lines.append(f"def {dname} : {print_type(ty)} := {print_term(term)}")
    for aname, term in variant.axioms:
        lines.append(f"axiom {aname} := {print_term(term)}")
    for gname, goal in variant.goals.items():
        if goal.is_schema:
            lines.append(f"schema {gname} := {print_term(goal.formula.body)}")
        else:
            lines.append(f"goal {gname} := {print_term(goal.formula)}")
    return "\n".join(lines) + "\n"


def parse_dsl(text: str) -> dict:
    """Inverse of ``export_dsl`` up to term identity: {kind: {name: Term or type}}."""
    out = {"const": {}, "def": {}, "axiom": {}, "goal": {}, "schema": {}}
    sig = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, rest = line.split(None, 1)
        if kind == "const":
            sym, tytext = (s.strip() for s in rest.split(":", 1))
            sig[sym] = out["const"][sym] = parse_type(tytext)
            continue
        head, body = (s.strip() for s in rest.split(":=", 1))
        if kind == "def":
            dname, tytext = (s.strip() for s in head.split(":", 1))
            term = parse_term(body, sig)
            sig[dname] = parse_type(tytext)
            out["def"][dname] = term
        else:
            out[kind][head] = parse_term(body, sig)
    return out


__all__ = ["VARIANTS", "Schema", "Goal", "VariantSpec", "build_variant", "mk_P_prime", "mk_modal_collapse",
           "mk_barcan", "mk_de_dicto", "mk_de_re", "export_dsl", "parse_dsl"]
