"""World-lifted filters and ultrafilters on d- and g-properties.

Each notion exists twice: as a Term builder (so it can appear inside goals
and be evaluated by either evaluator) and as a direct evaluator over raw
tables.  The tests check the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

from .carriers import Dims, enumerate_carrier, index_map
from .errors import TypeMismatch
from .terms import App, Lam, Prim, Quant, Term, Var, fresh_name, free_vars
from .types import DELTA, ENT, GAMMA, SIGMA, WLD, Fun, format_type

KINDS = {"delta": DELTA, "gamma": GAMMA, "d": DELTA, "g": GAMMA}


def _kind_type(kind):
    if kind in (DELTA, GAMMA):
        return kind
    try:
        return KINDS[kind]
    except KeyError:
        raise TypeMismatch(f"filter kind must be delta or gamma, got {kind!r}") from None


def _fresh(base, *terms):
    avoid = set()
    for t in terms:
        avoid |= free_vars(t)
    return fresh_name(base, avoid)


def set_ops(kind) -> SimpleNamespace:
    """Term builders elem, top, empty, subset, inter, compl for d or g sets."""
    ty = _kind_type(kind)
    if ty == DELTA:
        def subset(X, Y):
            w, z = _fresh("w", X, Y), _fresh("z", X, Y)
            return Lam(w, WLD, Quant("all", ENT, Lam(z, ENT, Prim("himp", (App(X, Var(z)), App(Y, Var(z)))))))

        def inter(X, Y):
            z = _fresh("z", X, Y)
            return Lam(z, ENT, Prim("hand", (App(X, Var(z)), App(Y, Var(z)))))

        def compl(X):
            z = _fresh("z", X)
            return Lam(z, ENT, Prim("hnot", (App(X, Var(z)),)))

        top = Lam("x", ENT, Prim("htrue"))
        empty = Lam("x", ENT, Prim("hfalse"))
    else:
        def subset(X, Y):
            w, z = _fresh("w", X, Y), _fresh("z", X, Y)
            w_, z_ = Var(w), Var(z)
            body = Prim("himp", (App(App(X, z_), w_), App(App(Y, z_), w_)))
            return Lam(w, WLD, Quant("all", ENT, Lam(z, ENT, body)))

        def inter(X, Y):
            z = _fresh("z", X, Y)
            return Lam(z, ENT, Prim("mand", (App(X, Var(z)), App(Y, Var(z)))))

        def compl(X):
            z = _fresh("z", X)
            return Lam(z, ENT, Prim("mnot", (App(X, Var(z)),)))

        top = Lam("x", ENT, Prim("mtrue"))
        empty = Lam("x", ENT, Prim("mfalse"))

    def elem(X, Phi):
        return App(Phi, X)

    return SimpleNamespace(ty=ty, elem=elem, top=top, empty=empty, subset=subset, inter=inter, compl=compl)


def _forall2(ty, names, body):
    a, b = names
    return Quant("forall", ty, Lam(a, ty, Quant("forall", ty, Lam(b, ty, body))))


def filter_conditions(kind, Phi: Term) -> dict:
    """The four filter conditions as named sigma-terms."""
    ops = set_ops(kind)
    ty = ops.ty
    x = _fresh("X", Phi)
    y = _fresh("Y", Phi, Var(x))
    X, Y = Var(x), Var(y)
    mand, mimp = (lambda a, b: Prim("mand", (a, b))), (lambda a, b: Prim("mimp", (a, b)))
    return {
        "large": ops.elem(ops.top, Phi),
        "no_empty": Prim("mnot", (ops.elem(ops.empty, Phi),)),
        "supersets": _forall2(ty, (x, y), mimp(mand(ops.elem(X, Phi), ops.subset(X, Y)), ops.elem(Y, Phi))),
        "intersections": _forall2(ty, (x, y), mimp(mand(ops.elem(X, Phi), ops.elem(Y, Phi)),
                                                   ops.elem(ops.inter(X, Y), Phi))),
    }


def maximality(kind, Phi: Term) -> Term:
    ops = set_ops(kind)
    x = _fresh("X", Phi)
    X = Var(x)
    body = Prim("mor", (ops.elem(X, Phi), ops.elem(ops.compl(X), Phi)))
    return Quant("forall", ops.ty, Lam(x, ops.ty, body))


def _conj(terms):
    terms = list(terms)
    out = terms[0]
    for t in terms[1:]:
        out = Prim("mand", (out, t))
    return out


def filter_pred(kind, Phi: Term) -> Term:
    """sigma-term: Phi is a (world-lifted) filter at the evaluation world."""
    return _conj(filter_conditions(kind, Phi).values())


def ultrafilter_pred(kind, Phi: Term) -> Term:
    return Prim("mand", (filter_pred(kind, Phi), maximality(kind, Phi)))


# -- direct evaluation on raw tables

@dataclass(frozen=True)
class LiftedFamily:
    """A family of d- or g-properties per world: a raw table of type (d => s) or (g => s)."""

    kind: str
    table: tuple
    dims: Dims

    def __post_init__(self):
        ty = _kind_type(self.kind)
        object.__setattr__(self, "kind", "delta" if ty == DELTA else "gamma")
        from .carriers import is_member
        if not is_member(Fun(ty, SIGMA), self.dims, self.table):
            raise TypeMismatch(f"family is not a {format_type(Fun(ty, SIGMA))} table at {self.dims}")

    @property
    def ty(self):
        return _kind_type(self.kind)

    def conditions(self) -> dict:
        return _direct_conditions(self.ty, self.table, self.dims)

    def is_filter(self) -> tuple:
        c = self.conditions()
        return tuple(all(c[k][w] for k in ("large", "no_empty", "supersets", "intersections"))
                     for w in range(self.dims.worlds))

    def is_ultrafilter(self) -> tuple:
        c = self.conditions()
        return tuple(f and m for f, m in zip(self.is_filter(), c["maximal"]))

    def members(self, w: int) -> list:
        """Elements (raw properties) of the family at world ``w``."""
        carrier = enumerate_carrier(self.ty, self.dims)
        return [X for X, row in zip(carrier, self.table) if row[w]]


def _direct_conditions(ty, table, dims):
    nW, nE = dims.worlds, dims.entities
    carrier = enumerate_carrier(ty, dims)
    idx = index_map(ty, dims)
    gamma = ty == GAMMA
    if gamma:
        top = tuple((True,) * nW for _ in range(nE))
        empty = tuple((False,) * nW for _ in range(nE))

        def at(X, z, w):
            return X[z][w]

        def inter(X, Y):
            return tuple(tuple(a and b for a, b in zip(rx, ry)) for rx, ry in zip(X, Y))

        def compl(X):
            return tuple(tuple(not a for a in rx) for rx in X)
    else:
        top, empty = (True,) * nE, (False,) * nE

        def at(X, z, w):
            return X[z]

        def inter(X, Y):
            return tuple(a and b for a, b in zip(X, Y))

        def compl(X):
            return tuple(not a for a in X)

    def member(X, w):
        return table[idx[X]][w]

    out = {k: [] for k in ("large", "no_empty", "supersets", "intersections", "maximal")}
    for w in range(nW):
        inside = [X for X in carrier if member(X, w)]
        out["large"].append(member(top, w))
        out["no_empty"].append(not member(empty, w))
        out["supersets"].append(all(member(Y, w) for X in inside for Y in carrier
                                    if all(at(Y, z, w) for z in range(nE) if at(X, z, w))))
        out["intersections"].append(all(member(inter(X, Y), w) for X in inside for Y in inside))
        out["maximal"].append(all(member(X, w) or member(compl(X), w) for X in carrier))
    return {k: tuple(v) for k, v in out.items()}


def principal_family(kind, entity: int, dims: Dims) -> tuple:
    """Raw family of all properties the entity has (at each world)."""
    ty = _kind_type(kind)
    carrier = enumerate_carrier(ty, dims)
    if ty == DELTA:
        return tuple((X[entity],) * dims.worlds for X in carrier)
    return tuple(tuple(X[entity][w] for w in range(dims.worlds)) for X in carrier)


def principal_witness(kind, table, dims: Dims, w: int):
    """An entity generating the family at ``w`` (X in family iff X holds of it), or None."""
    ty = _kind_type(kind)
    carrier = enumerate_carrier(ty, dims)
    for a in range(dims.entities):
        has = (lambda X: X[a]) if ty == DELTA else (lambda X: X[a][w])
        if all(row[w] == has(X) for X, row in zip(carrier, table)):
            return a
    return None
