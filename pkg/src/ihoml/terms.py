"""Deep embedding of IHOML terms.

Besides the usual lambda-calculus core (variables, symbols, abstraction,
application) the AST has two generic node kinds:

``Prim(op, args)``
    a fixed-arity primitive, either one of the world-lifted operators or a
    plain HOL connective used by the lambda-definitions of the lifted ones.

``Quant(kind, ty, body)``
    a quantifier applied to a predicate ``body`` of type ``ty => s`` (lifted
    kinds) or ``ty => o`` (HOL kinds ``all``/``ex``).  Binder notation
    ``forall X:g. t`` is ``Quant('forall', g, Lam('X', g, t))``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import SemanticType


class Term:
    __slots__ = ()

    # light operator sugar for building catalogs in Python
    def __call__(self, *args):
        t = self
        for a in args:
            t = App(t, a)
        return t

    def __and__(self, other):
        return Prim("mand", (self, other))

    def __or__(self, other):
        return Prim("mor", (self, other))

    def __invert__(self):
        return Prim("mnot", (self,))

    def __rshift__(self, other):
        return Prim("mimp", (self, other))


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Sym(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    var: str
    ty: SemanticType
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Const(Term):
    """An already-evaluated value spliced into a term (used by substitution)."""

    value: object  # carriers.Value


@dataclass(frozen=True)
class Prim(Term):
    op: str
    args: tuple = ()


@dataclass(frozen=True)
class Quant(Term):
    kind: str
    ty: SemanticType
    body: Term


# op -> arity
LIFTED_OPS = {
    "mfalse": 0, "mtrue": 0,
    "mnot": 1, "mand": 2, "mor": 2, "mimp": 2, "mequ": 2,
    "negd": 1, "negg": 1,
    "box": 1, "dia": 1,
    "rigid": 1,
    "downb": 2, "down": 2, "down1": 2,
    "valid": 1,
}
HOL_OPS = {
    "htrue": 0, "hfalse": 0,
    "hnot": 1, "hand": 2, "hor": 2, "himp": 2, "hiff": 2,
    "eq": 2,
}
OP_ARITY = {**LIFTED_OPS, **HOL_OPS}

LIFTED_QUANTS = ("forall", "exists", "forallE", "existsE")
HOL_QUANTS = ("all", "ex")
QUANT_KINDS = LIFTED_QUANTS + HOL_QUANTS


def prim(op, *args) -> Prim:
    if op not in OP_ARITY:
        raise ValueError(f"unknown primitive {op!r}")
    if len(args) != OP_ARITY[op]:
        raise ValueError(f"{op} takes {OP_ARITY[op]} arguments, got {len(args)}")
    return Prim(op, tuple(args))


MFALSE = Prim("mfalse")
MTRUE = Prim("mtrue")


def mnot(a): return Prim("mnot", (a,))
def mand(a, b): return Prim("mand", (a, b))
def mor(a, b): return Prim("mor", (a, b))
def mimp(a, b): return Prim("mimp", (a, b))
def mequ(a, b): return Prim("mequ", (a, b))
def negd(a): return Prim("negd", (a,))
def negg(a): return Prim("negg", (a,))
def box(a): return Prim("box", (a,))
def dia(a): return Prim("dia", (a,))
def rigid(a): return Prim("rigid", (a,))
def downb(f, p): return Prim("downb", (f, p))
def down(f, p): return Prim("down", (f, p))
def down1(f, p): return Prim("down1", (f, p))
def valid(a): return Prim("valid", (a,))
def eq(a, b): return Prim("eq", (a, b))


def forall(var, ty, body): return Quant("forall", ty, Lam(var, ty, body))
def exists(var, ty, body): return Quant("exists", ty, Lam(var, ty, body))


def forall_e(var, body):
    from .types import ENT
    return Quant("forallE", ENT, Lam(var, ENT, body))


def exists_e(var_or_term, body=None):
    """``exists_e('z', body)`` binds; ``exists_e(term)`` applies to a g-term."""
    from .types import ENT
    if body is None:
        return Quant("existsE", ENT, var_or_term)
    return Quant("existsE", ENT, Lam(var_or_term, ENT, body))


def lam(var, ty, body): return Lam(var, ty, body)


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Prim):
        out = frozenset()
        for a in t.args:
            out |= free_vars(a)
        return out
    if isinstance(t, Quant):
        return free_vars(t.body)
    return frozenset()


def symbols_of(t: Term) -> frozenset:
    if isinstance(t, Sym):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return symbols_of(t.body)
    if isinstance(t, App):
        return symbols_of(t.fn) | symbols_of(t.arg)
    if isinstance(t, Prim):
        out = frozenset()
        for a in t.args:
            out |= symbols_of(a)
        return out
    if isinstance(t, Quant):
        return symbols_of(t.body)
    return frozenset()


def children(t: Term) -> tuple:
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Prim):
        return t.args
    if isinstance(t, Quant):
        return (t.body,)
    return ()


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def fresh_name(base: str, avoid) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(t: Term, name: str, repl: Term) -> Term:
    """Capture-avoiding substitution of ``repl`` for free ``name`` in ``t``."""
    if isinstance(t, Var):
        return repl if t.name == name else t
    if isinstance(t, (Sym, Const)):
        return t
    if isinstance(t, Lam):
        if t.var == name:
            return t
        fv = free_vars(repl)
        if t.var in fv:
            new = fresh_name(t.var, fv | free_vars(t.body) | {name})
            body = substitute(t.body, t.var, Var(new))
            return Lam(new, t.ty, substitute(body, name, repl))
        return Lam(t.var, t.ty, substitute(t.body, name, repl))
    if isinstance(t, App):
        return App(substitute(t.fn, name, repl), substitute(t.arg, name, repl))
    if isinstance(t, Prim):
        return Prim(t.op, tuple(substitute(a, name, repl) for a in t.args))
    if isinstance(t, Quant):
        return Quant(t.kind, t.ty, substitute(t.body, name, repl))
    raise TypeError(f"not a term: {t!r}")
