"""Naive substitution evaluator, used only as a differential oracle.

It knows nothing about the lifted operators: terms are first unfolded to
their lambda-definitions, then reduced call-by-value by substituting
constants for bound variables.  Function application looks the argument up
by linear search in the enumerated domain.  Slow on purpose.
"""

from __future__ import annotations

from .carriers import DEFAULT_CAP, Value, enumerate_carrier
from .errors import TypeCheckError, UnboundSymbol
from .expand import expand_all
from .terms import App, Const, Lam, Prim, Quant, Sym, Var, substitute
from .types import TRU, Fun


def oracle_eval(t, env=None, model=None, extra=None, cap: int = DEFAULT_CAP) -> Value:
    for name, val in (env or {}).items():
        t = substitute(t, name, Const(val))
    return _Reducer(model, extra or {}, cap).norm(expand_all(t))


class _Reducer:
    def __init__(self, model, extra, cap):
        self.model = model
        self.extra = extra
        self.dims = model.dims
        self.cap = cap

    def carrier(self, ty):
        return enumerate_carrier(ty, self.dims, self.cap)

    def norm(self, t) -> Value:
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Var):
            raise TypeCheckError(f"free variable {t.name} in closed evaluation", t)
        if isinstance(t, Sym):
            if t.name in self.extra:
                return self.extra[t.name]
            try:
                return self.model.symbol(t.name)
            except KeyError:
                raise UnboundSymbol(f"unknown symbol {t.name}") from None
        if isinstance(t, Lam):
            rows = [self.norm(substitute(t.body, t.var, Const(Value(t.ty, c)))) for c in self.carrier(t.ty)]
            return Value(Fun(t.ty, rows[0].ty), tuple(r.raw for r in rows))
        if isinstance(t, App):
            arg = self.norm(t.arg)
            if isinstance(t.fn, Lam):
                return self.norm(substitute(t.fn.body, t.fn.var, Const(arg)))
            fn = self.norm(t.fn)
            if not isinstance(fn.ty, Fun) or fn.ty.dom != arg.ty:
                raise TypeCheckError("ill-typed application", t, fn.ty, arg.ty)
            pos = list(self.carrier(fn.ty.dom)).index(arg.raw)
            return Value(fn.ty.cod, fn.raw[pos])
        if isinstance(t, Quant):
            if t.kind not in ("all", "ex"):
                raise TypeCheckError(f"lifted quantifier {t.kind} left after expansion", t)
            results = (self.norm(App(t.body, Const(Value(t.ty, c)))).raw for c in self.carrier(t.ty))
            return Value(TRU, all(results) if t.kind == "all" else any(results))
        if isinstance(t, Prim):
            args = [self.norm(a) for a in t.args]
            op = t.op
            if op == "eq":
                return Value(TRU, args[0].raw == args[1].raw)
            vals = [a.raw for a in args]
            if op == "htrue":
                return Value(TRU, True)
            if op == "hfalse":
                return Value(TRU, False)
            if op == "hnot":
                return Value(TRU, not vals[0])
            if op == "hand":
                return Value(TRU, vals[0] and vals[1])
            if op == "hor":
                return Value(TRU, vals[0] or vals[1])
            if op == "himp":
                return Value(TRU, (not vals[0]) or vals[1])
            if op == "hiff":
                return Value(TRU, vals[0] == vals[1])
            raise TypeCheckError(f"lifted primitive {op} left after expansion", t)
        raise TypeCheckError(f"not a term: {t!r}", None)
