"""Type checking for annotated IHOML terms."""

from __future__ import annotations

from .errors import TypeCheckError, UnboundSymbol
from .terms import HOL_QUANTS, OP_ARITY, App, Const, Lam, Prim, Quant, Sym, Term, Var
from .types import DELTA, ENT, GAMMA, SIGMA, TAU, TRU, Fun, SemanticType

# symbols every model interprets
BUILTIN_SYMBOLS = {"r": TAU, "existsAt": GAMMA}

_FIXED = {
    "mfalse": ((), SIGMA), "mtrue": ((), SIGMA),
    "mnot": ((SIGMA,), SIGMA),
    "mand": ((SIGMA, SIGMA), SIGMA), "mor": ((SIGMA, SIGMA), SIGMA),
    "mimp": ((SIGMA, SIGMA), SIGMA), "mequ": ((SIGMA, SIGMA), SIGMA),
    "negd": ((DELTA,), DELTA), "negg": ((GAMMA,), GAMMA),
    "box": ((SIGMA,), SIGMA), "dia": ((SIGMA,), SIGMA),
    "rigid": ((TRU,), SIGMA),
    "downb": ((Fun(GAMMA, SIGMA), GAMMA), SIGMA),
    "down": ((Fun(DELTA, SIGMA), GAMMA), SIGMA),
    "down1": ((Fun(DELTA, GAMMA), GAMMA), GAMMA),
    "valid": ((SIGMA,), TRU),
    "htrue": ((), TRU), "hfalse": ((), TRU),
    "hnot": ((TRU,), TRU),
    "hand": ((TRU, TRU), TRU), "hor": ((TRU, TRU), TRU),
    "himp": ((TRU, TRU), TRU), "hiff": ((TRU, TRU), TRU),
}


def prim_type(t: Prim, arg_types) -> SemanticType:
    if t.op not in OP_ARITY:
        raise TypeCheckError(f"unknown primitive {t.op!r}", t)
    if len(arg_types) != OP_ARITY[t.op]:
        raise TypeCheckError(f"{t.op} expects {OP_ARITY[t.op]} arguments, got {len(arg_types)}", t)
    if t.op == "eq":
        a, b = arg_types
        if a != b:
            raise TypeCheckError("eq needs arguments of one type", t, a, b)
        return TRU
    params, result = _FIXED[t.op]
    for i, (want, got) in enumerate(zip(params, arg_types)):
        if want != got:
            raise TypeCheckError(f"argument {i + 1} of {t.op}", t.args[i], want, got)
    return result


def quant_type(t: Quant, body_ty: SemanticType) -> SemanticType:
    result = TRU if t.kind in HOL_QUANTS else SIGMA
    if t.kind in ("forallE", "existsE") and t.ty != ENT:
        raise TypeCheckError(f"{t.kind} ranges over entities only", t, ENT, t.ty)
    want = Fun(t.ty, result)
    if body_ty != want:
        raise TypeCheckError(f"body of {t.kind}", t.body, want, body_ty)
    return result


class TypingContext:
    """Variable typings; later bindings shadow earlier ones."""

    __slots__ = ("_items",)

    def __init__(self, items=()):
        if isinstance(items, dict):
            items = tuple(items.items())
        self._items = tuple(items)

    def extend(self, name, ty) -> "TypingContext":
        return TypingContext(self._items + ((name, ty),))

    def lookup(self, name):
        for n, ty in reversed(self._items):
            if n == name:
                return ty
        return None

    def items(self):
        return self._items


def typecheck(t: Term, ctx=None, signature=None, spans=None) -> SemanticType:
    """Unique type of ``t`` or TypeCheckError.

    ``signature`` maps symbol names to types (``r`` and ``existsAt`` are
    always available).  ``spans`` optionally maps ``id(node)`` to a source
    span, used to locate errors.
    """
    ctx = ctx if isinstance(ctx, TypingContext) else TypingContext(ctx or ())
    sig = dict(BUILTIN_SYMBOLS)
    sig.update(signature or {})
    try:
        return _infer(t, ctx, sig)
    except TypeCheckError as err:
        if spans and err.span is None and err.term is not None:
            err.span = spans.get(id(err.term))
            if err.span is not None:
                err.args = (f"{err.args[0]} at {err.span}",)
        raise


def _infer(t, ctx, sig):
    if isinstance(t, Var):
        ty = ctx.lookup(t.name)
        if ty is None:
            raise TypeCheckError(f"unbound variable {t.name}", t)
        return ty
    if isinstance(t, Sym):
        if t.name not in sig:
            raise UnboundSymbol(f"unknown symbol {t.name}")
        return sig[t.name]
    if isinstance(t, Const):
        return t.value.ty
    if isinstance(t, Lam):
        return Fun(t.ty, _infer(t.body, ctx.extend(t.var, t.ty), sig))
    if isinstance(t, App):
        fty = _infer(t.fn, ctx, sig)
        aty = _infer(t.arg, ctx, sig)
        if not isinstance(fty, Fun):
            raise TypeCheckError("application of a non-function", t.fn, "a function type", fty)
        if fty.dom != aty:
            raise TypeCheckError("argument type", t.arg, fty.dom, aty)
        return fty.cod
    if isinstance(t, Prim):
        return prim_type(t, [_infer(a, ctx, sig) for a in t.args])
    if isinstance(t, Quant):
        return quant_type(t, _infer(t.body, ctx, sig))
    raise TypeCheckError(f"not a term: {t!r}", None)
