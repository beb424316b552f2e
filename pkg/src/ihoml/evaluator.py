"""Environment-based evaluator.

Terms are compiled once per (term, context, signature, dims) into nested
closures ``fn(rt, env)`` that read the model from a Runtime and bound
variables from a flat slot list.  Lifted primitives use direct semantic
clauses; ``expand.expand_primitive`` ties each one to its lambda-definition
and the tests check both agree.
"""

from __future__ import annotations

import operator
from functools import lru_cache

from .carriers import DEFAULT_CAP, Dims, Value, enumerate_carrier, index_map, index_of, within_cap
from .errors import TypeCheckError, UnboundSymbol
from .terms import App, Const, Lam, Prim, Quant, Sym, Term, Var
from .typecheck import BUILTIN_SYMBOLS, prim_type, quant_type
from .types import DELTA, GAMMA, SIGMA, TRU, Base, Fun

_not = operator.not_
_and = operator.and_
_or = operator.or_
_eq = operator.eq


class Runtime:
    """Per-model data read by compiled closures."""

    __slots__ = ("model", "dims", "succ", "rel", "exists", "syms", "cache")

    def __init__(self, model, extra=None, cache=None):
        self.model = model
        self.dims = model.dims
        self.succ = model.frame.successors
        self.rel = model.frame.relation_table
        self.exists = model.exists_at
        self.syms = {name: v.raw for name, v in model.interp}
        if extra:
            self.syms.update(extra)
        self.cache = cache


class Compiled:
    __slots__ = ("ty", "fn", "nslots", "nctx")

    def __init__(self, ty, fn, nslots, nctx):
        self.ty = ty
        self.fn = fn
        self.nslots = nslots
        self.nctx = nctx

    def run(self, rt, args=()):
        env = list(args) + [None] * (self.nslots - len(args))
        return self.fn(rt, env)


def compile_term(t: Term, ctx=(), signature=None, dims: Dims = None, cap: int = DEFAULT_CAP) -> Compiled:
    """Compile ``t``; ``ctx`` is a sequence of (name, type) for its free variables."""
    sig = dict(BUILTIN_SYMBOLS)
    sig.update(signature or {})
    return _compile_cached(t, tuple(ctx), tuple(sorted(sig.items(), key=lambda kv: kv[0])), Dims(*dims), cap)


@lru_cache(maxsize=4096)
def _compile_cached(t, ctx, sig_items, dims, cap):
    c = _Compiler(dict(sig_items), dims, cap)
    scope = {}
    for i, (name, _) in enumerate(ctx):
        scope[name] = (i, ctx[i][1])
    ty, fn = c.comp(t, scope, len(ctx))
    return Compiled(ty, fn, max(c.max_slots, len(ctx)), len(ctx))


class _Compiler:
    def __init__(self, sig, dims, cap):
        self.sig = sig
        self.dims = dims
        self.cap = cap
        self.nW = dims.worlds
        self.nE = dims.entities
        self.max_slots = 0

    def carrier(self, ty):
        return enumerate_carrier(ty, self.dims, self.cap)

    def indexer(self, ty):
        if isinstance(ty, Base):
            return None
        if within_cap(ty, self.dims, 1 << 16):
            return index_map(ty, self.dims).__getitem__
        dims = self.dims
        return lambda raw: index_of(ty, dims, raw)

    def bind(self, depth):
        self.max_slots = max(self.max_slots, depth + 1)
        return depth

    def comp(self, t, scope, depth):
        if isinstance(t, Var):
            if t.name not in scope:
                raise TypeCheckError(f"unbound variable {t.name}", t)
            slot, ty = scope[t.name]
            return ty, lambda rt, env: env[slot]
        if isinstance(t, Sym):
            name = t.name
            if name not in self.sig:
                raise UnboundSymbol(f"unknown symbol {name}")
            if name == "r":
                return self.sig[name], lambda rt, env: rt.rel
            if name == "existsAt":
                return self.sig[name], lambda rt, env: rt.exists
            return self.sig[name], lambda rt, env: rt.syms[name]
        if isinstance(t, Const):
            raw = t.value.raw
            return t.value.ty, lambda rt, env: raw
        if isinstance(t, Lam):
            return self.comp_lam(t, scope, depth)
        if isinstance(t, App):
            return self.comp_app(t, scope, depth)
        if isinstance(t, Prim):
            return self.comp_prim(t, scope, depth)
        if isinstance(t, Quant):
            return self.comp_quant(t, scope, depth)
        raise TypeCheckError(f"not a term: {t!r}", None)

    def comp_lam(self, t, scope, depth):
        slot = self.bind(depth)
        inner = dict(scope)
        inner[t.var] = (slot, t.ty)
        bty, bfn = self.comp(t.body, inner, depth + 1)
        carrier = self.carrier(t.ty)

        def tabulate(rt, env):
            out = []
            for v in carrier:
                env[slot] = v
                out.append(bfn(rt, env))
            return tuple(out)

        return Fun(t.ty, bty), tabulate

    def comp_app(self, t, scope, depth):
        if isinstance(t.fn, Lam):
            # beta redex: bind directly instead of tabulating
            lam = t.fn
            aty, afn = self.comp(t.arg, scope, depth)
            if aty != lam.ty:
                raise TypeCheckError("argument type", t.arg, lam.ty, aty)
            slot = self.bind(depth)
            inner = dict(scope)
            inner[lam.var] = (slot, lam.ty)
            bty, bfn = self.comp(lam.body, inner, depth + 1)

            def beta(rt, env):
                env[slot] = afn(rt, env)
                return bfn(rt, env)

            return bty, beta
        fty, ffn = self.comp(t.fn, scope, depth)
        aty, afn = self.comp(t.arg, scope, depth)
        if not isinstance(fty, Fun):
            raise TypeCheckError("application of a non-function", t.fn, "a function type", fty)
        if fty.dom != aty:
            raise TypeCheckError("argument type", t.arg, fty.dom, aty)
        idx = self.indexer(aty)
        if idx is None:
            return fty.cod, lambda rt, env: ffn(rt, env)[afn(rt, env)]
        return fty.cod, lambda rt, env: ffn(rt, env)[idx(afn(rt, env))]

    def comp_prim(self, t, scope, depth):
        compiled = [self.comp(a, scope, depth) for a in t.args]
        ty = prim_type(t, [c[0] for c in compiled])
        fns = [c[1] for c in compiled]
        op = t.op
        nW, nE = self.nW, self.nE
        W = range(nW)
        E = range(nE)
        if op in ("mfalse", "mtrue"):
            const = (op == "mtrue",) * nW
            return ty, lambda rt, env: const
        if op in ("htrue", "hfalse"):
            const = op == "htrue"
            return ty, lambda rt, env: const
        if len(fns) == 1:
            (a,) = fns
            if op in ("mnot", "negd"):
                return ty, lambda rt, env: tuple(map(_not, a(rt, env)))
            if op == "negg":
                return ty, lambda rt, env: tuple(tuple(map(_not, row)) for row in a(rt, env))
            if op == "box":
                def box(rt, env):
                    x = a(rt, env)
                    return tuple(all(x[v] for v in s) for s in rt.succ)
                return ty, box
            if op == "dia":
                def dia(rt, env):
                    x = a(rt, env)
                    return tuple(any(x[v] for v in s) for s in rt.succ)
                return ty, dia
            if op == "rigid":
                return ty, lambda rt, env: (a(rt, env),) * nW
            if op == "valid":
                return ty, lambda rt, env: all(a(rt, env))
            if op == "hnot":
                return ty, lambda rt, env: not a(rt, env)
        a, b = fns
        if op == "mand":
            return ty, lambda rt, env: tuple(map(_and, a(rt, env), b(rt, env)))
        if op == "mor":
            return ty, lambda rt, env: tuple(map(_or, a(rt, env), b(rt, env)))
        if op == "mimp":
            return ty, lambda rt, env: tuple(not p or q for p, q in zip(a(rt, env), b(rt, env)))
        if op == "mequ":
            return ty, lambda rt, env: tuple(map(_eq, a(rt, env), b(rt, env)))
        if op == "hand":
            return ty, lambda rt, env: a(rt, env) and b(rt, env)
        if op == "hor":
            return ty, lambda rt, env: a(rt, env) or b(rt, env)
        if op == "himp":
            return ty, lambda rt, env: (not a(rt, env)) or b(rt, env)
        if op == "hiff":
            return ty, lambda rt, env: a(rt, env) == b(rt, env)
        if op == "eq":
            return ty, lambda rt, env: a(rt, env) == b(rt, env)
        if op == "downb":
            gidx = self.indexer(GAMMA)

            def downb(rt, env):
                phi = a(rt, env)
                P = b(rt, env)
                return tuple(phi[gidx(tuple((P[z][w],) * nW for z in E))][w] for w in W)
            return ty, downb
        if op == "down":
            didx = self.indexer(DELTA)

            def down(rt, env):
                phi = a(rt, env)
                P = b(rt, env)
                return tuple(phi[didx(tuple(P[z][w] for z in E))][w] for w in W)
            return ty, down
        if op == "down1":
            didx = self.indexer(DELTA)

            def down1(rt, env):
                phi = a(rt, env)
                P = b(rt, env)
                ext = [phi[didx(tuple(P[x][w] for x in E))] for w in W]
                return tuple(tuple(ext[w][z][w] for w in W) for z in E)
            return ty, down1
        raise TypeCheckError(f"unknown primitive {op!r}", t)

    def comp_quant(self, t, scope, depth):
        kind = t.kind
        nW = self.nW
        W = range(nW)
        if isinstance(t.body, Lam) and t.body.ty == t.ty:
            slot = self.bind(depth)
            inner = dict(scope)
            inner[t.body.var] = (slot, t.ty)
            bty, bfn = self.comp(t.body.body, inner, depth + 1)
            ty = quant_type(t, Fun(t.ty, bty))
            inline = True
        else:
            bty, tfn = self.comp(t.body, scope, depth)
            ty = quant_type(t, bty)
            inline = False
        carrier = self.carrier(t.ty)

        if kind in ("all", "ex"):
            agg = all if kind == "all" else any
            if inline:
                def hol(rt, env):
                    def gen():
                        for v in carrier:
                            env[slot] = v
                            yield bfn(rt, env)
                    return agg(gen())
            else:
                def hol(rt, env):
                    return agg(tfn(rt, env))
            return ty, hol

        universal = kind in ("forall", "forallE")
        actual = kind in ("forallE", "existsE")

        if not inline:
            # table of sigma values indexed by carrier position
            def quant(rt, env):
                table = tfn(rt, env)
                if actual:
                    ex = rt.exists
                    if universal:
                        return tuple(all(table[z][w] for z in range(len(table)) if ex[z][w]) for w in W)
                    return tuple(any(table[z][w] for z in range(len(table)) if ex[z][w]) for w in W)
                if universal:
                    return tuple(all(row[w] for row in table) for w in W)
                return tuple(any(row[w] for row in table) for w in W)
            return ty, quant

        if universal:
            def forall_q(rt, env):
                acc = [True] * nW
                alive = nW
                ex = rt.exists if actual else None
                for v in carrier:
                    env[slot] = v
                    val = bfn(rt, env)
                    for w in W:
                        if acc[w] and not val[w] and (ex is None or ex[v][w]):
                            acc[w] = False
                            alive -= 1
                    if not alive:
                        break
                return tuple(acc)
            return ty, forall_q

        def exists_q(rt, env):
            acc = [False] * nW
            missing = nW
            ex = rt.exists if actual else None
            for v in carrier:
                env[slot] = v
                val = bfn(rt, env)
                for w in W:
                    if not acc[w] and val[w] and (ex is None or ex[v][w]):
                        acc[w] = True
                        missing -= 1
                if not missing:
                    break
            return tuple(acc)
        return ty, exists_q


def signature_of(model, extra_types=None) -> dict:
    sig = {name: v.ty for name, v in model.interp}
    if extra_types:
        sig.update(extra_types)
    return sig


def evaluate(t: Term, env=None, model=None, extra=None, cap: int = DEFAULT_CAP) -> Value:
    """Denotation of ``t`` in ``model``.

    ``env`` maps free variable names to Values; ``extra`` maps additional
    symbol names (e.g. evaluated definitions) to Values.
    """
    env = env or {}
    extra = extra or {}
    ctx = tuple((name, v.ty) for name, v in env.items())
    sig = signature_of(model, {k: v.ty for k, v in extra.items()})
    comp = compile_term(t, ctx, sig, model.dims, cap)
    rt = Runtime(model, {k: v.raw for k, v in extra.items()})
    return Value(comp.ty, comp.run(rt, [v.raw for v in env.values()]))


def valid(t: Term, model, env=None, extra=None, cap: int = DEFAULT_CAP) -> bool:
    """Global validity: a sigma-term true at every world (``valid[...]`` terms are accepted as is)."""
    v = evaluate(t, env, model, extra, cap)
    if v.ty == SIGMA:
        return all(v.raw)
    if v.ty == TRU:
        return v.raw
    raise TypeCheckError("validity needs a sigma-term", t, SIGMA, v.ty)


def truth_table(t: Term, model, env=None, extra=None) -> tuple:
    v = evaluate(t, env, model, extra)
    if v.ty != SIGMA:
        raise TypeCheckError("per-world truth needs a sigma-term", t, SIGMA, v.ty)
    return v.raw
