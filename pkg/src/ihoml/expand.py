"""Lambda-definitions of the world-lifted primitives.

``expand_primitive`` unfolds one lifted node into HOL-level structure
(abstractions over worlds, the plain connectives ``h*``, the quantifiers
``all``/``ex``, and the symbols ``r``/``existsAt``).  ``expand_all`` does so
everywhere, leaving only the core language.
"""

from __future__ import annotations

from .errors import NotAPrimitive
from .terms import (App, Const, Lam, Prim, Quant, Sym, Term, Var, box, fresh_name, free_vars,
                    mnot, substitute)
from .types import ENT, WLD

CORE_OPS = frozenset({"htrue", "hfalse", "hnot", "hand", "hor", "himp", "hiff", "eq"})


def _h(op, *args):
    return Prim(op, tuple(args))


def _all(var, ty, body):
    return Quant("all", ty, Lam(var, ty, body))


def _ex(var, ty, body):
    return Quant("ex", ty, Lam(var, ty, body))


def _fresh(base, *terms):
    avoid = set()
    for t in terms:
        avoid |= free_vars(t)
    return fresh_name(base, avoid)


def expand_primitive(t: Term) -> Term:
    """One-step unfolding of a lifted primitive or lifted quantifier."""
    if isinstance(t, Quant):
        return _expand_quant(t)
    if not isinstance(t, Prim) or t.op in CORE_OPS:
        raise NotAPrimitive(f"{t!r} is not a lifted primitive")
    op, args = t.op, t.args
    w = _fresh("w", *args)
    W = Var(w)
    if op == "mfalse":
        return Lam(w, WLD, _h("hfalse"))
    if op == "mtrue":
        return Lam(w, WLD, _h("htrue"))
    if op == "mnot":
        return Lam(w, WLD, _h("hnot", App(args[0], W)))
    if op in ("mand", "mor", "mimp", "mequ"):
        hop = {"mand": "hand", "mor": "hor", "mimp": "himp", "mequ": "hiff"}[op]
        return Lam(w, WLD, _h(hop, App(args[0], W), App(args[1], W)))
    if op == "negd":
        x = _fresh("x", *args)
        return Lam(x, ENT, _h("hnot", App(args[0], Var(x))))
    if op == "negg":
        x = _fresh("x", *args)
        return Lam(x, ENT, Lam(w, WLD, _h("hnot", App(App(args[0], Var(x)), W))))
    if op == "box":
        v = _fresh("v", *args, Var(w))
        return Lam(w, WLD, _all(v, WLD, _h("himp", App(App(Sym("r"), W), Var(v)), App(args[0], Var(v)))))
    if op == "dia":
        return mnot(box(mnot(args[0])))
    if op == "rigid":
        return Lam(w, WLD, args[0])
    if op == "valid":
        return _all(w, WLD, App(args[0], W))
    phi, P = args
    x = _fresh("x", *args, W)
    if op == "downb":
        v = _fresh("v", *args, W, Var(x))
        frozen = Lam(x, ENT, Lam(v, WLD, App(App(P, Var(x)), W)))
        return Lam(w, WLD, App(App(phi, frozen), W))
    if op == "down":
        ext = Lam(x, ENT, App(App(P, Var(x)), W))
        return Lam(w, WLD, App(App(phi, ext), W))
    if op == "down1":
        z = _fresh("z", *args, W, Var(x))
        ext = Lam(x, ENT, App(App(P, Var(x)), W))
        return Lam(z, ENT, Lam(w, WLD, App(App(App(phi, ext), Var(z)), W)))
    raise NotAPrimitive(f"{op} is not a lifted primitive")


def _expand_quant(t: Quant) -> Term:
    if t.kind in ("all", "ex"):
        raise NotAPrimitive(f"{t.kind} is a core quantifier")
    phi = t.body
    w = _fresh("w", phi)
    W = Var(w)
    x = _fresh("x" if t.kind in ("forall", "exists") else "z", phi, W)
    X = Var(x)
    inst = App(App(phi, X), W)
    if t.kind == "forall":
        return Lam(w, WLD, _all(x, t.ty, inst))
    if t.kind == "exists":
        return Lam(w, WLD, _ex(x, t.ty, inst))
    guard = App(App(Sym("existsAt"), X), W)
    if t.kind == "forallE":
        return Lam(w, WLD, _all(x, ENT, _h("himp", guard, inst)))
    return Lam(w, WLD, _ex(x, ENT, _h("hand", guard, inst)))


def is_lifted(t: Term) -> bool:
    if isinstance(t, Prim):
        return t.op not in CORE_OPS
    if isinstance(t, Quant):
        return t.kind not in ("all", "ex")
    return False


def expand_all(t: Term) -> Term:
    """Unfold every lifted construct, bottom-up."""
    if isinstance(t, (Var, Sym, Const)):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, expand_all(t.body))
    if isinstance(t, App):
        return App(expand_all(t.fn), expand_all(t.arg))
    if isinstance(t, Prim):
        node = Prim(t.op, tuple(expand_all(a) for a in t.args))
    else:
        node = Quant(t.kind, t.ty, expand_all(t.body))
    if is_lifted(node):
        # the unfolding of dia mentions other lifted primitives
        return expand_all(expand_primitive(node))
    return node


def beta_normalize(t: Term) -> Term:
    """Normal-order beta reduction (terms are simply typed, so this terminates)."""
    if isinstance(t, App):
        fn = beta_normalize(t.fn)
        if isinstance(fn, Lam):
            return beta_normalize(substitute(fn.body, fn.var, t.arg))
        return App(fn, beta_normalize(t.arg))
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, beta_normalize(t.body))
    if isinstance(t, Prim):
        return Prim(t.op, tuple(beta_normalize(a) for a in t.args))
    if isinstance(t, Quant):
        return Quant(t.kind, t.ty, beta_normalize(t.body))
    return t
