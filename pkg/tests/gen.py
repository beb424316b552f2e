"""Seeded generators for well-typed closed terms and random finite models."""

import random

from ihoml.carriers import Dims, Value, random_value
from ihoml.model import Frame, Model
from ihoml.terms import App, Lam, Prim, Quant, Sym, Var
from ihoml.types import DELTA, ENT, GAMMA, SIGMA, TRU, Fun

GS = Fun(GAMMA, SIGMA)
DS = Fun(DELTA, SIGMA)
DG = Fun(DELTA, GAMMA)

# symbols interpreted by random models
SIGNATURE = {"P": GS, "Q": GAMMA, "R": SIGMA, "F": DS}

# quantifiable types: small carriers at (2,2)
QUANT_TYPES = (ENT, DELTA, GAMMA, SIGMA)


def random_model(rng: random.Random, max_worlds=2, max_entities=2, signature=SIGNATURE) -> Model:
    nW = rng.randint(1, max_worlds)
    nE = rng.randint(1, max_entities)
    pairs = [(a, b) for a in range(nW) for b in range(nW)]
    frame = Frame(nW, frozenset(p for p in pairs if rng.random() < 0.5))
    dims = Dims(nE, nW)
    exists = random_value(GAMMA, dims, rng)
    interp = tuple(sorted((name, Value(ty, random_value(ty, dims, rng))) for name, ty in signature.items()))
    return Model(frame, nE, exists, interp)


class TermGen:
    """Type-directed random terms over SIGNATURE plus r and existsAt."""

    def __init__(self, rng: random.Random, max_depth=4):
        self.rng = rng
        self.max_depth = max_depth
        self.counter = 0

    def fresh(self, base):
        self.counter += 1
        return f"{base}{self.counter}"

    def term(self, ty=SIGMA):
        return self.gen(ty, (), self.max_depth)

    def _vars(self, ctx, ty):
        return [Var(n) for n, t in ctx if t == ty]

    def _binder(self, kind, ty, ctx, depth, body_ty):
        x = self.fresh("x")
        body = self.gen(body_ty, ctx + ((x, ty),), depth - 1)
        return Quant(kind, ty, Lam(x, ty, body))

    def _lam(self, ty, ctx, depth):
        x = self.fresh("y")
        return Lam(x, ty.dom, self.gen(ty.cod, ctx + ((x, ty.dom),), depth - 1))

    def gen(self, ty, ctx, depth):
        rng = self.rng
        vs = self._vars(ctx, ty)
        if vs and rng.random() < 0.3:
            return rng.choice(vs)
        leaf = depth <= 0 or rng.random() < 0.08
        if ty == ENT:
            if vs:
                return rng.choice(vs)
            raise _NoTerm
        if ty == TRU:
            return self._truth(ctx, depth, leaf)
        if ty == SIGMA:
            return self._sigma(ctx, depth, leaf)
        if ty == DELTA:
            if leaf:
                return Lam("z", ENT, Prim(rng.choice(("htrue", "hfalse"))))
            if rng.random() < 0.3:
                return Prim("negd", (self.gen(DELTA, ctx, depth - 1),))
            return self._lam(ty, ctx, depth)
        if ty == GAMMA:
            if leaf:
                return rng.choice((Sym("Q"), Sym("existsAt")))
            pick = rng.randrange(4)
            if pick == 0:
                return Prim("negg", (self.gen(GAMMA, ctx, depth - 1),))
            if pick == 1:
                return Prim("down1", (self.gen(DG, ctx, depth - 1), self.gen(GAMMA, ctx, depth - 1)))
            return self._lam(ty, ctx, depth)
        if ty == GS and (leaf or rng.random() < 0.4):
            return Sym("P")
        if ty == DS and (leaf or rng.random() < 0.4):
            return Sym("F")
        if isinstance(ty, Fun):
            return self._lam(ty, ctx, depth)
        raise _NoTerm

    def _try(self, make, fallback):
        try:
            return make()
        except _NoTerm:
            return fallback()

    def _truth(self, ctx, depth, leaf):
        rng = self.rng
        if leaf:
            return Prim(rng.choice(("htrue", "hfalse")))
        pick = rng.randrange(8)
        d = depth - 1
        if pick == 0:
            return Prim("hnot", (self.gen(TRU, ctx, d),))
        if pick == 1:
            return Prim(rng.choice(("hand", "hor", "himp", "hiff")), (self.gen(TRU, ctx, d), self.gen(TRU, ctx, d)))
        if pick == 2:
            return Prim("valid", (self.gen(SIGMA, ctx, d),))
        if pick == 3:
            ty = rng.choice((DELTA, SIGMA, GAMMA))
            return Prim("eq", (self.gen(ty, ctx, d), self.gen(ty, ctx, d)))
        if pick == 4:
            return self._binder(rng.choice(("all", "ex")), rng.choice(QUANT_TYPES), ctx, depth, TRU)
        if pick == 5:
            return self._try(lambda: App(self.gen(DELTA, ctx, d), self.gen(ENT, ctx, d)),
                             lambda: Prim("hfalse"))
        return Prim(rng.choice(("htrue", "hfalse")))

    def _sigma(self, ctx, depth, leaf):
        rng = self.rng
        if leaf:
            return rng.choice((Prim("mtrue"), Prim("mfalse"), Sym("R")))
        d = depth - 1
        pick = rng.randrange(13)
        if pick == 0:
            return Prim("mnot", (self.gen(SIGMA, ctx, d),))
        if pick == 1:
            op = rng.choice(("mand", "mor", "mimp", "mequ"))
            return Prim(op, (self.gen(SIGMA, ctx, d), self.gen(SIGMA, ctx, d)))
        if pick == 2:
            return Prim(rng.choice(("box", "dia")), (self.gen(SIGMA, ctx, d),))
        if pick == 3:
            return Prim("rigid", (self.gen(TRU, ctx, d),))
        if pick == 4:
            return Prim("downb", (self.gen(GS, ctx, d), self.gen(GAMMA, ctx, d)))
        if pick == 5:
            return Prim("down", (self.gen(DS, ctx, d), self.gen(GAMMA, ctx, d)))
        if pick in (6, 7):
            return self._binder(rng.choice(("forall", "exists")), rng.choice(QUANT_TYPES), ctx, depth, SIGMA)
        if pick == 8:
            return self._binder(rng.choice(("forallE", "existsE")), ENT, ctx, depth, SIGMA)
        if pick == 9:
            return self._try(lambda: App(self.gen(GAMMA, ctx, d), self.gen(ENT, ctx, d)), lambda: Sym("R"))
        if pick == 10:
            return App(self.gen(GS, ctx, d), self.gen(GAMMA, ctx, d))
        if pick == 11:
            # beta redex
            ty = rng.choice(QUANT_TYPES)
            try:
                arg = self.gen(ty, ctx, d)
            except _NoTerm:
                ty, arg = SIGMA, self.gen(SIGMA, ctx, d)
            x = self.fresh("b")
            return App(Lam(x, ty, self.gen(SIGMA, ctx + ((x, ty),), d)), arg)
        return App(self.gen(DS, ctx, d), self._try(lambda: self.gen(DELTA, ctx, d),
                                                    lambda: Lam("z", ENT, Prim("htrue"))))


class _NoTerm(Exception):
    pass


def random_terms(seed, count, ty=SIGMA, max_depth=4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        gen = TermGen(rng, max_depth)
        try:
            out.append(gen.term(ty))
        except _NoTerm:
            continue
    return out
