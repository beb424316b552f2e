"""Surface syntax for IHOML terms and types.

Grammar (ASCII only)::

    type    ::= tatom [ "=>" type ]
    tatom   ::= "e" | "i" | "o" | "d" | "s" | "g" | "t" | "(" type ")"

    term    ::= binder | iff
    binder  ::= ("forall" | "exists" | "all" | "ex" | "\") IDENT ":" type "." term
              | ("forallE" | "existsE") IDENT [":" "e"] "." term
    iff     ::= imp [ "<->" iff ]
    imp     ::= or [ "->" imp ]
    or      ::= and { "|" and }
    and     ::= unary { "&" unary }
    unary   ::= ("~" | "box" | "dia") unary | binder | app
    app     ::= head { atom }
    head    ::= ("mnot" | "negd" | "negg" | "hnot") atom
              | ("mand" | "mor" | "mimp" | "mequ" | "hand" | "hor" | "himp" | "hiff") atom atom
              | ("forall" | "exists" | "all" | "ex") "[" type "]" atom
              | ("forallE" | "existsE") atom
              | atom
    atom    ::= IDENT | "(" term ")" | "mfalse" | "mtrue" | "htrue" | "hfalse"
              | "rigid" "(" term ")" | "valid" "[" term "]"
              | ("down" | "downb" | "down1" | "eq") "(" term "," term ")"

Binders extend as far right as possible.  An identifier is a variable when
bound by an enclosing binder (or listed in ``free``), otherwise a symbol.
``#`` starts a comment.

Symbol mapping: ``~ & | -> <->`` are the lifted connectives, ``box``/``dia``
the modalities, ``negd``/``negg`` property negation on d and g,
``rigid(p)`` the rigid lifting of a truth value, ``downb``/``down``/``down1``
the extension operators (bold, plain, indexed), ``valid[...]`` global
validity; ``h*``, ``all``, ``ex`` and ``eq`` are the plain HOL level.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .terms import OP_ARITY, App, Const, Lam, Prim, Quant, Sym, Term, Var
from .typecheck import typecheck
from .types import ABBREVIATIONS, BASES, ENT, Fun, SemanticType, format_type


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __str__(self):
        return f"line {self.line}, column {self.column}"


KEYWORDS = frozenset(OP_ARITY) | {"forall", "exists", "forallE", "existsE", "all", "ex"}
UNARY_KW = ("mnot", "negd", "negg", "hnot")
BINARY_KW = ("mand", "mor", "mimp", "mequ", "hand", "hor", "himp", "hiff")
CALL2 = ("down", "downb", "down1", "eq")
CONSTS = ("mfalse", "mtrue", "htrue", "hfalse")
TYPED_QUANTS = ("forall", "exists", "all", "ex")
ENT_QUANTS = ("forallE", "existsE")

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op><->|->|=>|:=|[()\[\],.:\\~&|])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'op', 'eof'
    text: str
    span: SourceSpan


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1, line, pos - line_start + 1))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), SourceSpan(pos, m.end(), line, pos - line_start + 1)))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(pos, pos, line, pos - line_start + 1)))
    return tokens


class Parser:
    def __init__(self, text: str, free=()):
        self.toks = tokenize(text)
        self.i = 0
        self.bound = list(free)
        self.spans = {}

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", self.tok.span)
        return self.advance()

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise ParseError(f"expected an identifier, found {t.text or 'end of input'!r}", t.span)
        return self.advance()

    def mark(self, node, start: Token):
        end = self.toks[self.i - 1].span if self.i > 0 else start.span
        self.spans[id(node)] = SourceSpan(start.span.start, end.end, start.span.line, start.span.column)
        return node

    def done(self):
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.span)

    # -- types
    def type_(self) -> SemanticType:
        left = self.type_atom()
        if self.at("=>"):
            self.advance()
            return Fun(left, self.type_())
        return left

    def type_atom(self) -> SemanticType:
        t = self.tok
        if self.at("("):
            self.advance()
            ty = self.type_()
            self.expect(")")
            return ty
        if t.kind == "ident" and t.text in BASES:
            self.advance()
            return BASES[t.text]
        if t.kind == "ident" and t.text in ABBREVIATIONS:
            self.advance()
            return ABBREVIATIONS[t.text]
        raise ParseError(f"expected a type, found {t.text or 'end of input'!r}", t.span)

    # -- terms
    def term(self) -> Term:
        if self.starts_binder():
            return self.binder()
        return self.iff()

    def starts_binder(self) -> bool:
        t = self.tok
        if t.kind == "op" and t.text == "\\":
            return True
        if t.kind != "ident":
            return False
        if t.text in TYPED_QUANTS:
            return self.peek().kind == "ident"
        if t.text in ENT_QUANTS:
            return self.peek().kind == "ident" and self.peek(2).text in (":", ".")
        return False

    def binder(self) -> Term:
        start = self.advance()
        name = self.ident().text
        if start.text in ENT_QUANTS:
            ty = ENT
            if self.at(":"):
                self.advance()
                at = self.tok
                ty = self.type_()
                if ty != ENT:
                    raise ParseError(f"{start.text} binds entities only", at.span)
        else:
            self.expect(":")
            ty = self.type_()
        self.expect(".")
        self.bound.append(name)
        try:
            body = self.term()
        finally:
            self.bound.pop()
        lam = Lam(name, ty, body)
        if start.text == "\\":
            return self.mark(lam, start)
        self.mark(lam, start)
        return self.mark(Quant(start.text, ty, lam), start)

    def iff(self) -> Term:
        start = self.tok
        left = self.imp()
        if self.at("<->"):
            self.advance()
            return self.mark(Prim("mequ", (left, self.iff())), start)
        return left

    def imp(self) -> Term:
        start = self.tok
        left = self.or_()
        if self.at("->"):
            self.advance()
            return self.mark(Prim("mimp", (left, self.imp())), start)
        return left

    def or_(self) -> Term:
        start = self.tok
        left = self.and_()
        while self.at("|"):
            self.advance()
            left = self.mark(Prim("mor", (left, self.and_())), start)
        return left

    def and_(self) -> Term:
        start = self.tok
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = self.mark(Prim("mand", (left, self.unary())), start)
        return left

    def unary(self) -> Term:
        start = self.tok
        if self.at("~"):
            self.advance()
            return self.mark(Prim("mnot", (self.unary(),)), start)
        if start.kind == "ident" and start.text in ("box", "dia"):
            self.advance()
            return self.mark(Prim(start.text, (self.unary(),)), start)
        if self.starts_binder():
            return self.binder()
        return self.app()

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "op":
            return t.text == "("
        if t.kind != "ident":
            return False
        return t.text not in KEYWORDS or t.text in CONSTS or t.text in CALL2 or t.text in ("rigid", "valid")

    def app(self) -> Term:
        start = self.tok
        head = self.head()
        while self.starts_atom():
            head = self.mark(App(head, self.atom()), start)
        return head

    def required_atom(self, kw: Token) -> Term:
        if not self.starts_atom():
            got = self.tok.text or "end of input"
            n = OP_ARITY.get(kw.text, 1)
            raise ParseError(f"{kw.text} expects {n} argument{'s' if n > 1 else ''}, found {got!r}", self.tok.span)
        return self.atom()

    def head(self) -> Term:
        t = self.tok
        if t.kind == "ident" and t.text in UNARY_KW:
            self.advance()
            return self.mark(Prim(t.text, (self.required_atom(t),)), t)
        if t.kind == "ident" and t.text in BINARY_KW:
            self.advance()
            a = self.required_atom(t)
            b = self.required_atom(t)
            return self.mark(Prim(t.text, (a, b)), t)
        if t.kind == "ident" and t.text in TYPED_QUANTS:
            self.advance()
            self.expect("[")
            ty = self.type_()
            self.expect("]")
            return self.mark(Quant(t.text, ty, self.required_atom(t)), t)
        if t.kind == "ident" and t.text in ENT_QUANTS:
            self.advance()
            return self.mark(Quant(t.text, ENT, self.required_atom(t)), t)
        if t.kind == "ident" and t.text in ("box", "dia"):
            raise ParseError(f"{t.text} needs parentheses in argument position", t.span)
        return self.atom()

    def atom(self) -> Term:
        t = self.tok
        if self.at("("):
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind != "ident":
            raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.span)
        if t.text in CONSTS:
            self.advance()
            return self.mark(Prim(t.text), t)
        if t.text == "rigid":
            self.advance()
            self.expect("(")
            a = self.term()
            self.expect(")")
            return self.mark(Prim("rigid", (a,)), t)
        if t.text == "valid":
            self.advance()
            self.expect("[")
            a = self.term()
            self.expect("]")
            return self.mark(Prim("valid", (a,)), t)
        if t.text in CALL2:
            self.advance()
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return self.mark(Prim(t.text, (a, b)), t)
        if t.text in KEYWORDS:
            raise ParseError(f"{t.text!r} cannot appear here", t.span)
        self.advance()
        node = Var(t.text) if t.text in self.bound else Sym(t.text)
        return self.mark(node, t)


def parse_type(text: str) -> SemanticType:
    p = Parser(text)
    ty = p.type_()
    p.done()
    return ty


def parse_term(text: str, signature=None, free=()) -> Term:
    """Parse ``text``; when ``signature`` is given the result is also type checked."""
    p = Parser(text, free)
    t = p.term()
    p.done()
    if signature is not None:
        typecheck(t, None, signature, p.spans)
    return t


def parse_term_with_spans(text: str, free=()):
    p = Parser(text, free)
    t = p.term()
    p.done()
    return t, p.spans


# -- printing

_LEVEL = {"mequ": 1, "mimp": 2, "mor": 3, "mand": 4}
_INFIX = {"mequ": "<->", "mimp": "->", "mor": "|", "mand": "&"}
ATOM, APP, UNARY = 7, 6, 5


def print_type(ty: SemanticType) -> str:
    return format_type(ty)


def print_term(t: Term) -> str:
    return _pr(t, 0, True)


def _paren(s, needed):
    return f"({s})" if needed else s


def _is_binder(t) -> bool:
    if isinstance(t, Lam):
        return True
    return isinstance(t, Quant) and isinstance(t.body, Lam) and t.body.ty == t.ty


def _pr(t: Term, ctx: int, rightmost: bool) -> str:
    """Render ``t`` where the context demands precedence ``ctx``.

    ``rightmost`` says nothing follows ``t`` in the enclosing expression, so
    a binder there needs no parentheses.
    """
    if isinstance(t, (Var, Sym)):
        return t.name
    if isinstance(t, Const):
        raise ValueError("terms containing evaluated constants have no surface syntax")
    if _is_binder(t):
        if isinstance(t, Lam):
            s = f"\\{t.var}:{format_type(t.ty)}. {_pr(t.body, 0, True)}"
        else:
            lam = t.body
            annot = "" if t.kind in ENT_QUANTS else f":{format_type(lam.ty)}"
            s = f"{t.kind} {lam.var}{annot}. {_pr(lam.body, 0, True)}"
        # binders sit at unary level but swallow everything to their right
        return _paren(s, ctx > UNARY or not rightmost)
    if isinstance(t, Quant):
        if t.kind in ENT_QUANTS:
            s = f"{t.kind} {_pr(t.body, ATOM, True)}"
        else:
            s = f"{t.kind}[{format_type(t.ty)}] {_pr(t.body, ATOM, True)}"
        return _paren(s, ctx > APP)
    if isinstance(t, App):
        s = f"{_pr(t.fn, APP, False)} {_pr(t.arg, ATOM, True)}"
        return _paren(s, ctx > APP)
    op, args = t.op, t.args
    if op in CONSTS:
        return op
    if op in _INFIX:
        lvl = _LEVEL[op]
        left_assoc = op in ("mor", "mand")
        needed = ctx > lvl
        lhs = _pr(args[0], lvl if left_assoc else lvl + 1, False)
        rhs = _pr(args[1], lvl + 1 if left_assoc else lvl, needed or rightmost)
        return _paren(f"{lhs} {_INFIX[op]} {rhs}", needed)
    if op in ("mnot", "box", "dia"):
        sym = "~" if op == "mnot" else op + " "
        needed = ctx > UNARY
        inner = _pr(args[0], UNARY, needed or rightmost)
        return _paren(f"{sym}{inner}", needed)
    if op in ("negd", "negg", "hnot") or op in BINARY_KW:
        s = " ".join([op] + [_pr(a, ATOM, True) for a in args])
        return _paren(s, ctx > APP)
    if op == "rigid":
        return f"rigid({_pr(args[0], 0, True)})"
    if op == "valid":
        return f"valid[{_pr(args[0], 0, True)}]"
    if op in CALL2:
        return f"{op}({_pr(args[0], 0, True)}, {_pr(args[1], 0, True)})"
    raise ValueError(f"cannot print primitive {op!r}")
