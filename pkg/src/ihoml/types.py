"""Simple types over entities, worlds and truth values."""

from __future__ import annotations

from dataclasses import dataclass


class SemanticType:
    __slots__ = ()

    def __rshift__(self, other: "SemanticType") -> "Fun":
        # ENT >> SIGMA reads as e => s
        return Fun(self, other)


@dataclass(frozen=True, repr=False)
class Base(SemanticType):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True, repr=False)
class Fun(SemanticType):
    dom: SemanticType
    cod: SemanticType

    def __repr__(self):
        return format_type(self)


ENT = Base("e")
WLD = Base("i")
TRU = Base("o")

DELTA = Fun(ENT, TRU)
SIGMA = Fun(WLD, TRU)
GAMMA = Fun(ENT, SIGMA)
TAU = Fun(WLD, SIGMA)

ABBREVIATIONS = {"d": DELTA, "s": SIGMA, "g": GAMMA, "t": TAU}
BASES = {"e": ENT, "i": WLD, "o": TRU}
_NAMES = {v: k for k, v in ABBREVIATIONS.items()}


def format_type(ty: SemanticType, abbreviate: bool = True) -> str:
    """Render a type in the DSL's type syntax (``g => s`` etc.)."""
    if abbreviate and ty in _NAMES:
        return _NAMES[ty]
    if isinstance(ty, Base):
        return ty.name
    dom = format_type(ty.dom, abbreviate)
    if isinstance(ty.dom, Fun) and not (abbreviate and ty.dom in _NAMES):
        dom = f"({dom})"
    return f"{dom} => {format_type(ty.cod, abbreviate)}"
