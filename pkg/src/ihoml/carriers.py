"""Finite carriers of semantic types and canonical values.

Raw representation used throughout the package:

* ``o`` -> ``bool``
* ``e``, ``i`` -> ``int`` index
* ``a => b`` -> ``tuple`` of raw ``b`` values, one per element of the ``a``
  carrier, in carrier order.

Carriers are ordered canonically (False < True, indices ascending, tables
lexicographically with the first domain element most significant), so tuple
equality is extensional equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import CarrierSizeOverflow, CarrierTooLarge, TypeMismatch
from .types import ENT, TRU, WLD, Base, Fun, SemanticType, format_type

DEFAULT_CAP = 2 ** 24
# beyond this many bits we refuse to build the exact integer
_MAX_SIZE_BITS = 1 << 20
# carriers up to this size get a memoized value->index dict
_INDEX_MAP_LIMIT = 1 << 16


class Dims(NamedTuple):
    entities: int
    worlds: int

    def __str__(self):
        return f"|E|={self.entities},|W|={self.worlds}"


def _check_dims(dims):
    if dims.entities < 1 or dims.worlds < 1:
        raise ValueError(f"bounds must be positive, got {dims}")


def base_size(ty: Base, dims: Dims) -> int:
    if ty == ENT:
        return dims.entities
    if ty == WLD:
        return dims.worlds
    if ty == TRU:
        return 2
    raise TypeMismatch(f"unknown base type {ty!r}")


@lru_cache(maxsize=None)
def carrier_size(ty: SemanticType, dims: Dims) -> int:
    """Exact number of elements of the carrier of ``ty``.

    Raises CarrierSizeOverflow when the number would need more than 2**20
    bits; it is never truncated.
    """
    dims = Dims(*dims)
    _check_dims(dims)
    if isinstance(ty, Base):
        return base_size(ty, dims)
    dom = carrier_size(ty.dom, dims)
    cod = carrier_size(ty.cod, dims)
    if cod == 1:
        return 1
    if dom * (cod - 1).bit_length() > _MAX_SIZE_BITS:
        raise CarrierSizeOverflow(ty, f"more than 2**{_MAX_SIZE_BITS}", "n/a")
    return cod ** dom


def log2_carrier_size(ty: SemanticType, dims: Dims) -> float:
    """log2 of the carrier size; usable where the exact size overflows."""
    import math

    if isinstance(ty, Base):
        return math.log2(base_size(ty, dims))
    try:
        dom = carrier_size(ty.dom, dims)
    except CarrierSizeOverflow:
        return math.inf
    return dom * log2_carrier_size(ty.cod, dims)


def within_cap(ty: SemanticType, dims: Dims, cap: int = DEFAULT_CAP) -> bool:
    try:
        return carrier_size(ty, dims) <= cap
    except CarrierSizeOverflow:
        return False


def require_enumerable(ty: SemanticType, dims: Dims, cap: int = DEFAULT_CAP) -> int:
    try:
        n = carrier_size(ty, dims)
    except CarrierSizeOverflow:
        raise CarrierTooLarge(ty, "an unrepresentable number of", cap) from None
    if n > cap:
        raise CarrierTooLarge(ty, str(n), cap)
    return n


@lru_cache(maxsize=256)
def _carrier(ty: SemanticType, dims: Dims) -> tuple:
    if isinstance(ty, Base):
        if ty == TRU:
            return (False, True)
        return tuple(range(base_size(ty, dims)))
    dom_n = carrier_size(ty.dom, dims)
    cod = _carrier(ty.cod, dims)
    return tuple(itertools.product(cod, repeat=dom_n))


def enumerate_carrier(ty: SemanticType, dims: Dims, cap: int = DEFAULT_CAP) -> tuple:
    """All raw elements of the carrier of ``ty`` in canonical order."""
    dims = Dims(*dims)
    _check_dims(dims)
    require_enumerable(ty, dims, cap)
    return _carrier(ty, dims)


@lru_cache(maxsize=256)
def index_map(ty: SemanticType, dims: Dims) -> dict:
    return {v: i for i, v in enumerate(_carrier(ty, dims))}


def index_of(ty: SemanticType, dims: Dims, raw) -> int:
    """Position of ``raw`` in the canonical carrier order of ``ty``."""
    if isinstance(ty, Base):
        return int(raw)
    if within_cap(ty, dims, _INDEX_MAP_LIMIT):
        return index_map(ty, dims)[raw]
    cod_n = carrier_size(ty.cod, dims)
    idx = 0
    for x in raw:
        idx = idx * cod_n + index_of(ty.cod, dims, x)
    return idx


def value_at(ty: SemanticType, dims: Dims, i: int):
    """Inverse of index_of; works for carriers beyond the enumeration cap."""
    if isinstance(ty, Base):
        if ty == TRU:
            return bool(i)
        return i
    n = carrier_size(ty.dom, dims)
    cod_n = carrier_size(ty.cod, dims)
    digits = []
    for _ in range(n):
        i, d = divmod(i, cod_n)
        digits.append(value_at(ty.cod, dims, d))
    if i:
        raise IndexError("index outside carrier")
    return tuple(reversed(digits))


def is_member(ty: SemanticType, dims: Dims, raw) -> bool:
    if ty == TRU:
        return isinstance(raw, bool)
    if isinstance(ty, Base):
        return isinstance(raw, int) and not isinstance(raw, bool) and 0 <= raw < base_size(ty, dims)
    if not isinstance(raw, tuple):
        return False
    if len(raw) != carrier_size(ty.dom, dims):
        return False
    return all(is_member(ty.cod, dims, x) for x in raw)


def random_value(ty: SemanticType, dims: Dims, rng):
    """Uniform random carrier element (``rng`` is a ``random.Random``)."""
    if ty == TRU:
        return rng.random() < 0.5
    if isinstance(ty, Base):
        return rng.randrange(base_size(ty, dims))
    n = carrier_size(ty.dom, dims)
    return tuple(random_value(ty.cod, dims, rng) for _ in range(n))


def constant_table(ty: Fun, dims: Dims, raw):
    return (raw,) * carrier_size(ty.dom, dims)


@dataclass(frozen=True)
class Value:
    """A denotation together with its type."""

    ty: SemanticType
    raw: object

    def apply(self, arg: "Value", dims: Dims) -> "Value":
        if not isinstance(self.ty, Fun):
            raise TypeMismatch(f"cannot apply a value of type {self.ty!r}")
        if arg.ty != self.ty.dom:
            raise TypeMismatch(f"argument of type {arg.ty!r}, expected {self.ty.dom!r}")
        return Value(self.ty.cod, self.raw[index_of(self.ty.dom, dims, arg.raw)])

    def check(self, dims: Dims) -> "Value":
        if not is_member(self.ty, dims, self.raw):
            raise TypeMismatch(f"value is not a member of the {format_type(self.ty)} carrier at {dims}")
        return self

    def __repr__(self):
        return f"Value({format_type(self.ty)}, {self.raw!r})"


def truth(b: bool) -> Value:
    return Value(TRU, bool(b))


def entity(i: int) -> Value:
    return Value(ENT, i)


def world(i: int) -> Value:
    return Value(WLD, i)


def raw_to_json(raw):
    if isinstance(raw, tuple):
        return [raw_to_json(x) for x in raw]
    return raw


def raw_from_json(ty: SemanticType, data):
    if ty == TRU:
        if not isinstance(data, bool):
            raise TypeMismatch(f"expected a boolean, got {data!r}")
        return data
    if isinstance(ty, Base):
        if not isinstance(data, int) or isinstance(data, bool):
            raise TypeMismatch(f"expected an index, got {data!r}")
        return data
    if not isinstance(data, list):
        raise TypeMismatch(f"expected a table for {format_type(ty)}, got {data!r}")
    return tuple(raw_from_json(ty.cod, x) for x in data)
