"""Kripke frames, frame classes and finite models."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

from .carriers import Dims, Value, is_member, raw_from_json, raw_to_json
from .errors import EmptyDomain, FrameClassViolation, TypeMismatch
from .types import GAMMA, TAU, format_type


class FrameClass(enum.Enum):
    K = "K"
    KB = "KB"
    S5 = "S5"

    @classmethod
    def parse(cls, name) -> "FrameClass":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise ValueError(f"unknown logic {name!r}; expected one of K, KB, S5") from None


@dataclass(frozen=True)
class Frame:
    worlds: int
    access: frozenset = frozenset()

    def __post_init__(self):
        if self.worlds < 1:
            raise ValueError("a frame needs at least one world")
        object.__setattr__(self, "access", frozenset((int(a), int(b)) for a, b in self.access))
        for a, b in self.access:
            if not (0 <= a < self.worlds and 0 <= b < self.worlds):
                raise ValueError(f"accessibility pair {(a, b)} outside {self.worlds} worlds")

    @cached_property
    def successors(self) -> tuple:
        return tuple(tuple(v for v in range(self.worlds) if (w, v) in self.access)
                     for w in range(self.worlds))

    @property
    def relation_table(self) -> tuple:
        """The accessibility relation as a raw value of type t (i => i => o)."""
        return tuple(tuple((w, v) in self.access for v in range(self.worlds))
                     for w in range(self.worlds))

    @classmethod
    def from_table(cls, table) -> "Frame":
        n = len(table)
        return cls(n, frozenset((w, v) for w in range(n) for v in range(n) if table[w][v]))

    def components(self) -> list:
        """Connected components of the (undirected) accessibility graph, in world order."""
        parent = list(range(self.worlds))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.access:
            parent[find(a)] = find(b)
        groups = {}
        for w in range(self.worlds):
            groups.setdefault(find(w), []).append(w)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def frame_satisfies(frame: Frame, frame_class: FrameClass) -> bool:
    frame_class = FrameClass.parse(frame_class)
    r = frame.access
    symmetric = all((b, a) in r for a, b in r)
    if frame_class is FrameClass.K:
        return True
    if frame_class is FrameClass.KB:
        return symmetric
    reflexive = all((w, w) in r for w in range(frame.worlds))
    transitive = all((a, d) in r for a, b in r for c, d in r if b == c)
    return reflexive and symmetric and transitive


def enumerate_frames(worlds: int, frame_class: FrameClass):
    """Frames of the class over ``worlds`` worlds, in canonical t-carrier order."""
    frame_class = FrameClass.parse(frame_class)
    pairs = [(w, v) for w in range(worlds) for v in range(worlds)]
    # product over pairs with False first and the first pair most significant
    for bits in itertools.product((False, True), repeat=len(pairs)):
        frame = Frame(worlds, frozenset(p for p, b in zip(pairs, bits) if b))
        if frame_satisfies(frame, frame_class):
            yield frame


def exists_table(entities: int, worlds: int, pairs) -> tuple:
    pairs = set(pairs)
    return tuple(tuple((e, w) in pairs for w in range(worlds)) for e in range(entities))


@dataclass(frozen=True)
class Model:
    frame: Frame
    entities: int
    exists_at: tuple
    interp: tuple = field(default=())  # sorted (name, Value) pairs

    @property
    def dims(self) -> Dims:
        return Dims(self.entities, self.frame.worlds)

    @property
    def worlds(self) -> int:
        return self.frame.worlds

    @cached_property
    def symbols(self) -> dict:
        return dict(self.interp)

    def symbol(self, name: str) -> Value:
        if name == "r":
            return Value(TAU, self.frame.relation_table)
        if name == "existsAt":
            return Value(GAMMA, self.exists_at)
        return self.symbols[name]

    def with_interp(self, **updates) -> "Model":
        syms = dict(self.interp)
        syms.update(updates)
        return Model(self.frame, self.entities, self.exists_at, tuple(sorted(syms.items())))

    def describe(self) -> str:
        acc = sorted(self.frame.access)
        ex = [(e, w) for e in range(self.entities) for w in range(self.worlds) if self.exists_at[e][w]]
        return f"worlds={self.worlds} entities={self.entities} r={acc} existsAt={ex}"


def make_model(frame: Frame, entities: int, exists_at=None, interp=None,
               frame_class=FrameClass.K, signature=None) -> Model:
    """Validated model construction.

    ``exists_at`` is a raw table of type g or an iterable of (entity, world)
    pairs; ``None`` means every entity exists everywhere.  ``signature`` maps
    symbol names to their declared types.
    """
    if entities < 1:
        raise EmptyDomain("the entity domain must be nonempty")
    if not frame_satisfies(frame, frame_class):
        raise FrameClassViolation(f"accessibility {sorted(frame.access)} is not a {FrameClass.parse(frame_class).value} frame")
    dims = Dims(entities, frame.worlds)
    if exists_at is None:
        table = tuple((True,) * frame.worlds for _ in range(entities))
    elif isinstance(exists_at, tuple) and is_member(GAMMA, dims, exists_at):
        table = exists_at
    else:
        pairs = list(exists_at)
        for e, w in pairs:
            if not (0 <= e < entities and 0 <= w < frame.worlds):
                raise ValueError(f"existsAt entry {(e, w)} out of range")
        table = exists_table(entities, frame.worlds, pairs)
    interp = dict(interp or {})
    signature = signature or {}
    for name, val in interp.items():
        if not isinstance(val, Value):
            raise TypeMismatch(f"interpretation of {name} must be a Value")
        declared = signature.get(name)
        if declared is not None and declared != val.ty:
            raise TypeMismatch(f"{name} declared at {format_type(declared)} but given at {format_type(val.ty)}")
        if not is_member(val.ty, dims, val.raw):
            raise TypeMismatch(f"{name}: table is not a member of the {format_type(val.ty)} carrier at {dims}")
    missing = set(signature) - set(interp)
    if missing:
        raise TypeMismatch(f"no interpretation for {sorted(missing)}")
    return Model(frame, entities, table, tuple(sorted(interp.items())))


def model_to_json(m: Model) -> dict:
    return {
        "worlds": m.worlds,
        "entities": m.entities,
        "accessibility": [list(p) for p in sorted(m.frame.access)],
        "existsAt": [[e, w] for e in range(m.entities) for w in range(m.worlds) if m.exists_at[e][w]],
        "interp": {name: {"type": format_type(v.ty), "table": raw_to_json(v.raw)} for name, v in m.interp},
    }


def model_from_json(data: dict, frame_class=FrameClass.K, signature=None) -> Model:
    from .syntax import parse_type

    frame = Frame(int(data["worlds"]), frozenset(tuple(p) for p in data.get("accessibility", [])))
    interp = {}
    for name, entry in data.get("interp", {}).items():
        ty = parse_type(entry["type"])
        interp[name] = Value(ty, raw_from_json(ty, entry["table"]))
    pairs = [tuple(p) for p in data.get("existsAt", [])]
    return make_model(frame, int(data["entities"]), pairs, interp, frame_class, signature)


def dump_model(m: Model) -> str:
    return json.dumps(model_to_json(m), sort_keys=True)


def load_model(path, frame_class=FrameClass.K, signature=None) -> Model:
    with open(path) as fh:
        return model_from_json(json.load(fh), frame_class, signature)
