"""Value types: words, labeled graphs, SFT data, shift specs and block codes.

Symbols are arbitrary hashable values whose ``str()`` is their canonical
text (plain strings for user input, :class:`ChoiceSymbol` for multi-choice
alphabets). Words are tuples of symbols. Everything here is immutable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import UndefinedWindow

Symbol = Hashable
Word = tuple


def multichar(alphabet: Iterable[Symbol]) -> bool:
    return any(len(str(s)) != 1 for s in alphabet)


def word_text(word: Sequence[Symbol], sep: str | None = None) -> str:
    """Render a word; symbols are joined by "." when any is multi-character."""
    parts = [str(s) for s in word]
    if sep is None:
        sep = "." if any(len(p) != 1 for p in parts) else ""
    return sep.join(parts)


def block_namer(alphabet: Sequence[Symbol]) -> Callable[[Sequence[Symbol]], str]:
    """Canonical vertex/symbol names for blocks over ``alphabet``.

    The separator is fixed per alphabet so that blocks of equal length never
    collide.
    """
    sep = "." if multichar(alphabet) else ""

    def name(block):
        return sep.join(str(s) for s in block) if block else "ε"

    return name


@dataclass(frozen=True, order=True)
class ChoiceSymbol:
    """A non-empty set of base symbols, stored in base-alphabet order."""

    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ValueError("choice symbol must be non-empty")

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ",".join(str(m) for m in self.members) + "}"

    __repr__ = __str__


class Edge(NamedTuple):
    source: str
    target: str
    label: Symbol


@dataclass(frozen=True)
class LabeledGraph:
    """Directed multigraph with labeled edges.

    ``vertices`` order is significant: it is the tie-breaking order used by
    every deterministic choice downstream.
    """

    vertices: tuple
    edges: tuple
    alphabet: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "edges", tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertices")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        labels = set(self.alphabet)
        for e in self.edges:
            if e.source not in vs or e.target not in vs:
                raise ValueError(f"edge {e} has an undeclared endpoint")
            if e.label not in labels:
                raise ValueError(f"edge label {e.label!r} not in alphabet")

    @classmethod
    def build(cls, vertices, edges, alphabet) -> "LabeledGraph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges), tuple(alphabet))

    @cached_property
    def symbol_index(self) -> dict:
        return {s: i for i, s in enumerate(self.alphabet)}

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def out_edges(self) -> dict:
        """Out-edges per vertex, sorted by label order then target order."""
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        si, vi = self.symbol_index, self.vertex_index
        for v in out:
            out[v].sort(key=lambda e: (si[e.label], vi[e.target]))
        return out

    @cached_property
    def in_edges(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.target].append(e)
        return inc

    @cached_property
    def right_resolving(self) -> bool:
        for v, es in self.out_edges.items():
            labels = [e.label for e in es]
            if len(labels) != len(set(labels)):
                return False
        return True

    @cached_property
    def transitions(self) -> dict:
        """(vertex, label) -> set of targets."""
        trans: dict = {}
        for e in self.edges:
            trans.setdefault((e.source, e.label), set()).add(e.target)
        return trans

    def step(self, state: frozenset, symbol) -> frozenset:
        """Vertices reachable from ``state`` along one edge labeled ``symbol``."""
        trans = self.transitions
        out = set()
        for v in state:
            out.update(trans.get((v, symbol), ()))
        return frozenset(out)

    def read(self, state: frozenset, word) -> frozenset:
        for s in word:
            state = self.step(state, s)
            if not state:
                break
        return state

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class SftSpec:
    """Shift of finite type: forbidden words, all of length ``memory + 1``."""

    alphabet: tuple
    forbidden: frozenset
    memory: int

    def __post_init__(self):
        if not self.alphabet:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        if self.memory < 0:
            raise ValueError("memory must be >= 0")
        symbols = set(self.alphabet)
        for w in self.forbidden:
            if len(w) != self.memory + 1:
                raise ValueError(f"forbidden word {w} does not have length {self.memory + 1}")
            if not set(w) <= symbols:
                raise ValueError(f"forbidden word {w} uses symbols outside the alphabet")

    @classmethod
    def from_words(cls, alphabet: Iterable[Symbol], forbidden: Iterable[Sequence[Symbol]]) -> "SftSpec":
        """Build an SFT from forbidden words of possibly mixed lengths.

        Short words are replaced by all their extensions to the maximal
        length, which leaves the shift unchanged.
        """
        alphabet = tuple(alphabet)
        words = [tuple(w) for w in forbidden]
        if any(len(w) == 0 for w in words):
            raise ValueError("the empty word cannot be forbidden")
        if not words:
            return cls(alphabet, frozenset(), 0)
        top = max(len(w) for w in words)
        padded = set()
        for w in words:
            gap = top - len(w)
            for pre in range(gap + 1):
                for left in itertools.product(alphabet, repeat=pre):
                    for right in itertools.product(alphabet, repeat=gap - pre):
                        padded.add(left + w + right)
        return cls(alphabet, frozenset(padded), top - 1)

    def normalized(self) -> "SftSpec":
        """Memory-0 constraints lifted to memory 1; other specs unchanged."""
        if self.memory > 0 or not self.forbidden:
            return self
        bad = {w[0] for w in self.forbidden}
        pairs = frozenset((a, b) for a in self.alphabet for b in self.alphabet if a in bad or b in bad)
        return SftSpec(self.alphabet, pairs, 1)

    def contains_forbidden(self, word: Sequence[Symbol]) -> bool:
        span = self.memory + 1
        return any(tuple(word[i:i + span]) in self.forbidden for i in range(len(word) - span + 1))


@dataclass(frozen=True)
class ShiftSpec:
    """A shift space given by exactly one of an SFT or a sofic presentation."""

    sft: SftSpec | None = None
    sofic: LabeledGraph | None = None

    def __post_init__(self):
        if (self.sft is None) == (self.sofic is None):
            raise ValueError("ShiftSpec needs exactly one of sft or sofic")

    @classmethod
    def of(cls, obj: "SftSpec | LabeledGraph | ShiftSpec") -> "ShiftSpec":
        if isinstance(obj, ShiftSpec):
            return obj
        if isinstance(obj, SftSpec):
            return cls(sft=obj)
        return cls(sofic=obj)

    @property
    def alphabet(self) -> tuple:
        return self.sft.alphabet if self.sft is not None else self.sofic.alphabet

    @property
    def is_sft(self) -> bool:
        return self.sft is not None

    @cached_property
    def graph(self) -> LabeledGraph:
        """Trimmed presentation; raises EmptyShift for an empty shift."""
        from .shifts import presentation

        return presentation(self)


@dataclass(frozen=True)
class PeriodicPoint:
    """The point x with x[i + period] = x[i] and x[0:period] = cycle."""

    cycle: tuple
    period: int = field(default=-1)

    def __post_init__(self):
        if self.period == -1:
            object.__setattr__(self, "period", len(self.cycle))
        if self.period < 1 or len(self.cycle) != self.period:
            raise ValueError("cycle length must equal period >= 1")

    def rotate(self, s: int = 1) -> "PeriodicPoint":
        s %= self.period
        return PeriodicPoint(self.cycle[s:] + self.cycle[:s])

    def __str__(self):
        return word_text(self.cycle)


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    """Block map with memory/anticipation, applied as y[i] = Φ(x[i-m..i+n]).

    ``block_map`` is either an explicit window -> symbol table or a callable.
    """

    memory: int
    anticipation: int
    source: tuple
    target: tuple
    block_map: Mapping | Callable

    @property
    def window(self) -> int:
        return self.memory + self.anticipation + 1

    def __call__(self, window: Sequence[Symbol]) -> Symbol:
        window = tuple(window)
        if len(window) != self.window:
            raise ValueError(f"window length {len(window)} != {self.window}")
        if callable(self.block_map):
            return self.block_map(window)
        try:
            return self.block_map[window]
        except KeyError:
            raise UndefinedWindow(f"window {word_text(window)} is outside the block map domain") from None

    @classmethod
    def identity(cls, alphabet: Sequence[Symbol]) -> "SlidingBlockCode":
        alphabet = tuple(alphabet)
        return cls(0, 0, alphabet, alphabet, {(a,): a for a in alphabet})


def apply_code(code: SlidingBlockCode, point: PeriodicPoint) -> PeriodicPoint:
    """Image of a periodic point; windows wrap around the cycle."""
    p, x = point.period, point.cycle
    out = []
    for i in range(p):
        window = tuple(x[(i + j) % p] for j in range(-code.memory, code.anticipation + 1))
        out.append(code(window))
    return PeriodicPoint(tuple(out))


def is_subword(u: Sequence[Symbol], w: Sequence[Symbol]) -> bool:
    u, w = tuple(u), tuple(w)
    if not u:
        return True
    n = len(u)
    return any(w[i:i + n] == u for i in range(len(w) - n + 1))
