"""Shift-level operations: presentations, languages, higher block recoding,
periodic points and membership of eventually periodic points."""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .core import (
    Edge,
    LabeledGraph,
    PeriodicPoint,
    ShiftSpec,
    SftSpec,
    SlidingBlockCode,
    block_namer,
)
from .errors import BudgetExceeded, EmptyShift
from .graph import trim

DEFAULT_WORD_CAP = 1_000_000


def sft_to_presentation(spec: SftSpec) -> LabeledGraph:
    """De Bruijn presentation: vertices are M-blocks, edges append one symbol."""
    spec = spec.normalized()
    m = spec.memory
    name = block_namer(spec.alphabet)
    blocks = list(itertools.product(spec.alphabet, repeat=m))
    edges = []
    for u in blocks:
        for a in spec.alphabet:
            w = u + (a,)
            if w in spec.forbidden:
                continue
            edges.append(Edge(name(u), name(w[1:]), a))
    g = trim(LabeledGraph(tuple(name(u) for u in blocks), tuple(edges), spec.alphabet))
    if not g.vertices:
        raise EmptyShift("every allowed block dies out; the SFT is empty")
    return g


def presentation(spec: ShiftSpec) -> LabeledGraph:
    if spec.sft is not None:
        return sft_to_presentation(spec.sft)
    g = trim(spec.sofic)
    if not g.vertices:
        raise EmptyShift("the presentation has no bi-infinite path")
    return g


def _graph(spec) -> LabeledGraph:
    if isinstance(spec, LabeledGraph):
        g = trim(spec)
        if not g.vertices:
            raise EmptyShift("the presentation has no bi-infinite path")
        return g
    return ShiftSpec.of(spec).graph


def iter_words(g: LabeledGraph, n: int, start: frozenset | None = None) -> Iterator[tuple]:
    """Labels of n-paths of a trimmed graph, lexicographic in alphabet order."""
    if start is None:
        start = frozenset(g.vertices)
    if n == 0:
        yield ()
        return
    stack = [((), start, iter(g.alphabet))]
    while stack:
        word, state, symbols = stack[-1]
        for a in symbols:
            nxt = g.step(state, a)
            if not nxt:
                continue
            w = word + (a,)
            if len(w) == n:
                yield w
            else:
                stack.append((w, nxt, iter(g.alphabet)))
            break
        else:
            stack.pop()


def enumerate_words(spec, n: int, cap: int | None = DEFAULT_WORD_CAP) -> list[tuple]:
    """B_n(X) in lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = []
    for w in iter_words(_graph(spec), n):
        out.append(w)
        if cap is not None and len(out) > cap:
            raise BudgetExceeded(f"more than {cap} words of length {n}")
    return out


def higher_block(spec, N: int, cap: int | None = DEFAULT_WORD_CAP) -> tuple[ShiftSpec, SlidingBlockCode]:
    """The N-th higher block shift and the conjugacy β_N onto it.

    SFT input yields an SFT over the N-block alphabet; sofic input yields
    the presentation whose edges are the N-paths of the original one.
    """
    spec = ShiftSpec.of(spec)
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return spec, SlidingBlockCode.identity(spec.alphabet)
    blocks = enumerate_words(spec, N, cap)
    name = block_namer(spec.alphabet)
    names = tuple(name(b) for b in blocks)
    beta = SlidingBlockCode(0, N - 1, spec.alphabet, names, dict(zip(blocks, names)))

    if spec.sft is not None:
        base = spec.sft.normalized()
        mem = max(1, base.memory - N + 1)
        forbidden = set()
        for combo in itertools.product(range(len(blocks)), repeat=mem + 1):
            bs = [blocks[i] for i in combo]
            if any(bs[j][1:] != bs[j + 1][:-1] for j in range(mem)):
                forbidden.add(tuple(names[i] for i in combo))
                continue
            under = bs[0] + tuple(b[-1] for b in bs[1:])
            if base.contains_forbidden(under):
                forbidden.add(tuple(names[i] for i in combo))
        return ShiftSpec(sft=SftSpec(names, frozenset(forbidden), mem)), beta

    g = spec.graph
    index = {e: i for i, e in enumerate(g.edges)}
    paths = [(e,) for e in g.edges]
    for _ in range(N - 2):
        paths = [p + (e,) for p in paths for e in g.out_edges[p[-1].target]]
    pname = {p: ".".join(f"e{index[e]}" for e in p) for p in paths}
    label_name = dict(zip(blocks, names))
    edges = []
    for p in paths:
        for e in g.out_edges[p[-1].target]:
            q = p[1:] + (e,)
            label = tuple(x.label for x in p) + (e.label,)
            edges.append(Edge(pname[p], pname[q], label_name[label]))
    h = trim(LabeledGraph(tuple(pname[p] for p in paths), tuple(edges), names))
    return ShiftSpec(sofic=h), beta


def inverse_block_code(beta: SlidingBlockCode) -> SlidingBlockCode:
    """1-block inverse of a higher block code: each block maps to its first symbol."""
    table = {(name,): window[0] for window, name in beta.block_map.items()}
    return SlidingBlockCode(0, 0, beta.target, beta.source, table)


def left_limit_set(g: LabeledGraph, cycle: Sequence) -> frozenset:
    """Vertices at which a left-infinite path labeled ...cycle.cycle can end."""
    state = frozenset(g.vertices)
    while True:
        nxt = g.read(state, cycle)
        if nxt == state:
            return state
        state = nxt


def right_limit_set(g: LabeledGraph, cycle: Sequence) -> frozenset:
    """Vertices from which a right-infinite path labeled cycle.cycle... starts."""
    state = set(g.vertices)
    while True:
        nxt = {v for v in state if g.read(frozenset([v]), cycle) & state}
        if nxt == state:
            return frozenset(state)
        state = nxt


def contains_point(spec, left: Sequence, middle: Sequence, right: Sequence) -> bool:
    """Whether ...left.left middle right.right... is a point of the shift."""
    g = _graph(spec)
    if not left or not right:
        raise ValueError("left and right cycles must be non-empty")
    start = left_limit_set(g, tuple(left))
    end = g.read(start, tuple(middle)) if start else frozenset()
    return bool(end & right_limit_set(g, tuple(right)))


def is_periodic_point(spec, cycle: Sequence) -> bool:
    return contains_point(spec, cycle, (), cycle)


def periodic_points(spec, p: int, cap: int | None = 100_000) -> list[PeriodicPoint]:
    """All points of period p (not only least period), as length-p cycles."""
    if p < 1:
        raise ValueError("period must be >= 1")
    g = _graph(spec)
    out = []
    for w in iter_words(g, p):
        if contains_point(g, w, (), w):
            out.append(PeriodicPoint(w))
            if cap is not None and len(out) > cap:
                raise BudgetExceeded(f"more than {cap} periodic points of period {p}")
    return out
