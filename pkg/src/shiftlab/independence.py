"""Multi-choice shifts, fillings, and independence entropy.

Weights along choice words are multiplicative (the filling count is the
product of member counts), so every comparison below is done on integer
products and is exact; floats are only used to skip clear-cut comparisons.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .core import ChoiceSymbol, Edge, LabeledGraph, ShiftSpec, SftSpec, word_text
from .errors import AlphabetBlowup, BudgetExceeded, NotRightResolving, StateBlowup, ZeroIndependenceEntropy
from .graph import determinize, scc_decompose, shortest_path, state_cap, trim
from .shifts import contains_point, sft_to_presentation

ALPHABET_CAP = 1 << 12


def filling_count(w: Sequence[ChoiceSymbol]) -> int:
    return math.prod(len(s) for s in w)


def fillings(w: Sequence[ChoiceSymbol], cap: int | None = 1_000_000) -> list[tuple]:
    """Φ(ŵ): every word choosing one member per coordinate, in product order."""
    if cap is not None and filling_count(w) > cap:
        raise BudgetExceeded(f"{filling_count(w)} fillings exceed cap {cap}")
    return list(itertools.product(*(s.members for s in w)))


def choice_symbols(alphabet: Sequence, cap: int = ALPHABET_CAP) -> tuple[ChoiceSymbol, ...]:
    """All non-empty subsets of ``alphabet``, sorted by canonical text."""
    if 2 ** len(alphabet) - 1 > cap:
        raise AlphabetBlowup(f"2^{len(alphabet)} - 1 choice symbols exceed cap {cap}")
    out = []
    for r in range(1, len(alphabet) + 1):
        for combo in itertools.combinations(alphabet, r):
            out.append(ChoiceSymbol(combo))
    return tuple(sorted(out, key=str))


def hat_sft(spec: SftSpec, cap: int = ALPHABET_CAP) -> SftSpec:
    """Multi-choice SFT: a choice block is forbidden iff one of its fillings is."""
    spec = spec.normalized()
    symbols = choice_symbols(spec.alphabet, cap)
    if not spec.forbidden:
        return SftSpec(symbols, frozenset(), spec.memory)
    forbidden = set()
    span = spec.memory + 1
    for block in itertools.product(symbols, repeat=span):
        if any(f in spec.forbidden for f in itertools.product(*(s.members for s in block))):
            forbidden.add(block)
    return SftSpec(symbols, frozenset(forbidden), spec.memory)


def hat_sofic(g: LabeledGraph, cap: int | None = None) -> LabeledGraph:
    """Presentation of the multi-choice shift of a sofic shift.

    A state is the set of subset-automaton states reached by all fillings
    read so far; a choice symbol may be read iff no filling dies.
    """
    if not g.right_resolving:
        raise NotRightResolving("hat_sofic needs a right-resolving presentation")
    cap = state_cap(cap)
    g = trim(g)
    step_cache: dict = {}

    def step(s, a):
        key = (s, a)
        if key not in step_cache:
            step_cache[key] = g.step(s, a)
        return step_cache[key]

    start = frozenset([frozenset(g.vertices)])
    seen = {start: 0}
    queue = deque([start])
    raw_edges = []
    while queue:
        state = queue.popleft()
        letters = [a for a in g.alphabet if all(step(s, a) for s in state)]
        for r in range(1, len(letters) + 1):
            for combo in itertools.combinations(letters, r):
                nxt = frozenset(step(s, a) for s in state for a in combo)
                if nxt not in seen:
                    if len(seen) >= cap:
                        raise StateBlowup(f"multi-choice construction exceeded {cap} states")
                    seen[nxt] = len(seen)
                    queue.append(nxt)
                raw_edges.append((seen[state], seen[nxt], ChoiceSymbol(combo)))
    labels = sorted({e[2] for e in raw_edges}, key=str)
    name = [f"q{i}" for i in range(len(seen))]
    h = LabeledGraph(
        tuple(name),
        tuple(Edge(name[s], name[t], a) for s, t, a in raw_edges),
        tuple(labels),
    )
    return trim(h)


def hat_presentation(spec: ShiftSpec, cap: int | None = None) -> LabeledGraph:
    """Trimmed presentation of X̂ over choice symbols."""
    # resolve the cap first so a changed SHIFTLAB_STATE_CAP is a cache miss
    return _hat_presentation(ShiftSpec.of(spec), state_cap(cap))


@lru_cache(maxsize=128)
def _hat_presentation(spec: ShiftSpec, cap: int) -> LabeledGraph:
    if spec.sft is not None:
        return sft_to_presentation(hat_sft(spec.sft))
    return hat_sofic(determinize(spec.graph, cap), cap)


# --- exact mean comparison -------------------------------------------------

def _mean_log(num: int, den: int, length: int) -> float:
    return (math.log(num) - math.log(den)) / length


def compare_means(a: tuple[int, int, int], b: tuple[int, int, int]) -> int:
    """Sign of ln(a0/a1)/a2 - ln(b0/b1)/b2, decided exactly."""
    fa, fb = _mean_log(*a), _mean_log(*b)
    if abs(fa - fb) > 1e-9 * max(1.0, abs(fa), abs(fb)):
        return 1 if fa > fb else -1
    # (a0/a1)^(b2) vs (b0/b1)^(a2)
    lhs = a[0] ** b[2] * b[1] ** a[2]
    rhs = b[0] ** a[2] * a[1] ** b[2]
    return (lhs > rhs) - (lhs < rhs)


def _weight(e: Edge) -> int:
    return len(e.label)


def karp_max_mean_cycle(h: LabeledGraph) -> tuple[tuple[int, int], list[Edge]]:
    """Maximum mean cycle of an irreducible graph with multiplicative weights.

    Returns ((product, length), cycle) where the cycle's weight product is
    ``product`` and its length ``length``; the optimum mean is
    ln(product) / length.
    """
    verts = h.vertices
    n = len(verts)
    src = verts[0]
    table = [{src: 1}]
    back: list[dict] = [{}]
    for _ in range(n):
        prev = table[-1]
        cur: dict = {}
        par: dict = {}
        for v, val in prev.items():
            for e in h.out_edges[v]:
                cand = val * _weight(e)
                if e.target not in cur or cand > cur[e.target]:
                    cur[e.target] = cand
                    par[e.target] = e
        table.append(cur)
        back.append(par)
    best = None
    best_v = None
    for v in verts:
        if v not in table[n]:
            continue
        worst = None
        for k in range(n):
            if v not in table[k]:
                continue
            cand = (table[n][v], table[k][v], n - k)
            if worst is None or compare_means(cand, worst) < 0:
                worst = cand
        if best is None or compare_means(worst, best) > 0:
            best, best_v = worst, v
    # any cycle on the maximal n-walk into best_v is optimal
    walk = []
    v = best_v
    for k in range(n, 0, -1):
        e = back[k][v]
        walk.append(e)
        v = e.source
    walk.reverse()
    first_seen = {}
    verts_on_walk = [walk[0].source] + [e.target for e in walk]
    for i, u in enumerate(verts_on_walk):
        if u in first_seen:
            cycle = walk[first_seen[u]:i]
            break
        first_seen[u] = i
    product = math.prod(_weight(e) for e in cycle)
    if compare_means((product, 1, len(cycle)), best) != 0:
        raise AssertionError("extracted cycle does not attain the Karp optimum")
    return (product, len(cycle)), cycle


def _canonical_rotation(cycle: list[Edge]) -> list[Edge]:
    texts = [str(e.label) for e in cycle]
    best = min(range(len(cycle)), key=lambda i: (texts[i:] + texts[:i], str(cycle[i].source)))
    return cycle[best:] + cycle[:best]


@dataclass(frozen=True)
class IndEntropyReport:
    value: float
    cycle: tuple            # ChoiceSymbols around the optimal cycle
    as_rational: tuple      # (n, k): value == ln(n) / k exactly

    def same_value(self, n: int, k: int) -> bool:
        return compare_means((self.as_rational[0], 1, self.as_rational[1]), (n, 1, k)) == 0


def ind_entropy_exact(spec, cap: int | None = None) -> IndEntropyReport:
    """Independence entropy as the maximum mean cycle of the hat presentation."""
    g = hat_presentation(ShiftSpec.of(spec), cap)
    best = None
    for h in scc_decompose(g):
        (prod, length), cycle = karp_max_mean_cycle(h)
        if best is None or compare_means((prod, 1, length), (best[0], 1, best[1])) > 0:
            best = (prod, length, cycle)
    prod, length, cycle = best
    cycle = _canonical_rotation(cycle)
    return IndEntropyReport(math.log(prod) / length, tuple(e.label for e in cycle), (prod, length))


@dataclass(frozen=True)
class FiniteIndReport:
    value: float        # ln(fillings) / m
    fillings: int       # max |Φ(ŵ)| over ŵ in B_m(X̂)
    m: int
    witness: tuple      # a choice word attaining the maximum


def ind_entropy_approx(spec, m: int, cap: int | None = None) -> FiniteIndReport:
    """max ln|Φ(ŵ)| / m over ŵ in B_m(X̂), by longest-path dynamic programming."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g = hat_presentation(ShiftSpec.of(spec), cap)
    best = {v: 1 for v in g.vertices}
    parents: list[dict] = []
    for _ in range(m):
        cur: dict = {}
        par: dict = {}
        for v, val in best.items():
            for e in g.out_edges[v]:
                cand = val * len(e.label)
                if e.target not in cur or cand > cur[e.target]:
                    cur[e.target] = cand
                    par[e.target] = e
        best = cur
        parents.append(par)
    end = max(g.vertices, key=lambda v: best[v])
    top = best[end]
    witness = []
    v = end
    for par in reversed(parents):
        e = par[v]
        witness.append(e.label)
        v = e.source
    witness.reverse()
    return FiniteIndReport(math.log(top) / m, top, m, tuple(witness))


@dataclass(frozen=True)
class AsymptoticPairWitness:
    """x = ...L L . middle R R..., with middle[0] at index ``origin``.

    y equals x except at ``diff_index``.
    """

    left: tuple
    x_middle: tuple
    y_middle: tuple
    right: tuple
    origin: int
    diff_index: int

    def x_at(self, i: int):
        return self._at(self.x_middle, i)

    def y_at(self, i: int):
        return self._at(self.y_middle, i)

    def _at(self, middle, i):
        j = i - self.origin
        if j < 0:
            return self.left[j % len(self.left)]
        if j < len(middle):
            return middle[j]
        return self.right[(j - len(middle)) % len(self.right)]

    def differing_indices(self) -> list[int]:
        return [self.origin + j for j in range(len(self.x_middle)) if self.x_middle[j] != self.y_middle[j]]

    def describe(self) -> tuple[str, str]:
        def show(middle):
            left, right = word_text(self.left), word_text(self.right)
            pre = word_text(middle[: -self.origin]) if self.origin < 0 else ""
            post = word_text(middle[-self.origin:]) if self.origin < 0 else word_text(middle)
            return f"...{left}{left}{pre}.{post}{right}{right}..."
        return show(self.x_middle), show(self.y_middle)


def _cycle_through(g: LabeledGraph, v) -> list[Edge]:
    """Shortest cycle (lexicographic tie-break) through v in a trimmed graph, or []."""
    for e in g.out_edges[v]:
        if e.target == v:
            return [e]
    best = None
    for e in g.out_edges[v]:
        rest = shortest_path(g, e.target, {v})
        if rest is not None and (best is None or len(rest) + 1 < len(best)):
            best = [e] + rest
    return best or []


def _reach_cycle_backward(g: LabeledGraph, v) -> tuple[list[Edge], list[Edge]]:
    """(cycle, path) where path leads from the cycle's vertex to v."""
    # BFS backwards until a vertex lying on a cycle is found
    parent = {v: None}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        cyc = _cycle_through(g, u)
        if cyc:
            path = []
            node = u
            while parent[node] is not None:
                path.append(parent[node])
                node = parent[node].target
            return cyc, path
        for e in g.in_edges[u]:
            if e.source not in parent:
                parent[e.source] = e
                queue.append(e.source)
    raise AssertionError("trimmed graph has a vertex not reached from any cycle")


def _reach_cycle_forward(g: LabeledGraph, v) -> tuple[list[Edge], list[Edge]]:
    parent = {v: None}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        cyc = _cycle_through(g, u)
        if cyc:
            path = []
            node = u
            while parent[node] is not None:
                path.append(parent[node])
                node = parent[node].source
            return path[::-1], cyc
        for e in g.out_edges[u]:
            if e.target not in parent:
                parent[e.target] = e
                queue.append(e.target)
    raise AssertionError("trimmed graph has a vertex reaching no cycle")


def asymptotic_pair(spec, cap: int | None = None) -> AsymptoticPairWitness:
    """Two points differing at exactly one coordinate, from a multi-member edge."""
    spec = ShiftSpec.of(spec)
    g = hat_presentation(spec, cap)
    multi = [e for e in g.edges if len(e.label) > 1]
    if multi and ind_entropy_exact(spec, cap).as_rational[0] == 1:
        raise ZeroIndependenceEntropy("independence entropy is 0")
    if not multi:
        raise ZeroIndependenceEntropy("no choice symbol with two members survives trimming")
    e0 = min(multi, key=lambda e: (str(e.label), str(e.source), str(e.target)))
    left_cycle, left_path = _reach_cycle_backward(g, e0.source)
    right_path, right_cycle = _reach_cycle_forward(g, e0.target)
    order = {s: i for i, s in enumerate(spec.alphabet)}

    def first(sym):
        return min(sym.members, key=order.__getitem__)

    def second(sym):
        return sorted(sym.members, key=order.__getitem__)[1]

    hat_middle = [e.label for e in left_path] + [e0.label] + [e.label for e in right_path]
    x_middle = tuple(first(s) for s in hat_middle)
    i0 = len(left_path)
    y_middle = x_middle[:i0] + (second(e0.label),) + x_middle[i0 + 1:]
    witness = AsymptoticPairWitness(
        left=tuple(first(e.label) for e in left_cycle),
        x_middle=x_middle,
        y_middle=y_middle,
        right=tuple(first(e.label) for e in right_cycle),
        origin=-i0,
        diff_index=0,
    )
    if not verify_asymptotic_pair(spec, witness):
        raise AssertionError("extracted pair failed the membership scan")
    return witness


def verify_asymptotic_pair(spec, w: AsymptoticPairWitness) -> bool:
    spec = ShiftSpec.of(spec)
    if w.differing_indices() != [w.diff_index]:
        return False
    for middle in (w.x_middle, w.y_middle):
        if not contains_point(spec, w.left, middle, w.right):
            return False
        if spec.sft is not None:
            window = w.left * 3 + middle + w.right * 3
            if spec.sft.normalized().contains_forbidden(window):
                return False
    return True
