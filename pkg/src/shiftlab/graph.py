"""Structural transforms on labeled graphs."""
from __future__ import annotations

import os
from collections import deque

from .core import Edge, LabeledGraph
from .errors import EmptyShift, NotIrreducible, NotRightResolving, StateBlowup

DEFAULT_STATE_CAP = 20_000


def state_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("SHIFTLAB_STATE_CAP", DEFAULT_STATE_CAP))


def subgraph(g: LabeledGraph, keep) -> LabeledGraph:
    keep = set(keep)
    vertices = tuple(v for v in g.vertices if v in keep)
    edges = tuple(e for e in g.edges if e.source in keep and e.target in keep)
    return LabeledGraph(vertices, edges, g.alphabet)


def trim(g: LabeledGraph) -> LabeledGraph:
    """Drop every vertex that does not lie on a bi-infinite path."""
    indeg = {v: 0 for v in g.vertices}
    outdeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        outdeg[e.source] += 1
        indeg[e.target] += 1
    alive = set(g.vertices)
    queue = deque(v for v in g.vertices if indeg[v] == 0 or outdeg[v] == 0)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for e in g.out_edges[v]:
            if e.target in alive and e.target != v:
                indeg[e.target] -= 1
                if indeg[e.target] == 0:
                    queue.append(e.target)
        for e in g.in_edges[v]:
            if e.source in alive and e.source != v:
                outdeg[e.source] -= 1
                if outdeg[e.source] == 0:
                    queue.append(e.source)
    if len(alive) == len(g.vertices):
        return g
    return subgraph(g, alive)


def strong_components(g: LabeledGraph) -> list[list]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list = []
    counter = 0
    succ = {v: [e.target for e in g.out_edges[v]] for v in g.vertices}
    for root in g.vertices:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def scc_decompose(g: LabeledGraph) -> list[LabeledGraph]:
    """Maximal irreducible subgraphs (strongly connected with at least one edge).

    Ordered by the position of each component's first vertex in ``g``.
    """
    vi = g.vertex_index
    out = []
    for comp in strong_components(g):
        members = set(comp)
        if len(comp) == 1:
            v = comp[0]
            if not any(e.target == v for e in g.out_edges[v]):
                continue
        out.append((min(vi[v] for v in members), subgraph(g, members)))
    out.sort(key=lambda t: t[0])
    return [h for _, h in out]


def is_irreducible(g: LabeledGraph) -> bool:
    comps = scc_decompose(g)
    return len(comps) == 1 and len(comps[0].vertices) == len(g.vertices)


def subset_name(g: LabeledGraph, subset) -> str:
    vi = g.vertex_index
    return "{" + ",".join(str(v) for v in sorted(subset, key=vi.__getitem__)) + "}"


def determinize(g: LabeledGraph, cap: int | None = None) -> LabeledGraph:
    """Right-resolving presentation of the same shift via subset construction.

    States are vertex subsets reached from singletons; the result is trimmed.
    """
    cap = state_cap(cap)
    starts = [frozenset([v]) for v in g.vertices]
    seen = {s: None for s in starts}
    queue = deque(starts)
    edges = []
    while queue:
        s = queue.popleft()
        for a in g.alphabet:
            t = g.step(s, a)
            if not t:
                continue
            if t not in seen:
                if len(seen) >= cap:
                    raise StateBlowup(f"subset construction exceeded {cap} states")
                seen[t] = None
                queue.append(t)
            edges.append((s, t, a))
    names = {s: subset_name(g, s) for s in seen}
    out = LabeledGraph(
        tuple(names[s] for s in seen),
        tuple(Edge(names[s], names[t], a) for s, t, a in edges),
        g.alphabet,
    )
    out = trim(out)
    if not out.vertices:
        raise EmptyShift("presentation carries no bi-infinite path")
    return out


def minimize_right_resolving(g: LabeledGraph) -> LabeledGraph:
    """Merge vertices with equal follower sets (Moore refinement)."""
    if not g.right_resolving:
        raise NotRightResolving("minimization needs a right-resolving graph")
    if not is_irreducible(g):
        raise NotIrreducible("minimization needs an irreducible graph")
    follow = {v: {e.label: e.target for e in g.out_edges[v]} for v in g.vertices}
    block = {v: 0 for v in g.vertices}
    count = 1
    while True:
        sig = {}
        new = {}
        for v in g.vertices:
            key = (block[v], tuple(sorted((g.symbol_index[a], block[t]) for a, t in follow[v].items())))
            new[v] = sig.setdefault(key, len(sig))
        block = new
        if len(sig) == count:
            break
        count = len(sig)
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(block[v], []).append(v)
    names = {}
    for members in groups.values():
        name = members[0] if len(members) == 1 else subset_name(g, members)
        for v in members:
            names[v] = name
    reps = {members[0] for members in groups.values()}
    vertices = tuple(names[v] for v in g.vertices if v in reps)
    edges = tuple(Edge(names[e.source], names[e.target], e.label) for e in g.edges if e.source in reps)
    return LabeledGraph(vertices, edges, g.alphabet)


def distances_from(g: LabeledGraph, source) -> dict:
    """BFS distances from ``source``; unreachable vertices are absent."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for e in g.out_edges[v]:
            if e.target not in dist:
                dist[e.target] = dist[v] + 1
                queue.append(e.target)
    return dist


def shortest_path(g: LabeledGraph, source, targets) -> list[Edge] | None:
    """Lexicographically least shortest path (by label order) into ``targets``."""
    targets = set(targets)
    if source in targets:
        return []
    parent = {source: None}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for e in g.out_edges[v]:
            if e.target in parent:
                continue
            parent[e.target] = e
            if e.target in targets:
                path = []
                node = e.target
                while parent[node] is not None:
                    path.append(parent[node])
                    node = parent[node].source
                return path[::-1]
            queue.append(e.target)
    return None


def diameter(g: LabeledGraph) -> int:
    """Max over ordered vertex pairs of the shortest directed path length."""
    best = 0
    for v in g.vertices:
        dist = distances_from(g, v)
        if len(dist) != len(g.vertices):
            raise NotIrreducible("diameter is undefined on a reducible graph")
        best = max(best, max(dist.values()))
    return best


def adjacency(g: LabeledGraph) -> list[list[int]]:
    vi = g.vertex_index
    n = len(g.vertices)
    a = [[0] * n for _ in range(n)]
    for e in g.edges:
        a[vi[e.source]][vi[e.target]] += 1
    return a
