"""Topological entropy via Perron eigenvalues, plus an exact block-counting oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import LabeledGraph, ShiftSpec
from .errors import BudgetExceeded, NoEdges, NotIrreducible
from .graph import adjacency, determinize, scc_decompose, strong_components, trim

TOLERANCE = 1e-12
MAX_ITER = 10**6
COUNT_CAP = 20_000


@dataclass(frozen=True)
class EntropyReport:
    value: float
    eigenvalue: float
    component_id: int
    iterations: int
    residual: float


def _matrix_irreducible(a: np.ndarray) -> bool:
    n = a.shape[0]
    vs = tuple(range(n))
    g = LabeledGraph(
        tuple(str(i) for i in vs),
        tuple((str(i), str(j), "x") for i in vs for j in vs if a[i, j] > 0),
        ("x",),
    )
    return len(strong_components(g)) == 1


def _perron(adj) -> tuple[float, float, int]:
    a = np.asarray(adj, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be a square matrix")
    if (a < 0).any():
        raise ValueError("adjacency must be non-negative")
    if a.sum() == 0:
        raise NoEdges("matrix has no edges")
    if not _matrix_irreducible(a):
        raise NotIrreducible("matrix is not irreducible")
    if (a.sum(axis=1) == 1).all():
        # a strongly connected graph with out-degree 1 everywhere is one simple cycle
        return 1.0, 0.0, 0
    # A + I is primitive, so iteration converges even for periodic graphs
    b = a.astype(np.float64) + np.eye(a.shape[0])
    lo, hi, iters = kernels.collatz_power(b, TOLERANCE, MAX_ITER)
    return (lo + hi) / 2 - 1.0, (hi - lo) / 2, iters


def perron_eigenvalue(adj) -> tuple[float, float]:
    """Perron eigenvalue of an irreducible adjacency matrix and an error bound."""
    lam, residual, _ = _perron(adj)
    return lam, residual


def graph_entropy_components(g: LabeledGraph) -> list[tuple[LabeledGraph, float, float, int]]:
    """(component, λ, residual, iterations) for each irreducible component."""
    out = []
    for h in scc_decompose(g):
        lam, res, it = _perron(adjacency(h))
        out.append((h, lam, res, it))
    return out


def topological_entropy(spec, cap: int | None = None) -> EntropyReport:
    spec = ShiftSpec.of(spec)
    g = trim(determinize(spec.graph, cap))
    best = None
    for i, (h, lam, res, it) in enumerate(graph_entropy_components(g)):
        if best is None or lam > best[1]:
            best = (i, lam, res, it)
    i, lam, res, it = best
    return EntropyReport(math.log(lam), lam, i, it, res / lam)


def block_counts(spec, n_max: int, cap: int = COUNT_CAP) -> list[int]:
    """Exact |B_n| for n = 1..n_max.

    Distinct words correspond to paths from the all-vertices state of the
    subset automaton, so raw path counts never overcount here.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > cap:
        raise BudgetExceeded(f"n_max {n_max} exceeds counting cap {cap}")
    g = ShiftSpec.of(spec).graph if not isinstance(spec, LabeledGraph) else trim(spec)
    step_cache: dict = {}

    def succ(state):
        if state not in step_cache:
            nxt = [g.step(state, a) for a in g.alphabet]
            step_cache[state] = [s for s in nxt if s]
        return step_cache[state]

    counts = {frozenset(g.vertices): 1}
    out = []
    for _ in range(n_max):
        new: dict = {}
        for state, c in counts.items():
            for t in succ(state):
                new[t] = new.get(t, 0) + c
        counts = new
        out.append(sum(counts.values()))
    return out


def entropy_by_counting(spec, n_max: int) -> list[tuple[int, float]]:
    return [(n, math.log(c) / n) for n, c in enumerate(block_counts(spec, n_max), start=1)]
