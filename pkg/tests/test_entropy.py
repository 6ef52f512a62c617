import math

import numpy as np
import pytest

from conftest import bridge_graph, full_shift, golden_mean_sft
from shiftlab.core import LabeledGraph, ShiftSpec
from shiftlab.entropy import (
    block_counts,
    entropy_by_counting,
    graph_entropy_components,
    perron_eigenvalue,
    topological_entropy,
)
from shiftlab.errors import BudgetExceeded, EmptyShift, NoEdges, NotIrreducible
from shiftlab.shifts import higher_block

PHI = (1 + math.sqrt(5)) / 2


def fib_counts(n):
    out, a, b = [], 2, 3
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


class TestPerron:
    def test_golden_mean_matrix(self):
        lam, res = perron_eigenvalue([[1, 1], [1, 0]])
        assert abs(lam - PHI) < 1e-9 and res <= 1e-9

    @pytest.mark.parametrize("k", [1, 2, 3, 7])
    def test_single_vertex(self, k):
        assert abs(perron_eigenvalue([[k]])[0] - k) < 1e-9

    def test_periodic_graph(self):
        # eigenvalues +-2; plain power iteration would oscillate
        assert abs(perron_eigenvalue([[0, 2], [2, 0]])[0] - 2) < 1e-9

    def test_permutation_matrix(self):
        lam, res = perron_eigenvalue([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        assert lam == 1.0 and res == 0.0

    def test_agrees_with_numpy(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.integers(0, 3, size=(5, 5))
            a[np.arange(5), (np.arange(5) + 1) % 5] += 1   # force a Hamilton cycle
            lam, res = perron_eigenvalue(a)
            assert abs(lam - max(abs(np.linalg.eigvals(a)))) < 1e-9

    def test_errors(self):
        with pytest.raises(NoEdges):
            perron_eigenvalue([[0, 0], [0, 0]])
        with pytest.raises(NotIrreducible):
            perron_eigenvalue([[1, 1], [0, 1]])


class TestTopological:
    def test_golden_mean(self):
        r = topological_entropy(golden_mean_sft())
        assert abs(r.value - 0.4812118251) < 1e-9
        assert abs(r.value - math.log(PHI)) < 1e-9
        assert r.residual <= 1e-9

    def test_full_shift(self):
        assert abs(topological_entropy(full_shift(2)).value - math.log(2)) < 1e-12

    def test_bridge(self):
        r = topological_entropy(bridge_graph())
        assert abs(r.value - math.log(2)) < 1e-9
        counted = entropy_by_counting(bridge_graph(), 30)[-1][1]
        assert abs(counted - math.log(2)) < 0.15

    def test_zero_entropy(self):
        g = LabeledGraph(("a", "b"), (("a", "b", "0"), ("b", "a", "1")), ("0", "1"))
        r = topological_entropy(g)
        assert r.value == 0 and r.eigenvalue == 1

    def test_empty(self):
        g = LabeledGraph(("a", "b"), (("a", "b", "0"),), ("0",))
        with pytest.raises(EmptyShift):
            topological_entropy(g)

    def test_components_listed(self):
        comps = graph_entropy_components(bridge_graph())
        assert sorted(round(lam, 9) for _, lam, _, _ in comps) == [1.0, 2.0]

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_higher_block_invariance(self, N):
        h = topological_entropy(golden_mean_sft()).value
        hb, _ = higher_block(ShiftSpec(sft=golden_mean_sft()), N)
        assert abs(topological_entropy(hb).value - h) < 1e-9

    def test_labeled_vs_edge_shift(self):
        # two loops with one label: edge shift has entropy ln 2, label shift 0
        g = LabeledGraph(("a",), (("a", "a", "0"), ("a", "a", "0")), ("0",))
        assert topological_entropy(g).value == 0
        assert abs(math.log(perron_eigenvalue([[2]])[0]) - math.log(2)) < 1e-12


class TestCounting:
    def test_golden_mean(self):
        assert block_counts(golden_mean_sft(), 5) == [2, 3, 5, 8, 13]

    def test_golden_mean_64_fibonacci(self):
        counts = block_counts(golden_mean_sft(), 64)
        assert counts == fib_counts(64)
        assert abs(math.log(counts[-1]) / 64 - math.log(PHI)) < 0.02

    def test_full_shift(self):
        for n, v in entropy_by_counting(full_shift(2), 10):
            assert abs(v - math.log(2)) < 1e-12

    def test_no_overcount_with_multiple_presentations(self):
        g = LabeledGraph(("a", "b"), (("a", "a", "0"), ("a", "b", "0"), ("b", "a", "0"), ("b", "b", "0")), ("0",))
        assert block_counts(g, 5) == [1] * 5

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            block_counts(golden_mean_sft(), 100, cap=50)
