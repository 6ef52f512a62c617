import itertools
import math

import pytest

from conftest import even_graph, even_ok, full_shift, golden_mean_sft
from shiftlab.core import ChoiceSymbol, LabeledGraph, SftSpec, ShiftSpec
from shiftlab.errors import BudgetExceeded, ZeroIndependenceEntropy
from shiftlab.graph import determinize
from shiftlab.independence import (
    asymptotic_pair,
    choice_symbols,
    compare_means,
    filling_count,
    fillings,
    hat_presentation,
    hat_sft,
    hat_sofic,
    ind_entropy_approx,
    ind_entropy_exact,
    karp_max_mean_cycle,
    verify_asymptotic_pair,
)
from shiftlab.shifts import enumerate_words, higher_block, sft_to_presentation

C = ChoiceSymbol
ZO, Z, O = C(("0", "1")), C(("0",)), C(("1",))


def simple_cycles(g):
    """Every simple cycle, by brute-force DFS from each vertex."""
    idx = g.vertex_index
    out = []
    for s in g.vertices:
        stack = [(s, [])]
        while stack:
            v, path = stack.pop()
            for e in g.out_edges[v]:
                if e.target == s:
                    out.append(path + [e])
                elif idx[e.target] > idx[s] and all(e.target != p.target for p in path):
                    stack.append((e.target, path + [e]))
    return out


def brute_max_mean(g):
    best = None
    for cyc in simple_cycles(g):
        p, l = math.prod(len(e.label) for e in cyc), len(cyc)
        # p^(1/l) > q^(1/m)  iff  p^m > q^l
        if best is None or p ** best[1] > best[0] ** l:
            best = (p, l)
    return best


class TestFillings:
    def test_product(self):
        w = (ZO, Z, ZO)
        assert sorted("".join(f) for f in fillings(w)) == ["000", "001", "100", "101"]
        assert filling_count(w) == 4

    def test_singletons(self):
        assert fillings((Z, O, Z)) == [("0", "1", "0")]

    def test_golden_mean_optimal(self):
        for m in range(1, 12):
            w = tuple(ZO if i % 2 == 0 else Z for i in range(m))
            assert filling_count(w) == 2 ** math.ceil(m / 2)

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            fillings((ZO,) * 30, cap=1000)
        assert filling_count((ZO,) * 30) == 2 ** 30


class TestHatSft:
    def test_golden_mean(self):
        h = hat_sft(golden_mean_sft())
        assert [str(s) for s in h.alphabet] == ["{0,1}", "{0}", "{1}"]
        assert len(h.forbidden) == 4
        for a, b in h.forbidden:
            assert "1" in a.members and "1" in b.members

    def test_full_shift(self):
        h = hat_sft(full_shift(2))
        assert len(h.alphabet) == 3 and not h.forbidden

    def test_only_zero_survives(self):
        spec = SftSpec(("0", "1"), frozenset({("0", "1"), ("1", "0"), ("1", "1")}), 1)
        g = sft_to_presentation(hat_sft(spec))
        assert {str(e.label) for e in g.edges} == {"{0}"}


def brute_hat_words(words_n, alphabet, n):
    symbols = choice_symbols(alphabet)
    words_n = set(words_n)
    return {w for w in itertools.product(symbols, repeat=n) if set(fillings(w)) <= words_n}


class TestHatSofic:
    def test_matches_hat_sft_on_golden_mean(self):
        g = determinize(sft_to_presentation(golden_mean_sft()))
        a = hat_sofic(g)
        b = sft_to_presentation(hat_sft(golden_mean_sft()))
        for n in range(9):
            assert set(enumerate_words(a, n)) == set(enumerate_words(b, n))

    def test_full_shift_one_vertex(self):
        g = sft_to_presentation(full_shift(2))
        h = hat_sofic(g)
        assert len(h.vertices) == 1 and len(h.edges) == 3

    def test_even_shift_oracle(self):
        h = hat_presentation(ShiftSpec(sofic=even_graph()))
        for n in range(1, 7):
            legal = ["".join(w) for w in itertools.product("01", repeat=n) if even_ok(w)]
            got = set(enumerate_words(h, n))
            oracle = brute_hat_words([tuple(w) for w in legal], ("0", "1"), n)
            assert got <= oracle
            # every oracle word that is part of a longer oracle word on both sides is presented
            longer = brute_hat_words(
                [tuple(w) for w in itertools.product("01", repeat=n + 4) if even_ok(w)], ("0", "1"), n + 4)
            assert {w[2:2 + n] for w in longer} <= got


class TestExact:
    def test_golden_mean(self):
        r = ind_entropy_exact(golden_mean_sft())
        assert r.as_rational == (2, 2)
        assert abs(r.value - math.log(2) / 2) < 1e-15
        assert [str(s) for s in r.cycle] == ["{0,1}", "{0}"]

    @pytest.mark.parametrize("k", [2, 3])
    def test_full_shift(self, k):
        r = ind_entropy_exact(full_shift(k))
        assert r.as_rational == (k, 1)
        assert len(r.cycle[0]) == k

    @pytest.mark.parametrize("N", [2, 3])
    def test_higher_block_collapse(self, N):
        for spec in (ShiftSpec(sft=golden_mean_sft()), ShiftSpec(sofic=even_graph())):
            hb, _ = higher_block(spec, N)
            assert ind_entropy_exact(hb).as_rational[0] == 1

    def test_even_shift_zero(self):
        assert ind_entropy_exact(even_graph()).as_rational[0] == 1

    def test_exact_tie(self):
        # ln2/2 and ln4/4 are equal; compare_means must say so exactly
        assert compare_means((2, 1, 2), (4, 1, 4)) == 0
        assert compare_means((3, 1, 2), (2, 1, 1)) < 0
        assert compare_means((9, 1, 2), (3, 1, 1)) == 0

    @pytest.mark.parametrize("forbidden,alphabet", [
        (["11"], "01"), (["111", "010"], "01"), (["00", "12", "21"], "012"), (["101", "11"], "01"),
        (["02", "10", "22"], "012"),
    ])
    def test_karp_against_cycle_enumeration(self, forbidden, alphabet):
        spec = SftSpec.from_words(alphabet, forbidden)
        g = hat_presentation(ShiftSpec(sft=spec))
        p, l = brute_max_mean(g)
        r = ind_entropy_exact(spec)
        assert r.as_rational[0] ** l == p ** r.as_rational[1]
        assert math.prod(len(s) for s in r.cycle) == r.as_rational[0]
        assert len(r.cycle) == r.as_rational[1] <= len(g.vertices)

    def test_karp_single_component(self):
        g = LabeledGraph(("a",), (("a", "a", ZO),), (ZO,))
        (p, l), cyc = karp_max_mean_cycle(g)
        assert (p, l) == (2, 1) and len(cyc) == 1


def brute_approx(spec, m):
    g = hat_presentation(ShiftSpec.of(spec))
    return max(filling_count(w) for w in enumerate_words(g, m))


class TestApprox:
    def test_golden_mean_m3(self):
        r = ind_entropy_approx(golden_mean_sft(), 3)
        assert r.fillings == 4
        assert abs(r.value - math.log(4) / 3) < 1e-15
        assert [str(s) for s in r.witness] == ["{0,1}", "{0}", "{0,1}"]

    def test_golden_mean_closed_form(self):
        for m in range(1, 21):
            assert ind_entropy_approx(golden_mean_sft(), m).fillings == 2 ** math.ceil(m / 2)

    def test_full_shift(self):
        for m in (1, 5, 9):
            assert abs(ind_entropy_approx(full_shift(2), m).value - math.log(2)) < 1e-15

    @pytest.mark.parametrize("forbidden,alphabet", [(["111", "010"], "01"), (["00", "12"], "012")])
    def test_against_enumeration(self, forbidden, alphabet):
        spec = SftSpec.from_words(alphabet, forbidden)
        for m in range(1, 6):
            r = ind_entropy_approx(spec, m)
            assert r.fillings == brute_approx(spec, m)
            assert filling_count(r.witness) == r.fillings

    def test_bad_length(self):
        with pytest.raises(ValueError):
            ind_entropy_approx(golden_mean_sft(), 0)


class TestAsymptoticPair:
    def test_golden_mean(self):
        w = asymptotic_pair(golden_mean_sft())
        assert w.describe() == ("...00.00000...", "...00.10000...")
        assert w.differing_indices() == [0] and w.diff_index == 0
        assert verify_asymptotic_pair(golden_mean_sft(), w)

    def test_full_shift(self):
        w = asymptotic_pair(full_shift(2))
        assert w.x_at(0) == "0" and w.y_at(0) == "1"
        assert all(w.x_at(i) == w.y_at(i) == "0" for i in range(-10, 10) if i != 0)

    def test_higher_block_has_none(self):
        hb, _ = higher_block(ShiftSpec(sft=golden_mean_sft()), 2)
        with pytest.raises(ZeroIndependenceEntropy):
            asymptotic_pair(hb)

    def test_even_shift_zero(self):
        with pytest.raises(ZeroIndependenceEntropy):
            asymptotic_pair(even_graph())

    def test_points_checked_by_scan(self):
        spec = SftSpec.from_words("012", ["111", "20", "02"])
        assert ind_entropy_exact(spec).as_rational[0] > 1
        w = asymptotic_pair(spec)
        for get in (w.x_at, w.y_at):
            window = [get(i) for i in range(-20, 21)]
            assert not spec.contains_forbidden(window)
