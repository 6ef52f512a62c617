"""Randomized SFT suite and the invariant checks run by ``shiftlab verify``."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .core import SftSpec, ShiftSpec, apply_code
from .entropy import block_counts, topological_entropy
from .errors import EmptyShift, ShiftLabError, ZeroIndependenceEntropy
from .graph import determinize, trim
from .independence import (
    asymptotic_pair,
    fillings,
    hat_presentation,
    ind_entropy_approx,
    ind_entropy_exact,
    verify_asymptotic_pair,
)
from .shifts import enumerate_words, higher_block, inverse_block_code, periodic_points

TOL = 1e-9


def random_sft(rng: random.Random, max_alphabet: int = 3, max_memory: int = 2) -> SftSpec:
    """A non-empty random SFT: each (M+1)-word forbidden with a random rate."""
    while True:
        alphabet = tuple(str(i) for i in range(rng.randint(2, max_alphabet)))
        memory = rng.randint(0, max_memory)
        rate = rng.uniform(0.1, 0.5)
        words = itertools.product(alphabet, repeat=memory + 1)
        forbidden = frozenset(w for w in words if rng.random() < rate)
        spec = SftSpec(alphabet, forbidden, memory)
        try:
            ShiftSpec(sft=spec).graph
        except EmptyShift:
            continue
        return spec


def enlarge(spec: SftSpec, rng: random.Random) -> SftSpec:
    """Drop one forbidden word, giving a shift that contains ``spec``."""
    if not spec.forbidden:
        return spec
    drop = rng.choice(sorted(spec.forbidden))
    return SftSpec(spec.alphabet, spec.forbidden - {drop}, spec.memory)


def random_suite(count: int = 200, seed: int = 0) -> list[tuple[SftSpec, SftSpec]]:
    """Seeded (X, Y) pairs with X ⊆ Y."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        x = random_sft(rng)
        out.append((x, enlarge(x, rng)))
    return out


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _safe(name, fn) -> Check:
    try:
        ok, detail = fn()
    except ShiftLabError as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    return Check(name, bool(ok), detail)


def check_spec(spec, depth: int = 6, m: int = 60, count_n: int = 40) -> list[Check]:
    """Invariant checks for one shift; each is independent of the others."""
    spec = ShiftSpec.of(spec)
    checks = []

    def factorial():
        for n in range(1, depth):
            shorter = set(enumerate_words(spec, n))
            for w in enumerate_words(spec, n + 1):
                if w[:-1] not in shorter or w[1:] not in shorter:
                    return False, f"{w} has a non-word prefix or suffix"
        return True, f"n < {depth}"

    def determinize_language():
        g = spec.graph
        d = determinize(g)
        for n in range(depth + 1):
            if enumerate_words(g, n) != enumerate_words(d, n):
                return False, f"languages differ at n = {n}"
        return True, f"n <= {depth}"

    def trim_idempotent():
        g = spec.graph
        return trim(g) == g and trim(trim(g)) == trim(g), ""

    def entropy_vs_counting():
        h = topological_entropy(spec).value
        c = block_counts(spec, count_n)[-1]
        gap = abs(h - math.log(c) / count_n)
        return gap <= 0.05, f"gap {gap:.3g} at n = {count_n}"

    def higher_block_conjugacy():
        h = topological_entropy(spec).value
        hb, beta = higher_block(spec, 2)
        inv = inverse_block_code(beta)
        for p in range(1, 5):
            for pt in periodic_points(spec, p):
                if apply_code(inv, apply_code(beta, pt)) != pt:
                    return False, f"round trip fails on {pt}"
        gap = abs(topological_entropy(hb).value - h)
        return gap <= TOL, f"entropy gap {gap:.3g}"

    def higher_block_collapse():
        hb, _ = higher_block(spec, 2)
        v = ind_entropy_exact(hb).as_rational
        return v[0] == 1, f"product {v[0]} over {v[1]}"

    def ind_bound():
        hi, h = ind_entropy_exact(spec).value, topological_entropy(spec).value
        return hi <= h + TOL, f"h_ind {hi:.10g} <= h {h:.10g}"

    def approx_agrees():
        exact = ind_entropy_exact(spec).value
        approx = ind_entropy_approx(spec, m).value
        return exact <= approx + 1e-12 and approx - exact <= 0.05, f"gap {approx - exact:.3g} at m = {m}"

    def hat_oracle():
        words = set(enumerate_words(spec, 4))
        for w in enumerate_words(hat_presentation(spec), 4):
            if not set(fillings(w)) <= words:
                return False, f"{w} has a filling outside the language"
        return True, "n = 4"

    def asymptotic():
        exact = ind_entropy_exact(spec)
        multi = any(len(e.label) > 1 for e in hat_presentation(spec).edges)
        if exact.as_rational[0] == 1:
            if not multi:
                return True, "no multi-member label, h_ind = 0"
            try:
                asymptotic_pair(spec)
            except ZeroIndependenceEntropy:
                return True, "h_ind = 0"
            return False, "extractor ignored h_ind = 0"
        w = asymptotic_pair(spec)
        ok = verify_asymptotic_pair(spec, w) and len(w.differing_indices()) == 1
        return ok, " vs ".join(w.describe())

    for name, fn in [
        ("language is factorial", factorial),
        ("determinize keeps the language", determinize_language),
        ("trim is idempotent", trim_idempotent),
        ("entropy matches block counts", entropy_vs_counting),
        ("2-block recoding is a conjugacy", higher_block_conjugacy),
        ("2-block recoding has h_ind = 0", higher_block_collapse),
        ("h_ind <= h", ind_bound),
        (f"h_ind matches the m = {m} value", approx_agrees),
        ("hat words have legal fillings", hat_oracle),
        ("asymptotic pair when h_ind > 0", asymptotic),
    ]:
        checks.append(_safe(name, fn))
    return checks


def check_monotone(x: SftSpec, y: SftSpec) -> Check:
    a, b = ind_entropy_exact(x).value, ind_entropy_exact(y).value
    return Check("h_ind grows with the shift", a <= b + 1e-12, f"{a:.10g} <= {b:.10g}")


def fuzz(trials: int, seed: int = 0, m: int = 60) -> list[tuple[int, SftSpec, list[Check]]]:
    out = []
    for i, (x, y) in enumerate(random_suite(trials, seed)):
        out.append((i, x, check_spec(x, depth=4, m=m) + [check_monotone(x, y)]))
    return out
