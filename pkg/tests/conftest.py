import itertools

import pytest

from shiftlab.core import LabeledGraph, SftSpec, ShiftSpec

RESULTS = {}


def record(key, ok, detail=""):
    """Remember an acceptance outcome for the end-of-run summary."""
    RESULTS[key] = (bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


def golden_mean_sft():
    return SftSpec.from_words("01", ["11"])


def even_graph():
    return LabeledGraph(("a", "b"), (("a", "a", "0"), ("a", "b", "1"), ("b", "a", "1")), ("0", "1"))


def full_shift(k=2):
    return SftSpec(tuple(str(i) for i in range(k)), frozenset(), 0)


def bridge_graph():
    return LabeledGraph(
        ("a", "b"),
        (("a", "a", "x"), ("a", "a", "y"), ("b", "b", "z"), ("a", "b", "w")),
        ("w", "x", "y", "z"),
    )


@pytest.fixture
def gm():
    return ShiftSpec(sft=golden_mean_sft())


@pytest.fixture
def even():
    return ShiftSpec(sofic=even_graph())


@pytest.fixture
def full2():
    return ShiftSpec(sft=full_shift(2))


# brute-force oracles, independent of the library's automata

def brute_words_sft(spec: SftSpec, n, pad=None):
    """Allowed n-words that extend by ``pad`` legal symbols on both sides.

    An allowed extension longer than the number of M-blocks repeats a block,
    so it closes into a cycle and extends forever.
    """
    pad = len(spec.alphabet) ** spec.memory + 1 if pad is None else pad
    span = spec.memory + 1

    def tail_ok(w):
        return len(w) < span or tuple(w[-span:]) not in spec.forbidden

    def head_ok(w):
        return len(w) < span or tuple(w[:span]) not in spec.forbidden

    def extends(w, depth, right):
        if depth == 0:
            return True if not right else extends(w, pad, False)
        for a in spec.alphabet:
            v = w + (a,) if right else (a,) + w
            if (tail_ok(v) if right else head_ok(v)) and extends(v, depth - 1, right):
                return True
        return False

    out = []
    for w in itertools.product(spec.alphabet, repeat=n):
        if any(tuple(w[i:i + span]) in spec.forbidden for i in range(n - span + 1)):
            continue
        if extends(w, pad, True):
            out.append(w)
    return out


def even_ok(w):
    """Finite word is a factor of the even shift: interior 1-runs are even."""
    runs = "".join(w).split("0")
    return all(len(r) % 2 == 0 for r in runs[1:-1])
