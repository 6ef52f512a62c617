"""Conjugate recoding that raises independence entropy toward topological entropy.

Given a sofic shift X and ε, pick marker words M, S, C and a family Γ_K of
long words MSC(L F R C)^K that pairwise cannot overlap, then recode X by
replacing each occurrence of w ∈ Γ_K with a fresh symbol w̄ followed by
stars. In the recoded shift the position of w̄ is a free choice among
|Γ_K| symbols, which certifies independence entropy ln|Γ_K| / η_K.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .core import ChoiceSymbol, LabeledGraph, ShiftSpec, SlidingBlockCode, is_subword, word_text
from .entropy import block_counts, graph_entropy_components, topological_entropy
from .errors import (
    BudgetExceeded,
    Infeasible,
    InternalContradiction,
    OverlapUnverified,
    StateBlowup,
    UndefinedWindow,
    ZeroEntropy,
)
from .graph import determinize, diameter, distances_from, minimize_right_resolving, shortest_path, trim
from .independence import ind_entropy_exact
from .shifts import contains_point, iter_words

ALPHA_HORIZON = 64
DEFAULT_ENUM_CAP = 10**6
DEFAULT_N_CAP = 100_000
STAR = "*"


@dataclass(frozen=True)
class Core:
    graph: LabeledGraph     # irreducible, minimal right-resolving
    v: int
    rho: int
    lam: float
    alpha: float


def select_core(spec, cap: int | None = None) -> Core:
    """Entropy-maximizing irreducible component and its growth constants."""
    spec = ShiftSpec.of(spec)
    g = trim(determinize(spec.graph, cap))
    comps = graph_entropy_components(g)
    h, lam = None, 0.0
    for comp, lam_c, _, _ in comps:
        if h is None or lam_c > lam * (1 + 1e-12):
            h, lam = comp, lam_c
    if lam <= 1.0:
        raise ZeroEntropy("shift has zero topological entropy")
    h = minimize_right_resolving(h)
    rho = diameter(h)
    counts = block_counts(h, ALPHA_HORIZON)
    ratio = min(math.exp(math.log(c) - k * math.log(lam)) for k, c in enumerate(counts, start=1))
    return Core(h, len(h.vertices), rho, lam, 0.99 * ratio)


def _in_language(g: LabeledGraph, word) -> bool:
    return bool(g.read(frozenset(g.vertices), word))


def choose_n_k(core: Core, epsilon: float, n_cap: int = DEFAULT_N_CAP) -> tuple[int, int]:
    """Smallest n (then k) satisfying the length inequality, with the marker count verified."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    eps = Fraction(epsilon)
    rho_eff = max(core.rho, 1)
    rate = (1 - epsilon) * math.log(core.lam)
    counts: list[int] = []
    for n in range(1, n_cap + 1):
        lo = math.log(core.v * rho_eff**2 * n / core.alpha) / rate
        k = math.floor(lo) + 1
        while 2 * k + 2 * core.rho < eps * n:
            if k >= 1 and k * rate > math.log(core.v * rho_eff**2 * n / core.alpha):
                if len(counts) < k:
                    counts = block_counts(core.graph, min(n_cap, max(k, 2 * len(counts))), cap=n_cap)
                if counts[k - 1] > n - k + 1:
                    return n, k
            k += 1
    raise Infeasible(f"no (n, k) found with n <= {n_cap}")


@dataclass(frozen=True)
class Marker:
    M: tuple
    S: tuple
    C: tuple
    c_end: str              # vertex where the fixed presentation of C ends
    c_entry: frozenset      # vertices from which C leads to c_end


def lex_least_word(g: LabeledGraph, n: int) -> tuple:
    state = frozenset(g.vertices)
    word = []
    for _ in range(n):
        for a in g.alphabet:
            t = g.step(state, a)
            if t:
                word.append(a)
                state = t
                break
    return tuple(word)


def find_marker(h: LabeledGraph, n: int, k: int, M=None, S=None, C=None) -> Marker:
    """Marker words: M of length n, C of length k avoiding M, connector S.

    Unspecified words are chosen lexicographically least.
    """
    M = tuple(M) if M is not None else lex_least_word(h, n)
    if len(M) != n or not _in_language(h, M):
        raise Infeasible(f"M = {word_text(M)} is not an allowed {n}-block")
    if C is None:
        seen = {M[i:i + k] for i in range(n - k + 1)}
        C = next((w for w in iter_words(h, k) if w not in seen), None)
        if C is None:
            raise InternalContradiction("every k-block occurs in M despite the counting guarantee")
    C = tuple(C)
    if len(C) != k or is_subword(C, M):
        raise Infeasible(f"C = {word_text(C)} must be a {k}-block that does not occur in M")
    t_m = h.read(frozenset(h.vertices), M)
    if S is None:
        parent = {t_m: None}
        queue = deque([t_m])
        found = None
        while queue:
            st = queue.popleft()
            if h.read(st, C):
                found = st
                break
            for a in h.alphabet:
                nxt = h.step(st, a)
                if nxt and nxt not in parent:
                    parent[nxt] = (st, a)
                    queue.append(nxt)
        if found is None:
            raise InternalContradiction("no connector from M to C in an irreducible graph")
        S = []
        st = found
        while parent[st] is not None:
            st, a = parent[st]
            S.append(a)
        S = tuple(reversed(S))
    S = tuple(S)
    ends = h.read(t_m, S + C)
    if not ends:
        raise Infeasible("MSC is not an allowed block")
    c_end = next(v for v in h.vertices if v in ends)
    entry = frozenset(u for u in h.vertices if h.read(frozenset([u]), C) == frozenset([c_end]))
    return Marker(M, S, C, c_end, entry)


@dataclass(frozen=True)
class Upsilon:
    f: int
    ell: int
    r: int
    count: int
    buckets: dict = field(compare=False)    # (ell, r) -> count


def _connector_tables(h: LabeledGraph, marker: Marker):
    ell = distances_from(h, marker.c_end)
    # distance from each vertex into the entry set of C
    r = {u: 0 for u in marker.c_entry}
    queue = deque(marker.c_entry)
    while queue:
        u = queue.popleft()
        for e in h.in_edges[u]:
            if e.source not in r:
                r[e.source] = r[u] + 1
                queue.append(e.source)
    return ell, r


def _bucket_of(h, starts_ends, ell, r):
    """(ell, r, start) minimizing over the presentations of one word."""
    vi = h.vertex_index
    return min((ell[a], r[b], vi[a], a, b) for a, b in starts_ends)


def build_upsilon(h: LabeledGraph, marker: Marker, f: int, cap: int | None = None) -> Upsilon:
    """Exact bucket sizes of f-blocks by connector lengths (ℓ, r).

    Each f-block is assigned to the bucket of its cheapest presentation.
    Counting runs a transfer matrix over partial maps start -> current
    vertex, so no block is enumerated.
    """
    if f < 1:
        raise Infeasible(f"inner length f = {f} must be >= 1")
    cap = cap or 200_000
    ell, r = _connector_tables(h, marker)
    verts = h.vertices
    trans = {(e.source, e.label): e.target for e in h.edges}
    counts = {tuple(verts): 1}
    for _ in range(f):
        new: dict = {}
        for state, c in counts.items():
            for a in h.alphabet:
                nxt = tuple(trans.get((v, a)) if v is not None else None for v in state)
                if any(x is not None for x in nxt):
                    new[nxt] = new.get(nxt, 0) + c
        if len(new) > cap:
            raise StateBlowup(f"bucket counting exceeded {cap} states")
        counts = new
    buckets: dict = {}
    for state, c in counts.items():
        pairs = [(a, b) for a, b in zip(verts, state) if b is not None]
        key = _bucket_of(h, pairs, ell, r)[:2]
        buckets[key] = buckets.get(key, 0) + c
    (bl, br), best = min(buckets.items(), key=lambda kv: (-kv[1], kv[0]))
    return Upsilon(f, bl, br, best, buckets)


def upsilon_blocks(h: LabeledGraph, marker: Marker, ups: Upsilon, cap: int = DEFAULT_ENUM_CAP) -> list[tuple]:
    """The blocks L F R C of the chosen bucket, in lexicographic order of F."""
    ell, r = _connector_tables(h, marker)
    out = []
    for F in iter_words(h, ups.f):
        pairs = []
        for a in h.vertices:
            end = h.read(frozenset([a]), F)
            if end:
                pairs.append((a, next(iter(end))))
        le, re_, _, a, b = _bucket_of(h, pairs, ell, r)
        if (le, re_) != (ups.ell, ups.r):
            continue
        L = tuple(e.label for e in shortest_path(h, marker.c_end, {a}))
        R = tuple(e.label for e in shortest_path(h, b, marker.c_entry))
        out.append(L + F + R + marker.C)
        if len(out) > cap:
            raise BudgetExceeded(f"more than {cap} inner blocks")
    if len(out) != ups.count:
        raise InternalContradiction(f"enumerated {len(out)} blocks, counted {ups.count}")
    return out


@dataclass(frozen=True)
class BoostPlan:
    epsilon: float | None
    core: Core
    n: int
    k: int
    f: int
    marker: Marker
    upsilon: Upsilon
    manual: bool = False

    @property
    def M(self):
        return self.marker.M

    @property
    def S(self):
        return self.marker.S

    @property
    def C(self):
        return self.marker.C

    @property
    def l(self) -> int:
        return len(self.marker.S)

    @property
    def block_length(self) -> int:
        return self.k + self.upsilon.ell + self.f + self.upsilon.r

    def eta(self, K: int) -> int:
        return self.block_length * K + self.n + self.l + self.k

    def inequality_holds(self) -> bool:
        """Both strict sides of the (n, k) length condition."""
        if self.epsilon is None:
            return False
        c = self.core
        rho_eff = max(c.rho, 1)
        lower = math.log(c.v * rho_eff**2 * self.n / c.alpha) / ((1 - self.epsilon) * math.log(c.lam))
        return lower < self.k and 2 * self.k + 2 * c.rho < Fraction(self.epsilon) * self.n

    def checks(self) -> dict[str, bool]:
        h = self.core.graph
        k_count = block_counts(h, self.k)[-1]
        f_count = block_counts(h, self.f)[-1]
        c = self.core
        rho_eff = max(c.rho, 1)
        out = {
            "C not in M": not is_subword(self.C, self.M),
            "MSC allowed": _in_language(h, self.M + self.S + self.C),
            "|B_k| > n-k+1": k_count > self.n - self.k + 1,
            "f >= 1": self.f >= 1,
            "|Upsilon| >= 1": self.upsilon.count >= 1,
            "|Upsilon| * (v rho)^2 >= |B_f|": self.upsilon.count * (c.v * rho_eff) ** 2 >= f_count,
            "connectors <= rho": max(self.upsilon.ell, self.upsilon.r, self.l) <= c.rho,
        }
        if not self.manual:
            out["length inequality"] = self.inequality_holds()
        return out

    def to_json(self) -> dict:
        c = self.core
        return {
            "epsilon": self.epsilon,
            "manual": self.manual,
            "v": c.v,
            "rho": c.rho,
            "lambda": c.lam,
            "alpha": c.alpha,
            "n": self.n,
            "k": self.k,
            "f": self.f,
            "M": word_text(self.M),
            "S": word_text(self.S),
            "C": word_text(self.C),
            "l": self.l,
            "ell": self.upsilon.ell,
            "r": self.upsilon.r,
            "upsilon_count": str(self.upsilon.count),
            "upsilon_buckets": {f"{a},{b}": str(v) for (a, b), v in sorted(self.upsilon.buckets.items())},
            "block_length": self.block_length,
            "anchors": {"c_end": c_end_text(self), "c_entry": sorted(map(str, self.marker.c_entry))},
            "core": {
                "vertices": list(map(str, c.graph.vertices)),
                "edges": [{"from": e.source, "to": e.target, "label": str(e.label)} for e in c.graph.edges],
                "alphabet": list(map(str, c.graph.alphabet)),
            },
        }


def c_end_text(plan: BoostPlan) -> str:
    return str(plan.marker.c_end)


def automatic_plan(spec, epsilon: float, n_cap: int = DEFAULT_N_CAP, cap: int | None = None) -> BoostPlan:
    core = select_core(spec, cap)
    n, k = choose_n_k(core, epsilon, n_cap)
    marker = find_marker(core.graph, n, k)
    f = n - 2 * k - 2 * core.rho
    ups = build_upsilon(core.graph, marker, f)
    return BoostPlan(epsilon, core, n, k, f, marker, ups)


def manual_plan(spec, n: int, k: int, M=None, C=None, S=None, f: int | None = None,
                epsilon: float | None = None, cap: int | None = None) -> BoostPlan:
    """Plan from user-chosen lengths and words; the length inequality is not required."""
    core = select_core(spec, cap)
    marker = find_marker(core.graph, n, k, M=M, S=S, C=C)
    if f is None:
        f = n - 2 * k - 2 * core.rho
    ups = build_upsilon(core.graph, marker, f)
    return BoostPlan(epsilon, core, n, k, f, marker, ups, manual=True)


@dataclass(frozen=True)
class GammaFamily:
    plan: BoostPlan
    K: int
    eta: int
    size: int               # |Γ_K| = |Υ|^K, exact
    log_size: float
    words: tuple | None     # explicit words when enumerable


def gamma(plan: BoostPlan, K: int, enumerate_cap: int = DEFAULT_ENUM_CAP) -> GammaFamily:
    if K < 0:
        raise ValueError("K must be >= 0")
    size = plan.upsilon.count ** K
    log_size = K * math.log(plan.upsilon.count)
    eta = plan.eta(K)
    words = None
    if size <= enumerate_cap:
        h = plan.core.graph
        blocks = upsilon_blocks(h, plan.marker, plan.upsilon, enumerate_cap)
        head = plan.M + plan.S + plan.C
        words = tuple(head + tuple(itertools.chain.from_iterable(combo))
                      for combo in itertools.product(blocks, repeat=K))
        if len(set(words)) != size:
            raise InternalContradiction("Γ words are not pairwise distinct")
        for w in words:
            if len(w) != eta or not _in_language(h, w):
                raise InternalContradiction(f"Γ word {word_text(w)} is not an allowed {eta}-block")
    return GammaFamily(plan, K, eta, size, log_size, words)


@dataclass(frozen=True)
class OverlapVerdict:
    structural: bool
    exhaustive: bool | None                 # None when Γ was not enumerated
    core_violation: tuple | None            # (w, w', q) with q in [1, η-k-1]
    tail_ok: bool | None                    # shifts q in [η-k, η-1]
    tail_violation: tuple | None
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.structural and self.exhaustive is not False

    @property
    def full_range(self) -> bool:
        return self.passed and self.tail_ok is not False


def _designed_c_positions(plan: BoostPlan, K: int) -> list[int]:
    first = plan.n + plan.l
    return [first + j * plan.block_length for j in range(K + 1)]


def check_no_overlap(family: GammaFamily) -> OverlapVerdict:
    plan, K, eta, k = family.plan, family.K, family.eta, family.plan.k
    notes = []
    positions = _designed_c_positions(plan, K)
    structural = not is_subword(plan.C, plan.M)
    if not structural:
        notes.append("C occurs in M")
    # any shift q >= l + k would put the copy of M over a window holding a full C
    for q in range(plan.l + k, eta - k):
        stop = min(q + plan.n, eta)
        if not any(q <= p and p + k <= stop for p in positions):
            structural = False
            notes.append(f"window at shift {q} holds no designed C")
            break
    if family.words is not None:
        for w in family.words:
            if any(w[p:p + k] != plan.C for p in positions):
                structural = False
                notes.append(f"C missing at a designed position of {word_text(w)}")
                break
    if family.words is None:
        return OverlapVerdict(structural, None, None, None, None, tuple(notes))
    coded = _encode_words(family.words, plan.core.graph.alphabet)
    hit = kernels.first_overlap(coded, 1, eta - k - 1)
    core_violation = None if hit is None else (family.words[hit[0]], family.words[hit[1]], hit[2])
    tail = kernels.first_overlap(coded, eta - k, eta - 1)
    tail_violation = None if tail is None else (family.words[tail[0]], family.words[tail[1]], tail[2])
    return OverlapVerdict(structural, core_violation is None, core_violation,
                          tail_violation is None, tail_violation, tuple(notes))


def _encode_words(words, alphabet) -> np.ndarray:
    idx = {s: i for i, s in enumerate(alphabet)}
    return np.array([[idx[s] for s in w] for w in words], dtype=np.intc).reshape(len(words), -1)


@dataclass(frozen=True, eq=False)
class Recoder:
    family: GammaFamily
    forward: SlidingBlockCode
    inverse: SlidingBlockCode
    bars: dict              # Γ word -> its symbol
    star: str

    @property
    def alphabet_size(self) -> int:
        return len(self.forward.target)


def bar_name(word) -> str:
    return "[" + word_text(word) + "]"


def build_recoder(family: GammaFamily, verdict: OverlapVerdict | None = None) -> Recoder:
    """Sliding block codes for the recoding and its inverse."""
    if family.words is None:
        raise BudgetExceeded("Γ was not enumerated; raise the enumeration cap")
    if verdict is None:
        verdict = check_no_overlap(family)
    if not verdict.passed:
        raise OverlapUnverified(f"overlap check failed: {verdict.core_violation or verdict.notes}")
    plan, eta, k = family.plan, family.eta, family.plan.k
    base = plan.core.graph.alphabet
    star = STAR
    while star in base:
        star += "*"
    bars = {w: bar_name(w) for w in family.words}
    if set(bars.values()) & set(base):
        raise ValueError("Γ symbol names collide with the base alphabet")
    unbar = {b: w for w, b in bars.items()}
    span = eta - k - 1

    def forward_map(window):
        m = span
        seg = window[m:m + eta]
        if seg in bars:
            return bars[seg]
        for j in range(1, span + 1):
            if window[m - j:m - j + eta] in bars:
                return star
        return window[m]

    base_set = set(base)

    def inverse_map(window):
        c = window[span]
        if c in base_set:
            return c
        if c in unbar:
            return unbar[c][0]
        if c == star:
            for j in range(1, span + 1):
                u = window[span - j]
                if u in unbar:
                    return unbar[u][j]
                if u != star:
                    break
        raise UndefinedWindow(f"window {word_text(window)} has no recoded preimage")

    target = tuple(base) + (star,) + tuple(bars[w] for w in family.words)
    forward = SlidingBlockCode(span, eta - 1, tuple(base), target, forward_map)
    inverse = SlidingBlockCode(span, 0, target, tuple(base), inverse_map)
    return Recoder(family, forward, inverse, bars, star)


@dataclass(frozen=True)
class RoundTrip:
    checked: int
    failure: tuple | None
    exhaustive_up_to: int
    anchored_range: tuple[int, int] | None

    @property
    def ok(self) -> bool:
        return self.failure is None


def verify_roundtrip(recoder: Recoder, spec, max_period: int, exhaustive_up_to: int | None = None) -> RoundTrip:
    """Inverse ∘ forward on periodic points of period <= max_period.

    Every cycle of length <= ``exhaustive_up_to`` is checked. Longer periods
    are checked on the points carrying a Γ occurrence, rotated to start with
    it; points without one are fixed by both codes, and both codes commute
    with rotation.
    """
    spec = ShiftSpec.of(spec)
    fam = recoder.family
    eta, k = fam.eta, fam.plan.k
    g = trim(determinize(spec.graph))
    base = g.alphabet
    if exhaustive_up_to is None:
        exhaustive_up_to = eta - 1
    exhaustive_up_to = min(exhaustive_up_to, max_period)
    idx = {s: i for i, s in enumerate(base)}
    vi = g.vertex_index
    trans = np.full((len(g.vertices), len(base)), -1, dtype=np.intc)
    for e in g.edges:
        trans[vi[e.source], idx[e.label]] = vi[e.target]
    coded = _encode_words(fam.words, base)
    checked, failure = kernels.roundtrip_cycles(trans, coded, k, np.zeros(0, dtype=np.intc),
                                                1, exhaustive_up_to, len(base))
    anchored = None
    lo = max(eta, exhaustive_up_to + 1)
    if failure is None and lo <= max_period:
        anchored = (lo, max_period)
        for row in coded:
            c, failure = kernels.roundtrip_cycles(trans, coded, k, row, lo, max_period, len(base))
            checked += c
            if failure is not None:
                break
    if failure is not None:
        failure = tuple(base[i] for i in failure)
    return RoundTrip(checked, failure, exhaustive_up_to, anchored)


@dataclass(frozen=True)
class Certificate:
    K: int
    eta: int
    value: float            # ln|Γ_K| / η_K
    limit: float            # ln|Υ| / block length
    target: float | None    # (1-ε) ln λ for automatic plans
    witness_fillings: int   # |Φ(ŵ_K)| = |Γ_K|
    witness: tuple | None   # ŵ_K as choice symbols when Γ is enumerated

    @property
    def meets_target(self) -> bool | None:
        return None if self.target is None else self.limit >= self.target


def certificate(family: GammaFamily, star: str = STAR) -> Certificate:
    plan = family.plan
    witness = None
    if family.words is not None:
        bars = tuple(bar_name(w) for w in family.words)
        witness = (ChoiceSymbol(bars),) + (ChoiceSymbol((star,)),) * (family.eta - plan.k - 1)
    limit = math.log(plan.upsilon.count) / plan.block_length
    target = None if plan.manual or plan.epsilon is None else (1 - plan.epsilon) * math.log(plan.core.lam)
    return Certificate(family.K, family.eta, family.log_size / family.eta, limit, target, family.size, witness)


@dataclass(frozen=True)
class RealizedWitness:
    context: tuple          # u: each w u is a period of X
    images: tuple           # forward image of each periodic point w u
    choice_cycle: tuple     # ChoiceSymbols; position 0 holds every w̄

    @property
    def fillings(self) -> int:
        return math.prod(len(s) for s in self.choice_cycle)


def realize_witness(recoder: Recoder, spec, max_context: int = 16) -> RealizedWitness:
    """A periodic point of the recoded multi-choice shift carrying ŵ_K.

    Finds u with every w u periodic in X, checks the images of these points
    differ only at the w̄ position, and merges them into one choice cycle.
    """
    from .core import PeriodicPoint, apply_code

    spec = ShiftSpec.of(spec)
    words = recoder.family.words
    g = spec.graph
    for length in range(0, max_context + 1):
        for u in iter_words(g, length) if length else [()]:
            if not all(contains_point(g, w + u, (), w + u) for w in words):
                continue
            images = [apply_code(recoder.forward, PeriodicPoint(w + u)).cycle for w in words]
            if any(img[1:] != images[0][1:] for img in images):
                continue
            cycle = (ChoiceSymbol(tuple(img[0] for img in images)),) + tuple(
                ChoiceSymbol((s,)) for s in images[0][1:])
            return RealizedWitness(tuple(u), tuple(images), cycle)
    raise Infeasible(f"no common context of length <= {max_context} realizes the witness")


@dataclass(frozen=True)
class SupReport:
    lower: float
    upper: float
    ind_entropy: float
    certificates: dict      # epsilon -> certificate limit
    attained: bool

    @property
    def statement(self) -> str:
        return ("for sofic shifts the supremum of independence entropy over conjugates "
                "equals the topological entropy; the lower bound is certified, not the limit")


def sup_ind_report(spec, epsilons: Sequence[float] = (0.9, 0.8)) -> SupReport:
    spec = ShiftSpec.of(spec)
    h = topological_entropy(spec)
    ind = ind_entropy_exact(spec)
    lower = ind.value
    certs = {}
    if h.eigenvalue > 1.0:
        for eps in epsilons:
            plan = automatic_plan(spec, eps)
            cert = certificate(gamma(plan, 1, enumerate_cap=0))
            certs[eps] = cert.limit
            lower = max(lower, cert.limit)
    upper = h.value if h.eigenvalue > 1.0 else 0.0
    attained = abs(ind.value - upper) <= 1e-9 + h.residual
    return SupReport(lower, upper, ind.value, certs, attained)
