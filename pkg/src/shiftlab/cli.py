"""Command-line front end: ``shiftlab <command> FILE [options]``."""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import boost, io
from .core import word_text
from .entropy import block_counts, topological_entropy
from .errors import ShiftLabError
from .independence import asymptotic_pair, hat_presentation, ind_entropy_approx, ind_entropy_exact
from .shifts import enumerate_words, higher_block


def fmt(x: float) -> float:
    """Round to 10 significant digits for output."""
    return float(f"{x:.10g}")


def _epsilon(text: str) -> float:
    try:
        eps = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not 0 < eps < 1:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {text}")
    return eps


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shiftlab", description="Entropy and independence entropy of SFTs and sofic shifts.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="SFT or graph JSON file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = cmd("entropy", "topological entropy")
    sp.add_argument("--counting", type=_positive, metavar="N", help="also list ln|B_n|/n for n <= N")

    sp = cmd("ind-entropy", "independence entropy")
    sp.add_argument("--approx", type=_positive, metavar="M", help="finite-length value at length M")
    sp.add_argument("--witness", action="store_true", help="include witness words")

    sp = cmd("hat", "presentation of the multi-choice shift")
    sp.add_argument("-o", "--output", required=True)

    sp = cmd("higher-block", "N-th higher block shift")
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("-o", "--output")

    cmd("asymptotic-pair", "two points differing at one coordinate")

    sp = cmd("words", "allowed blocks of a given length")
    sp.add_argument("--n", type=_nonneg, required=True)
    sp.add_argument("--count", action="store_true", help="print only the exact count")

    sp = cmd("boost", "recoding with large independence entropy")
    sp.add_argument("--epsilon", type=_epsilon)
    sp.add_argument("--K", type=_nonneg, default=1)
    sp.add_argument("--manual", metavar="PLAN", help="plan JSON with n, k and optional f, M, S, C")
    sp.add_argument("--emit-recoder", metavar="OUT", help="write the recoder block maps as JSON")
    sp.add_argument("--roundtrip", type=_positive, metavar="P", help="round-trip periodic points up to period P")

    sp = cmd("verify", "run the invariant suite")
    sp.add_argument("--fuzz", type=_nonneg, default=0, metavar="TRIALS", help="also check random SFTs")
    sp.add_argument("--seed", type=int, default=0)
    return p


def _emit(args, data, lines):
    if args.json:
        print(io.dumps(data))
    else:
        for line in lines:
            print(line)


def run_entropy(args, spec):
    r = topological_entropy(spec)
    data = {"value": fmt(r.value), "eigenvalue": fmt(r.eigenvalue), "component": r.component_id, "residual": r.residual}
    lines = [f"h = {fmt(r.value)}", f"lambda = {fmt(r.eigenvalue)} (component {r.component_id}, residual {r.residual:.3g})"]
    if args.counting:
        counts = block_counts(spec, args.counting)
        data["counting"] = [{"n": n, "count": str(c), "value": fmt(math.log(c) / n)} for n, c in enumerate(counts, 1)]
        lines += [f"n={n} |B_n|={c} ln|B_n|/n={fmt(math.log(c) / n)}" for n, c in enumerate(counts, 1)]
    _emit(args, data, lines)


def run_ind_entropy(args, spec):
    r = ind_entropy_exact(spec)
    cycle = [str(s) for s in r.cycle]
    data = {"value": fmt(r.value), "cycle": cycle}
    lines = [f"h_ind = {fmt(r.value)} = ln({r.as_rational[0]})/{r.as_rational[1]}", "cycle: " + " ".join(cycle)]
    if args.witness:
        data["as_rational"] = [str(r.as_rational[0]), r.as_rational[1]]
    if args.approx:
        a = ind_entropy_approx(spec, args.approx)
        data["approx"] = {"m": a.m, "value": fmt(a.value), "fillings": str(a.fillings)}
        lines.append(f"m={a.m}: {fmt(a.value)} ({a.fillings} fillings)")
        if args.witness:
            data["approx"]["witness"] = [str(s) for s in a.witness]
            lines.append("witness: " + " ".join(str(s) for s in a.witness))
    _emit(args, data, lines)


def run_hat(args, spec):
    g = hat_presentation(spec)
    io.write_json(io.graph_to_json(g), args.output)
    _emit(args, {"vertices": len(g.vertices), "edges": len(g.edges), "output": args.output},
          [f"wrote {len(g.vertices)} vertices, {len(g.edges)} edges to {args.output}"])


def run_higher_block(args, spec):
    hb, beta = higher_block(spec, args.N)
    data = io.spec_to_json(hb)
    if args.output:
        io.write_json(data, args.output)
        print(f"wrote the {args.N}-block shift over {len(beta.target)} symbols to {args.output}")
    else:
        print(io.dumps(data))


def run_asymptotic_pair(args, spec):
    w = asymptotic_pair(spec)
    data = {
        "left": word_text(w.left), "right": word_text(w.right),
        "x_middle": word_text(w.x_middle), "y_middle": word_text(w.y_middle),
        "origin": w.origin, "diff_index": w.diff_index,
    }
    x, y = w.describe()
    _emit(args, data, [f"x = {x}", f"y = {y}", f"differ at index {w.diff_index}"])


def run_words(args, spec):
    if args.count:
        c = block_counts(spec, args.n)[-1] if args.n else 1
        _emit(args, {"n": args.n, "count": str(c)}, [str(c)])
        return
    words = [word_text(w) for w in enumerate_words(spec, args.n)]
    _emit(args, {"n": args.n, "count": str(len(words)), "words": words}, words)


def run_boost(args, spec, parser):
    if args.manual:
        kwargs = io.plan_from_json(io.read_json(args.manual), spec.alphabet)
        plan = boost.manual_plan(spec, epsilon=args.epsilon, **kwargs)
    elif args.epsilon is None:
        parser.error("boost needs --epsilon or --manual")
    else:
        plan = boost.automatic_plan(spec, args.epsilon)
    fam = boost.gamma(plan, args.K)
    verdict = boost.check_no_overlap(fam)
    cert = boost.certificate(fam)
    data = {
        "plan": plan.to_json(),
        "checks": plan.checks(),
        "K": fam.K,
        "eta": fam.eta,
        "gamma_size": str(fam.size),
        "enumerated": fam.words is not None,
        "overlap": {
            "structural": verdict.structural,
            "exhaustive": verdict.exhaustive,
            "core_violation": _violation(verdict.core_violation),
            "tail_ok": verdict.tail_ok,
            "tail_violation": _violation(verdict.tail_violation),
            "notes": list(verdict.notes),
        },
        "certificate": {
            "value": fmt(cert.value), "limit": fmt(cert.limit),
            "target": None if cert.target is None else fmt(cert.target),
            "meets_target": cert.meets_target,
            "witness_fillings": str(cert.witness_fillings),
        },
    }
    lines = [
        f"n={plan.n} k={plan.k} f={plan.f} l={plan.l} ell={plan.upsilon.ell} r={plan.upsilon.r} rho={plan.core.rho}",
        f"M={word_text(plan.M)} S={word_text(plan.S) or 'ε'} C={word_text(plan.C)}",
        f"|Upsilon|={plan.upsilon.count} eta_K={fam.eta} |Gamma_K|={fam.size}",
        f"overlap: structural={verdict.structural} exhaustive={verdict.exhaustive} tail={verdict.tail_ok}",
        f"certificate: value={fmt(cert.value)} limit={fmt(cert.limit)} target={cert.target and fmt(cert.target)}",
    ]
    recoder = None
    if args.emit_recoder or args.roundtrip:
        recoder = boost.build_recoder(fam, verdict)
    if args.roundtrip:
        rt = boost.verify_roundtrip(recoder, spec, args.roundtrip)
        data["roundtrip"] = {"checked": rt.checked, "ok": rt.ok, "max_period": args.roundtrip,
                             "failure": None if rt.ok else word_text(rt.failure)}
        lines.append(f"round trip: {rt.checked} cycles up to period {args.roundtrip}, ok={rt.ok}")
    if args.emit_recoder:
        io.write_json(io.recoder_to_json(recoder), args.emit_recoder)
        lines.append(f"wrote recoder to {args.emit_recoder}")
    _emit(args, data, lines)


def _violation(v):
    if v is None:
        return None
    return {"w": word_text(v[0]), "w_prime": word_text(v[1]), "q": v[2]}


def run_verify(args, spec):
    from . import verify

    rows = [("spec", c) for c in verify.check_spec(spec)]
    for i, _, checks in verify.fuzz(args.fuzz, args.seed):
        rows += [(f"random {i}", c) for c in checks]
    failed = [r for r in rows if not r[1].ok]
    data = {
        "passed": len(rows) - len(failed),
        "failed": len(failed),
        "checks": [{"target": t, "name": c.name, "ok": c.ok, "detail": c.detail} for t, c in rows],
    }
    width = max(len(c.name) for _, c in rows)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {t:<10} {c.name:<{width}}  {c.detail}" for t, c in rows]
    lines.append(f"{len(rows) - len(failed)} passed, {len(failed)} failed")
    _emit(args, data, lines)
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = io.load_spec(args.file)
        handler = {
            "entropy": run_entropy,
            "ind-entropy": run_ind_entropy,
            "hat": run_hat,
            "higher-block": run_higher_block,
            "asymptotic-pair": run_asymptotic_pair,
            "words": run_words,
            "verify": run_verify,
        }.get(args.command)
        status = run_boost(args, spec, parser) if handler is None else handler(args, spec)
    except ShiftLabError as exc:
        print(f"error: {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, io.SchemaError, ValueError) as exc:
        print(f"error: {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
