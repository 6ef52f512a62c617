"""JSON readers and writers for shift specs, graphs, boost plans and recoders."""
from __future__ import annotations

import json
from pathlib import Path

from .core import LabeledGraph, SftSpec, ShiftSpec, word_text


class SchemaError(ValueError):
    pass


def _symbols(raw, what):
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{what} must be a non-empty list")
    return tuple(str(s) for s in raw)


def parse_word(raw, alphabet) -> tuple:
    """A word given as a list of symbols or as text.

    Text is split into characters for single-character alphabets and on
    "." otherwise.
    """
    if isinstance(raw, list):
        return tuple(str(s) for s in raw)
    if not isinstance(raw, str):
        raise SchemaError(f"cannot read a word from {raw!r}")
    if raw in ("", "ε"):
        return ()
    if all(len(str(a)) == 1 for a in alphabet):
        return tuple(raw)
    return tuple(raw.split("."))


def spec_from_json(data) -> ShiftSpec:
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    if "forbidden" in data:
        alphabet = _symbols(data.get("alphabet"), "alphabet")
        words = [parse_word(w, alphabet) for w in data["forbidden"]]
        return ShiftSpec(sft=SftSpec.from_words(alphabet, words))
    if "vertices" in data:
        return ShiftSpec(sofic=graph_from_json(data))
    raise SchemaError('expected an SFT ("alphabet", "forbidden") or graph ("vertices", "edges", "alphabet") object')


def graph_from_json(data) -> LabeledGraph:
    try:
        alphabet = _symbols(data["alphabet"], "alphabet")
        vertices = tuple(str(v) for v in data["vertices"])
        edges = tuple((str(e["from"]), str(e["to"]), str(e["label"])) for e in data["edges"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed graph object: missing {exc}") from None
    return LabeledGraph(vertices, edges, alphabet)


def graph_to_json(g: LabeledGraph) -> dict:
    return {
        "vertices": [str(v) for v in g.vertices],
        "edges": [{"from": str(e.source), "to": str(e.target), "label": str(e.label)} for e in g.edges],
        "alphabet": [str(a) for a in g.alphabet],
    }


def sft_to_json(spec: SftSpec) -> dict:
    return {
        "alphabet": [str(a) for a in spec.alphabet],
        "forbidden": sorted([str(s) for s in w] for w in spec.forbidden),
    }


def spec_to_json(spec: ShiftSpec) -> dict:
    return sft_to_json(spec.sft) if spec.is_sft else graph_to_json(spec.sofic)


def read_json(path):
    with open(Path(path), encoding="utf-8") as fh:
        return json.load(fh)


def load_spec(path) -> ShiftSpec:
    return spec_from_json(read_json(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def plan_from_json(data, alphabet) -> dict:
    """Keyword arguments for a manual boost plan."""
    if not isinstance(data, dict):
        raise SchemaError("plan must be an object")
    try:
        out = {"n": int(data["n"]), "k": int(data["k"])}
    except (KeyError, TypeError, ValueError):
        raise SchemaError("plan needs integer fields n and k") from None
    for key in ("M", "S", "C"):
        if key in data and data[key] is not None:
            out[key] = parse_word(data[key], alphabet)
    if data.get("f") is not None:
        out["f"] = int(data["f"])
    return out


def recoder_to_json(recoder) -> dict:
    """Both block maps as rule tables.

    Forward: a window whose core segment starting at offset 0 is a Γ word
    maps to that word's symbol; if a Γ word starts at offset -j
    (1 <= j <= span) it maps to the star; every other window maps to its
    center symbol. Inverse: a symbol of the base alphabet maps to itself,
    a Γ symbol to the first letter of its word, and a star preceded by
    j - 1 stars and a Γ symbol to letter j of that word.
    """
    fam = recoder.family
    fw, inv = recoder.forward, recoder.inverse
    words = [word_text(w) for w in fam.words]
    return {
        "eta": fam.eta,
        "K": fam.K,
        "star": recoder.star,
        "alphabet_size": recoder.alphabet_size,
        "forward": {
            "memory": fw.memory,
            "anticipation": fw.anticipation,
            "source": list(map(str, fw.source)),
            "target": list(map(str, fw.target)),
            "default": "center",
            "rules": [{"offset": 0, "word": w, "output": recoder.bars[t]} for w, t in zip(words, fam.words)]
            + [{"offset": -j, "word": w, "output": recoder.star}
               for j in range(1, fw.memory + 1) for w in words],
        },
        "inverse": {
            "memory": inv.memory,
            "anticipation": inv.anticipation,
            "source": list(map(str, inv.source)),
            "target": list(map(str, inv.target)),
            "default": "center",
            "expand": {recoder.bars[t]: w for w, t in zip(words, fam.words)},
        },
    }
