import json
import math
import shutil
import subprocess

import pytest

from shiftlab import io
from shiftlab.cli import build_parser, main

GM = {"alphabet": ["0", "1"], "forbidden": [["1", "1"]]}
EVEN = {
    "vertices": ["a", "b"],
    "edges": [{"from": "a", "to": "a", "label": "0"}, {"from": "a", "to": "b", "label": "1"},
              {"from": "b", "to": "a", "label": "1"}],
    "alphabet": ["0", "1"],
}
PLAN = {"n": 9, "k": 2, "f": 3, "M": "100000000", "C": "01", "S": ""}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in (("gm", GM), ("even", EVEN), ("plan", PLAN)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParse:
    def test_entropy(self):
        assert build_parser().parse_args(["entropy", "gm.json"]).command == "entropy"

    def test_boost(self):
        a = build_parser().parse_args(["boost", "gm.json", "--epsilon", "0.9", "--K", "5"])
        assert (a.command, a.epsilon, a.K) == ("boost", 0.9, 5)

    @pytest.mark.parametrize("eps", ["1.5", "0", "1", "-0.2", "abc"])
    def test_bad_epsilon(self, eps, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["boost", "gm.json", "--epsilon", eps])
        assert exc.value.code == 2

    def test_missing_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestCommands:
    def test_entropy_json(self, files, capsys):
        code, out, _ = run(capsys, "entropy", files["gm"], "--json")
        data = json.loads(out)
        assert code == 0 and data["value"] == 0.4812118251 and data["eigenvalue"] == 1.618033989
        assert set(data) == {"value", "eigenvalue", "component", "residual"}

    def test_entropy_counting(self, files, capsys):
        code, out, _ = run(capsys, "entropy", files["gm"], "--counting", "5", "--json")
        assert [c["count"] for c in json.loads(out)["counting"]] == ["2", "3", "5", "8", "13"]

    def test_ind_entropy_json(self, files, capsys):
        code, out, _ = run(capsys, "ind-entropy", files["gm"], "--json")
        assert json.loads(out) == {"value": 0.3465735903, "cycle": ["{0,1}", "{0}"]}

    def test_ind_entropy_approx(self, files, capsys):
        code, out, _ = run(capsys, "ind-entropy", files["gm"], "--approx", "3", "--witness", "--json")
        data = json.loads(out)
        assert data["approx"]["fillings"] == "4" and data["approx"]["witness"] == ["{0,1}", "{0}", "{0,1}"]
        assert data["approx"]["value"] == float(f"{math.log(4) / 3:.10g}")

    def test_hat(self, files, capsys):
        out_path = str(files["dir"] / "hat.json")
        code, _, _ = run(capsys, "hat", files["gm"], "-o", out_path)
        g = io.graph_from_json(io.read_json(out_path))
        assert code == 0 and "{0,1}" in g.alphabet

    def test_higher_block(self, files, capsys):
        code, out, _ = run(capsys, "higher-block", files["gm"], "--N", "2")
        assert code == 0 and json.loads(out)["alphabet"] == ["00", "01", "10"]

    def test_asymptotic_pair(self, files, capsys):
        code, out, _ = run(capsys, "asymptotic-pair", files["gm"], "--json")
        data = json.loads(out)
        assert code == 0 and data["x_middle"] != data["y_middle"] and data["diff_index"] == 0

    def test_asymptotic_pair_zero(self, files, capsys):
        code, _, err = run(capsys, "asymptotic-pair", files["even"])
        assert code == 1 and "ZeroIndependenceEntropy" in err

    def test_words(self, files, capsys):
        code, out, _ = run(capsys, "words", files["gm"], "--n", "2")
        assert out.split() == ["00", "01", "10"]
        code, out, _ = run(capsys, "words", files["gm"], "--n", "30", "--count")
        assert out.strip() == "2178309"

    def test_boost_manual(self, files, capsys):
        rec = str(files["dir"] / "rec.json")
        code, out, _ = run(capsys, "boost", files["gm"], "--manual", files["plan"], "--K", "2",
                           "--roundtrip", "30", "--emit-recoder", rec, "--json")
        data = json.loads(out)
        assert code == 0 and data["eta"] == 21 and data["gamma_size"] == "9"
        assert data["overlap"]["exhaustive"] is True and data["roundtrip"]["ok"] is True
        assert data["certificate"]["value"] == 0.1046297418
        r = io.read_json(rec)
        assert r["forward"]["memory"] == 18 and len(r["inverse"]["expand"]) == 9

    def test_boost_automatic(self, files, capsys):
        code, out, _ = run(capsys, "boost", files["gm"], "--epsilon", "0.9", "--json")
        data = json.loads(out)
        assert code == 0 and data["certificate"]["meets_target"] is True
        assert all(data["checks"].values())

    def test_boost_needs_mode(self, files, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["boost", files["gm"]])
        assert exc.value.code == 2

    def test_verify(self, files, capsys):
        code, out, _ = run(capsys, "verify", files["gm"])
        assert code == 0 and "10 passed, 0 failed" in out

    def test_verify_fuzz(self, files, capsys):
        code, out, _ = run(capsys, "verify", files["gm"], "--fuzz", "3", "--seed", "4", "--json")
        data = json.loads(out)
        assert data["passed"] + data["failed"] == 10 + 3 * 11


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "entropy", "/nonexistent/gm.json")
        assert code == 1 and "FileNotFoundError" in err

    def test_bad_json(self, files, capsys):
        p = files["dir"] / "bad.json"
        p.write_text("{not json")
        code, _, err = run(capsys, "entropy", str(p))
        assert code == 1 and "entropy" in err

    def test_bad_schema(self, files, capsys):
        p = files["dir"] / "odd.json"
        p.write_text(json.dumps({"alphabet": ["0"]}))
        code, _, err = run(capsys, "entropy", str(p))
        assert code == 1 and "SchemaError" in err

    def test_empty_shift(self, files, capsys):
        p = files["dir"] / "empty.json"
        p.write_text(json.dumps({"alphabet": ["0", "1"], "forbidden": ["00", "01", "10", "11"]}))
        code, _, err = run(capsys, "entropy", str(p))
        assert code == 1 and "EmptyShift" in err

    def test_state_cap_env(self, files, capsys, monkeypatch):
        monkeypatch.setenv("SHIFTLAB_STATE_CAP", "1")
        code, _, err = run(capsys, "ind-entropy", files["even"])
        assert code == 1 and "StateBlowup" in err


class TestStability:
    def test_json_is_byte_stable(self, files, capsys):
        outs = {run(capsys, "boost", files["gm"], "--manual", files["plan"], "--json")[1] for _ in range(2)}
        assert len(outs) == 1

    @pytest.mark.skipif(shutil.which("shiftlab") is None, reason="console script not installed")
    def test_console_script(self, files):
        out = subprocess.run(["shiftlab", "ind-entropy", files["gm"], "--json"], capture_output=True, text=True)
        assert out.returncode == 0 and json.loads(out.stdout)["cycle"] == ["{0,1}", "{0}"]


class TestIo:
    def test_round_trip_spec(self):
        spec = io.spec_from_json(GM)
        assert io.spec_from_json(io.spec_to_json(spec)) == spec

    def test_words_as_text(self):
        spec = io.spec_from_json({"alphabet": ["0", "1"], "forbidden": ["11", "101"]})
        assert spec.sft.memory == 2

    def test_multichar_words(self):
        assert io.parse_word("00.01", ["00", "01"]) == ("00", "01")
        assert io.parse_word("", ["0"]) == ()

    def test_plan(self):
        kw = io.plan_from_json(PLAN, ("0", "1"))
        assert kw == {"n": 9, "k": 2, "f": 3, "M": tuple("100000000"), "C": ("0", "1"), "S": ()}
        with pytest.raises(io.SchemaError):
            io.plan_from_json({"n": 9}, ("0", "1"))
