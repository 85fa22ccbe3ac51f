import json
import subprocess
import sys

import pytest

from ncmesd.cli import run
from ncmesd.quantum import depolarize, ideal_model


def invoke(capsys, *argv):
    status = run(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture
def table_file(tmp_path):
    def make(*args):
        path = tmp_path / "table.json"
        assert run(["quantum-table", *args, "-o", str(path)]) == 0
        return str(path)

    return make


class TestDerive:
    def test_symmetric(self, capsys):
        status, out, _ = invoke(capsys, "derive", "--mode", "symmetric", "--labeling")
        assert status == 0
        lines = out.splitlines()
        assert lines[0] == "# vars: s c eps"
        assert "c - eps + 2*s <= 2" in lines

    def test_json(self, capsys):
        status, out, _ = invoke(capsys, "derive", "--labeling", "--format", "json")
        data = json.loads(out)
        assert status == 0 and data["vars"] == ["s", "c", "eps"]

    def test_set_and_pruned(self, capsys):
        status, out, _ = invoke(capsys, "derive", "--labeling", "--pruned", "--set", "eps=0")
        assert status == 0 and "c + 2*s = 2" in out.splitlines()

    def test_set_unknown_variable(self, capsys):
        status, _, err = invoke(capsys, "derive", "--set", "x=0")
        assert status == 2 and "unknown" in err

    def test_golden_mismatch(self, capsys):
        status, _, err = invoke(capsys, "derive", "--mode", "symmetric", "--golden", "appendixD")
        assert status == 4 and "missing" in err

    @pytest.mark.slow
    def test_golden_match(self, capsys):
        status, _, err = invoke(capsys, "derive", "--mode", "full", "--labeling", "--golden", "appendixD")
        assert status == 0 and "matches" in err


class TestCheck:
    def test_contextual(self, capsys, table_file):
        status, out, _ = invoke(capsys, "check", table_file("--confusability", "0.5"))
        assert status == 3
        assert "c - eps + 2*s <= 2" in out

    def test_noncontextual(self, capsys, table_file):
        status, out, _ = invoke(capsys, "check", table_file("--confusability", "0.5", "--depolarize", "0.3"))
        assert status == 0 and "noncontextual model exists" in out

    def test_exact_table(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        rows = [["1", "1/2", "0", "1/2"], ["1/2", "1", "1/2", "0"], ["3/4", "1/4", "1/4", "3/4"]]
        path.write_text(json.dumps({"rows": rows}))
        assert invoke(capsys, "check", str(path))[0] == 0

    def test_invalid_table(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"rows": [[1, 0, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]]}))
        assert invoke(capsys, "check", str(path))[0] == 2
        assert invoke(capsys, "check", str(tmp_path / "missing.json"))[0] == 2


class TestCurves:
    def test_noise_curve_peak(self, capsys):
        status, out, _ = invoke(capsys, "noise-curve", "--steps", "180")
        lines = out.splitlines()
        assert status == 0 and lines[0].startswith("# ncmesd") and lines[1] == "theta,v_max"
        theta, v = map(float, lines[2 + 60].split(","))
        assert theta == pytest.approx(3.141592653589793 / 3)
        assert v == pytest.approx(0.2, abs=1e-12)

    def test_tradeoff(self, capsys):
        status, out, _ = invoke(capsys, "tradeoff", "--epsilon", "0.1", "--steps", "4")
        rows = [list(map(float, r.split(","))) for r in out.splitlines()[2:]]
        assert status == 0 and len(rows) == 5
        assert all(q >= nc for _, nc, q in rows)

    def test_byte_identical(self, capsys):
        first = invoke(capsys, "tradeoff", "--steps", "10")[1]
        assert invoke(capsys, "tradeoff", "--steps", "10")[1] == first

    def test_quantum_table_summary(self, capsys):
        status, out, _ = invoke(capsys, "quantum-table", "--confusability", "0.25", "--depolarize", "0.1")
        assert status == 0
        assert json.loads(out)["summary"]["eps"] == pytest.approx(0.095)


class TestSecondaryAndBell:
    def test_secondary(self, capsys, tmp_path):
        from ncmesd.secondary import PrimarySet

        m = depolarize(ideal_model(0.75), 0.1)
        path = tmp_path / "p.json"
        path.write_text(json.dumps(PrimarySet(m.states, m.effects).to_json()))
        status, out, _ = invoke(capsys, "secondary", str(path), "--rounds", "3")
        assert status == 0 and json.loads(out)["violation"] > 0

    def test_bell_from_summary(self, capsys):
        status, out, _ = invoke(capsys, "bell", "--s", "1", "--c", "0", "--eps", "0")
        data = json.loads(out)
        assert status == 0 and data["chsh"]["1,3"] == "2" and data["local"]

    def test_bell_from_table(self, capsys, table_file):
        status, out, _ = invoke(capsys, "bell", table_file("--confusability", "0.5"))
        data = json.loads(out)
        assert status == 0 and data["chsh"]["1,3"] == pytest.approx(1 + 2**0.5) and not data["local"]

    def test_bell_needs_input(self, capsys):
        assert invoke(capsys, "bell", "--s", "1")[0] == 1


class TestUsage:
    def test_exit_codes(self, capsys):
        assert invoke(capsys, "frobnicate")[0] == 1
        assert invoke(capsys, "derive", "--mode", "diagonal")[0] == 1
        assert invoke(capsys, "noise-curve", "--steps", "0")[0] == 1
        assert invoke(capsys, "quantum-table", "--confusability", "0.1", "--epsilon", "0.2")[0] == 2

    def test_unwritable_output(self, capsys, tmp_path):
        assert invoke(capsys, "noise-curve", "-o", str(tmp_path / "no" / "such" / "dir.csv"))[0] == 2

    def test_help_lists_every_subcommand(self, capsys):
        status, out, _ = invoke(capsys, "--help")
        assert status == 0
        for name in ("derive", "check", "quantum-table", "tradeoff", "noise-curve", "secondary", "bell"):
            assert name in out

    def test_console_script(self):
        res = subprocess.run([sys.executable, "-m", "ncmesd.cli", "--version"], capture_output=True, text=True)
        assert res.returncode == 0 and "ncmesd" in res.stdout
