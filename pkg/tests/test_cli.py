import json
import subprocess
import sys
from pathlib import Path

import pytest

from rbx.cli import main

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(capsys, args):
    try:
        code = main(args)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_corpus_size():
    assert len(CASES) >= 20
    assert len({c["name"] for c in CASES}) == len(CASES)


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(capsys, case):
    code, out, err = run(capsys, case["args"])
    assert code == int((GOLDEN / f"{case['name']}.exit").read_text())
    assert out == (GOLDEN / f"{case['name']}.out").read_text()
    assert err == (GOLDEN / f"{case['name']}.err").read_text()


class TestDocumentedExamples:
    def test_normalize(self, capsys):
        assert run(capsys, ["normalize", "--localize", "x", "--op", "integral", "--weight", "0", "P(x)"])[:2] \
            == (0, "1/2*x^2\n")

    def test_mul(self, capsys):
        assert run(capsys, ["mul", "--vars", "x", "--weight", "0", "T[1,x]", "T[1,x]"])[:2] == (0, "2*T[1, x, x]\n")

    def test_rbcheck(self, capsys):
        code, _, _ = run(capsys, ["rbcheck", "--vars", "x", "--op", "integral", "--weight", "0",
                                  "--random", "50", "--seed", "7"])
        assert code == 0


class TestJson:
    def test_element_payload(self, capsys):
        _, out, _ = run(capsys, ["mul", "--vars", "x", "--json", "T[1,x]", "T[1,x]"])
        assert json.loads(out) == {"terms": [{"coeff": "2/1", "word": ["1", "x", "x"]}]}

    def test_rbcheck_payload(self, capsys):
        code, out, _ = run(capsys, ["rbcheck", "--vars", "x", "--op", "id", "--weight", "-1", "--json",
                                    "--random", "5"])
        payload = json.loads(out)
        assert code == 0 and payload == {"checked": 5, "failed": 0, "weight": "-1/1"}

    def test_equal_payload(self, capsys):
        code, out, _ = run(capsys, ["equal", "--localize", "x", "--op", "integral", "--json", "P(x)", "1/2*x^2"])
        assert code == 0 and json.loads(out)["status"] == "ProvenEqual"


class TestExitCodes:
    def test_seed_changes_samples_not_verdict(self, capsys):
        for seed in (0, 1, 2):
            assert run(capsys, ["rbcheck", "--vars", "x,y", "--op", "integral:y", "--random", "10",
                                "--seed", str(seed)])[0] == 0

    def test_bad_operator_name(self, capsys):
        code, _, err = run(capsys, ["applyp", "--vars", "x", "--op", "bogus", "x"])
        assert code == 2 and err.startswith("error:")

    def test_guard_reports_trace(self, capsys):
        code, out, err = run(capsys, ["normalize", "--localize", "x", "--op", "integral", "--strategy", "rb-first",
                                      "--max-steps", "1", "--trace", "P(x)*P(x)*P(x)"])
        assert code == 3 and out == ""
        assert "step 1: rb-orient" in err and "guard exceeded" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rbx", "mul", "--vars", "x", "T[1,x]", "T[1,x]"],
                          capture_output=True, text=True, check=False)
    assert (proc.returncode, proc.stdout) == (0, "2*T[1, x, x]\n")
