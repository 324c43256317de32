"""Regenerate the CLI golden corpus from tests/golden/cases.json.

Run only after an intentional output change, then review the diff.
"""

import contextlib
import io
import json
from pathlib import Path

from rbx.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(args)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def regenerate():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for case in cases:
        code, out, err = run(case["args"])
        (GOLDEN / f"{case['name']}.out").write_text(out)
        (GOLDEN / f"{case['name']}.err").write_text(err)
        (GOLDEN / f"{case['name']}.exit").write_text(f"{code}\n")
        print(f"{case['name']}: exit {code}")


if __name__ == "__main__":
    regenerate()
