#!/usr/bin/env python3
"""Rebuild the golden CLI transcripts under fixtures/expected/."""

import io
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from choicematch.cli import run  # noqa: E402

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIX = ROOT / "fixtures"
EXP = FIX / "expected"

CASES = {
    "axioms_sub_ga_not_pi.txt": ["axioms", "--input", "fixtures/sub_ga_not_pi.table", "--max-k", "8"],
    "axioms_sub_not_ga.txt": ["axioms", "--input", "fixtures/sub_not_ga.table", "--max-k", "8"],
    "axioms_sub_not_ga.json": ["--format", "json", "axioms", "--input", "fixtures/sub_not_ga.table", "--max-k", "8"],
    "gda_sub_ga_not_pi.txt": ["gda", "--input", "fixtures/sub_ga_not_pi.table", "--trace"],
    "gda_sub_not_ga.txt": ["gda", "--input", "fixtures/sub_not_ga.table"],
    "verify_cy_example_m2m.txt": ["verify", "cy", "--input", "fixtures/example_m2m.market", "--matching", "fixtures/example_m2m.matching"],
    "verify_r_example_o2o.txt": ["verify", "r", "--input", "fixtures/example_o2o.market", "--matching", "fixtures/example_o2o.matching"],
    "enumerate_cy_example_m2m.txt": ["enumerate", "cy-stable", "--input", "fixtures/example_m2m.market"],
    "enumerate_smir_sub_ga_not_pi.txt": ["enumerate", "sm-ir", "--input", "fixtures/sub_ga_not_pi.table"],
    "validate_example_o2o.txt": ["validate", "--input", "fixtures/example_o2o.market"],
}


def main():
    EXP.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        out, err = io.StringIO(), io.StringIO()
        code = run(argv, out, err)
        body = "exit=%d\n--- stdout ---\n%s--- stderr ---\n%s" % (
            code,
            out.getvalue(),
            err.getvalue(),
        )
        (EXP / name).write_text(body, encoding="utf-8")
        print(name, "exit", code)


if __name__ == "__main__":
    main()
