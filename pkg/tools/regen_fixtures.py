#!/usr/bin/env python3
"""Regenerate the committed CLI fixture file.

Runs every fixture command through the in-process CLI and freezes the exact
report bytes.  The numeric content of each fixture is independently verified
by the test suite (tests/test_fixture_values.py); regenerate only after an
intentional schema change, then rerun the tests.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from loopnil.cli import run_command  # noqa: E402

FIXTURES = [
    ("witt-2-3", ["witt", "--generators", "2", "--class", "3"]),
    ("witt-4-6", ["witt", "--generators", "4", "--class", "6"]),
    ("hall-basis-2-3", ["hall-basis", "--generators", "2", "--class", "3"]),
    ("hall-basis-3-2", ["hall-basis", "--generators", "3", "--class", "2"]),
    ("validate-s2", ["validate", "$DATA/spaces/s2.json"]),
    ("validate-wedge2", ["validate", "$DATA/spaces/wedge2.json"]),
    ("homology-s2-2", ["homology", "$DATA/spaces/s2.json", "--degree", "2"]),
    ("homology-s1-1", ["homology", "$DATA/spaces/s1.json", "--degree", "1"]),
    ("homology-moore22-2", ["homology", "$DATA/spaces/moore_2_2.json", "--degree", "2"]),
    ("homology-moore22-3", ["homology", "$DATA/spaces/moore_2_2.json", "--degree", "3"]),
    ("collect-ba", ["collect", "--generators", "2", "--class", "2", "--word", "b a"]),
    (
        "collect-comm",
        ["collect", "--generators", "2", "--class", "3", "--word", "a^-1 b^-1 a b"],
    ),
    ("cross-effect-2-unit", ["cross-effect", "--class", "2", "--ranks", "1,1,1"]),
    ("cross-effect-2-wide", ["cross-effect", "--class", "2", "--ranks", "2,1,1"]),
    ("cross-effect-3-unit", ["cross-effect", "--class", "3", "--ranks", "1,1,1,1"]),
    ("nilq-free2-2", ["nilq", "$DATA/presentations/free2.json", "--class", "2"]),
    ("nilq-commuting2-2", ["nilq", "$DATA/presentations/commuting2.json", "--class", "2"]),
    ("nilq-cyclic2-1", ["nilq", "$DATA/presentations/cyclic2.json", "--class", "1"]),
    ("loop-group-s1-0", ["loop-group", "$DATA/spaces/s1.json", "--degree", "0"]),
    ("loop-group-wedge2-0", ["loop-group", "$DATA/spaces/wedge2.json", "--degree", "0"]),
    ("loop-group-s2-2", ["loop-group", "$DATA/spaces/s2.json", "--degree", "2"]),
    ("tower-pi0-wedge2-2", ["tower", "pi0", "$DATA/spaces/wedge2.json", "--class", "2"]),
    ("tower-pi0-wedge2-3", ["tower", "pi0", "$DATA/spaces/wedge2.json", "--class", "3"]),
    ("tower-pi0-s2-2", ["tower", "pi0", "$DATA/spaces/s2.json", "--class", "2"]),
    ("layer-homotopy-s2-1-1", ["layer-homotopy", "$DATA/spaces/s2.json", "--class", "1", "--degree", "1"]),
    ("layer-homotopy-wedge2-1-0", ["layer-homotopy", "$DATA/spaces/wedge2.json", "--class", "1", "--degree", "0"]),
    ("layer-homotopy-s2-2-2", ["layer-homotopy", "$DATA/spaces/s2.json", "--class", "2", "--degree", "2"]),
    ("layer-homotopy-s2-4-3", ["layer-homotopy", "$DATA/spaces/s2.json", "--class", "4", "--degree", "3"]),
    ("layer-homotopy-moore22-1-1", ["layer-homotopy", "$DATA/spaces/moore_2_2.json", "--class", "1", "--degree", "1"]),
    ("error-malformed", ["validate", "$DATA/spaces/bad_syntax.json"]),
    ("error-duplicate-id", ["validate", "$DATA/spaces/bad_duplicate_id.json"]),
    ("error-word-order", ["validate", "$DATA/spaces/bad_word_order.json"]),
    ("error-face-target", ["validate", "$DATA/spaces/bad_face_target.json"]),
    ("error-identity-via-homology", ["homology", "$DATA/spaces/bad_face_target.json", "--degree", "1"]),
]


def main():
    from loopnil.cli import data_path

    out = []
    for name, argv in FIXTURES:
        resolved = [tok.replace("$DATA", data_path()) for tok in argv]
        code, stdout = run_command(resolved)
        # keep the placeholder in the frozen bytes so checkouts elsewhere
        # compare equal after resolving it back
        stdout = stdout.replace(data_path(), "$DATA")
        out.append(
            {
                "name": name,
                "argv": argv,
                "expect_exit": code,
                "expect_stdout": stdout,
            }
        )
        print(f"{name}: exit {code}")
    target = Path(__file__).resolve().parents[1] / "src" / "loopnil" / "data" / "fixtures.json"
    with open(target, "w") as fh:
        json.dump({"fixtures": out}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
