"""Run the eleven acceptance tests and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py            # all criteria (about 3 min)
    python3 scripts/run_acceptance.py -k "c01 or c02"
"""
import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    args = [str(ROOT / "tests" / "test_acceptance.py"), "-s", "-q", "-p", "no:cacheprovider",
            "--rootdir", str(ROOT), *sys.argv[1:]]
    sys.exit(pytest.main(args))
