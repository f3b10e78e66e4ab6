"""Record expected stdout and exit status for the corpus from a reference shell.

Tests named in tests/corpus/DIVERGENCES keep their hand-written fixtures.
Usage: python3 tools/regen_corpus.py [--ref /usr/bin/dash] [tests/corpus]
"""

import argparse
import os
import shlex
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from smolsh.harness import discover, read_divergences, run_script  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("tests_dir", nargs="?",
                    default=os.path.join(os.path.dirname(__file__), "..", "tests", "corpus"))
    ap.add_argument("--ref", default="/usr/bin/dash")
    ap.add_argument("--timeout", type=float, default=10.0)
    args = ap.parse_args()
    ref = shlex.split(args.ref)
    skip = read_divergences(args.tests_dir)
    for name in discover(args.tests_dir):
        if name in skip:
            continue
        base = os.path.join(args.tests_dir, name + ".test")
        got = run_script(ref, base, args.timeout)
        if got.status is None:
            print("timeout:", name, file=sys.stderr)
            continue
        with open(base + ".out", "wb") as f:
            f.write(got.stdout)
        if got.status:
            with open(base + ".ec", "w") as f:
                f.write("%d\n" % got.status)
        elif os.path.exists(base + ".ec"):
            os.remove(base + ".ec")
    return 0


if __name__ == "__main__":
    sys.exit(main())
