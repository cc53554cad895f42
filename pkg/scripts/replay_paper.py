"""Replay the bundled derivations and morphisms and write the result as JSON.

Same checks as ``mcgcert replay-paper``; the JSON report is handy to diff
between runs.
"""

import argparse
import json
import sys
import time

from mcgcert.replay import replay_paper


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="write the JSON report here")
    args = ap.parse_args()
    start = time.perf_counter()
    result = replay_paper()
    print(result.table())
    print(f"{time.perf_counter() - start:.2f} s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result.as_dict(), fh, indent=2, sort_keys=True)
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
