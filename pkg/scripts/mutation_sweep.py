"""Corrupt every apply step of every bundled certificate and count silent passes.

Each mutant changes one field: the position by +1 or -1, the direction, or
the relation id. A mutant that still checks would mean the certificate does
not pin down its own derivation.
"""

import argparse
import sys
from collections import Counter
from pathlib import Path

from mcgcert.catalog import data_dir
from mcgcert.engine import check_certificate, load_certificate, mutations
from mcgcert.schemas import store_for


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("certs", nargs="*", help="certificate names (default: all bundled)")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    names = args.certs or sorted(p.stem for p in (Path(data_dir()) / "certificates").glob("*.deriv"))
    reasons = Counter()
    silent = []
    total = 0
    for name in names:
        cert = load_certificate(name)
        store = store_for(cert.context)[1]
        for label, bad in mutations(cert, sorted(store)):
            total += 1
            report = check_certificate(bad, store)
            if report.passed:
                silent.append(f"{name}: {label}")
            else:
                reasons[report.reason if report.failed_step is not None else "final word"] += 1
            if args.verbose:
                print(f"{name:28} {label:40} {report.verdict}")
    print(f"{total} mutants over {len(names)} certificates, {len(silent)} silent passes")
    for reason, n in reasons.most_common():
        print(f"  {n:4} rejected by {reason}")
    for s in silent:
        print("  SILENT", s)
    return 1 if silent else 0


if __name__ == "__main__":
    sys.exit(main())
