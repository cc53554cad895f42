"""Rewrite the pinned fingerprints and file digests in manifest.json.

Run after editing a bundled catalog, certificate or morphism on purpose;
replay-paper fails until the pins match again.
"""

import argparse
import json

from mcgcert.catalog import data_dir
from mcgcert.replay import bundled_files, file_digest, instance_fingerprint, load_manifest


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dry-run", action="store_true", help="print instead of writing")
    args = ap.parse_args()
    m = load_manifest()
    for entry in m.get("instances", []):
        entry["sha256"] = instance_fingerprint(entry["context"])
    m["files"] = {rel: file_digest(rel) for rel in bundled_files()}
    text = json.dumps(m, indent=2) + "\n"
    if args.dry_run:
        print(text, end="")
    else:
        (data_dir() / "manifest.json").write_text(text)
        print(f"pinned {len(m['files'])} files and {len(m.get('instances', []))} instance sets")


if __name__ == "__main__":
    main()
