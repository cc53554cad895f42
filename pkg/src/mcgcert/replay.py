"""Replay of the whole bundle listed in ``manifest.json``.

Each item is checked on its own; an error inside a bundled file fails that
item rather than aborting the run, so one report covers everything.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from .abelian import abelian_invariants
from .catalog import data_dir, load_catalog
from .engine import check_certificate, load_certificate
from .morphism import check_morphism, check_theta_independence, load_morphism
from .presentations import load_presentation
from .schemas import store_for
from .words import McgError


@dataclass
class Item:
    kind: str
    name: str
    verdict: str
    detail: str = ""
    seconds: float = 0.0
    report: dict | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "name": self.name, "verdict": self.verdict,
               "detail": self.detail, "seconds": round(self.seconds, 4)}
        if self.report is not None:
            out["report"] = self.report
        return out


@dataclass
class ReplayResult:
    items: list

    @property
    def passed(self) -> bool:
        return all(i.verdict == "PASS" for i in self.items)

    def counts(self) -> dict:
        out: dict = {}
        for i in self.items:
            key = (i.kind, i.verdict)
            out[key] = out.get(key, 0) + 1
        return out

    def table(self) -> str:
        width = max((len(i.name) for i in self.items), default=4)
        lines = [f"{'kind':<12} {'name':<{width}} verdict  detail"]
        for i in self.items:
            lines.append(f"{i.kind:<12} {i.name:<{width}} {i.verdict:<8} {i.detail}")
        summary = []
        for kind in ("certificate", "morphism", "theta", "abelian", "instances", "file"):
            n = sum(1 for i in self.items if i.kind == kind)
            ok = sum(1 for i in self.items if i.kind == kind and i.verdict == "PASS")
            if n:
                summary.append(f"{ok}/{n} {kind} PASS")
        lines.append("")
        lines.append(", ".join(summary))
        lines.append("replay: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"verdict": "PASS" if self.passed else "FAIL",
                "items": [i.as_dict() for i in self.items]}


def load_manifest() -> dict:
    return json.loads((data_dir() / "manifest.json").read_text())


def instance_fingerprint(context: str) -> str:
    _, store = store_for(context)
    text = "\n".join(sorted(inst.render() for inst in store.values()))
    return hashlib.sha256(text.encode()).hexdigest()


def file_digest(relpath: str) -> str:
    return hashlib.sha256((data_dir() / relpath).read_bytes()).hexdigest()


def bundled_files() -> list:
    root = data_dir()
    return sorted(str(p.relative_to(root)) for p in root.rglob("*")
                  if p.is_file() and p.name != "manifest.json")


def _run(kind: str, name: str, fn) -> Item:
    start = time.perf_counter()
    try:
        verdict, detail, report = fn()
    except McgError as exc:
        verdict, detail, report = "FAIL", f"{type(exc).__name__}: {exc}", None
    return Item(kind, name, verdict, detail, time.perf_counter() - start, report)


def _certificate(name):
    def go():
        cert = load_certificate(name)
        _, store = store_for(cert.context)
        report = check_certificate(cert, store)
        detail = f"{len(cert.steps)} steps in {cert.context}"
        if not report.passed:
            where = f"step {report.failed_step}" if report.failed_step is not None else "end"
            detail += f"; fails at {where}: {report.reason}"
        return report.verdict, detail, report.as_dict()
    return go


def _morphism(name):
    def go():
        result = check_morphism(load_morphism(name))
        checks = [result.well_defined] + result.inverse_checks
        detail = "; ".join(f"{r.name} {r.verdict} ({len(r.checks)} checks)" for r in checks)
        return result.verdict, detail, result.as_dict()
    return go


def _theta(entry):
    def go():
        facts = load_catalog(entry["catalog"])
        report = check_theta_independence(facts, entry["mu"], entry["alpha"])
        return report.verdict, f"({entry['mu']}, {entry['alpha']}) over {entry['catalog']}", \
            report.as_dict()
    return go


def _abelian(entry):
    def go():
        pres = load_presentation(entry["presentation"])
        got = str(abelian_invariants(pres.relations, pres.generators))
        verdict = "PASS" if got == entry["expect"] else "FAIL"
        return verdict, f"{got} (expected {entry['expect']})", None
    return go


def _instances(entry):
    def go():
        got = instance_fingerprint(entry["context"])
        verdict = "PASS" if got == entry["sha256"] else "FAIL"
        detail = "instance set as pinned" if verdict == "PASS" else "instance set changed"
        return verdict, detail, None
    return go


def _file(relpath, digest):
    def go():
        try:
            got = file_digest(relpath)
        except OSError as exc:
            return "FAIL", f"unreadable: {exc}", None
        return ("PASS", "digest as pinned", None) if got == digest else (
            "FAIL", "file differs from the pinned digest", None)
    return go


def replay_paper(manifest: dict | None = None) -> ReplayResult:
    m = manifest if manifest is not None else load_manifest()
    items = []
    for entry in m.get("instances", []):
        items.append(_run("instances", entry["context"], _instances(entry)))
    for name in m.get("certificates", []):
        items.append(_run("certificate", name, _certificate(name)))
    for entry in m.get("theta", []):
        items.append(_run("theta", f"{entry['catalog']}:{entry['mu']},{entry['alpha']}",
                          _theta(entry)))
    for name in m.get("morphisms", []):
        items.append(_run("morphism", name, _morphism(name)))
    for entry in m.get("abelian", []):
        items.append(_run("abelian", entry["presentation"], _abelian(entry)))
    pinned = m.get("files", {})
    for relpath in sorted(set(pinned) | set(bundled_files())):
        if relpath not in pinned:
            items.append(Item("file", relpath, "FAIL", "not pinned in the manifest"))
        else:
            items.append(_run("file", relpath, _file(relpath, pinned[relpath])))
    return ReplayResult(items)
