"""Homomorphisms between presented groups, defined on generators.

A morphism file names a source and a target context, the images of the
source generators, and evidence for the relators whose images are not
already target relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import dsl
from .catalog import FactBase, NoActionFact, resolve
from .engine import (
    BoundsExceeded,
    Certificate,
    CheckReport,
    Direction,
    SearchBounds,
    Step,
    StepKind,
    check_certificate,
    find_derivation,
    load_certificate,
)
from .schemas import SchemaId, generators_of, instantiate, store_for
from .words import (
    GeneratorSymbol,
    Kind,
    Letter,
    McgError,
    MissingImage,
    Word,
    arrowed,
    invert,
    one_sided,
    slide,
    substitute,
    transposition,
    twist,
)


class MorphismError(McgError):
    pass


class EvidenceMissing(MorphismError):
    def __init__(self, key):
        super().__init__(f"no evidence for {key}")
        self.key = key


@dataclass
class PresentationMorphism:
    name: str
    source_context: str
    target_context: str
    source_relations: list
    target_store: dict
    images: dict
    evidence: dict = field(default_factory=dict)  # relation id or "*" -> Certificate | SearchBounds
    roundtrip: dict = field(default_factory=dict)  # GeneratorSymbol or "*" -> Certificate | SearchBounds
    inverse: str | None = None
    inverse_both: bool = False
    notes: tuple = ()
    path: str | None = None

    @property
    def source_generators(self) -> list:
        return generators_of(self.source_relations)

    def source_store(self) -> dict:
        return store_for(self.source_context)[1]

    def validate(self):
        target_gens = set(generators_of(self.target_store.values()))
        for s in self.source_generators:
            if s not in self.images:
                raise MissingImage(s)
        for s, image in self.images.items():
            extra = image.symbols() - target_gens
            if extra:
                bad = ", ".join(sorted(x.render() for x in extra))
                raise MorphismError(f"{self.name}: image of {s} uses non-target generators {bad}")


def map_word(m: PresentationMorphism, w: Word) -> Word:
    return substitute(w, m.images)


@dataclass
class RelationCheck:
    relation_id: str
    lhs: Word
    rhs: Word
    method: str
    verdict: str
    reason: str | None = None
    certificate: CheckReport | None = None

    def as_dict(self) -> dict:
        out = {"relation": self.relation_id, "lhs": str(self.lhs), "rhs": str(self.rhs),
               "method": self.method, "verdict": self.verdict}
        if self.reason:
            out["reason"] = self.reason
        if self.certificate is not None:
            out["certificate"] = self.certificate.as_dict()
        return out


@dataclass
class WellDefinednessReport:
    name: str
    verdict: str
    checks: list

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict:
        return {"morphism": self.name, "verdict": self.verdict,
                "checks": [c.as_dict() for c in self.checks]}

    def text(self) -> str:
        lines = [f"morphism {self.name}: {self.verdict}"]
        for c in self.checks:
            line = f"  {c.verdict:4} {c.relation_id:<32} {c.method}"
            if c.reason:
                line += f"  ({c.reason})"
            lines.append(line)
        return "\n".join(lines)


def _equation_variants(lhs: Word, rhs: Word) -> set:
    li, ri = invert(lhs), invert(rhs)
    return {(lhs, rhs), (rhs, lhs), (li, ri), (ri, li)}


def _literal(store: dict, lhs: Word, rhs: Word):
    for inst in store.values():
        if (inst.lhs, inst.rhs) in ((lhs, rhs), (rhs, lhs)):
            return inst.id
    return None


def _prove(lhs: Word, rhs: Word, evidence, store: dict, context: str, label: str):
    """Check one equation against a certificate or a bounded search."""
    if isinstance(evidence, Certificate):
        if (evidence.source, evidence.target) not in _equation_variants(lhs, rhs):
            return "certificate", "FAIL", (
                f"certificate {evidence.name} proves {evidence.source} = {evidence.target}"), None
        if evidence.context != context:
            return "certificate", "FAIL", (
                f"certificate {evidence.name} is stated in {evidence.context}, not {context}"), None
        report = check_certificate(evidence, store)
        return f"certificate {evidence.name}", report.verdict, report.reason, report
    try:
        found = find_derivation(lhs, rhs, store, evidence, name=label, context=context)
    except BoundsExceeded as exc:
        return "search", "FAIL", f"BoundsExceeded: {exc}", None
    if found is None:
        return "search", "FAIL", "no derivation exists among words within the length bound", None
    report = check_certificate(found, store)
    return f"search ({len(found.steps)} steps)", report.verdict, report.reason, report


def check_well_defined(m: PresentationMorphism) -> WellDefinednessReport:
    """Every source relation must map to an equation that holds in the target."""
    checks = []
    for inst in m.source_relations:
        lhs, rhs = map_word(m, inst.lhs), map_word(m, inst.rhs)
        if lhs == rhs:
            checks.append(RelationCheck(inst.id, lhs, rhs, "free", "PASS"))
            continue
        lit = _literal(m.target_store, lhs, rhs)
        if lit is not None:
            checks.append(RelationCheck(inst.id, lhs, rhs, f"literal {lit}", "PASS"))
            continue
        ev = m.evidence.get(inst.id, m.evidence.get("*"))
        if ev is None:
            raise EvidenceMissing(inst.id)
        method, verdict, reason, report = _prove(lhs, rhs, ev, m.target_store, m.target_context,
                                                 f"{m.name}_{inst.id}")
        checks.append(RelationCheck(inst.id, lhs, rhs, method, verdict, reason, report))
    verdict = "PASS" if all(c.verdict == "PASS" for c in checks) else "FAIL"
    return WellDefinednessReport(m.name, verdict, checks)


def check_generator_inverse(f: PresentationMorphism, g: PresentationMorphism,
                            evidence: dict | None = None) -> WellDefinednessReport:
    """g(f(s)) must come back to s for every generator s of f's source."""
    if g.target_context != f.source_context or f.target_context != g.source_context:
        raise MorphismError(f"{f.name} and {g.name} do not compose in both orders")
    if evidence is None:
        evidence = {**g.roundtrip, **f.roundtrip}
    store = f.source_store()
    checks = []
    for s in f.source_generators:
        w = map_word(g, map_word(f, Word.of(s)))
        label = s.render()
        if w == Word.of(s):
            checks.append(RelationCheck(label, w, Word.of(s), "free", "PASS"))
            continue
        ev = evidence.get(s, evidence.get("*"))
        if ev is None:
            raise EvidenceMissing(label)
        method, verdict, reason, report = _prove(w, Word.of(s), ev, store, f.source_context,
                                                 f"{g.name}_{f.name}_roundtrip")
        checks.append(RelationCheck(label, w, Word.of(s), method, verdict, reason, report))
    verdict = "PASS" if all(c.verdict == "PASS" for c in checks) else "FAIL"
    return WellDefinednessReport(f"{g.name} o {f.name}", verdict, checks)


# -- orientation independence ---------------------------------------------------

def theta_certificate(facts: FactBase, mu: str, alpha: str):
    """The two-stage computation t_{alpha;+}^-1 U_+ = t_{alpha;-}^-1 U_- and its instances.

    Needs action facts for U_{mu,alpha;+} on alpha, and for t_{alpha;-} and
    U_{mu,alpha;-} on both mu and alpha with matching images.
    """
    up = Word.of(transposition(mu, alpha, "+"))
    um = Word.of(transposition(mu, alpha, "-"))
    tam = Word.of(twist(alpha, "-"))
    a_ref = arrowed(alpha)

    def need(actor, curve):
        fact = facts.action(actor, curve)
        if fact is None:
            raise NoActionFact(actor, curve)
        return fact

    up_alpha = need(up, a_ref)
    t_mu, t_alpha = need(tam, one_sided(mu)), need(tam, a_ref)
    u_mu, u_alpha = need(um, one_sided(mu)), need(um, a_ref)
    if up_alpha.transported("+") != "-" or up_alpha.image.name != alpha:
        raise McgError(f"{up_alpha.name} does not send +{alpha} to -{alpha}")
    if (t_mu.image, t_alpha.image, t_alpha.transported("+")) != (
            u_mu.image, u_alpha.image, u_alpha.transported("-")):
        raise McgError("t_{alpha;-} and U_{mu,alpha;-} disagree on (mu, alpha, orientation)")

    S = SchemaId
    insts = [
        instantiate(S.R2a_TwistInverse, {"curve": alpha, "sign": "+"}, facts),
        instantiate(S.R2a_TwistInverse, {"curve": alpha, "sign": "-"}, facts),
        instantiate(S.R3a_TwistConj, {"fact": up_alpha.name, "sign": "+"}, facts),
        instantiate(S.R3c_TransConj, {"actor": tam, "mu": mu, "alpha": a_ref, "sign": "+"}, facts),
        instantiate(S.R3c_TransConj, {"actor": um, "mu": mu, "alpha": a_ref, "sign": "-"}, facts),
    ]
    store = {i.id: i for i in insts}
    tw_p, tw_m, conj_t, conj_uo, conj_uu = (i.id for i in insts)
    a, am = Letter(twist(alpha, "+")), Letter(twist(alpha, "-"))
    u = Letter(up[0].symbol)
    steps = (
        Step(StepKind.INSERT, position=0, pair=(am.inverse(),)),
        Step(StepKind.APPLY, tw_p, 2, Direction.FWD),
        Step(StepKind.APPLY, conj_t, 2, Direction.REV),
        Step(StepKind.REGROUP, to=(am.inverse(), am, u, a)),
        Step(StepKind.APPLY, tw_m, 3, Direction.REV),
        Step(StepKind.APPLY, conj_uo, 1, Direction.FWD),
        Step(StepKind.APPLY, conj_uu, 1, Direction.REV),
        Step(StepKind.REGROUP),
    )
    cert = Certificate("theta_independence", Word([a.inverse(), u]),
                       Word([am.inverse(), Letter(um[0].symbol)]), steps,
                       f"Thm4@{facts.name}",
                       "the transposition image of a slide does not depend on the orientation")
    return cert, store


def check_theta_independence(facts: FactBase, mu, alpha) -> CheckReport:
    mu = mu.name if hasattr(mu, "name") else mu
    alpha = alpha.name if hasattr(alpha, "name") else alpha
    cert, store = theta_certificate(facts, mu, alpha)
    return check_certificate(cert, store)


# -- morphism files --------------------------------------------------------------

def _evidence_value(st: dsl.Statement, base: Path | None):
    if st["bounds"] is not None:
        return SearchBounds(*st["bounds"])
    return _load_cert(st["cert"], base)


def _load_cert(name: str, base: Path | None) -> Certificate:
    if base is not None:
        local = base / name
        if local.exists():
            return load_certificate(local)
    return load_certificate(name)


def _rule_image(schema: str, symbol: GeneratorSymbol):
    if schema == SchemaId.RDef_U_eq_tY.name and symbol.kind is Kind.TRANSPOSITION:
        mu, alpha = symbol.curves
        return Word.of(twist(alpha.name, symbol.sign),
                       slide(mu.name, alpha.name, alpha.arrow.value < 0))
    return None


def morphism_from_document(doc: dsl.Document) -> PresentationMorphism:
    head = doc.first("morphism")
    base = Path(doc.path).parent if doc.path else None
    src_ctx, tgt_ctx = head["source"], head["target"]
    source_relations = list(store_for(src_ctx, include_derived=False)[1].values())
    target_store = store_for(tgt_ctx)[1]
    gens = generators_of(source_relations)

    images = {}
    for st in doc.of("map"):
        images[st["symbol"]] = Word(st["image"])
    for st in doc.of("fix"):
        for s in gens:
            if st["symbol"] == s or (st["kind"] and s.kind.value == st["kind"]):
                images.setdefault(s, Word.of(s))
    for st in doc.of("rule"):
        if st["schema"] not in {sid.name for sid in SchemaId}:
            raise MorphismError(f"unknown schema {st['schema']}")
        for s in gens:
            image = _rule_image(st["schema"], s)
            if image is not None:
                images.setdefault(s, image)

    evidence = {st["rel"]: _evidence_value(st, base) for st in doc.of("evidence")}
    roundtrip = {st["gen"]: _evidence_value(st, base) for st in doc.of("roundtrip")}
    inv = doc.first("inverse")
    m = PresentationMorphism(
        name=head["name"], source_context=src_ctx, target_context=tgt_ctx,
        source_relations=source_relations, target_store=target_store, images=images,
        evidence=evidence, roundtrip=roundtrip, inverse=inv["file"] if inv else None,
        inverse_both=bool(inv and inv["both"]),
        notes=tuple(st["text"] for st in doc.of("note")), path=doc.path,
    )
    m.validate()
    return m


def parse_morphism(text: str, path: str | None = None) -> PresentationMorphism:
    return morphism_from_document(dsl.parse(text, dsl.DocKind.MORPHISM, path))


def load_morphism(name_or_path) -> PresentationMorphism:
    p = resolve(str(name_or_path), "morphisms", "morph")
    return parse_morphism(p.read_text(), str(p))


def load_inverse(m: PresentationMorphism) -> PresentationMorphism | None:
    if m.inverse is None:
        return None
    if m.path:
        local = Path(m.path).parent / m.inverse
        if local.exists():
            return load_morphism(local)
    return load_morphism(m.inverse)


@dataclass
class MorphismResult:
    name: str
    well_defined: WellDefinednessReport
    inverse_checks: list

    @property
    def passed(self) -> bool:
        return self.well_defined.passed and all(r.passed for r in self.inverse_checks)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {"morphism": self.name, "verdict": self.verdict,
                "well_defined": self.well_defined.as_dict(),
                "inverse": [r.as_dict() for r in self.inverse_checks]}

    def text(self) -> str:
        parts = [self.well_defined.text()]
        parts += [r.text() for r in self.inverse_checks]
        return "\n".join(parts)


def check_morphism(m: PresentationMorphism) -> MorphismResult:
    """Well-definedness, then the generator-level composite with the declared inverse.

    ``inverse X`` checks X after m on m's source generators; ``inverse X both``
    also checks m after X on X's source generators.
    """
    wd = check_well_defined(m)
    inverse_checks = []
    other = load_inverse(m)
    if other is not None:
        evidence = {**other.roundtrip, **m.roundtrip}
        inverse_checks.append(check_generator_inverse(m, other, evidence))
        if m.inverse_both:
            inverse_checks.append(check_generator_inverse(other, m, evidence))
    return MorphismResult(m.name, wd, inverse_checks)
