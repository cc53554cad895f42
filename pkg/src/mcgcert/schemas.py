"""Relation schemas for the four presentations and their instantiation.

Each infinite relation family is instantiated only over the facts of a
catalog, so a presentation here is the finite shadow visible from that
catalog.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .catalog import FactBase, OrientationToken
from .words import (
    CurveRef,
    Kind,
    Letter,
    McgError,
    Sidedness,
    Word,
    arrowed,
    conjugate,
    invert,
    one_sided,
    slide,
    transposition,
    twist,
)


class SchemaId(enum.Enum):
    R1_Bounding = "(1)"
    R2a_TwistInverse = "(2)(a)"
    R2b_SlideInverse = "(2)(b)"
    R2c_TransInverse = "(2)(b) for transpositions"
    R3a_TwistConj = "(3)(a)"
    R3b_SlideConj = "(3)(b)"
    R3c_TransConj = "(3)(b) for transpositions"
    R4_Chain = "(4)"
    R5_Lantern = "(5)"
    R6_SlideSquare = "(6)"
    R6U_TransSquare = "(6) for transpositions"
    RDef_U_eq_tY = "definition U = tY"
    R3p_Commute = "(3)' commutativity"
    R3p_Braid = "(3)' braid"
    R4p_GeneralChain = "(4)' chain"

    @property
    def clause(self) -> str:
        return self.value


DERIVED = frozenset({SchemaId.R3p_Commute, SchemaId.R3p_Braid, SchemaId.R4p_GeneralChain})


class SchemaError(McgError):
    pass


class MissingFact(SchemaError):
    def __init__(self, requirement: str):
        super().__init__(f"missing fact: {requirement}")
        self.requirement = requirement


class ArityMismatch(SchemaError):
    pass


class OrientationRequired(SchemaError):
    pass


class GenusOutOfRange(SchemaError):
    def __init__(self, theorem: str, genus: int):
        super().__init__(f"{theorem} does not apply to genus {genus}")
        self.theorem = theorem
        self.genus = genus


@dataclass(frozen=True)
class RelationInstance:
    id: str
    schema: SchemaId
    lhs: Word
    rhs: Word
    bindings: tuple = field(default=(), compare=False)
    provenance: str = ""

    @property
    def key(self) -> tuple:
        return (self.schema, self.lhs, self.rhs)

    def relator(self) -> Word:
        return self.lhs * invert(self.rhs)

    def render(self) -> str:
        return f"rel {self.id} : {self.lhs} = {self.rhs} [{self.schema.name}, {self.provenance}]"


def _t(tok: OrientationToken) -> Letter:
    return Letter(twist(tok.curve, tok.sign))


def _tok_id(tok: OrientationToken) -> str:
    return tok.curve if tok.sign == "+" else str(tok)


def _need_sign(bindings: dict) -> str:
    sign = bindings.get("sign")
    if sign not in ("+", "-"):
        raise OrientationRequired("this schema needs an orientation binding 'sign'")
    return sign


def _alpha(bindings: dict) -> CurveRef:
    a = bindings.get("alpha")
    if isinstance(a, str):
        return arrowed(a)
    if not isinstance(a, CurveRef) or a.arrow is None:
        raise ArityMismatch("binding 'alpha' must be an arrowed two-sided curve")
    return a


def _mu(bindings: dict) -> str:
    mu = bindings.get("mu")
    if not isinstance(mu, str):
        raise ArityMismatch("binding 'mu' must name a one-sided curve")
    return mu


def _check_curve(facts: FactBase, name: str, sidedness: Sidedness):
    if facts.sidedness.get(name) is not sidedness:
        raise MissingFact(f"{sidedness.value}-sided curve {name} in catalog {facts.name}")


def _alpha_id(alpha: CurveRef) -> str:
    return alpha.render()


def _actor_facts(facts: FactBase, bindings: dict):
    actor = bindings.get("actor")
    if not isinstance(actor, Word):
        raise ArityMismatch("binding 'actor' must be a Word")
    mu = _mu(bindings)
    alpha = _alpha(bindings)
    fm = facts.action(actor, one_sided(mu))
    fa = facts.action(actor, alpha)
    if fm is None:
        raise MissingFact(f"action of {actor} on {mu}")
    if fa is None:
        raise MissingFact(f"action of {actor} on {alpha.render()}")
    return actor, mu, alpha, fm, fa


def instantiate(schema: SchemaId, bindings: dict, facts: FactBase) -> RelationInstance:
    b = dict(bindings)
    S = SchemaId

    if schema in (S.R1_Bounding, S.R2a_TwistInverse):
        c, sign = b.get("curve"), _need_sign(b)
        if not isinstance(c, str):
            raise ArityMismatch("binding 'curve' must name a two-sided curve")
        _check_curve(facts, c, Sidedness.TWO)
        tok = OrientationToken(c, sign)
        if schema is S.R1_Bounding:
            if not any(f.curve == c for f in facts.bounding_facts):
                raise MissingFact(f"{c} bounds a disk or a Mobius band")
            return RelationInstance(f"bound.{tok}", schema, Word([_t(tok)]), Word(),
                                    tuple(b.items()), schema.clause)
        return RelationInstance(f"twinv.{tok}", schema, Word([_t(tok).inverse()]),
                                Word([_t(tok.flip())]), tuple(b.items()), schema.clause)

    if schema in (S.R2b_SlideInverse, S.R2c_TransInverse, S.R6_SlideSquare,
                  S.R6U_TransSquare, S.RDef_U_eq_tY):
        mu, alpha = _mu(b), _alpha(b)
        _check_curve(facts, mu, Sidedness.ONE)
        _check_curve(facts, alpha.name, Sidedness.TWO)
        if schema is S.R2b_SlideInverse:
            y = slide(mu, alpha.name, alpha.arrow.value < 0)
            yr = slide(mu, alpha.name, alpha.arrow.value > 0)
            return RelationInstance(f"slinv.{mu}.{_alpha_id(alpha)}", schema, Word([Letter(y, -1)]),
                                    Word([Letter(yr)]), tuple(b.items()), schema.clause)
        if schema is S.R6_SlideSquare:
            d = facts.delta(mu, alpha)
            if d is None:
                raise MissingFact(f"delta({mu},{alpha.render()})")
            y = slide(mu, alpha.name, alpha.arrow.value < 0)
            return RelationInstance(f"sq.{mu}.{_alpha_id(alpha)}", schema, Word.of(y, y),
                                    Word([_t(d.delta)]), tuple(b.items()), schema.clause)
        sign = _need_sign(b)
        u = transposition(mu, alpha.name, sign, alpha.arrow.value < 0)
        if schema is S.R2c_TransInverse:
            ur = transposition(mu, alpha.name, sign, alpha.arrow.value > 0)
            return RelationInstance(f"trinv.{mu}.{_alpha_id(alpha)}.{sign}", schema,
                                    Word([Letter(u, -1)]), Word([Letter(ur)]), tuple(b.items()),
                                    schema.clause)
        if schema is S.R6U_TransSquare:
            d = facts.delta(mu, alpha)
            if d is None:
                raise MissingFact(f"delta({mu},{alpha.render()})")
            return RelationInstance(f"usq.{mu}.{_alpha_id(alpha)}.{sign}", schema, Word.of(u, u),
                                    Word([_t(d.delta)]), tuple(b.items()), schema.clause)
        y = slide(mu, alpha.name, alpha.arrow.value < 0)
        return RelationInstance(f"udef.{mu}.{_alpha_id(alpha)}.{sign}", schema, Word.of(u),
                                Word.of(twist(alpha.name, sign), y), tuple(b.items()), schema.clause)

    if schema is S.R3a_TwistConj:
        name, sign = b.get("fact"), _need_sign(b)
        fact = next((f for f in facts.action_facts if f.name == name), None)
        if fact is None:
            raise MissingFact(f"action fact {name}")
        if fact.curve.sidedness is not Sidedness.TWO:
            raise ArityMismatch(f"action fact {name} moves a one-sided curve")
        new_sign = fact.transported(sign)
        if new_sign is None:
            raise MissingFact(f"orientation transport of {fact.curve.name}{sign} under {fact.actor}")
        image = OrientationToken(fact.image.name, new_sign)
        lhs = conjugate(fact.actor, Word([_t(OrientationToken(fact.curve.name, sign))]))
        return RelationInstance(f"tconj.{name}.{sign}", schema, lhs, Word([_t(image)]),
                                tuple(b.items()), schema.clause)

    if schema is S.R3b_SlideConj:
        actor, mu, alpha, fm, fa = _actor_facts(facts, b)
        y = slide(mu, alpha.name, alpha.arrow.value < 0)
        y2 = slide(fm.image.name, fa.image.name, fa.image.arrow.value < 0)
        return RelationInstance(f"sconj.{fm.name}.{fa.name}", schema, conjugate(actor, Word.of(y)),
                                Word.of(y2), tuple(b.items()), schema.clause)

    if schema is S.R3c_TransConj:
        actor, mu, alpha, fm, fa = _actor_facts(facts, b)
        sign = _need_sign(b)
        new_sign = fa.transported(sign)
        if new_sign is None:
            raise MissingFact(f"orientation transport of {alpha.name}{sign} under {actor}")
        u = transposition(mu, alpha.name, sign, alpha.arrow.value < 0)
        u2 = transposition(fm.image.name, fa.image.name, new_sign, fa.image.arrow.value < 0)
        return RelationInstance(f"uconj.{fm.name}.{fa.name}.{sign}", schema,
                                conjugate(actor, Word.of(u)), Word.of(u2), tuple(b.items()),
                                schema.clause)

    if schema in (S.R4_Chain, S.R4p_GeneralChain):
        chain = next((f for f in facts.chain_facts if f.name == b.get("chain")), None)
        if chain is None:
            raise MissingFact(f"chain fact {b.get('chain')}")
        k = chain.k
        if schema is S.R4_Chain and k != 2:
            raise ArityMismatch(f"clause (4) covers 2-chains only; {chain.name} has k={k}")
        power = k + 1 if k % 2 else 2 * k + 2
        lhs = Word([_t(t) for t in chain.chain]) ** power
        return RelationInstance(f"chain.{chain.name}", schema, lhs,
                                Word([_t(t) for t in chain.boundary]), tuple(b.items()),
                                schema.clause)

    if schema is S.R5_Lantern:
        lantern = next((f for f in facts.lantern_facts if f.name == b.get("lantern")), None)
        if lantern is None:
            raise MissingFact(f"lantern fact {b.get('lantern')}")
        d = [_t(t) for t in lantern.curves]
        return RelationInstance(f"lantern.{lantern.name}", schema, Word(d[:3]), Word(d[3:]),
                                tuple(b.items()), schema.clause)

    if schema in (S.R3p_Commute, S.R3p_Braid):
        a, c = b.get("a"), b.get("b")
        if not isinstance(a, OrientationToken) or not isinstance(c, OrientationToken):
            raise OrientationRequired("bindings 'a' and 'b' must be orientation tokens")
        want = 0 if schema is S.R3p_Commute else 1
        if facts.intersection(a.curve, c.curve) != want:
            raise MissingFact(f"|{a.curve} n {c.curve}| = {want}")
        if not facts.compatible(a, c):
            raise MissingFact(f"compatible orientations {a}, {c}")
        ta, tc = _t(a), _t(c)
        label = "commute" if want == 0 else "braid"
        lhs = Word([ta, tc]) if want == 0 else Word([ta, tc, ta])
        rhs = Word([tc, ta]) if want == 0 else Word([tc, ta, tc])
        return RelationInstance(f"{label}.{_tok_id(a)}.{_tok_id(c)}", schema, lhs, rhs,
                                tuple(b.items()), schema.clause)

    raise SchemaError(f"unknown schema {schema}")


# -- presentations -------------------------------------------------------------

THEOREMS = ("Thm1", "Thm2", "Thm3", "Thm4", "Cor")

_CLAUSES = {
    "Thm1": ["R1", "R2a", "R3a", "R3b", "R4", "R5", "R6"],
    "Thm2": ["R1", "R2a", "R2b", "R3a", "R3b", "R4", "R5"],
    "Thm3": ["R1", "R2a", "R3a", "R3c", "R4", "R5", "R6U"],
    "Thm4": ["R1", "R2a", "R2c", "R3a", "R3c", "R4", "R5"],
    "Cor": ["R1", "R2a", "R3a", "R4", "R5", "R6"],
}

_ACTOR_KINDS = {
    "Thm1": {Kind.TWIST, Kind.SLIDE},
    "Thm2": {Kind.TWIST, Kind.SLIDE},
    "Thm3": {Kind.TWIST, Kind.TRANSPOSITION},
    "Thm4": {Kind.TWIST, Kind.TRANSPOSITION},
    "Cor": {Kind.TWIST, Kind.SLIDE},
}


def _actor_ok(theorem: str, actor: Word, facts: FactBase) -> bool:
    kinds = {letter.symbol.kind for letter in actor}
    if not kinds <= _ACTOR_KINDS[theorem]:
        return False
    if theorem == "Cor" and Kind.SLIDE in kinds:
        mu, alpha = facts.base_pair
        base = slide(mu, alpha)
        return all(l.symbol.kind is Kind.TWIST or l.symbol == base for l in actor)
    return True


def _actor_groups(facts: FactBase):
    """(actor, mu-facts, alpha-facts) for every actor moving a crosscap pair."""
    groups: dict = {}
    for f in facts.action_facts:
        g = groups.setdefault(f.actor, ([], []))
        if f.curve.sidedness is Sidedness.ONE:
            g[0].append(f)
        elif f.curve.arrow is not None:
            g[1].append(f)
    return [(actor, ms, als) for actor, (ms, als) in groups.items() if ms and als]


def presentation_for(theorem: str, facts: FactBase, include_derived: bool = False) -> list:
    S = SchemaId
    if theorem not in _CLAUSES:
        raise SchemaError(f"unknown theorem {theorem}")
    g = facts.surface.genus
    if theorem in ("Thm2", "Thm4") and g == 2:
        raise GenusOutOfRange(theorem, g)
    if theorem == "Cor":
        if g < 2:
            raise GenusOutOfRange(theorem, g)
        if facts.base_pair is None:
            raise MissingFact("a basepair declaration for the corollary presentation")
    clauses = _CLAUSES[theorem]
    out: list[RelationInstance] = []

    def add(schema, **bindings):
        out.append(instantiate(schema, bindings, facts))

    crosscap_slides = [(mu, arrowed(a, rev)) for mu, a in facts.pairs for rev in (False, True)]

    if "R1" in clauses:
        for f in facts.bounding_facts:
            for s in ("+", "-"):
                add(S.R1_Bounding, curve=f.curve, sign=s)
    if "R2a" in clauses:
        for c in facts.two_sided_curves():
            for s in ("+", "-"):
                add(S.R2a_TwistInverse, curve=c, sign=s)
    if "R2b" in clauses:
        for mu, alpha in crosscap_slides:
            add(S.R2b_SlideInverse, mu=mu, alpha=alpha)
    if "R2c" in clauses:
        for mu, alpha in crosscap_slides:
            for s in ("+", "-"):
                add(S.R2c_TransInverse, mu=mu, alpha=alpha, sign=s)
    if "R3a" in clauses:
        for f in facts.action_facts:
            if f.curve.sidedness is Sidedness.TWO and _actor_ok(theorem, f.actor, facts):
                for s, _ in f.transport:
                    add(S.R3a_TwistConj, fact=f.name, sign=s)
    if "R3b" in clauses or "R3c" in clauses:
        for actor, mus, alphas in _actor_groups(facts):
            twists_only = all(l.symbol.kind is Kind.TWIST for l in actor)
            for fm in mus:
                for fa in alphas:
                    if (fm.curve.name, fa.curve.name) not in facts.pairs:
                        continue
                    if "R3b" in clauses and twists_only:
                        add(S.R3b_SlideConj, actor=actor, mu=fm.curve.name, alpha=fa.curve)
                    if "R3c" in clauses:
                        for s, _ in fa.transport:
                            u = transposition(fm.curve.name, fa.curve.name, s, fa.curve.arrow.value < 0)
                            self_conj = len(actor) == 1 and actor[0] == Letter(u)
                            if twists_only or self_conj:
                                add(S.R3c_TransConj, actor=actor, mu=fm.curve.name,
                                    alpha=fa.curve, sign=s)
    if "R4" in clauses:
        for f in facts.chain_facts:
            if f.k == 2:
                add(S.R4_Chain, chain=f.name)
    if "R5" in clauses:
        for f in facts.lantern_facts:
            add(S.R5_Lantern, lantern=f.name)
    if "R6" in clauses:
        for f in facts.delta_facts:
            if theorem == "Cor" and (f.mu, f.alpha) != (facts.base_pair[0], arrowed(facts.base_pair[1])):
                continue
            add(S.R6_SlideSquare, mu=f.mu, alpha=f.alpha)
    if "R6U" in clauses:
        for f in facts.delta_facts:
            for s in ("+", "-"):
                add(S.R6U_TransSquare, mu=f.mu, alpha=f.alpha, sign=s)
    if include_derived:
        out.extend(derived_instances(facts))
    return _dedup(out)


def derived_instances(facts: FactBase) -> list:
    S = SchemaId
    out = []
    for f in facts.compatibility_facts:
        n = facts.intersection(f.a.curve, f.b.curve)
        if n is None:
            continue
        schema = S.R3p_Commute if n == 0 else S.R3p_Braid
        out.append(instantiate(schema, {"a": f.a, "b": f.b}, facts))
        out.append(instantiate(schema, {"a": f.b, "b": f.a}, facts))
    for f in facts.chain_facts:
        if f.k != 2:
            out.append(instantiate(S.R4p_GeneralChain, {"chain": f.name}, facts))
    return out


def definition_instances(facts: FactBase) -> list:
    return [
        instantiate(SchemaId.RDef_U_eq_tY, {"mu": mu, "alpha": arrowed(a, rev), "sign": s}, facts)
        for mu, a in facts.pairs for rev in (False, True) for s in ("+", "-")
    ]


def _dedup(instances) -> list:
    seen = {}
    for inst in instances:
        prior = seen.get(inst.id)
        if prior is not None and prior.key != inst.key:
            raise SchemaError(f"instance id {inst.id} reused for different relations")
        seen.setdefault(inst.id, inst)
    return list(seen.values())


def store_for(context: str, include_derived: bool = True):
    """Instance store for a context such as ``Thm2@figure4`` or ``figure4``."""
    from .catalog import load_catalog

    theorem, at, catalog = context.partition("@")
    if not at:
        facts = load_catalog(theorem)
        parts = []
        for thm in ("Thm1", "Thm2", "Thm3", "Thm4"):
            try:
                parts.extend(presentation_for(thm, facts, include_derived))
            except GenusOutOfRange:
                pass
        parts.extend(definition_instances(facts))
        return facts, {i.id: i for i in _dedup(parts)}
    facts = load_catalog(catalog)
    return facts, {i.id: i for i in presentation_for(theorem, facts, include_derived)}


def generators_of(instances) -> list:
    symbols = set()
    for inst in instances:
        symbols |= inst.lhs.symbols() | inst.rhs.symbols()
    return sorted(symbols, key=lambda s: s.render())
