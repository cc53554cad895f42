"""Symbolic curves, orientation tokens and the trusted fact base.

Facts are axioms transcribed from figures; nothing here checks topology.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from . import dsl
from .words import (
    Arrow,
    CurveRef,
    McgError,
    Sidedness,
    Word,
    arrowed,
    flip_sign,
    one_sided,
    two_sided,
)


class ValidationError(McgError):
    def __init__(self, fact, reason: str):
        super().__init__(f"invalid fact {fact}: {reason}")
        self.fact = fact
        self.reason = reason


class NotArrowed(McgError):
    def __init__(self, curve):
        super().__init__(f"curve {curve.render()} carries no arrow")
        self.curve = curve


class NoActionFact(McgError):
    def __init__(self, actor, curve):
        super().__init__(f"no action fact for {actor} on {curve}")
        self.actor = actor
        self.curve = curve


class UnknownCatalog(McgError):
    pass


@dataclass(frozen=True)
class SurfaceSig:
    genus: int
    boundary_count: int

    def __post_init__(self):
        if self.genus < 1 or self.boundary_count < 0:
            raise ValueError(f"no surface N({self.genus},{self.boundary_count})")

    def __str__(self):
        return f"N({self.genus},{self.boundary_count})"


@dataclass(frozen=True)
class OrientationToken:
    curve: str
    sign: str

    def flip(self) -> OrientationToken:
        return OrientationToken(self.curve, flip_sign(self.sign))

    def __str__(self):
        return self.curve + self.sign


def reverse_curve(alpha: CurveRef) -> CurveRef:
    if alpha.arrow is None:
        raise NotArrowed(alpha)
    arrow = Arrow.REVERSED if alpha.arrow is Arrow.FORWARD else Arrow.FORWARD
    return CurveRef(alpha.name, alpha.sidedness, arrow)


@dataclass(frozen=True)
class BoundingFact:
    curve: str
    bounds: str  # "disk" or "mobius"
    source: str | None = None


@dataclass(frozen=True)
class ChainFact:
    name: str
    chain: tuple
    boundary: tuple
    source: str | None = None

    @property
    def k(self) -> int:
        return len(self.chain)


@dataclass(frozen=True)
class LanternFact:
    name: str
    curves: tuple  # d1..d7 as OrientationTokens
    source: str | None = None


@dataclass(frozen=True)
class ActionFact:
    name: str
    actor: Word
    curve: CurveRef
    image: CurveRef
    transport: tuple = ()  # pairs (sign, sign)
    source: str | None = None

    def transported(self, sign: str) -> str | None:
        for a, b in self.transport:
            if a == sign:
                return b
        return None


@dataclass(frozen=True)
class CompatibilityFact:
    a: OrientationToken
    b: OrientationToken
    source: str | None = None


@dataclass(frozen=True)
class DeltaFact:
    mu: str
    alpha: CurveRef
    delta: OrientationToken
    source: str | None = None


@dataclass(frozen=True)
class IntersectionFact:
    a: str
    b: str
    number: int
    source: str | None = None


@dataclass(frozen=True)
class FactBase:
    name: str
    surface: SurfaceSig
    curves: tuple = ()  # (name, Sidedness) in declaration order
    pairs: tuple = ()  # (mu, alpha) names carrying slides/transpositions
    base_pair: tuple | None = None
    bounding_facts: tuple = ()
    chain_facts: tuple = ()
    lantern_facts: tuple = ()
    action_facts: tuple = ()
    compatibility_facts: tuple = ()
    delta_facts: tuple = ()
    intersection_facts: tuple = ()
    document: object = field(default=None, compare=False, repr=False)

    @property
    def sidedness(self) -> dict:
        return dict(self.curves)

    def two_sided_curves(self) -> list:
        return [n for n, s in self.curves if s is Sidedness.TWO]

    def is_empty(self) -> bool:
        return not (self.pairs or self.bounding_facts or self.chain_facts or self.lantern_facts
                    or self.action_facts or self.compatibility_facts or self.delta_facts
                    or self.intersection_facts)

    def intersection(self, a: str, b: str) -> int | None:
        for f in self.intersection_facts:
            if {f.a, f.b} == {a, b}:
                return f.number
        return None

    def compatible(self, a: OrientationToken, b: OrientationToken) -> bool:
        return any((f.a, f.b) in ((a, b), (b, a)) for f in self.compatibility_facts)

    def action(self, actor: Word, curve: CurveRef, exact_arrow: bool = True) -> ActionFact | None:
        """The fact for ``actor`` moving ``curve``.

        Twist bookkeeping ignores arrows (``exact_arrow=False``); slide and
        transposition arguments must match the declared arrow exactly.
        """
        for f in self.action_facts:
            if f.actor != actor or f.curve.name != curve.name:
                continue
            if exact_arrow and f.curve.arrow != curve.arrow:
                continue
            return f
        return None

    def delta(self, mu: str, alpha: CurveRef) -> DeltaFact | None:
        for f in self.delta_facts:
            if f.mu == mu and f.alpha == alpha:
                return f
        return None


def transport_orientation(facts: FactBase, actor: Word, theta: OrientationToken) -> OrientationToken:
    """``f_*(theta)``: the declared orientation of ``f(c)`` induced from ``theta``."""
    if len(actor) == 0:
        return theta
    fact = facts.action(actor, two_sided(theta.curve), exact_arrow=False)
    sign = fact.transported(theta.sign) if fact else None
    if sign is None:
        raise NoActionFact(actor, theta.curve)
    return OrientationToken(fact.image.name, sign)


# -- building from documents --------------------------------------------------

def _token(t) -> OrientationToken:
    return OrientationToken(t[0], t[1])


def build_factbase(doc: dsl.Document) -> FactBase:
    header = doc.first("catalog")
    surf = doc.first("surface")
    if surf is None:
        raise dsl.ParseError(header.line, 1, "a 'surface N(g,n)' line", doc.path)
    try:
        surface = SurfaceSig(surf["genus"], surf["boundary"])
    except ValueError as exc:
        raise ValidationError("surface", str(exc)) from None

    sided: dict = {}
    for st in doc.of("curve"):
        for name in st["names"]:
            if name in sided:
                raise ValidationError(f"curve {name}", "declared twice")
            sided[name] = Sidedness(st["sided"])

    def need(name, sidedness, what):
        if name not in sided:
            raise ValidationError(what, f"undeclared curve {name}")
        if sided[name] is not sidedness:
            raise ValidationError(what, f"curve {name} must be {sidedness.value}-sided")

    def curve_ref(c, what):
        name, rev = c
        if name not in sided:
            raise ValidationError(what, f"undeclared curve {name}")
        if sided[name] is Sidedness.ONE:
            if rev:
                raise ValidationError(what, f"one-sided curve {name} has no arrow")
            return one_sided(name)
        return arrowed(name, rev)

    pairs = []
    for st in doc.of("pair") + doc.of("basepair"):
        need(st["mu"], Sidedness.ONE, f"pair {st['mu']} {st['alpha']}")
        need(st["alpha"], Sidedness.TWO, f"pair {st['mu']} {st['alpha']}")
        if (st["mu"], st["alpha"]) not in pairs:
            pairs.append((st["mu"], st["alpha"]))
    base = doc.of("basepair")
    if len(base) > 1:
        raise ValidationError("basepair", "at most one base pair")
    base_pair = (base[0]["mu"], base[0]["alpha"]) if base else None

    bounding = []
    for st in doc.of("bound"):
        need(st["curve"], Sidedness.TWO, f"bound {st['curve']}")
        bounding.append(BoundingFact(st["curve"], st["bounds"], st.get("source")))

    intersections = []
    for st in doc.of("intersect"):
        what = f"intersect {st['a']} {st['b']}"
        need(st["a"], Sidedness.TWO, what)
        need(st["b"], Sidedness.TWO, what)
        if st["number"] not in (0, 1):
            raise ValidationError(what, "intersection number must be 0 or 1")
        intersections.append(IntersectionFact(st["a"], st["b"], st["number"], st.get("source")))

    compat = []
    for st in doc.of("compatible"):
        a, b = _token(st["a"]), _token(st["b"])
        need(a.curve, Sidedness.TWO, "compatible")
        need(b.curve, Sidedness.TWO, "compatible")
        compat.append(CompatibilityFact(a, b, st.get("source")))

    chains = []
    for st in doc.of("chain"):
        chain = tuple(map(_token, st["chain"]))
        boundary = tuple(map(_token, st["boundary"]))
        for t in chain + boundary:
            need(t.curve, Sidedness.TWO, f"chain {st['name']}")
        want = 2 if len(chain) % 2 else 1
        if len(boundary) != want:
            raise ValidationError(
                f"chain {st['name']}",
                f"a {len(chain)}-chain needs {want} boundary curve(s), got {len(boundary)}")
        chains.append(ChainFact(st["name"], chain, boundary, st.get("source")))

    lanterns = []
    for st in doc.of("lantern"):
        curves = tuple(map(_token, st["curves"]))
        for t in curves:
            need(t.curve, Sidedness.TWO, f"lantern {st['name']}")
        lanterns.append(LanternFact(st["name"], curves, st.get("source")))

    deltas = []
    for st in doc.of("delta"):
        what = f"delta {st['mu']}"
        need(st["mu"], Sidedness.ONE, what)
        alpha = curve_ref(st["alpha"], what)
        d = _token(st["delta"])
        need(d.curve, Sidedness.TWO, what)
        deltas.append(DeltaFact(st["mu"], alpha, d, st.get("source")))

    actions = []
    names = set()
    for st in doc.of("action"):
        what = f"action {st['name']}"
        if st["name"] in names:
            raise ValidationError(what, "duplicate fact name")
        names.add(st["name"])
        actor = Word(st["actor"])
        for letter in actor:
            for c in letter.symbol.curves:
                need(c.name, c.sidedness, what)
        curve = curve_ref(st["curve"], what)
        image = curve_ref(st["image"], what)
        if curve.sidedness is not image.sidedness:
            raise ValidationError(what, "an action preserves sidedness")
        transport = tuple(st["transport"])
        if transport and curve.sidedness is Sidedness.ONE:
            raise ValidationError(what, "orientation transport needs a two-sided curve")
        if len({a for a, _ in transport}) != len(transport):
            raise ValidationError(what, "transport lists a sign twice")
        actions.append(ActionFact(st["name"], actor, curve, image, transport, st.get("source")))

    return FactBase(
        name=header["name"],
        surface=surface,
        curves=tuple(sided.items()),
        pairs=tuple(pairs),
        base_pair=base_pair,
        bounding_facts=tuple(bounding),
        chain_facts=tuple(chains),
        lantern_facts=tuple(lanterns),
        action_facts=tuple(actions),
        compatibility_facts=tuple(compat),
        delta_facts=tuple(deltas),
        intersection_facts=tuple(intersections),
        document=doc,
    )


def data_dir() -> Path:
    env = os.environ.get("MCG_DATA_DIR")
    return Path(env) if env else Path(__file__).parent / "data"


def resolve(name_or_path: str, subdir: str, ext: str) -> Path:
    p = Path(name_or_path)
    if p.suffix == f".{ext}" and p.exists():
        return p
    stem = p.name[:-len(ext) - 1] if p.suffix == f".{ext}" else name_or_path
    candidate = data_dir() / subdir / f"{stem}.{ext}"
    if candidate.exists():
        return candidate
    if p.exists():
        return p
    raise UnknownCatalog(f"no {subdir} entry named {name_or_path!r}")


def parse_catalog(text: str, path: str | None = None) -> FactBase:
    return build_factbase(dsl.parse(text, dsl.DocKind.CATALOG, path))


_cache: dict = {}


def load_catalog(source: str) -> FactBase:
    """Load a catalog by built-in name, file path, or document text."""
    if "\n" in source:
        return parse_catalog(source)
    path = resolve(source, "catalogs", "cat")
    text = path.read_text()
    key = (str(path.resolve()), text)
    if key not in _cache:
        _cache[key] = parse_catalog(text, str(path))
    return _cache[key]


def render_catalog(facts: FactBase) -> str:
    if facts.document is not None:
        return dsl.render(facts.document)
    raise McgError("fact base was not loaded from a document")

