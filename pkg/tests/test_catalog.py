import pytest

from mcgcert.catalog import (
    NoActionFact,
    NotArrowed,
    OrientationToken,
    UnknownCatalog,
    ValidationError,
    load_catalog,
    parse_catalog,
    reverse_curve,
    transport_orientation,
)
from mcgcert.words import Word, arrowed, one_sided, slide, twist

HEAD = "catalog t\nsurface N(4,1)\ncurve one mu\ncurve two a b c\n"


def test_figure4_loads():
    f = load_catalog("figure4")
    assert str(f.surface) == "N(4,1)"
    assert ("mu", "alpha") in f.pairs
    assert f.intersection("beta", "alpha") == 1
    assert f.compatible(OrientationToken("alpha", "+"), OrientationToken("beta", "+"))


def test_all_facts_have_sources():
    for name in ("figure4", "section2", "figure3-lantern-chain"):
        f = load_catalog(name)
        for group in (f.bounding_facts, f.chain_facts, f.lantern_facts, f.action_facts,
                      f.compatibility_facts, f.delta_facts, f.intersection_facts):
            assert all(fact.source for fact in group), name


@pytest.mark.parametrize("extra", [
    "pair a mu\n",                          # wrong sidedness order
    "bound z disk\n",                       # undeclared
    "intersect a b 2\n",                    # out of range
    "chain K : a+ b+ -> c+ a-\n",           # 2-chain needs one boundary curve
    "delta mu a -> mu+\n",                  # delta must be two-sided
    "action f : T(a,+) maps mu -> a\n",       # sidedness changes
    "curve two a\n",                        # declared twice
])
def test_invalid_facts(extra):
    with pytest.raises(ValidationError):
        parse_catalog(HEAD + extra)


def test_transport():
    f = load_catalog("figure4")
    actor = Word.parse("T(alpha,+) Y(mu,alpha)")  # no such actor in the figure
    with pytest.raises(NoActionFact):
        transport_orientation(f, actor, OrientationToken("beta", "+"))
    assert transport_orientation(f, Word(), OrientationToken("beta", "-")) == OrientationToken("beta", "-")
    yr = Word.of(slide("mu", "alpha", True))
    got = transport_orientation(f, yr, OrientationToken("beta", "-"))
    assert got == OrientationToken("delta", "+")


def test_reverse_curve():
    assert reverse_curve(arrowed("a")) == arrowed("a", True)
    assert reverse_curve(reverse_curve(arrowed("a"))) == arrowed("a")
    with pytest.raises(NotArrowed):
        reverse_curve(one_sided("mu"))


def test_unknown_catalog():
    with pytest.raises(UnknownCatalog):
        load_catalog("no-such-catalog")


def test_data_dir_override(tmp_path, monkeypatch):
    (tmp_path / "catalogs").mkdir()
    (tmp_path / "catalogs" / "tiny.cat").write_text(HEAD + "bound a disk\n")
    monkeypatch.setenv("MCG_DATA_DIR", str(tmp_path))
    f = load_catalog("tiny")
    assert f.name == "t" and f.bounding_facts[0].curve == "a"
    with pytest.raises(UnknownCatalog):
        load_catalog("figure4")


def test_twist_symbol_ignores_arrow_semantics():
    assert twist("a", "+") != twist("a", "-")
