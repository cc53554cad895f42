from pathlib import Path

import pytest

from mcgcert import dsl
from mcgcert.catalog import data_dir

BUNDLED = sorted(p for p in (Path(data_dir())).rglob("*") if p.suffix in (".cat", ".deriv", ".morph", ".pres"))


def test_bundle_is_not_empty():
    kinds = {p.suffix for p in BUNDLED}
    assert kinds == {".cat", ".deriv", ".morph", ".pres"}


@pytest.mark.parametrize("path", BUNDLED, ids=lambda p: p.name)
def test_parse_render_identity(path):
    text = path.read_text()
    doc = dsl.parse(text, dsl.kind_for_path(str(path)), str(path))
    assert dsl.render(doc) == text


def test_error_position_points_at_the_bad_value():
    text = "derive x : T(a,+) => T(a,+) in Thm2@figure4\napply rel=twinv.a dir=fwd at=\n"
    with pytest.raises(dsl.ParseError) as err:
        dsl.parse(text, dsl.DocKind.DERIVATION)
    assert err.value.line == 2
    assert err.value.col == len("apply rel=twinv.a dir=fwd at=") + 1
    assert "2:" in str(err.value)


def test_unknown_keyword():
    with pytest.raises(dsl.ParseError) as err:
        dsl.parse("catalog c\nsurface N(3,1)\nfrobnicate x\n", dsl.DocKind.CATALOG)
    assert (err.value.line, err.value.col) == (3, 1)


def test_header_required_once():
    with pytest.raises(dsl.ParseError):
        dsl.parse("apply rel=x dir=fwd at=0\n", dsl.DocKind.DERIVATION)


def test_bad_direction():
    text = "derive x : 1 => 1 in Thm2@figure4\napply rel=x dir=up at=0\n"
    with pytest.raises(dsl.ParseError) as err:
        dsl.parse(text, dsl.DocKind.DERIVATION)
    assert err.value.line == 2


def test_comments_survive():
    text = "# header comment\npresentation p\ngen Y(mu,a)  # the slide\n\nrel r : Y(mu,a) Y(mu,a) = 1\n"
    doc = dsl.parse(text, dsl.DocKind.PRESENTATION)
    assert dsl.render(doc) == text
    assert doc.of("gen")[0].comment == " the slide"
