import shutil
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcert.catalog import NoActionFact, data_dir, load_catalog, parse_catalog
from mcgcert.engine import SearchBounds, check_certificate
from mcgcert.morphism import (
    EvidenceMissing,
    MorphismError,
    check_generator_inverse,
    check_morphism,
    check_theta_independence,
    check_well_defined,
    load_morphism,
    map_word,
    parse_morphism,
    theta_certificate,
)
from mcgcert.words import Letter, MissingImage, Word, invert, slide, twist

NU_TEXT = (Path(data_dir()) / "morphisms" / "nu.morph").read_text()


@pytest.fixture(scope="module")
def nu():
    return load_morphism("nu")


ETA = load_morphism("eta")
eta_words = st.lists(st.builds(Letter, st.sampled_from(ETA.source_generators),
                               st.sampled_from([1, -1])), max_size=10).map(Word)


@settings(max_examples=300, deadline=None)
@given(eta_words, eta_words)
def test_map_word_is_a_homomorphism(u, v):
    assert map_word(ETA, u * v) == map_word(ETA, u) * map_word(ETA, v)
    assert map_word(ETA, invert(u)) == invert(map_word(ETA, u))


@pytest.mark.parametrize("name", ["nu", "psi"])
def test_bundled_morphisms_well_defined(name):
    assert check_well_defined(load_morphism(name)).passed


@pytest.mark.parametrize("name", ["eta", "phi"])
def test_inverse_side_loads(name):
    m = load_morphism(name)
    assert set(m.images) >= set(m.source_generators)


def test_nu_and_psi_roundtrips():
    for name in ("nu", "psi"):
        result = check_morphism(load_morphism(name))
        assert result.passed, result.text()
    assert len(check_morphism(load_morphism("psi")).inverse_checks) == 2


def test_nu_images(nu):
    y = Word.of(slide("mu", "alpha"))
    assert str(map_word(nu, y)) == "T(alpha,+)^-1 U(mu,alpha,+)"
    assert map_word(nu, Word.of(twist("beta", "-"))) == Word.of(twist("beta", "-"))


def test_deleted_certificate_means_missing_evidence():
    text = "\n".join(l for l in NU_TEXT.splitlines() if "nu_slide_inverse" not in l) + "\n"
    m = parse_morphism(text, str(Path(data_dir()) / "morphisms" / "nu.morph"))
    with pytest.raises(EvidenceMissing):
        check_well_defined(m)


def test_corrupted_eta_fails():
    # U = Y t instead of U = t Y: the round trip with nu no longer closes
    text = ("morphism eta_bad : Thm4@figure4 -> Thm2@figure4\nfix T\n"
            "map U(mu,alpha,+) => Y(mu,alpha) T(alpha,+)\n"
            "map U(mu,alpha,-) => Y(mu,alpha) T(alpha,-)\n"
            "map U(mu,alpha^-1,+) => Y(mu,alpha^-1) T(alpha,+)\n"
            "map U(mu,alpha^-1,-) => Y(mu,alpha^-1) T(alpha,-)\n"
            "map U(mu1,alpha,+) => Y(mu1,alpha) T(alpha,+)\n"
            "map U(mu1,alpha,-) => Y(mu1,alpha) T(alpha,-)\n")
    bad = parse_morphism(text)
    nu = load_morphism("nu")
    report = check_generator_inverse(nu, bad, {"*": SearchBounds(3, 8, 20000)})
    assert not report.passed


def test_wrong_image_fails(nu):
    images = dict(nu.images)
    images[slide("mu", "alpha")] = Word.parse("U(mu,alpha,+) T(alpha,+)^-1")
    report = check_well_defined(replace(nu, images=images))
    assert not report.passed


def test_missing_image_rejected():
    with pytest.raises(MissingImage):
        parse_morphism("morphism x : Thm2@figure4 -> Thm4@figure4\nfix T\n")


def test_image_outside_target_rejected():
    with pytest.raises(MorphismError):
        parse_morphism("morphism x : Cor@section2 -> Thm1@section2\nfix T\n"
                       "map Y(mu0,alpha0) => Y(mu0,alpha0) U(mu0,alpha0,+)\n")


def test_identity_pair_is_well_defined():
    text = "morphism id : Thm2@figure4 -> Thm2@figure4\nfix T\nfix Y\n"
    m = parse_morphism(text)
    report = check_well_defined(m)
    assert report.passed
    assert all(c.method == "free" or c.method.startswith("literal") for c in report.checks)
    assert check_generator_inverse(m, m, {}).passed


def test_adding_evidence_never_breaks_a_pass(nu):
    extra = dict(nu.evidence)
    extra["*"] = SearchBounds(1, 4, 100)
    assert check_well_defined(replace(nu, evidence=extra)).passed


def test_theta_independence():
    facts = load_catalog("figure4")
    report = check_theta_independence(facts, "mu", "alpha")
    assert report.passed
    cert, store = theta_certificate(facts, "mu", "alpha")
    assert str(cert.source) == "T(alpha,+)^-1 U(mu,alpha,+)"
    assert str(cert.target) == "T(alpha,-)^-1 U(mu,alpha,-)"
    assert len(store) == 5


def test_theta_needs_facts():
    text = (Path(data_dir()) / "catalogs" / "figure4.cat").read_text()
    stripped = "\n".join(l for l in text.splitlines() if not l.startswith("action Up_alpha")) + "\n"
    with pytest.raises(NoActionFact):
        theta_certificate(parse_catalog(stripped), "mu", "alpha")


def test_evidence_certificate_must_match_equation(tmp_path):
    src = Path(data_dir()) / "morphisms" / "nu.morph"
    text = src.read_text().replace("rel=slinv.mu.alpha cert=nu_slide_inverse",
                                   "rel=slinv.mu.alpha cert=nu_slide_square")
    m = parse_morphism(text, str(src))
    report = check_well_defined(m)
    bad = [c for c in report.checks if c.relation_id == "slinv.mu.alpha"]
    assert bad and bad[0].verdict == "FAIL"


def test_bundled_certificate_in_other_dir(tmp_path):
    shutil.copy(Path(data_dir()) / "certificates" / "nu_slide_inverse.deriv", tmp_path / "local.deriv")
    src = Path(data_dir()) / "morphisms" / "nu.morph"
    text = src.read_text().replace("cert=nu_slide_inverse", "cert=local.deriv")
    (tmp_path / "nu.morph").write_text(text)
    m = load_morphism(str(tmp_path / "nu.morph"))
    assert check_certificate(m.evidence["slinv.mu.alpha"], m.target_store).passed
