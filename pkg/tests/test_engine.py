import time
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcert.catalog import data_dir
from mcgcert.engine import (
    BoundsExceeded,
    Certificate,
    Direction,
    NoMatchAtPosition,
    RegroupChangedWord,
    SearchBounds,
    Step,
    StepKind,
    UnknownRelation,
    _moves,
    apply_step,
    check_certificate,
    find_derivation,
    load_certificate,
    mutations,
    parse_certificate,
    reverse_certificate,
)
from mcgcert.schemas import store_for
from mcgcert.words import Word, reduce_letters

CERTS = sorted(p.stem for p in (Path(data_dir()) / "certificates").glob("*.deriv"))
_, THM2 = store_for("Thm2@figure4")


def W(text):
    return Word.parse(text)


def test_apply_forward_and_reverse():
    w = W("T(beta,+)^-1 Y(mu,alpha)")
    out = apply_step(w, Step(StepKind.APPLY, "twinv.beta+", 0, Direction.FWD), THM2)
    assert Word(out) == W("T(beta,-) Y(mu,alpha)")
    back = apply_step(out, Step(StepKind.APPLY, "twinv.beta+", 0, Direction.REV), THM2)
    assert Word(back) == w


def test_step_errors():
    w = W("T(beta,+)^-1")
    with pytest.raises(NoMatchAtPosition):
        apply_step(w, Step(StepKind.APPLY, "twinv.beta+", 1), THM2)
    with pytest.raises(NoMatchAtPosition):
        apply_step(w, Step(StepKind.APPLY, "twinv.beta+", 5), THM2)
    with pytest.raises(UnknownRelation):
        apply_step(w, Step(StepKind.APPLY, "nope", 0), THM2)
    with pytest.raises(RegroupChangedWord):
        apply_step(w, Step(StepKind.REGROUP, to=W("T(beta,-)").letters), THM2)


def test_insert_is_literal():
    u = W("T(alpha,+)").letters
    out = apply_step(W("T(beta,+)"), Step(StepKind.INSERT, position=1, pair=u), THM2)
    assert len(out) == 3
    assert reduce_letters(out) == W("T(beta,+)").letters


def test_final_word_must_match():
    cert = Certificate("x", W("T(beta,+)^-1"), W("T(beta,+)"),
                       (Step(StepKind.APPLY, "twinv.beta+", 0),), "Thm2@figure4")
    report = check_certificate(cert, THM2)
    assert not report.passed and report.failed_step is None


@pytest.mark.parametrize("name", CERTS)
def test_bundled_certificates_pass(name):
    cert = load_certificate(name)
    _, store = store_for(cert.context)
    report = check_certificate(cert, store)
    assert report.passed, report.text()


@pytest.mark.parametrize("name", CERTS)
def test_reverse_law(name):
    cert = load_certificate(name)
    _, store = store_for(cert.context)
    back = reverse_certificate(cert, store)
    assert (back.source, back.target) == (cert.target, cert.source)
    assert check_certificate(back, store).passed


@pytest.mark.parametrize("name", CERTS)
def test_render_parse(name):
    cert = load_certificate(name)
    assert parse_certificate(cert.render()) == cert


def test_search_uses_twist_inverse():
    found = find_derivation(W("T(beta,-) T(beta,+)"), W("1"), THM2, SearchBounds(2, 4, 1000))
    assert found is not None
    assert check_certificate(found, THM2).passed


def test_search_braid():
    src, dst = W("T(alpha,+) T(beta,+) T(alpha,+)"), W("T(beta,+) T(alpha,+) T(beta,+)")
    found = find_derivation(src, dst, THM2, SearchBounds(3, 8, 10000))
    assert len(found.steps) == 1
    assert check_certificate(found, THM2).passed


def test_search_is_deterministic():
    src, dst = W("T(beta,+)^-1 T(alpha,+)^-1"), W("T(beta,-) T(alpha,-)")
    a = find_derivation(src, dst, THM2, SearchBounds(3, 6, 5000))
    b = find_derivation(src, dst, THM2, SearchBounds(3, 6, 5000))
    assert a == b and a.render() == b.render()


def test_search_bounds():
    src, dst = W("T(beta,+)"), W("T(gamma,+)")
    with pytest.raises(BoundsExceeded):
        find_derivation(src, dst, THM2, SearchBounds(1, 3, 100000))
    with pytest.raises(BoundsExceeded):
        find_derivation(src, dst, THM2, SearchBounds(5, 6, 10))
    with pytest.raises(ValueError):
        SearchBounds(0, 1, 1)


def test_search_exhausted_returns_none():
    from mcgcert.schemas import RelationInstance, SchemaId
    tiny = {"twinv.beta+": THM2["twinv.beta+"]}
    assert find_derivation(W("T(beta,+)"), W("T(gamma,+)"), tiny, SearchBounds(10, 5, 1000)) is None
    assert isinstance(tiny["twinv.beta+"], RelationInstance)
    assert tiny["twinv.beta+"].schema is SchemaId.R2a_TwistInverse


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=6))
def test_random_walks_replay(choices):
    """A certificate built from any walk of legal moves checks, and so does its reverse."""
    word = W("T(beta,+) T(alpha,+)^-1 Y(mu,alpha)").letters
    start = word
    steps = []
    for c in choices:
        moves = sorted(_moves(word, THM2), key=lambda m: (m[0], m[1].value, m[2]))
        rid, direction, p, raw = moves[c % len(moves)]
        steps.append(Step(StepKind.APPLY, rid, p, direction))
        word = raw
    cert = Certificate("walk", Word(start), Word(word), tuple(steps), "Thm2@figure4")
    assert check_certificate(cert, THM2).passed
    assert check_certificate(reverse_certificate(cert, THM2), THM2).passed


def test_mutations_never_pass_silently():
    total = 0
    silent = []
    for name in CERTS:
        cert = load_certificate(name)
        _, store = store_for(cert.context)
        for label, bad in mutations(cert, sorted(store)):
            total += 1
            if check_certificate(bad, store).passed:
                silent.append((name, label))
    assert total >= 100
    assert silent == []


def test_mutation_labels():
    cert = load_certificate("nu_slide_square")
    labels = [label for label, _ in mutations(cert, ["a", "b"])]
    assert any("dir flipped" in s for s in labels)
    assert all(label.startswith("step ") for label in labels)


def test_flagship_size_and_speed():
    cert = load_certificate("slide_square_from_thm2")
    _, store = store_for(cert.context)
    start = time.perf_counter()
    report = check_certificate(cert, store)
    assert time.perf_counter() - start < 1.0
    assert report.passed and len(cert.steps) >= 17
    assert cert.source == W("Y(mu,alpha) Y(mu,alpha)")
    assert cert.target == W("T(dma,+)")


def test_step_render_roundtrip_on_mutants():
    cert = load_certificate("nu_slide_inverse")
    first = next(i for i, s in enumerate(cert.steps) if s.kind is StepKind.APPLY)
    bad = replace(cert, steps=cert.steps[:first] + (replace(cert.steps[first], position=99),)
                  + cert.steps[first + 1:])
    report = check_certificate(bad, store_for(cert.context)[1])
    assert report.failed_step == first
    assert report.reason == "NoMatchAtPosition"
    assert f"at step {first}" in report.text()
