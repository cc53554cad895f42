import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcgcert.abelian import (
    AbelianInvariants,
    UnknownGenerator,
    abelian_invariants,
    diagonal,
    invariants_of_matrix,
    matmul,
    smith_normal_form,
)
from mcgcert.presentations import load_presentation, parse_presentation
from mcgcert.words import Word, slide
from oracles import det, invariant_factors


def random_matrix(rng, rows=3, cols=3, lo=-5, hi=5):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def check_snf(m):
    u, d, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert i == j or x == 0
    diag = diagonal(d)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return diag


def test_snf_against_brute_force():
    rng = random.Random(20261018)
    for _ in range(200):
        m = random_matrix(rng)
        assert check_snf(m) == invariant_factors(m)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.randoms(use_true_random=False))
def test_snf_rectangular(rows, cols, rng):
    m = random_matrix(rng, rows, cols, -9, 9)
    assert check_snf(m) == invariant_factors(m)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_invariants_unchanged_by_row_and_column_moves(rng):
    m = random_matrix(rng)
    base = invariants_of_matrix(m)
    rows = list(m)
    rng.shuffle(rows)
    assert invariants_of_matrix(rows) == base
    perm = list(range(3))
    rng.shuffle(perm)
    assert invariants_of_matrix([[r[j] for j in perm] for r in m]) == base
    k = rng.randint(-3, 3)
    added = [list(r) for r in m]
    added[0] = [x + k * y for x, y in zip(added[0], added[1])]
    assert invariants_of_matrix(added) == base


def test_y_squared_is_z2():
    pres = load_presentation("y2")
    assert str(abelian_invariants(pres.relations, pres.generators)) == "Z/2"


def test_formatting():
    assert str(AbelianInvariants((), 0)) == "1"
    assert str(AbelianInvariants((), 1)) == "Z"
    assert str(AbelianInvariants((2, 6), 2)) == "Z^2 x Z/2 x Z/6"


def test_words_as_relators():
    y = slide("mu", "a")
    assert str(abelian_invariants([Word.of(y) ** 6, Word.of(y) ** 4], [y])) == "Z/2"
    assert str(abelian_invariants([], [y])) == "Z"


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse = parse_presentation("presentation p\ngen Y(mu,a)\nrel r : T(a,+) = 1\n")
        abelian_invariants(parse.relations, parse.generators)


def test_presentation_render_roundtrip():
    pres = load_presentation("y2")
    again = parse_presentation(pres.render())
    assert again.render() == pres.render()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.sampled_from(range(6)), max_size=8), min_size=1, max_size=4),
       st.integers(0, 3), st.lists(st.sampled_from(range(6)), max_size=5), st.booleans())
def test_conjugate_or_inverse_relator(rels, which, conj, flip):
    from mcgcert.words import Letter, invert, conjugate
    from strategies import SYMBOLS
    gens = SYMBOLS[:3]
    to_word = lambda idx: Word([Letter(gens[i % 3], 1 if i < 3 else -1) for i in idx])  # noqa: E731
    relators = [to_word(r) for r in rels]
    base = abelian_invariants(relators, gens)
    k = which % len(relators)
    changed = invert(relators[k]) if flip else conjugate(to_word(conj), relators[k])
    assert abelian_invariants(relators[:k] + [changed] + relators[k + 1:], gens) == base
