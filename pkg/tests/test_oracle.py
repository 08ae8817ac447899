import random

import pytest

from layered_catalan.canon import canonicalize
from layered_catalan.oracle import (
    catalan_number,
    catalan_presentation,
    congruence_classes,
    coset_enumeration,
    lc_presentation,
    oracle_equal,
    word_at,
    word_index,
    words_up_to,
)
from layered_catalan.words import Word


def w(text, n):
    return Word.parse(text, n)


class TestPresentations:
    def test_lc3_relation_count(self):
        # 3 idempotents, 6 cyclic braid relations, 3 three-letter collapses;
        # a1 and a3 are neighbours on the circle, so no commutation
        assert len(lc_presentation(3).relations) == 12

    def test_catalan2(self):
        rels = {frozenset(r) for r in catalan_presentation(2).relations}
        assert rels == {
            frozenset({(1, 1), (1,)}),
            frozenset({(2, 2), (2,)}),
            frozenset({(1, 2, 1), (2, 1)}),
            frozenset({(2, 1, 2), (2, 1)}),
        }

    def test_lc2_has_no_duplicates(self):
        rels = lc_presentation(2).relations
        assert len({frozenset(r) for r in rels}) == len(rels)
        assert all(l != r for l, r in rels)

    def test_lc_drops_the_wrap_commutation(self):
        rels = {frozenset(r) for r in lc_presentation(6).relations}
        assert frozenset({(1, 6), (6, 1)}) not in rels
        assert frozenset({(1, 5), (5, 1)}) in rels
        assert frozenset({(6, 1, 6), (1, 6)}) in rels
        assert frozenset({(5, 6, 1), (5, 1)}) in rels


class TestCongruence:
    def test_lc2(self):
        r = congruence_classes(lc_presentation(2), 6)
        assert r.num_classes == 4 and r.stable

    def test_lc3(self):
        r = congruence_classes(lc_presentation(3), 8)
        assert r.num_classes == 8 and r.stable

    def test_catalan_on_five_points(self):
        # the four-generator presentation describes transformations of five points
        r = congruence_classes(catalan_presentation(4), 9)
        assert r.stable
        assert r.num_classes == 42 == catalan_number(5)

    def test_short_arena_is_unstable(self):
        assert not congruence_classes(lc_presentation(4), 3).stable

    def test_without_slack_boundary_words_split(self):
        loose = congruence_classes(lc_presentation(3), 8, slack=0)
        assert loose.num_classes > 8

    def test_classes_are_congruences(self):
        r = congruence_classes(lc_presentation(4), 6)
        rng = random.Random(4)
        reps = {}
        for x in words_up_to(4, 5):
            reps.setdefault(r.label(x), []).append(x)
        for members in reps.values():
            a, b = rng.choice(members), rng.choice(members)
            g = Word.of(4, rng.randint(1, 4))
            assert r.label(a + g) == r.label(b + g)
            assert r.label(g + a) == r.label(g + b)

    def test_label_out_of_range(self):
        r = congruence_classes(lc_presentation(2), 3)
        with pytest.raises(ValueError):
            r.label(Word((1, 2, 1, 2), 2))

    def test_cap(self):
        with pytest.raises(MemoryError):
            congruence_classes(lc_presentation(9), 12)


class TestOracleEqual:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_wrap_relation(self, n):
        assert oracle_equal(lc_presentation(n), Word.of(n, n, 1, n), Word.of(n, 1, n))

    def test_reflexive(self):
        x = w("a2.a4.a1", 5)
        assert oracle_equal(lc_presentation(5), x, x)

    def test_distinct(self):
        assert not oracle_equal(lc_presentation(5), w("a1.a2", 5), w("a2.a1", 5))


@pytest.mark.parametrize("n", range(3, 8))
def test_three_letter_chain(n):
    """a_i a_{i+2} equals every arrangement of a_i, a_{i+1}, a_{i+2} listed with it."""
    tc = coset_enumeration(lc_presentation(n))
    for i in range(1, n + 1):
        a, b, c = i, (i % n) + 1, ((i + 1) % n) + 1
        chain = [(a, c), (a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
        nodes = {tc.trace(Word(x, n)) for x in chain}
        assert len(nodes) == 1


@pytest.mark.parametrize("n, size", [(1, 2), (2, 4), (3, 8), (4, 14), (5, 22), (6, 35), (7, 65), (8, 126)])
def test_coset_enumeration_sizes(n, size):
    assert coset_enumeration(lc_presentation(n)).size == size


def test_coset_representatives_are_shortlex_least():
    tc = coset_enumeration(lc_presentation(4))
    reps = tc.representatives()
    r = congruence_classes(lc_presentation(4), 6)
    assert sorted(map(str, reps)) == sorted(map(str, r.representatives))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_canonical_forms_match_oracle_classes(n):
    r = congruence_classes(lc_presentation(n), 6)
    seen = {}
    for x in words_up_to(n, 6):
        f = canonicalize(x)
        assert seen.setdefault(r.label(x), f) == f
    assert len(set(seen.values())) == r.num_classes


def test_word_index_round_trip():
    for idx in range(200):
        assert word_index(word_at(idx, 3), 3) == idx
