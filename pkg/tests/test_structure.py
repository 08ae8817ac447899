import itertools

import numpy as np
import pytest

from layered_catalan import structure as S
from layered_catalan.words import Word


def test_idempotents(lc):
    u = lc(7)
    assert S.is_idempotent(u, u.get("a1.a3"))
    assert not S.is_idempotent(u, u.get("a1.a2"))
    assert S.is_idempotent(u, u.identity)


class TestPlusStar:
    def test_blocker(self, lc):
        u = lc(7)
        for i in range(1, 8):
            j = i % 7 + 1
            b = u.get(Word.of(7, i, j))
            assert S.plus(u, b).id == u.id_of(Word.of(7, i))
            assert S.star(u, b).id == u.id_of(Word.of(7, j))

    def test_idempotent_fixed(self, lc):
        u = lc(6)
        for e in S.idempotents(u):
            assert S.plus(u, e).id == S.star(u, e).id == e

    def test_mixed(self, lc):
        u = lc(7)
        w = u.get("a1.a2.a5")
        assert S.plus(u, w).id == u.id_of("a1.a5") == S.plus_bruteforce(u, w).id
        assert S.star(u, w).id == u.id_of("a2.a5") == S.star_bruteforce(u, w).id

    @pytest.mark.parametrize("n", range(2, 8))
    def test_laws(self, lc, n):
        assert S.check_plus_star_laws(lc(n), bruteforce=n <= 6)

    def test_decomposition_commutes(self, lc):
        u = lc(8)
        for i in u.nonzero_ids:
            d = S.decompose(u, i)
            assert d.I_W | d.N_W == set(range(len(u.elements[i].segments)))
            assert not d.I_W & d.N_W
            assert u.mul(d.w_I, d.n_left) == u.mul(d.n_left, d.w_I)
            assert u.mul(d.w_I, d.n_right) == u.mul(d.n_right, d.w_I)


class TestLL:
    def test_reflexive(self, lc):
        u = lc(7)
        assert all(S.ll(u, i, i) for i in range(u.size))

    def test_examples(self, lc):
        u = lc(7)
        assert S.ll(u, "a1.a3", "a2", check=True)
        assert not S.ll(u, "a1", "a3", check=True)
        assert not S.ll(u, "a1.a3", "a5", check=True)

    def test_zero_below_everything(self, lc):
        u = lc(5)
        assert all(S.ll(u, u.zero_id, v) for v in range(u.size))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_characterization(self, lc, n):
        assert S.check_ll_characterization(lc(n))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_partial_order(self, lc, n):
        assert S.check_ll_transitive(lc(n))
        assert S.check_ll_antisymmetric(lc(n))


class TestSharp:
    def test_idempotent_with_itself(self, lc):
        u = lc(6)
        assert all(S.sharp_nonzero(u, e, e, check=True) for e in S.idempotents(u))

    def test_dot_in_block(self, lc):
        u = lc(8)
        assert not S.sharp_nonzero(u, "a1.a4.a5", "a1.a2.a5")

    @pytest.mark.parametrize("n", range(2, 7))
    def test_characterization(self, lc, n):
        assert S.check_sharp_characterization(lc(n))

    def test_segment_test_is_loose_from_seven(self, lc):
        u = lc(7)
        a, b = u.id_of("a1.a4.a5"), u.id_of("a1.a2.a5")
        assert S.sharp_combinatorial(u, a, b)
        assert not S.sharp_nonzero(u, a, b)
        assert str(u.element(u.mul(a, b))) == "a1.a3.a5"

    def test_zero_rejected(self, lc):
        u = lc(4)
        with pytest.raises(S.StructureError):
            S.sharp_nonzero(u, u.zero_id, 0)


class TestStarProduct:
    def test_idempotent(self, lc):
        u = lc(6)
        for e in S.idempotents(u):
            assert S.star_product(u, e, e).id == e

    def test_block_entries(self, lc):
        u = lc(8)
        assert S.star_product(u, "a1.a4.a5", "a1.a2.a5") is None
        # a8.a1.a5.a6 fuses into the run a5.a7.a1 when n = 8
        assert S.star_product(u, "a5.a8.a1", "a1.a5.a6") is None
        u9 = lc(9)
        assert str(S.star_product(u9, "a5.a9.a1", "a1.a5.a6")) == "a9.a1.a5.a6"


class TestNPrime:
    def test_self(self, lc):
        u = lc(7)
        for w in u.nonzero_ids:
            prime, rest = S.n_prime_sets(u, w, w)
            assert not rest

    def test_idempotent(self, lc):
        u = lc(7)
        for e in S.idempotents(u):
            assert S.n_prime_sets(u, e, e) == (frozenset(), frozenset())

    def test_requires_ll(self, lc):
        u = lc(7)
        with pytest.raises(S.StructureError):
            S.n_prime_sets(u, "a1", "a3")

    @pytest.mark.parametrize("n", range(2, 7))
    def test_nested(self, lc, n):
        u = lc(n)
        for w2, w1, w in S.ll_chains(u):
            assert S.n_prime_sets(u, w2, w)[0] <= S.n_prime_sets(u, w2, w1)[0]


class TestPhi:
    def test_idempotent(self, lc):
        u = lc(6)
        for e in S.idempotents(u):
            assert S.phi(u, e, e).id == e == S.phi_fix(u, e, e).id

    @pytest.mark.parametrize("n", range(2, 7))
    def test_fast_fixpoint(self, lc, n):
        u = lc(n)
        rng = np.random.default_rng(n)
        for a, b in rng.integers(u.size, size=(500, 2)):
            _, steps = S.phi_fix(u, int(a), int(b), with_steps=True)
            assert steps <= 3


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_checkers_exhaustive(lc, n):
    u = lc(n)
    assert S.check_ll_transitive(u)
    assert S.check_singleton_rich(u)
    assert S.check_ll_smooth(u)


@pytest.mark.parametrize("n", [6, 7])
def test_smooth_sampled(lc, n):
    rep = S.check_ll_smooth(lc(n), samples=200_000, seed=n)
    assert rep.passed and rep.checked == 200_000


class TestTilde:
    def test_a1a5_sets(self, lc):
        u = lc(8)
        assert [str(x) for x in S.l_tilde(u, "a1.a5")] == ["a1.a5", "a1.a4.a5", "a8.a1.a5", "a8.a1.a4.a5"]
        assert [str(x) for x in S.r_tilde(u, "a1.a5")] == ["a1.a5", "a1.a2.a5", "a1.a5.a6", "a1.a2.a5.a6"]
        assert S.l_tilde_count_formula(u, "a1.a5") == (4, 4)

    def test_identity(self, lc):
        u = lc(5)
        assert [x.id for x in S.l_tilde(u, u.identity)] == [u.identity_id]

    def test_long_run(self, lc):
        u = lc(7)
        assert S.l_tilde_count_formula(u, "a1.a3") == (1, 1)

    def test_rank_seven_pair(self, lc):
        u = lc(7)
        assert S.l_tilde_count_formula(u, "a1.a5") == (2, 2)
        assert len(S.l_tilde(u, "a1.a5")) == len(S.r_tilde(u, "a1.a5")) == 2

    def test_rejects_non_idempotent(self, lc):
        u = lc(6)
        with pytest.raises(S.StructureError):
            S.l_tilde(u, "a1.a2")
        with pytest.raises(S.StructureError):
            S.r_tilde(u, u.zero_id)

    @pytest.mark.parametrize("n", range(3, 10))
    def test_counting_formula(self, lc, n):
        u = lc(n)
        for e in S.idempotents(u):
            assert S.l_tilde_count_formula(u, e) == (len(S.l_tilde(u, e)), len(S.r_tilde(u, e)))


class TestIdentities:
    def test_lc2_idempotent(self, lc):
        assert S.verify_identity(lc(2), "x.x", "x")

    def test_lc2_commutative(self, lc):
        u = lc(2)
        expected = all(u.mul(a, b) == u.mul(b, a) for a, b in itertools.product(range(u.size), repeat=2))
        assert S.verify_identity(u, "x.y", "y.x") == expected

    def test_unit(self, lc):
        assert S.verify_identity(lc(4), "x.1", "x")

    def test_blockers_fail_idempotency(self, lc):
        assert not S.verify_identity(lc(3), "x.x", "x")

    def test_cap(self, lc):
        with pytest.raises(MemoryError):
            S.verify_identity(lc(8), "x.y.z.t", "t.z.y.x")
