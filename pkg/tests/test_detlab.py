import numpy as np
import pytest

from layered_catalan import detlab as D
from layered_catalan.structure import idempotents


def _rand(u, seed, hi=50):
    return [int(v) for v in np.random.default_rng(seed).integers(1, hi, size=u.size)]


class TestTables:
    def test_lc1(self, lc):
        u = lc(1)
        t = D.cayley_table(u)
        assert t.labels(u) == [["a1", "a1"], ["a1", "1"]]
        x = {u.id_of("a1"): 2, u.identity_id: 5}
        assert D.det_exact(t, x) == 6

    def test_lc2_contracted(self, lc):
        u = lc(2)
        assert D.contracted_cayley(u).labels(u) == [["a1", ".", "a1"], [".", "a2", "a2"], ["a1", "a2", "1"]]

    def test_display_order(self, lc):
        u = lc(4)
        order = D.display_order(u)
        assert order[0] == u.zero_id and order[-1] == u.identity_id
        assert sorted(order) == list(range(u.size))

    def test_no_zero(self, lc):
        with pytest.raises(ValueError):
            D.contracted_cayley(lc(1))

    def test_csv(self, lc):
        u = lc(2)
        lines = D.contracted_cayley(u).to_csv(u).splitlines()
        assert lines[0] == ",a1,a2,1"
        assert lines[1] == "a1,a1,.,a1"


class TestSymbolic:
    def test_lc2_contracted(self, lc):
        u = lc(2)
        p = D.det_symbolic(D.contracted_cayley(u))
        one, a1, a2 = (D.SparsePoly.var(u.id_of(s)) for s in ("1", "a1", "a2"))
        assert p == one * a1 * a2 - a1 * a2 * a2 - a1 * a1 * a2
        assert p.is_homogeneous(3)

    @pytest.mark.parametrize("n", [2, 3])
    def test_agrees_with_numeric(self, lc, n):
        u = lc(n)
        t = D.contracted_cayley(u)
        if t.dim > D.SYMBOLIC_CAP:
            pytest.skip("too large to expand")
        p = D.det_symbolic(t)
        for seed in range(5):
            x = _rand(u, seed)
            assert p.evaluate(x) == D.det_exact(t, x)

    def test_cap(self, lc):
        with pytest.raises(MemoryError):
            D.det_symbolic(D.cayley_table(lc(4)))

    def test_block_one_by_one(self, lc):
        u = lc(4)
        b = D.star_block(u, u.identity_id)
        assert b.shape == (1, 1)
        assert D.det_symbolic(b) == D.SparsePoly.var(u.identity_id)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_methods_agree(lc, n):
    u = lc(n)
    t = D.cayley_table(u)
    for seed in range(3):
        x = _rand(u, seed)
        exact = D.det_exact(t, x)
        assert exact % D.CERT_PRIME == D.det_exact(t, x, method="modp")
        assert exact % D.TRIAL_PRIME == D.det_exact(t, x, method="modp", modulus=D.TRIAL_PRIME)


def test_homogeneous_numeric(lc):
    u = lc(3)
    t = D.cayley_table(u)
    x = _rand(u, 7)
    assert D.det_exact(t, [3 * v for v in x]) == 3 ** t.dim * D.det_exact(t, x)


def test_bad_method(lc):
    with pytest.raises(ValueError):
        D.det_exact(D.cayley_table(lc(1)), [1, 1], method="lu")


class TestMobius:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_interval_sums(self, lc, n):
        assert D.mobius_interval_check(lc(n))

    def test_diagonal_and_covers(self, lc):
        u = lc(4)
        m = D.mobius(u)
        for s in m.order:
            assert m(s, s) == 1
        from layered_catalan.structure import ll_edges
        edges = set(ll_edges(u))
        for t, s in edges:
            between = [r for r in m.order if (t, r) in edges and (r, s) in edges]
            if not between:
                assert m(t, s) == -1

    @pytest.mark.parametrize("n", range(2, 7))
    def test_unitriangular(self, lc, n):
        _, mat = D.y_substitution(lc(n))
        assert D.is_unitriangular(mat)

    def test_round_trip(self, lc):
        u = lc(4)
        order, mat = D.y_substitution(u)
        x = _rand(u, 3)
        y = D.apply_substitution(order, mat, x, u.size)
        inv = np.rint(np.linalg.inv(mat)).astype(np.int64)
        back = D.apply_substitution(order, inv, y, u.size)
        assert [back[s] for s in order] == [x[s] for s in order]


class TestTheta:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_nonzero(self, lc, n):
        r = D.theta_nonzero(lc(n), seed=1)
        assert r.verdict is D.Verdict.NONZERO
        assert r.value

    def test_zero_certified(self, lc):
        r = D.theta_nonzero(lc(8), trials=2)
        assert r.verdict is D.Verdict.ZERO
        assert r.block["e"] == "a1.a5"

    def test_reproducible(self, lc):
        u = lc(4)
        assert D.theta_nonzero(u, seed=9).to_json() == D.theta_nonzero(u, seed=9).to_json()

    def test_small_modulus(self, lc):
        with pytest.raises(ValueError):
            D.theta_nonzero(lc(3), modulus=101)


class TestBlocks:
    def test_rank_eight(self, lc):
        u = lc(8)
        b = D.star_block(u, "a1.a5")
        assert b.shape == (4, 4)
        assert b.zero_count() == 9
        assert D.det_symbolic(b).is_zero()

    def test_rank_nine(self, lc):
        u = lc(9)
        b = D.star_block(u, "a1.a5")
        assert b.zero_count() == 8
        # rows a1.a4.a5 and a9.a1.a4.a5 only meet the first column
        assert D.det_symbolic(b).is_zero()

    def test_json(self, lc):
        u = lc(8)
        js = D.block_table_json(u, "a1.a5")
        assert js["e"] == "a1.a5" and js["dots"] == 9
        assert js["rows"] == ["a1.a5", "a1.a4.a5", "a8.a1.a5", "a8.a1.a4.a5"]


@pytest.mark.parametrize("n,sign", [(1, 1), (2, 1), (3, 1), (4, -1)])
def test_factorization(lc, n, sign):
    u = lc(n)
    for seed in range(20):
        r = D.factorization_check(u, _rand(u, seed, 10**6))
        assert r.holds and r.sign == sign


@pytest.mark.parametrize("n", [2, 3, 4])
def test_contraction(lc, n):
    u = lc(n)
    for seed in range(20):
        assert D.contraction_check(u, _rand(u, seed))


def test_contraction_modular(lc):
    u = lc(5)
    assert D.contraction_check(u, _rand(u, 0, 10**9), modulus=D.CERT_PRIME)


def test_block_count(lc):
    u = lc(5)
    assert len(idempotents(u)) == len([e for e in idempotents(u) if D.star_block(u, e).shape[0] >= 1])
