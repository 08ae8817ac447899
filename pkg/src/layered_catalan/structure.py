"""Idempotents, plus/star, the relations << and sharp, and the structural checkers.

Each predicate comes in two flavours: an algebraic one evaluated in the
multiplication table, and a combinatorial one read off the segments of the
canonical forms.  The checkers compare the two and test the
transitivity/smoothness conditions that the determinant factorization needs.

Zero conventions: plus(0) = star(0) = 0, so 0 << v for every v; the zero is
left out of the << poset and out of the L~/R~ sets.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass, field

import numpy as np

from .canon import Segment, Shape
from .monoid import Element, MonoidUniverse
from .words import Word, cdist

Ref = Element | int


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class PlusStarDecomposition:
    w_I: int
    n_left: int
    n_right: int
    I_W: frozenset[int]
    N_W: frozenset[int]


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int = 0
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def _id(u: MonoidUniverse, x: Ref) -> int:
    return u.id_of(x)


def segments_of(u: MonoidUniverse, i: int) -> tuple[Segment, ...]:
    return u.elements[i].segments


def _is_blocker(s: Segment) -> bool:
    return s.shape is Shape.BLOCKER


def _seg_len(s: Segment, n: int) -> int:
    return len(s.render(n))


# -- per-universe tables --------------------------------------------------------

class _Tables:
    """Plus, star, idempotents and the << / sharp matrices of one universe."""

    def __init__(self, u: MonoidUniverse):
        self.u = u
        m = u.mult.astype(np.int64)
        self.m = m
        size = u.size
        ids = np.arange(size)
        self.idempotent = m[ids, ids] == ids
        plus = np.empty(size, dtype=np.int64)
        star = np.empty(size, dtype=np.int64)
        for i in range(size):
            d = decompose(u, i)
            plus[i] = u.mul(d.w_I, d.n_left)
            star[i] = u.mul(d.w_I, d.n_right)
        self.plus = plus
        self.star = star
        # w << v  iff  w+ v w* = w
        left = m[plus, :]
        self.ll = m[left, star[:, None]] == ids[:, None]
        prod = m
        self.sharp = ((star[:, None] == plus[None, :])
                      & (plus[prod] == plus[:, None])
                      & (star[prod] == star[None, :]))
        if u.zero_id is not None:
            self.sharp[u.zero_id, :] = False
            self.sharp[:, u.zero_id] = False
        self.nonzero = np.array(u.nonzero_ids, dtype=np.int64)


_CACHE: "weakref.WeakKeyDictionary[MonoidUniverse, _Tables]" = weakref.WeakKeyDictionary()


def tables(u: MonoidUniverse) -> _Tables:
    t = _CACHE.get(u)
    if t is None:
        t = _Tables(u)
        _CACHE[u] = t
    return t


# -- idempotents, plus and star ---------------------------------------------------

def decompose(u: MonoidUniverse, w: Ref) -> PlusStarDecomposition:
    """W^(I), N^l_W and N^r_W from the segments of w."""
    i = _id(u, w)
    n = u.rank
    if u.is_zero(i):
        z = i
        return PlusStarDecomposition(z, z, z, frozenset(), frozenset())
    segs = segments_of(u, i)
    I = frozenset(k for k, s in enumerate(segs) if not _is_blocker(s))
    N = frozenset(k for k, s in enumerate(segs) if _is_blocker(s))
    w_I = Word(sum((segs[k].render(n) for k in sorted(I)), ()), n)
    left = Word(tuple(segs[k].start for k in sorted(N)), n)
    right = Word(tuple(segs[k].end for k in sorted(N)), n)
    return PlusStarDecomposition(u.id_of(w_I), u.id_of(left), u.id_of(right), I, N)


def is_idempotent(u: MonoidUniverse, e: Ref) -> bool:
    i = _id(u, e)
    result = u.mul(i, i) == i
    if not u.is_zero(i) and i != u.identity_id:
        by_segments = not any(_is_blocker(s) for s in segments_of(u, i))
        if by_segments != result:
            raise StructureError(f"idempotency of {u.label(i)} disagrees with its segments")
    return result


def idempotents(u: MonoidUniverse, include_zero: bool = False) -> list[int]:
    t = tables(u)
    return [int(i) for i in np.nonzero(t.idempotent)[0] if include_zero or not u.is_zero(int(i))]


def plus(u: MonoidUniverse, w: Ref) -> Element:
    return u.element(int(tables(u).plus[_id(u, w)]))


def star(u: MonoidUniverse, w: Ref) -> Element:
    return u.element(int(tables(u).star[_id(u, w)]))


def idempotent_leq(u: MonoidUniverse, e: int, f: int) -> bool:
    return u.mul(e, f) == e and u.mul(f, e) == e


def _minimum(u: MonoidUniverse, candidates: list[int]) -> int:
    for e in candidates:
        if all(idempotent_leq(u, e, f) for f in candidates):
            return e
    raise StructureError("stabilizing idempotents have no minimum")


def plus_bruteforce(u: MonoidUniverse, w: Ref) -> Element:
    """Minimum idempotent e with e.w = w."""
    i = _id(u, w)
    cands = [e for e in idempotents(u, include_zero=True) if u.mul(e, i) == i]
    return u.element(_minimum(u, cands))


def star_bruteforce(u: MonoidUniverse, w: Ref) -> Element:
    """Minimum idempotent e with w.e = w."""
    i = _id(u, w)
    cands = [e for e in idempotents(u, include_zero=True) if u.mul(i, e) == i]
    return u.element(_minimum(u, cands))


# -- the relation << ---------------------------------------------------------------

def ll(u: MonoidUniverse, w: Ref, v: Ref, check: bool = False) -> bool:
    """w << v, i.e. w+ v w* = w."""
    i, j = _id(u, w), _id(u, v)
    result = bool(tables(u).ll[i, j])
    if check and not u.is_zero(i) and not u.is_zero(j):
        if ll_combinatorial(u, i, j) != result:
            raise StructureError(f"<< characterizations disagree on ({u.label(i)}, {u.label(j)})")
    return result


def _covered_by_I(u: MonoidUniverse, seg: Segment, wsegs) -> bool:
    n = u.rank
    return any(not _is_blocker(s) and s.covers(seg, n) for s in wsegs)


def ll_combinatorial(u: MonoidUniverse, w: Ref, v: Ref) -> bool:
    """Segment-cover test for w << v (w, v non-zero)."""
    i, j = _id(u, w), _id(u, v)
    if u.is_zero(i) or u.is_zero(j):
        raise StructureError("combinatorial << is only defined for non-zero elements")
    n = u.rank
    wsegs = segments_of(u, i)
    blocker_starts = {s.start for s in wsegs if _is_blocker(s)}
    blocker_ends = {s.end for s in wsegs if _is_blocker(s)}
    for vk in segments_of(u, j):
        if _covered_by_I(u, vk, wsegs):
            continue
        if _is_blocker(vk):
            if vk.start in blocker_starts:
                continue
            return False
        if vk.span(n) == 0 and (vk.start in blocker_starts or vk.start in blocker_ends):
            continue
        return False
    return True


# -- the relation sharp ------------------------------------------------------------

def sharp_nonzero(u: MonoidUniverse, w: Ref, v: Ref, check: bool = False) -> bool:
    """w* = v+, (wv)+ = w+ and (wv)* = v*."""
    i, j = _id(u, w), _id(u, v)
    if u.is_zero(i) or u.is_zero(j):
        raise StructureError("sharp is only defined for non-zero elements")
    result = bool(tables(u).sharp[i, j])
    if check and sharp_combinatorial(u, i, j) != result:
        raise StructureError(f"sharp characterizations disagree on ({u.label(i)}, {u.label(j)})")
    return result


def _half_sharp(n: int, wsegs, vsegs, left: bool) -> bool:
    # conditions on the segments of w, given v (left=True), or the mirror image
    for wk in wsegs:
        if _is_blocker(wk):
            target = wk.end if left else wk.start
            ok = any(not _is_blocker(s) and _seg_len(s, n) == 1 and s.start == target for s in vsegs)
        elif _seg_len(wk, n) > 1:
            ok = wk in vsegs
        else:
            ok = wk in vsegs or any(
                _is_blocker(s) and (s.start if left else s.end) == wk.start for s in vsegs)
        if not ok:
            return False
    return True


def sharp_combinatorial(u: MonoidUniverse, w: Ref, v: Ref) -> bool:
    """Segment matching test for sharp.

    Agrees with :func:`sharp_nonzero` for n <= 6.  From n = 7 on it also
    accepts pairs whose product fuses a blocker of w with a segment of v
    across a one-letter gap (a1a4a5 . a1a2a5 = a1a3a5 at n = 7), so there it
    is only a necessary condition.
    """
    i, j = _id(u, w), _id(u, v)
    if u.is_zero(i) or u.is_zero(j):
        raise StructureError("sharp is only defined for non-zero elements")
    n = u.rank
    wsegs, vsegs = segments_of(u, i), segments_of(u, j)
    return _half_sharp(n, wsegs, vsegs, True) and _half_sharp(n, vsegs, wsegs, False)


def star_product(u: MonoidUniverse, s: Ref, t: Ref) -> Element | None:
    """Entry of the (S, *) table: st when s* = t+, (st)+ = s+, (st)* = t*; else None."""
    i, j = _id(u, s), _id(u, t)
    tb = tables(u)
    st = u.mul(i, j)
    if tb.star[i] == tb.plus[j] and tb.plus[st] == tb.plus[i] and tb.star[st] == tb.star[j]:
        if u.is_zero(st):
            return None
        return u.element(st)
    return None


def n_prime_sets(u: MonoidUniverse, w: Ref, v: Ref) -> tuple[frozenset[int], frozenset[int]]:
    """(N'_(W,V), N''_(W,V)) as sets of segment indices of w."""
    i, j = _id(u, w), _id(u, v)
    if u.is_zero(i) or u.is_zero(j) or not ll(u, i, j):
        raise StructureError(f"{u.label(i)} << {u.label(j)} does not hold")
    n = u.rank
    wsegs, vsegs = segments_of(u, i), segments_of(u, j)
    singles = {s.start for s in vsegs if not _is_blocker(s) and s.span(n) == 0}
    vblock = {s.start for s in vsegs if _is_blocker(s)}
    blockers = [k for k, s in enumerate(wsegs) if _is_blocker(s)]
    prime = frozenset(k for k in blockers if wsegs[k].end in singles or wsegs[k].start in vblock)
    return prime, frozenset(blockers) - prime


# -- phi ----------------------------------------------------------------------------

def phi(u: MonoidUniverse, a: Ref, b: Ref) -> Element:
    tb = tables(u)
    i, j = _id(u, a), _id(u, b)
    return u.element(int(tb.plus[u.mul(int(tb.star[i]), j)]))


def phi_fix(u: MonoidUniverse, a: Ref, b: Ref, with_steps: bool = False):
    """Iterate x -> (a x)*, then x -> (x b)+, from phi(a, b) until stable."""
    tb = tables(u)
    i, j = _id(u, a), _id(u, b)
    x = phi(u, i, j).id
    for step in range(u.size + 1):
        y = int(tb.star[u.mul(i, x)])
        z = int(tb.plus[u.mul(y, j)])
        if y == x and z == x:
            return (u.element(x), step) if with_steps else u.element(x)
        x = z
    raise StructureError("phi fixpoint iteration did not terminate")


# -- checkers -----------------------------------------------------------------------

def check_singleton_rich(u: MonoidUniverse) -> CheckReport:
    tb = tables(u)
    for i in u.nonzero_ids:
        if u.mul(int(tb.plus[i]), int(tb.star[i])) != i:
            return CheckReport("singleton_rich", False, i, {"w": u.label(i)})
    return CheckReport("singleton_rich", True, len(u.nonzero_ids))


def check_plus_star_laws(u: MonoidUniverse, bruteforce: bool = True) -> CheckReport:
    tb = tables(u)
    for i in u.nonzero_ids:
        p, s = int(tb.plus[i]), int(tb.star[i])
        if u.mul(p, i) != i or u.mul(i, s) != i or u.mul(p, s) != i:
            return CheckReport("plus_star", False, i, {"w": u.label(i), "law": "stabilizer"})
        if bruteforce and (plus_bruteforce(u, i).id != p or star_bruteforce(u, i).id != s):
            return CheckReport("plus_star", False, i, {"w": u.label(i), "law": "minimum"})
    return CheckReport("plus_star", True, len(u.nonzero_ids))


def check_ll_characterization(u: MonoidUniverse) -> CheckReport:
    tb = tables(u)
    nz = u.nonzero_ids
    for i in nz:
        for j in nz:
            if ll_combinatorial(u, i, j) != bool(tb.ll[i, j]):
                return CheckReport("ll_characterization", False, 0,
                                   {"w": u.label(i), "v": u.label(j), "algebraic": bool(tb.ll[i, j])})
    return CheckReport("ll_characterization", True, len(nz) ** 2)


def check_sharp_characterization(u: MonoidUniverse) -> CheckReport:
    tb = tables(u)
    nz = u.nonzero_ids
    for i in nz:
        for j in nz:
            if sharp_combinatorial(u, i, j) != bool(tb.sharp[i, j]):
                return CheckReport("sharp_characterization", False, 0,
                                   {"w": u.label(i), "v": u.label(j), "algebraic": bool(tb.sharp[i, j])})
    return CheckReport("sharp_characterization", True, len(nz) ** 2)


def _ll_nonzero(u: MonoidUniverse) -> tuple[np.ndarray, np.ndarray]:
    tb = tables(u)
    nz = tb.nonzero
    return nz, tb.ll[np.ix_(nz, nz)]


def check_ll_transitive(u: MonoidUniverse) -> CheckReport:
    nz, L = _ll_nonzero(u)
    Li = L.astype(np.int64)
    closure = (Li @ Li) > 0
    bad = np.argwhere(closure & ~L)
    if bad.size:
        a, c = bad[0]
        b = int(np.nonzero(L[a] & L[:, c])[0][0])
        return CheckReport("ll_transitive", False, int(L.sum()),
                           {"w": u.label(int(nz[a])), "v": u.label(int(nz[b])), "x": u.label(int(nz[c]))})
    return CheckReport("ll_transitive", True, int(L.sum()))


def check_ll_antisymmetric(u: MonoidUniverse) -> CheckReport:
    nz, L = _ll_nonzero(u)
    both = L & L.T
    np.fill_diagonal(both, False)
    bad = np.argwhere(both)
    if bad.size:
        a, b = bad[0]
        return CheckReport("ll_antisymmetric", False, int(L.sum()),
                           {"w": u.label(int(nz[a])), "v": u.label(int(nz[b]))})
    reflexive = bool(np.all(np.diag(L)))
    return CheckReport("ll_antisymmetric", reflexive, int(L.sum()),
                       None if reflexive else {"reason": "not reflexive"})


def _smooth_condition_arrays(u: MonoidUniverse):
    tb = tables(u)
    m = tb.m
    nz = tb.nonzero
    up = {int(s): nz[tb.ll[s, nz]] for s in nz}
    return tb, m, nz, up


def check_ll_smooth(u: MonoidUniverse, samples: int | None = None, seed: int = 0) -> CheckReport:
    """Conditions (1)-(3) over chains s'' << s' << s and t'' << t' << t.

    Without ``samples`` every chain pair is covered; the conditions only
    involve a few chain members at once, so the scan factors through those.
    With ``samples`` that many random chain pairs are drawn instead.
    """
    if samples is not None:
        return _smooth_sampled(u, samples, seed)
    tb, m, nz, up = _smooth_condition_arrays(u)
    plus, star = tb.plus, tb.star
    checked = 0
    max_steps = 0
    # condition (3): only the s-chain is involved
    for s2 in nz:
        s2 = int(s2)
        ups = up[s2]
        fixes = m[s2, star[m[plus[s2], ups]]] == s2
        for a_idx, s1 in enumerate(ups):
            above = tb.ll[s1, ups]
            checked += int(above.sum())
            bad = above & fixes & ~fixes[a_idx]
            if bad.any():
                s = int(ups[np.nonzero(bad)[0][0]])
                return CheckReport("ll_smooth", False, checked,
                                   {"condition": 3, "s2": u.label(s2), "s1": u.label(int(s1)), "s": u.label(s)})
    # conditions (1) and (2): need s'' sharp t''
    for s2 in nz:
        s2 = int(s2)
        a = m[plus[s2], up[s2]]  # s''+ s' for each s'
        x = star[a]
        for t2 in nz[tb.sharp[s2, nz]]:
            t2 = int(t2)
            upt = up[t2]
            b = m[upt, star[t2]]  # t' t''* for each t'
            ph = plus[m[x[:, None], b[None, :]]]
            cur = ph.copy()
            for step in range(u.size + 1):
                y = star[m[a[:, None], cur]]
                z = plus[m[y, b[None, :]]]
                if np.array_equal(y, cur) and np.array_equal(z, cur):
                    max_steps = max(max_steps, step)
                    break
                cur = z
            else:
                return CheckReport("ll_smooth", False, checked, {"condition": 1, "reason": "no fixpoint"})
            checked += ph.size
            if not np.array_equal(cur, ph):
                p, q = np.argwhere(cur != ph)[0]
                return CheckReport("ll_smooth", False, checked,
                                   {"condition": 1, "s2": u.label(s2), "s1": u.label(int(up[s2][p])),
                                    "t2": u.label(t2), "t1": u.label(int(upt[q]))})
            # (2): x t' t''* = t''  iff  x t t''* = t''
            hit = m[m[x[:, None], upt[None, :]], star[t2]] == t2
            for q, t1 in enumerate(upt):
                above = tb.ll[t1, upt]
                checked += int(above.sum()) * len(x)
                diff = (hit[:, [q]] != hit) & above[None, :]
                if diff.any():
                    p, r = np.argwhere(diff)[0]
                    return CheckReport("ll_smooth", False, checked,
                                       {"condition": 2, "s2": u.label(s2), "s1": u.label(int(up[s2][p])),
                                        "t2": u.label(t2), "t1": u.label(int(t1)), "t": u.label(int(upt[r]))})
    return CheckReport("ll_smooth", True, checked, details={"max_phi_steps": max_steps})


def ll_chains(u: MonoidUniverse) -> np.ndarray:
    """All triples (s'', s', s) of non-zero elements with s'' << s' << s."""
    nz, L = _ll_nonzero(u)
    idx = np.argwhere(L[:, :, None] & L[None, :, :])
    return nz[idx]


def _smooth_sampled(u: MonoidUniverse, samples: int, seed: int) -> CheckReport:
    tb = tables(u)
    m, plus, star = tb.m, tb.plus, tb.star
    chains = ll_chains(u)
    rng = np.random.default_rng(seed)
    batch = 200_000
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        sc = chains[rng.integers(len(chains), size=k)]
        tc = chains[rng.integers(len(chains), size=k)]
        s2, s1, s = sc.T
        t2, t1, t = tc.T
        a = m[plus[s2], s1]
        b = m[t1, star[t2]]
        # (3)
        bad3 = (m[s2, star[m[plus[s2], s]]] == s2) & (m[s2, star[a]] != s2)
        sharp = tb.sharp[s2, t2]
        # (1)
        ph = plus[m[star[a], b]]
        cur = ph.copy()
        for _ in range(u.size + 1):
            y = star[m[a, cur]]
            z = plus[m[y, b]]
            if np.array_equal(y, cur) and np.array_equal(z, cur):
                break
            cur = z
        bad1 = sharp & (cur != ph)
        # (2)
        x = star[a]
        lhs = m[m[x, t1], star[t2]] == t2
        rhs = m[m[x, t], star[t2]] == t2
        bad2 = sharp & (lhs != rhs)
        for cond, bad in ((1, bad1), (2, bad2), (3, bad3)):
            if bad.any():
                r = int(np.nonzero(bad)[0][0])
                return CheckReport("ll_smooth", False, done + r, {
                    "condition": cond,
                    "s_chain": [u.label(int(v)) for v in sc[r]],
                    "t_chain": [u.label(int(v)) for v in tc[r]],
                })
        done += k
    return CheckReport("ll_smooth", True, done, details={"sampled": True, "seed": seed, "chains": len(chains)})


# -- L~ and R~ --------------------------------------------------------------------

def _require_idempotent(u: MonoidUniverse, e: int) -> None:
    if u.is_zero(e) or not is_idempotent(u, e):
        raise StructureError(f"{u.label(e)} is not a non-zero idempotent")


def l_tilde(u: MonoidUniverse, e: Ref) -> list[Element]:
    """Non-zero s with s* = e."""
    i = _id(u, e)
    _require_idempotent(u, i)
    tb = tables(u)
    return [u.element(int(s)) for s in tb.nonzero if tb.star[s] == i]


def r_tilde(u: MonoidUniverse, e: Ref) -> list[Element]:
    """Non-zero s with s+ = e."""
    i = _id(u, e)
    _require_idempotent(u, i)
    tb = tables(u)
    return [u.element(int(s)) for s in tb.nonzero if tb.plus[s] == i]


def _gaps(segs, n: int) -> list[tuple[int, int]]:
    """Letters missing before and after each segment, walking the circle."""
    if len(segs) == 1:
        g = n - segs[0].span(n) - 1
        return [(g, g)]
    out = []
    m = len(segs)
    for k, s in enumerate(segs):
        prev, nxt = segs[k - 1], segs[(k + 1) % m]
        out.append((cdist(prev.end, s.start, n) - 1, cdist(s.end, nxt.start, n) - 1))
    return out


def l_tilde_count_formula(u: MonoidUniverse, e: Ref) -> tuple[int, int]:
    """(2**l1, 2**l2) from the singleton segments of e and the gaps around them."""
    i = _id(u, e)
    _require_idempotent(u, i)
    if i == u.identity_id:
        return 1, 1
    n = u.rank
    segs = segments_of(u, i)
    # a singleton can become the far end of a blocker when the freed letter
    # still leaves a gap of two; with three letters the gap needed is smaller
    need = 2 if n == 3 else 3
    l1 = l2 = 0
    for s, (before, after) in zip(segs, _gaps(segs, n)):
        if s.span(n) != 0:
            continue
        l1 += before >= need
        l2 += after >= need
    return 2 ** l1, 2 ** l2


# -- identities -----------------------------------------------------------------------

MAX_ASSIGNMENTS = 20_000_000


def _parse_term(term: str | list[str]) -> list[str]:
    if isinstance(term, str):
        term = term.strip()
        term = term.replace("*", ".").split(".")
    # "1" is the identity, not a variable
    return [t for t in term if t and t != "1"]


def verify_identity(u: MonoidUniverse, lhs: str | list[str], rhs: str | list[str]) -> bool:
    """True iff lhs = rhs for every assignment of the variables in u."""
    left, right = _parse_term(lhs), _parse_term(rhs)
    names = sorted(set(left) | set(right))
    if u.size ** len(names) > MAX_ASSIGNMENTS:
        raise MemoryError(f"{u.size}^{len(names)} assignments exceed the cap")
    m = u.mult.astype(np.int64)
    if not names:
        return True
    grids = np.meshgrid(*[np.arange(u.size)] * len(names), indexing="ij")
    env = {name: g.ravel() for name, g in zip(names, grids)}
    count = env[names[0]].size

    def evaluate(term: list[str]) -> np.ndarray:
        out = np.full(count, u.identity_id, dtype=np.int64)
        for name in term:
            out = m[out, env[name]]
        return out

    return bool(np.array_equal(evaluate(left), evaluate(right)))


def ll_edges(u: MonoidUniverse) -> list[tuple[int, int]]:
    """Pairs (t, s) of non-zero ids with t << s and t != s."""
    nz, L = _ll_nonzero(u)
    return [(int(nz[a]), int(nz[b])) for a, b in itertools.product(range(len(nz)), repeat=2)
            if a != b and L[a, b]]
