"""Brute-force congruence engines over finite monoid presentations.

Nothing here knows about canonical forms: the defining relations are the only
input, so these results serve as ground truth for :mod:`canon` and
:mod:`monoid`.

Two engines are provided:

* :func:`congruence_classes` runs union-find over an explicit arena of all
  words up to a length bound (the hot loop lives in :mod:`kernels`);
* :func:`coset_enumeration` is monoid Todd-Coxeter, which is exact for finite
  monoids and needs no length bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .words import Word, cyc

Relation = tuple[tuple[int, ...], tuple[int, ...]]

MAX_ARENA_WORDS = 40_000_000


@dataclass(frozen=True)
class Presentation:
    rank: int
    relations: tuple[Relation, ...]
    name: str = ""

    @property
    def max_side(self) -> int:
        return max((max(len(l), len(r)) for l, r in self.relations), default=1)


def _dedup(relations: list[Relation]) -> tuple[Relation, ...]:
    seen: dict[frozenset, Relation] = {}
    for l, r in relations:
        if l == r:
            continue
        seen.setdefault(frozenset((l, r)), (l, r))
    return tuple(seen.values())


def catalan_presentation(n: int) -> Presentation:
    """Idempotent, far-commutation and braid-collapse relations on a_1..a_n."""
    rel: list[Relation] = [((i, i), (i,)) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            rel.append(((i, j), (j, i)))
    for i in range(1, n):
        rel.append(((i, i + 1, i), (i + 1, i)))
        rel.append(((i + 1, i, i + 1), (i + 1, i)))
    return Presentation(n, _dedup(rel), f"C_{n}")


def lc_presentation(n: int) -> Presentation:
    """Relations of LC_n: the Catalan relations without a_1 a_n = a_n a_1, the
    cyclic braid-collapse for (a_n, a_1), and a_i a_{i+1} a_{i+2} = a_i a_{i+2}.

    Relations whose letters collide modulo n (n < 3 for the three-letter
    family, n < 2 for the braid family) are dropped.
    """
    rel: list[Relation] = [((i, i), (i,)) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            if (i, j) != (1, n):
                rel.append(((i, j), (j, i)))
    if n >= 2:
        for i in range(1, n + 1):
            j = cyc(i + 1, n)
            rel.append(((i, j, i), (j, i)))
            rel.append(((j, i, j), (j, i)))
    if n >= 3:
        for i in range(1, n + 1):
            rel.append(((i, cyc(i + 1, n), cyc(i + 2, n)), (i, cyc(i + 2, n))))
    return Presentation(n, _dedup(rel), f"LC_{n}")


# -- bounded arena ----------------------------------------------------------------

def word_index(letters: tuple[int, ...] | Word, n: int) -> int:
    """Shortlex position of a word among all words over n letters."""
    letters = tuple(letters)
    l = len(letters)
    idx = sum(n ** k for k in range(l))
    v = 0
    for a in letters:
        v = v * n + (a - 1)
    return idx + v


def word_at(index: int, n: int) -> tuple[int, ...]:
    l = 0
    while index >= n ** l:
        index -= n ** l
        l += 1
    out = []
    for _ in range(l):
        index, d = divmod(index, n)
        out.append(d + 1)
    return tuple(reversed(out))


@dataclass
class CongruenceResult:
    presentation: Presentation
    max_len: int
    arena_len: int
    labels: np.ndarray  # label of every word of length <= max_len (shortlex index)

    @cached_property
    def class_labels(self) -> np.ndarray:
        return np.unique(self.labels)

    @property
    def num_classes(self) -> int:
        return int(self.class_labels.size)

    @property
    def num_words(self) -> int:
        return int(self.labels.size)

    @cached_property
    def representatives(self) -> list[Word]:
        n = self.presentation.rank
        return [Word(word_at(int(i), n), n) for i in self.class_labels]

    @property
    def stable(self) -> bool:
        """Every class already has a member of length <= max_len - L_max."""
        margin = self.max_len - self.presentation.max_side
        return all(len(w) <= margin for w in self.representatives)

    def label(self, w: Word | tuple[int, ...]) -> int:
        idx = word_index(w, self.presentation.rank)
        if idx >= self.labels.size:
            raise ValueError("word longer than the arena query bound")
        return int(self.labels[idx])

    def classes(self) -> dict[int, list[Word]]:
        n = self.presentation.rank
        out: dict[int, list[Word]] = {}
        for idx, lab in enumerate(self.labels):
            out.setdefault(int(lab), []).append(Word(word_at(idx, n), n))
        return out

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation.name,
            "rank": self.presentation.rank,
            "max_len": self.max_len,
            "arena_len": self.arena_len,
            "words": self.num_words,
            "classes": self.num_classes,
            "stable": self.stable,
            "representatives": [str(w) for w in self.representatives],
        }


def congruence_classes(p: Presentation, max_len: int, slack: int = 2) -> CongruenceResult:
    """Finest relation-closed equivalence on words of length <= max_len + slack,
    restricted to words of length <= max_len.

    The slack lets boundary words expand before they shrink; without it some
    long words are isolated from their true class.
    """
    n = p.rank
    arena_len = max_len + slack
    if n < 1:
        raise ValueError("presentation needs at least one generator")
    total = sum(n ** k for k in range(arena_len + 1))
    if total > MAX_ARENA_WORDS:
        raise MemoryError(f"arena of {total} words exceeds cap {MAX_ARENA_WORDS}")
    lhs = [l for l, _ in p.relations]
    rhs = [r for _, r in p.relations]
    labels = kernels.arena_union_find(n, arena_len, lhs, rhs)
    query = sum(n ** k for k in range(max_len + 1))
    return CongruenceResult(p, max_len, arena_len, np.asarray(labels[:query]))


def oracle_equal(p: Presentation, w1: Word, w2: Word, max_len: int | None = None) -> bool:
    max_len = max(len(w1), len(w2), max_len or 0)
    res = congruence_classes(p, max_len)
    return res.label(w1) == res.label(w2)


# -- Todd-Coxeter ------------------------------------------------------------------

@dataclass
class CosetTable:
    """Right Cayley graph of a finitely presented monoid; node 0 is the identity."""
    presentation: Presentation
    table: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.table)

    def trace(self, w: Word | tuple[int, ...]) -> int:
        node = 0
        for a in w:
            node = self.table[node][a - 1]
        return node

    def representatives(self) -> list[Word]:
        """Shortlex-least word of each node, by breadth-first search."""
        n = self.presentation.rank
        reps: list[tuple[int, ...] | None] = [None] * self.size
        reps[0] = ()
        frontier = [0]
        while frontier:
            nxt = []
            for node in frontier:
                for a in range(n):
                    t = self.table[node][a]
                    if reps[t] is None:
                        reps[t] = reps[node] + (a + 1,)
                        nxt.append(t)
            frontier = nxt
        return [Word(r, n) for r in reps]


def coset_enumeration(p: Presentation, limit: int = 2_000_000) -> CosetTable:
    """Monoid Todd-Coxeter (HLT strategy with coincidence processing)."""
    n = p.rank
    table: list[list[int | None]] = [[None] * n]
    parent = [0]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def new_node() -> int:
        table.append([None] * n)
        parent.append(len(parent))
        if len(parent) > limit:
            raise RuntimeError(f"coset enumeration exceeded {limit} nodes")
        return len(parent) - 1

    def trace_define(c: int, w: tuple[int, ...]) -> int:
        for a in w:
            c = find(c)
            d = table[c][a]
            if d is None:
                d = new_node()
                table[c][a] = d
            c = d
        return find(c)

    def merge(a: int, b: int) -> None:
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            parent[b] = a
            for g in range(n):
                tb = table[b][g]
                if tb is None:
                    continue
                ta = table[a][g]
                if ta is None:
                    table[a][g] = tb
                else:
                    queue.append((ta, tb))

    rels = [(tuple(x - 1 for x in l), tuple(x - 1 for x in r)) for l, r in p.relations]
    c = 0
    while c < len(table):
        for l, r in rels:
            if find(c) != c:
                break
            merge(trace_define(c, l), trace_define(c, r))
        if find(c) == c:
            for g in range(n):
                if table[c][g] is None:
                    table[c][g] = new_node()
        c += 1

    live = [x for x in range(len(table)) if find(x) == x]
    renum = {x: k for k, x in enumerate(live)}
    compact = [[renum[find(table[x][g])] for g in range(n)] for x in live]
    return CosetTable(p, compact)


def catalan_number(n: int) -> int:
    from math import comb
    return comb(2 * n, n) // (n + 1)


def words_up_to(n: int, max_len: int):
    for l in range(max_len + 1):
        for w in itertools.product(range(1, n + 1), repeat=l):
            yield Word(w, n)
