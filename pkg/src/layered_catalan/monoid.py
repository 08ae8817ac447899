"""The full element universe of LC_n with a dense multiplication table."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .canon import (
    CanonicalForm,
    Segment,
    Shape,
    canonicalize,
    identity_form,
    segment_form,
    shape_for_span,
    zero_form,
)
from .oracle import catalan_number, catalan_presentation, coset_enumeration
from .words import Word, cyc

DEFAULT_MAX_ELEMENTS = 20_000
MAX_RANK = 12


class UniverseTooLarge(MemoryError):
    pass


def max_elements() -> int:
    return int(os.environ.get("LCN_MAX_ELEMENTS", DEFAULT_MAX_ELEMENTS))


@dataclass(frozen=True)
class Element:
    id: int
    form: CanonicalForm

    @property
    def word(self) -> Word:
        return self.form.word

    def __str__(self) -> str:
        return str(self.form)


@dataclass(eq=False)
class MonoidUniverse:
    rank: int
    elements: list[CanonicalForm]
    mult: np.ndarray
    identity_id: int = 0
    zero_id: int | None = None
    _index: dict[CanonicalForm, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.mult.setflags(write=False)
        self._index = {f: i for i, f in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_zero(self) -> bool:
        return self.zero_id is not None

    def element(self, i: int) -> Element:
        return Element(i, self.elements[i])

    def __iter__(self):
        return (Element(i, f) for i, f in enumerate(self.elements))

    @property
    def identity(self) -> Element:
        return self.element(self.identity_id)

    @property
    def zero(self) -> Element | None:
        return None if self.zero_id is None else self.element(self.zero_id)

    def id_of(self, x: Element | CanonicalForm | Word | str | int) -> int:
        """Resolve an element, canonical form, word or dotted string to its id."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.size:
                raise IndexError(f"no element with id {x}")
            return int(x)
        if isinstance(x, Element):
            return x.id
        if isinstance(x, str):
            x = Word.parse(x, self.rank)
        if isinstance(x, Word):
            if x.rank != self.rank:
                raise ValueError(f"word over rank {x.rank}, universe has rank {self.rank}")
            return self.trace(x)
        return self._index[x]

    def get(self, x) -> Element:
        return self.element(self.id_of(x))

    def word(self, i: int) -> Word:
        return self.elements[i].word

    def label(self, i: int) -> str:
        return str(self.elements[i].word)

    @cached_property
    def generator_ids(self) -> list[int]:
        return [self.trace(Word.of(self.rank, a)) for a in range(1, self.rank + 1)]

    def trace(self, w: Word) -> int:
        i = self.identity_id
        for a in w:
            i = int(self._right_gen[i, a - 1])
        return i

    @cached_property
    def _right_gen(self) -> np.ndarray:
        cols = []
        for a in range(1, self.rank + 1):
            g = self._index[canonicalize(Word.of(self.rank, a))]
            cols.append(self.mult[:, g])
        return np.stack(cols, axis=1) if cols else np.zeros((self.size, 0), dtype=self.mult.dtype)

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def product(self, *ids: int) -> int:
        out = self.identity_id
        for i in ids:
            out = int(self.mult[out, i])
        return out

    def is_zero(self, i: int) -> bool:
        return i == self.zero_id

    @property
    def nonzero_ids(self) -> list[int]:
        return [i for i in range(self.size) if i != self.zero_id]


def multiply(u: MonoidUniverse, a: Element | int, b: Element | int) -> Element:
    return u.element(u.mul(u.id_of(a), u.id_of(b)))


def build_universe(n: int, cap: int | None = None) -> MonoidUniverse:
    """BFS closure of {1, a_1, ..., a_n} under canonicalized right multiplication."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    if n > MAX_RANK:
        raise UniverseTooLarge(f"rank {n} is above the soft cap {MAX_RANK}")
    cap = max_elements() if cap is None else cap

    start = identity_form(n)
    forms = [start]
    index = {start: 0}
    right: list[list[int]] = []
    head = 0
    while head < len(forms):
        w = forms[head].word
        row = []
        for a in range(1, n + 1):
            f = canonicalize(w + Word.of(n, a))
            if f not in index:
                if len(forms) >= cap:
                    raise UniverseTooLarge(f"LC_{n} exceeds {cap} elements")
                index[f] = len(forms)
                forms.append(f)
            row.append(index[f])
        right.append(row)
        head += 1

    # move zero to the end, keeping BFS order for the rest
    order = list(range(len(forms)))
    zero_old = next((i for i, f in enumerate(forms) if f.is_zero), None)
    if zero_old is not None:
        order.remove(zero_old)
        order.append(zero_old)
    new_of = np.empty(len(forms), dtype=np.int64)
    new_of[order] = np.arange(len(forms))
    elements = [forms[i] for i in order]
    gen = new_of[np.asarray(right, dtype=np.int64)[order]] if n else np.zeros((1, 0), np.int64)

    size = len(elements)
    dtype = np.int16 if size < 2**15 else np.int32
    mult = np.empty((size, size), dtype=dtype)
    for t, f in enumerate(elements):
        col = np.arange(size, dtype=np.int64)
        for a in f.word:
            col = gen[col, a - 1]
        mult[:, t] = col
    zero_id = size - 1 if zero_old is not None else None
    return MonoidUniverse(n, elements, mult, 0, zero_id)


def _cyclic_runs(mask: int, n: int) -> list[tuple[int, int]] | None:
    """Runs of covered cells as (start, length); None when some uncovered gap is short."""
    cells = [(mask >> k) & 1 for k in range(n)]
    if all(cells) or not any(cells):
        return None
    # start at the beginning of a gap so that no run is split by the wrap
    first_gap = next(k for k in range(n) if not cells[k] and cells[k - 1])
    runs, k, steps = [], first_gap, 0
    while steps < n:
        if cells[k]:
            length = 0
            start = k
            while cells[k] and steps < n:
                length += 1
                k = (k + 1) % n
                steps += 1
            runs.append((start + 1, length))
        else:
            gap = 0
            while not cells[k] and steps < n:
                gap += 1
                k = (k + 1) % n
                steps += 1
            if gap < 2:
                return None
    return runs


def enumerate_canonical(n: int) -> list[CanonicalForm]:
    """Every canonical form generated straight from segment arrangements."""
    if n < 4:
        raise ValueError("direct segment enumeration needs n >= 4")
    forms = [identity_form(n), zero_form(n)]
    for mask in range(1, 2**n):
        runs = _cyclic_runs(mask, n)
        if runs is None:
            continue
        options: list[list[Segment]] = []
        for start, length in runs:
            d = length - 1
            end = cyc(start + d, n)
            if d == 1:
                options.append([Segment(start, end, Shape.BLOCKER), Segment(start, end, Shape.REVERSED_PAIR)])
            else:
                options.append([Segment(start, end, shape_for_span(d))])
        choices = [[]]
        for opt in options:
            choices = [c + [s] for c in choices for s in opt]
        forms.extend(segment_form(n, segs) for segs in choices)
    return forms


def catalan_count(n: int) -> int:
    """|C_n| as transformations of {1..n}: the presentation on a_1..a_{n-1}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return coset_enumeration(catalan_presentation(n - 1)).size


def catalan_cardinality_check(n: int) -> bool:
    if not 1 <= n <= 7:
        raise ValueError("Catalan check is limited to 1 <= n <= 7")
    return catalan_count(n) == catalan_number(n)
