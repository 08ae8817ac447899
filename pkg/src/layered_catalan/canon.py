"""Canonical forms of elements of the layered Catalan monoid LC_n.

For n >= 4 a non-identity element is either the zero or a product of
well-separated circular segments.  :func:`canonicalize` reaches that form by
the right-to-left reduction process (X, Y) with the Simplify-Y rules applied
to Y after every update; :func:`canonicalize_by_segments` reads the same form
directly off the content of the word and is kept as an independent route.
n = 1, 2, 3 are handled by explicit case tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .words import Word, cdist, content, cyc


class CanonError(RuntimeError):
    """Internal validation of a computed canonical form failed."""


class Shape(str, Enum):
    SINGLETON = "Singleton"
    BLOCKER = "Blocker"
    REVERSED_PAIR = "ReversedPair"
    EVEN_RUN = "EvenRun"
    ODD_RUN = "OddRun"


class Kind(str, Enum):
    IDENTITY = "Identity"
    ZERO = "Zero"
    SEGMENTS = "Segments"


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    shape: Shape

    def span(self, n: int) -> int:
        return cdist(self.start, self.end, n)

    def wraps(self) -> bool:
        return self.end < self.start

    def cells(self, n: int) -> list[int]:
        """Positions start..end, walked clockwise."""
        return [cyc(self.start + k, n) for k in range(self.span(n) + 1)]

    def covers(self, other: "Segment", n: int) -> bool:
        d = self.span(n)
        return (cdist(self.start, other.start, n) <= d
                and cdist(self.start, other.end, n) <= d
                and cdist(self.start, other.start, n) <= cdist(self.start, other.end, n))

    def render(self, n: int) -> tuple[int, ...]:
        i, d = self.start, self.span(n)
        if self.shape is Shape.SINGLETON:
            return (i,)
        if self.shape is Shape.BLOCKER:
            return (i, cyc(i + 1, n))
        if self.shape is Shape.REVERSED_PAIR:
            return (cyc(i + 1, n), i)
        if self.shape is Shape.EVEN_RUN:
            return tuple(cyc(i + k, n) for k in range(0, d + 1, 2))
        return (i,) + tuple(cyc(i + k, n) for k in range(1, d + 1, 2))

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "shape": self.shape.value}


def shape_for_span(d: int) -> Shape:
    if d == 0:
        return Shape.SINGLETON
    if d == 1:
        return Shape.BLOCKER
    return Shape.EVEN_RUN if d % 2 == 0 else Shape.ODD_RUN


def zero_word(n: int) -> Word:
    if n < 2:
        raise ValueError("LC_1 has no zero element")
    if n == 2:
        return Word((1, 2), 2)
    if n == 3:
        return Word((1, 3), 3)
    if n % 2 == 0:
        return Word(tuple(range(1, n, 2)), n)
    return Word((1, 2) + tuple(range(4, n, 2)), n)


@dataclass(frozen=True)
class CanonicalForm:
    kind: Kind
    rank: int
    segments: tuple[Segment, ...] = field(default=())

    @property
    def word(self) -> Word:
        if self.kind is Kind.IDENTITY:
            return Word.identity(self.rank)
        if self.kind is Kind.ZERO:
            return zero_word(self.rank)
        letters: tuple[int, ...] = ()
        for seg in self.segments:
            letters += seg.render(self.rank)
        return Word(letters, self.rank)

    @property
    def is_zero(self) -> bool:
        return self.kind is Kind.ZERO

    @property
    def is_identity(self) -> bool:
        return self.kind is Kind.IDENTITY

    def __str__(self) -> str:
        if self.kind is Kind.ZERO:
            return f"ZERO ({self.word})"
        return str(self.word)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "word": str(self.word),
            "segments": [s.to_json() for s in self.segments],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def identity_form(n: int) -> CanonicalForm:
    return CanonicalForm(Kind.IDENTITY, n)


def zero_form(n: int) -> CanonicalForm:
    if n < 2:
        raise ValueError("LC_1 has no zero element")
    return CanonicalForm(Kind.ZERO, n)


def segment_form(n: int, segments: Sequence[Segment]) -> CanonicalForm:
    return CanonicalForm(Kind.SEGMENTS, n, tuple(sorted(segments, key=_segment_key)))


def _segment_key(seg: Segment) -> tuple[int, int]:
    # a segment passing a_n -> a_1 is listed first, the rest clockwise from a_1
    return (0 if seg.wraps() else 1, seg.start)


# -- Condition (star) and the circular cluster structure -----------------------

def clusters(letters: frozenset[int] | set[int], n: int) -> list[tuple[int, int]] | None:
    """Split a content set into maximal circular intervals separated by gaps of
    at least two missing letters.  None when no such gap exists."""
    start = None
    for i in range(1, n + 1):
        if i not in letters and cyc(i + 1, n) not in letters:
            start = cyc(i + 2, n)
            break
    if start is None or not letters:
        return None
    out: list[tuple[int, int]] = []
    cur: list[int] | None = None
    gap = 0
    for k in range(n):
        p = cyc(start + k, n)
        if p in letters:
            if cur is None or gap >= 2:
                if cur is not None:
                    out.append((cur[0], cur[1]))
                cur = [p, p]
            else:
                cur[1] = p
            gap = 0
        else:
            gap += 1
    assert cur is not None
    out.append((cur[0], cur[1]))
    out.sort(key=lambda ij: (0 if ij[1] < ij[0] else 1, ij[0]))
    return out


def _shift_origin(cl: list[tuple[int, int]]) -> int:
    first = cl[0]
    return first[0] if first[1] < first[0] else 1


def star_condition(w: Word) -> int | None:
    """An index r with a_{r+1}, a_{r+2} absent from c(w), or None.

    Among the admissible r this returns the one that becomes the largest letter
    of c(w) once indices are shifted so that no cluster crosses a_n -> a_1.
    """
    if w.is_empty():
        raise ValueError("condition (star) is defined for non-empty words")
    n = w.rank
    c = content(w)
    if not any(cyc(r + 1, n) not in c and cyc(r + 2, n) not in c for r in range(1, n + 1)):
        return None
    cl = clusters(c, n)
    if cl is None:
        return None
    r = cl[-1][1]
    assert cyc(r + 1, n) not in c and cyc(r + 2, n) not in c
    return r


# -- Simplify Y ----------------------------------------------------------------

# (patterns as offsets from r, replacement offsets); letters are read mod n.
SIMPLIFY_RULES: tuple[tuple[str, tuple[tuple[int, ...], ...], tuple[int, ...]], ...] = (
    ("a", ((0, 1, 2), (0, 2, 1)), (0, 2)),
    ("b", ((0, 2, 3), (0, 3, 2)), (0, 1, 3)),
    ("c", ((0, -1, 1), (-1, 0, 1)), (-1, 1)),
    ("d", ((0, -1, 2),), (-1, 0, 2)),
    ("e", ((-1, 0, 1, 2), (-1, 0, 2, 1)), (-1, 0, 2)),
    ("f", ((0, -1, 1, 2), (0, -1, 2, 1)), (0, -1, 2)),
    ("g", ((0, -1, 2, 3), (0, -1, 3, 2), (-1, 0, 2, 3), (-1, 0, 3, 2)), (-1, 1, 3)),
)


def _match_prefix(y: Sequence[int], pattern: tuple[int, ...], n: int) -> int | None:
    if len(y) < len(pattern):
        return None
    r = cyc(y[0] - pattern[0], n)
    for k, off in enumerate(pattern):
        if y[k] != cyc(r + off, n):
            return None
    # patterns name pairwise distinct letters; collisions mod small n are not matches
    if len({cyc(r + off, n) for off in pattern}) != len(pattern):
        return None
    return r


def simplify_step(y: Sequence[int], n: int) -> tuple[str, tuple[int, ...]] | None:
    """Apply the first matching rule to the prefix of ``y``."""
    for name, patterns, repl in SIMPLIFY_RULES:
        for pat in patterns:
            r = _match_prefix(y, pat, n)
            if r is not None:
                return name, tuple(cyc(r + off, n) for off in repl) + tuple(y[len(pat):])
    return None


def simplify_y(y: Word) -> Word:
    letters = tuple(y.letters)
    for _ in range(4 * len(letters) + 4):
        step = simplify_step(letters, y.rank)
        if step is None:
            return Word(letters, y.rank)
        letters = step[1]
    raise CanonError(f"Simplify Y did not stabilise on {y}")


# -- the reduction process -------------------------------------------------------

def _reduce(xs: list[int], n: int) -> list[int]:
    """Run the reduction rule on X (already shifted) and return Y."""
    y: list[int] = []
    while xs:
        r = max(xs)
        c = set(xs)
        r1, r2 = cyc(r - 1, n), cyc(r - 2, n)
        if r1 not in c:
            xs = [x for x in xs if x != r]
            y = [r] + y
        elif r2 not in c:
            first_r = xs.index(r)
            reversed_pair = r1 in xs[first_r + 1:]
            xs = [x for x in xs if x != r and x != r1]
            y = ([r, r1] if reversed_pair else [r1, r]) + y
        else:
            xs = [x for x in xs if x != r and x != r1]
            y = [r] + y
        y = list(simplify_y(Word(tuple(y), n)).letters)
    return y


def canonicalize(w: Word) -> CanonicalForm:
    n = w.rank
    if w.is_empty():
        return identity_form(n)
    c = content(w)
    if n == 1:
        return segment_form(1, [Segment(1, 1, Shape.SINGLETON)])
    if n == 2:
        if len(c) == 2:
            return zero_form(2)
        (i,) = c
        return segment_form(2, [Segment(i, i, Shape.SINGLETON)])
    if n == 3:
        return _canonicalize_rank3(w)

    r = star_condition(w)
    if r is None:
        return zero_form(n)
    cl = clusters(c, n)
    assert cl is not None
    origin = _shift_origin(cl)
    shifted = [cyc(x - origin + 1, n) for x in w.letters]
    y = _reduce(shifted, n)
    back = Word(tuple(cyc(x + origin - 1, n) for x in y), n)
    form = parse_word(back)
    if form.word != back or not validate_canonical(form):
        raise CanonError(f"reduction of {w} produced non-canonical {back}")
    return form


def _canonicalize_rank3(w: Word) -> CanonicalForm:
    c = content(w)
    if len(c) == 3:
        return zero_form(3)
    if len(c) == 1:
        (i,) = c
        return segment_form(3, [Segment(i, i, Shape.SINGLETON)])
    i = next(x for x in c if cyc(x + 1, 3) in c)
    j = cyc(i + 1, 3)
    if _letter_before(w, j, i):
        return zero_form(3)
    return segment_form(3, [Segment(i, j, Shape.BLOCKER)])


def _letter_before(w: Word, first: int, later: int) -> bool:
    """Some occurrence of ``first`` precedes some occurrence of ``later``."""
    try:
        p = w.letters.index(first)
    except ValueError:
        return False
    return later in w.letters[p + 1:]


def parse_word(y: Word) -> CanonicalForm:
    """Read the segment structure off a word assumed to be in canonical form."""
    n = y.rank
    if y.is_empty():
        return identity_form(n)
    cl = clusters(content(y), n)
    if cl is None:
        raise CanonError(f"{y} has no segment structure")
    segs = []
    for i, j in cl:
        d = cdist(i, j, n)
        shape = shape_for_span(d)
        if d == 1 and _letter_before(y, j, i):
            shape = Shape.REVERSED_PAIR
        segs.append(Segment(i, j, shape))
    return segment_form(n, segs)


def canonicalize_by_segments(w: Word) -> CanonicalForm:
    """The canonical form read directly from c(w) and the blocker orientations."""
    n = w.rank
    if n <= 3 or w.is_empty():
        return canonicalize(w)
    cl = clusters(content(w), n)
    if cl is None:
        return zero_form(n)
    segs = []
    for i, j in cl:
        d = cdist(i, j, n)
        shape = shape_for_span(d)
        if d == 1 and _letter_before(w, j, i):
            shape = Shape.REVERSED_PAIR
        segs.append(Segment(i, j, shape))
    return segment_form(n, segs)


def parse_segments(cf: CanonicalForm) -> list[Segment]:
    if cf.kind is not Kind.SEGMENTS:
        raise ValueError(f"{cf.kind.value} has no segments")
    return list(cf.segments)


def validate_canonical(cf: CanonicalForm) -> bool:
    if cf.kind is not Kind.SEGMENTS:
        return not cf.segments and (cf.kind is Kind.IDENTITY or cf.rank >= 2)
    n = cf.rank
    segs = cf.segments
    if not segs:
        return False
    for s in segs:
        if not (1 <= s.start <= n and 1 <= s.end <= n):
            return False
        d = s.span(n)
        if d >= n - 1 and n >= 4:
            return False
        expected = shape_for_span(d)
        if s.shape is not expected and not (d == 1 and s.shape is Shape.REVERSED_PAIR):
            return False
    if n <= 2:
        return len(segs) == 1 and segs[0].shape is Shape.SINGLETON
    if n == 3:
        return len(segs) == 1 and segs[0].shape in (Shape.SINGLETON, Shape.BLOCKER)
    if list(segs) != sorted(segs, key=_segment_key):
        return False
    # walk the circle: each segment plus the gap after it, at least two letters
    total = 0
    for k, s in enumerate(segs):
        nxt = segs[(k + 1) % len(segs)]
        gap = (n - s.span(n) - 1) if len(segs) == 1 else cdist(s.end, nxt.start, n) - 1
        if gap < 2:
            return False
        total += s.span(n) + 1 + gap
    if total != n:
        return False
    return star_condition(cf.word) is not None
