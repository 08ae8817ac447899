"""Free-monoid words over the alphabet a_1, ..., a_n.

Letters are plain 1-based integers. A :class:`Word` is an immutable tuple of
letters tagged with the rank ``n`` of the ambient alphabet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator


def cyc(k: int, n: int) -> int:
    """Map an arbitrary integer onto the circular index range 1..n."""
    return (k - 1) % n + 1


def cdist(i: int, j: int, n: int) -> int:
    """Clockwise distance from ``i`` to ``j`` on the n-cycle."""
    return (j - i) % n


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        letters = tuple(int(a) for a in self.letters)
        for a in letters:
            if not 1 <= a <= self.rank:
                raise ValueError(f"letter a{a} outside a1..a{self.rank}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, rank: int, *letters: int) -> "Word":
        return cls(tuple(letters), rank)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        """Parse the dotted syntax ``a1.a2.a5``; ``1`` (or empty) is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return cls((), rank)
        letters = []
        for tok in text.split("."):
            tok = tok.strip()
            if not tok.startswith("a") or not tok[1:].isdigit():
                raise ValueError(f"bad letter {tok!r} in word {text!r}")
            letters.append(int(tok[1:]))
        return cls(tuple(letters), rank)

    @classmethod
    def from_json(cls, data: str | list, rank: int) -> "Word":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item], self.rank)
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        if other.rank != self.rank:
            raise ValueError("cannot concatenate words of different rank")
        return Word(self.letters + other.letters, self.rank)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return ".".join(f"a{a}" for a in self.letters)

    def to_json(self) -> list[int]:
        return list(self.letters)

    def is_empty(self) -> bool:
        return not self.letters


def content(w: Word) -> frozenset[int]:
    return frozenset(w.letters)


def restrict(w: Word, letters: Iterable[int]) -> Word:
    """The longest subword of ``w`` whose content lies in ``letters``."""
    keep = set(letters)
    return Word(tuple(a for a in w.letters if a in keep), w.rank)


def is_subword(u: Word, t: Word) -> bool:
    """True iff ``u`` embeds in ``t`` as a (scattered) subsequence."""
    it = iter(t.letters)
    return all(any(a == b for b in it) for a in u.letters)


def occurs_factor(s: Word, t: Word) -> bool:
    """True iff ``s`` is a contiguous factor of ``t``."""
    if not s.letters:
        raise ValueError("factor must be non-empty")
    k = len(s)
    return any(t.letters[p:p + k] == s.letters for p in range(len(t) - k + 1))
