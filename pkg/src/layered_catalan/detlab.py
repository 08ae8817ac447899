"""Semigroup determinants of LC_n: tables, blocks, Moebius substitution and exact evaluation.

Variables are indexed by element id: x_s is variable ``s``.  A :class:`VarMatrix`
entry is the id of the variable sitting there, or -1 for a structural zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .monoid import MonoidUniverse
from .structure import _id, idempotents, l_tilde, r_tilde, star_product, tables

ZERO_ENTRY = -1
TRIAL_PRIME = 2**31 - 1
CERT_PRIME = 2**61 - 1
SYMBOLIC_CAP = 10


def display_order(u: MonoidUniverse, with_zero: bool = True) -> list[int]:
    """Zero first, identity last, everything else by id."""
    mid = [i for i in range(u.size) if i != u.identity_id and i != u.zero_id]
    head = [u.zero_id] if with_zero and u.zero_id is not None else []
    return head + mid + [u.identity_id]


@dataclass
class VarMatrix:
    rows: list[int]
    cols: list[int]
    entries: np.ndarray  # variable id, or ZERO_ENTRY

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def dim(self) -> int:
        if len(self.rows) != len(self.cols):
            raise ValueError("matrix is not square")
        return len(self.rows)

    def zero_count(self) -> int:
        return int((self.entries == ZERO_ENTRY).sum())

    def variables(self) -> list[int]:
        return sorted(int(v) for v in np.unique(self.entries) if v != ZERO_ENTRY)

    def evaluate(self, assignment: Sequence[int] | np.ndarray | Mapping[int, int]) -> list[list[int]]:
        """Integer matrix with x_s replaced by assignment[s]."""
        if isinstance(assignment, Mapping):
            def val(v: int) -> int:
                return int(assignment[v])
        else:
            def val(v: int) -> int:
                return int(assignment[v])
        return [[0 if v == ZERO_ENTRY else val(int(v)) for v in row] for row in self.entries]

    def labels(self, u: MonoidUniverse) -> list[list[str]]:
        return [["." if v == ZERO_ENTRY else u.label(int(v)) for v in row] for row in self.entries]

    def to_csv(self, u: MonoidUniverse) -> str:
        head = [""] + [u.label(c) for c in self.cols]
        lines = [",".join(head)]
        for r, row in zip(self.rows, self.labels(u)):
            lines.append(",".join([u.label(r)] + row))
        return "\n".join(lines) + "\n"

    def to_json(self, u: MonoidUniverse) -> dict:
        return {
            "rows": [u.label(r) for r in self.rows],
            "cols": [u.label(c) for c in self.cols],
            "entries": self.labels(u),
        }


def cayley_table(u: MonoidUniverse) -> VarMatrix:
    order = display_order(u)
    ent = u.mult.astype(np.int64)[np.ix_(order, order)]
    return VarMatrix(order, order, ent)


def contracted_cayley(u: MonoidUniverse) -> VarMatrix:
    if u.zero_id is None:
        raise ValueError(f"LC_{u.rank} has no zero element")
    order = display_order(u, with_zero=False)
    ent = u.mult.astype(np.int64)[np.ix_(order, order)]
    ent[ent == u.zero_id] = ZERO_ENTRY
    return VarMatrix(order, order, ent)


def star_block(u: MonoidUniverse, e) -> VarMatrix:
    """The L~_e x R~_e block of the (S, *) table."""
    rows = [x.id for x in l_tilde(u, e)]
    cols = [x.id for x in r_tilde(u, e)]
    ent = np.full((len(rows), len(cols)), ZERO_ENTRY, dtype=np.int64)
    for a, s in enumerate(rows):
        for b, t in enumerate(cols):
            p = star_product(u, s, t)
            if p is not None:
                ent[a, b] = p.id
    return VarMatrix(rows, cols, ent)


# -- Moebius function and the y-substitution -------------------------------------------

@dataclass
class MobiusTable:
    order: list[int]  # a linear extension of << on the non-zero elements
    values: dict[tuple[int, int], int]

    def __call__(self, t: int, s: int) -> int:
        return self.values.get((t, s), 0)


def linear_extension(u: MonoidUniverse) -> list[int]:
    """Non-zero ids sorted so that t << s puts t before s."""
    tb = tables(u)
    nz = [int(i) for i in tb.nonzero]
    below = {s: int(tb.ll[nz, s].sum()) for s in nz}
    return sorted(nz, key=lambda s: (below[s], s))


def mobius(u: MonoidUniverse) -> MobiusTable:
    from .structure import check_ll_antisymmetric
    report = check_ll_antisymmetric(u)
    if not report.passed:
        raise ValueError(f"<< is not a partial order: {report.counterexample}")
    tb = tables(u)
    order = linear_extension(u)
    zeta = tb.ll[np.ix_(order, order)].astype(np.int64)
    size = len(order)
    # mu = zeta^{-1}, solved column by column (zeta is unitriangular)
    mu = np.zeros((size, size), dtype=object)
    for s in range(size):
        col = np.zeros(size, dtype=object)
        col[s] = 1
        if s:
            col -= mu[:, :s].dot(zeta[:s, s].astype(object))
        mu[:, s] = col
    values = {(order[a], order[b]): int(mu[a, b])
              for a in range(size) for b in range(size) if zeta[a, b]}
    return MobiusTable(order, values)


def mobius_interval_check(u: MonoidUniverse, m: MobiusTable | None = None) -> bool:
    """mu(s, s) = 1 and the sum of mu(t, w) over t << w << s vanishes for t != s."""
    m = m or mobius(u)
    tb = tables(u)
    order = m.order
    for t in order:
        for s in order:
            if not tb.ll[t, s]:
                continue
            if t == s:
                if m(t, s) != 1:
                    return False
                continue
            total = sum(m(t, w) for w in order if tb.ll[t, w] and tb.ll[w, s])
            if total != 0:
                return False
    return True


def y_substitution(u: MonoidUniverse, m: MobiusTable | None = None) -> tuple[list[int], np.ndarray]:
    """(ids, T) with y_s = sum_t T[s, t] x_t, indexed along a linear extension."""
    m = m or mobius(u)
    order = m.order
    pos = {s: k for k, s in enumerate(order)}
    mat = np.zeros((len(order), len(order)), dtype=np.int64)
    for (t, s), v in m.values.items():
        mat[pos[s], pos[t]] = v
    return order, mat


def is_unitriangular(mat: np.ndarray) -> bool:
    """Ones on the diagonal and nothing above it."""
    return bool(np.all(np.diag(mat) == 1) and not np.triu(mat, 1).any())


def apply_substitution(order: list[int], mat: np.ndarray, x: Sequence[int], size: int,
                       modulus: int | None = None) -> list[int]:
    """Full-length assignment vector with y_s in place of x_s for the ids in ``order``."""
    xs = [int(x[s]) for s in order]
    out = [0] * size
    for k, s in enumerate(order):
        val = sum(int(c) * xs[j] for j, c in enumerate(mat[k]) if c)
        out[s] = val % modulus if modulus else val
    return out


# -- determinants ------------------------------------------------------------------------

def bareiss(a: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    m = [list(map(int, row)) for row in a]
    size = len(m)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            row_i, mik = m[i], m[i][k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - mik * m[k][j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def det_mod(a: list[list[int]], p: int) -> int:
    """Determinant modulo a prime; small moduli go to the compiled kernel."""
    if len(a) == 0:
        return 1 % p
    if p < 2**31:
        return int(kernels.det_mod_p(np.array(a, dtype=object) % p, p))
    m = [[v % p for v in row] for row in a]
    size, det = len(m), 1
    for i in range(size):
        piv = next((r for r in range(i, size) if m[r][i]), None)
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det = det * m[i][i] % p
        inv = pow(m[i][i], -1, p)
        for r in range(i + 1, size):
            if m[r][i]:
                f = m[r][i] * inv % p
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[i])]
    return det % p


def det_exact(m: VarMatrix, assignment, method: str = "bareiss", modulus: int = CERT_PRIME) -> int:
    a = m.evaluate(assignment)
    if method == "bareiss":
        return bareiss(a)
    if method == "modp":
        return det_mod(a, modulus)
    raise ValueError(f"unknown method {method!r}")


# -- sparse polynomials ------------------------------------------------------------------

Monomial = tuple[tuple[int, int], ...]  # sorted (variable, exponent) pairs


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


@dataclass
class SparsePoly:
    terms: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.terms = {k: c for k, c in self.terms.items() if c}

    @classmethod
    def const(cls, c: int) -> "SparsePoly":
        return cls({(): c})

    @classmethod
    def var(cls, v: int) -> "SparsePoly":
        return cls({((v, 1),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return SparsePoly(out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        out: dict[Monomial, int] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _mono_mul(k1, k2)
                out[k] = out.get(k, 0) + c1 * c2
        return SparsePoly(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def degrees(self) -> set[int]:
        return {sum(e for _, e in k) for k in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        d = self.degrees()
        if not d:
            return True
        return len(d) == 1 and (degree is None or d == {degree})

    def evaluate(self, assignment, modulus: int | None = None) -> int:
        total = 0
        for k, c in self.terms.items():
            t = c
            for v, e in k:
                t *= pow(int(assignment[v]), e, modulus) if modulus else int(assignment[v]) ** e
            total += t
        return total % modulus if modulus else total

    def format(self, name=lambda v: f"x{v}") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            mono = "*".join(name(v) if e == 1 else f"{name(v)}^{e}" for v, e in k)
            if not mono:
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{mono}")
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c:+d}*{mono}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s

    def __str__(self) -> str:
        return self.format()


def det_symbolic(m: VarMatrix | Sequence[Sequence[SparsePoly]], cap: int = SYMBOLIC_CAP) -> SparsePoly:
    """Exact multivariate determinant by Laplace expansion over column subsets."""
    if isinstance(m, VarMatrix):
        size = m.dim
        entries = [[SparsePoly() if v == ZERO_ENTRY else SparsePoly.var(int(v)) for v in row]
                   for row in m.entries]
    else:
        entries = [list(row) for row in m]
        size = len(entries)
    if size > cap:
        raise MemoryError(f"symbolic expansion of a {size}x{size} matrix exceeds cap {cap}")
    # minors[mask] = determinant of the first popcount(mask) rows on columns in mask
    minors: dict[int, SparsePoly] = {0: SparsePoly.const(1)}
    for r in range(size):
        nxt: dict[int, SparsePoly] = {}
        for mask, minor in minors.items():
            if minor.is_zero():
                continue
            for c in range(size):
                if mask >> c & 1 or entries[r][c].is_zero():
                    continue
                # sign from the number of used columns to the right of c
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = minor * entries[r][c]
                if sign < 0:
                    term = -term
                key = mask | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << size) - 1, SparsePoly())


# -- randomized non-vanishing --------------------------------------------------------------

class Verdict(str, Enum):
    NONZERO = "NonzeroCertified"
    PROBABLY_ZERO = "ProbablyZero"
    ZERO = "ZeroCertified"


@dataclass
class ThetaResult:
    verdict: Verdict
    rank: int
    trials: int
    modulus: int
    point: dict[str, int] | None = None
    value: int | None = None
    block: dict | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "n": self.rank,
            "trials": self.trials,
            "modulus": self.modulus,
            "point": self.point,
            "value": self.value,
            "block": self.block,
        }


def singular_blocks(u: MonoidUniverse, cap: int = SYMBOLIC_CAP) -> list[tuple[int, VarMatrix]]:
    """Non-zero idempotents whose star block has identically vanishing determinant."""
    out = []
    for e in idempotents(u):
        b = star_block(u, e)
        if b.shape[0] != b.shape[1] or b.shape[0] > cap:
            continue
        if det_symbolic(b, cap).is_zero():
            out.append((e, b))
    return out


def theta_nonzero(u: MonoidUniverse, trials: int = 32, seed: int = 0,
                  cap: int = SYMBOLIC_CAP, modulus: int = TRIAL_PRIME) -> ThetaResult:
    """Decide whether the semigroup determinant vanishes identically.

    A non-zero evaluation at a random point is a certificate.  A zero verdict
    is only certified when some idempotent block is symbolically singular,
    which forces the whole determinant to vanish through the block product.
    """
    table = cayley_table(u)
    dim = table.dim
    if modulus <= 100 * dim:
        raise ValueError("modulus too small for the matrix dimension")
    rng = np.random.default_rng(seed)
    for k in range(trials):
        x = rng.integers(1, modulus, size=u.size)
        val = det_exact(table, x, method="modp", modulus=modulus)
        if val:
            point = {u.label(i): int(x[i]) for i in range(u.size)}
            return ThetaResult(Verdict.NONZERO, u.rank, k + 1, modulus, point, val)
    sing = singular_blocks(u, cap)
    if sing:
        e, b = sing[0]
        block = {"e": u.label(e), **b.to_json(u)}
        return ThetaResult(Verdict.ZERO, u.rank, trials, modulus, block=block)
    return ThetaResult(Verdict.PROBABLY_ZERO, u.rank, trials, modulus)


# -- identity checks --------------------------------------------------------------------------

@dataclass
class FactorizationResult:
    holds: bool
    sign: int
    lhs: int
    rhs: int
    modulus: int

    def __bool__(self) -> bool:
        return self.holds


def block_product(u: MonoidUniverse, x: Sequence[int], modulus: int,
                  m: MobiusTable | None = None) -> int:
    """Product over non-zero idempotents e of det(star_block(e)) at y = mu-substituted x."""
    m = m or mobius(u)
    order, mat = y_substitution(u, m)
    y = apply_substitution(order, mat, x, u.size, modulus)
    out = 1
    for e in idempotents(u):
        out = out * det_exact(star_block(u, e), y, method="modp", modulus=modulus) % modulus
    return out


def factorization_check(u: MonoidUniverse, assignment: Sequence[int],
                        modulus: int = CERT_PRIME) -> FactorizationResult:
    """theta_S(X) = +- x_0 * prod_e theta~_e(Y) with y built from x_s - x_0.

    Without a zero element the product is taken at x itself.
    """
    x = [int(v) % modulus for v in assignment]
    lhs = det_exact(cayley_table(u), x, method="modp", modulus=modulus)
    if u.zero_id is None:
        rhs = block_product(u, x, modulus)
    else:
        x0 = x[u.zero_id]
        shifted = [(v - x0) % modulus for v in x]
        rhs = x0 * block_product(u, shifted, modulus) % modulus
    if lhs == rhs:
        sign = 1
    elif lhs == (-rhs) % modulus:
        sign = -1
    else:
        sign = 0
    return FactorizationResult(sign != 0, sign, lhs, rhs, modulus)


def contraction_check(u: MonoidUniverse, assignment: Sequence[int],
                      modulus: int | None = None) -> bool:
    """theta_S(X) = x_0 * theta~_S(Y) with y_s = x_s - x_0 (exact unless a modulus is given)."""
    if u.zero_id is None:
        raise ValueError(f"LC_{u.rank} has no zero element")
    x = [int(v) for v in assignment]
    x0 = x[u.zero_id]
    y = [v - x0 for v in x]
    method = "modp" if modulus else "bareiss"
    kw = {"modulus": modulus} if modulus else {}
    lhs = det_exact(cayley_table(u), x, method=method, **kw)
    rhs = x0 * det_exact(contracted_cayley(u), y, method=method, **kw)
    if modulus:
        return lhs % modulus == rhs % modulus
    return lhs == rhs


def variable_names(u: MonoidUniverse):
    return lambda v: f"x[{u.label(v)}]"


def block_table_json(u: MonoidUniverse, e) -> dict:
    b = star_block(u, _id(u, e))
    return {"e": u.label(_id(u, e)), **b.to_json(u), "dots": b.zero_count()}

