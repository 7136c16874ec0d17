"""Dense matrix algebra over a finite field.

Matrices are immutable row tuples of element codes.  Elimination has a
bit-packed fast path for GF(2), where a row is a Python int and row
operations are single XORs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .field import Field, enumerate_vectors


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows", "_rank", "_frf", "_hash")

    def __init__(self, field: Field, rows: Sequence[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
            for x in r:
                if not 0 <= x < field.q:
                    raise ValueError(f"element code {x} out of range for GF({field.name})")
        self._init(field, rows, ncols)

    def _init(self, field, rows, ncols):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._rank = None
        self._frf = None
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        """Trusted constructor: rows must already be tuples of valid codes."""
        m = cls.__new__(cls)
        m._init(field, tuple(rows), ncols)
        return m

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> "Matrix":
        return cls._raw(field, ((0,) * n,) * m, n)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls._raw(field, (tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence[int]], nrows: int) -> "Matrix":
        return cls._raw(field, tuple(zip(*cols)) if cols else ((),) * nrows, len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.rows == other.rows
            and self.field == other.field
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix(GF({self.field.name}), {[list(r) for r in self.rows]}, ncols={self.ncols})"

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix._raw(self.field, ((),) * self.ncols, 0)
        return Matrix._raw(self.field, tuple(zip(*self.rows)), self.nrows)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def take_columns(self, stop: int) -> "Matrix":
        return Matrix._raw(self.field, (r[:stop] for r in self.rows), stop)

    def take_rows(self, stop: int) -> "Matrix":
        return Matrix._raw(self.field, self.rows[:stop], self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def flat(self) -> tuple:
        return tuple(itertools.chain.from_iterable(self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        f = self.field
        return Matrix._raw(f, (f.vadd(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        f = self.field
        return Matrix._raw(f, (f.vsub(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def scaled(self, s: int) -> "Matrix":
        f = self.field
        return Matrix._raw(f, (f.scale(s, r) for r in self.rows), self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        out = []
        zero = (0,) * other.ncols
        for row in self.rows:
            acc = zero
            for x, orow in zip(row, other.rows):
                if x:
                    acc = f.axpy(x, orow, acc)
            out.append(acc)
        return Matrix._raw(f, out, other.ncols)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank_of_rows(self.field, self.rows, self.ncols)
        return self._rank


def _check_same(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def outer(field: Field, u: Sequence[int], v: Sequence[int]) -> Matrix:
    zero = (0,) * len(v)
    return Matrix._raw(field, (field.scale(x, v) if x else zero for x in u), len(v))


def matvec(field: Field, m: Matrix, v: Sequence[int]) -> tuple:
    return tuple(field.dot(r, v) for r in m.rows)


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def pack(row: Sequence[int]) -> int:
    """GF(2) row -> int, bit j holding column j."""
    x = 0
    for j, b in enumerate(row):
        if b:
            x |= 1 << j
    return x


def unpack(x: int, n: int) -> tuple:
    return tuple((x >> j) & 1 for j in range(n))


def rank_of_rows(field: Field, rows: Sequence[Sequence[int]], ncols: int) -> int:
    if field.q == 2:
        basis: dict[int, int] = {}
        for r in rows:
            x = pack(r)
            while x:
                low = x & -x
                b = basis.get(low)
                if b is None:
                    basis[low] = x
                    break
                x ^= b
        return len(basis)
    work = [tuple(r) for r in rows]
    rank = 0
    m = len(work)
    for j in range(ncols):
        piv = None
        for i in range(rank, m):
            if work[i][j]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = field.canonical_normalize(work[rank]) if work[rank][j] != 1 else work[rank]
        for i in range(rank + 1, m):
            s = work[i][j]
            if s:
                work[i] = field.axpy(field.neg(s), prow, work[i])
        rank += 1
        if rank == m:
            break
    return rank


def rank(m: Matrix) -> int:
    return m.rank()


@dataclass(frozen=True)
class RrefCertificate:
    """Row reduction certificate: ``j @ m == rref(m)``, ``c == j^-1``, ``m == c[:, :r] @ f``."""

    c: Matrix
    j: Matrix
    f: Matrix
    r: int
    pivots: tuple


def rref_with_certificate(m: Matrix, rank_cap: int, counter: Counter | None = None):
    """Gaussian elimination that gives up as soon as the rank exceeds ``rank_cap``.

    Returns ``None`` after at most ``rank_cap + 1`` pivot rounds if the rank of
    ``m`` is larger than the cap.  Pivot rows are chosen as the smallest
    eligible index.  If ``counter`` is given, ``counter["pivot_rounds"]`` is
    incremented once per pivot found.
    """
    if rank_cap < 0:
        raise ValueError("rank_cap must be >= 0")
    if m.field.q == 2:
        return _rref_cert_gf2(m, rank_cap, counter)
    field = m.field
    nr, nc = m.nrows, m.ncols
    ident = [tuple(int(i == j) for j in range(nr)) for i in range(nr)]
    F = list(m.rows)
    J = list(ident)
    CT = list(ident)  # CT[i] is column i of C
    q = 0
    pivots = []
    for j in range(nc):
        piv = None
        for i in range(q, nr):
            if F[i][j]:
                piv = i
                break
        if piv is None:
            continue
        if counter is not None:
            counter["pivot_rounds"] += 1
        F[piv], F[q] = F[q], F[piv]
        J[piv], J[q] = J[q], J[piv]
        CT[piv], CT[q] = CT[q], CT[piv]
        sigma = F[q][j]
        if sigma != 1:
            s_inv = field.inv(sigma)
            F[q] = field.scale(s_inv, F[q])
            J[q] = field.scale(s_inv, J[q])
            CT[q] = field.scale(sigma, CT[q])
        for k in range(q + 1, nr):
            s = F[k][j]
            if s:
                ns = field.neg(s)
                F[k] = field.axpy(ns, F[q], F[k])
                J[k] = field.axpy(ns, J[q], J[k])
                CT[q] = field.axpy(s, CT[k], CT[q])
        pivots.append(j)
        q += 1
        if q > rank_cap:
            return None
    for i in range(q - 1, -1, -1):
        j = pivots[i]
        for k in range(i):
            s = F[k][j]
            if s:
                ns = field.neg(s)
                F[k] = field.axpy(ns, F[i], F[k])
                J[k] = field.axpy(ns, J[i], J[k])
                CT[i] = field.axpy(s, CT[k], CT[i])
    C = Matrix._raw(field, tuple(zip(*CT)) if nr else (), nr)
    return RrefCertificate(
        c=C,
        j=Matrix._raw(field, J, nr),
        f=Matrix._raw(field, F[:q], nc),
        r=q,
        pivots=tuple(pivots),
    )


def _rref_cert_gf2(m: Matrix, rank_cap: int, counter: Counter | None):
    field = m.field
    nr, nc = m.nrows, m.ncols
    F = [pack(r) for r in m.rows]
    J = [1 << i for i in range(nr)]
    CT = [1 << i for i in range(nr)]
    q = 0
    pivots = []
    for j in range(nc):
        bit = 1 << j
        piv = None
        for i in range(q, nr):
            if F[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        if counter is not None:
            counter["pivot_rounds"] += 1
        F[piv], F[q] = F[q], F[piv]
        J[piv], J[q] = J[q], J[piv]
        CT[piv], CT[q] = CT[q], CT[piv]
        fq, jq = F[q], J[q]
        for k in range(q + 1, nr):
            if F[k] & bit:
                F[k] ^= fq
                J[k] ^= jq
                CT[q] ^= CT[k]
        pivots.append(j)
        q += 1
        if q > rank_cap:
            return None
    for i in range(q - 1, -1, -1):
        bit = 1 << pivots[i]
        for k in range(i):
            if F[k] & bit:
                F[k] ^= F[i]
                J[k] ^= J[i]
                CT[i] ^= CT[k]
    cols = [unpack(x, nr) for x in CT]
    C = Matrix._raw(field, tuple(zip(*cols)) if nr else (), nr)
    return RrefCertificate(
        c=C,
        j=Matrix._raw(field, (unpack(x, nr) for x in J), nr),
        f=Matrix._raw(field, (unpack(x, nc) for x in F[:q]), nc),
        r=q,
        pivots=tuple(pivots),
    )


def rref(m: Matrix) -> Matrix:
    """Full rref (zero rows kept at the bottom)."""
    cert = rref_with_certificate(m, min(m.nrows, m.ncols))
    return Matrix._raw(m.field, cert.f.rows + ((0,) * m.ncols,) * (m.nrows - cert.r), m.ncols)


def full_rank_factorization(m: Matrix) -> tuple[Matrix, Matrix]:
    """``(c0, f0)`` with ``c0 @ f0 == m`` and inner dimension ``rank(m)``."""
    if m._frf is None:
        cert = rref_with_certificate(m, min(m.nrows, m.ncols))
        m._frf = (cert.c.take_columns(cert.r), cert.f)
        m._rank = cert.r
    return m._frf


def inverse(m: Matrix) -> Matrix | None:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    cert = rref_with_certificate(m, m.nrows)
    if cert.r < m.nrows:
        return None
    return cert.j


def is_invertible(m: Matrix) -> bool:
    return m.nrows == m.ncols and m.rank() == m.nrows


def solve_right(a: Matrix, b: Matrix) -> Matrix | None:
    """Some X with ``a @ X == b`` (free variables zero), or None."""
    if a.nrows != b.nrows:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    field = a.field
    cert = rref_with_certificate(a, min(a.nrows, a.ncols))
    jb = cert.j @ b
    for row in jb.rows[cert.r :]:
        if any(row):
            return None
    x = [(0,) * b.ncols] * a.ncols
    for t, pc in enumerate(cert.pivots):
        x[pc] = jb.rows[t]
    return Matrix._raw(field, x, b.ncols)


# ---------------------------------------------------------------------------
# Enumeration of rank <= 1 matrices and factorization summands
# ---------------------------------------------------------------------------


def enumerate_rank_le1(field: Field, m: int, n: int) -> Iterator[Matrix]:
    """Zero matrix, then every rank-1 ``u x v`` with ``u`` normalized, ``v`` nonzero."""
    yield Matrix.zeros(field, m, n)
    vs = list(enumerate_vectors(field, n, "nonzero"))
    for u in enumerate_vectors(field, m, "normalized"):
        for v in vs:
            yield outer(field, u, v)


def count_rank_le1(q: int, m: int, n: int) -> int:
    return 1 + (q**m - 1) * (q**n - 1) // (q - 1)


def enumerate_fullrank_summands(m: Matrix) -> Iterator[Matrix]:
    """Candidates for one summand of ``m`` written as ``rank(m)`` rank-<=1 terms.

    Yields ``c0 @ Z @ f0`` for every rank-<=1 ``Z`` of size r x r, where
    ``(c0, f0)`` is the full-rank factorization of ``m``.  May repeat.
    """
    field = m.field
    c0, f0 = full_rank_factorization(m)
    r = c0.ncols
    yield Matrix.zeros(field, m.nrows, m.ncols)
    left = [matvec(field, c0, u) for u in enumerate_vectors(field, r, "normalized")]
    right = [matvec(field, f0.T, v) for v in enumerate_vectors(field, r, "nonzero")]
    for u in left:
        for v in right:
            yield outer(field, u, v)


def enumerate_add1rank_summands(m: Matrix, r: int) -> Iterator[Matrix]:
    """Candidates for one summand of ``m`` (rank r-1) written as r rank-<=1 terms.

    Yields ``c0 @ Z`` for rank-<=1 Z of size (r-1) x n, then ``W @ f0`` for
    rank-<=1 W of size m x (r-1).
    """
    if m.rank() != r - 1:
        raise ValueError(f"expected rank {r - 1}, got {m.rank()}")
    field = m.field
    c0, f0 = full_rank_factorization(m)
    k = r - 1
    yield Matrix.zeros(field, m.nrows, m.ncols)
    nz_n = list(enumerate_vectors(field, m.ncols, "nonzero"))
    for u in enumerate_vectors(field, k, "normalized"):
        cu = matvec(field, c0, u)
        for v in nz_n:
            yield outer(field, cu, v)
    nz_k = [matvec(field, f0.T, v) for v in enumerate_vectors(field, k, "nonzero")]
    for u in enumerate_vectors(field, m.nrows, "normalized"):
        for vf in nz_k:
            yield outer(field, u, vf)


# ---------------------------------------------------------------------------
# Greedy monomial transform
# ---------------------------------------------------------------------------


class SpanBasis:
    """Incrementally grown echelon basis supporting membership tests."""

    def __init__(self, field: Field):
        self.field = field
        self._rows: list[tuple[int, tuple]] = []  # (pivot column, row with 1 at pivot)

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> tuple:
        f = self.field
        v = tuple(v)
        for pc, row in self._rows:
            s = v[pc]
            if s:
                v = f.axpy(f.neg(s), row, v)
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[int]) -> bool:
        red = self.reduce(v)
        for pc, x in enumerate(red):
            if x:
                self._rows.append((pc, self.field.canonical_normalize(red)))
                return True
        return False


def greedy_basis(field: Field, counts: dict) -> list[tuple]:
    """Choose normalized vectors by multiplicity (ties: lexicographically smallest),
    skipping any already in the span of those chosen."""
    basis = SpanBasis(field)
    chosen = []
    for v in sorted(counts, key=lambda v: (-counts[v], v)):
        if basis.add(v):
            chosen.append(v)
    return chosen


def monomial_transform(field: Field, chosen: Sequence[Sequence[int]], m: int) -> Matrix:
    """S with ``S @ M_V == [I; 0]`` for M_V the columns ``chosen``."""
    mv = Matrix.from_columns(field, chosen, m)
    cert = rref_with_certificate(mv, len(chosen))
    assert cert is not None and cert.r == len(chosen)
    return cert.j


def greedy_monomial(w: Matrix) -> tuple[Matrix, int]:
    """Invertible S making many columns of ``S @ w`` monomial; returns ``(S, rank(w))``."""
    field = w.field
    cols = w.columns()
    if any(not any(c) for c in cols):
        raise ValueError("greedy_monomial requires every column to be nonzero")
    counts = Counter(field.canonical_normalize(c) for c in cols)
    chosen = greedy_basis(field, counts)
    return monomial_transform(field, chosen, w.nrows), len(chosen)


def count_monomial_columns(m: Matrix) -> int:
    return sum(1 for c in m.columns() if sum(1 for x in c if x) == 1)


def monomial_bound(q: int, k: int, n: int) -> int:
    """ceil(k * max(1, n / ((q^k - 1)/(q - 1)))) in exact integers."""
    if k == 0:
        return 0
    nvec = (q**k - 1) // (q - 1)
    return max(k, -(-k * n // nvec))


def gl_order(q: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= q**r - q**i
    return out
