"""Exact rank-R CPD search over a finite field.

The input tensor is first compressed to a core with independent slices along
every mode; one of three core strategies then searches for a CPD:

``brute``
    every A and B with normalized rows, every C.  Desk-scale oracle only.
``fix_two``
    every A and B with normalized rows; C from a linear solve.
``fix_one``
    every A with normalized rows; the system ``sum_r A[r, i] M_r = T_i`` for
    rank-<=1 matrices ``M_r`` is row-reduced with the greedy monomial
    transform and solved by casework on the number of non-monomial columns.

The outer enumeration (over A, or over (A, B) row pairs) is indexed, so any
contiguous index range can be searched independently by a worker process.
"""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
import time
from collections import Counter
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .compress import Cpd, Tensor3, compress, lift, mode_ranks, reconstruct
from .field import Field, enumerate_vectors
from .linalg import (
    Matrix,
    SpanBasis,
    enumerate_add1rank_summands,
    enumerate_fullrank_summands,
    enumerate_rank_le1,
    full_rank_factorization,
    greedy_basis,
    matvec,
    monomial_transform,
    outer,
    pack,
    rank_of_rows,
    solve_right,
)

log = logging.getLogger(__name__)

STRATEGIES = ("fix_one", "fix_two", "brute")
_CANCEL_CHECK = 64
_CACHE_LIMIT = 1 << 16  # per-search memo entries before a reset


class SolverInvariantError(RuntimeError):
    """A returned decomposition failed exact verification."""


@dataclass
class SolveReport:
    cpd: Cpd | None
    stats: Counter = dc_field(default_factory=Counter)
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.cpd is not None


# ---------------------------------------------------------------------------
# Indexed enumeration of the outer search space
# ---------------------------------------------------------------------------


def space_size(n: int, r: int, nondecreasing: bool) -> int:
    """Number of length-r index sequences over range(n)."""
    if nondecreasing:
        return math.comb(n + r - 1, r) if n > 0 or r == 0 else 0
    return n**r


def unrank(t: int, n: int, r: int, nondecreasing: bool) -> list[int]:
    """The t-th sequence (lexicographic order) of the space sized by :func:`space_size`."""
    if not nondecreasing:
        out = []
        for _ in range(r):
            t, d = divmod(t, n)
            out.append(d)
        return out[::-1]
    out = []
    lo = 0
    for pos in range(r):
        rem = r - pos - 1
        v = lo
        while True:
            c = math.comb(n - v + rem - 1, rem) if rem else 1
            if t < c:
                break
            t -= c
            v += 1
        out.append(v)
        lo = v
    return out


def index_stream(n: int, r: int, nondecreasing: bool, start: int = 0, stop: int | None = None) -> Iterator[tuple]:
    """Sequences ``start .. stop-1`` of the lexicographic enumeration, restartable at any offset."""
    total = space_size(n, r, nondecreasing)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    cur = unrank(start, n, r, nondecreasing)
    for _ in range(stop - start):
        yield tuple(cur)
        pos = r - 1
        while pos >= 0 and cur[pos] == n - 1:
            pos -= 1
        if pos < 0:
            return
        cur[pos] += 1
        fill = cur[pos] if nondecreasing else 0
        for p in range(pos + 1, r):
            cur[p] = fill


# ---------------------------------------------------------------------------
# Reduced system and its casework
# ---------------------------------------------------------------------------


@dataclass
class ReducedSystem:
    """``X_i + sum_p alpha[i][p] Y_p = D_i`` for ``0 <= i < k``.

    ``monomial_cols[i]`` lists ``(column r, coefficient)`` for the monomial
    columns with their nonzero at row i (X_i is their weighted sum);
    ``nonmono_cols`` lists ``(column r, alpha vector)`` for the rest.
    """

    k: int
    d: list
    monomial_cols: list
    nonmono_cols: list

    @property
    def chi(self) -> list[int]:
        return [len(mc) for mc in self.monomial_cols]

    @property
    def p(self) -> int:
        return len(self.nonmono_cols)

    def n(self) -> list[int]:
        return [
            len(self.monomial_cols[i]) + sum(1 for _, al in self.nonmono_cols if al[i])
            for i in range(self.k)
        ]


def _p_label(p: int) -> str:
    return f"P{p}" if p <= 2 else "P>2"


def solve_reduced(sys: ReducedSystem, stats: Counter | None = None) -> dict | None:
    """Assign every ``M_r`` (rank <= 1) solving the reduced system, or None."""
    if stats is None:
        stats = Counter()
    if sys.k < 1 or len(sys.d) != sys.k:
        raise ValueError("reduced system needs k >= 1 equations")
    if any(len(mc) < 1 for mc in sys.monomial_cols):
        raise ValueError("every equation needs at least one monomial column")
    shape = sys.d[0].shape
    field = sys.d[0].field
    ctx = _Ctx(field, shape, stats)
    stats["sys_" + _p_label(sys.p)] += 1
    return ctx.solve(list(sys.d), sys.monomial_cols, list(sys.nonmono_cols))


class _Ctx:
    def __init__(self, field: Field, shape, stats: Counter):
        self.field = field
        self.shape = shape
        self.stats = stats
        self.zero = Matrix.zeros(field, *shape)
        self._rank1 = None

    def rank_le1(self) -> list:
        if self._rank1 is None:
            self._rank1 = list(enumerate_rank_le1(self.field, *self.shape))
        return self._rank1

    def solve(self, ds, mono, free):
        k = len(ds)
        ranks = [d.rank() for d in ds]
        chi = [len(mc) for mc in mono]
        n = [chi[i] + sum(1 for _, al in free if al[i]) for i in range(k)]
        for i in range(k):
            if ranks[i] > n[i]:
                return None
        P = len(free)
        if P == 0:
            return self.assign_p0(ds, mono, ranks)
        if P == 1:
            for i in range(k):
                if ranks[i] == n[i] == chi[i] + 1:
                    return self.branch(ds, mono, free, 0, enumerate_fullrank_summands(ds[i]), i)
            return self.all_zero(ds, mono, free, ranks)
        if P == 2:
            for i in range(k):
                if ranks[i] == n[i] and n[i] >= chi[i] + 1:
                    p = next(p for p, (_, al) in enumerate(free) if al[i])
                    return self.branch(ds, mono, free, p, enumerate_fullrank_summands(ds[i]), i)
            for i in range(k):
                if ranks[i] == n[i] - 1 and n[i] == chi[i] + 2:
                    return self.branch(ds, mono, free, 1, enumerate_add1rank_summands(ds[i], n[i]), i)
            return self.all_zero(ds, mono, free, ranks)
        return self.branch(ds, mono, free, P - 1, self.rank_le1(), None)

    def branch(self, ds, mono, free, p, candidates, i):
        """Try every candidate for ``Y_p`` (summand candidates of D_i if i is set)."""
        field = self.field
        col, alpha = free[p]
        rest = free[:p] + free[p + 1 :]
        scale = field.inv(alpha[i]) if i is not None else 1
        label = "y_" + _p_label(len(free))
        for cand in candidates:
            self.stats[label] += 1
            y = cand if scale == 1 else cand.scaled(scale)
            nds = [d if not al else d - y.scaled(al) for d, al in zip(ds, alpha)]
            res = self.solve(nds, mono, rest)
            if res is not None:
                res[col] = y
                return res
        return None

    def all_zero(self, ds, mono, free, ranks):
        res = self.assign_p0(ds, mono, ranks)
        if res is not None:
            for col, _ in free:
                res[col] = self.zero
        return res

    def assign_p0(self, ds, mono, ranks):
        for rk, mc in zip(ranks, mono):
            if rk > len(mc):
                return None
        field = self.field
        out = {}
        for d, rk, mc in zip(ds, ranks, mono):
            if rk:
                c0, f0 = full_rank_factorization(d)
                cols = c0.columns()
            for t, (col, coef) in enumerate(mc):
                if t < rk:
                    u = cols[t]
                    if coef != 1:
                        u = field.scale(field.inv(coef), u)
                    out[col] = outer(field, u, f0.rows[t])
                else:
                    out[col] = self.zero
        return out


def split_rank1(ms: Sequence[Matrix], field: Field | None = None, shape=None) -> tuple[Matrix, Matrix]:
    """Factor each rank-<=1 ``M_r`` as ``B[r] x C[r]``; zero matrices give zero rows.

    ``field`` and ``shape`` are only needed when ``ms`` is empty.
    """
    if not ms:
        if field is None or shape is None:
            raise ValueError("field and shape are required for an empty list")
        return Matrix.zeros(field, 0, shape[0]), Matrix.zeros(field, 0, shape[1])
    field = ms[0].field
    m, n = ms[0].shape
    brows, crows = [], []
    for mat in ms:
        pos = next(((i, j) for i, row in enumerate(mat.rows) for j, x in enumerate(row) if x), None)
        if pos is None:
            brows.append((0,) * m)
            crows.append((0,) * n)
            continue
        i0, j0 = pos
        v = mat.rows[i0]
        piv_inv = field.inv(v[j0])
        u = tuple(field.mul(row[j0], piv_inv) for row in mat.rows)
        if outer(field, u, v) != mat:
            raise ValueError("split_rank1 input has rank > 1")
        brows.append(u)
        crows.append(v)
    return Matrix._raw(field, brows, m), Matrix._raw(field, crows, n)


# ---------------------------------------------------------------------------
# Core strategies
# ---------------------------------------------------------------------------


class _Search:
    """Indexed search over one strategy's outer enumeration for a fixed core."""

    name = ""

    def __init__(self, core: Tensor3, r: int, symmetry_breaking: bool = True):
        self.core = core
        self.r = r
        self.sym = symmetry_breaking
        self.field = core.field
        self.R0, self.R1, self.R2 = core.shape
        self.full_slices = mode_ranks(core) == core.shape

    def size(self) -> int:
        raise NotImplementedError

    def search(self, start: int, stop: int, stats: Counter, should_stop=None) -> Cpd | None:
        raise NotImplementedError


class FixOneSearch(_Search):
    name = "fix_one"

    def __init__(self, core, r, symmetry_breaking=True):
        super().__init__(core, r, symmetry_breaking)
        self.vecs = list(enumerate_vectors(self.field, self.R0, "normalized"))
        self.flat_slices = [core.slice0(j).flat() for j in range(self.R0)]
        self._zero_flat = (0,) * (self.R1 * self.R2)
        self._by_basis: dict = {}
        self._col_cache: dict = {}

    def size(self):
        return space_size(len(self.vecs), self.r, self.sym)

    def _transform(self, chosen: tuple):
        hit = self._by_basis.get(chosen)
        if hit is None:
            if len(self._by_basis) >= _CACHE_LIMIT:
                self._by_basis.clear()
            field = self.field
            s = monomial_transform(field, chosen, self.R0)
            k = len(chosen)
            n1, n2 = self.R1, self.R2
            ds = []
            for i in range(self.R0):
                acc = self._zero_flat
                for x, sl in zip(s.rows[i], self.flat_slices):
                    if x:
                        acc = field.axpy(x, sl, acc)
                ds.append(acc)
            ok = not any(any(d) for d in ds[k:])
            ds = [Matrix._raw(field, (d[j * n2 : (j + 1) * n2] for j in range(n1)), n2) for d in ds[:k]]
            hit = (s, ds, ok)
            self._by_basis[chosen] = hit
        return hit

    def _column(self, chosen, s, a):
        key = (chosen, a)
        col = self._col_cache.get(key)
        if col is None:
            if len(self._col_cache) >= _CACHE_LIMIT:
                self._col_cache.clear()
            col = matvec(self.field, s, a)
            if any(col[len(chosen) :]):
                raise AssertionError("transformed column has support outside the live rows")
            self._col_cache[key] = col
        return col

    def try_a(self, idx: Sequence[int], stats: Counter) -> Cpd | None:
        field = self.field
        rows = [self.vecs[i] for i in idx]
        chosen = tuple(greedy_basis(field, Counter(rows)))
        if self.full_slices and len(chosen) < self.R0:
            # independent core slices: some D_i with i >= K is nonzero
            stats["a_rejected"] += 1
            return None
        s, ds, ok = self._transform(chosen)
        if not ok:
            stats["a_rejected"] += 1
            return None
        k = len(chosen)
        mono = [[] for _ in range(k)]
        free = []
        for col_idx, a in enumerate(rows):
            col = self._column(chosen, s, a)
            nz = [i for i in range(k) if col[i]]
            if len(nz) == 1:
                mono[nz[0]].append((col_idx, col[nz[0]]))
            else:
                free.append((col_idx, col[:k]))
        sys = ReducedSystem(k, ds, mono, free)
        ms = solve_reduced(sys, stats)
        if ms is None:
            return None
        b, c = split_rank1([ms[j] for j in range(self.r)])
        return Cpd(field, Matrix._raw(field, rows, self.R0), b, c)

    def search(self, start, stop, stats, should_stop=None):
        for n, idx in enumerate(index_stream(len(self.vecs), self.r, self.sym, start, stop)):
            if should_stop is not None and n % _CANCEL_CHECK == 0 and should_stop():
                stats["cancelled"] += 1
                return None
            stats["candidates"] += 1
            cpd = self.try_a(idx, stats)
            if cpd is not None:
                return cpd
        return None


class FixTwoSearch(_Search):
    name = "fix_two"

    def __init__(self, core, r, symmetry_breaking=True):
        super().__init__(core, r, symmetry_breaking)
        field = self.field
        self.avecs = list(enumerate_vectors(field, self.R0, "normalized"))
        self.bvecs = list(enumerate_vectors(field, self.R1, "normalized"))
        self.npairs = len(self.avecs) * len(self.bvecs)
        self.target = core.flattening(2).T  # (R0*R1) x R2
        self._zcols = {}
        self._rank_cache = {}
        self.gf2 = field.q == 2
        if self.gf2:
            self.tcols = [pack(col) for col in core.flattening(2).rows]
        else:
            self.tcols = list(core.flattening(2).rows)

    def size(self):
        return space_size(self.npairs, self.r, self.sym)

    def _pair(self, p):
        hit = self._zcols.get(p)
        if hit is None:
            nb = len(self.bvecs)
            a, b = self.avecs[p // nb], self.bvecs[p % nb]
            z = tuple(self.field.mul(x, y) for x in a for y in b)
            hit = self._zcols[p] = (z, pack(z) if self.gf2 else z)
        return hit

    def _full_rank(self, vecs_key, vecs, want):
        key = (want, vecs_key)
        hit = self._rank_cache.get(key)
        if hit is None:
            if len(self._rank_cache) >= _CACHE_LIMIT:
                self._rank_cache.clear()
            hit = rank_of_rows(self.field, vecs, len(vecs[0])) == want
            self._rank_cache[key] = hit
        return hit

    def _feasible(self, zs) -> bool:
        if self.gf2:
            basis = {}
            for x in zs:
                while x:
                    low = x & -x
                    b = basis.get(low)
                    if b is None:
                        basis[low] = x
                        break
                    x ^= b
            for x in self.tcols:
                while x:
                    b = basis.get(x & -x)
                    if b is None:
                        return False
                    x ^= b
            return True
        basis = SpanBasis(self.field)
        for z in zs:
            basis.add(z)
        return all(basis.contains(t) for t in self.tcols)

    def try_pairs(self, pidx, stats) -> Cpd | None:
        nb = len(self.bvecs)
        ai = tuple(sorted(p // nb for p in pidx))
        bi = tuple(sorted(p % nb for p in pidx))
        if self.full_slices:
            if not self._full_rank(("a",) + ai, [self.avecs[i] for i in ai], self.R0):
                return None
            if not self._full_rank(("b",) + bi, [self.bvecs[i] for i in bi], self.R1):
                return None
        pairs = [self._pair(p) for p in pidx]
        if not self._feasible([pz for _, pz in pairs]):
            return None
        field = self.field
        zmat = Matrix.from_columns(field, [z for z, _ in pairs], self.R0 * self.R1)
        c = solve_right(zmat, self.target)
        if c is None:
            return None
        a = Matrix._raw(field, (self.avecs[p // nb] for p in pidx), self.R0)
        b = Matrix._raw(field, (self.bvecs[p % nb] for p in pidx), self.R1)
        return Cpd(field, a, b, c)

    def search(self, start, stop, stats, should_stop=None):
        for n, pidx in enumerate(index_stream(self.npairs, self.r, self.sym, start, stop)):
            if should_stop is not None and n % _CANCEL_CHECK == 0 and should_stop():
                stats["cancelled"] += 1
                return None
            stats["candidates"] += 1
            cpd = self.try_pairs(pidx, stats)
            if cpd is not None:
                return cpd
        return None


class BruteSearch(_Search):
    """Every A (indexed), every B, and every C row by row."""

    name = "brute"

    def __init__(self, core, r, symmetry_breaking=False):
        super().__init__(core, r, symmetry_breaking)
        field = self.field
        self.avecs = list(enumerate_vectors(field, self.R0, "normalized"))
        self.bvecs = list(enumerate_vectors(field, self.R1, "normalized"))
        self.cvecs = list(enumerate_vectors(field, self.R2, "all"))
        self.gf2 = field.q == 2
        self.target = self._enc(core.data)
        self._terms = {}

    def _enc(self, flat):
        return pack(flat) if self.gf2 else tuple(flat)

    def _plus(self, x, y):
        return x ^ y if self.gf2 else self.field.vadd(x, y)

    def _minus(self, x, y):
        return x ^ y if self.gf2 else self.field.vsub(x, y)

    def _pair_terms(self, ai, bi):
        key = (ai, bi)
        hit = self._terms.get(key)
        if hit is None:
            field = self.field
            ab = [field.mul(x, y) for x in self.avecs[ai] for y in self.bvecs[bi]]
            terms = []
            for c in self.cvecs:
                flat = []
                for x in ab:
                    flat.extend(field.scale(x, c))
                terms.append((self._enc(flat), c))
            hit = (terms, {enc: c for enc, c in terms})
            self._terms[key] = hit
        return hit

    def size(self):
        return space_size(len(self.avecs), self.r, self.sym)

    def _search_c(self, pair_terms, t, partial, chosen):
        terms, lookup = pair_terms[t]
        if t == len(pair_terms) - 1:
            c = lookup.get(self._minus(self.target, partial))
            return None if c is None else chosen + [c]
        for enc, c in terms:
            res = self._search_c(pair_terms, t + 1, self._plus(partial, enc), chosen + [c])
            if res is not None:
                return res
        return None

    def search(self, start, stop, stats, should_stop=None):
        field = self.field
        zero = self._enc((0,) * (self.R0 * self.R1 * self.R2))
        nb = len(self.bvecs)
        n = 0
        for aidx in index_stream(len(self.avecs), self.r, self.sym, start, stop):
            for bidx in index_stream(nb, self.r, False):
                if should_stop is not None and n % _CANCEL_CHECK == 0 and should_stop():
                    stats["cancelled"] += 1
                    return None
                n += 1
                stats["candidates"] += 1
                pair_terms = [self._pair_terms(ai, bi) for ai, bi in zip(aidx, bidx)]
                cs = self._search_c(pair_terms, 0, zero, [])
                if cs is not None:
                    return Cpd(
                        field,
                        Matrix._raw(field, (self.avecs[i] for i in aidx), self.R0),
                        Matrix._raw(field, (self.bvecs[i] for i in bidx), self.R1),
                        Matrix._raw(field, cs, self.R2),
                    )
        return None


_SEARCHES = {"fix_one": FixOneSearch, "fix_two": FixTwoSearch, "brute": BruteSearch}


def make_search(strategy: str, core: Tensor3, r: int, symmetry_breaking: bool | None = None) -> _Search:
    try:
        cls = _SEARCHES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}") from None
    if symmetry_breaking is None:
        return cls(core, r)
    return cls(core, r, symmetry_breaking)


def _check_core(core: Tensor3, r: int) -> None:
    if max(core.shape) > r:
        raise ValueError(f"core sides {core.shape} exceed rank {r}; compress first")


def _core_solve(strategy, core, r, symmetry_breaking, stats):
    _check_core(core, r)
    if stats is None:
        stats = Counter()
    if min(core.shape) == 0:
        return Cpd.zeros(core.field, r, core.shape)
    s = make_search(strategy, core, r, symmetry_breaking)
    return s.search(0, s.size(), stats)


def solve_core_brute(core: Tensor3, r: int, symmetry_breaking: bool = False, stats: Counter | None = None):
    return _core_solve("brute", core, r, symmetry_breaking, stats)


def solve_core_fix_two(core: Tensor3, r: int, symmetry_breaking: bool = True, stats: Counter | None = None):
    return _core_solve("fix_two", core, r, symmetry_breaking, stats)


def solve_core_fix_one(core: Tensor3, r: int, symmetry_breaking: bool = True, stats: Counter | None = None):
    return _core_solve("fix_one", core, r, symmetry_breaking, stats)


# ---------------------------------------------------------------------------
# Worker partitioning
# ---------------------------------------------------------------------------

_WORKER: dict = {}


def _worker_init(strategy, core, r, sym, stop_at):
    _WORKER["search"] = make_search(strategy, core, r, sym)
    _WORKER["stop_at"] = stop_at


def _worker_run(chunk, lo, hi):
    stop_at = _WORKER["stop_at"]
    stats = Counter()
    cpd = _WORKER["search"].search(lo, hi, stats, lambda: stop_at.value < chunk)
    return chunk, cpd, stats


def partition(total: int, parts: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into at most ``parts`` contiguous nonempty ranges."""
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def run_search(
    strategy: str,
    core: Tensor3,
    r: int,
    *,
    symmetry_breaking: bool | None = None,
    threads: int = 1,
    deterministic: bool = True,
    chunks_per_worker: int = 8,
    stats: Counter | None = None,
) -> Cpd | None:
    """Search the core, optionally across worker processes.

    With ``deterministic`` the result is the first solution in enumeration
    order whatever the worker count; otherwise the first one any worker finds.
    """
    if stats is None:
        stats = Counter()
    _check_core(core, r)
    if min(core.shape) == 0:
        return Cpd.zeros(core.field, r, core.shape)
    search = make_search(strategy, core, r, symmetry_breaking)
    total = search.size()
    if threads <= 1 or total < 2:
        return search.search(0, total, stats)
    chunks = partition(total, threads * chunks_per_worker)
    ctx = mp.get_context()
    big = len(chunks) + 1
    stop_at = ctx.Value("q", big)
    found: dict = {}
    with ProcessPoolExecutor(
        max_workers=threads,
        mp_context=ctx,
        initializer=_worker_init,
        initargs=(strategy, core, r, symmetry_breaking, stop_at),
    ) as ex:
        pending = {ex.submit(_worker_run, i, lo, hi) for i, (lo, hi) in enumerate(chunks)}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                chunk, cpd, st = fut.result()
                stats.update(st)
                if cpd is None:
                    continue
                found[chunk] = cpd
                with stop_at.get_lock():
                    stop_at.value = min(stop_at.value, chunk) if deterministic else -1
            if found and not deterministic:
                for fut in pending:
                    fut.cancel()
                break
    if not found:
        return None
    return found[min(found)]


# ---------------------------------------------------------------------------
# Top level
# ---------------------------------------------------------------------------


def solve(
    t: Tensor3,
    r: int,
    strategy: str = "fix_one",
    *,
    symmetry_breaking: bool | None = None,
    threads: int = 1,
    deterministic: bool = True,
) -> SolveReport:
    """Decide whether ``t`` has a CPD with ``r`` terms and return one if so."""
    if r < 0:
        raise ValueError("rank must be >= 0")
    if strategy not in _SEARCHES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    t0 = time.perf_counter()
    stats = Counter()
    comp = compress(t, r)
    if comp is None:
        stats["compress_rejected"] += 1
        return SolveReport(None, stats, time.perf_counter() - t0)
    core = comp.core
    core_cpd = run_search(
        strategy,
        core,
        r,
        symmetry_breaking=symmetry_breaking,
        threads=threads,
        deterministic=deterministic,
        stats=stats,
    )
    cpd = None
    if core_cpd is not None:
        if reconstruct(core_cpd, core.shape) != core:
            raise SolverInvariantError(f"{strategy} returned a CPD that does not reconstruct the core")
        cpd = lift(core_cpd, comp)
        if reconstruct(cpd, t.shape) != t:
            raise SolverInvariantError("lifted CPD does not reconstruct the input tensor")
    elapsed = time.perf_counter() - t0
    log.debug("solve r=%d strategy=%s found=%s stats=%s", r, strategy, cpd is not None, dict(stats))
    return SolveReport(cpd, stats, elapsed)


def min_rank(t: Tensor3, r_max: int, strategy: str = "fix_one", **kwargs) -> tuple[int, Cpd] | None:
    """Smallest r <= r_max admitting a CPD, starting from the largest mode rank."""
    start = max(mode_ranks(t))
    for r in range(start, r_max + 1):
        rep = solve(t, r, strategy, **kwargs)
        if rep.found:
            return r, rep.cpd
    return None
