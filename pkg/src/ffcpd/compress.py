"""Mode-wise basis extraction for 3-tensors and lifting of core decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import Field
from .linalg import Matrix, rref_with_certificate


@dataclass(frozen=True)
class Tensor3:
    field: Field
    shape: tuple[int, int, int]
    data: tuple  # row-major over (i, j, k)

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "data", tuple(self.data))
        n0, n1, n2 = self.shape
        if min(self.shape) < 0:
            raise ValueError("negative tensor side")
        if len(self.data) != n0 * n1 * n2:
            raise ValueError(f"expected {n0 * n1 * n2} entries, got {len(self.data)}")
        q = self.field.q
        if any(not 0 <= x < q for x in self.data):
            raise ValueError(f"element code out of range for GF({self.field.name})")

    @classmethod
    def zeros(cls, field: Field, shape) -> "Tensor3":
        n0, n1, n2 = shape
        return cls(field, shape, (0,) * (n0 * n1 * n2))

    def __getitem__(self, ijk):
        i, j, k = ijk
        _, n1, n2 = self.shape
        return self.data[(i * n1 + j) * n2 + k]

    def is_zero(self) -> bool:
        return not any(self.data)

    def slice0(self, i: int) -> Matrix:
        _, n1, n2 = self.shape
        base = i * n1 * n2
        return Matrix._raw(self.field, (self.data[base + j * n2 : base + (j + 1) * n2] for j in range(n1)), n2)

    def flattening(self, mode: int) -> Matrix:
        """Mode-``mode`` slices as rows, each flattened row-major over the other two modes."""
        n0, n1, n2 = self.shape
        d = self.data
        if mode == 0:
            rows = (d[i * n1 * n2 : (i + 1) * n1 * n2] for i in range(n0))
            ncols = n1 * n2
        elif mode == 1:
            rows = (tuple(d[(i * n1 + j) * n2 + k] for i in range(n0) for k in range(n2)) for j in range(n1))
            ncols = n0 * n2
        elif mode == 2:
            rows = (tuple(d[(i * n1 + j) * n2 + k] for i in range(n0) for j in range(n1)) for k in range(n2))
            ncols = n0 * n1
        else:
            raise ValueError(f"bad mode {mode}")
        return Matrix._raw(self.field, rows, ncols)

    @classmethod
    def from_flattening(cls, field: Field, mode: int, m: Matrix, other: tuple[int, int]) -> "Tensor3":
        a, b = other
        length = m.nrows
        if mode == 0:
            shape = (length, a, b)
            data = tuple(x for row in m.rows for x in row)
            return cls(field, shape, data)
        if mode == 1:
            shape = (a, length, b)
            data = tuple(m.rows[j][i * b + k] for i in range(a) for j in range(length) for k in range(b))
            return cls(field, shape, data)
        if mode == 2:
            shape = (a, b, length)
            data = tuple(m.rows[k][i * b + j] for i in range(a) for j in range(b) for k in range(length))
            return cls(field, shape, data)
        raise ValueError(f"bad mode {mode}")

    def mode_product(self, mode: int, m: Matrix) -> "Tensor3":
        """Apply ``m`` (new_len x n_mode) along ``mode``."""
        shape = list(self.shape)
        other = tuple(s for d, s in enumerate(shape) if d != mode)
        flat = m @ self.flattening(mode)
        return Tensor3.from_flattening(self.field, mode, flat, other)


@dataclass(frozen=True)
class Cpd:
    field: Field
    a: Matrix
    b: Matrix
    c: Matrix

    def __post_init__(self):
        if not (self.a.nrows == self.b.nrows == self.c.nrows):
            raise ValueError("factor matrices must have equal row counts")

    @property
    def r(self) -> int:
        return self.a.nrows

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.a.ncols, self.b.ncols, self.c.ncols)

    @classmethod
    def zeros(cls, field: Field, r: int, shape) -> "Cpd":
        n0, n1, n2 = shape
        return cls(field, Matrix.zeros(field, r, n0), Matrix.zeros(field, r, n1), Matrix.zeros(field, r, n2))


def reconstruct(cpd: Cpd, shape: Sequence[int] | None = None) -> Tensor3:
    if shape is None:
        shape = cpd.shape
    shape = tuple(shape)
    if cpd.shape != shape:
        raise ValueError(f"CPD factor widths {cpd.shape} do not match shape {shape}")
    field = cpd.field
    n0, n1, n2 = shape
    acc = (0,) * (n0 * n1 * n2)
    for ra, rb, rc in zip(cpd.a.rows, cpd.b.rows, cpd.c.rows):
        term = []
        for x in ra:
            for y in rb:
                term.extend(field.scale(field.mul(x, y), rc))
        acc = field.vadd(acc, term)
    return Tensor3(field, shape, acc)


@dataclass(frozen=True)
class Compression:
    """Core tensor plus per-mode change-of-basis certificates.

    ``gammas[d] @ gamma_invs[d] == I`` and applying ``gamma_invs[d][:, :ranks[d]]``
    along every mode of ``core`` gives back the original tensor.
    """

    core: Tensor3
    gammas: tuple[Matrix, Matrix, Matrix]
    gamma_invs: tuple[Matrix, Matrix, Matrix]
    ranks: tuple[int, int, int]
    shape: tuple[int, int, int]

    def expand(self, core: Tensor3 | None = None) -> Tensor3:
        t = self.core if core is None else core
        for d in range(3):
            t = t.mode_product(d, self.gamma_invs[d].take_columns(self.ranks[d]))
        return t


def mode_reduce(t: Tensor3, mode: int, rank_cap: int):
    """Replace the mode-``mode`` slices of ``t`` by the nonzero rows of their rref.

    Returns ``(reduced, gamma, gamma_inv, r)`` or ``None`` if the flattening
    rank exceeds ``rank_cap``.
    """
    flat = t.flattening(mode)
    cert = rref_with_certificate(flat, rank_cap)
    if cert is None:
        return None
    other = tuple(s for d, s in enumerate(t.shape) if d != mode)
    reduced = Tensor3.from_flattening(t.field, mode, cert.f, other)
    return reduced, cert.j, cert.c, cert.r


def compress(t: Tensor3, rank_cap: int) -> Compression | None:
    cur = t
    gammas, invs, ranks = [], [], []
    for mode in range(3):
        res = mode_reduce(cur, mode, rank_cap)
        if res is None:
            return None
        cur, g, gi, r = res
        gammas.append(g)
        invs.append(gi)
        ranks.append(r)
    return Compression(cur, tuple(gammas), tuple(invs), tuple(ranks), t.shape)


def mode_ranks(t: Tensor3) -> tuple[int, int, int]:
    return tuple(t.flattening(d).rank() for d in range(3))


def lift(core_cpd: Cpd, comp: Compression) -> Cpd:
    """Map a CPD of ``comp.core`` to a CPD of the original tensor."""
    if core_cpd.shape != comp.core.shape:
        raise ValueError(f"core CPD widths {core_cpd.shape} do not match core {comp.core.shape}")
    factors = []
    for d, fac in enumerate((core_cpd.a, core_cpd.b, core_cpd.c)):
        basis = comp.gamma_invs[d].take_columns(comp.ranks[d])
        if fac.nrows == 0:
            factors.append(Matrix.zeros(fac.field, 0, basis.nrows))
        else:
            factors.append(fac @ basis.T)
    return Cpd(core_cpd.field, *factors)
