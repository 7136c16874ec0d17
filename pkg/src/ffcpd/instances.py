"""Instance generators: random tensors with a known CPD, matrix multiplication tensors."""

from __future__ import annotations

import random

from .compress import Cpd, Tensor3, reconstruct
from .field import Field
from .linalg import Matrix


def random_factor(field: Field, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix._raw(field, (tuple(rng.randrange(field.q) for _ in range(cols)) for _ in range(rows)), cols)


def random_instance(field: Field, shape, rank: int, seed: int) -> tuple[Tensor3, Cpd]:
    """A tensor together with a rank-``rank`` CPD witness.

    Uses Python's ``random.Random(seed)`` (MT19937, seeded by init_by_array on
    the 32-bit words of the seed).  Each element code is ``randrange(q)``,
    i.e. ``getrandbits(q.bit_length())`` redrawn until it is below q.  Codes
    are drawn for A, then B, then C, each row-major.
    """
    rng = random.Random(seed)
    n0, n1, n2 = shape
    witness = Cpd(
        field,
        random_factor(field, rank, n0, rng),
        random_factor(field, rank, n1, rng),
        random_factor(field, rank, n2, rng),
    )
    return reconstruct(witness, tuple(shape)), witness


def mm_tensor(field: Field, a: int, b: int, c: int) -> Tensor3:
    """The <a,b,c> matrix multiplication tensor of shape (ab) x (bc) x (ca).

    Entry ((i,j), (j',k), (k',i')) is 1 iff j = j', k = k', i = i'.
    """
    if min(a, b, c) < 1:
        raise ValueError("matrix dimensions must be >= 1")
    n0, n1, n2 = a * b, b * c, c * a
    data = [0] * (n0 * n1 * n2)
    for i in range(a):
        for j in range(b):
            for k in range(c):
                x, y, z = i * b + j, j * c + k, k * a + i
                data[(x * n1 + y) * n2 + z] = 1
    return Tensor3(field, (n0, n1, n2), tuple(data))


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    while True:
        m = random_factor(field, n, n, rng)
        if m.rank() == n:
            return m


def embed(t: Tensor3, sides, seed: int) -> Tensor3:
    """Map ``t`` into a larger tensor through random injective maps on every mode."""
    rng = random.Random(seed)
    out = t
    for d, n in enumerate(sides):
        if n < t.shape[d]:
            raise ValueError("embedding sides must not shrink the tensor")
        inj = random_invertible(t.field, n, rng).take_columns(t.shape[d])
        out = out.mode_product(d, inj)
    return out
