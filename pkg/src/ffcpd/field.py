"""Arithmetic in GF(p^k) on integer element codes.

For k > 1 an element code is the base-p digit encoding of its polynomial
representative (digit i is the coefficient of x^i), so 0 and 1 are always the
additive and multiplicative identities.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

MAX_TABLE_ORDER = 256
MAX_PRIME = 1 << 16

Vector = tuple  # tuple[int, ...]


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# Polynomials over GF(p) are coefficient lists, low degree first.

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (c0 compared first)."""
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """GF(p^k). Immutable after construction; use :func:`make_field`.

    Fields with q <= 256 keep full add/mul/inverse tables; larger prime
    fields fall back to modular arithmetic.
    """

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self.tabled = self.q <= MAX_TABLE_ORDER
        if self.tabled:
            self._build_tables()
        else:
            self._inv = None

    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, digits: Sequence[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.p + d
        return code

    def _poly_mul_code(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if k > 1:
            prod = _poly_mod(prod, self.modulus, p)
        prod = (list(prod) + [0] * k)[:k]
        return self._code(prod)

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        if self.k == 1:
            add = [[(a + b) % p for b in range(q)] for a in range(q)]
            mul = [[a * b % p for b in range(q)] for a in range(q)]
        else:
            digits = [self._digits(a) for a in range(q)]
            add = [
                [self._code([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
                for a in range(q)
            ]
            mul = [[self._poly_mul_code(a, b) for b in range(q)] for a in range(q)]
        neg = [row.index(0) for row in add]
        inv = [None] + [mul[a].index(1) for a in range(1, q)]
        self._add = add
        self._mul = mul
        self._neg = neg
        self._inv = inv
        self._sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"Field({self.name})"

    def __getstate__(self):
        return (self.p, self.k, self.modulus)

    def __setstate__(self, state):
        self.__init__(*state)

    @property
    def name(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    # scalar ops
    def add(self, a: int, b: int) -> int:
        return self._add[a][b] if self.tabled else (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return self._sub[a][b] if self.tabled else (a - b) % self.p

    def neg(self, a: int) -> int:
        return self._neg[a] if self.tabled else (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b] if self.tabled else a * b % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._inv[a] if self.tabled else pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # vector ops on tuples of codes
    def scale(self, s: int, v: Sequence[int]) -> Vector:
        if self.tabled:
            m = self._mul[s]
            return tuple([m[x] for x in v])
        p = self.p
        return tuple([s * x % p for x in v])

    def vadd(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        if self.tabled:
            a = self._add
            return tuple([a[x][y] for x, y in zip(u, v)])
        p = self.p
        return tuple([(x + y) % p for x, y in zip(u, v)])

    def vsub(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        if self.tabled:
            s = self._sub
            return tuple([s[x][y] for x, y in zip(u, v)])
        p = self.p
        return tuple([(x - y) % p for x, y in zip(u, v)])

    def axpy(self, s: int, x: Sequence[int], y: Sequence[int]) -> Vector:
        """y + s*x."""
        if self.tabled:
            m = self._mul[s]
            a = self._add
            return tuple([a[yi][m[xi]] for xi, yi in zip(x, y)])
        p = self.p
        return tuple([(yi + s * xi) % p for xi, yi in zip(x, y)])

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        if self.tabled:
            m, a = self._mul, self._add
            acc = 0
            for x, y in zip(u, v):
                if x and y:
                    acc = a[acc][m[x][y]]
            return acc
        return sum(x * y for x, y in zip(u, v)) % self.p

    def canonical_normalize(self, v: Sequence[int]) -> Vector:
        for x in v:
            if x:
                return tuple(v) if x == 1 else self.scale(self.inv(x), v)
        raise FieldError("cannot normalize the zero vector")

    def elements(self) -> range:
        return range(self.q)


def is_monomial(v: Sequence[int]) -> bool:
    return sum(1 for x in v if x) == 1


def make_field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> Field:
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    q = p**k
    if k == 1:
        if p >= MAX_PRIME:
            raise FieldError(f"prime fields are supported for p < {MAX_PRIME}")
    elif q > MAX_TABLE_ORDER:
        raise FieldError(f"extension fields are supported for q <= {MAX_TABLE_ORDER}")
    if k == 1:
        if modulus is not None and tuple(modulus) not in ((0, 1),):
            raise FieldError("prime fields take no modulus (or the placeholder 0,1)")
        return Field(p, 1, (0, 1))
    if modulus is None:
        modulus = smallest_irreducible(p, k)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {k}: {modulus}")
    if any(not 0 <= c < p for c in modulus):
        raise FieldError(f"modulus coefficients must lie in [0, {p})")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    return Field(p, k, modulus)


def parse_field(text: str, modulus: str | Sequence[int] | None = None) -> Field:
    """Parse ``p`` or ``p^k`` (optionally with a ``c0,c1,...,ck`` modulus)."""
    text = text.strip()
    try:
        if "^" in text:
            p_s, k_s = text.split("^")
            p, k = int(p_s), int(k_s)
        else:
            p, k = int(text), 1
    except ValueError:
        raise FieldError(f"bad field specifier {text!r}") from None
    if isinstance(modulus, str):
        modulus = [int(c) for c in modulus.split(",")]
    return make_field(p, k, modulus)


def count_vectors(q: int, n: int, mode: str) -> int:
    if mode == "all":
        return q**n
    if mode == "nonzero":
        return q**n - 1
    if mode == "normalized":
        return (q**n - 1) // (q - 1)
    raise ValueError(f"unknown mode {mode!r}")


def enumerate_vectors(field: Field, n: int, mode: str = "all") -> Iterator[Vector]:
    """Vectors of length n in lexicographic order.

    ``mode`` is ``all``, ``nonzero`` or ``normalized`` (first nonzero entry 1).
    """
    q = field.q
    if mode == "all":
        yield from itertools.product(range(q), repeat=n)
    elif mode == "nonzero":
        it = itertools.product(range(q), repeat=n)
        next(it)
        yield from it
    elif mode == "normalized":
        for lead in range(n - 1, -1, -1):
            prefix = (0,) * lead + (1,)
            for tail in itertools.product(range(q), repeat=n - lead - 1):
                yield prefix + tail
    else:
        raise ValueError(f"unknown mode {mode!r}")


def canonical_normalize(field: Field, v: Sequence[int]) -> Vector:
    return field.canonical_normalize(v)
