"""Closed-form constant-factor model for the fix-one and fix-two searches.

Everything is computed with exact rationals; convert with ``float`` for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import gl_order

# Reference constants at 3 significant figures, R = 1..5.
REFERENCE_CONSTANTS = {
    "fix_one": {
        2: (4.0, 80.0, 2.05e4, 6.29e6, 3.98e10),
        3: (2.25, 55.7, 8.31e4, 1.24e9, 5.45e13),
    },
    "fix_two": {
        2: (4.0, 2.56e2, 2.62e5, 4.29e9, 1.13e15),
        3: (2.25, 4.1e2, 6.05e6, 7.24e12, 5.91e15),
    },
}


@dataclass(frozen=True)
class CostParams:
    q: int
    r: int

    def __post_init__(self):
        if self.q < 2 or self.r < 1:
            raise ValueError("need q >= 2 and r >= 1")


def f(n: int, k: int, q: int) -> Fraction:
    """q^n / (q-1)^k."""
    return Fraction(q) ** n / Fraction(q - 1) ** k


def mu(r: int, k: int, q: int) -> int:
    """Guaranteed monomial-column count ceil(k * max(1, r / ((q^k-1)/(q-1))))."""
    if not 1 <= k <= r:
        raise ValueError("need 1 <= k <= r")
    nvec = (q**k - 1) // (q - 1)
    return max(k, -(-k * r // nvec))


def _pexp_exponents(r: int, k: int, p: int) -> tuple[int, int]:
    if p == 0:
        return (0, 0)
    if p == 1:
        return (2 * (r - k + 1), 1)
    return (2 * p * r - 3 * (p + k) + 6, p)


def pexp(r: int, k: int, p: int, q: int) -> Fraction:
    """Cost of the reduced-system casework with p non-monomial columns."""
    if p < 0:
        raise ValueError("p must be >= 0")
    return f(*_pexp_exponents(r, k, p), q)


def fix_one_constant(r: int, q: int) -> Fraction:
    CostParams(q, r)
    total = f(2 * r, r + 1, q)
    for k in range(2, r + 1):
        total += f(k * (2 * r - k + 1), k + r, q) * pexp(r, k, r - mu(r, k, q), q)
    return total


def fix_two_constant(r: int, q: int) -> Fraction:
    CostParams(q, r)
    return f(2 * r * r, 2 * r, q)


def constant(strategy: str, r: int, q: int) -> Fraction:
    if strategy == "fix_one":
        return fix_one_constant(r, q)
    if strategy == "fix_two":
        return fix_two_constant(r, q)
    raise ValueError(f"no cost model for strategy {strategy!r}")


def matcount_bound(m: int, n: int, r: int, q: int) -> Fraction:
    """Upper bound on rank-r m x n matrices with canonically normalized rows."""
    if not 0 <= r <= min(m, n):
        raise ValueError("need 0 <= r <= min(m, n)")
    if r == 0:
        return Fraction(1)
    return Fraction(q ** (m * r + r * n), gl_order(q, r) * (q - 1) ** m)


def large_field_exponents(r: int) -> tuple[int, int]:
    """Dominant (n, k) of the fix-one sum as q grows, taking mu(R, K) = K."""
    best = (2 * r, r + 1)
    for k in range(2, r + 1):
        p = r - k
        pn, pk = _pexp_exponents(r, k, p)
        cand = (k * (2 * r - k + 1) + pn, k + r + pk)
        if cand[0] > best[0]:
            best = cand
    return best


def fix_two_large_field_exponents(r: int) -> tuple[int, int]:
    return (2 * r * r, 2 * r)


def sig3(x) -> str:
    return f"{float(x):.3g}"


def render_table(ranks=range(1, 6), fields=(2, 3)) -> str:
    lines = []
    for strategy, title in (("fix_one", "fix one factor (this solver)"), ("fix_two", "fix two factors")):
        lines.append(f"# {title}")
        header = ["R"] + [f"F_{q}" for q in fields] + ["large"]
        lines.append("\t".join(header))
        for r in ranks:
            cells = [str(r)] + [sig3(constant(strategy, r, q)) for q in fields]
            if strategy == "fix_one":
                n, k = large_field_exponents(r)
            else:
                n, k = fix_two_large_field_exponents(r)
            cells.append(f"f({n},{k})")
            lines.append("\t".join(cells))
        lines.append("")
    return "\n".join(lines)
