"""Plain-text formats for matrices, tensors and CPDs.

Matrix:  ``rows cols`` then one line of codes per row.
Tensor:  field (``p`` or ``p^k``), ``n0 n1 n2``, then n0*n1*n2 codes in (i, j, k) order.
CPD:     field, ``R n0 n1 n2``, then A, B, C as matrices.
"""

from __future__ import annotations

from typing import Iterator

from .compress import Cpd, Tensor3
from .field import Field, FieldError, parse_field
from .linalg import Matrix


class FormatError(ValueError):
    pass


def _ints(tokens: Iterator[str], count: int, what: str) -> list[int]:
    out = []
    for _ in range(count):
        tok = next(tokens, None)
        if tok is None:
            raise FormatError(f"{what}: expected {count} values, got {len(out)}")
        try:
            out.append(int(tok))
        except ValueError:
            raise FormatError(f"{what}: bad integer {tok!r}") from None
    return out


def _check_codes(values, field: Field, what: str):
    for x in values:
        if not 0 <= x < field.q:
            raise FormatError(f"{what}: element code {x} out of range for GF({field.name})")


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _read_field(line: str, field: Field | None) -> Field:
    try:
        parsed = parse_field(line)
    except FieldError as e:
        raise FormatError(str(e)) from None
    if field is None:
        return parsed
    if (parsed.p, parsed.k) != (field.p, field.k):
        raise FormatError(f"file field {parsed.name} does not match GF({field.name})")
    return field


def render_matrix(m: Matrix) -> str:
    lines = [f"{m.nrows} {m.ncols}"]
    lines += [" ".join(map(str, row)) for row in m.rows]
    return "\n".join(lines) + "\n"


def _read_matrix(tokens: Iterator[str], field: Field, what: str) -> Matrix:
    nr, nc = _ints(tokens, 2, f"{what} header")
    vals = _ints(tokens, nr * nc, what)
    _check_codes(vals, field, what)
    return Matrix._raw(field, (tuple(vals[i * nc : (i + 1) * nc]) for i in range(nr)), nc)


def parse_matrix(text: str, field: Field) -> Matrix:
    tokens = iter(text.split())
    m = _read_matrix(tokens, field, "matrix")
    if next(tokens, None) is not None:
        raise FormatError("matrix: trailing data")
    return m


def render_tensor(t: Tensor3) -> str:
    n0, n1, n2 = t.shape
    lines = [t.field.name, f"{n0} {n1} {n2}"]
    row = n2 if n2 else 1
    for start in range(0, len(t.data), row):
        lines.append(" ".join(map(str, t.data[start : start + row])))
    return "\n".join(lines) + "\n"


def parse_tensor(text: str, field: Field | None = None) -> Tensor3:
    """Parse the tensor format; ``field`` (if given) must agree with the header."""
    lines = _lines(text)
    if len(lines) < 2:
        raise FormatError("tensor: missing header")
    fld = _read_field(lines[0], field)
    shape = _ints(iter(lines[1].split()), 3, "tensor shape")
    if len(lines[1].split()) != 3 or min(shape) < 0:
        raise FormatError(f"tensor shape line must hold three sides: {lines[1]!r}")
    tokens = " ".join(lines[2:]).split()
    n = shape[0] * shape[1] * shape[2]
    if len(tokens) != n:
        raise FormatError(f"tensor: expected {n} entries, got {len(tokens)}")
    vals = _ints(iter(tokens), n, "tensor")
    _check_codes(vals, fld, "tensor")
    return Tensor3(fld, tuple(shape), tuple(vals))


def render_cpd(cpd: Cpd) -> str:
    n0, n1, n2 = cpd.shape
    out = f"{cpd.field.name}\n{cpd.r} {n0} {n1} {n2}\n"
    return out + "".join(render_matrix(m) for m in (cpd.a, cpd.b, cpd.c))


def parse_cpd(text: str, field: Field | None = None) -> Cpd:
    lines = _lines(text)
    if len(lines) < 2:
        raise FormatError("cpd: missing header")
    fld = _read_field(lines[0], field)
    tokens = iter(" ".join(lines[1:]).split())
    r, n0, n1, n2 = _ints(tokens, 4, "cpd header")
    mats = [_read_matrix(tokens, fld, name) for name in ("A", "B", "C")]
    if next(tokens, None) is not None:
        raise FormatError("cpd: trailing data")
    for m, n, name in zip(mats, (n0, n1, n2), "ABC"):
        if m.shape != (r, n):
            raise FormatError(f"cpd: factor {name} has shape {m.shape}, expected {(r, n)}")
    return Cpd(fld, *mats)
