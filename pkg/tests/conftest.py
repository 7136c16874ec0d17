import itertools
import random

from hypothesis import settings
from hypothesis import strategies as st

from ffcpd.compress import Tensor3
from ffcpd.field import make_field
from ffcpd.linalg import Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GF2 = make_field(2)
GF3 = make_field(3)
GF4 = make_field(2, 2)
GF5 = make_field(5)
SMALL_FIELDS = {2: GF2, 3: GF3, 4: GF4, 5: GF5}


def rand_matrix(field, m, n, rng):
    return Matrix(field, [[rng.randrange(field.q) for _ in range(n)] for _ in range(m)], n)


def all_matrices(field, m, n):
    for vals in itertools.product(range(field.q), repeat=m * n):
        yield Matrix(field, [vals[i * n : (i + 1) * n] for i in range(m)], n)


def tensor(field, slices):
    """Tensor from a list of mode-0 slices (lists of rows)."""
    n0, n1, n2 = len(slices), len(slices[0]), len(slices[0][0])
    return Tensor3(field, (n0, n1, n2), tuple(x for s in slices for row in s for x in row))


fields = st.sampled_from([GF2, GF3, GF4, GF5])


@st.composite
def matrices(draw, field=None, max_side=4, min_side=0):
    f = field if field is not None else draw(fields)
    m = draw(st.integers(min_side, max_side))
    n = draw(st.integers(min_side, max_side))
    vals = draw(st.lists(st.integers(0, f.q - 1), min_size=m * n, max_size=m * n))
    return Matrix(f, [vals[i * n : (i + 1) * n] for i in range(m)], n)


@st.composite
def tensors(draw, field=None, max_side=3):
    f = field if field is not None else draw(fields)
    shape = tuple(draw(st.integers(0, max_side)) for _ in range(3))
    size = shape[0] * shape[1] * shape[2]
    vals = draw(st.lists(st.integers(0, f.q - 1), min_size=size, max_size=size))
    return Tensor3(f, shape, tuple(vals))


def seeded_rng(seed=0):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
