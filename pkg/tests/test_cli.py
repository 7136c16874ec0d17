import subprocess
import sys

import pytest
from hypothesis import given

from ffcpd import cli
from ffcpd.bench import BenchConfig, bench
from ffcpd.compress import Cpd, Tensor3, compress, mode_ranks, reconstruct
from ffcpd.formats import FormatError, parse_cpd, parse_matrix, parse_tensor, render_cpd, render_matrix, render_tensor
from ffcpd.instances import embed, mm_tensor, random_instance
from ffcpd.linalg import Matrix

from conftest import GF2, GF3, GF4, GF5, matrices, tensors

HARD = "2\n2 2 2\n1 0\n0 1\n0 1\n1 1\n"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# -- formats -----------------------------------------------------------------


def test_parse_tensor_examples():
    t = parse_tensor("2\n1 1 1\n1")
    assert t == Tensor3(GF2, (1, 1, 1), (1,))
    with pytest.raises(FormatError):
        parse_tensor("3\n2 2 2\n" + " ".join(["1"] * 7))
    with pytest.raises(FormatError):
        parse_tensor("3\n1 1 1\n3")
    with pytest.raises(FormatError):
        parse_tensor("3\n1 1\n1")
    with pytest.raises(FormatError):
        parse_tensor("6\n1 1 1\n1")
    with pytest.raises(FormatError):
        parse_tensor("2\n1 1 1\n1", GF3)


@given(tensors(max_side=3))
def test_tensor_round_trip(t):
    assert parse_tensor(render_tensor(t)) == t


def test_tensor_round_trip_bulk():
    for seed in range(100):
        f = (GF2, GF3, GF4, GF5)[seed % 4]
        t, w = random_instance(f, (seed % 3 + 1, 2, seed % 4 + 1), seed % 3, seed)
        assert parse_tensor(render_tensor(t), f) == t
        assert parse_cpd(render_cpd(w), f) == w


@given(matrices(max_side=4))
def test_matrix_round_trip(m):
    assert parse_matrix(render_matrix(m), m.field) == m


def test_extension_field_header_keeps_modulus():
    f = cli.parse_field("2^3", "1,0,1,1")
    t = Tensor3(f, (1, 1, 2), (5, 7))
    assert parse_tensor(render_tensor(t), f).field.modulus == (1, 0, 1, 1)


def test_cpd_shape_errors():
    text = "2\n1 1 1 1\n1 1\n1\n1 1\n1\n1 2\n1 1\n"
    with pytest.raises(FormatError):
        parse_cpd(text)


# -- verify ------------------------------------------------------------------


def test_verify_examples():
    assert cli.verify(Tensor3.zeros(GF2, (2, 2, 2)), Cpd.zeros(GF2, 0, (2, 2, 2)))
    cpd = Cpd(GF3, Matrix(GF3, [[1, 2]]), Matrix(GF3, [[2, 1, 1]]), Matrix(GF3, [[1, 0]]))
    t = reconstruct(cpd)
    assert cli.verify(t, cpd)
    for d in range(3):
        facs = [cpd.a, cpd.b, cpd.c]
        row = list(facs[d].rows[0])
        row[0] = (row[0] + 1) % 3
        facs[d] = Matrix(GF3, [row])
        assert not cli.verify(t, Cpd(GF3, *facs))
    with pytest.raises(ValueError):
        cli.verify(t, Cpd.zeros(GF3, 1, (2, 2, 2)))
    with pytest.raises(ValueError):
        cli.verify(t, Cpd.zeros(GF5, 1, (2, 3, 2)))


# -- instances ---------------------------------------------------------------


def test_random_instance_deterministic():
    t1, w1 = random_instance(GF5, (3, 2, 4), 3, seed=42)
    t2, w2 = random_instance(GF5, (3, 2, 4), 3, seed=42)
    assert render_tensor(t1) == render_tensor(t2) and w1 == w2
    assert cli.verify(t1, w1)
    t3, _ = random_instance(GF5, (3, 2, 4), 3, seed=43)
    assert t3 != t1


def test_random_instance_fixture():
    # the documented draw: getrandbits(bit_length(q)) redrawn until < q, A then B then C
    import random

    rng = random.Random(0)

    def draw(q):
        while True:
            x = rng.getrandbits(q.bit_length())
            if x < q:
                return x

    a, b, c = ([draw(3) for _ in range(2)] for _ in range(3))
    t, w = random_instance(GF3, (2, 2, 2), 1, seed=0)
    assert (w.a.rows, w.b.rows, w.c.rows) == ((tuple(a),), (tuple(b),), (tuple(c),))
    expect = tuple(a[i] * b[j] * c[k] % 3 for i in range(2) for j in range(2) for k in range(2))
    assert t.data == expect


def test_mm_tensor():
    assert mm_tensor(GF2, 1, 1, 1) == Tensor3(GF2, (1, 1, 1), (1,))
    t = mm_tensor(GF2, 2, 2, 1)
    assert t.shape == (4, 2, 2) and sum(t.data) == 4
    t = mm_tensor(GF2, 2, 2, 2)
    assert t.shape == (4, 4, 4) and sum(t.data) == 8
    t = mm_tensor(GF3, 1, 2, 2)
    comp = compress(t, 4)
    for d, r in enumerate(comp.ranks):
        flat = t.flattening(d)
        assert r <= min(flat.nrows, flat.ncols)
    with pytest.raises(ValueError):
        mm_tensor(GF2, 0, 1, 1)


def test_mm_tensor_is_matrix_product():
    # sum_{ijk} T[(i,j),(j,k),(k,i)] x_ij y_jk z_ki == trace(X Y Z)
    a, b, c = 2, 3, 2
    t = mm_tensor(GF5, a, b, c)
    import random

    rng = random.Random(1)
    x = [[rng.randrange(5) for _ in range(b)] for _ in range(a)]
    y = [[rng.randrange(5) for _ in range(c)] for _ in range(b)]
    z = [[rng.randrange(5) for _ in range(a)] for _ in range(c)]
    lhs = 0
    for p in range(a * b):
        for q in range(b * c):
            for s in range(c * a):
                if t[p, q, s]:
                    lhs += x[p // b][p % b] * y[q // c][q % c] * z[s // a][s % a]
    rhs = sum(x[i][j] * y[j][k] * z[k][i] for i in range(a) for j in range(b) for k in range(c))
    assert lhs % 5 == rhs % 5


def test_embed_keeps_mode_ranks():
    t, _ = random_instance(GF3, (2, 3, 2), 2, seed=5)
    big = embed(t, (6, 5, 7), seed=1)
    assert big.shape == (6, 5, 7) and mode_ranks(big) == mode_ranks(t)
    with pytest.raises(ValueError):
        embed(t, (1, 3, 2), seed=1)


# -- bench -------------------------------------------------------------------


def test_bench_fix_one_tries_fewer_candidates():
    cfg = BenchConfig(field=GF2, shape=(3, 3, 3), rank=2, instances=6, seed=10, solve_rank=2)
    rep = bench(cfg)
    tot = rep.totals()
    assert tot["fix_one"]["candidates"] >= 1
    assert tot["fix_one"]["candidates"] <= tot["fix_two"]["candidates"]
    assert tot["fix_one"]["found"] == tot["fix_two"]["found"]
    assert rep.predicted["fix_one"] == 80 and rep.predicted["fix_two"] == 256
    text = rep.render()
    assert "predicted_C=80" in text and "predicted_C=256" in text


# -- command line ------------------------------------------------------------


def test_cli_solve_found_and_none(tmp_path, capsys):
    inp = tmp_path / "t.txt"
    inp.write_text(HARD)
    out = tmp_path / "cpd.txt"
    code, _, err = run(["solve", "--in", str(inp), "--rank", "2"], capsys)
    assert code == cli.EXIT_NONE and "no rank-2" in err
    code, _, _ = run(["solve", "--in", str(inp), "--rank", "3", "--out", str(out)], capsys)
    assert code == cli.EXIT_OK
    t = parse_tensor(HARD)
    assert cli.verify(t, parse_cpd(out.read_text()))
    code, stdout, _ = run(["verify", "--tensor", str(inp), "--cpd", str(out)], capsys)
    assert code == cli.EXIT_OK and stdout.strip() == "verified"


@pytest.mark.parametrize("strategy", ["fix_one", "fix_two", "brute"])
def test_cli_minrank(tmp_path, capsys, strategy):
    inp = tmp_path / "t.txt"
    inp.write_text(HARD)
    code, stdout, err = run(["minrank", "--in", str(inp), "--max", "4", "--strategy", strategy], capsys)
    assert code == cli.EXIT_OK and "min_rank 3" in err
    assert parse_cpd(stdout).r == 3
    code, _, _ = run(["minrank", "--in", str(inp), "--max", "2", "--strategy", strategy], capsys)
    assert code == cli.EXIT_NONE


def test_cli_verify_mismatch(tmp_path, capsys):
    t = tmp_path / "t.txt"
    t.write_text(HARD)
    c = tmp_path / "c.txt"
    c.write_text("2\n1 2 2 2\n1 2\n1 0\n1 2\n1 1\n1 2\n0 1\n")
    code, stdout, _ = run(["verify", "--tensor", str(t), "--cpd", str(c)], capsys)
    assert code == cli.EXIT_NONE and stdout.strip() == "mismatch"


def test_cli_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n2 2 2\n1 1 1 1 1 1 1\n")
    assert run(["solve", "--in", str(bad), "--rank", "1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["solve", "--in", str(tmp_path / "missing"), "--rank", "1"], capsys)[0] == cli.EXIT_USAGE
    good = tmp_path / "good.txt"
    good.write_text(HARD)
    assert run(["solve", "--in", str(good), "--rank", "-1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["solve", "--in", str(good), "--rank", "1", "--field", "3"], capsys)[0] == cli.EXIT_USAGE
    assert run(["random", "--field", "4", "--shape", "2,2,2", "--rank", "1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["random", "--field", "3", "--shape", "2,2", "--rank", "1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["cost", "--field", "2"], capsys)[0] == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        cli.main(["solve", "--rank", "1", "--strategy", "magic"])
    assert e.value.code == 2


def test_cli_internal_error_exit(tmp_path, capsys, monkeypatch):
    inp = tmp_path / "t.txt"
    inp.write_text(HARD)
    monkeypatch.setattr(cli, "verify", lambda t, c: False)
    code, stdout, err = run(["solve", "--in", str(inp), "--rank", "3"], capsys)
    assert code == cli.EXIT_INTERNAL and stdout == "" and "internal error" in err


def test_cli_random_then_solve(tmp_path, capsys):
    t = tmp_path / "t.txt"
    w = tmp_path / "w.txt"
    code, _, _ = run(["random", "--field", "2^2", "--shape", "3,2,3", "--rank", "2", "--seed", "4",
                      "--out", str(t), "--witness", str(w)], capsys)
    assert code == 0
    first = t.read_text()
    run(["random", "--field", "2^2", "--shape", "3,2,3", "--rank", "2", "--seed", "4", "--out", str(t)], capsys)
    assert t.read_text() == first
    code, _, _ = run(["verify", "--tensor", str(t), "--cpd", str(w)], capsys)
    assert code == 0
    code, stdout, _ = run(["solve", "--in", str(t), "--rank", "2", "--threads", "1"], capsys)
    assert code == 0 and cli.verify(parse_tensor(first), parse_cpd(stdout))


def test_cli_deterministic_threads(tmp_path, capsys):
    t = tmp_path / "t.txt"
    run(["random", "--field", "3", "--shape", "3,3,3", "--rank", "3", "--seed", "1", "--out", str(t)], capsys)
    _, one, _ = run(["solve", "--in", str(t), "--rank", "3", "--threads", "1"], capsys)
    _, two, _ = run(["solve", "--in", str(t), "--rank", "3", "--threads", "2", "--deterministic"], capsys)
    assert one == two


def test_cli_mmtensor_and_cost(capsys):
    code, stdout, _ = run(["mmtensor", "--dims", "2,2,1"], capsys)
    assert code == 0 and parse_tensor(stdout) == mm_tensor(GF2, 2, 2, 1)
    code, stdout, _ = run(["cost", "--field", "2", "--rank", "2"], capsys)
    assert code == 0 and "C=80" in stdout and "C=256" in stdout
    code, stdout, _ = run(["cost", "--table"], capsys)
    assert code == 0 and "f(39,10)" in stdout


def test_cli_bench(capsys):
    code, stdout, _ = run(["bench", "--field", "2", "--shape", "2,2,2", "--rank", "2", "--instances", "2"], capsys)
    assert code == 0 and "fix_one" in stdout and "fix_two" in stdout


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli._default_threads() == 3
    monkeypatch.setenv(cli.THREADS_ENV, "junk")
    assert cli._default_threads() == 1


def test_console_entry_point(tmp_path):
    inp = tmp_path / "t.txt"
    inp.write_text(HARD)
    res = subprocess.run([sys.executable, "-m", "ffcpd.cli", "solve", "--in", str(inp), "--rank", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 1
    res = subprocess.run([sys.executable, "-m", "ffcpd.cli", "solve", "--rank", "3"],
                         input=HARD, capture_output=True, text=True)
    assert res.returncode == 0 and parse_cpd(res.stdout).r == 3
