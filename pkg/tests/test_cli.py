import json
import subprocess
import sys

import pytest

from mcbc.cli import main
from mcbc.io import loads_code


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_diagonal(capsys):
    code, out, err = run(capsys, "construct", "--method", "diagonal", "--n", "4", "--k", "5", "--r", "2")
    assert code == 0
    layout = loads_code(out)
    assert layout.item_view.blocks == ((1, 2), (3, 4), (2, 4, 5), (1, 3, 5))
    assert err.strip() == "n=4 m=5 N=10 k=5 r=2"


def test_construct_steiner_affine(capsys):
    code, out, err = run(capsys, "construct", "--method", "steiner-affine", "--q", "4", "--k", "7", "--r", "4")
    assert code == 0
    layout = loads_code(out)
    assert (layout.n, layout.N) == (20, 80)


@pytest.mark.parametrize(
    "argv,N",
    [
        (["--method", "replication", "--n", "6", "--k", "3", "--m", "4", "--r", "2"], 12),
        (["--method", "small-n", "--n", "3", "--k", "3", "--m", "4"], 6),
        (["--method", "cwc-gs", "--k", "5", "--m", "7", "--r", "2"], 15),
        (["--method", "cwc-gs", "--k", "5", "--m", "7", "--r", "2", "--n", "3"], 9),
        (["--method", "distance4", "--n", "8", "--k", "4", "--m", "5", "--r", "2"], 23),
        (["--method", "regular", "--n", "3", "--k", "4", "--m", "6"], 12),
    ],
)
def test_construct_methods(capsys, argv, N):
    code, out, err = run(capsys, "construct", *argv)
    assert code == 0 and loads_code(out).N == N
    assert f"N={N} " in err


def test_construct_precondition_failure(capsys):
    code, out, err = run(capsys, "construct", "--method", "replication", "--n", "2", "--k", "3", "--m", "4", "--r", "2")
    assert code == 3 and out == ""
    assert "n >=" in err


def test_construct_missing_flags(capsys):
    code, _, err = run(capsys, "construct", "--method", "diagonal", "--n", "4")
    assert code == 2 and "--k" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "--method", "bogus"],
        ["construct", "--method", "diagonal", "--n", "0", "--k", "5", "--r", "2"],
        ["construct", "--method", "diagonal", "--n", "x"],
        ["verify", "missing.json"],
        ["table", "--k", "3"],
        [],
    ],
)
def test_argparse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_verify_example_hall(capsys, example1_path):
    code, out, _ = run(capsys, "verify", str(example1_path), "--k", "5", "--r", "2", "--mode", "hall")
    assert code == 0
    assert "block profile: 0:0 1:0 2:2 3:2 4:0 5:1" in out
    assert "profile inequality: holds" in out
    assert out.rstrip().endswith("result: valid")


def test_verify_example_exhaustive(capsys, example1_path):
    code, _, _ = run(capsys, "verify", str(example1_path), "--k", "5", "--r", "2", "--mode", "exhaustive")
    assert code == 0


def test_verify_duplicated_singleton(capsys, write_json):
    path = write_json({"n": 2, "m": 2, "servers": [[1, 2], []]})
    code, out, _ = run(capsys, "verify", str(path), "--k", "2", "--r", "1")
    assert code == 1
    assert "blocks: 1 2" in out.splitlines()
    code, out, _ = run(capsys, "verify", str(path), "--k", "2", "--mode", "exhaustive")
    assert code == 1 and "request: 1,2" in out.splitlines()


def test_verify_errors(capsys, tmp_path, example1_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify", str(bad), "--k", "2")[0] == 2
    assert run(capsys, "verify", "nonexistent.json", "--k", "2")[0] == 2
    assert run(capsys, "verify", str(example1_path), "--k", "5", "--r", "2", "--t", "2")[0] == 2
    assert run(capsys, "verify", str(example1_path), "--k", "9", "--r", "2")[0] == 2
    code, _, err = run(capsys, "verify", str(example1_path), "--k", "5", "--r", "2", "--mode", "exhaustive", "--cap", "5")
    assert code == 4 and "cap" in err


def test_verify_t_two_exhaustive(capsys, write_json):
    path = write_json({"n": 2, "m": 1, "servers": [[1, 2]]})
    assert run(capsys, "verify", str(path), "--k", "2", "--t", "2", "--mode", "exhaustive")[0] == 0


def test_affine_exhaustive_over_default_cap(capsys, affine4_path):
    code, _, err = run(capsys, "verify", str(affine4_path), "--k", "11", "--r", "2", "--mode", "exhaustive")
    assert code == 4 and "exceeds cap 10000000" in err


@pytest.mark.slow
def test_affine_exhaustive_with_raised_cap(capsys, affine4_path):
    code, out, _ = run(
        capsys, "verify", str(affine4_path), "--k", "11", "--r", "2", "--mode", "exhaustive", "--cap", "20000000"
    )
    assert code == 0 and out.rstrip().endswith("result: valid")


def test_serve_example(capsys, example1_path):
    code, out, _ = run(capsys, "serve", str(example1_path), "3,3,4,4,5")
    assert code == 0
    assert out.splitlines() == ["server 1: 3", "server 2: 4", "server 3: 3", "server 4: 4", "server 5: 5"]


def test_serve_empty_and_infeasible(capsys, example1_path, write_json):
    assert run(capsys, "serve", str(example1_path), "") == (0, "", "")
    path = write_json({"n": 2, "m": 1, "servers": [[1, 2]]})
    code, out, _ = run(capsys, "serve", str(path), "1,2")
    assert code == 1 and out.strip() == "INFEASIBLE"
    code, out, _ = run(capsys, "serve", str(path), "1,2", "--t", "2")
    assert code == 0 and out.strip() == "server 1: 1 2"


def test_serve_parse_and_limit_errors(capsys, example1_path):
    assert run(capsys, "serve", str(example1_path), "1,x")[0] == 2
    assert run(capsys, "serve", str(example1_path), "9")[0] == 2
    assert run(capsys, "serve", str(example1_path), "3,3,3", "--r", "2", "--k", "5")[0] == 2


def test_bounds_with_search(capsys, tmp_path):
    witness = tmp_path / "w.json"
    code, out, _ = run(capsys, "bounds", "--n", "4", "--k", "5", "--m", "5", "--r", "2", "--search", "--witness", str(witness))
    assert code == 0
    rep = json.loads(out)
    assert rep["lower_bounds"]["storage-per-item"] == 8
    assert rep["known_exact"]["value"] == 10
    assert rep["search_exact"] == 10
    assert loads_code(witness.read_text()).N == 10


@pytest.mark.parametrize("n,k,m,r,value", [(12, 3, 4, 1, 24), (1, 1, 1, 1, 1)])
def test_bounds_exact(capsys, n, k, m, r, value):
    code, out, _ = run(capsys, "bounds", "--n", str(n), "--k", str(k), "--m", str(m), "--r", str(r))
    assert code == 0 and json.loads(out)["known_exact"]["value"] == value


def test_bounds_errors(capsys):
    assert run(capsys, "bounds", "--n", "9", "--k", "3", "--m", "4", "--r", "1", "--search")[0] == 4
    assert run(capsys, "bounds", "--n", "9", "--k", "3", "--m", "4", "--r", "1", "--search", "--max-n", "9")[0] == 0
    assert run(capsys, "bounds", "--n", "2", "--k", "5", "--m", "4", "--r", "1")[0] == 2


def test_table_rows(capsys):
    code, out, _ = run(capsys, "table", "--k", "3", "--m", "4", "--r", "2", "--n-from", "6", "--n-to", "8")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n\tlower\texact\tupper"
    assert lines[1] == "6\t12\t12\t12"


def test_table_full_multiplicity_and_formula(capsys):
    _, out, _ = run(capsys, "table", "--k", "3", "--m", "5", "--r", "3", "--n-from", "1", "--n-to", "4")
    assert [int(row.split("\t")[2]) for row in out.splitlines()[1:]] == [3, 6, 9, 12]
    _, out, _ = run(capsys, "table", "--k", "3", "--m", "4", "--r", "1", "--n-from", "12", "--n-to", "14")
    assert [int(row.split("\t")[2]) for row in out.splitlines()[1:]] == [24, 27, 30]


def test_table_unknown_cells_and_bad_range(capsys):
    _, out, _ = run(capsys, "table", "--k", "4", "--m", "3", "--r", "1", "--n-from", "1", "--n-to", "1")
    assert out.splitlines()[1] == "1\t-\t-\t-"
    assert run(capsys, "table", "--k", "3", "--m", "4", "--r", "1", "--n-from", "3", "--n-to", "2")[0] == 2


def _cli(*argv, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "mcbc", *argv], input=stdin, capture_output=True, text=True
    )


def test_construct_pipes_into_verify_and_is_deterministic():
    argv = ("construct", "--method", "distance4", "--n", "8", "--k", "4", "--m", "5", "--r", "2")
    first, second = _cli(*argv), _cli(*argv)
    assert first.returncode == 0 and first.stdout == second.stdout
    check = _cli("verify", "/dev/stdin", "--k", "4", "--r", "2", stdin=first.stdout)
    assert check.returncode == 0, check.stdout + check.stderr


def test_table_output_is_deterministic():
    argv = ("table", "--k", "4", "--m", "6", "--r", "2", "--n-from", "1", "--n-to", "40")
    assert _cli(*argv).stdout == _cli(*argv).stdout
