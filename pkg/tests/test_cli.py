import subprocess
import sys

import pytest

from svplab.cli import main


@pytest.fixture
def basis_file(tmp_path):
    p = tmp_path / "b.txt"
    assert main(["gen", "--dim", "8", "--bits", "10", "--seed", "1", "--out", str(p)]) == 0
    return p


def test_gen_is_deterministic(tmp_path, basis_file, capsys):
    q = tmp_path / "c.txt"
    main(["gen", "--dim", "8", "--bits", "10", "--seed", "1", "--out", str(q)])
    assert q.read_bytes() == basis_file.read_bytes()
    assert main(["gen", "--dim", "3", "--bits", "5"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "3"


@pytest.mark.parametrize("algo", ["enum", "gauss", "nv"])
def test_solve(basis_file, capsys, algo):
    assert main(["solve", "--algo", algo, "--engine", "qcost", "--basis", str(basis_file), "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "norm_sq:" in out and "charged_queries:" in out


def test_solve_nothing_found_exits_2(basis_file, capsys):
    code = main(["solve", "--algo", "ps", "--basis", str(basis_file), "--mu-factor", "0.5", "--attempts", "1"])
    assert code == 2
    assert "found: none" in capsys.readouterr().out


def test_exponents(capsys):
    assert main(["exponents", "--model", "classical"]) == 0
    assert "time exponent: 2.46" in capsys.readouterr().out
    assert main(["exponents", "--model", "quantum"]) == 0
    assert "1.6749" in capsys.readouterr().out
    assert main(["exponents", "--model", "parallel", "--optimize", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("model,xi,bigr") and out[1].startswith("parallel")
    assert main(["exponents", "--table1"]) == 0
    assert "cited, not derived" in capsys.readouterr().out


def test_bench_and_fit(tmp_path, capsys):
    conf = tmp_path / "c.conf"
    out = tmp_path / "r.csv"
    conf.write_text("dims = 6, 7, 8\nseeds = 2\nalgo = gauss\ncollisions = 50\n")
    assert main(["bench", "--config", str(conf), "--out", str(out)]) == 0
    assert "6 runs" in capsys.readouterr().out
    assert main(["fit", "--in", str(out), "--algo", "gauss", "--engine", "classical"]) == 0
    assert "slope:" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--dim", "1"],
        ["gen", "--dim", "5", "--bits", "40"],
        ["solve", "--algo", "enum", "--basis", "/nonexistent"],
        ["exponents", "--model", "quantum", "--xi", "0.4", "--bigr", "3"],
        ["exponents", "--optimize", "--xi", "1.0"],
        ["fit", "--in", "/nonexistent", "--algo", "gauss", "--engine", "qcost"],
        ["solve", "--algo", "nope", "--basis", "x"],
        [],
    ],
)
def test_parameter_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_oracle_limit_exit_1(tmp_path):
    p = tmp_path / "big.txt"
    main(["gen", "--dim", "46", "--bits", "10", "--out", str(p)])
    assert main(["solve", "--algo", "enum", "--basis", str(p)]) == 1


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "svplab.cli", "exponents", "--model", "parallel"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "time exponent: 1.469" in r.stdout
