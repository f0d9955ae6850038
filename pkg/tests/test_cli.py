import csv
import io
import json
import subprocess
import sys

import pytest

from renacount import cli
from renacount.series import c_k, coeff_table


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    prov = json.loads(lines[0][2:])
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    return prov, rows[0], rows[1:]


def test_count_rena_and_re(capsys):
    code, out, _ = run(capsys, "count", "--k", "2", "--n-max", "10", "--class", "rena")
    assert code == 0
    prov, header, rows = _csv(out)
    assert header[:2] == ["n", "R"] and "T" in header and "Estar" in header
    assert prov["flags"]["n_max"] == 10 and "mpmath" in prov["versions"]
    code, out, _ = run(capsys, "count", "--k", "2", "--n-max", "10", "--class", "re")
    _, header_b, rows_b = _csv(out)
    assert header_b == ["n", "B"]
    assert int(rows[6][1]) == int(rows_b[6][1]) - 12


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "--k", "3", "--n-max", "5", "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][1][1] == "4" and "provenance" in doc


def test_usage_errors(capsys):
    assert run(capsys, "count", "--k", "0", "--n-max", "3")[0] == 1
    assert run(capsys, "count", "--k", "2")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "glushkov", "--k", "2", "--expr", "(a+")[0] == 1
    assert run(capsys, "glushkov", "--k", "1", "--expr", "(a+b)")[0] == 1
    assert run(capsys, "theory", "--k-list", "2,x")[0] == 1


def test_budget_exit(capsys):
    code, _, err = run(capsys, "count", "--k", "2", "--n-max", "4001")
    assert code == 3 and "budget" in err
    assert run(capsys, "enumerate", "--k", "3", "--n", "12")[0] == 3


def test_series_budget_shrinks():
    assert cli.series_budget(2) == cli.series_budget(5) == 4000
    assert cli.series_budget(10) < 4000
    assert cli.series_budget(1000) < cli.series_budget(10)


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--k", "2", "--n", "6")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 1251


def test_glushkov(capsys):
    code, out, _ = run(capsys, "glushkov", "--k", "2", "--expr", "((a.b)*)", "--word", "abab")
    doc = json.loads(out)
    assert code == 0
    assert doc["automaton"] == {"states": 3, "transitions": [[0, 1, 1], [1, 2, 2], [2, 1, 1]], "finals": [0, 2]}
    assert doc["counts"] == {"f": 1, "s": 1, "e": 2, "e_star": 2, "t": 3}
    assert doc["accepts"] is True and doc["consistent"] is True


def test_theory(capsys):
    code, out, _ = run(capsys, "theory", "--k-list", "2,5")
    _, header, rows = _csv(out)
    assert header == ["k", "rho", "eta", "psi", "g", "letters_ratio", "lambda", "residual"]
    assert [r[0] for r in rows] == ["2", "5"]
    assert abs(float(rows[0][6]) - 4.03) < 0.01


def test_sample_is_deterministic(tmp_path, capsys):
    files = []
    for threads in ("1", "2"):
        f = tmp_path / f"s{threads}.txt"
        assert run(capsys, "sample", "--k", "2", "--n", "40", "--count", "12", "--seed", "5",
                   "--threads", threads, "--output", str(f))[0] == 0
        files.append(f.read_text())
    assert files[0] == files[1] and len(files[0].splitlines()) == 12
    code, out, _ = run(capsys, "sample", "--k", "2", "--n", "40", "--count", "4", "--stats-only")
    _, header, rows = _csv(out)
    assert header[1] == "size" and all(r[1] == "40" for r in rows)


def test_reports_are_byte_identical(tmp_path, capsys):
    texts = []
    for i in range(2):
        f = tmp_path / "o.json"
        run(capsys, "compare", "--k", "2", "--n", "60", "--samples", "20", "--output", str(f))
        texts.append(f.read_bytes())
    assert texts[0] == texts[1]


def test_compare_theory_only(capsys):
    code, out, _ = run(capsys, "compare", "--k", "3", "--n", "50", "--samples", "0")
    doc = json.loads(out)
    assert code == 0 and "empirical" not in doc
    assert set(doc) >= {"theory", "exact_series", "provenance"}


@pytest.mark.slow
def test_compare_letters_within_three_se(capsys):
    code, out, _ = run(capsys, "compare", "--k", "2", "--n", "2000", "--samples", "600", "--seed", "3")
    doc = json.loads(out)
    exact = float(doc["exact_series"]["letters_per_size"])
    emp = doc["empirical"]["letters_per_size"]
    assert abs(emp["mean"] - exact) < 3 * emp["stderr"]
    # finite-n value is reported as is, below the limit at this n
    assert 3.5 < float(doc["exact_series"]["transitions_per_size"]) < float(doc["theory"]["lambda"])


def test_oracle_command(capsys, monkeypatch):
    code, out, _ = run(capsys, "oracle", "--k", "2", "--n-max", "6")
    assert code == 0 and json.loads(out)["ok"] is True

    real = cli.run_oracle_suite

    def mutated(k, n_max, **kw):
        return real(k, n_max, table=coeff_table(k, n_max, C=c_k(k) - 1), **kw)

    monkeypatch.setattr(cli, "run_oracle_suite", mutated)
    code, out, err = run(capsys, "oracle", "--k", "2", "--n-max", "5")
    assert code == 2
    assert json.loads(out)["first_divergence"]["n"] == 4
    assert "n=4" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "renacount", "count", "--k", "-1", "--n-max", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 1
    r = subprocess.run([sys.executable, "-m", "renacount", "count", "--k", "1", "--n-max", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.splitlines()[-1].startswith("3,")
