import json

from click.testing import CliRunner

from orthochar import verify
from orthochar.cli import cli


def _run(*args):
    return CliRunner().invoke(cli, list(args))


def test_verify_quick_exit_0(tmp_path):
    out = tmp_path / "r.json"
    csv = tmp_path / "r.csv"
    res = _run("verify", "--suite", "quick", "--json", str(out), "--csv", str(csv))
    assert res.exit_code == 0, res.output
    data = json.loads(out.read_text())
    assert data["ok"] and data["suite"] == "quick"
    assert csv.read_text().startswith("n,q,label,type,theta_degree,payload")


def test_verify_corrupted_exit_1(monkeypatch):
    monkeypatch.setattr(
        verify, "TABLE_SO5", verify.corrupted(verify.TABLE_SO5, "[1,1,1]", "0", ["mu"])
    )
    res = _run("verify", "--suite", "quick", "--quiet")
    assert res.exit_code == 1
    assert "SO5 restriction table [1,1,1]" in res.output


def test_usage_errors_exit_2():
    assert _run("verify", "--suite", "huge").exit_code == 2
    assert _run("irr-p", "--n", "4", "--q", "2").exit_code == 2
    assert _run("irr-p", "--n", "5", "--q", "6").exit_code == 2
    assert _run("restrict", "--n", "5", "--q", "2", "--label", "[3,-,1]").exit_code == 2
    assert _run("restrict", "--n", "5", "--q", "2", "--label", "nonsense").exit_code == 2


def test_irr_p(tmp_path):
    out = tmp_path / "irr.json"
    res = _run("irr-p", "--n", "5", "--q", "2", "--json", str(out))
    assert res.exit_code == 0
    assert "10 characters" in res.output
    data = json.loads(out.read_text())
    assert sum(c["degree"] ** 2 for c in data["characters"]) == data["order"] == 48
    assert _run("irr", "--n", "5", "--q", "2").output == res.output


def test_restrict():
    res = _run("restrict", "--n", "5", "--q", "3", "--label", "[1,1,1]")
    assert res.exit_code == 0
    assert "degree 24" in res.output
    assert "theta(1) = 4" in res.output


def test_dump_group():
    res = _run("dump-group", "--kind", "so", "--n", "5", "--q", "2")
    assert res.exit_code == 0
    assert "order 720 (formula 720)" in res.output and "11 conjugacy classes" in res.output
    res = _run("dump-group", "--kind", "go-", "--n", "4", "--q", "2")
    assert "order 120" in res.output
    assert _run("dump-group", "--kind", "p", "--n", "5", "--q", "3").exit_code == 0


def test_dump_group_records_transporter(tmp_path):
    out = tmp_path / "g.json"
    assert _run("dump-group", "--kind", "so", "--n", "5", "--q", "3", "--json", str(out)).exit_code == 0
    ctx = json.loads(out.read_text())["context"]
    assert len(ctx["b3_prime"]) == 3 and ctx["q"] == 3


def test_verify_thm42():
    res = _run("verify-thm42", "--n", "5", "--q", "2")
    assert res.exit_code == 0 and "MISMATCH" not in res.output


def test_symbols_table():
    res = _run("symbols-table", "--n", "5", "--q", "3")
    assert res.exit_code == 0
    assert "[-,1^2,1]" in res.output and "81" in res.output
