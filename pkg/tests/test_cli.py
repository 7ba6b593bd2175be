import json
import subprocess
import sys

import pytest

from etalecob import cli, verify
from etalecob.ahss import AbutmentReport
from etalecob.cochains import CohomologyTable, cohomology
from etalecob.coefficients import mu_rank
from etalecob.simplicial import moore_space


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


def test_cohomology_of_p1(capsys):
    data = run_json(capsys, "cohomology", "--catalog", "P1", "--coeff", "Z/5")
    assert data["schema"] == 1 and data["notes"] == []
    nonzero = {int(k): v for k, v in data["groups"].items() if v}
    assert nonzero == {0: [5], 2: [5]}


def test_cohomology_of_strict_henselian(capsys):
    data = run_json(capsys, "cohomology", "--catalog", "strict_henselian")
    assert {int(k) for k, v in data["groups"].items() if v} == {0}
    code, text, _ = run(capsys, "cohomology", "--catalog", "strict_henselian")
    assert code == 0 and "H^0 = Z/2" in text


def test_malformed_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "cohomology", "--input", str(bad))
    assert code == 2 and "not valid JSON" in err
    code, _, _ = run(capsys, "cohomology", "--input", str(tmp_path / "missing.json"))
    assert code == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"hello": 1}))
    assert run(capsys, "cohomology", "--input", str(wrong))[0] == 2


def test_simplicial_input(tmp_path, capsys):
    path = tmp_path / "moore.json"
    path.write_text(moore_space(3, 4).dumps())
    data = run_json(capsys, "cohomology", "--input", str(path), "--coeff", "Z/3")
    assert data["groups"]["1"] == [3] and data["groups"]["2"] == [3]


def test_table_input_for_ahss(tmp_path, capsys):
    path = tmp_path / "table.json"
    path.write_text(cohomology(moore_space(2, 4), 2).dumps())
    data = run_json(capsys, "ahss", "--input", str(path), "--theory", "HZ", "--degrees", "0..2")
    assert [d["group"] for d in data["degrees"]] == [[2], [2], [2]]


def test_finite_field_shift(capsys):
    data = run_json(capsys, "ahss", "--catalog", "finite_field", "--q", "7", "--theory", "MU", "--l", "2",
                    "--nu", "3", "--reduced", "--degrees", "-4..4")
    assert data["status"] == "RESOLVED" and data["undetermined"] is False
    for d in data["degrees"]:
        assert d["group"] == [8] * mu_rank(d["degree"] - 1)


def test_local_field_pattern(capsys):
    data = run_json(capsys, "ahss", "--catalog", "local_field", "--q", "5", "--theory", "MU", "--l", "2",
                    "--nu", "2")
    for d in data["degrees"]:
        for piece in d["pieces"]:
            if piece["p"] == 2:
                assert piece["group"] == [4] * mu_rank(piece["q"])
    assert any("reference value" in n for n in data["notes"])


def test_hz_identity_through_cli(capsys):
    data = run_json(capsys, "ahss", "--catalog", "P1", "--theory", "HZ", "--l", "3", "--degrees", "0..3")
    assert [d["group"] for d in data["degrees"]] == [[3], [], [3], []]


def test_pn_notes_are_separate(capsys):
    data = run_json(capsys, "ahss", "--catalog", "Pn", "--n", "2", "--l", "3", "--degrees", "-2..0")
    assert any("indexing" in n for n in data["notes"])
    assert data["splitting"]
    assert all(isinstance(d["group"], list) for d in data["degrees"])


def test_undetermined_is_flagged_with_exit_zero(capsys):
    data = run_json(capsys, "ahss", "--catalog", "Gm", "--theory", "MU", "--degrees", "0..3")
    assert data["undetermined"] is True and data["status"] == "UNDETERMINED"


def test_report_json_round_trips(capsys):
    data = run_json(capsys, "ahss", "--catalog", "finite_field", "--q", "4", "--l", "3", "--degrees", "-6..2")
    rep = AbutmentReport.from_json(data)
    assert rep.to_json() == {k: v for k, v in data.items() if k != "undetermined"}
    tab = run_json(capsys, "cohomology", "--catalog", "P1", "--coeff", "Z/4")
    assert CohomologyTable.from_json(tab).to_json()["groups"] == tab["groups"]


def test_output_is_deterministic(capsys):
    argv = ["ahss", "--catalog", "local_field", "--q", "7", "--l", "3", "--degrees", "-4..4", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_input_errors(capsys):
    assert run(capsys, "cohomology", "--catalog", "nowhere")[0] == 2
    assert run(capsys, "ahss", "--catalog", "P1", "--degrees", "3..1")[0] == 2
    assert run(capsys, "ahss", "--catalog", "P1", "--theory", "BP")[0] == 2
    assert run(capsys, "ahss", "--catalog", "finite_field", "--q", "4", "--l", "2")[0] == 2
    assert run(capsys, "cohomology")[0] == 2
    assert run(capsys, "verify", "nonsense")[0] == 2


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.delenv("ETALECOB_BUDGET", raising=False)
    code, _, err = run(capsys, "cohomology", "--catalog", "Gm", "--l", "3", "--budget", "10")
    assert code == 3 and "budget" in err
    import os
    assert "ETALECOB_BUDGET" not in os.environ


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "algebra")
    assert code == 0 and "algebra: pass" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    def failing():
        return [("always fails", lambda: False)]
    monkeypatch.setitem(verify.SUITES, "broken", failing)
    monkeypatch.setitem(cli.SUITES, "broken", failing)
    assert run(capsys, "verify", "broken")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "etalecob", "ahss", "--catalog", "strict_henselian",
                          "--degrees", "-4..0", "--format", "json"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["degrees"][0]["group"] == [2, 2]
