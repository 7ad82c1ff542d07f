import json
import subprocess
import sys

import pytest

from sympal.cli import main
from sympal.fixtures import FIXTURE_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_period(capsys):
    doc = run_json(capsys, "period", "--p", "7", "--q", "2")
    assert doc["command"] == "period"
    assert doc["result"]["minpoly"] == [2, 1, 1] and doc["result"]["D"] == 2
    assert doc["config"]["p"] == 7 and doc["config"]["seed"] == 0


def test_huge_sl23(capsys):
    doc = run_json(capsys, "huge", "--field", "3:2", "--n", "2", "--gens", "sl23.json")
    assert doc["result"]["is_huge"] is True and doc["result"]["d"] == 1


def test_classify(capsys):
    doc = run_json(capsys, "classify", "--gens", "sl23.json")
    assert doc["result"]["group_order"] == 24


def test_twists_rho_star(capsys):
    doc = run_json(capsys, "twists", "--rep", "rho_star.json")
    res = doc["result"]
    assert len(res["twists"]) == 2 and res["K_degree"] == 1 and res["E_degree"] == 2


def test_descend_rho_star(capsys):
    res = run_json(capsys, "descend", "--rep", "rho_star.json")["result"]
    assert res["K_degree"] == 1 and len(res["images"]) == 72


def test_twists_not_irreducible(capsys, tmp_path):
    rep = {"field": "5:1", "group": {"generators": [[[2, 0], [0, 1]]]}}
    path = tmp_path / "red.json"
    path.write_text(json.dumps(rep))
    code, _, err = run(capsys, "twists", "--rep", str(path))
    assert code == 2 and "NotIrreducible" in err


def test_obstruct_digits_and_shape(capsys, tmp_path):
    a = run_json(capsys, "obstruct", "--ell", "13", "--n", "2", "--digits", "0;2")["result"]
    assert a["obstructed"] is True and a["witness"] is None and a["brute_force_twists"] == []
    path = tmp_path / "shape.json"
    path.write_text(json.dumps({"blocks": [[0], [2]]}))
    b = run_json(capsys, "obstruct", "--ell", "13", "--n", "2", "--shape", str(path))["result"]
    assert a == b


def test_obstruct_hypothesis_fails(capsys):
    code, _, err = run(capsys, "obstruct", "--ell", "13", "--n", "2", "--digits", "0;6")
    assert code == 2 and "HypothesisFails" in err


def test_obstruct_dimension_mismatch(capsys):
    code, _, _ = run(capsys, "obstruct", "--ell", "13", "--n", "4", "--digits", "0;2")
    assert code == 1


def test_density(capsys):
    res = run_json(capsys, "density", "--p", "7", "--q", "2", "--d", "1", "--bound", "1000")["result"]
    assert res["prediction"] == "1/2" and abs(res["frequency_decimal"] - 0.5) < 0.05


def test_system_commands(capsys):
    res = run_json(capsys, "system-analyze", "--sys", "rho_star_system.json")["result"]
    assert res["gamma_group"] == [1, 5, 7, 11] and res["delta_group"] == [1, 7]
    assert res["multiplier_consistent"] is True and res["trace_field_degree"] == 2
    res = run_json(capsys, "system-reduce", "--sys", "rho_star_system.json", "--ell", "5")["result"]
    assert res["residue_field"] == "5:2" and res["equal"] is True


@pytest.mark.parametrize("argv, code", [
    (["period", "--p", "9", "--q", "2"], 2),
    (["system-reduce", "--sys", "rho_star_system.json", "--ell", "3"], 2),
    (["density", "--p", "13", "--q", "3", "--d", "3", "--bound", "100"], 2),
    (["period", "--p", "7"], 1),
    (["nonsense"], 1),
    (["period", "--p", "7", "--q", "2", "--bogus"], 1),
    (["huge", "--gens", "no_such_file.json"], 1),
    (["--threads", "0", "period", "--p", "7", "--q", "2"], 1),
])
def test_exit_codes(capsys, argv, code):
    if code == 1 and argv[0] != "huge":
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
        assert "usage" in capsys.readouterr().err
    else:
        assert run(capsys, *argv)[0] == code


def test_global_flags_before_or_after(capsys):
    a = run_json(capsys, "--seed", "5", "period", "--p", "7", "--q", "2")
    b = run_json(capsys, "period", "--p", "7", "--q", "2", "--seed", "5")
    assert a == b and a["config"]["seed"] == 5


def test_determinism(capsys):
    argv = ["descend", "--rep", "rho_star.json", "--seed", "3"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_table_output(capsys):
    code, out, _ = run(capsys, "period", "--p", "7", "--q", "2", "--output", "table")
    assert code == 0
    assert "result.D: 2" in out.splitlines()


def test_fixture_paths_resolve():
    for name in ("sl23.json", "rho_star.json", "rho_star_system.json", "quartic_system.json", "s3_std.json"):
        assert (FIXTURE_DIR / name).exists()


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "sympal.cli", "period", "--p", "5", "--q", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"]["minpoly"] == [1, 1]
