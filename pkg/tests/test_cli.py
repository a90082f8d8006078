from __future__ import annotations

import json
import subprocess
import sys

import pytest

from oracles import nh2_symbol_formula

from pdgcat.cli import main
from pdgcat.nilhecke import NHElem, nh_derive, nh_one
from pdgcat.oring import OElem
from pdgcat.pcomplex import PComplex, block, direct_sum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


@pytest.fixture
def complex_file(tmp_path):
    U = direct_sum(block(5, 2, 0), block(5, 4, -4))
    path = tmp_path / "u.json"
    path.write_text(json.dumps(U.to_json()))
    return path, U


def test_cohomology(capsys, complex_file):
    path, U = complex_file
    code, rep, _ = run_json(capsys, "cohomology", str(path))
    assert code == 0
    assert rep["p"] == 5 and rep["exact"]
    assert not rep["contractible"]
    assert PComplex.from_json(U.to_json()).dims == U.dims


def test_cohomology_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"p": 5,\n "dims": }')
    code, _, err = run(capsys, "cohomology", str(path))
    assert code == 2
    assert "line 2" in err


def test_cohomology_missing_field(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"p": 5}')
    code, _, err = run(capsys, "cohomology", str(path))
    assert code == 2 and "dims" in err


def test_nh_acyclic_witness(capsys):
    code, rep, _ = run_json(capsys, "nh", "acyclic", "--n", "3", "--a", "1", "--p", "3")
    assert code == 0 and rep["acyclic"] and rep["verified"]
    y = NHElem.from_json(rep["witness_json"])
    assert nh_derive(y, 1) == nh_one(3, 3)


def test_nh_acyclic_none(capsys):
    code, rep, _ = run_json(capsys, "nh", "acyclic", "--n", "2", "--a", "0", "--p", "5")
    assert code == 0 and rep["witness"] == "none"


def test_nh_symbol_window(capsys):
    code, rep, _ = run_json(capsys, "nh", "symbol", "--n", "2", "--a", "1", "--p", "5", "--window", "-2:40")
    assert code == 0
    assert OElem.from_json(rep["value"]) == nh2_symbol_formula(5, 1)
    assert rep["verified"]


def test_nh_derive_check(capsys):
    code, rep, _ = run_json(capsys, "nh", "derive-check", "--n", "3", "--a", "2", "--p", "5")
    assert code == 0 and rep["d^p_vanishes_on_generators"]


def test_text_format(capsys):
    code, out, _ = run(capsys, "nh", "derive-check", "--n", "2", "--p", "3", "--format", "text")
    assert code == 0 and "d^p_vanishes_on_generators: True" in out


def test_qsr_solve(capsys):
    code, rep, _ = run_json(capsys, "klr", "qsr-solve", "--p", "5")
    assert code == 0
    assert sorted(map(tuple, rep["solutions"])) == [(1, 1, 1, 1), (4, 4, 0, 0)]


def test_serre_check_presets(capsys):
    code, rep, _ = run_json(capsys, "klr", "serre-check", "--p", "5", "--params", "d_plus")
    assert code == 0 and rep["ok"]
    code, rep, _ = run_json(capsys, "klr", "serre-check", "--p", "5", "--params", "d_minus")
    assert code == 0 and rep["sigma_image"] and rep["ok"]
    code, rep, _ = run_json(capsys, "klr", "serre-check", "--p", "5", "--params", "1,1,0,0")
    assert code == 1 and not rep["ok"]


def test_params_json(capsys, tmp_path):
    from pdgcat.klr import DiffParams

    path = tmp_path / "params.json"
    path.write_text(json.dumps(DiffParams.a2(1, 1, 1, 1).to_json()))
    code, rep, _ = run_json(capsys, "klr", "serre-check", "--p", "5", "--params", str(path))
    assert code == 0 and DiffParams.from_json(rep["params"]) == DiffParams.a2(1, 1, 1, 1)


def test_klr_symbol(capsys):
    code, rep, _ = run_json(capsys, "klr", "symbol", "--p", "5", "--seq", "ij", "--window", "-4:40")
    assert code == 0 and rep["verified"]
    assert OElem.from_json(rep["value"]) == OElem.one(5)


def test_klr_symbol_needs_seq(capsys):
    code, _, err = run(capsys, "klr", "symbol", "--p", "5")
    assert code == 2 and "--seq" in err


def test_qgroup(capsys):
    code, rep, _ = run_json(capsys, "qgroup", "--p", "3")
    assert code == 0 and rep["ok"] and rep["bialgebra"]["ok"]
    assert len(rep["crosscheck"]) == 6


def test_qgroup_p2_warns(capsys):
    code, _, err = run(capsys, "qgroup", "--p", "2", "--format", "json")
    assert code == 0 and "warning" in err


def test_usage_errors(capsys):
    assert run(capsys, "nh", "symbol", "--n", "2", "--p", "4")[0] == 2
    assert run(capsys, "nh", "symbol", "--n", "2", "--p", "5", "--window", "9:1")[0] == 2
    assert run(capsys, "klr", "qsr-solve", "--p", "5", "--quiver", "{bad")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_bad_seed(capsys, monkeypatch):
    monkeypatch.setenv("PDG_SEED", "abc")
    assert run(capsys, "klr", "qsr-solve", "--p", "3")[0] == 2


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "pdgcat.cli", "klr", "qsr-solve", "--p", "7"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["solutions"] == [[1, 1, 1, 1], [6, 6, 0, 0]]
