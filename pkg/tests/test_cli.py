import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from oracles import naive_partial_trace
from qmarginal import cli
from qmarginal.qstate import random_fixed_spectrum_state

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return path


def test_bell_bipartite_exit_zero(capsys):
    code, out, _ = run(["check", DATA / "bell.json", "--suite", "bipartite"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["overall"] == "compatible-necessary"
    assert abs(doc["min_slack"]) <= doc["tolerances"]["slack"]
    assert doc["resorted"] == ["AB"]
    assert set(doc["tolerances"]) == {"slack", "zero_clamp", "trace", "rank"}


def test_pure_marginal_mixed_global_exit_one(capsys):
    code, out, _ = run(["check", DATA / "pure_a_mixed_ab.json", "--suite", "two-qubit"], capsys)
    doc = json.loads(out)
    assert code == 1
    assert "A_min_vs_AB" in [r["name"] for r in doc["records"] if r["verdict"] == "violated"]


def test_ghz_tripartite_lists_all_triples(capsys):
    code, out, _ = run(["check", DATA / "ghz.json", "--suite", "tripartite"], capsys)
    doc = json.loads(out)
    assert code == 0
    joint = [r["name"] for r in doc["records"] if r["name"].startswith("joint")]
    assert len(joint) == 7
    assert doc["rank_check"]["status"] == "not-applicable"


@pytest.mark.parametrize(
    "name, argv",
    [
        ("check_bell.json", ["check", DATA / "bell.json", "--suite", "bipartite"]),
        ("check_ghz.json", ["check", DATA / "ghz.json", "--suite", "tripartite"]),
        ("reduce_product.json", ["reduce", DATA / "product.json", "--keep", "0"]),
    ],
)
def test_golden_outputs(name, argv, capsys):
    _, out, _ = run(argv, capsys)
    assert out == (GOLDEN / name).read_text()


def test_golden_scan(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(
        ["scan", "--checker", "pure-multipartite", "--dim", "2", "--resolution", "2", "-o", out],
        capsys,
    )
    assert code == 0
    assert out.read_text() == (GOLDEN / "scan_qubits_r2.csv").read_text()


def test_reduce_product_and_identity(tmp_path, capsys):
    src = json.loads((DATA / "product.json").read_text())
    mat = np.array(src["matrix"])
    mat = mat[..., 0] + 1j * mat[..., 1]
    code, out, _ = run(["reduce", DATA / "product.json", "--keep", "0"], capsys)
    doc = json.loads(out)
    red = np.array(doc["matrix"])
    np.testing.assert_allclose(red[..., 0] + 1j * red[..., 1], [[0.25, 0.1j], [-0.1j, 0.75]], atol=1e-15)
    assert doc["spectrum"] == sorted(doc["spectrum"])
    code, out, _ = run(["reduce", DATA / "product.json", "--keep", "0,1"], capsys)
    full = np.array(json.loads(out)["matrix"])
    np.testing.assert_array_equal(full[..., 0] + 1j * full[..., 1], mat)


def test_reduce_matches_naive_oracle(tmp_path, capsys):
    rng = np.random.default_rng(4)
    rho = random_fixed_spectrum_state((2, 3, 2), rng.dirichlet(np.ones(12)), rng)
    path = write_json(tmp_path / "m.json", cli.matrix_document(rho))
    code, out, _ = run(["reduce", path, "--keep", "0,2"], capsys)
    red = np.array(json.loads(out)["matrix"])
    np.testing.assert_allclose(
        red[..., 0] + 1j * red[..., 1], naive_partial_trace(rho.mat, (2, 3, 2), (0, 2)), atol=1e-12
    )


def test_sample_is_byte_identical(capsys):
    argv = ["sample", "--dims", "2,2", "--n", "1000", "--seed", "7"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv + ["--workers", "2"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert "wall_clock_s" not in doc
    rec = doc["records"]["joint_AB[k=1,l=1]"]
    assert {"min_slack", "argmin_seed", "violation_count"} <= rec.keys()


def test_sample_fixed_spectrum_constant_slacks(capsys):
    code, out, _ = run(
        ["sample", "--dims", "2,2", "--spectrum", "0.25,0.25,0.25,0.25", "--n", "30"], capsys
    )
    assert code == 0
    for rec in json.loads(out)["records"].values():
        assert rec["max_slack"] - rec["min_slack"] < 1e-12


def test_sample_pure_qutrits_picks_multipartite_campaign(capsys):
    code, out, _ = run(["sample", "--dims", "3,3,3", "--pure", "--n", "200"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["campaign"] == "pure-multipartite"
    assert any(name.startswith("qutrit[") for name in doc["records"])


def test_sample_timing_flag(capsys):
    _, out, _ = run(["sample", "--dims", "2,2", "--n", "5", "--timing"], capsys)
    assert json.loads(out)["wall_clock_s"] >= 0


def test_scan_containment_summary(tmp_path, capsys):
    code, out, _ = run(
        ["scan", "--checker", "three-qutrit", "--resolution", "4", "--samples", "300",
         "-o", tmp_path / "q.csv"],
        capsys,
    )
    assert code == 0
    assert json.loads(out)["containment"]["contained"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "missing.json", "--suite", "bipartite"],
        ["check", DATA / "bell.json", "--suite", "tripartite"],
        ["check", DATA / "product.json", "--suite", "bipartite"],
        ["reduce", DATA / "product.json", "--keep", "1,0"],
        ["reduce", DATA / "product.json", "--keep", "x"],
        ["reduce", DATA / "bell.json", "--keep", "0"],
        ["sample", "--dims", "0,2"],
        ["sample", "--dims", "2,2", "--spectrum", "0.5,0.5"],
        ["sample", "--dims", "2,3", "--pure", "--campaign", "pure-multipartite"],
        ["sample", "--dims", "2,2,2,2"],
        ["scan", "--resolution", "1", "-o", "x.csv"],
        ["frobnicate"],
        [],
    ],
)
def test_input_errors_exit_two(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_missing_entry_is_named(tmp_path, capsys):
    path = write_json(
        tmp_path / "s.json", {"schema_version": "1", "dims": [2, 2], "spectra": {"A": [0.5, 0.5]}}
    )
    code, _, err = run(["check", path, "--suite", "bipartite"], capsys)
    assert code == 2 and "'B'" in err and "'AB'" in err


def test_bad_schema_and_unwritable(tmp_path, capsys):
    path = write_json(tmp_path / "s.json", {"schema_version": "2", "dims": [2, 2], "spectra": {}})
    assert run(["check", path, "--suite", "bipartite"], capsys)[0] == 2
    bad_out = tmp_path / "nodir" / "x.csv"
    assert run(["scan", "--resolution", "2", "-o", bad_out], capsys)[0] == 2


def test_negative_eigenvalue_is_input_error(tmp_path, capsys):
    path = write_json(
        tmp_path / "s.json",
        {"schema_version": "1", "dims": [2, 2],
         "spectra": {"A": [-0.1, 1.1], "B": [0.5, 0.5], "AB": [0.25] * 4}},
    )
    assert run(["check", path, "--suite", "bipartite"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qmarginal", "check", str(DATA / "bell.json"), "--suite", "two-qubit"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["suite"] == "two-qubit"
