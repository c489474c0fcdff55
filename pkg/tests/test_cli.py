import json

import numpy as np
import pytest

from symidx.cli import main
from symidx.io import dump_family, dump_path
from symidx.splin import SymmetricFamily, rotation_path


@pytest.fixture
def quarter_path(tmp_path):
    f = tmp_path / "quarter.json"
    f.write_text(json.dumps(dump_path(rotation_path(1, np.pi / 2))))
    return str(f)


@pytest.fixture
def full_loop(tmp_path):
    f = tmp_path / "loop.json"
    f.write_text(json.dumps(dump_path(rotation_path(1, 2 * np.pi))))
    return str(f)


@pytest.fixture
def sphere_file(tmp_path):
    f = tmp_path / "s2.json"
    f.write_text(json.dumps({
        "generators": [{"id": "m", "doubled_degree": 0},
                       {"id": "M", "doubled_degree": 4}],
        "boundary": [],
    }))
    return str(f)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestIndexCommand:
    def test_cz_quarter_rotation(self, capsys, quarter_path):
        code, out = run(capsys, ["index", "cz", "--input", quarter_path])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["doubled_index"] == 2
        assert doc["result"]["doubled_index_canonical"] == -2
        assert quarter_path in doc["inputs"]

    def test_maslov_loop(self, capsys, full_loop):
        code, out = run(capsys, ["index", "maslov", "--input", full_loop])
        assert code == 0
        assert json.loads(out)["result"]["doubled_index"] == 2

    def test_rs_loop(self, capsys, full_loop):
        code, out = run(capsys, ["index", "rs", "--input", full_loop])
        assert code == 0
        assert json.loads(out)["result"]["doubled_index"] == 4

    def test_winding(self, capsys, quarter_path):
        code, out = run(capsys, ["index", "winding", "--input", quarter_path])
        assert code == 0
        iv = json.loads(out)["result"]["winding_interval"]
        assert abs(iv["lower"] - 0.25) < 1e-6

    def test_degenerate_endpoint_is_domain_error(self, capsys, full_loop):
        code, out = run(capsys, ["index", "cz", "--input", full_loop])
        assert code == 1
        doc = json.loads(out)
        assert doc["error"]["error"] == "endpoint-degenerate"

    def test_family_input(self, capsys, tmp_path):
        fam = SymmetricFamily(np.array([0.0, 1.0]),
                              np.stack([0.5 * np.eye(2)] * 2))
        f = tmp_path / "fam.json"
        f.write_text(json.dumps(dump_family(fam)))
        code, out = run(capsys, ["index", "cz", "--input", str(f)])
        assert code == 0
        assert json.loads(out)["result"]["doubled_index"] == 2


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["index", "frobnicate", "--input", "x"]) == 2

    def test_missing_subcommand(self, capsys):
        assert main([]) == 2

    def test_bad_file_is_domain_error(self, capsys, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{}")
        code, out = run(capsys, ["index", "cz", "--input", str(f)])
        assert code == 1


class TestDeterminism:
    def test_byte_identical_repeats(self, capsys, quarter_path):
        _, out1 = run(capsys, ["index", "cz", "--input", quarter_path])
        _, out2 = run(capsys, ["index", "cz", "--input", quarter_path])
        assert out1 == out2

    def test_axioms_deterministic(self, capsys):
        _, out1 = run(capsys, ["axioms", "--seed", "3", "--count", "2"])
        _, out2 = run(capsys, ["axioms", "--seed", "3", "--count", "2"])
        assert out1 == out2
        assert json.loads(out1)["result"]["all_passed"]

    def test_output_file(self, tmp_path, quarter_path, capsys):
        dst = tmp_path / "out.json"
        code = main(["--output", str(dst), "index", "cz",
                     "--input", quarter_path])
        capsys.readouterr()
        assert code == 0
        assert json.loads(dst.read_text())["result"]["doubled_index"] == 2


class TestTolEnv:
    def test_env_tol_used(self, capsys, quarter_path, monkeypatch):
        # an absurdly loose tolerance makes the endpoint look degenerate
        monkeypatch.setenv("SYMIDX_TOL", "10.0")
        code, out = run(capsys, ["index", "cz", "--input", quarter_path])
        assert code == 1
        assert json.loads(out)["error"]["error"] == "endpoint-degenerate"

    def test_flag_overrides_env(self, capsys, quarter_path, monkeypatch):
        monkeypatch.setenv("SYMIDX_TOL", "1e-2")
        code, out = run(capsys, ["--tol", "1e-9", "index", "cz",
                                 "--input", quarter_path])
        assert code == 0
        assert json.loads(out)["config"]["tol"] == 1e-9


class TestChainCommand:
    def test_homology_keys_are_true_degrees(self, capsys, sphere_file):
        code, out = run(capsys, ["chain", "homology", "--input", sphere_file])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["betti"] == {"0": 1, "2": 1}
        assert doc["result"]["cobetti"] == {"0": 1, "2": 1}

    def test_cascade(self, capsys, tmp_path):
        f = tmp_path / "mb.json"
        f.write_text(json.dumps({"components": [
            {"id": "lo", "dim": 0, "action": 0.0, "rs_trans_doubled": 0,
             "morse_points": [{"id": "p", "morse_index": 0}]},
            {"id": "hi", "dim": 0, "action": 1.0, "rs_trans_doubled": 4,
             "morse_points": [{"id": "q", "morse_index": 0}]},
        ]}))
        code, out = run(capsys, ["chain", "cascade", "--input", str(f)])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["lacunary"]
        assert doc["result"]["betti"] == {"0": 1, "2": 1}


class TestChernCommand:
    def test_c1(self, capsys, tmp_path):
        f = tmp_path / "cl.json"
        f.write_text(json.dumps({
            "rank": 2, "genus": 0,
            "loops": [dump_path(rotation_path(1, 2 * np.pi * 3))],
        }))
        code, out = run(capsys, ["chern", "--input", str(f)])
        assert code == 0
        assert json.loads(out)["result"]["c1"] == 3


class TestDynCommand:
    def test_integrate(self, capsys, tmp_path):
        f = tmp_path / "sys.json"
        f.write_text(json.dumps({"phase_space": "plane",
                                 "hamiltonian": {"builtin": "harmonic"}}))
        code, out = run(capsys, ["dyn", "integrate", "--input", str(f),
                                 "--z0", "1.0,0.0", "--T", "1.0"])
        assert code == 0
        assert json.loads(out)["result"]["energy_drift"] < 1e-10

    def test_twist(self, capsys):
        code, out = run(capsys, ["dyn", "twist", "--epsilon", "0.1",
                                 "--grid", "24"])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["count"] >= 2
        assert not doc["result"]["is_curve"]


class TestDemo:
    def test_unit_sphere(self, capsys):
        code, out = run(capsys, ["demo", "unit-sphere", "--n", "4",
                                 "--window", "1"])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["lacunary"]
        assert doc["result"]["betti"]["1/2"] == 1
        assert doc["result"]["betti"]["-1/2"] == 1
