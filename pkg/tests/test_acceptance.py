"""End-to-end acceptance gate: every public guarantee in one place.

Each test pins an exact contract (doubled-integer equality wherever the
quantity is discrete) together with its runtime budget.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from symidx.axioms import (
    constant_family,
    random_admissible_path,
    random_symmetric_bounded,
    run_axiom_suite,
)
from symidx.chain import (
    conjugate_point_count,
    homology,
    cohomology,
    rfh_unit_sphere,
    rs_trans_unit_sphere,
)
from symidx.chern import check_c1_axioms
from symidx.cli import main
from symidx.errors import EndpointDegenerateError
from symidx.hamdyn import (
    find_periodic_orbit,
    integrate,
    monodromy_and_cz,
    harmonic_system,
    pendulum_system,
    twist_fixed_points,
)
from symidx.index import (
    cz_rs,
    loop_operator_spectral_flow,
    maslov_loop,
    rs_index,
    spectral_flow_matrix,
)
from symidx.io import load_complex
from symidx.splin import (
    SymmetricFamily2,
    path_from_symmetric,
    random_symmetric_family,
    rotation_path,
)

DATA = Path(__file__).resolve().parent.parent / "data"


def test_01_signature_axiom():
    """cz_rs(e^{t J0 S}) = sign(S)/2 for 100 seeded bounded symmetric S."""
    start = time.monotonic()
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        S = random_symmetric_bounded(rng, n)  # nondegenerate, norm < 2 pi
        w = np.linalg.eigvalsh(S)
        sign_doubled = int(np.sum(w > 0) - np.sum(w < 0))
        P = path_from_symmetric(constant_family(S), steps=256)
        assert cz_rs(P).doubled == sign_doubled
    assert time.monotonic() - start < 10.0


def test_02_normalizations():
    assert maslov_loop(rotation_path(1, 2 * np.pi)).as_int() == 1
    assert rs_index(rotation_path(1, 2 * np.pi)).doubled == 4  # value 2
    clockwise = rotation_path(1, -1.0)
    assert cz_rs(clockwise).in_normalization("canonical").as_int() == 1


def test_03_axiom_suite():
    start = time.monotonic()
    report = run_axiom_suite(
        seed=7, count=100,
        axioms=("product", "loop", "inverse", "naturality",
                "determinant", "direct-sum"),
    )
    assert report["all_passed"], report
    for name, r in report["axioms"].items():
        assert r["failures"] == [], (name, r)
    assert time.monotonic() - start < 60.0


def test_04_cross_algorithm_sp2():
    start = time.monotonic()
    report = run_axiom_suite(seed=11, count=200, axioms=("cross-algorithm",))
    assert report["all_passed"], report
    assert report["axioms"]["cross-algorithm"]["failures"] == []
    assert time.monotonic() - start < 60.0


def test_05_spectral_flow():
    start = time.monotonic()
    rng = np.random.default_rng(31)

    # matrix families: flow equals the endpoint negative-count difference
    done = 0
    while done < 100:
        n = int(rng.integers(1, 3))
        fam = random_symmetric_family(n, rng, modes=2, scale=2.0)
        w0 = np.linalg.eigvalsh(fam.at(0.0))
        w1 = np.linalg.eigvalsh(fam.at(1.0))
        if min(np.min(np.abs(w0)), np.min(np.abs(w1))) < 1e-3:
            continue
        expect = int(np.sum(w0 < 0) - np.sum(w1 < 0))
        assert spectral_flow_matrix(fam) == expect
        done += 1

    # loop operators: flow equals the CZ difference, stable across cutoffs
    done = 0
    while done < 20:
        f0 = random_symmetric_family(1, rng, modes=2, scale=1.5)
        f1 = random_symmetric_family(1, rng, modes=2, scale=1.5)
        fam2 = SymmetricFamily2(np.array([0.0, 1.0]), [f0, f1])
        try:
            expect = (cz_rs(path_from_symmetric(f0, 256)).as_int()
                      - cz_rs(path_from_symmetric(f1, 256)).as_int())
            # raises if the value differs between cutoffs 32 and 64
            got = loop_operator_spectral_flow(fam2, 32)
        except EndpointDegenerateError:
            continue
        assert got == expect
        done += 1
    assert time.monotonic() - start < 60.0


def test_06_chern():
    report = check_c1_axioms(seed=0)
    assert report["all_passed"], report


def test_07_dynamics():
    start = time.monotonic()

    sys_p = pendulum_system()
    traj = integrate(sys_p, np.array([0.5, 0.0]), 100.0, 1e-3)
    assert traj.energy_drift(sys_p) < 1e-8

    orbit = find_periodic_orbit(harmonic_system(), np.array([1.1, 0.1]), 6.0)
    assert abs(orbit.period - 2 * np.pi) < 1e-6

    eps = 0.05
    sys_c = pendulum_system("canonical", scale=eps)
    for z, morse in (([0.0, 0.0], 1), ([0.5, 0.0], 0)):
        o = find_periodic_orbit(sys_c, np.array(z), 1.0)
        _, nondeg, idx = monodromy_and_cz(sys_c, o)
        assert nondeg
        assert idx["canonical"].as_int() == 1 - morse  # n - Morse index

    def standard_map(p):
        th, r = p
        return np.array([th + r, r + 0.1 * np.sin(2 * np.pi * (th + r))])

    rep = twist_fixed_points(standard_map, (-np.pi, np.pi), grid=32)
    assert len(rep.fixed_points) >= 2
    assert rep.rotation_lower < 0 < rep.rotation_upper

    assert time.monotonic() - start < 30.0


def test_08_chain_datasets():
    expected = {
        "s2.complex.json": {0: 1, 2: 0, 4: 1},
        "t2.complex.json": {0: 1, 2: 2, 4: 1},
        "rp2.complex.json": {0: 1, 2: 1, 4: 1},
    }
    for name, betti in expected.items():
        C = load_complex(DATA / name)
        got = homology(C)
        for d, b in betti.items():
            assert got.get(d, 0) == b, (name, d)
        assert cohomology(C) == got, name


def test_09_rabinowitz_unit_sphere():
    for n, K in ((4, 2), (5, 1)):
        table = rfh_unit_sphere(n, K)
        assert table["lacunary"]
        assert all(b == 1 for b in table["betti"].values())
        base = [-(2 * n - 1), -1, 1, 2 * n - 1]  # doubled half-integers
        expect = sorted(d + 2 * (2 * n - 2) * k
                        for k in range(-K, K + 1) for d in base)
        assert table["support_doubled"] == expect
    # derivation oracle for the transverse index table
    for n in (4, 5):
        for k in (1, 2, 3):
            assert rs_trans_unit_sphere(n, k) == conjugate_point_count(n, k)


def test_10_cli_determinism(capsys, tmp_path):
    from symidx.io import dump_path

    f = tmp_path / "p.json"
    f.write_text(json.dumps(dump_path(rotation_path(1, np.pi / 2))))
    outs = []
    for _ in range(2):
        assert main(["index", "cz", "--input", str(f)]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]

    for _ in range(2):
        assert main(["axioms", "--seed", "5", "--count", "3"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[2] == outs[3]
    assert json.loads(outs[2])["result"]["all_passed"]
