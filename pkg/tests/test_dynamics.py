from __future__ import annotations

import math

import numpy as np
import pytest

from pstnet.catalog import load_catalog, resolve
from pstnet.dynamics import (
    SpinOperator,
    amplitude_quadrature,
    energy_shift,
    engine_amplitudes,
    evolve,
    fidelity_report,
    full_hamiltonian,
    quadrature_amplitudes,
    quotient_hamiltonian,
    spin_oracle,
    sweep,
)
from pstnet.errors import DimensionMismatch, OracleLimitExceeded
from pstnet.graphs import build_hypercube

PI = math.pi
R5 = math.sqrt(5)
ICOSA_PRINTED = [-7 * PI / 12, (3 * R5 - 5) * PI / 60, -(5 + 3 * R5) * PI / 60, 5 * PI / 12]
CUBE3 = [-3 * PI / 4, PI / 4, 0, 0]
C4 = [-PI / 4, 0, PI / 4]


def test_identity_coupling_quotient():
    net = resolve("icosahedron", with_graph=False)
    H = quotient_hamiltonian(net.params, [1, 0, 0, 0])
    assert np.allclose(H.matrix, (2 + (12 - 4) / 2) * np.eye(4))


def test_cycle4_eigenphases():
    net = resolve("cycle:2")
    H = quotient_hamiltonian(net.params, C4)
    assert H.constant == 0
    w = np.linalg.eigvalsh(H.matrix)
    phases = np.mod(w, 2 * PI)
    assert sorted(np.round(phases / PI, 10) % 2) == [0, 0, 1]


def test_cube3_eigenphase_pattern():
    net = resolve("cube:3", with_graph=False)
    H = quotient_hamiltonian(net.params, CUBE3)
    w = np.sort(np.linalg.eigvalsh(H.matrix - H.constant * np.eye(4)))
    # E(x_l) - c = 2(J_0 + J_1 x_l) with x_l = 3 - 2l, giving phases that step by pi
    expected = np.sort([2 * (CUBE3[0] + CUBE3[1] * (3 - 2 * l)) for l in range(4)])
    assert np.allclose(w, expected, atol=1e-12)
    assert np.allclose(np.diff(expected) / PI, 1)


def test_full_hamiltonian_examples():
    net = resolve("cycle:2")
    H = full_hamiltonian(net.graph, net.partition, [0, 1, 0])
    assert np.allclose(H.matrix, 2 * net.graph.adjacency_matrix())
    net = resolve("cube:3")
    rng = np.random.default_rng(0)
    H = full_hamiltonian(net.graph, net.partition, rng.normal(size=4))
    for A in net.partition.Amats:
        assert np.max(np.abs(H.matrix @ A - A @ H.matrix)) <= 1e-12
    with pytest.raises(DimensionMismatch):
        full_hamiltonian(net.graph, net.partition, [1, 2])


def test_icosahedron_compression_equals_quotient():
    net = resolve("icosahedron")
    H = full_hamiltonian(net.graph, net.partition, ICOSA_PRINTED)
    Hq = quotient_hamiltonian(net.params, ICOSA_PRINTED)
    assert np.allclose(net.basis.compress(H.matrix), Hq.matrix, atol=1e-10)


@pytest.mark.parametrize("name", ["cycle:2", "cycle:3", "cube:1", "cube:3"])
def test_oracle_block_equals_full(name):
    net = resolve(name)
    J = np.random.default_rng(1).normal(size=net.d + 1)
    orc = spin_oracle(net.graph, net.partition, J)
    full = full_hamiltonian(net.graph, net.partition, J)
    assert orc.conserved
    assert np.max(np.abs(orc.hamiltonian.matrix - full.matrix)) <= 1e-12


def test_oracle_cube3_explicit_form():
    net = resolve("cube:3")
    J = np.array([0.3, -0.7, 0.2, 1.1])
    orc = spin_oracle(net.graph, net.partition, J)
    D = net.graph.distances
    expected = 2 * sum(J[m] * (D == m) for m in range(4)) + 2 * np.dot(J, net.params.kappa) * np.eye(8)
    assert np.max(np.abs(orc.hamiltonian.matrix - expected)) <= 1e-12


def test_oracle_single_edge():
    net = resolve("cube:1")
    orc = spin_oracle(net.graph, net.partition, [0, 1])
    M = orc.hamiltonian.matrix
    assert M[0, 1] == M[1, 0] == 2


def test_spin_operator_exchange_rule():
    op = SpinOperator(build_hypercube(1).distances, 1)
    # |up up> -> +1 ; |down up> -> -1 |down up> + 2 |up down>  (coefficients doubled)
    assert op.apply(0b11) == {0b11: [2, 2]}
    assert op.apply(0b10) == {0b10: [2, -2], 0b01: [0, 4]}


def test_oracle_limit():
    net = resolve("dodecahedron")
    with pytest.raises(OracleLimitExceeded):
        spin_oracle(net.graph, net.partition, np.zeros(6))
    assert spin_oracle(resolve("cube:3").graph, resolve("cube:3").partition, np.zeros(4), limit=8).conserved


def test_evolve_identity_at_zero():
    net = resolve("icosahedron")
    f = evolve(quotient_hamiltonian(net.params, ICOSA_PRINTED), 0.0).f
    assert np.allclose(f, [1, 0, 0, 0])
    assert abs(amplitude_quadrature(net.spectrum, net.params, ICOSA_PRINTED, 0, 0.0) - 1) < 1e-12


@pytest.mark.parametrize("name,J", [("cycle:2", C4), ("cube:3", CUBE3), ("icosahedron", ICOSA_PRINTED)])
def test_printed_couplings_transfer(name, J):
    net = resolve(name)
    f = evolve(quotient_hamiltonian(net.params, J), 1.0).f
    assert abs(abs(f[-1]) - 1) <= 1e-10
    assert abs(abs(amplitude_quadrature(net.spectrum, net.params, J, net.d, 1.0)) - 1) <= 1e-10


@pytest.mark.parametrize("name", ["cycle:2", "cycle:3", "cycle:4", "cycle:5", "cycle:6", "cube:2", "cube:3",
                                  "cube:4", "icosahedron", "dodecahedron", "desargues"])
def test_engine_equivalence_and_unitarity(name):
    net = resolve(name)
    rng = np.random.default_rng(7)
    J = rng.normal(size=net.d + 1)
    for t in rng.uniform(0, 10, 10):
        amps, _ = engine_amplitudes(net, J, float(t))
        ref = amps["quadrature"]
        for f in amps.values():
            assert np.max(np.abs(f - ref)) <= 1e-10
            assert abs(np.sum(np.abs(f) ** 2) - 1) <= 1e-10


@pytest.mark.parametrize("name", ["cube:3", "icosahedron", "taylor_gq22", "johnson_8_4"])
def test_global_shift_invariance(name):
    net = resolve(name, with_graph=False)
    J = np.random.default_rng(3).normal(size=net.d + 1)
    J2 = J.copy()
    J2[0] += 0.37
    for t in (0.3, 1.0, 2.7):
        a = np.abs(quadrature_amplitudes(net.spectrum, net.params, J, t))
        b = np.abs(quadrature_amplitudes(net.spectrum, net.params, J2, t))
        assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hypercube_mirror_periodicity(d):
    net = resolve(f"cube:{d}", with_graph=False)
    J = np.zeros(d + 1)
    J[1] = PI / 4  # nearest-neighbour coupling transfers in t0 = 1
    H = quotient_hamiltonian(net.params, J)
    assert abs(abs(evolve(H, 1.0).f[-1]) - 1) <= 1e-10
    f2 = evolve(H, 2.0).f
    assert abs(abs(f2[0]) - 1) <= 1e-10
    assert abs(f2[-1]) <= 1e-10


def test_cube3_printed_mirror():
    net = resolve("cube:3", with_graph=False)
    H = quotient_hamiltonian(net.params, CUBE3)
    f2 = evolve(H, 2.0).f
    assert abs(abs(f2[0]) - 1) <= 1e-10 and abs(f2[-1]) <= 1e-10


def test_fidelity_report_records():
    net = resolve("cycle:2")
    rep = fidelity_report(net, C4, theta=0.0, t0=1.0)
    assert rep.certified and rep.max_deviation <= 1e-10
    assert abs(rep.phase - rep.expected_phase) <= 1e-10
    rec = rep.to_record()
    assert set(rec["abs_f_d"]) == {"quadrature", "quotient", "full", "oracle"}

    rep = fidelity_report(net, [0.1, 0.2, 0.3], t0=1.0)
    assert not rep.certified
    assert rep.to_record()["certified"] is False


@pytest.mark.parametrize("name", list(load_catalog()))
def test_transfer_phase_matches_theta(name):
    from pstnet.solver import feasibility, search_branches

    net = resolve(name, with_graph=False)
    s = feasibility(net.spectrum, net.params)
    for theta in (0.0, 0.3):
        top = search_branches(net.spectrum, s, theta=theta, t0=1.5, depth=1)[0]
        f = quadrature_amplitudes(net.spectrum, net.params, top.J, 1.5)[-1]
        c = energy_shift(top.J, net.params.kappa, net.v)
        assert abs(abs(f) - 1) <= 1e-9
        assert abs(f - np.exp(1j * (theta - c * 1.5))) <= 1e-9


def test_sweep_rows():
    net = resolve("cube:3", with_graph=False)
    rows = sweep(net, CUBE3, 2.0, 201)
    assert len(rows) == 201
    at_one = [r for r in rows if abs(r[0] - 1.0) < 1e-12][0]
    assert abs(at_one[1] - 1) <= 1e-10
    (row,) = sweep(net, CUBE3, 2.0, 1)
    assert row[0] == 0 and abs(row[3] - 1) < 1e-12
    with pytest.raises(ValueError):
        sweep(net, CUBE3, 2.0, 0)
