from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pstnet.catalog import load_catalog, resolve
from pstnet.errors import ModulusMismatch, NotAntipodal
from pstnet.network import Network
from pstnet.scheme import parse_intersection_array
from pstnet.solver import (
    check_solution,
    feasibility,
    modulus_table,
    same_coupling_class,
    search_branches,
    solve_couplings,
    transfer_column,
)

PI = math.pi
R5 = math.sqrt(5)
ICOSA_PRINTED = [-7 * PI / 12, (3 * R5 - 5) * PI / 60, -(5 + 3 * R5) * PI / 60, 5 * PI / 12]


def _setup(name):
    net = resolve(name, with_graph=False)
    return net, feasibility(net.spectrum, net.params)


def test_sign_patterns():
    _, s = _setup("cube:3")
    assert s == (1, -1, 1, -1)
    _, s = _setup("icosahedron")
    assert s == (1, -1, 1, -1)


def test_not_antipodal():
    net = Network.from_array(parse_intersection_array("2,1;1,1"))
    with pytest.raises(NotAntipodal) as info:
        feasibility(net.spectrum, net.params)
    assert info.value.kappa_d == 2


def test_modulus_mismatch():
    # passes every integrality check and has kappa_3 = 1, yet |P_3| = 2.28 at one eigenvalue
    net = Network.from_array(parse_intersection_array("4,1,1;1,2,2"))
    assert net.params.antipodal
    with pytest.raises(ModulusMismatch) as info:
        feasibility(net.spectrum, net.params)
    assert np.any(np.abs(info.value.table - 1) > 1e-8)


def test_cycle4_solutions():
    net, s = _setup("cycle:2")
    sol = solve_couplings(net.spectrum, s, 0.0, 1.0, (0, 0, 0))
    assert np.allclose(sol.J, [-PI / 4, 0, PI / 4], atol=1e-12)
    sol = solve_couplings(net.spectrum, s, 0.0, 1.0, (0, 0, 1))
    assert np.allclose(sol.J, [-PI / 2, PI / 4, 0], atol=1e-12)
    assert sol.residual <= 1e-12


def test_cube3_solution_and_ranking():
    net, s = _setup("cube:3")
    sols = search_branches(net.spectrum, s, 0.0, 1.0, depth=1)
    assert np.allclose(sols[0].J, [-3 * PI / 4, PI / 4, 0, 0], atol=1e-12)
    assert sols[0].J[2] == 0 and sols[0].J[3] == 0
    assert all(x.residual <= 1e-10 for x in sols)
    keys = [x.rank_key() for x in sols]
    assert keys == sorted(keys)


def test_cycle4_both_printed_in_search():
    net, s = _setup("cycle:2")
    sols = search_branches(net.spectrum, s, 0.0, 1.0, depth=1)
    for target in ([-PI / 4, 0, PI / 4], [-PI / 2, PI / 4, 0]):
        assert any(np.allclose(x.J, target, atol=1e-12) for x in sols)


def test_icosahedron_printed_solution_found():
    net, s = _setup("icosahedron")
    assert check_solution(net.spectrum, s, ICOSA_PRINTED, 0.0, 1.0).max <= 1e-12
    sols = search_branches(net.spectrum, s, 0.0, 1.0, depth=1)
    assert any(same_coupling_class(x.J, ICOSA_PRINTED, 1.0, 1e-9) for x in sols)


def test_zero_couplings_residual():
    net, s = _setup("cube:3")
    rep = check_solution(net.spectrum, s, [0, 0, 0, 0], 0.0, 1.0)
    assert np.allclose(rep.per_k, [0, PI, 0, PI])


def test_transfer_column_identity():
    net, s = _setup("icosahedron")
    col = transfer_column(net.spectrum)
    sp = net.spectrum
    assert np.allclose(col, sp.gamma * sp.Pmat[:, -1] / net.params.kappa[-1], atol=1e-12)
    assert np.allclose(modulus_table(sp), 1)


def test_solve_rejects_bad_input():
    net, s = _setup("cycle:2")
    with pytest.raises(ValueError):
        solve_couplings(net.spectrum, s, 0.0, 0.0)
    with pytest.raises(ValueError):
        solve_couplings(net.spectrum, s, 0.0, 1.0, (0, 0))
    with pytest.raises(ValueError):
        search_branches(net.spectrum, s, depth=-1)


ANTIPODAL = ["cycle:2", "cycle:3", "cycle:5", "cube:2", "cube:3", "cube:5"] + list(load_catalog())
small_ints = st.integers(-2, 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ANTIPODAL), st.floats(-3, 3), st.floats(0.2, 5), st.data())
def test_time_scaling(name, theta, t0, data):
    """J(t0) * t0 is independent of t0."""
    net, s = _setup(name)
    l = tuple([0] + [data.draw(small_ints) for _ in range(net.d)])
    a = solve_couplings(net.spectrum, s, theta, 1.0, l)
    b = solve_couplings(net.spectrum, s, theta, t0, l)
    assert np.allclose(np.array(b.J) * t0, a.J, atol=1e-12)
    assert b.residual <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ANTIPODAL), st.floats(-3, 3), st.data())
def test_theta_enters_only_J0(name, theta, data):
    net, s = _setup(name)
    l = tuple([0] + [data.draw(small_ints) for _ in range(net.d)])
    a = solve_couplings(net.spectrum, s, 0.0, 1.0, l)
    b = solve_couplings(net.spectrum, s, theta, 1.0, l)
    assert np.allclose(b.J[1:], a.J[1:], atol=1e-12)
    assert abs(b.J[0] - (a.J[0] - theta / 2)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ANTIPODAL), st.data())
def test_uniform_branch_shift(name, data):
    """Adding 1 to every l_k shifts u_0 by -2 pi and leaves the rest unchanged."""
    net, s = _setup(name)
    l = [data.draw(small_ints) for _ in range(net.d + 1)]
    a = solve_couplings(net.spectrum, s, 0.0, 1.0, l)
    b = solve_couplings(net.spectrum, s, 0.0, 1.0, [v + 1 for v in l])
    assert np.array_equal(np.array(b.u)[1:], np.array(a.u)[1:])
    assert abs(b.u[0] - a.u[0] + 2 * PI) <= 1e-12
    assert same_coupling_class(a.J, b.J, 1.0)


@pytest.mark.parametrize("name", ANTIPODAL)
def test_every_search_solution_satisfies_phase_equations(name):
    net, s = _setup(name)
    for sol in search_branches(net.spectrum, s, 0.3, 2.0, depth=1)[:50]:
        assert sol.residual <= 1e-9


def test_same_coupling_class():
    assert same_coupling_class([0.1, 0.2], [0.1 + PI, 0.2], 1.0)
    assert same_coupling_class([0.1, 0.2], [0.1 + PI / 2, 0.2], 2.0)
    assert not same_coupling_class([0.1, 0.2], [0.1 + PI / 2, 0.2], 1.0)
    assert not same_coupling_class([0.1, 0.2], [0.1, 0.3], 1.0)
