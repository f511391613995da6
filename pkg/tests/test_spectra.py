from __future__ import annotations

import math

import numpy as np
import pytest

from pstnet.catalog import cube_array, cycle_array, load_catalog, match_spectrum, resolve
from pstnet.graphs import build_cycle, build_hypercube, build_icosahedron
from pstnet.scheme import build_polynomials, derive_parameters, parse_intersection_array
from pstnet.spectra import (
    PoleProximity,
    bisection_roots,
    jacobi_matrix,
    spectral_data,
    stieltjes,
    stieltjes_continued_fraction,
    stieltjes_partial_fraction,
    stieltjes_rational,
)

R5 = math.sqrt(5)


def _net(text):
    p = derive_parameters(parse_intersection_array(text))
    polys = build_polynomials(p)
    return p, polys, spectral_data(p, polys)


def test_jacobi_examples():
    p, _, _ = _net("2,1;1,2")
    T = jacobi_matrix(p)
    assert np.allclose(np.diag(T), 0) and np.allclose(np.diag(T, 1), [math.sqrt(2)] * 2)
    p, _, _ = _net("5,2,1;1,2,5")
    T = jacobi_matrix(p)
    assert np.allclose(np.diag(T), [0, 2, 2, 0])
    assert np.allclose(np.diag(T, 1), [R5, 2, R5])
    p, _, _ = _net("1;1")
    assert np.allclose(jacobi_matrix(p), [[0, 1], [1, 0]])


def test_icosahedron_spectrum():
    _, _, sp = _net("5,2,1;1,2,5")
    assert np.allclose(sp.x, [5, R5, -1, -R5], atol=1e-12)
    assert np.allclose(sp.gamma, [1 / 12, 3 / 12, 5 / 12, 3 / 12], atol=1e-12)
    assert np.allclose(sp.m, [1, 3, 5, 3], atol=1e-10)


def test_cycle6_and_cube3_spectra():
    _, _, sp = _net("2,1,1;1,1,2")
    assert np.allclose(sp.x, [2, 1, -1, -2]) and np.allclose(sp.gamma, [1 / 6, 1 / 3, 1 / 3, 1 / 6])
    _, _, sp = _net("3,2,1;1,2,3")
    assert np.allclose(sp.x, [3, 1, -1, -3]) and np.allclose(sp.gamma, [1 / 8, 3 / 8, 3 / 8, 1 / 8])


@pytest.mark.parametrize("d", range(1, 9))
def test_hypercube_spectrum_binomial(d):
    p = derive_parameters(cube_array(d))
    sp = spectral_data(p, build_polynomials(p))
    assert np.allclose(sp.x, [d - 2 * l for l in range(d + 1)], atol=1e-10)
    assert np.allclose(sp.gamma, [math.comb(d, l) / 2 ** d for l in range(d + 1)], atol=1e-12)


def test_eigenmatrix_examples():
    _, _, sp = _net("3,2,1;1,2,3")
    assert np.allclose(sp.Pmat, sp.Qmat, atol=1e-12)  # self-dual
    _, _, sp = _net("2,1;1,2")
    assert np.allclose(sp.Pmat.T @ sp.Pmat.T, 4 * np.eye(3), atol=1e-12)
    for name, entry in load_catalog().items():
        net = resolve(name, with_graph=False)
        assert np.allclose(net.spectrum.Pmat[0], net.params.kappa, atol=1e-9), name


def test_stieltjes_examples():
    p, polys, sp = _net("5,2,1;1,2,5")
    # direct substitution: (1000-400-50+10)/(10000-4000-1000+200+25)
    assert abs(stieltjes(p, polys, sp, 10) - 560 / 5225) < 1e-14
    p, polys, sp = _net("1;1")
    assert abs(stieltjes(p, polys, sp, 2) - 2 / 3) < 1e-14
    p, polys, sp = _net("3,2,2,1,1;1,1,2,2,3")
    z = 4j
    pf, cf = stieltjes_partial_fraction(sp, z), stieltjes_continued_fraction(p, z)
    assert abs(pf - cf) <= 1e-10 * abs(cf)
    assert abs(stieltjes_rational(polys, z) - pf) <= 1e-10 * abs(pf)


def test_stieltjes_pole_guard():
    p, polys, sp = _net("2,1;1,2")
    with pytest.raises(PoleProximity):
        stieltjes(p, polys, sp, 2.0)


@pytest.mark.parametrize("m", range(2, 9))
def test_cycle_spectrum_cosines(m):
    p = derive_parameters(cycle_array(m))
    sp = spectral_data(p, build_polynomials(p))
    assert np.allclose(sp.x, [2 * math.cos(math.pi * k / m) for k in range(m + 1)], atol=1e-12)
    expected = [1 / (2 * m) if k in (0, m) else 1 / m for k in range(m + 1)]
    assert np.allclose(sp.gamma, expected, atol=1e-12)


@pytest.mark.parametrize("graph", [build_cycle(3), build_cycle(4), build_hypercube(3), build_icosahedron()],
                         ids=lambda g: g.name)
def test_moments_count_closed_walks(graph):
    """sum_k gamma_k x_k^n equals the number of closed n-walks at a vertex."""
    from pstnet.graphs import check_distance_regular

    arr = check_distance_regular(graph)
    p = derive_parameters(arr)
    sp = spectral_data(p, build_polynomials(p))
    A = graph.adjacency_matrix()
    An = np.eye(graph.n)
    for n in range(0, 2 * p.d + 3):
        assert abs(np.sum(sp.gamma * sp.x ** n) - An[0, 0]) <= 1e-9 * max(1, An[0, 0])
        An = An @ A


def test_bisection_matches_numpy_roots_of_exact_polynomial():
    p, polys, sp = _net("16,9,4,1;1,4,9,16")
    roots = np.sort(np.roots([float(c) for c in reversed(polys.Q[p.d + 1].coeffs)]).real)
    assert np.allclose(bisection_roots(p), roots, atol=1e-8)


def test_printed_spectral_data_all_entries():
    for name, entry in load_catalog().items():
        net = resolve(name, with_graph=False)
        ok, worst = match_spectrum(entry.printed, net.spectrum.x, net.spectrum.gamma)
        assert ok, (name, worst)
        assert np.allclose(net.spectrum.m, np.round(net.spectrum.m), atol=1e-8), name
