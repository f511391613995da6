"""Spectral distribution, Gauss weights and eigenmatrices of a P-polynomial scheme.

The primary path is the symmetric tridiagonal (Jacobi) eigenproblem; roots of
``Q_{d+1}`` and the residue formula for the weights are computed independently
and must agree with it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import NumericalInconsistency, PSTError
from .scheme import PolynomialSystem, SchemeParameters

WEIGHT_TOL = 1e-10
ROOT_TOL = 1e-10
GAP_TOL = 1e-9
DUALITY_TOL = 1e-9
STIELTJES_REL_TOL = 1e-10
POLE_TOL = 1e-8


@dataclass(frozen=True)
class SpectralData:
    x: np.ndarray  # descending, x[0] = kappa
    gamma: np.ndarray
    m: np.ndarray
    Pmat: Optional[np.ndarray] = None  # Pmat[k, i] = P_i(x_k)
    Qmat: Optional[np.ndarray] = None

    @property
    def d(self) -> int:
        return len(self.x) - 1

    def to_record(self) -> dict:
        rec = {"x": self.x.tolist(), "gamma": self.gamma.tolist(), "m": self.m.tolist()}
        if self.Pmat is not None:
            rec["Pmat"] = self.Pmat.tolist()
            rec["Qmat"] = self.Qmat.tolist()
        return rec


def jacobi_matrix(params: SchemeParameters) -> np.ndarray:
    alpha = np.asarray(params.alpha, dtype=float)
    beta = np.sqrt(np.asarray(params.omega, dtype=float))
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)


def _count_below(alpha: np.ndarray, omega: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the Jacobi matrix strictly below ``x``.

    Pivots of the LDL^T factorisation of ``T - x I`` are the ratios
    ``-Q_{i+1}(x)/Q_i(x)``; counting negative pivots counts the sign
    agreements of consecutive ``Q_i(x)``.
    """
    tiny = np.finfo(float).tiny
    count = 0
    piv = alpha[0] - x
    # a zero pivot is nudged to -tiny; the next pivot then overflows to +inf, which is the right sign
    with np.errstate(over="ignore", divide="ignore"):
        for i in range(len(alpha)):
            if i > 0:
                piv = alpha[i] - x - omega[i - 1] / piv
            if piv == 0.0:
                piv = -tiny
            if piv < 0:
                count += 1
    return count


def bisection_roots(params: SchemeParameters) -> np.ndarray:
    """Roots of ``Q_{d+1}`` in ascending order, each isolated by bisection on sign counts."""
    alpha = np.asarray(params.alpha, dtype=float)
    omega = np.asarray(params.omega, dtype=float)
    beta = np.sqrt(omega)
    n = len(alpha)
    radius = np.abs(alpha) + np.concatenate([[0.0], beta]) + np.concatenate([beta, [0.0]])
    lo0 = float(np.min(alpha - radius)) - 1.0
    hi0 = float(np.max(alpha + radius)) + 1.0
    roots = np.empty(n)
    for j in range(n):
        lo, hi = lo0, hi0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _count_below(alpha, omega, mid) > j:
                hi = mid
            else:
                lo = mid
        roots[j] = 0.5 * (lo + hi)
    return roots


def _eig_jacobi(T: np.ndarray):
    w, U = np.linalg.eigh(T)
    norm = max(np.linalg.norm(T, 2), 1.0)
    resid = np.linalg.norm(T @ U - U * w, axis=0).max()
    if resid > 1e-12 * norm:
        raise NumericalInconsistency(f"Jacobi eigen-residual {resid:.3g} exceeds contract")
    return w, U


def compute_spectrum(params: SchemeParameters, polys: PolynomialSystem) -> SpectralData:
    d = params.d
    T = jacobi_matrix(params)
    w, U = _eig_jacobi(T)

    if d >= 1 and np.min(np.diff(w)) < GAP_TOL:
        raise NumericalInconsistency(f"eigenvalues closer than {GAP_TOL}: {w}")

    roots = bisection_roots(params)
    if np.max(np.abs(roots - w)) > ROOT_TOL:
        raise NumericalInconsistency(f"Jacobi spectrum {w} disagrees with Q_{d + 1} roots {roots}")

    gamma_vec = U[0] ** 2
    dQ = polys.Q[d + 1].derivative()
    q1 = polys.Q1[d]
    gamma_res = np.array([q1(float(xk)) / dQ(float(xk)) for xk in w])
    if np.max(np.abs(gamma_vec - gamma_res)) > WEIGHT_TOL:
        raise NumericalInconsistency(
            f"Gauss weights disagree: eigenvector {gamma_vec} vs residue {gamma_res}"
        )

    order = np.argsort(-w)
    x = w[order]
    gamma = gamma_vec[order]
    if abs(x[0] - params.array.kappa) > GAP_TOL:
        raise NumericalInconsistency(f"largest eigenvalue {x[0]} is not the degree {params.array.kappa}")
    return SpectralData(x=x, gamma=gamma, m=params.v * gamma)


def eval_distance_polys(params: SchemeParameters, x) -> np.ndarray:
    """``out[..., i] = P_i(x)`` via the float three-term recurrence."""
    arr = params.array
    d = arr.d
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (d + 1,))
    out[..., 0] = 1.0
    if d >= 1:
        out[..., 1] = x
    for i in range(1, d):
        out[..., i + 1] = ((x - arr.a_at(i)) * out[..., i] - arr.b_at(i - 1) * out[..., i - 1]) / arr.c_at(i + 1)
    return out


def eigenmatrices(spec: SpectralData, polys: PolynomialSystem, params: SchemeParameters) -> SpectralData:
    Pmat = eval_distance_polys(params, spec.x)
    v = params.v
    try:
        Qmat = np.linalg.solve(Pmat, v * np.eye(len(spec.x)))
    except np.linalg.LinAlgError as exc:
        raise NumericalInconsistency("eigenmatrix P is singular") from exc

    # duality: kappa_j Q[j, i] = m_i P[i, j]
    kappa = np.asarray(params.kappa, dtype=float)
    lhs = Qmat * kappa[:, None]
    rhs = (spec.m[:, None] * Pmat).T
    scale = np.maximum(1.0, np.abs(rhs))
    if np.max(np.abs(lhs - rhs) / scale) > DUALITY_TOL:
        raise NumericalInconsistency("dual eigenmatrix fails kappa_j Q_ji = m_i P_ij")
    return replace(spec, Pmat=Pmat, Qmat=Qmat)


def spectral_data(params: SchemeParameters, polys: PolynomialSystem) -> SpectralData:
    return eigenmatrices(compute_spectrum(params, polys), polys, params)


class PoleProximity(PSTError, ValueError):
    pass


def stieltjes_partial_fraction(spec: SpectralData, z: complex) -> complex:
    return complex(np.sum(spec.gamma / (z - spec.x)))


def stieltjes_continued_fraction(params: SchemeParameters, z: complex) -> complex:
    alpha, omega = params.alpha, params.omega
    acc = z - alpha[-1]
    for k in range(len(alpha) - 2, -1, -1):
        acc = z - alpha[k] - omega[k] / acc
    return 1.0 / acc


def stieltjes_rational(polys: PolynomialSystem, z: complex) -> complex:
    d = len(polys.Q1) - 1
    return polys.Q1[d](z) / polys.Q[d + 1](z)


def stieltjes(params: SchemeParameters, polys: PolynomialSystem, spec: SpectralData, z: complex) -> complex:
    z = complex(z)
    dist = np.min(np.abs(z - spec.x))
    if dist <= POLE_TOL:
        raise PoleProximity(f"z = {z} lies within {dist:.3g} of the spectrum")
    pf = stieltjes_partial_fraction(spec, z)
    cf = stieltjes_continued_fraction(params, z)
    if abs(pf - cf) > STIELTJES_REL_TOL * max(abs(pf), abs(cf)):
        raise NumericalInconsistency(f"Stieltjes paths disagree at z = {z}: {pf} vs {cf}")
    return pf
