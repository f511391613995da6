"""Phase equations for antipodal perfect state transfer and their solution.

With ``s_k = P_d(x_k) = +-1`` the transfer condition reduces to one phase
equation per eigenvalue::

    -2 t0 sum_m J_m P_m(x_k) = theta + pi [s_k = -1] + 2 pi l_k

which is linear in ``u_m = 2 t0 J_m`` with matrix ``Pmat``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModulusMismatch, NotAntipodal
from .scheme import SchemeParameters
from .spectra import SpectralData

MODULUS_TOL = 1e-8
ZERO_COUPLING_TOL = 1e-9
RESIDUAL_TOL = 1e-10
SNAP_TOL = 1e-12  # |u_m| below this is round-off from the solve


@dataclass(frozen=True)
class CouplingSolution:
    theta: float
    t0: float
    J: tuple[float, ...]
    l: tuple[int, ...]
    s: tuple[int, ...]
    residual: float

    @property
    def u(self) -> np.ndarray:
        return 2.0 * self.t0 * np.asarray(self.J)

    @property
    def zero_count(self) -> int:
        return sum(abs(j) * self.t0 < ZERO_COUPLING_TOL for j in self.J)

    @property
    def coupling_range(self) -> int:
        """Largest stratum index m >= 1 carrying a nonzero coupling (0 if none)."""
        nz = [m for m in range(1, len(self.J)) if abs(self.J[m]) * self.t0 >= ZERO_COUPLING_TOL]
        return max(nz, default=0)

    def rank_key(self):
        return (
            -self.zero_count,
            self.coupling_range,
            max(abs(j) for j in self.J) * self.t0,
            sum(abs(v) for v in self.l),
            self.l,
        )

    def to_record(self, name: str = "", v: int | None = None) -> dict:
        return {
            "name": name,
            "d": len(self.J) - 1,
            "v": v,
            "theta": self.theta,
            "t0": self.t0,
            "l": list(self.l),
            "s": list(self.s),
            "J": list(self.J),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ResidualReport:
    max: float
    per_k: tuple[float, ...]


def modulus_table(spec: SpectralData) -> np.ndarray:
    """``|P_d(x_k)|`` for every eigenvalue."""
    return np.abs(spec.Pmat[:, -1])


def transfer_column(spec: SpectralData) -> np.ndarray:
    """Last column of ``inverse(transpose(Pmat))``; equals ``gamma_k P_d(x_k) / kappa_d``."""
    e_d = np.zeros(len(spec.x))
    e_d[-1] = 1.0
    return np.linalg.solve(spec.Pmat.T, e_d)


def feasibility(spec: SpectralData, params: SchemeParameters) -> tuple[int, ...]:
    """Sign pattern ``s_k = sign P_d(x_k)``; raises if transfer is impossible."""
    if params.kappa[-1] != 1:
        raise NotAntipodal(params.kappa[-1])
    pd = spec.Pmat[:, -1]
    mod = np.abs(pd)
    for k, val in enumerate(mod):
        if abs(val - 1.0) > MODULUS_TOL:
            raise ModulusMismatch(k, float(val), table=mod)
    return tuple(int(np.sign(p)) for p in pd)


def _odd(s) -> np.ndarray:
    return (np.asarray(s) < 0).astype(float)


def _solve_u(spec: SpectralData, s, theta: float, l: np.ndarray) -> np.ndarray:
    """Solve for ``u`` given branch rows ``l`` of shape (..., d+1).

    The constant column of Pmat is all ones, so the uniform part of the
    right-hand side (theta and l_0) lands on u_0 exactly and is added after
    the solve.
    """
    l = np.asarray(l, dtype=float)
    l0 = l[..., :1]
    rhs = -(np.pi * _odd(s) + 2.0 * np.pi * (l - l0))
    flat = rhs.reshape(-1, rhs.shape[-1])
    u = np.linalg.solve(spec.Pmat, flat.T).T.reshape(rhs.shape)
    u[..., 0] += -(theta + 2.0 * np.pi * l0[..., 0])
    u[np.abs(u) < SNAP_TOL] = 0.0
    return u


def _wrap(phase: np.ndarray) -> np.ndarray:
    """Representative in (-pi, pi]."""
    w = np.mod(phase + np.pi, 2.0 * np.pi) - np.pi
    return np.where(w == -np.pi, np.pi, w)


def _phase_errors(spec: SpectralData, s, J: np.ndarray, theta: float, t0: float) -> np.ndarray:
    phase = -2.0 * t0 * (J @ spec.Pmat.T) - theta - np.pi * _odd(s)
    return np.abs(_wrap(phase))


def check_solution(spec: SpectralData, s, J, theta: float, t0: float) -> ResidualReport:
    errs = _phase_errors(spec, s, np.asarray(J, dtype=float), theta, t0)
    return ResidualReport(max=float(errs.max()), per_k=tuple(float(e) for e in errs))


def solve_couplings(spec: SpectralData, s, theta: float = 0.0, t0: float = 1.0, l=None) -> CouplingSolution:
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    n = len(spec.x)
    l = tuple(int(v) for v in (l if l is not None else (0,) * n))
    if len(l) != n:
        raise ValueError(f"need {n} branch integers, got {len(l)}")
    u = _solve_u(spec, s, theta, np.asarray(l))
    J = u / (2.0 * t0)
    res = check_solution(spec, s, J, theta, t0)
    return CouplingSolution(theta=theta, t0=t0, J=tuple(float(j) for j in J), l=l, s=tuple(s), residual=res.max)


def search_branches(spec: SpectralData, s, theta: float = 0.0, t0: float = 1.0, depth: int = 1) -> list[CouplingSolution]:
    """Enumerate branches ``l`` in ``[-depth, depth]^(d+1)`` with ``l_0 = 0`` and rank them.

    Ranking: more vanishing couplings first, then shorter coupling range,
    then smaller ``max |J_m| t0``, then smaller ``sum |l_k|``, then
    lexicographic ``l``.
    """
    if depth < 0:
        raise ValueError("branch depth must be nonnegative")
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    n = len(spec.x)
    rng = range(-depth, depth + 1)
    ls = np.array([(0,) + tail for tail in itertools.product(rng, repeat=n - 1)], dtype=int)
    U = _solve_u(spec, s, theta, ls)
    Js = U / (2.0 * t0)
    errs = _phase_errors(spec, s, Js, theta, t0)
    s = tuple(s)
    sols = [
        CouplingSolution(
            theta=theta,
            t0=t0,
            J=tuple(float(j) for j in Js[r]),
            l=tuple(int(v) for v in ls[r]),
            s=s,
            residual=float(errs[r].max()),
        )
        for r in range(len(ls))
    ]
    sols.sort(key=CouplingSolution.rank_key)
    return sols


def same_coupling_class(J1, J2, t0: float, tol: float = 1e-9) -> bool:
    """True when two coupling vectors agree up to the branch shift ``J_0 -> J_0 + k pi / t0``."""
    a = np.asarray(J1, dtype=float)
    b = np.asarray(J2, dtype=float)
    if a.shape != b.shape or np.max(np.abs(a[1:] - b[1:]), initial=0.0) > tol:
        return False
    shift = (a[0] - b[0]) * t0 / math.pi
    return abs(shift - round(shift)) * math.pi / t0 <= tol
