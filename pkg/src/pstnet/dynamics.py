"""Spin-network Hamiltonians and single-excitation time evolution.

Four routes to the stratum amplitudes ``f_i(t) = <phi_i| exp(-iHt) |phi_0>``:

* ``quadrature``: closed form over the spectral distribution,
* ``quotient``: exponential of the (d+1)x(d+1) Hamiltonian on the stratum space,
* ``full``: exponential of the n x n Hamiltonian built from distance matrices,
* ``oracle``: n x n block read off a sparse spin-operator engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, NumericalInconsistency, OracleLimitExceeded
from .graphs import DistancePartition, LabeledGraph, StratumBasis
from .network import Network
from .scheme import SchemeParameters
from .spectra import SpectralData, eval_distance_polys, jacobi_matrix

PST_THRESHOLD = 1e-9
ENGINE_TOL = 1e-8
DEFAULT_ORACLE_LIMIT = 14


@dataclass(frozen=True)
class SingleExcitationHamiltonian:
    matrix: np.ndarray
    constant: float
    form: str  # "full" or "quotient"


@dataclass(frozen=True)
class AmplitudeVector:
    f: np.ndarray
    t: float

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.f) ** 2))


def energy_shift(J: Sequence[float], kappa: Sequence[int], n_sites: int) -> float:
    """Global constant ``(N-4)/2 * sum_m J_m kappa_m``."""
    return (n_sites - 4) / 2.0 * float(np.dot(J, kappa))


def _check_len(J, d: int) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.shape != (d + 1,):
        raise DimensionMismatch(f"expected {d + 1} couplings, got {J.shape}")
    return J


def distance_poly_matrices(params: SchemeParameters, M: np.ndarray) -> list[np.ndarray]:
    """``[P_0(M), ..., P_d(M)]`` by the three-term recurrence."""
    arr = params.array
    eye = np.eye(len(M))
    out = [eye, M.copy()]
    for i in range(1, arr.d):
        out.append(((M - arr.a_at(i) * eye) @ out[i] - arr.b_at(i - 1) * out[i - 1]) / arr.c_at(i + 1))
    return out[: arr.d + 1]


def quotient_hamiltonian(params: SchemeParameters, J) -> SingleExcitationHamiltonian:
    J = _check_len(J, params.d)
    T = jacobi_matrix(params)
    c = energy_shift(J, params.kappa, params.v)
    H = 2.0 * sum(j * Pm for j, Pm in zip(J, distance_poly_matrices(params, T)))
    H = H + c * np.eye(len(T))
    return SingleExcitationHamiltonian(matrix=0.5 * (H + H.T), constant=c, form="quotient")


def full_hamiltonian(g: LabeledGraph, dp: DistancePartition, J) -> SingleExcitationHamiltonian:
    J = _check_len(J, dp.d)
    if dp.graph is not g:
        raise DimensionMismatch("partition was computed for a different graph")
    c = energy_shift(J, dp.sizes, g.n)
    H = 2.0 * sum(j * A for j, A in zip(J, dp.Amats)) + c * np.eye(g.n)
    return SingleExcitationHamiltonian(matrix=H, constant=c, form="full")


# --- spin oracle -----------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    hamiltonian: SingleExcitationHamiltonian
    coefficients: np.ndarray  # (d+1, n, n) integers; block = sum_m J_m coefficients[m] / 2
    states_checked: int
    conserved: bool


class SpinOperator:
    """``H_G = 1/2 sum_m J_m sum_{ordered (i,j) in R_m} sigma_i . sigma_j`` acting on basis kets.

    A basis ket is an int whose bit i is 1 when spin i points up.  Each pair
    term acts by the exchange rule: aligned spins give +1, anti-aligned give
    -1 on the ket plus 2 on the swapped ket.  Ordered pairs with i != j come
    in twos, so unordered pairs carry weight J_m; a self-pair carries J_0/2
    and acts as the identity.  Coefficients are stored doubled so everything
    stays integral.
    """

    def __init__(self, distances: np.ndarray, d: int):
        self.n = len(distances)
        self.d = d
        iu, ju = np.triu_indices(self.n, k=1)
        self.pairs = [(int(i), int(j), int(distances[i, j])) for i, j in zip(iu, ju)]

    def apply(self, ket: int) -> dict[int, list[int]]:
        """Return ``{ket': [2 * coefficient of J_m for m = 0..d]}``."""
        out: dict[int, list[int]] = {}

        def bump(k: int, m: int, val: int) -> None:
            out.setdefault(k, [0] * (self.d + 1))[m] += val

        bump(ket, 0, self.n)  # n self-pairs, weight 1/2 each, doubled
        for i, j, m in self.pairs:
            bi = (ket >> i) & 1
            bj = (ket >> j) & 1
            if bi == bj:
                bump(ket, m, 2)
            else:
                bump(ket, m, -2)
                bump(ket ^ (1 << i) ^ (1 << j), m, 4)
        return out


def _magnetization(ket: int, n: int) -> int:
    up = bin(ket).count("1")
    return up - (n - up)


def spin_oracle(g: LabeledGraph, dp: DistancePartition, J, limit: int = DEFAULT_ORACLE_LIMIT,
                n_checks: int = 16, seed: int = 0) -> OracleResult:
    if g.n > limit:
        raise OracleLimitExceeded(f"{g.n} vertices exceeds spin-oracle limit {limit}")
    J = _check_len(J, dp.d)
    n = g.n
    op = SpinOperator(g.distances, dp.d)
    full = (1 << n) - 1

    coeffs = np.zeros((dp.d + 1, n, n), dtype=np.int64)
    for l in range(n):
        ket = full ^ (1 << l)  # all up except site l
        for out_ket, cm in op.apply(ket).items():
            flipped = full ^ out_ket
            if flipped & (flipped - 1) or flipped == 0:
                raise NumericalInconsistency("single-excitation ket leaked out of its sector")
            lp = flipped.bit_length() - 1
            coeffs[:, lp, l] += cm

    # [sigma^z_tot, H_G] ket = sum_t (M(t) - M(ket)) c_t |t>, checked exactly
    rng = np.random.default_rng(seed)
    conserved = True
    for _ in range(n_checks):
        ket = int(rng.integers(0, 1 << n))
        mk = _magnetization(ket, n)
        for out_ket, cm in op.apply(ket).items():
            delta = _magnetization(out_ket, n) - mk
            if any(delta * c for c in cm):
                conserved = False

    block = np.tensordot(J, coeffs.astype(float), axes=1) / 2.0
    H = SingleExcitationHamiltonian(matrix=block, constant=energy_shift(J, dp.sizes, n), form="full")
    return OracleResult(hamiltonian=H, coefficients=coeffs, states_checked=n_checks, conserved=conserved)


# --- evolution -------------------------------------------------------------------

def evolve(H: SingleExcitationHamiltonian, t: float, basis: Optional[StratumBasis] = None,
           source: Optional[int] = None) -> AmplitudeVector:
    """Amplitudes after time ``t`` starting from the source vertex (stratum 0).

    For a full-graph Hamiltonian with ``basis`` given, the evolved state is
    projected onto the stratum vectors.
    """
    if source is None:
        source = basis.base if (basis is not None and H.form == "full") else 0
    c = H.constant
    w, U = np.linalg.eigh(H.matrix - c * np.eye(len(H.matrix)))
    psi = U @ (np.exp(-1j * w * t) * U[source, :])
    psi = psi * np.exp(-1j * c * t)
    if H.form == "full" and basis is not None:
        psi = basis.project(psi)
    return AmplitudeVector(f=psi, t=t)


def quadrature_amplitudes(spec: SpectralData, params: SchemeParameters, J, t: float) -> np.ndarray:
    """All stratum amplitudes from the spectral distribution."""
    J = _check_len(J, params.d)
    Pm = spec.Pmat if spec.Pmat is not None else eval_distance_polys(params, spec.x)
    c = energy_shift(J, params.kappa, params.v)
    eta = np.exp(-2j * t * (Pm @ J))
    f = (spec.gamma * eta) @ Pm / np.sqrt(np.asarray(params.kappa, dtype=float))
    return f * np.exp(-1j * c * t)


def amplitude_quadrature(spec: SpectralData, params: SchemeParameters, J, i: int, t: float) -> complex:
    return complex(quadrature_amplitudes(spec, params, J, t)[i])


# --- reports ---------------------------------------------------------------------

@dataclass(frozen=True)
class FidelityReport:
    name: str
    t0: float
    theta: float
    amplitudes: dict[str, np.ndarray]
    constant: float
    max_deviation: float
    engines_skipped: dict[str, str] = field(default_factory=dict)

    @property
    def abs_fd(self) -> dict[str, float]:
        return {k: float(abs(f[-1])) for k, f in self.amplitudes.items()}

    @property
    def phase(self) -> float:
        return float(np.angle(self.amplitudes["quadrature"][-1]))

    @property
    def expected_phase(self) -> float:
        """theta - c t0, wrapped to (-pi, pi]."""
        p = math.remainder(self.theta - self.constant * self.t0, 2 * math.pi)
        return math.pi if p == -math.pi else p

    @property
    def certified(self) -> bool:
        return all(v >= 1.0 - PST_THRESHOLD for v in self.abs_fd.values())

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "t0": self.t0,
            "theta": self.theta,
            "abs_f_d": self.abs_fd,
            "phase": self.phase,
            "expected_phase": self.expected_phase,
            "max_deviation": self.max_deviation,
            "engines_skipped": dict(self.engines_skipped),
            "certified": self.certified,
        }


def engine_amplitudes(net: Network, J, t: float, oracle_limit: int = DEFAULT_ORACLE_LIMIT):
    """Stratum amplitudes at time ``t`` from every applicable engine."""
    amps = {
        "quadrature": quadrature_amplitudes(net.spectrum, net.params, J, t),
        "quotient": evolve(quotient_hamiltonian(net.params, J), t).f,
    }
    skipped = {}
    if net.graph is None:
        skipped["full"] = skipped["oracle"] = "no edge list"
    else:
        amps["full"] = evolve(full_hamiltonian(net.graph, net.partition, J), t, basis=net.basis).f
        if net.graph.n <= oracle_limit:
            orc = spin_oracle(net.graph, net.partition, J, limit=oracle_limit)
            if not orc.conserved:
                raise NumericalInconsistency("spin operator does not conserve total sigma^z")
            amps["oracle"] = evolve(orc.hamiltonian, t, basis=net.basis).f
        else:
            skipped["oracle"] = f"{net.graph.n} vertices > limit {oracle_limit}"
    return amps, skipped


def max_pairwise_deviation(amps: dict[str, np.ndarray]) -> float:
    vals = list(amps.values())
    return max((float(np.max(np.abs(a - b))) for i, a in enumerate(vals) for b in vals[i + 1:]), default=0.0)


def fidelity_report(net: Network, J, theta: float = 0.0, t0: float = 1.0,
                    oracle_limit: int = DEFAULT_ORACLE_LIMIT, tol: float = ENGINE_TOL) -> FidelityReport:
    J = _check_len(J, net.d)
    amps, skipped = engine_amplitudes(net, J, t0, oracle_limit)
    dev = max_pairwise_deviation(amps)
    if dev > tol:
        raise NumericalInconsistency(f"engines disagree by {dev:.3g} (> {tol})")
    return FidelityReport(
        name=net.name, t0=t0, theta=theta, amplitudes=amps,
        constant=energy_shift(J, net.params.kappa, net.v),
        max_deviation=dev, engines_skipped=skipped,
    )


def sweep(net: Network, J, t_max: float, samples: int) -> list[tuple[float, float, float, float]]:
    """Rows ``(t, |f_d|, arg f_d, |f_0|)`` at ``samples`` uniform times in ``[0, t_max]``."""
    if samples < 1:
        raise ValueError("need at least one sample")
    J = _check_len(J, net.d)
    H = quotient_hamiltonian(net.params, J)
    times = np.linspace(0.0, t_max, samples) if samples > 1 else np.array([0.0])
    rows = []
    for t in times:
        f = evolve(H, float(t)).f
        rows.append((float(t), float(abs(f[-1])), float(np.angle(f[-1])), float(abs(f[0]))))
    return rows
