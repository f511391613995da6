"""Named networks: shipped catalog records with printed reference data, plus parametric cycle/cube generators."""
from __future__ import annotations

import ast
import json
import math
import operator
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import UnknownName
from .graphs import LabeledGraph, build_cycle, build_hypercube, ingest_edge_list
from .network import Network
from .polynomial import Poly
from .scheme import IntersectionArray, parse_intersection_array, validate_intersection_array
from .solver import check_solution

CATALOG_ENV = "PSTNET_CATALOG"
PRINTED_TOL = 1e-9

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_expr(text: str) -> float:
    """Evaluate a closed form such as ``-(5-3*sqrt(5))/60`` or ``-3*pi/4``."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id == "sqrt" and len(node.args) == 1):
            return math.sqrt(walk(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        tree = ast.parse(text.replace("\u2212", "-").replace("\u03c0", "pi"), mode="eval")
    except SyntaxError:
        raise ValueError(f"unsupported expression {text!r}") from None
    return float(walk(tree))


@dataclass(frozen=True)
class PrintedData:
    kappa: tuple[int, ...]
    alpha: tuple[int, ...]
    omega: tuple[int, ...]
    P: tuple[Poly, ...]  # P_2 .. P_d
    stieltjes_num: Poly
    stieltjes_den: Poly
    mu: tuple[tuple[float, Fraction], ...]
    mu_text: tuple[tuple[str, Fraction], ...]
    J_const: tuple[float, ...]  # coefficient of pi in J_m t0
    J_theta: tuple[float, ...]  # coefficient of theta in J_m t0
    J_text: tuple[str, ...]

    def J(self, theta: float = 0.0, t0: float = 1.0) -> np.ndarray:
        return (np.pi * np.asarray(self.J_const) + theta * np.asarray(self.J_theta)) / t0


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    title: str
    array: IntersectionArray
    edges: Optional[str] = None
    printed: Optional[PrintedData] = None
    flags: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def flag_ids(self) -> set[str]:
        return {f["id"] for f in self.flags}


def _printed_from_json(rec: dict) -> PrintedData:
    return PrintedData(
        kappa=tuple(rec["kappa"]),
        alpha=tuple(rec["alpha"]),
        omega=tuple(rec["omega"]),
        P=tuple(Poly.from_descending(p["num"], p["den"]) for p in rec["P"]),
        stieltjes_num=Poly.from_descending(rec["stieltjes"]["num"]),
        stieltjes_den=Poly.from_descending(rec["stieltjes"]["den"]),
        mu=tuple((eval_expr(x), Fraction(w, rec["mu"]["den"])) for x, w in rec["mu"]["atoms"]),
        mu_text=tuple((x, Fraction(w, rec["mu"]["den"])) for x, w in rec["mu"]["atoms"]),
        J_const=tuple(eval_expr(j["const"]) for j in rec["J"]),
        J_theta=tuple(eval_expr(j["theta"]) for j in rec["J"]),
        J_text=tuple(j["const"] for j in rec["J"]),
    )


def catalog_path() -> Path:
    override = os.environ.get(CATALOG_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("pstnet") / "data" / "catalog.json"))


def load_catalog(path: Optional[Path] = None) -> dict[str, CatalogEntry]:
    path = Path(path) if path else catalog_path()
    doc = json.loads(path.read_text())
    out: dict[str, CatalogEntry] = {}
    for rec in doc["entries"]:
        out[rec["name"]] = CatalogEntry(
            name=rec["name"],
            title=rec.get("title", rec["name"]),
            array=parse_intersection_array(rec["array"]),
            edges=rec.get("edges"),
            printed=_printed_from_json(rec["printed"]) if rec.get("printed") else None,
            flags=tuple(rec.get("flags", ())),
        )
    return out


def edge_file(name: str) -> Path:
    return Path(str(resources.files("pstnet") / "data" / "edges" / name))


def load_edges(entry: CatalogEntry, base_dir: Optional[Path] = None) -> Optional[LabeledGraph]:
    if not entry.edges:
        return None
    path = (base_dir / entry.edges) if base_dir else edge_file(entry.edges)
    return ingest_edge_list(path.read_text(), name=entry.name)


def cycle_array(m: int) -> IntersectionArray:
    if m < 2:
        raise ValueError("cycle:<m> needs m >= 2")
    return validate_intersection_array([2] + [1] * (m - 1), [1] * (m - 1) + [2])


def cube_array(d: int) -> IntersectionArray:
    if d < 1:
        raise ValueError("cube:<d> needs d >= 1")
    return validate_intersection_array([d - i for i in range(d)], [i for i in range(1, d + 1)])


GRAPH_SIZE_LIMIT = 4096


def resolve(name: str, catalog: Optional[dict[str, CatalogEntry]] = None, with_graph: bool = True) -> Network:
    """Build the network for a catalog name or a ``cycle:<m>`` / ``cube:<d>`` generator."""
    if name.startswith("cycle:") or name.startswith("cube:"):
        kind, _, arg = name.partition(":")
        try:
            k = int(arg)
        except ValueError:
            raise UnknownName(name) from None
        if kind == "cycle":
            arr = cycle_array(k)
            graph = build_cycle(k) if with_graph else None
        else:
            arr = cube_array(k)
            graph = build_hypercube(k) if with_graph and (1 << k) <= GRAPH_SIZE_LIMIT else None
        return Network.from_array(arr, name=name, graph=graph)
    catalog = catalog if catalog is not None else load_catalog()
    if name not in catalog:
        raise UnknownName(name)
    entry = catalog[name]
    graph = load_edges(entry) if with_graph else None
    return Network.from_array(entry.array, name=name, graph=graph)


# --- printed-vs-computed comparison ---------------------------------------------

@dataclass(frozen=True)
class Check:
    what: str
    ok: bool
    detail: str = ""


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def match_spectrum(printed: PrintedData, x: np.ndarray, gamma: np.ndarray, tol: float = PRINTED_TOL):
    """Pair printed atoms with computed eigenvalues by value; returns (ok, worst deviation)."""
    if len(printed.mu) != len(x):
        return False, math.inf
    used = set()
    worst = 0.0
    for px, pw in printed.mu:
        k = int(np.argmin(np.abs(x - px)))
        if k in used:
            return False, math.inf
        used.add(k)
        worst = max(worst, abs(x[k] - px), abs(gamma[k] - float(pw)))
    return worst <= tol, worst


def complete_missing_coupling(net: Network, J_partial, theta: float, t0: float, s):
    """Value of the missing last coupling J_d (mod pi/t0) that makes the printed subset consistent, or None."""
    spec = net.spectrum
    J = np.append(np.asarray(J_partial, dtype=float), 0.0)
    phase = -2.0 * t0 * (spec.Pmat @ J) - theta - np.pi * (np.asarray(s) < 0)
    # -2 t0 J_d s_k must cancel phase_k mod 2 pi; fix J_d from k = 0
    cand = phase[0] * s[0] / (2.0 * t0)
    cand = math.remainder(cand, math.pi / t0)
    J[-1] = cand
    if check_solution(spec, s, J, theta, t0).max <= PRINTED_TOL:
        return cand
    return None


def compare_printed(entry: CatalogEntry, net: Network, s=None, thetas=(0.0, 0.3)) -> list[Check]:
    pr = entry.printed
    if pr is None:
        return []
    checks = []
    p = net.params
    checks.append(Check("kappa", pr.kappa == p.kappa, f"printed {pr.kappa} computed {p.kappa}"))
    checks.append(Check("alpha", pr.alpha == p.alpha, f"printed {pr.alpha} computed {p.alpha}"))
    checks.append(Check("omega", pr.omega == p.omega, f"printed {pr.omega} computed {p.omega}"))
    for i, poly in enumerate(pr.P, start=2):
        comp = net.polys.P[i]
        checks.append(Check(f"P_{i}", poly == comp, f"printed {poly} computed {comp}"))
    d = net.d
    num_ok = pr.stieltjes_num == net.polys.Q1[d]
    den_ok = pr.stieltjes_den == net.polys.Q[d + 1]
    checks.append(Check("stieltjes", num_ok and den_ok,
                        f"printed ({pr.stieltjes_num})/({pr.stieltjes_den}) computed ({net.polys.Q1[d]})/({net.polys.Q[d + 1]})"))
    ok, worst = match_spectrum(pr, net.spectrum.x, net.spectrum.gamma)
    checks.append(Check("spectral distribution", ok, f"max deviation {worst:.3g}"))

    if s is not None:
        J_len = len(pr.J_const)
        for th in thetas:
            if J_len == d + 1:
                res = check_solution(net.spectrum, s, pr.J(th), th, 1.0).max
                checks.append(Check(f"printed J residual (theta={th:g})", res <= PRINTED_TOL, f"residual {res:.3g}"))
            else:
                res = check_solution(net.spectrum, s, np.append(pr.J(th), [0.0] * (d + 1 - J_len)), th, 1.0).max
                fill = complete_missing_coupling(net, pr.J(th), th, 1.0, s) if J_len == d else None
                extra = f"; completing with J_{d} = {_fmt(fill)} (mod pi/t0) satisfies all phase equations" if fill is not None else \
                    "; no value of the missing coupling satisfies the phase equations"
                checks.append(Check(f"printed J residual (theta={th:g})", False,
                                    f"only {J_len} of {d + 1} couplings printed; residual with zeros {res:.3g}{extra}"))
    return checks
