"""Explicit graphs, distance partitions, distance-regularity detection, stratum bases."""
from __future__ import annotations

import itertools
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import Disconnected, EdgeListParseError, GraphError, NotDistanceRegular
from .scheme import IntersectionArray, validate_intersection_array


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    name: Optional[str] = None

    def __post_init__(self):
        if self.n < 1 or len(self.adjacency) != self.n:
            raise GraphError("adjacency must list neighbours for every vertex")
        for u, nbrs in enumerate(self.adjacency):
            if u in nbrs:
                raise GraphError(f"self-loop at vertex {u}")
            for w in nbrs:
                if not 0 <= w < self.n:
                    raise GraphError(f"vertex {u} has out-of-range neighbour {w}")
                if u not in self.adjacency[w]:
                    raise GraphError(f"edge {u}-{w} is not symmetric")
        if min(bfs_distances(self, 0)) < 0:
            raise Disconnected("graph is disconnected" + (f": {self.name}" if self.name else ""))

    @classmethod
    def from_edges(cls, n: int, edges, name: Optional[str] = None) -> "LabeledGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, w in edges:
            if u == w:
                raise GraphError(f"self-loop at vertex {u}")
            nbrs[u].add(w)
            nbrs[w].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), name)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in range(self.n) for w in self.adjacency[u] if u < w]

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, nbrs in enumerate(self.adjacency):
            A[u, list(nbrs)] = 1.0
        return A

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs shortest-path distances."""
        return np.array([bfs_distances(self, u) for u in range(self.n)], dtype=int)

    def to_edge_text(self) -> str:
        head = f"# {self.name}\n" if self.name else ""
        return head + "".join(f"{u} {w}\n" for u, w in self.edges())


def bfs_distances(g: LabeledGraph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


# --- builders ---------------------------------------------------------------

def build_cycle(m: int) -> LabeledGraph:
    """The even cycle with 2m vertices."""
    if m < 2:
        raise ValueError("cycle builder needs m >= 2")
    n = 2 * m
    return LabeledGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle:{m}")


def build_hypercube(d: int) -> LabeledGraph:
    """Binary Hamming graph H(d,2); vertex label = integer value of the bitstring."""
    if d < 1:
        raise ValueError("hypercube builder needs d >= 1")
    n = 1 << d
    edges = [(u, u ^ (1 << k)) for u in range(n) for k in range(d) if u < u ^ (1 << k)]
    return LabeledGraph.from_edges(n, edges, name=f"cube:{d}")


def build_path(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"path:{n}")


def build_petersen() -> LabeledGraph:
    """Kneser graph K(5,2): 2-subsets of a 5-set, adjacent when disjoint."""
    pairs = list(itertools.combinations(range(5), 2))
    edges = [(i, j) for i, j in itertools.combinations(range(len(pairs)), 2)
             if not set(pairs[i]) & set(pairs[j])]
    return LabeledGraph.from_edges(len(pairs), edges, name="petersen")


def build_desargues() -> LabeledGraph:
    """Bipartite Kneser graph: 2-subsets vs 3-subsets of a 5-set, adjacent on inclusion."""
    small = list(itertools.combinations(range(5), 2))
    big = list(itertools.combinations(range(5), 3))
    edges = [(i, len(small) + j) for i, p in enumerate(small) for j, q in enumerate(big) if set(p) <= set(q)]
    return LabeledGraph.from_edges(len(small) + len(big), edges, name="desargues")


def build_lcf(n: int, jumps: Sequence[int], repeats: int, name: Optional[str] = None) -> LabeledGraph:
    """Cubic Hamiltonian graph from LCF notation ``[jumps]^repeats``."""
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    seq = list(jumps) * repeats
    for i, jmp in enumerate(seq):
        edges.add(tuple(sorted((i, (i + jmp) % n))))
    return LabeledGraph.from_edges(n, sorted(edges), name=name)


def build_dodecahedron() -> LabeledGraph:
    return build_lcf(20, [10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2, name="dodecahedron")


def build_icosahedron() -> LabeledGraph:
    """Apex 0, upper pentagon 1-5, lower pentagon 6-10, apex 11."""
    edges = []
    for i in range(5):
        up, up_next = 1 + i, 1 + (i + 1) % 5
        lo, lo_next = 6 + i, 6 + (i + 1) % 5
        edges += [(0, up), (up, up_next), (lo, lo_next), (lo, 11), (up, lo), (up, lo_next)]
    return LabeledGraph.from_edges(12, edges, name="icosahedron")


# --- edge-list ingestion -----------------------------------------------------

def ingest_edge_list(text: str, name: Optional[str] = None) -> LabeledGraph:
    """Parse ``u v`` lines (0-based labels, ``#`` comments) into a connected simple graph."""
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, raw, "expected two vertex labels")
        try:
            u, w = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, raw, "labels must be integers") from None
        if u < 0 or w < 0:
            raise EdgeListParseError(lineno, raw, "labels must be nonnegative")
        if u == w:
            raise EdgeListParseError(lineno, raw, "self-loop")
        key = (min(u, w), max(u, w))
        if key in seen:
            warnings.warn(f"line {lineno}: duplicate edge {key[0]}-{key[1]} ignored", stacklevel=2)
            continue
        seen.add(key)
        edges.append(key)
    if not edges:
        raise GraphError("edge list is empty")
    n = max(max(e) for e in edges) + 1
    return LabeledGraph.from_edges(n, edges, name=name)


# --- distance partition --------------------------------------------------------

@dataclass(frozen=True)
class DistancePartition:
    graph: LabeledGraph = field(repr=False)
    base: int
    dist: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return len(self.classes) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def Amats(self) -> list[np.ndarray]:
        """Distance matrices ``A_i`` (entry 1 where the graph distance is i)."""
        D = self.graph.distances
        return [(D == i).astype(float) for i in range(self.d + 1)]


def distance_partition(g: LabeledGraph, base: int = 0) -> DistancePartition:
    if not 0 <= base < g.n:
        raise GraphError(f"base vertex {base} out of range")
    dist = bfs_distances(g, base)
    d = max(dist)
    classes = tuple(tuple(v for v in range(g.n) if dist[v] == i) for i in range(d + 1))
    return DistancePartition(graph=g, base=base, dist=tuple(dist), classes=classes)


def _local_counts(g: LabeledGraph, dist: list[int], w: int) -> tuple[int, int, int]:
    i = dist[w]
    c = a = b = 0
    for z in g.adjacency[w]:
        dz = dist[z]
        if dz == i - 1:
            c += 1
        elif dz == i:
            a += 1
        else:
            b += 1
    return c, a, b


def check_distance_regular(g: LabeledGraph) -> IntersectionArray:
    """Exhaustive check over every base vertex; returns the intersection array."""
    reference: Optional[list] = None
    for base in range(g.n):
        dist = bfs_distances(g, base)
        level = list(reference) if reference is not None else [None] * (max(dist) + 1)
        # lower levels first, so an eccentricity mismatch surfaces as a count mismatch
        for w in sorted(range(g.n), key=dist.__getitem__):
            i = dist[w]
            obs = _local_counts(g, dist, w)
            if i >= len(level):
                raise NotDistanceRegular(base, w, i, obs, None)
            if level[i] is None:
                level[i] = obs
            elif obs != level[i]:
                raise NotDistanceRegular(base, w, i, obs, level[i])
        reference = level
    assert reference is not None
    if len(reference) < 2:
        raise GraphError("a single vertex has no intersection array")
    b = [reference[i][2] for i in range(len(reference) - 1)]
    c = [reference[i][0] for i in range(1, len(reference))]
    return validate_intersection_array(b, c)


# --- stratum basis -------------------------------------------------------------

@dataclass(frozen=True)
class StratumBasis:
    phi: np.ndarray  # shape (d+1, n); row i is the unit vector of stratum i
    base: int

    def project(self, vec: np.ndarray) -> np.ndarray:
        return self.phi @ vec

    def compress(self, M: np.ndarray) -> np.ndarray:
        return self.phi @ M @ self.phi.T


def stratum_vectors(dp: DistancePartition) -> StratumBasis:
    n = dp.graph.n
    phi = np.zeros((dp.d + 1, n))
    for i, cls in enumerate(dp.classes):
        phi[i, list(cls)] = 1.0 / np.sqrt(len(cls))
    return StratumBasis(phi=phi, base=dp.base)
