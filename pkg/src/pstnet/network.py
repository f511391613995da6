from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import GraphError
from .graphs import DistancePartition, LabeledGraph, StratumBasis, distance_partition, stratum_vectors
from .scheme import (
    IntersectionArray,
    PolynomialSystem,
    SchemeParameters,
    build_polynomials,
    derive_parameters,
)
from .spectra import SpectralData, spectral_data


@dataclass(frozen=True, eq=False)
class Network:
    """Everything derived from one intersection array, plus an optional explicit graph."""

    name: str
    params: SchemeParameters
    polys: PolynomialSystem
    spectrum: SpectralData
    graph: Optional[LabeledGraph] = None

    @classmethod
    def from_array(cls, arr: IntersectionArray, name: str = "", graph: Optional[LabeledGraph] = None) -> "Network":
        params = derive_parameters(arr)
        polys = build_polynomials(params)
        net = cls(name=name or arr.compact(), params=params, polys=polys,
                  spectrum=spectral_data(params, polys), graph=graph)
        if graph is not None and net.partition.sizes != params.kappa:
            raise GraphError(
                f"graph strata {net.partition.sizes} do not match array valencies {params.kappa}"
            )
        return net

    @property
    def array(self) -> IntersectionArray:
        return self.params.array

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def v(self) -> int:
        return self.params.v

    @cached_property
    def partition(self) -> Optional[DistancePartition]:
        return None if self.graph is None else distance_partition(self.graph, 0)

    @cached_property
    def basis(self) -> Optional[StratumBasis]:
        return None if self.partition is None else stratum_vectors(self.partition)
