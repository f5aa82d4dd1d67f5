"""Network-science measures on the undirected view of a genome.

All measures treat the genome's enabled connections as an undirected simple
graph over every node gene (inputs, hidden, outputs). Disabled genes are
ignored, and ``a -> b`` together with ``b -> a`` collapse to one edge.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels

UNREACHABLE = -1


class EmptyGraph(ValueError):
    """Raised by measures that are undefined on a graph without nodes."""


@dataclass(frozen=True)
class NetGraph:
    node_ids: tuple
    neighbors: tuple  # neighbors[i]: sorted tuple of positions adjacent to position i

    @classmethod
    def from_edges(cls, node_ids, edges) -> NetGraph:
        node_ids = tuple(node_ids)
        pos = {k: i for i, k in enumerate(node_ids)}
        if len(pos) != len(node_ids):
            raise ValueError("node ids must be unique")
        adj = [set() for _ in node_ids]
        for a, b in edges:
            i, j = pos[a], pos[b]
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
        return cls(node_ids, tuple(tuple(sorted(s)) for s in adj))

    @property
    def n(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def edges(self) -> list[tuple]:
        return [
            (self.node_ids[i], self.node_ids[j]) for i, nb in enumerate(self.neighbors) for j in nb if i < j
        ]

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.neighbors]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nb) for nb in self.neighbors])
        indices = np.fromiter((j for nb in self.neighbors for j in nb), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for i, nb in enumerate(self.neighbors):
            a[i, list(nb)] = 1
        return a


@dataclass(frozen=True)
class DistanceMatrix:
    node_ids: tuple
    dist: np.ndarray  # hop counts, UNREACHABLE where no path exists

    def __call__(self, a, b) -> int:
        return int(self.dist[self.node_ids.index(a), self.node_ids.index(b)])


@dataclass(frozen=True)
class DegreeHistogram:
    classes: tuple  # ((degree, node count), ...) sorted by degree

    def as_dict(self) -> dict[int, int]:
        return dict(self.classes)


@dataclass(frozen=True)
class MetricConfig:
    ec_tol: float = 1e-6
    ec_max_iter: int = 1000

    def __post_init__(self):
        if self.ec_tol <= 0 or self.ec_max_iter < 1:
            raise ValueError("need ec_tol > 0 and ec_max_iter >= 1")


@dataclass(frozen=True)
class MetricsReport:
    global_efficiency: float
    local_efficiency: float
    degree_centrality: float
    eigenvector_centrality: float
    entropy: float
    connections_cost: int
    node_count: int
    ec_converged: bool = True

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def build_graph(genome) -> NetGraph:
    return NetGraph.from_edges(sorted(genome.nodes), ((c.src, c.dst) for c in genome.enabled_connections()))


def shortest_paths(g: NetGraph) -> DistanceMatrix:
    indptr, indices = g.csr()
    return DistanceMatrix(g.node_ids, np.asarray(kernels.bfs_distances(g.n, indptr, indices), dtype=np.int64).reshape(g.n, g.n))


def global_efficiency(g: NetGraph) -> float:
    """Mean inverse hop distance over ordered pairs; unreachable pairs add 0."""
    return kernels.global_efficiency(g.n, *g.csr())


def local_efficiency(g: NetGraph) -> float:
    """Mean over nodes of the efficiency of each neighbourhood subgraph.

    Nodes with fewer than two neighbours contribute 0.
    """
    return kernels.local_efficiency(g.n, *g.csr())


def degree_centrality(g: NetGraph) -> tuple[dict, float]:
    n = g.n
    if n == 0:
        return {}, 0.0
    scale = 1.0 / (n - 1) if n > 1 else 0.0
    per_node = {k: len(nb) * scale for k, nb in zip(g.node_ids, g.neighbors)}
    return per_node, sum(per_node.values()) / n


def eigenvector_centrality(g: NetGraph, tol: float = 1e-6, max_iter: int = 1000) -> tuple[dict, float, bool]:
    """Leading eigenvector of the adjacency matrix by power iteration.

    Iterates on ``A + I``, which has the same eigenvectors as ``A`` but keeps
    bipartite graphs (every freshly layered network is one) from
    oscillating. Returns ``(per_node, aggregate, converged)``; the aggregate
    is the mean entry, or 0 when the iteration did not converge. A graph
    with no edges has no defined leading eigenvector and scores all zeros.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("need tol > 0 and max_iter >= 1")
    if g.n == 0:
        raise EmptyGraph("eigenvector centrality of a graph with no nodes")
    if g.edge_count == 0:
        return {k: 0.0 for k in g.node_ids}, 0.0, False
    vec, converged, _ = kernels.eigenvector_power(g.n, *g.csr(), tol, max_iter)
    per_node = dict(zip(g.node_ids, vec))
    aggregate = sum(vec) / g.n if converged else 0.0
    return per_node, aggregate, converged


def degree_histogram(g: NetGraph) -> DegreeHistogram:
    return DegreeHistogram(tuple(sorted(Counter(g.degrees()).items())))


def connections_cost(genome) -> int:
    return genome.num_enabled


def degree_entropy(g: NetGraph) -> float:
    """Shannon entropy (nats) of the node-degree distribution."""
    hist = degree_histogram(g).classes
    total = sum(c for _, c in hist)
    h = 0.0
    for _, count in hist:
        p = count / total
        h -= p * math.log(p)
    return h + 0.0  # avoid -0.0 for single-class histograms


def compute_metrics(genome, cfg: MetricConfig = MetricConfig()) -> MetricsReport:
    g = build_graph(genome)
    cost = connections_cost(genome)
    if g.n == 0:
        return MetricsReport(0.0, 0.0, 0.0, 0.0, 0.0, cost, 0, False)
    _, dc = degree_centrality(g)
    _, ec, converged = eigenvector_centrality(g, cfg.ec_tol, cfg.ec_max_iter)
    return MetricsReport(
        global_efficiency=global_efficiency(g),
        local_efficiency=local_efficiency(g),
        degree_centrality=dc,
        eigenvector_centrality=ec,
        entropy=degree_entropy(g),
        connections_cost=cost,
        node_count=g.n,
        ec_converged=converged,
    )
