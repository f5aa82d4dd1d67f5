"""Compile genomes into flat feed-forward networks and run them."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .neat.genome import INPUT, Genome


class CyclicGenome(ValueError):
    pass


class InputArity(ValueError):
    pass


def sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@dataclass(frozen=True)
class Phenotype:
    """A network in evaluation order.

    Position ``k`` in every array refers to ``topo_order[k]``. Incoming edges
    of position ``k`` are ``in_src[in_ptr[k]:in_ptr[k+1]]`` (source positions)
    with weights ``in_w`` at the same offsets.
    """

    topo_order: tuple
    is_input: np.ndarray
    biases: np.ndarray
    in_ptr: np.ndarray
    in_src: np.ndarray
    in_w: np.ndarray
    input_pos: np.ndarray
    output_pos: np.ndarray

    @property
    def n_inputs(self) -> int:
        return len(self.input_pos)

    @property
    def n_outputs(self) -> int:
        return len(self.output_pos)

    @property
    def incoming(self) -> dict:
        """Node id -> list of (source node id, weight)."""
        out = {}
        for k, node in enumerate(self.topo_order):
            lo, hi = self.in_ptr[k], self.in_ptr[k + 1]
            out[node] = [(self.topo_order[s], float(w)) for s, w in zip(self.in_src[lo:hi], self.in_w[lo:hi])]
        return out

    def kernel_args(self) -> tuple:
        return (
            len(self.topo_order),
            self.is_input,
            self.input_pos,
            self.output_pos,
            self.biases,
            self.in_ptr,
            self.in_src,
            self.in_w,
        )


def compile_genome(genome: Genome) -> Phenotype:
    """Topologically order the enabled network (ties by ascending node id)."""
    enabled = genome.enabled_connections()
    indeg = {k: 0 for k in genome.nodes}
    succ: dict[int, list[int]] = {k: [] for k in genome.nodes}
    incoming: dict[int, list] = {k: [] for k in genome.nodes}
    for c in enabled:
        indeg[c.dst] += 1
        succ[c.src].append(c.dst)
        incoming[c.dst].append(c)
    heap = [k for k, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != len(genome.nodes):
        raise CyclicGenome("enabled connections contain a cycle")

    pos = {k: i for i, k in enumerate(order)}
    in_ptr = [0]
    in_src, in_w = [], []
    for k in order:
        for c in incoming[k]:
            in_src.append(pos[c.src])
            in_w.append(c.weight)
        in_ptr.append(len(in_src))
    return Phenotype(
        topo_order=tuple(order),
        is_input=np.array([genome.nodes[k].role == INPUT for k in order], dtype=np.int64),
        biases=np.array([genome.nodes[k].bias for k in order], dtype=np.float64),
        in_ptr=np.array(in_ptr, dtype=np.int64),
        in_src=np.array(in_src, dtype=np.int64),
        in_w=np.array(in_w, dtype=np.float64),
        input_pos=np.array([pos[k] for k in genome.input_ids], dtype=np.int64),
        output_pos=np.array([pos[k] for k in genome.output_ids], dtype=np.int64),
    )


def activate_batch(p: Phenotype, inputs) -> np.ndarray:
    """Outputs for every row of a 2-D input array."""
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != p.n_inputs:
        raise InputArity(f"expected rows of {p.n_inputs} inputs, got shape {x.shape}")
    if x.shape[0] == 0:
        return np.zeros((0, p.n_outputs))
    return np.asarray(kernels.forward_batch(*p.kernel_args(), x), dtype=np.float64).reshape(x.shape[0], p.n_outputs)


def activate(p: Phenotype, inputs) -> list[float]:
    inputs = list(inputs)
    if len(inputs) != p.n_inputs:
        raise InputArity(f"expected {p.n_inputs} inputs, got {len(inputs)}")
    return activate_batch(p, [inputs])[0].tolist()
