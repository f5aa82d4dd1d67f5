"""Genome encoding: node genes, connection genes, and historical markings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

INPUT = "input"
HIDDEN = "hidden"
OUTPUT = "output"
ROLES = (INPUT, HIDDEN, OUTPUT)


class InvalidGenome(ValueError):
    """A genome broke one of the structural invariants."""


@dataclass(slots=True)
class NodeGene:
    id: int
    role: str
    bias: float = 0.0

    def copy(self) -> NodeGene:
        return NodeGene(self.id, self.role, self.bias)


@dataclass(slots=True)
class ConnectionGene:
    innovation: int
    src: int
    dst: int
    weight: float
    enabled: bool = True

    def copy(self) -> ConnectionGene:
        return ConnectionGene(self.innovation, self.src, self.dst, self.weight, self.enabled)


class InnovationRegistry:
    """Hands out innovation numbers and node ids.

    A connection between the same ordered pair of nodes always receives the
    same innovation number, and splitting the same connection gene always
    proposes the same new node id, so identical structural mutations line up
    across the population. The registry lives for a whole run.
    """

    def __init__(self, next_innovation: int = 0, next_node: int = 0):
        self._next_innovation = next_innovation
        self._next_node = next_node
        self._pairs: dict[tuple[int, int], int] = {}
        self._splits: dict[int, int] = {}

    def connection(self, src: int, dst: int) -> int:
        key = (src, dst)
        if key not in self._pairs:
            self._pairs[key] = self._next_innovation
            self._next_innovation += 1
        return self._pairs[key]

    def split(self, innovation: int) -> int:
        if innovation not in self._splits:
            self._splits[innovation] = self.new_node_id()
        return self._splits[innovation]

    def new_node_id(self) -> int:
        self._next_node += 1
        return self._next_node - 1

    def reserve_nodes(self, upto: int) -> None:
        self._next_node = max(self._next_node, upto)


@dataclass
class Genome:
    nodes: dict[int, NodeGene] = field(default_factory=dict)
    connections: dict[int, ConnectionGene] = field(default_factory=dict)
    # cached evaluation; ignored by equality and serialization
    fitness: Any = field(default=None, compare=False, repr=False)

    @property
    def input_ids(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.role == INPUT)

    @property
    def output_ids(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.role == OUTPUT)

    @property
    def hidden_ids(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.role == HIDDEN)

    def enabled_connections(self) -> list[ConnectionGene]:
        return [self.connections[k] for k in sorted(self.connections) if self.connections[k].enabled]

    @property
    def num_enabled(self) -> int:
        return sum(1 for c in self.connections.values() if c.enabled)

    def copy(self, keep_fitness: bool = False) -> Genome:
        return Genome(
            nodes={k: n.copy() for k, n in self.nodes.items()},
            connections={k: c.copy() for k, c in self.connections.items()},
            fitness=self.fitness if keep_fitness else None,
        )

    def structure(self) -> tuple:
        """Hashable summary of topology (ids and enabled flags, no weights)."""
        return (
            tuple(sorted((k, n.role) for k, n in self.nodes.items())),
            tuple(sorted((c.innovation, c.src, c.dst, c.enabled) for c in self.connections.values())),
        )

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n.id, "role": n.role, "bias": n.bias}
                for n in sorted(self.nodes.values(), key=lambda n: n.id)
            ],
            "connections": [
                {"innovation": c.innovation, "from": c.src, "to": c.dst, "weight": c.weight, "enabled": c.enabled}
                for c in sorted(self.connections.values(), key=lambda c: c.innovation)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Genome:
        nodes = {}
        for n in data["nodes"]:
            if n["role"] not in ROLES:
                raise InvalidGenome(f"unknown node role {n['role']!r}")
            nodes[int(n["id"])] = NodeGene(int(n["id"]), n["role"], float(n["bias"]))
        conns = {}
        for c in data["connections"]:
            gene = ConnectionGene(int(c["innovation"]), int(c["from"]), int(c["to"]), float(c["weight"]), bool(c["enabled"]))
            conns[gene.innovation] = gene
        return cls(nodes, conns)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> Genome:
        return cls.from_dict(json.loads(text))


def creates_cycle(edges: dict[int, set[int]], src: int, dst: int) -> bool:
    """Would adding ``src -> dst`` close a directed cycle in ``edges``?"""
    if src == dst:
        return True
    stack, seen = [dst], {dst}
    while stack:
        u = stack.pop()
        for v in edges.get(u, ()):
            if v == src:
                return True
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def validate(genome: Genome, n_inputs: int | None = None, n_outputs: int | None = None) -> None:
    """Raise InvalidGenome unless every structural invariant holds."""
    ins, outs = genome.input_ids, genome.output_ids
    if n_inputs is not None and len(ins) != n_inputs:
        raise InvalidGenome(f"expected {n_inputs} input nodes, found {len(ins)}")
    if n_outputs is not None and len(outs) != n_outputs:
        raise InvalidGenome(f"expected {n_outputs} output nodes, found {len(outs)}")
    for key, node in genome.nodes.items():
        if key != node.id:
            raise InvalidGenome(f"node keyed {key} carries id {node.id}")
    pairs = set()
    indeg = {k: 0 for k in genome.nodes}
    succ: dict[int, list[int]] = {k: [] for k in genome.nodes}
    for key, c in genome.connections.items():
        if key != c.innovation:
            raise InvalidGenome(f"connection keyed {key} carries innovation {c.innovation}")
        if c.src not in genome.nodes or c.dst not in genome.nodes:
            raise InvalidGenome(f"connection {c.innovation} references a missing node")
        if genome.nodes[c.dst].role == INPUT:
            raise InvalidGenome(f"connection {c.innovation} feeds input node {c.dst}")
        if genome.nodes[c.src].role == OUTPUT:
            raise InvalidGenome(f"connection {c.innovation} leaves output node {c.src}")
        if not c.enabled:
            continue
        if (c.src, c.dst) in pairs:
            raise InvalidGenome(f"duplicate enabled connection {c.src}->{c.dst}")
        pairs.add((c.src, c.dst))
        succ[c.src].append(c.dst)
        indeg[c.dst] += 1
    # Kahn's algorithm: every node must be removable
    ready = [k for k, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        u = ready.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if seen != len(genome.nodes):
        raise InvalidGenome("enabled connections contain a cycle")


def create_initial_genome(n_inputs: int, n_outputs: int, hidden: int, rng, registry: InnovationRegistry | None = None) -> Genome:
    """Fully layered starting network.

    Every input feeds every hidden unit and every hidden unit feeds every
    output; with ``hidden == 0`` the inputs are wired straight to the outputs.
    Weights are uniform in [-1, 1] and biases start at 0.
    """
    if n_inputs < 1 or n_outputs < 1 or hidden < 0:
        raise ValueError("need n_inputs >= 1, n_outputs >= 1, hidden >= 0")
    if registry is None:
        registry = InnovationRegistry()
    registry.reserve_nodes(n_inputs + n_outputs)
    g = Genome()
    ins = list(range(n_inputs))
    outs = list(range(n_inputs, n_inputs + n_outputs))
    for k in ins:
        g.nodes[k] = NodeGene(k, INPUT)
    for k in outs:
        g.nodes[k] = NodeGene(k, OUTPUT)
    hid = []
    for j in range(hidden):
        # hidden units of the template behave like splits of a virtual gene
        k = registry.split(-(j + 1))
        g.nodes[k] = NodeGene(k, HIDDEN)
        hid.append(k)
    layers = [ins, hid, outs] if hid else [ins, outs]
    for lower, upper in zip(layers, layers[1:]):
        for s in lower:
            for d in upper:
                inn = registry.connection(s, d)
                g.connections[inn] = ConnectionGene(inn, s, d, rng.uniform(-1.0, 1.0))
    return g
