"""The six mutation operators and their composition."""

from __future__ import annotations

from dataclasses import dataclass

from .genome import HIDDEN, INPUT, OUTPUT, ConnectionGene, Genome, InnovationRegistry, NodeGene


@dataclass(frozen=True)
class MutationConfig:
    p_add_conn: float = 0.2
    p_del_conn: float = 0.2
    p_add_node: float = 0.2
    p_del_node: float = 0.2
    p_weight: float = 0.7
    p_bias: float = 0.7
    step: float = 0.5
    weight_bounds: tuple[float, float] = (-30.0, 30.0)

    def __post_init__(self):
        for name in ("p_add_conn", "p_del_conn", "p_add_node", "p_del_node", "p_weight", "p_bias"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        lo, hi = self.weight_bounds
        if not lo < hi:
            raise ValueError("weight_bounds must satisfy lo < hi")
        if self.step <= 0:
            raise ValueError("step must be positive")


def _successors(genome: Genome) -> dict[int, set[int]]:
    edges: dict[int, set[int]] = {}
    for c in genome.connections.values():
        if c.enabled:
            edges.setdefault(c.src, set()).add(c.dst)
    return edges


def _reachability(genome: Genome, edges: dict[int, set[int]]) -> dict[int, int]:
    """Bitset of nodes reachable from each node over enabled connections."""
    bit = {k: 1 << i for i, k in enumerate(sorted(genome.nodes))}
    reach: dict[int, int] = {}

    def visit(u):
        stack = [(u, iter(sorted(edges.get(u, ()))))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                acc = 0
                for v in edges.get(node, ()):
                    acc |= reach[v] | bit[v]
                reach[node] = acc
                stack.pop()
            elif nxt not in reach:
                stack.append((nxt, iter(sorted(edges.get(nxt, ())))))

    for k in sorted(genome.nodes):
        if k not in reach:
            visit(k)
    return reach


def add_connection(genome: Genome, rng, registry: InnovationRegistry) -> bool:
    """Wire a random unconnected ordered pair without closing a cycle.

    A pair that still carries a disabled gene is re-enabled with a fresh
    weight instead of getting a second gene. Returns False when no pair
    qualifies.
    """
    edges = _successors(genome)
    reach = _reachability(genome, edges)
    bit = {k: 1 << i for i, k in enumerate(sorted(genome.nodes))}
    sources = [k for k in sorted(genome.nodes) if genome.nodes[k].role != OUTPUT]
    targets = [k for k in sorted(genome.nodes) if genome.nodes[k].role != INPUT]
    candidates = [
        (s, d)
        for s in sources
        for d in targets
        if s != d and d not in edges.get(s, ()) and not reach[d] & bit[s]
    ]
    if not candidates:
        return False
    src, dst = rng.choice(candidates)
    inn = registry.connection(src, dst)
    weight = rng.uniform(-1.0, 1.0)
    gene = genome.connections.get(inn)
    if gene is not None:
        gene.weight = weight
        gene.enabled = True
    else:
        genome.connections[inn] = ConnectionGene(inn, src, dst, weight)
    return True


def delete_connection(genome: Genome, rng) -> bool:
    enabled = genome.enabled_connections()
    if not enabled:
        return False
    del genome.connections[rng.choice(enabled).innovation]
    return True


def add_node(genome: Genome, rng, registry: InnovationRegistry) -> bool:
    """Split a random enabled connection ``a -> b`` into ``a -> h -> b``.

    The old gene is disabled; ``a -> h`` gets weight 1.0 and ``h -> b``
    inherits the old weight, so the split starts close to neutral.
    """
    enabled = genome.enabled_connections()
    if not enabled:
        return False
    old = rng.choice(enabled)
    node_id = registry.split(old.innovation)
    if node_id in genome.nodes:
        node_id = registry.new_node_id()
    old.enabled = False
    genome.nodes[node_id] = NodeGene(node_id, HIDDEN, 0.0)
    inn_in = registry.connection(old.src, node_id)
    inn_out = registry.connection(node_id, old.dst)
    genome.connections[inn_in] = ConnectionGene(inn_in, old.src, node_id, 1.0)
    genome.connections[inn_out] = ConnectionGene(inn_out, node_id, old.dst, old.weight)
    return True


def delete_node(genome: Genome, rng) -> bool:
    hidden = genome.hidden_ids
    if not hidden:
        return False
    victim = rng.choice(hidden)
    del genome.nodes[victim]
    for inn in [k for k, c in genome.connections.items() if victim in (c.src, c.dst)]:
        del genome.connections[inn]
    return True


def _nudge(value: float, rng, cfg: MutationConfig) -> float:
    value += cfg.step if rng.random() < 0.5 else -cfg.step
    lo, hi = cfg.weight_bounds
    return min(hi, max(lo, value))


def perturb_biases(genome: Genome, rng, cfg: MutationConfig) -> None:
    for k in sorted(genome.nodes):
        node = genome.nodes[k]
        if node.role != INPUT and rng.random() < cfg.p_bias:
            node.bias = _nudge(node.bias, rng, cfg)


def perturb_weights(genome: Genome, rng, cfg: MutationConfig) -> None:
    for c in genome.enabled_connections():
        if rng.random() < cfg.p_weight:
            c.weight = _nudge(c.weight, rng, cfg)


def mutate(genome: Genome, cfg: MutationConfig, rng, registry: InnovationRegistry) -> Genome:
    """Return a mutated copy; each operator fires independently."""
    g = genome.copy()
    if rng.random() < cfg.p_add_conn:
        add_connection(g, rng, registry)
    if rng.random() < cfg.p_del_conn:
        delete_connection(g, rng)
    if rng.random() < cfg.p_add_node:
        add_node(g, rng, registry)
    if rng.random() < cfg.p_del_node:
        delete_node(g, rng)
    perturb_biases(g, rng, cfg)
    perturb_weights(g, rng, cfg)
    return g
