"""Crossover, compatibility distance, speciation and reproduction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .genome import HIDDEN, Genome, InnovationRegistry, creates_cycle
from .mutation import MutationConfig, mutate


class EmptyPopulation(RuntimeError):
    pass


@dataclass(frozen=True)
class SpeciationConfig:
    c_excess_disjoint: float = 1.0
    c_weight: float = 0.5
    threshold: float = 3.0

    def __post_init__(self):
        if self.c_excess_disjoint < 0 or self.c_weight < 0:
            raise ValueError("speciation coefficients must be non-negative")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


@dataclass(frozen=True)
class ReproductionConfig:
    survival_fraction: float = 0.2
    elite_count: int = 2

    def __post_init__(self):
        if not 0.0 < self.survival_fraction <= 1.0:
            raise ValueError("survival_fraction must lie in (0, 1]")
        if self.elite_count < 0:
            raise ValueError("elite_count must be non-negative")


@dataclass
class Species:
    key: int
    representative: Genome
    members: list[int] = field(default_factory=list)


def performance(genome: Genome) -> float:
    return genome.fitness.performance if genome.fitness is not None else 0.0


def crossover(a: Genome, b: Genome, rng) -> Genome:
    """Align genes by innovation number and recombine.

    Matching genes come from a random parent. Disjoint and excess genes come
    from the fitter parent; on equal fitness each one is kept with
    probability 1/2. Enabled genes that would close a cycle are dropped.
    """
    fa, fb = performance(a), performance(b)
    if fb > fa:
        a, b = b, a
    tie = fa == fb

    def pick(ga, gb):
        if ga is not None and gb is not None:
            return ga if rng.random() < 0.5 else gb
        if tie:
            return (ga if ga is not None else gb) if rng.random() < 0.5 else None
        return ga

    child = Genome()
    for k in sorted(set(a.nodes) | set(b.nodes)):
        na, nb = a.nodes.get(k), b.nodes.get(k)
        role = (na or nb).role
        if role != HIDDEN:
            gene = na if nb is None else nb if na is None else (na if rng.random() < 0.5 else nb)
        else:
            gene = pick(na, nb)
        if gene is not None:
            child.nodes[k] = gene.copy()

    picked = []
    for inn in sorted(set(a.connections) | set(b.connections)):
        gene = pick(a.connections.get(inn), b.connections.get(inn))
        if gene is not None:
            picked.append(gene.copy())

    for gene in picked:
        for end in (gene.src, gene.dst):
            if end not in child.nodes:
                owner = a if end in a.nodes else b
                child.nodes[end] = owner.nodes[end].copy()

    edges: dict[int, set[int]] = {}
    for gene in picked:
        if gene.enabled:
            if creates_cycle(edges, gene.src, gene.dst):
                continue
            edges.setdefault(gene.src, set()).add(gene.dst)
        child.connections[gene.innovation] = gene
    return child


def compatibility_distance(a: Genome, b: Genome, cfg: SpeciationConfig) -> float:
    """Disjoint-gene fraction plus mean weight gap over matching genes."""
    union = set(a.connections) | set(b.connections)
    if not union:
        return 0.0
    matching = sorted(set(a.connections) & set(b.connections))
    disjoint = len(union) - len(matching)
    gap = 0.0
    if matching:
        gap = sum(abs(a.connections[k].weight - b.connections[k].weight) for k in matching) / len(matching)
    return cfg.c_excess_disjoint * disjoint / len(union) + cfg.c_weight * gap


def speciate(population: list[Genome], cfg: SpeciationConfig, previous: list[Species] = ()) -> list[Species]:
    """Partition the population, reusing last generation's representatives."""
    species = [Species(s.key, s.representative, []) for s in previous]
    next_key = max((s.key for s in species), default=-1) + 1
    for idx, genome in enumerate(population):
        for s in species:
            if compatibility_distance(genome, s.representative, cfg) < cfg.threshold:
                s.members.append(idx)
                break
        else:
            species.append(Species(next_key, genome, [idx]))
            next_key += 1
    out = []
    for s in species:
        if not s.members:
            continue
        # next representative: the member closest to the old one
        best = min(s.members, key=lambda i: (compatibility_distance(population[i], s.representative, cfg), i))
        out.append(Species(s.key, population[best], s.members))
    return out


def allocate_offspring(weights: list[float], total: int) -> list[int]:
    """Split ``total`` slots over species: one each, the rest in proportion
    to ``weights`` by largest remainder (ties to the earlier species)."""
    n = len(weights)
    if n == 0:
        return []
    if total < n:
        raise ValueError("fewer slots than species")
    if sum(weights) <= 0:
        weights = [1.0] * n
    spare = total - n
    wsum = sum(weights)
    raw = [spare * w / wsum for w in weights]
    quota = [1 + math.floor(r) for r in raw]
    left = total - sum(quota)
    order = sorted(range(n), key=lambda i: (-(raw[i] - math.floor(raw[i])), i))
    for i in order[:left]:
        quota[i] += 1
    return quota


def reproduce(
    population: list[Genome],
    species: list[Species],
    rankings: list[list[int]],
    pop_size: int,
    mutation_cfg: MutationConfig,
    repro_cfg: ReproductionConfig,
    rng,
    registry: InnovationRegistry,
) -> list[Genome]:
    """Build the next generation from ranked species.

    ``rankings[s]`` lists the population indices of species ``s`` best
    first. Each species keeps its elites unchanged and fills the rest of its
    quota with mutated crossovers of its top ``survival_fraction`` members.
    """
    live = [(s, r) for s, r in zip(species, rankings) if s.members]
    if not live:
        raise EmptyPopulation("no species with members")
    weights = [sum(performance(population[i]) for i in s.members) / len(s.members) for s, _ in live]
    quotas = allocate_offspring(weights, pop_size)
    offspring: list[Genome] = []
    for (s, ranking), quota in zip(live, quotas):
        size = len(ranking)
        elites = min(repro_cfg.elite_count, quota, size)
        for i in ranking[:elites]:
            offspring.append(population[i].copy(keep_fitness=True))
        n_parents = min(size, max(2, math.ceil(repro_cfg.survival_fraction * size)))
        parents = [population[i] for i in ranking[:n_parents]]
        for _ in range(quota - elites):
            if size == 1:
                child = parents[0].copy()
            else:
                child = crossover(rng.choice(parents), rng.choice(parents), rng)
            offspring.append(mutate(child, mutation_cfg, rng, registry))
    return offspring
