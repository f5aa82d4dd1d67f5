"""Objective vectors and stochastic lexicographic ranking.

Performance always comes first. On each ranking event a single uniform
draw ``r`` decides whether the secondary objectives take part: with
``r < p`` candidates are sorted lexicographically over all objectives,
otherwise by performance alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

MAXIMIZE = 1
MINIMIZE = -1

METRICS = {
    "le": "local_efficiency",
    "ge": "global_efficiency",
    "dc": "degree_centrality",
    "ec": "eigenvector_centrality",
    "ent": "entropy",
}
_LABELS = {"le": "LE", "ge": "GE", "dc": "DC", "ec": "EC", "ent": "Entropy"}


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MeasureVariant:
    kind: str  # "perf", "cost" (metric then cost) or "ratio" (metric / cost)
    metric: str | None = None

    def __post_init__(self):
        if self.kind == "perf":
            if self.metric is not None:
                raise ValueError("performance-only variant takes no metric")
        elif self.kind in ("cost", "ratio"):
            if self.metric not in METRICS:
                raise ValueError(f"unknown metric {self.metric!r}")
        else:
            raise ValueError(f"unknown variant kind {self.kind!r}")

    @property
    def name(self) -> str:
        return "perf" if self.kind == "perf" else f"{self.metric}_{self.kind}"

    @property
    def label(self) -> str:
        """Row label in the results tables, e.g. ``EC+Cost-``."""
        if self.kind == "perf":
            return "Performance Only"
        m = _LABELS[self.metric]
        return f"{m}+Cost-" if self.kind == "cost" else f"({m}/Cost)+"

    @classmethod
    def parse(cls, name: str) -> MeasureVariant:
        if name == "perf":
            return cls("perf")
        metric, _, kind = name.rpartition("_")
        try:
            return cls(kind, metric)
        except ValueError:
            raise ValueError(f"unknown measure {name!r}; expected one of {', '.join(VARIANT_NAMES)}") from None


VARIANT_NAMES = ("perf",) + tuple(f"{m}_{k}" for m in METRICS for k in ("cost", "ratio"))
VARIANTS = tuple(MeasureVariant.parse(n) for n in VARIANT_NAMES)


@dataclass(frozen=True)
class ObjectiveVector:
    slots: tuple  # ((value, direction), ...); slot 0 is performance, maximized

    @property
    def values(self) -> tuple:
        return tuple(v for v, _ in self.slots)

    @property
    def shape(self) -> tuple:
        return tuple(d for _, d in self.slots)

    def __len__(self):
        return len(self.slots)


@dataclass(frozen=True)
class SelectionConfig:
    p: float = 0.15
    tie_epsilon: float = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.tie_epsilon <= 0:
            raise ValueError("tie_epsilon must be positive")


def objective_vector(result, variant: MeasureVariant) -> ObjectiveVector:
    perf = (result.performance, MAXIMIZE)
    if variant.kind == "perf":
        return ObjectiveVector((perf,))
    metrics = result.metrics
    value = getattr(metrics, METRICS[variant.metric])
    cost = metrics.connections_cost
    if variant.kind == "cost":
        return ObjectiveVector((perf, (value, MAXIMIZE), (cost, MINIMIZE)))
    return ObjectiveVector((perf, (value / cost if cost else 0.0, MAXIMIZE)))


def _compare_slot(a, b, direction, eps) -> int:
    """-1 when ``a`` is better, 1 when worse, 0 when tied within ``eps``."""
    if abs(a - b) <= eps:
        return 0
    better = a > b if direction == MAXIMIZE else a < b
    return -1 if better else 1


def _check_shapes(vectors) -> None:
    shapes = {v.shape for v in vectors}
    if len(shapes) > 1:
        raise ShapeMismatch(f"objective vectors of differing shapes: {sorted(shapes)}")


def dominates(a: ObjectiveVector, b: ObjectiveVector, eps: float = 1e-9) -> bool:
    """Pareto dominance: no slot worse and at least one strictly better."""
    _check_shapes((a, b))
    strict = False
    for (va, d), (vb, _) in zip(a.slots, b.slots):
        c = _compare_slot(va, vb, d, eps)
        if c > 0:
            return False
        strict = strict or c < 0
    return strict


def lexicographic_order(objs, n_slots: int, eps: float) -> list[int]:
    def cmp(i, j):
        for s in range(n_slots):
            va, d = objs[i].slots[s]
            c = _compare_slot(va, objs[j].slots[s][0], d, eps)
            if c:
                return c
        return 0

    # sorted() is stable, so original positions break remaining ties
    return sorted(range(len(objs)), key=cmp_to_key(cmp))


def rank_population(objs: list[ObjectiveVector], cfg: SelectionConfig, rng) -> list[int]:
    """Indices of ``objs`` best first; consumes exactly one draw from ``rng``."""
    _check_shapes(objs)
    r = rng.random()
    n_slots = len(objs[0]) if (objs and r < cfg.p) else 1
    return lexicographic_order(objs, n_slots, cfg.tie_epsilon)
