"""Evaluation tasks: cart-pole balancing and tabular classification."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graph_metrics import MetricConfig, MetricsReport, compute_metrics
from .phenotype import Phenotype, activate_batch, compile_genome

LEFT = 0
RIGHT = 1


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CartPoleParams:
    gravity: float = 26.0
    cart_mass: float = 1.0
    pole_mass: float = 0.1
    half_pole_length: float = 0.5
    force_magnitude: float = 10.0
    dt: float = 0.02
    angle_limit: float = 12 * 2 * math.pi / 360
    position_limit: float = 2.4
    episode_seconds: float = 60.0

    def __post_init__(self):
        if any(v <= 0 for v in self.__dict__.values()):
            raise ValueError("cart-pole parameters must be positive")
        steps = self.episode_seconds / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError("dt must divide episode_seconds")

    @property
    def max_steps(self) -> int:
        return round(self.episode_seconds / self.dt)

    def as_tuple(self) -> tuple:
        """Parameter order expected by the kernels."""
        return (
            self.gravity,
            self.cart_mass,
            self.pole_mass,
            self.half_pole_length,
            self.force_magnitude,
            self.dt,
            self.angle_limit,
            self.position_limit,
        )


@dataclass(frozen=True)
class CartPoleState:
    x: float = 0.0
    x_dot: float = 0.0
    theta: float = 0.0
    theta_dot: float = 0.0

    def as_tuple(self) -> tuple:
        return (self.x, self.x_dot, self.theta, self.theta_dot)


def cartpole_dynamics(s: CartPoleState, force: float, params: CartPoleParams) -> CartPoleState:
    """One semi-implicit Euler step under an arbitrary horizontal force."""
    return CartPoleState(*kernels.cartpole_step(*s.as_tuple(), force, params.as_tuple()))


def is_terminal(s: CartPoleState, params: CartPoleParams) -> bool:
    return abs(s.x) > params.position_limit or abs(s.theta) > params.angle_limit


def cartpole_step(s: CartPoleState, action: int, params: CartPoleParams = CartPoleParams()):
    """Push right (``RIGHT``) or left (``LEFT``) for one time step.

    Returns ``(next_state, terminal)``.
    """
    force = params.force_magnitude if action == RIGHT else -params.force_magnitude
    nxt = cartpole_dynamics(s, force, params)
    return nxt, is_terminal(nxt, params)


def initial_state(seed: int) -> CartPoleState:
    rng = random.Random(seed)
    return CartPoleState(*(rng.uniform(-0.05, 0.05) for _ in range(4)))


def cartpole_episodes(p: Phenotype, params: CartPoleParams, seeds) -> list[int]:
    """Steps survived from each seed's start state."""
    if p.n_inputs != 4 or p.n_outputs != 1:
        raise ArityMismatch(f"cart-pole needs a 4-in/1-out network, got {p.n_inputs}/{p.n_outputs}")
    states = np.array([initial_state(s).as_tuple() for s in seeds], dtype=np.float64).reshape(-1, 4)
    return list(kernels.cartpole_run(*p.kernel_args(), states, params.as_tuple(), params.max_steps))


def cartpole_fitness(p: Phenotype, params: CartPoleParams, seeds) -> float:
    """Mean fraction of the episode survived over ``seeds``."""
    seeds = list(seeds)
    survived = cartpole_episodes(p, params, seeds)
    return sum(s / params.max_steps for s in survived) / len(seeds)


def predict(p: Phenotype, features: np.ndarray, n_classes: int) -> np.ndarray:
    if p.n_inputs != features.shape[1]:
        raise ArityMismatch(f"network takes {p.n_inputs} inputs, data has {features.shape[1]} features")
    out = activate_batch(p, features)
    if n_classes == 2 and p.n_outputs == 1:
        return (out[:, 0] >= 0.5).astype(np.int64)
    if p.n_outputs != n_classes:
        raise ArityMismatch(f"network has {p.n_outputs} outputs for {n_classes} classes")
    return np.argmax(out, axis=1)  # first maximum wins ties


def classify_fitness(p: Phenotype, split) -> float:
    """Fraction of samples in ``split`` classified correctly."""
    if len(split) == 0:
        return 0.0
    correct = int(np.count_nonzero(predict(p, split.features, split.n_classes) == split.labels))
    return correct / len(split)


@dataclass(frozen=True)
class EvalResult:
    performance: float
    metrics: MetricsReport
    node_count: int
    connection_count: int


@dataclass(frozen=True)
class ClassificationTask:
    name: str
    train: object
    test: object

    @property
    def n_inputs(self) -> int:
        return self.train.n_features

    @property
    def n_outputs(self) -> int:
        return 1 if self.train.n_classes == 2 else self.train.n_classes

    def performance(self, p: Phenotype) -> float:
        return classify_fitness(p, self.train)

    def test_performance(self, p: Phenotype) -> float:
        return classify_fitness(p, self.test)


@dataclass(frozen=True)
class CartPoleTask:
    params: CartPoleParams = CartPoleParams()
    train_seeds: tuple = tuple(range(10))
    test_seeds: tuple = tuple(range(1000, 1020))
    name: str = field(default="cartpole")

    n_inputs = 4
    n_outputs = 1

    def performance(self, p: Phenotype) -> float:
        return cartpole_fitness(p, self.params, self.train_seeds)

    def test_performance(self, p: Phenotype) -> float:
        return cartpole_fitness(p, self.params, self.test_seeds)


def evaluate(genome, task, metric_cfg: MetricConfig = MetricConfig()) -> EvalResult:
    """Training-set performance plus structure metrics; never mutates ``genome``."""
    p = compile_genome(genome)
    perf = task.performance(p)
    metrics = compute_metrics(genome, metric_cfg)
    return EvalResult(perf, metrics, metrics.node_count, metrics.connections_cost)
