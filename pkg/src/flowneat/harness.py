"""Generation loop, multi-run batches, pressure sweeps and result files."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .data import SplitSpec, bundled_path, load_iris, load_wdbc, split
from .environments import CartPoleParams, CartPoleTask, ClassificationTask, evaluate
from .graph_metrics import MetricConfig
from .neat import (
    InnovationRegistry,
    MutationConfig,
    ReproductionConfig,
    SpeciationConfig,
    create_initial_genome,
    perturb_biases,
    perturb_weights,
    reproduce,
    speciate,
)
from .neat.genome import Genome
from .phenotype import compile_genome
from .selection import VARIANT_NAMES, MeasureVariant, SelectionConfig, objective_vector, rank_population

log = logging.getLogger(__name__)

TASKS = ("cartpole", "iris", "wdbc")
# (population, generations) per task: quick desk scale, then full scale
DESK_SCALE = {"cartpole": (50, 500), "iris": (10, 1000), "wdbc": (10, 1000)}
FULL_SCALE = {"cartpole": (150, 5000), "iris": (10, 1000), "wdbc": (10, 1000)}

TRACE_COLUMNS = (
    "generation",
    "best_train",
    "global_efficiency",
    "local_efficiency",
    "eigenvector_centrality",
    "entropy",
    "connections",
    "nodes",
)
SUMMARY_COLUMNS = ("measure", "pressure", "mean_train", "mean_test", "mean_connections", "mean_nodes", "runs")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    task: str = "iris"
    measure: str = "perf"
    pressure: float = 0.15
    population_size: int | None = None
    generations: int | None = None
    runs: int = 1
    base_seed: int = 0
    full_scale: bool = False
    hidden: int = 12
    data_path: str | None = None
    train_fraction: float = 0.75
    workers: int = 1
    tie_epsilon: float = 1e-9
    mutation: MutationConfig = field(default_factory=MutationConfig)
    speciation: SpeciationConfig = field(default_factory=SpeciationConfig)
    reproduction: ReproductionConfig = field(default_factory=ReproductionConfig)
    metrics: MetricConfig = field(default_factory=MetricConfig)
    cartpole: CartPoleParams = field(default_factory=CartPoleParams)
    output_dir: str | None = None

    def resolved(self) -> ExperimentConfig:
        """Copy with task-dependent defaults filled in, validated."""
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {', '.join(TASKS)}")
        try:
            MeasureVariant.parse(self.measure)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        pop, gens = (FULL_SCALE if self.full_scale else DESK_SCALE)[self.task]
        cfg = dataclasses.replace(
            self,
            population_size=self.population_size if self.population_size is not None else pop,
            generations=self.generations if self.generations is not None else gens,
        )
        if cfg.population_size < 2:
            raise ConfigError("population_size must be at least 2")
        if cfg.generations < 1:
            raise ConfigError("generations must be at least 1")
        if cfg.runs < 1:
            raise ConfigError("runs must be at least 1")
        if cfg.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not 0.0 <= cfg.pressure <= 1.0:
            raise ConfigError("pressure must lie in [0, 1]")
        if not 0.0 < cfg.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        return cfg

    @property
    def variant(self) -> MeasureVariant:
        return MeasureVariant.parse(self.measure)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("output_dir")
        d.pop("workers")  # never affects results
        return d

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        nested = {
            "mutation": MutationConfig,
            "speciation": SpeciationConfig,
            "reproduction": ReproductionConfig,
            "metrics": MetricConfig,
            "cartpole": CartPoleParams,
        }
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        try:
            for key, value in data.items():
                if key in nested and isinstance(value, dict):
                    if key == "mutation" and "weight_bounds" in value:
                        value = {**value, "weight_bounds": tuple(value["weight_bounds"])}
                    value = nested[key](**value)
                kwargs[key] = value
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class TraceRow:
    generation: int
    best_train: float
    global_efficiency: float
    local_efficiency: float
    eigenvector_centrality: float
    entropy: float
    connections: int
    nodes: int


@dataclass
class RunResult:
    run_index: int
    best: Genome
    train: float
    test: float
    connections: int
    nodes: int
    trace: list[TraceRow]

    def record(self) -> dict:
        return {
            "run": self.run_index,
            "train": self.train,
            "test": self.test,
            "connections": self.connections,
            "nodes": self.nodes,
        }


@dataclass
class BatchResult:
    config: ExperimentConfig
    runs: list[RunResult]

    def summary(self) -> dict:
        return summarize(self.config.measure, self.config.pressure, [r.record() for r in self.runs])


def summarize(measure: str, pressure: float, records: list[dict]) -> dict:
    # fsum is exactly rounded, so the means do not depend on run order
    n = len(records)
    return {
        "measure": measure,
        "pressure": pressure,
        "mean_train": math.fsum(r["train"] for r in records) / n,
        "mean_test": math.fsum(r["test"] for r in records) / n,
        "mean_connections": math.fsum(r["connections"] for r in records) / n,
        "mean_nodes": math.fsum(r["nodes"] for r in records) / n,
        "runs": n,
    }


_DATASETS: dict = {}


def _dataset(task: str, path):
    path = str(path or bundled_path(task))
    key = (task, path)
    if key not in _DATASETS:
        _DATASETS[key] = (load_iris if task == "iris" else load_wdbc)(path)
    return _DATASETS[key]


def build_task(cfg: ExperimentConfig, run_index: int):
    if cfg.task == "cartpole":
        return CartPoleTask(cfg.cartpole)
    data = _dataset(cfg.task, cfg.data_path)
    train, test = split(data, SplitSpec(cfg.train_fraction, cfg.base_seed + run_index, True))
    return ClassificationTask(cfg.task, train, test)


def evaluate_population(population: list[Genome], task, metric_cfg: MetricConfig, workers: int = 1) -> None:
    """Fill in missing fitness caches; results land in population order."""
    pending = [g for g in population if g.fitness is None]
    if workers > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda g: evaluate(g, task, metric_cfg), pending))
    else:
        results = [evaluate(g, task, metric_cfg) for g in pending]
    for g, r in zip(pending, results):
        g.fitness = r


def _trace_row(gen: int, g: Genome) -> TraceRow:
    m = g.fitness.metrics
    return TraceRow(
        gen,
        g.fitness.performance,
        m.global_efficiency,
        m.local_efficiency,
        m.eigenvector_centrality,
        m.entropy,
        m.connections_cost,
        m.node_count,
    )


def run_experiment(cfg: ExperimentConfig, run_index: int = 0) -> RunResult:
    """One seeded evolutionary run.

    Two generators are derived from ``base_seed + run_index``: one drives
    every genetic operator, the other only the per-species pressure draws.
    Keeping them apart means the pressure setting never shifts the genetic
    random stream, so a run at ``p = 0`` replays the performance-only run.
    """
    cfg = cfg.resolved()
    seed = cfg.base_seed + run_index
    rng = random.Random(2 * seed)
    sel_rng = random.Random(2 * seed + 1)
    task = build_task(cfg, run_index)
    variant = cfg.variant
    sel_cfg = SelectionConfig(cfg.pressure, cfg.tie_epsilon)

    registry = InnovationRegistry()
    template = create_initial_genome(task.n_inputs, task.n_outputs, cfg.hidden, rng, registry)
    population = []
    for _ in range(cfg.population_size):
        g = template.copy()
        perturb_biases(g, rng, cfg.mutation)
        perturb_weights(g, rng, cfg.mutation)
        population.append(g)

    species = []
    best = None
    trace = []
    for gen in range(cfg.generations):
        evaluate_population(population, task, cfg.metrics, cfg.workers)
        leader = max(population, key=lambda g: g.fitness.performance)  # first wins ties
        trace.append(_trace_row(gen, leader))
        if best is None or leader.fitness.performance > best.fitness.performance:
            best = leader.copy(keep_fitness=True)
        if gen == cfg.generations - 1:
            break
        species = speciate(population, cfg.speciation, species)
        rankings = []
        for s in species:
            objs = [objective_vector(population[i].fitness, variant) for i in s.members]
            rankings.append([s.members[k] for k in rank_population(objs, sel_cfg, sel_rng)])
        population = reproduce(
            population, species, rankings, cfg.population_size, cfg.mutation, cfg.reproduction, rng, registry
        )

    test = task.test_performance(compile_genome(best))
    log.info("run %d: train %.4f test %.4f connections %d", run_index, best.fitness.performance, test, best.num_enabled)
    return RunResult(run_index, best, best.fitness.performance, test, best.num_enabled, len(best.nodes), trace)


def run_batch(cfg: ExperimentConfig) -> BatchResult:
    cfg = cfg.resolved()
    return BatchResult(cfg, [run_experiment(cfg, k) for k in range(cfg.runs)])


def pressure_sweep(cfg: ExperimentConfig, p_values=(0.0, 0.15, 0.5)) -> list[BatchResult]:
    p_values = list(p_values)
    if not p_values:
        raise ConfigError("need at least one pressure value")
    return [run_batch(dataclasses.replace(cfg, pressure=float(p))) for p in p_values]


# ---------------------------------------------------------------- output files


def _row_key(row: dict) -> tuple:
    m = row["measure"]
    return (VARIANT_NAMES.index(m) if m in VARIANT_NAMES else len(VARIANT_NAMES), m, float(row["pressure"]))


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def batch_dirname(cfg: ExperimentConfig) -> str:
    return f"{cfg.measure}_p{cfg.pressure!r}"


def _write_batch_files(batch: BatchResult, d: Path) -> list[Path]:
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for r in batch.runs:
        p = d / f"trace_run{r.run_index}.csv"
        _write(p, _csv_text(TRACE_COLUMNS, [dataclasses.asdict(t) for t in r.trace]))
        written.append(p)
        p = d / f"best_run{r.run_index}.genome.json"
        _write(p, json.dumps({**r.best.to_dict(), "result": r.record()}, indent=2) + "\n")
        written.append(p)
    p = d / "config.json"
    _write(p, json.dumps(batch.config.to_dict(), indent=2) + "\n")
    written.append(p)
    return written


def write_outputs(batches, out_dir) -> list[Path]:
    """Write result files.

    A single batch goes straight into ``out_dir``; several batches (measures
    or pressures) each get a ``<measure>_p<pressure>`` subdirectory. Either
    way ``out_dir/summary.csv`` holds one row per batch.
    """
    if isinstance(batches, BatchResult):
        batches = [batches]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for b in batches:
        written += _write_batch_files(b, out if len(batches) == 1 else out / batch_dirname(b.config))
    p = out / "summary.csv"
    _write(p, _csv_text(SUMMARY_COLUMNS, sorted((b.summary() for b in batches), key=_row_key)))
    return [p] + written


def _batch_dirs(root: Path) -> list[Path]:
    if (root / "config.json").exists():
        return [root]
    dirs = sorted(p.parent for p in root.glob("*/config.json"))
    if not dirs:
        raise FileNotFoundError(f"no config.json under {root}")
    return dirs


def _run_files(d: Path, pattern: str) -> list[Path]:
    files = list(d.glob(pattern))
    return sorted(files, key=lambda p: int("".join(ch for ch in p.name.split(".")[0] if ch.isdigit())))


def report(out_dir) -> Path:
    """Recompute ``summary.csv`` from the per-run files under ``out_dir``."""
    root = Path(out_dir)
    rows = []
    for d in _batch_dirs(root):
        cfg = json.loads((d / "config.json").read_text(encoding="utf-8"))
        records = [json.loads(p.read_text(encoding="utf-8"))["result"] for p in _run_files(d, "best_run*.genome.json")]
        if not records:
            raise FileNotFoundError(f"no best_run*.genome.json in {d}")
        rows.append(summarize(cfg["measure"], cfg["pressure"], records))
    p = root / "summary.csv"
    _write(p, _csv_text(SUMMARY_COLUMNS, sorted(rows, key=_row_key)))
    return p


def concat_traces(out_dir, dest=None) -> Path:
    """Stack every ``trace_run<k>.csv`` into one file with run/batch columns."""
    root = Path(out_dir)
    columns = ("measure", "pressure", "run") + TRACE_COLUMNS
    rows = []
    for d in _batch_dirs(root):
        cfg = json.loads((d / "config.json").read_text(encoding="utf-8"))
        for p in _run_files(d, "trace_run*.csv"):
            run = int(p.stem.removeprefix("trace_run"))
            with open(p, newline="", encoding="utf-8") as fh:
                for rec in csv.DictReader(fh):
                    rows.append({"measure": cfg["measure"], "pressure": cfg["pressure"], "run": run, **rec})
    dest = Path(dest) if dest else root / "traces.csv"
    _write(dest, _csv_text(columns, rows))
    return dest
