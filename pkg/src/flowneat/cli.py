"""Command-line entry point.

    flowneat run   --task iris --measure ec_cost --pressure 0.15 --runs 10 --out results/
    flowneat sweep --task iris --measure ec_cost --p 0,0.15,0.5 --out sweep/
    flowneat report results/
    flowneat trace results/

Exit status: 0 on success, 1 on a configuration error, 2 on an I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .data import ParseError
from .harness import ConfigError, ExperimentConfig, concat_traces, pressure_sweep, report, run_batch, write_outputs

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2

# CLI flag -> ExperimentConfig field
_FLAGS = {
    "task": "task",
    "pressure": "pressure",
    "pop": "population_size",
    "gens": "generations",
    "runs": "runs",
    "seed": "base_seed",
    "data": "data_path",
    "out": "output_dir",
    "workers": "workers",
    "hidden": "hidden",
    "train_fraction": "train_fraction",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    p.add_argument("--task", choices=("cartpole", "iris", "wdbc"))
    p.add_argument("--measure", help="variant name, or a comma-separated list (default: perf)")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--gens", type=int, help="number of generations")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int, help="base seed; run k uses seed + k")
    p.add_argument("--data", help="dataset file (defaults to the bundled copy)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="threads for genome evaluation")
    p.add_argument("--hidden", type=int, help="hidden units in the initial network")
    p.add_argument("--train-fraction", type=float, dest="train_fraction")
    p.add_argument("--full-scale", action="store_true", help="cart-pole at population 150 for 5000 generations")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowneat", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one or more measures at one pressure")
    _common(run)
    run.add_argument("--pressure", type=float, help="probability of ranking on secondary objectives")

    sweep = sub.add_parser("sweep", help="repeat a batch across pressure values")
    _common(sweep)
    sweep.add_argument("--p", default="0,0.15,0.5", help="comma-separated pressure values")

    rep = sub.add_parser("report", help="rebuild summary.csv from per-run files")
    rep.add_argument("dir")

    tr = sub.add_parser("trace", help="concatenate per-run traces into traces.csv")
    tr.add_argument("dir")
    tr.add_argument("-o", "--output", help="destination file (default: <dir>/traces.csv)")
    return parser


def _load_config(args) -> tuple[ExperimentConfig, list[str]]:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = ExperimentConfig.from_dict(data)
    overrides = {field: getattr(args, flag) for flag, field in _FLAGS.items() if getattr(args, flag, None) is not None}
    if args.full_scale:
        overrides["full_scale"] = True
    cfg = dataclasses.replace(cfg, **overrides)
    measures = args.measure.split(",") if args.measure else [cfg.measure]
    if not cfg.output_dir:
        raise ConfigError("an output directory is required (--out or output_dir)")
    return cfg, [m.strip() for m in measures]


def _experiments(args) -> int:
    cfg, measures = _load_config(args)
    if args.command == "sweep":
        try:
            pressures = [float(p) for p in args.p.split(",") if p.strip()]
        except ValueError:
            raise ConfigError(f"bad pressure list {args.p!r}") from None
        if not pressures:
            raise ConfigError("need at least one pressure value")
    else:
        pressures = None
    configs = [dataclasses.replace(cfg, measure=m).resolved() for m in measures]
    if pressures is not None:
        for p in pressures:
            dataclasses.replace(configs[0], pressure=p).resolved()
    batches = []
    for c in configs:
        batches += pressure_sweep(c, pressures) if pressures is not None else [run_batch(c)]
    for path in write_outputs(batches, cfg.output_dir):
        logging.getLogger(__name__).debug("wrote %s", path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(message)s")
    try:
        if args.command in ("run", "sweep"):
            return _experiments(args)
        if args.command == "report":
            print(report(args.dir))
        else:
            print(concat_traces(args.dir, args.output))
        return EXIT_OK
    except (ConfigError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ParseError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
