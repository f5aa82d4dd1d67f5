"""Time the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import random
import timeit

import numpy as np

from flowneat import kernels
from flowneat.environments import CartPoleParams, initial_state
from flowneat.graph_metrics import build_graph
from flowneat.neat import ConnectionGene, Genome, InnovationRegistry, MutationConfig, NodeGene, create_initial_genome, mutate
from flowneat.phenotype import compile_genome


def evolved_genome(n_in, n_out, steps, seed=0):
    rng = random.Random(seed)
    reg = InnovationRegistry()
    g = create_initial_genome(n_in, n_out, 12, rng, reg)
    for _ in range(steps):
        g = mutate(g, MutationConfig(), rng, reg)
    return g


def balancing_controller():
    """Pushes toward the pole's lean; lasts 1000 to 3000 steps per episode."""
    g = Genome()
    g.nodes = {k: NodeGene(k, "input") for k in range(4)}
    g.nodes[4] = NodeGene(4, "output")
    g.connections = {0: ConnectionGene(0, 2, 4, 30.0), 1: ConnectionGene(1, 3, 4, 10.0)}
    return g


def cases():
    iris_g = evolved_genome(4, 3, 50)
    graph = build_graph(iris_g)
    n, (indptr, indices) = graph.n, graph.csr()
    x = np.random.default_rng(0).uniform(0, 1, (114, 4))
    iris_p = compile_genome(iris_g)
    cart_p = compile_genome(balancing_controller())
    states = np.array([initial_state(s).as_tuple() for s in range(10)])
    params = CartPoleParams().as_tuple()
    return {
        "global efficiency": lambda k: k.global_efficiency(n, indptr, indices),
        "local efficiency": lambda k: k.local_efficiency(n, indptr, indices),
        "eigenvector power": lambda k: k.eigenvector_power(n, indptr, indices, 1e-6, 1000),
        "forward 114 rows": lambda k: k.forward_batch(*iris_p.kernel_args(), x),
        "cart-pole 10 eps": lambda k: k.cartpole_run(*cart_p.kernel_args(), states, params, 3000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py = kernels.load_backend("python")
    try:
        cy = kernels.load_backend("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e .` first")
    print(f"{'kernel':<20}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in cases().items():
        times = {}
        for label, mod in (("py", py), ("cy", cy)):
            number = 1 if label == "py" else 20
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat))
            times[label] = best / number * 1e3
        print(f"{name:<20}{times['py']:>12.3f}{times['cy']:>12.3f}{times['py'] / times['cy']:>9.1f}x")


if __name__ == "__main__":
    main()
