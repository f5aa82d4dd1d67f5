"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that pytest prints in an
"acceptance criteria" section at the end of the run.
"""

import json
import math
import random
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from oracles import efficiency_oracle, eigenvector_oracle, is_connected, local_efficiency_oracle, seeded_graphs
from flowneat import cli
from flowneat.data import ParseError, bundled_path, load_wdbc
from flowneat.environments import CartPoleParams, CartPoleState, cartpole_dynamics, cartpole_step
from flowneat.graph_metrics import NetGraph, degree_entropy, eigenvector_centrality, global_efficiency, local_efficiency
from flowneat.harness import ExperimentConfig, run_batch
from flowneat.neat import InnovationRegistry, MutationConfig, create_initial_genome
from flowneat.neat.mutation import add_connection, add_node, delete_connection, delete_node, perturb_biases, perturb_weights
from flowneat.selection import MAXIMIZE, MINIMIZE, ObjectiveVector, SelectionConfig, dominates, rank_population

GOLDEN = Path(__file__).parent / "data" / "golden_cartpole.json"


def G(n, edges):
    return NetGraph.from_edges(range(n), edges)


# -- 1 ---------------------------------------------------------------------------


def test_criterion_1_metric_oracles(acceptance):
    # the L1 step-size stopping rule is not an error bound, so request one
    # decade more precision than the agreement being checked
    start = time.perf_counter()
    worst_eff = worst_ec = worst_default = 0.0
    connected = 0
    for n, edges in seeded_graphs(200, max_nodes=12, p=0.3, seed=2024):
        g = G(n, edges)
        worst_eff = max(
            worst_eff,
            abs(global_efficiency(g) - efficiency_oracle(n, edges)),
            abs(local_efficiency(g) - local_efficiency_oracle(n, edges)),
        )
        if edges and is_connected(n, edges):
            connected += 1
            exact = eigenvector_oracle(n, edges)
            per, _, ok = eigenvector_centrality(g, tol=1e-7)
            vec = np.array([per[k] for k in range(n)])
            worst_ec = max(worst_ec, float(np.abs(vec - exact).max()) if ok else math.inf)
            per, _, _ = eigenvector_centrality(g)
            worst_default = max(worst_default, float(np.abs(np.array([per[k] for k in range(n)]) - exact).max()))
    elapsed = time.perf_counter() - start
    ok = worst_eff <= 1e-12 and worst_ec <= 1e-6 and elapsed < 5.0
    acceptance(1, "metric oracle suite", ok, f"eff err {worst_eff:.1e}, EC err {worst_ec:.1e} at tol 1e-7 ({worst_default:.3e} at default tol 1e-6) on {connected} connected graphs, {elapsed:.2f}s")
    assert ok


# -- 2 ---------------------------------------------------------------------------


def test_criterion_2_closed_forms(acceptance):
    petersen = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    regular = [G(4, [(i, j) for i in range(4) for j in range(i + 1, 4)]), G(5, [(i, (i + 1) % 5) for i in range(5)]), G(10, petersen), G(6, [(0, 1), (2, 3), (4, 5)])]
    p3 = -(2 / 3) * math.log(2 / 3) - (1 / 3) * math.log(1 / 3)
    per, _, ec_ok = eigenvector_centrality(G(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    checks = {
        "K4 GE": global_efficiency(regular[0]) == 1.0,
        "P3 GE": abs(global_efficiency(G(3, [(0, 1), (1, 2)])) - 5 / 6) <= 1e-12,
        "P3 entropy": abs(degree_entropy(G(3, [(0, 1), (1, 2)])) - p3) <= 1e-9 and abs(p3 - 0.6365) < 5e-5,
        "regular entropy": all(degree_entropy(g) == 0.0 for g in regular),
        "C4 EC": ec_ok and all(abs(v - 0.5) <= 1e-6 for v in per.values()),
    }
    failed = [k for k, v in checks.items() if not v]
    acceptance(2, "closed-form metric values", not failed, "failed: " + ", ".join(failed) if failed else "5 checks")
    assert not failed


# -- 3 ---------------------------------------------------------------------------


def _acyclic(genome):
    indeg = {k: 0 for k in genome.nodes}
    succ = {k: [] for k in genome.nodes}
    for c in genome.connections.values():
        if c.enabled:
            indeg[c.dst] += 1
            succ[c.src].append(c.dst)
    queue = [k for k, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if not indeg[v]:
                queue.append(v)
    return seen == len(genome.nodes)


def _chain(n_in, n_out, steps, seed):
    rng = random.Random(seed)
    reg = InnovationRegistry()
    cfg = MutationConfig()
    g = create_initial_genome(n_in, n_out, 12, rng, reg)
    io = (set(g.input_ids), set(g.output_ids))
    dag_violations = io_deletions = bookkeeping = 0
    for _ in range(steps):
        op = rng.randrange(6)
        nodes, enabled = len(g.nodes), g.num_enabled
        if op == 0:
            changed = add_connection(g, rng, reg)
            expect = (nodes, enabled + 1) if changed else (nodes, enabled)
        elif op == 1:
            changed = delete_connection(g, rng)
            expect = (nodes, enabled - 1) if changed else (nodes, enabled)
        elif op == 2:
            changed = add_node(g, rng, reg)
            expect = (nodes + 1, enabled + 1) if changed else (nodes, enabled)
        elif op == 3:
            hidden = set(g.hidden_ids)
            before = {k: c for k, c in g.connections.items() if c.enabled}
            changed = delete_node(g, rng)
            removed = hidden - set(g.hidden_ids)
            lost = sum(1 for c in before.values() if c.src in removed or c.dst in removed)
            expect = (nodes - len(removed), enabled - lost)
            if changed and len(removed) != 1:
                bookkeeping += 1
        elif op == 4:
            perturb_biases(g, rng, cfg)
            expect = (nodes, enabled)
        else:
            perturb_weights(g, rng, cfg)
            expect = (nodes, enabled)
        bookkeeping += (len(g.nodes), g.num_enabled) != expect
        dag_violations += not _acyclic(g)
        io_deletions += (set(g.input_ids), set(g.output_ids)) != io
    return dag_violations, io_deletions, bookkeeping


def test_criterion_3_structural_invariants(acceptance):
    totals = [0, 0, 0]
    for k, (n_in, n_out) in enumerate([(4, 1), (4, 3), (9, 1)]):  # cart-pole, iris, wdbc
        for i, v in enumerate(_chain(n_in, n_out, 10_000, seed=k)):
            totals[i] += v
    ok = totals == [0, 0, 0]
    acceptance(3, "structural invariants under 10k mutations per task", ok, "DAG violations %d, I/O deletions %d, bookkeeping errors %d" % tuple(totals))
    assert ok


# -- 4 ---------------------------------------------------------------------------


def _population(rng):
    n = rng.randint(1, 12)
    # coarse values force ties so later slots decide
    return [ObjectiveVector(((rng.randint(0, 4) / 4, MAXIMIZE), (rng.randint(0, 3) / 3, MAXIMIZE), (rng.randint(1, 5), MINIMIZE))) for _ in range(n)]


def test_criterion_4_selection_laws(acceptance):
    rng = random.Random(77)
    failures = {"a": 0, "b": 0, "c": 0, "d": 0}
    for _ in range(1000):
        objs = _population(rng)
        idx = range(len(objs))
        perf_only = sorted(idx, key=lambda i: -objs[i].values[0])
        if rank_population(objs, SelectionConfig(p=0.0), rng) != perf_only:
            failures["a"] += 1
        lex = sorted(idx, key=lambda i: (-objs[i].values[0], -objs[i].values[1], objs[i].values[2]))
        full = rank_population(objs, SelectionConfig(p=1.0), rng)
        if full != lex:
            failures["b"] += 1
        pos = {k: r for r, k in enumerate(full)}
        if any(dominates(objs[a], objs[b]) and pos[a] > pos[b] for a in idx for b in idx):
            failures["c"] += 1
        moved = [ObjectiveVector(((math.exp(3 * o.values[0]) - 2, MAXIMIZE),) + o.slots[1:]) for o in objs]
        p, seed = rng.random(), rng.random()
        if rank_population(objs, SelectionConfig(p=p), random.Random(seed)) != rank_population(moved, SelectionConfig(p=p), random.Random(seed)):
            failures["d"] += 1
    ok = not any(failures.values())
    acceptance(4, "selection laws over 1000 populations", ok, ", ".join(f"({k}) {v} failures" for k, v in failures.items()))
    assert ok


# -- 5 ---------------------------------------------------------------------------


def test_criterion_5_physics(acceptance):
    data = json.loads(GOLDEN.read_text())
    s = CartPoleState(*data["start"])
    golden = True
    for *state, action, terminal in data["states"]:
        s, term = cartpole_step(s, action)
        golden &= s.as_tuple() == tuple(float.fromhex(v) for v in state) and term == terminal

    p = CartPoleParams(pole_mass=1e-9)
    omega = math.sqrt(p.gravity / (4 * p.half_pole_length / 3))
    st, worst = CartPoleState(theta=1e-3), 0.0
    for k in range(1, 26):
        st = cartpole_dynamics(st, 0.0, p)
        worst = max(worst, abs(st.theta / (1e-3 * math.cosh(omega * k * p.dt)) - 1))
    small_angle = worst <= 0.05

    x_acc = cartpole_dynamics(CartPoleState(), 10.0, CartPoleParams()).x_dot / 0.02
    one_step = abs(x_acc - 10 / 1.1) <= 1e-12

    ok = golden and small_angle and one_step
    detail = (
        f"golden {'bit-exact' if golden else 'MISMATCH'}; small-angle max deviation {worst:.4f} vs 0.05; "
        f"zero-state x_acc {x_acc:.6f} vs 10/1.1 = {10 / 1.1:.6f}"
    )
    acceptance(5, "cart-pole physics", ok, detail)
    assert ok, detail


# -- 6 ---------------------------------------------------------------------------


def _tree(d):
    return {p.relative_to(d).as_posix(): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


def test_criterion_6_determinism(acceptance, tmp_path):
    commands = [
        ["run", "--task", "iris", "--pop", "10", "--gens", "40", "--runs", "2", "--measure", "ec_cost"],
        ["run", "--task", "wdbc", "--pop", "8", "--gens", "10", "--runs", "2", "--measure", "le_ratio", "--pressure", "0.5"],
        ["run", "--task", "cartpole", "--pop", "8", "--gens", "5", "--hidden", "4", "--measure", "ent_cost"],
        ["sweep", "--task", "iris", "--pop", "6", "--gens", "10", "--measure", "perf,dc_cost"],
    ]
    mismatches = []
    for k, argv in enumerate(commands):
        trees = []
        for tag, workers in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"{k}{tag}"
            assert cli.main(argv + ["--seed", "3", "--workers", workers, "--out", str(out)]) == 0
            trees.append(_tree(out))
        if not trees[0] == trees[1] == trees[2]:
            mismatches.append(argv[2])
    ok = not mismatches
    acceptance(6, "byte-identical outputs across repeats and thread counts", ok, f"{len(commands)} commands x 3 executions" + (f"; differ: {mismatches}" if mismatches else ""))
    assert ok


# -- 7 and 8 ---------------------------------------------------------------------


IRIS = dict(task="iris", population_size=10, generations=1000, runs=10, base_seed=0)
_BATCHES = {}


def iris_batch(measure, pressure):
    key = (measure, pressure)
    if key not in _BATCHES:
        _BATCHES[key] = run_batch(ExperimentConfig(measure=measure, pressure=pressure, **IRIS))
    return _BATCHES[key].summary()


@pytest.mark.slow
def test_criterion_7_iris_reproduction(acceptance):
    start = time.perf_counter()
    base = iris_batch("perf", 0.15)
    rows = {m: iris_batch(m, 0.15) for m in ("le_cost", "ec_cost", "ent_cost")}
    elapsed = time.perf_counter() - start
    a = base["mean_test"] >= 0.80
    near = [m for m, r in rows.items() if r["mean_test"] >= base["mean_test"] - 0.01]
    b = len(near) >= 2
    conn = {m: r["mean_connections"] / base["mean_connections"] - 1 for m, r in rows.items()}
    c = all(abs(v) <= 0.25 for v in conn.values())
    ok = a and b and c and elapsed < 1800
    detail = (
        f"perf test {base['mean_test']:.4f} train {base['mean_train']:.4f} conns {base['mean_connections']:.2f}; "
        + "; ".join(f"{m} test {r['mean_test']:.4f} conns {r['mean_connections']:.2f} ({conn[m]:+.1%})" for m, r in rows.items())
        + f"; (a) {'ok' if a else 'fail'} (b) {len(near)}/3 (c) {'ok' if c else 'fail'}; {elapsed:.0f}s"
    )
    acceptance(7, "desk-scale Iris reproduction", ok, detail)
    assert ok, detail


@pytest.mark.slow
def test_criterion_8_pressure_direction(acceptance):
    low = iris_batch("ec_cost", 0.15)["mean_test"]
    high = iris_batch("ec_cost", 0.5)["mean_test"]
    ok = high <= low + 0.01
    detail = f"EC+Cost- test at p=0.50 {high:.4f} vs p=0.15 {low:.4f}"
    acceptance(8, "pressure sweep direction on Iris (soft)", ok, detail, soft=True)
    if not ok:
        warnings.warn(f"pressure-sweep direction not reproduced: {detail}")


# -- 9 ---------------------------------------------------------------------------


def test_criterion_9_wdbc_ingestion(acceptance, tmp_path):
    path = bundled_path("wdbc")
    raw = sum(1 for line in path.read_text().splitlines() if line.strip())
    d = load_wdbc(path)
    counts = (raw, len(d), d.class_counts()[0])
    text = path.read_text()
    lines = text.splitlines(keepends=True)
    broken = {
        "truncated": "".join(lines[:300]) + lines[300][:9],
        "garbled field": "".join(lines[:41]) + lines[41].replace(",", ",x", 1) + "".join(lines[42:]),
        "bad class": "".join(lines[:99]) + lines[99].rsplit(",", 1)[0] + ",7\n",
        "binary junk": "".join(lines[:10]) + "\x00\x01,\x02\n",
    }
    expected_rows = {"truncated": 301, "garbled field": 42, "bad class": 100, "binary junk": 11}
    bad = []
    for name, content in broken.items():
        f = tmp_path / f"{name.replace(' ', '_')}.data"
        f.write_text(content)
        try:
            load_wdbc(f)
            bad.append(f"{name}: accepted")
        except ParseError as exc:
            if exc.row != expected_rows[name]:
                bad.append(f"{name}: row {exc.row}")
    ok = counts == (699, 683, 444) and not bad
    acceptance(9, "WDBC ingestion", ok, f"raw {counts[0]}, cleaned {counts[1]}, benign {counts[2]}; " + ("; ".join(bad) if bad else "4 corrupt files rejected with row numbers"))
    assert ok
