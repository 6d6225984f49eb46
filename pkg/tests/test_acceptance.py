"""Exit criteria. Each test records one PASS/FAIL line, printed in the terminal summary.

Default runs: open5 (seed 7, default hyperparameters) and maze5 (configs/maze5.cfg).
"""

import time

import numpy as np
import pytest

from imaginet import load_config, run
from imaginet.evaluate import (
    deduction_fidelity, discriminator_scores, imagination_match, memory_generation,
    q_agreement, recognition_accuracy, shortest_path_rate,
)
from imaginet.io import checkpoint_bytes, write_metrics_csv
from imaginet.nn import DenseNet, finite_diff_check

from conftest import ACCEPTANCE_REPORT, CONFIG_DIR


def record(criterion, name, value, threshold, ok):
    ACCEPTANCE_REPORT.append(
        f"[{'PASS' if ok else 'FAIL'}] {criterion:>4}  {name:<38} value={value}  required {threshold}"
    )
    assert ok, f"criterion {criterion} ({name}): {value} vs {threshold}"


def _discriminator_ok(model):
    p = discriminator_scores(model)
    goal = model.states.goal_label
    rest = np.delete(p, goal)
    exact = p[goal] > 0.5 and np.all(rest < 0.5)
    return bool(exact and p[goal] > rest.max()), f"goal={p[goal]:.4f} max_other={rest.max():.4f}"


# criterion -> (metric name, open5 threshold, maze5 threshold)
SUITE = {
    "1": ("recognition accuracy", 1.0, 1.0),
    "2": ("greedy rollout == BFS distance", 1.0, 1.0),
    "3": ("Q argmax in value-iteration set", 0.95, 0.90),
    "4": ("deduction one-step fidelity", 0.95, 0.90),
    "5": ("discriminator exhaustive", None, None),
    "6": ("imagination matches env rollout", 0.90, 0.80),
}


def _check(criterion, model, maze):
    name, open_th, maze_th = SUITE[criterion]
    th = maze_th if maze else open_th
    prefix = "10." if maze else ""
    label = f"{prefix}{criterion}"
    if criterion == "5":
        ok, desc = _discriminator_ok(model)
        record(label, name, desc, "every state correct at 0.5, goal > max(others)", ok)
        return
    fn = {
        "1": recognition_accuracy,
        "2": shortest_path_rate,
        "3": lambda m: q_agreement(m, 0.9, 1e-9),
        "4": deduction_fidelity,
        "6": lambda m: imagination_match(m, 50, 0.5),
    }[criterion]
    value = fn(model)
    op = "==" if th == 1.0 else ">="
    record(label, name, f"{value:.4f}", f"{op} {th}", value >= th)


@pytest.mark.parametrize("criterion", ["1", "2", "3", "4", "5", "6"])
def test_open5(criterion, open5_model):
    _check(criterion, open5_model, maze=False)


def test_open5_memory_generation(open5_model):
    value = memory_generation(open5_model)
    record("7", "decode(generate_root(s)) argmax cell", f"{value:.4f}", "== 1.0 (all 25)", value == 1.0)


def test_gradient_check():
    rng = np.random.default_rng(0)
    worst = {}
    for kind, head in (("softmax_ce", "linear"), ("mse", "tanh"), ("bce", "sigmoid")):
        errs = []
        for seed in range(3):
            net = DenseNet([5, 7, 6, 3], "tanh", head, seed=seed)
            for p in net.params:
                p[...] = rng.normal(scale=0.5, size=p.shape)
            x = rng.normal(size=(4, 5))
            if kind == "softmax_ce":
                y = np.eye(3)[rng.integers(3, size=4)]
            elif kind == "bce":
                y = rng.integers(2, size=(4, 3)).astype(float)
            else:
                y = rng.uniform(-0.9, 0.9, size=(4, 3))
            errs.append(finite_diff_check(net, x, y, kind, epsilon=1e-5))
        worst[kind] = max(errs)
    value = max(worst.values())
    record("8", "finite-difference gradient check", f"{value:.2e}", "< 1e-4", value < 1e-4)


def test_determinism(open5_run, tmp_path):
    cfg = load_config(CONFIG_DIR / "open5.cfg")
    t0 = time.perf_counter()
    model, metrics = run(cfg)
    elapsed = time.perf_counter() - t0
    write_metrics_csv(open5_run[1], tmp_path / "a.csv")
    write_metrics_csv(metrics, tmp_path / "b.csv")
    same_ckpt = checkpoint_bytes(open5_run[0]) == checkpoint_bytes(model)
    same_csv = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    record("9", "byte-identical checkpoint + metrics", f"ckpt={same_ckpt} csv={same_csv}",
           "both identical", same_ckpt and same_csv)
    record("run", "open5 default training time", f"{elapsed:.1f}s", "< 120s", elapsed < 120)


@pytest.mark.parametrize("criterion", ["1", "2", "3", "4", "5", "6"])
def test_maze5(criterion, maze5_model):
    _check(criterion, maze5_model, maze=True)
