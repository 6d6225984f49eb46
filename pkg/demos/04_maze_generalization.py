"""
A maze that forces a detour
===========================

The maze5 grid has two wall bars, so shortest paths are not Manhattan
paths. Cells in the middle corridor are rarely visited from the fixed start,
which is why the maze config uses a full-step Q update (exact for a
deterministic grid) and twice the episodes.
"""

from pathlib import Path

from imaginet import compare_to_env, imagine, load_config, run
from imaginet.evaluate import MAZE_THRESHOLDS, evaluate

cfg = load_config(Path(__file__).resolve().parents[1] / "configs" / "maze5.cfg")
model, _ = run(cfg)
for name, (value, threshold, ok) in evaluate(model, MAZE_THRESHOLDS).items():
    print(f"{name:<28} {value:.3f}  (>= {threshold})  {'ok' if ok else 'FAIL'}")

# The longest imagined rollout: from the corridor's left end.
idx = model.states
traj = imagine(model, idx.label((2, 0)))
print([idx.cell(l) for l in traj.labels])
print("matches the environment:", compare_to_env(traj, model.grid, model.q).match)
