"""
Imagining a trajectory
======================

After training the environment is no longer used. A root vector is drawn
from long-term memory for the chosen start state, then the model loops:
decode a frame, recognize the state, ask the discriminator whether this is
the end, pick the greedy action from the Q-table, and let the deduction net
predict the next root.
"""

import numpy as np

from imaginet import TrainConfig, compare_to_env, imagine, run
from imaginet.gridworld import ACTION_NAMES

model, _ = run(TrainConfig())
idx = model.states


def ascii_frame(screen):
    # brightest pixel is the agent; mark cells by decoded intensity
    chars = np.array([" ", ".", "o", "@"])
    return "\n".join("".join(chars[np.digitize(row, [0.15, 0.4, 0.75])]) for row in screen)


traj = imagine(model, idx.label((0, 2)), max_steps=50, done_threshold=0.5, temperature=0.0)
for st in traj.steps:
    act = ACTION_NAMES[st.action] if st.action is not None else "-"
    print(f"step {st.index}: recognized {idx.cell(st.label)}  done={st.done_prob:.3f}  next={act}")
    print(ascii_frame(st.screen))
print("termination:", traj.termination)

# The same start in the real environment, following the same Q-table.
report = compare_to_env(traj, model.grid, model.q)
print("real labels    :", report.real)
print("imagined labels:", report.imagined)
print("exact match:", report.match)

# With temperature > 0 the start root is sampled from the state's Gaussian
# instead of taken at its mean.
rng = np.random.default_rng(0)
noisy = imagine(model, idx.label((0, 2)), temperature=1.0, rng=rng)
print("temperature 1 labels:", noisy.labels)
