"""
The gridworld and its exact oracles
===================================

Everything the learned model does is checked against two exact answers:
breadth-first-search distances and value-iteration action values.
"""

import numpy as np

from imaginet.gridworld import MAZE5, OPEN5, ACTION_NAMES, StateIndex, bfs_distance, render, value_iteration

# States are the free cells, numbered row by row.
idx = StateIndex(MAZE5)
print(f"maze5 has {len(idx)} states; goal label = {idx.goal_label}")

# A screen is a small intensity image: empty 0, wall 0.25, goal 0.5, agent 1.
print(render(MAZE5, (2, 2)))

# Shortest distances to the goal. The middle row is a corridor that must be
# left through the right-hand column.
print(bfs_distance(MAZE5))

# With reward 1 on entering the goal and gamma 0.9, the optimal value of a
# state at distance d is 0.9 ** (d - 1).
q_star = value_iteration(MAZE5, gamma=0.9, tol=1e-12)
dist = bfs_distance(MAZE5)
for label, cell in enumerate(idx.cells[:5]):
    best = ACTION_NAMES[int(np.argmax(q_star[label]))]
    print(cell, f"d={dist[cell]:.0f}", f"V*={q_star[label].max():.4f}", f"0.9**(d-1)={0.9 ** (dist[cell] - 1):.4f}", best)

# The open grid needs 8 moves from the corner.
print("open5 start distance:", bfs_distance(OPEN5, OPEN5.start))
