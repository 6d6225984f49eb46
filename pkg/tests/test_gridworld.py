import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imaginet.gridworld import (
    DOWN, LEFT, MAZE5, OPEN5, RIGHT, UP, GridSpec, StateIndex, bfs_distance,
    enumerate_states, greedy_rollout, open_grid, optimal_actions, render, step,
    value_iteration,
)

OPEN3 = open_grid(3, 3)
WALLED3 = GridSpec(3, 3, {(1, 1)}, (0, 0), (2, 2))
# wall row with a single gap on the right; goal bottom-left
WALL_ROW5 = GridSpec(5, 5, {(2, 0), (2, 1), (2, 2), (2, 3)}, (0, 0), (4, 0))

# distances computed offline by Floyd-Warshall over the free-cell adjacency graph
WALL_ROW5_DIST = [
    [12, 11, 10, 9, 8],
    [11, 10, 9, 8, 7],
    [None, None, None, None, 6],
    [1, 2, 3, 4, 5],
    [0, 1, 2, 3, 4],
]
MAZE5_DIST = [
    [8, 7, 6, 5, 4],
    [7, None, None, None, 3],
    [6, 5, 4, 3, 2],
    [5, None, None, None, 1],
    [4, 3, 2, 1, 0],
]


@pytest.mark.parametrize("kwargs", [
    dict(width=3, height=3, walls={(0, 0)}, start=(0, 0), goal=(2, 2)),
    dict(width=3, height=3, walls={(2, 2)}, start=(0, 0), goal=(2, 2)),
    dict(width=3, height=3, start=(1, 1), goal=(1, 1)),
    dict(width=3, height=3, start=(0, 3), goal=(2, 2)),
    dict(width=1, height=1, start=(0, 0), goal=(0, 0)),
])
def test_gridspec_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_enumerate_open3():
    states = enumerate_states(OPEN3)
    assert len(states) == 9
    assert states[0] == (0, (0, 0))
    assert states[8] == (8, (2, 2))


def test_enumerate_skips_walls():
    states = dict((cell, label) for label, cell in enumerate_states(WALLED3))
    assert len(states) == 8
    assert states[(1, 2)] == 4


def test_enumerate_minimal():
    grid = GridSpec(2, 1, start=(0, 0), goal=(0, 1))
    assert [label for label, _ in enumerate_states(grid)] == [0, 1]


def test_step_examples():
    assert step(OPEN3, (0, 0), RIGHT) == ((0, 1), 0.0, False)
    assert step(OPEN3, (0, 0), UP) == ((0, 0), 0.0, False)
    assert step(OPEN3, (2, 1), RIGHT) == ((2, 2), 1.0, True)


def test_step_into_wall_stays():
    assert step(WALLED3, (0, 1), DOWN) == ((0, 1), 0.0, False)


def test_step_from_goal_rejected():
    with pytest.raises(ValueError):
        step(OPEN3, (2, 2), LEFT)


def test_step_never_leaves_free_cells():
    for grid in (OPEN5, MAZE5, WALL_ROW5):
        for cell in StateIndex(grid).cells:
            if cell == grid.goal:
                continue
            for a in range(4):
                nxt, _, _ = step(grid, cell, a)
                assert grid.is_free(nxt)
                assert step(grid, cell, a) == step(grid, cell, a)


def test_render_encoding():
    grid = open_grid(2, 2)
    np.testing.assert_array_equal(render(grid, (0, 0)), [[1.0, 0.0], [0.0, 0.5]])


def test_render_agent_next_to_wall_and_on_goal():
    screen = render(WALLED3, (0, 1))
    assert screen[1, 1] == 0.25
    assert render(WALLED3, (2, 2))[2, 2] == 1.0


def test_render_injective_and_valid():
    for grid in (OPEN5, MAZE5):
        screens = [render(grid, c) for c in StateIndex(grid).cells]
        for s in screens:
            assert np.sum(s == 1.0) == 1
            assert set(np.unique(s)) <= {0.0, 0.25, 0.5, 1.0}
        for a, b in itertools.combinations(screens, 2):
            assert not np.array_equal(a, b)


def _as_table(dist):
    return [[None if np.isinf(v) else int(v) for v in row] for row in dist]


def test_bfs_open3():
    assert bfs_distance(OPEN3, (0, 0)) == 4
    assert bfs_distance(OPEN3, (2, 2)) == 0


def test_bfs_matches_floyd_warshall():
    assert _as_table(bfs_distance(WALL_ROW5)) == WALL_ROW5_DIST
    assert _as_table(bfs_distance(MAZE5)) == MAZE5_DIST


def test_bfs_unreachable_is_inf():
    grid = GridSpec(3, 1, {(0, 1)}, (0, 0), (0, 2))
    assert np.isinf(bfs_distance(grid, (0, 0)))


def test_value_iteration_examples():
    q = value_iteration(OPEN3, 0.9, 1e-12)
    idx = StateIndex(OPEN3)
    assert q[idx.label((2, 1)), RIGHT] == pytest.approx(1.0)
    # BFS distance 2 from (0,2): optimal value 0.9 ** (2 - 1)
    assert q[idx.label((0, 2)), DOWN] == pytest.approx(0.9, abs=1e-9)
    assert q.min() >= 0.0 and q.max() <= 1.0


def test_value_iteration_is_gamma_power_of_distance():
    for grid in (OPEN5, MAZE5, WALL_ROW5):
        q = value_iteration(grid, 0.9, 1e-12)
        idx = StateIndex(grid)
        dist = bfs_distance(grid)
        for s, cell in enumerate(idx.cells):
            if cell != grid.goal:
                assert q[s].max() == pytest.approx(0.9 ** (dist[cell] - 1), abs=1e-9)


def test_value_iteration_policy_is_shortest():
    for grid in (OPEN5, MAZE5, WALL_ROW5):
        q = value_iteration(grid, 0.9, 1e-9)
        policy = q.argmax(axis=1)
        dist = bfs_distance(grid)
        for cell in StateIndex(grid).cells:
            labels = greedy_rollout(grid, policy, cell)
            assert len(labels) - 1 == dist[cell]


def test_optimal_actions_ties():
    q = value_iteration(OPEN3, 0.9, 1e-12)
    assert optimal_actions(q, 0) == {DOWN, RIGHT}


@given(st.integers(2, 6), st.integers(1, 6), st.data())
def test_step_pure_and_in_bounds(width, height, data):
    grid = open_grid(width, height)
    cells = [c for c in StateIndex(grid).cells if c != grid.goal]
    cell = data.draw(st.sampled_from(cells))
    a = data.draw(st.integers(0, 3))
    nxt, r, done = step(grid, cell, a)
    assert grid.in_bounds(nxt)
    assert abs(nxt[0] - cell[0]) + abs(nxt[1] - cell[1]) <= 1
    assert done == (nxt == grid.goal) and r == float(done)
