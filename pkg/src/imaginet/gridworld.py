"""Deterministic gridworld, screen renderer and exact oracles (BFS, value iteration)."""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
ACTION_NAMES = ("up", "down", "left", "right")
N_ACTIONS = 4
_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))

EMPTY, WALL, GOAL, AGENT = 0.0, 0.25, 0.5, 1.0


@dataclass(frozen=True)
class GridSpec:
    width: int
    height: int
    walls: frozenset = field(default_factory=frozenset)
    start: tuple = (0, 0)
    goal: tuple = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "walls", frozenset(tuple(w) for w in self.walls))
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "goal", tuple(self.goal))
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        for cell in (*self.walls, self.start, self.goal):
            if not self.in_bounds(cell):
                raise ValueError(f"cell {cell} out of bounds")
        if self.start in self.walls:
            raise ValueError(f"start {self.start} is a wall")
        if self.goal in self.walls:
            raise ValueError(f"goal {self.goal} is a wall")
        if self.start == self.goal:
            raise ValueError("start and goal coincide")
        if self.width * self.height - len(self.walls) < 2:
            raise ValueError("grid needs at least 2 free cells")

    def in_bounds(self, cell):
        r, c = cell
        return 0 <= r < self.height and 0 <= c < self.width

    def is_free(self, cell):
        return self.in_bounds(cell) and tuple(cell) not in self.walls

    @property
    def shape(self):
        return (self.height, self.width)


@dataclass(frozen=True)
class Transition:
    """One experience record. ``next_action`` is None exactly when ``done``."""

    state: int
    screen: np.ndarray
    action: int
    reward: float
    next_state: int
    next_screen: np.ndarray
    next_action: object
    done: bool


def open_grid(width, height, start=None, goal=None):
    return GridSpec(width, height, frozenset(), start or (0, 0), goal or (height - 1, width - 1))


OPEN5 = GridSpec(5, 5, frozenset(), (0, 0), (4, 4))
MAZE5 = GridSpec(
    5, 5, frozenset({(1, 1), (1, 2), (1, 3), (3, 1), (3, 2), (3, 3)}), (0, 0), (4, 4)
)


class StateIndex:
    """Row-major labelling of the free cells of a grid."""

    def __init__(self, grid):
        self.grid = grid
        self.cells = [
            (r, c)
            for r in range(grid.height)
            for c in range(grid.width)
            if (r, c) not in grid.walls
        ]
        self._labels = {cell: i for i, cell in enumerate(self.cells)}

    def __len__(self):
        return len(self.cells)

    def label(self, cell):
        try:
            return self._labels[tuple(cell)]
        except KeyError:
            raise ValueError(f"{cell} is not a free cell") from None

    def cell(self, label):
        return self.cells[label]

    @property
    def goal_label(self):
        return self._labels[self.grid.goal]

    @property
    def start_label(self):
        return self._labels[self.grid.start]


def enumerate_states(grid):
    """Return ``[(label, (row, col)), ...]`` over free cells in row-major order."""
    return list(enumerate(StateIndex(grid).cells))


def step(grid, pos, action):
    """Apply ``action`` at ``pos``. Returns ``(next_pos, reward, done)``.

    Moves into walls or off the grid leave the agent where it is.
    """
    pos = tuple(pos)
    if not grid.is_free(pos):
        raise ValueError(f"{pos} is not a free cell")
    if pos == grid.goal:
        raise ValueError("cannot step from the goal; the episode has ended")
    if action not in (UP, DOWN, LEFT, RIGHT):
        raise ValueError(f"invalid action {action!r}")
    dr, dc = _MOVES[action]
    nxt = (pos[0] + dr, pos[1] + dc)
    if not grid.is_free(nxt):
        nxt = pos
    done = nxt == grid.goal
    return nxt, (1.0 if done else 0.0), done


def render(grid, pos):
    pos = tuple(pos)
    if not grid.is_free(pos):
        raise ValueError(f"{pos} is not a free cell")
    pixels = np.full(grid.shape, EMPTY)
    for w in grid.walls:
        pixels[w] = WALL
    pixels[grid.goal] = GOAL
    pixels[pos] = AGENT
    return pixels


def bfs_distance(grid, start=None):
    """Shortest step counts to the goal for every cell (``inf`` if unreachable or a wall).

    With ``start`` given, returns just that cell's distance.
    """
    dist = np.full(grid.shape, np.inf)
    dist[grid.goal] = 0
    frontier = deque([grid.goal])
    # moves are reversible, so searching outward from the goal is exact
    while frontier:
        r, c = frontier.popleft()
        for dr, dc in _MOVES:
            nb = (r + dr, c + dc)
            if grid.is_free(nb) and dist[nb] == np.inf:
                dist[nb] = dist[r, c] + 1
                frontier.append(nb)
    if start is not None:
        return dist[tuple(start)]
    return dist


def value_iteration(grid, gamma=0.9, tol=1e-9, max_iter=100_000):
    """Optimal action values ``Q[label, action]`` by synchronous Bellman backups."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must be in (0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    idx = StateIndex(grid)
    n = len(idx)
    nxt = np.zeros((n, N_ACTIONS), dtype=int)
    rew = np.zeros((n, N_ACTIONS))
    term = np.zeros((n, N_ACTIONS), dtype=bool)
    goal = idx.goal_label
    for s, cell in enumerate(idx.cells):
        if s == goal:
            nxt[s] = s
            term[s] = True
            continue
        for a in range(N_ACTIONS):
            p, r, d = step(grid, cell, a)
            nxt[s, a], rew[s, a], term[s, a] = idx.label(p), r, d

    q = np.zeros((n, N_ACTIONS))
    for _ in range(max_iter):
        v = q.max(axis=1)
        v[goal] = 0.0
        new = rew + gamma * np.where(term, 0.0, v[nxt])
        new[goal] = 0.0
        resid = np.abs(new - q).max()
        q = new
        if resid < tol:
            break
    return q


def optimal_actions(q_star, label, atol=1e-9):
    row = q_star[label]
    return set(np.flatnonzero(row >= row.max() - atol).tolist())


def greedy_rollout(grid, policy, start, max_steps=None):
    """Follow ``policy`` (label -> action) from ``start``; returns the visited label sequence.

    The sequence includes the start label and stops at the goal or after ``max_steps`` moves.
    """
    idx = StateIndex(grid)
    max_steps = 4 * len(idx) if max_steps is None else max_steps
    pos = tuple(start)
    labels = [idx.label(pos)]
    for _ in range(max_steps):
        if pos == grid.goal:
            break
        pos, _, _ = step(grid, pos, int(policy[labels[-1]]))
        labels.append(idx.label(pos))
    return labels
