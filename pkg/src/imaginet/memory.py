"""Short-term per-state queues, long-term per-state Gaussians over roots, and the screen decoder."""

from collections import deque

import numpy as np

from .nn import Adam, DenseNet, loss_and_grad

VAR_FLOOR = 1e-4


class ShortTermMemory:
    """One bounded FIFO of transitions per state label."""

    def __init__(self, n_states, capacity=64):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.queues = [deque(maxlen=capacity) for _ in range(n_states)]

    def __len__(self):
        return sum(len(q) for q in self.queues)

    def store(self, transition):
        s = transition.state
        if not 0 <= s < len(self.queues):
            raise ValueError(f"unknown state label {s}")
        self.queues[s].append(transition)

    def sample_balanced(self, batch_size, rng):
        """Draw ``batch_size`` transitions with replacement.

        Each draw picks a nonempty queue uniformly, then an element of it uniformly,
        so rarely visited states are sampled as often as common ones.
        """
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        nonempty = [q for q in self.queues if q]
        if not nonempty:
            raise ValueError("short-term memory is empty")
        picks = rng.integers(len(nonempty), size=batch_size)
        out = []
        for k in picks:
            q = nonempty[k]
            out.append(q[int(rng.integers(len(q)))])
        return out


class LongTermMemory:
    """Diagonal Gaussian per state, tracked by an exponential moving average."""

    def __init__(self, n_states, root_dim=32, ema_rate=0.05):
        self.root_dim = root_dim
        self.ema_rate = ema_rate
        self.means = np.zeros((n_states, root_dim))
        self.vars = np.full((n_states, root_dim), VAR_FLOOR)
        self.counts = np.zeros(n_states, dtype=np.int64)

    def fit_distribution(self, state, roots):
        roots = np.atleast_2d(np.asarray(roots, dtype=np.float64))
        if roots.shape[0] == 0:
            raise ValueError("need at least one root")
        if roots.shape[1] != self.root_dim:
            raise ValueError(f"root dimension {roots.shape[1]} != {self.root_dim}")
        mean = roots.mean(axis=0)
        var = roots.var(axis=0)
        if self.counts[state] == 0:
            self.means[state] = mean
            self.vars[state] = np.maximum(var, VAR_FLOOR)
        else:
            r = self.ema_rate
            self.means[state] += r * (mean - self.means[state])
            self.vars[state] = np.maximum(self.vars[state] + r * (var - self.vars[state]), VAR_FLOOR)
        self.counts[state] += 1

    def generate_root(self, state, temperature=0.0, rng=None):
        if self.counts[state] == 0:
            raise ValueError(f"state {state} has no fitted distribution")
        mean = self.means[state].copy()
        if temperature == 0:
            return mean
        return mean + temperature * np.sqrt(self.vars[state]) * rng.standard_normal(self.root_dim)


class Decoder:
    """Dense net ``[root_dim, hidden, H*W]`` with a sigmoid head."""

    def __init__(self, screen_shape, root_dim=32, hidden=64, lr=1e-3, seed=0):
        self.screen_shape = tuple(screen_shape)
        self.root_dim = root_dim
        n_out = int(np.prod(self.screen_shape))
        self.net = DenseNet([root_dim, hidden, n_out], "tanh", "sigmoid", seed=seed)
        self.opt = Adam(self.net.params, lr=lr)

    def _check(self, roots):
        roots = np.asarray(roots, dtype=np.float64)
        if roots.shape[-1] != self.root_dim:
            raise ValueError(f"root dimension {roots.shape[-1]} != {self.root_dim}")
        return roots

    def decode(self, roots):
        roots = self._check(roots)
        return self.net(roots).reshape(*roots.shape[:-1], *self.screen_shape)

    def train_batch(self, roots, target_screens):
        """One Adam step on per-pixel MSE. Returns the pre-step loss."""
        x = self._check(roots)
        if x.ndim != 2 or len(x) == 0:
            raise ValueError("need a nonempty batch")
        target = np.asarray(target_screens, dtype=np.float64).reshape(len(x), -1)
        _, cache = self.net.forward(x)
        loss, grads = loss_and_grad(self.net, cache, target, "mse")
        self.opt.step(self.net.params, grads)
        return loss
