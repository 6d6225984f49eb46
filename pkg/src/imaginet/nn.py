"""Small dense networks with hand-written backprop, Adam, and a gradient checker.

Everything runs in float64. Inputs may be a single vector or a batch (rows).
"""

import numpy as np

ACTIVATIONS = ("linear", "sigmoid", "tanh")
LOSSES = ("softmax_ce", "mse", "bce")
_HEAD_FOR_LOSS = {"softmax_ce": "linear", "bce": "sigmoid"}


def _act(name, z):
    if name == "tanh":
        return np.tanh(z)
    if name == "sigmoid":
        # split by sign to avoid overflow in exp
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    return z


def _act_grad(name, a):
    """Derivative of the activation, written in terms of its output ``a``."""
    if name == "tanh":
        return 1.0 - a * a
    if name == "sigmoid":
        return a * (1.0 - a)
    return np.ones_like(a)


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class DenseNet:
    """Fully connected stack ``x @ W + b`` with tanh hidden layers.

    ``weights[i]`` has shape ``(layer_sizes[i], layer_sizes[i+1])``.
    """

    def __init__(self, layer_sizes, hidden_activation="tanh", output_activation="linear", seed=0):
        layer_sizes = [int(n) for n in layer_sizes]
        if len(layer_sizes) < 2 or any(n <= 0 for n in layer_sizes):
            raise ValueError(f"need >= 2 positive layer sizes, got {layer_sizes}")
        if hidden_activation not in ACTIVATIONS or output_activation not in ACTIVATIONS:
            raise ValueError("unknown activation")
        self.layer_sizes = layer_sizes
        self.hidden_activation = hidden_activation
        self.output_activation = output_activation

        rng = np.random.default_rng(seed)
        self.weights, self.biases = [], []
        n_layers = len(layer_sizes) - 1
        for i, (fan_in, fan_out) in enumerate(zip(layer_sizes[:-1], layer_sizes[1:])):
            if i == n_layers - 1:
                w = np.zeros((fan_in, fan_out))
            else:
                lim = np.sqrt(6.0 / (fan_in + fan_out))
                w = rng.uniform(-lim, lim, size=(fan_in, fan_out))
            self.weights.append(w)
            self.biases.append(np.zeros(fan_out))

    @property
    def params(self):
        """Flat list ``[W0, b0, W1, b1, ...]``; the arrays are the live parameters."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def activation(self, layer):
        return self.output_activation if layer == len(self.weights) - 1 else self.hidden_activation

    def forward(self, x):
        """Return ``(output, cache)``; ``cache[i]`` is the input to layer ``i``, ``cache[-1]`` the output."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.layer_sizes[0]:
            raise ValueError(f"expected input width {self.layer_sizes[0]}, got {x.shape[-1]}")
        cache = [x]
        a = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            a = _act(self.activation(i), a @ w + b)
            cache.append(a)
        return a, cache

    def __call__(self, x):
        return self.forward(x)[0]

    def copy(self):
        other = object.__new__(DenseNet)
        other.layer_sizes = list(self.layer_sizes)
        other.hidden_activation = self.hidden_activation
        other.output_activation = self.output_activation
        other.weights = [w.copy() for w in self.weights]
        other.biases = [b.copy() for b in self.biases]
        return other

    def flat(self):
        return np.concatenate([p.ravel() for p in self.params])

    def load_flat(self, values):
        values = np.asarray(values, dtype=np.float64)
        expected = sum(p.size for p in self.params)
        if values.size != expected:
            raise ValueError(f"expected {expected} parameters, got {values.size}")
        pos = 0
        for p in self.params:
            p[...] = values[pos:pos + p.size].reshape(p.shape)
            pos += p.size


def loss_and_grad(net, cache, target, loss_kind, sample_weight=None):
    """Mean loss over the batch and its gradients, aligned with ``net.params``.

    softmax_ce expects a linear head and one-hot (or probability) targets; the head
    output is treated as logits. bce expects a sigmoid head. mse averages over every
    output element. ``sample_weight`` scales per-sample bce terms (mean still over N).
    """
    if loss_kind not in LOSSES:
        raise ValueError(f"unknown loss {loss_kind!r}")
    need = _HEAD_FOR_LOSS.get(loss_kind)
    if need is not None and net.output_activation != need:
        raise ValueError(f"{loss_kind} requires a {need} head, net has {net.output_activation}")

    out = cache[-1]
    target = np.asarray(target, dtype=np.float64)
    if target.shape != out.shape:
        raise ValueError(f"target shape {target.shape} != output shape {out.shape}")
    batched = out.ndim == 2
    out2 = out if batched else out[None]
    tgt2 = target if batched else target[None]
    n = out2.shape[0]

    if loss_kind == "softmax_ce":
        z = out2 - out2.max(axis=1, keepdims=True)
        logsum = np.log(np.exp(z).sum(axis=1, keepdims=True))
        logp = z - logsum
        loss = -(tgt2 * logp).sum() / n
        # gradient w.r.t. pre-activation (linear head, so same as output)
        delta = (np.exp(logp) * tgt2.sum(axis=1, keepdims=True) - tgt2) / n
    elif loss_kind == "mse":
        diff = out2 - tgt2
        loss = (diff * diff).mean()
        delta = 2.0 * diff / diff.size * _act_grad(net.output_activation, out2)
    else:
        w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
        w = w.reshape(n, *([1] * (out2.ndim - 1)))
        p = np.clip(out2, 1e-300, 1.0)
        q = np.clip(1.0 - out2, 1e-300, 1.0)
        per = -(tgt2 * np.log(p) + (1.0 - tgt2) * np.log(q))
        loss = (w * per).sum() / n
        # d/dz of bce through a sigmoid is (p - y)
        delta = w * (out2 - tgt2) / n

    grads = _backward(net, cache, delta, batched)
    return float(loss), grads


def _backward(net, cache, delta, batched):
    acts = [c if batched else c[None] for c in cache]
    grads = [None] * (2 * len(net.weights))
    for i in range(len(net.weights) - 1, -1, -1):
        grads[2 * i] = acts[i].T @ delta
        grads[2 * i + 1] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i].T) * _act_grad(net.hidden_activation, acts[i])
    return grads


class Adam:
    """Adam state for one network's parameter list."""

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params, grads):
        if len(grads) != len(params):
            raise ValueError("gradient list does not match parameters")
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            if g.shape != p.shape:
                raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def adam_step(net, opt, grads):
    opt.step(net.params, grads)
    return net


def train_step(net, opt, x, target, loss_kind, sample_weight=None):
    """Forward, loss, one Adam update. Returns the pre-update loss."""
    _, cache = net.forward(x)
    loss, grads = loss_and_grad(net, cache, target, loss_kind, sample_weight)
    opt.step(net.params, grads)
    return loss


def finite_diff_check(net, x, target, loss_kind, epsilon=1e-5, sample_weight=None):
    """Largest relative error between analytic and central-difference gradients.

    Relative error is ``|a - n| / max(|a| + |n|, 1e-6)``; the floor keeps
    near-zero gradients from reporting round-off as error.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _, cache = net.forward(x)
    _, grads = loss_and_grad(net, cache, target, loss_kind, sample_weight)

    def loss_at():
        _, c = net.forward(x)
        return loss_and_grad(net, c, target, loss_kind, sample_weight)[0]

    worst = 0.0
    for p, g in zip(net.params, grads):
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            i = it.multi_index
            orig = p[i]
            p[i] = orig + epsilon
            up = loss_at()
            p[i] = orig - epsilon
            down = loss_at()
            p[i] = orig
            num = (up - down) / (2 * epsilon)
            err = abs(g[i] - num) / max(abs(g[i]) + abs(num), 1e-6)
            worst = max(worst, err)
    return worst
