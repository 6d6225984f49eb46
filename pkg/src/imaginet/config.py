"""Run configuration and the ``key = value`` config file format."""

from dataclasses import asdict, dataclass, field, fields, replace

from .gridworld import OPEN5, GridSpec


@dataclass(frozen=True)
class TrainConfig:
    grid: GridSpec = OPEN5
    episodes: int = 300
    steps_per_episode: int = 200
    batch_size: int = 32
    train_steps_per_episode: int = 8
    seed: int = 7
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_fraction: float = 0.5
    root_dim: int = 32
    hidden: int = 64
    lr: float = 1e-3
    capacity: int = 64
    ema_rate: float = 0.05
    max_steps: int = 50
    done_threshold: float = 0.5
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("episodes", "steps_per_episode", "batch_size", "train_steps_per_episode",
                     "root_dim", "hidden", "capacity", "max_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("epsilon_start", "epsilon_end", "epsilon_decay_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must be in (0, 1)")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if not 0 < self.ema_rate <= 1:
            raise ValueError("ema_rate must be in (0, 1]")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if not 0 < self.done_threshold < 1:
            raise ValueError("done_threshold must be in (0, 1)")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def epsilon(self, episode):
        """Linear decay from ``epsilon_start`` to ``epsilon_end``, then constant."""
        span = self.epsilon_decay_fraction * self.episodes
        frac = 1.0 if span <= 0 else min(1.0, episode / span)
        return self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac


class ConfigError(ValueError):
    pass


# file key -> (TrainConfig field, parser)
_SCALAR_KEYS = {
    "train.episodes": ("episodes", int),
    "train.steps_per_episode": ("steps_per_episode", int),
    "train.batch_size": ("batch_size", int),
    "train.train_steps_per_episode": ("train_steps_per_episode", int),
    "train.seed": ("seed", int),
    "q.alpha": ("alpha", float),
    "q.gamma": ("gamma", float),
    "q.epsilon_start": ("epsilon_start", float),
    "q.epsilon_end": ("epsilon_end", float),
    "q.epsilon_decay_fraction": ("epsilon_decay_fraction", float),
    "nn.root_dim": ("root_dim", int),
    "nn.hidden": ("hidden", int),
    "nn.lr": ("lr", float),
    "memory.capacity": ("capacity", int),
    "memory.ema_rate": ("ema_rate", float),
    "imagine.max_steps": ("max_steps", int),
    "imagine.done_threshold": ("done_threshold", float),
    "imagine.temperature": ("temperature", float),
}
_GRID_KEYS = ("grid.width", "grid.height", "grid.walls", "grid.start", "grid.goal")


def parse_cell(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'r,c', got {text!r}")
    return int(parts[0]), int(parts[1])


def _format_cell(cell):
    return f"{cell[0]},{cell[1]}"


def parse_config(text):
    """Parse config file text into a :class:`TrainConfig`.

    Unknown keys, duplicate keys and malformed lines raise :class:`ConfigError`
    naming the 1-based line number.
    """
    grid_vals = {}
    scalars = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            if key in _SCALAR_KEYS:
                name, conv = _SCALAR_KEYS[key]
                scalars[name] = conv(value)
            elif key in ("grid.width", "grid.height"):
                grid_vals[key] = int(value)
            elif key in ("grid.start", "grid.goal"):
                grid_vals[key] = parse_cell(value)
            elif key == "grid.walls":
                grid_vals[key] = frozenset(parse_cell(p) for p in value.split(";") if p.strip())
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None

    try:
        grid = OPEN5
        if grid_vals:
            width = grid_vals.get("grid.width", OPEN5.width)
            height = grid_vals.get("grid.height", OPEN5.height)
            grid = GridSpec(
                width,
                height,
                grid_vals.get("grid.walls", frozenset()),
                grid_vals.get("grid.start", (0, 0)),
                grid_vals.get("grid.goal", (height - 1, width - 1)),
            )
        return replace(TrainConfig(grid=grid), **scalars)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg):
    """Canonical config file text; ``parse_config(format_config(c)) == c``."""
    g = cfg.grid
    lines = [
        f"grid.width = {g.width}",
        f"grid.height = {g.height}",
        f"grid.walls = {';'.join(_format_cell(w) for w in sorted(g.walls))}",
        f"grid.start = {_format_cell(g.start)}",
        f"grid.goal = {_format_cell(g.goal)}",
    ]
    values = asdict(cfg)
    for key, (name, _) in _SCALAR_KEYS.items():
        lines.append(f"{key} = {values[name]!r}")
    return "\n".join(lines) + "\n"


CONFIG_FIELDS = tuple(f.name for f in fields(TrainConfig))
