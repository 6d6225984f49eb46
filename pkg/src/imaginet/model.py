"""Container bundling the learned components for one grid."""

from dataclasses import dataclass

import numpy as np

from .agent import QTable
from .config import TrainConfig
from .deduction import DeductionNet
from .discriminator import DiscNet
from .gridworld import StateIndex
from .memory import Decoder, LongTermMemory
from .recognition import Recognizer

# fixed consumer order for splitting the run seed
SEED_STREAMS = ("recognizer", "decoder", "deduction", "discriminator", "behavior", "sampler")


def seed_streams(seed):
    children = np.random.SeedSequence(seed).spawn(len(SEED_STREAMS))
    return dict(zip(SEED_STREAMS, children))


@dataclass
class ImagineModel:
    config: TrainConfig
    recognizer: Recognizer
    decoder: Decoder
    ltm: LongTermMemory
    deduction: DeductionNet
    discriminator: DiscNet
    q: QTable

    @classmethod
    def fresh(cls, config):
        """Untrained model with parameters initialised from ``config.seed``."""
        streams = seed_streams(config.seed)
        n = len(StateIndex(config.grid))
        shape = config.grid.shape
        c = config
        return cls(
            config=c,
            recognizer=Recognizer(shape, n, c.root_dim, c.hidden, c.lr, seed=streams["recognizer"]),
            decoder=Decoder(shape, c.root_dim, c.hidden, c.lr, seed=streams["decoder"]),
            ltm=LongTermMemory(n, c.root_dim, c.ema_rate),
            deduction=DeductionNet(c.root_dim, c.hidden, lr=c.lr, seed=streams["deduction"]),
            discriminator=DiscNet(c.root_dim, 32, c.lr, seed=streams["discriminator"]),
            q=QTable(n, alpha=c.alpha, gamma=c.gamma),
        )

    @property
    def grid(self):
        return self.config.grid

    @property
    def states(self):
        return StateIndex(self.config.grid)
