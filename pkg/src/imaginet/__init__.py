"""Imagine networks: learned recognition, memory, deduction, selection and termination
for a gridworld, composed into environment-free imagined rollouts."""

from .config import TrainConfig, format_config, load_config, parse_config
from .gridworld import MAZE5, OPEN5, GridSpec, Transition
from .imagine import compare_to_env, imagine
from .model import ImagineModel
from .trainer import run

__all__ = [
    "GridSpec", "Transition", "OPEN5", "MAZE5", "TrainConfig", "parse_config",
    "load_config", "format_config", "ImagineModel", "run", "imagine", "compare_to_env",
]
