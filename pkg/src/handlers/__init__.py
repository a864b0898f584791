"""Handlers module for SELDA Sim."""

from .characterize_handler import CharacterizeHandler
from .hop_handler import HopHandler
from .compare_handler import CompareHandler
from .sweep_handler import SweepHandler
from .plot_handler import PlotHandler

__all__ = [
    'CharacterizeHandler',
    'HopHandler',
    'CompareHandler',
    'SweepHandler',
    'PlotHandler',
]
