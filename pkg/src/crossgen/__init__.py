"""Unconstrained crossword generation with ranked placement and tabu backtracking."""

from .clues import ClueKind, CluedPuzzle, bundled_dictionary, clue_puzzle, load_dictionary
from .engine import GeneratorConfig, Policy, RunResult, run_generator
from .grid import ACROSS, DOWN, Grid, GridError, Orientation, Placement, violations
from .ranking import Order, Strategy, ps_distance, rank, sorted_list
from .vocab import bundled_words, load_vocabulary, sample_vocabulary

__version__ = "0.1.0"

__all__ = [
    "ACROSS",
    "DOWN",
    "ClueKind",
    "CluedPuzzle",
    "GeneratorConfig",
    "Grid",
    "GridError",
    "Order",
    "Orientation",
    "Placement",
    "Policy",
    "RunResult",
    "Strategy",
    "bundled_dictionary",
    "bundled_words",
    "clue_puzzle",
    "load_dictionary",
    "load_vocabulary",
    "ps_distance",
    "rank",
    "run_generator",
    "sample_vocabulary",
    "sorted_list",
    "violations",
]
