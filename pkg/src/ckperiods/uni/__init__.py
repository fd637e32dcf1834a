"""Graded nilpotent Lie algebras, truncated BCH groups and their actions."""

from .bch import bch, bch_series
from .group import GroupElement, UAction, act_torus, torus_character
from .lie import GradedLieAlgebra, necklace_dimension, semidirect
from .reps import Representation, standard_representation

__all__ = [
    "GradedLieAlgebra",
    "GroupElement",
    "Representation",
    "UAction",
    "act_torus",
    "bch",
    "bch_series",
    "necklace_dimension",
    "semidirect",
    "standard_representation",
    "torus_character",
]
