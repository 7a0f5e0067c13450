"""Word metrics, balls, geodesics and windowed horoballs for Heisenberg,
lamplighter and wreath-product groups."""

from __future__ import annotations

__version__ = "0.1.0"

from .core import (BallSnapshot, GroupModel, ZdModel, bfs_ball, bfs_norm, distance,
                   evaluate_word, geodesic_words, inv, load_snapshot, model_from_id, mul,
                   norm, save_snapshot)
from .errors import (BudgetExceeded, HBLError, InvalidElement, InvariantViolation,
                     NonGeodesicError, SnapshotError, UndeterminedStatus)
from .heisenberg import (H3, HeisenbergModel, NormWitness, canonical_geodesic, double_area,
                         eta, h3_norm, h3_norm_closed, natural_projection, projection_flip)
from .lamplighter import (LAMP, LamplighterModel, geodesic_lang_prefix_member, head,
                          lamp_inv, lamp_mul, lamp_norm, lamplighter_horoball_family)
from .wreath import WreathModel, construct_theorem1_instance

__all__ = [
    "BallSnapshot", "GroupModel", "ZdModel", "bfs_ball", "bfs_norm", "distance",
    "evaluate_word", "geodesic_words", "inv", "load_snapshot", "model_from_id", "mul",
    "norm", "save_snapshot", "BudgetExceeded", "HBLError", "InvalidElement",
    "InvariantViolation", "NonGeodesicError", "SnapshotError", "UndeterminedStatus",
    "H3", "HeisenbergModel", "NormWitness", "canonical_geodesic", "double_area", "eta",
    "h3_norm", "h3_norm_closed", "natural_projection", "projection_flip", "LAMP",
    "LamplighterModel", "geodesic_lang_prefix_member", "head", "lamp_inv", "lamp_mul",
    "lamp_norm", "lamplighter_horoball_family", "WreathModel", "construct_theorem1_instance",
]
