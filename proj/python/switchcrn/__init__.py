"""Stability analysis and simulation of reaction networks in switching environments."""

import json

from ._core import (
    Model,
    ModelError,
    gallery_ids,
    generator,
    mixed_matrix,
    run_cli,
    simulate,
    spectral_abscissa,
    stationary_distribution,
    sweep,
)
from ._core import classify_json as _classify_json

__all__ = [
    "Model",
    "ModelError",
    "classify",
    "gallery_ids",
    "generator",
    "mixed_matrix",
    "run_cli",
    "simulate",
    "spectral_abscissa",
    "stationary_distribution",
    "sweep",
]


def classify(model):
    """Fast and slow regime verdicts as a dict."""
    return json.loads(_classify_json(model))
