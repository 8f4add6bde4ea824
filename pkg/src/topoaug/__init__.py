"""Morse-Smale segmentation, persistence hierarchies, and ML encodings."""

from .field import (
    BinaryMask,
    ScalarField,
    distance_transform,
    load_field,
    load_graph_csv,
    load_graph_field,
    load_graph_json,
    load_grid_field,
    load_image_field,
    save_field,
)
from .morse import CriticalSet, DiscreteGradient, Segmentation, build_gradient, find_critical, segment
from .persistence import (
    SUBLEVEL,
    SUPERLEVEL,
    PersistenceDiagram,
    PersistencePairSet,
    bottleneck,
    diagram,
    sublevel_pairs,
    superlevel_pairs,
)
from .dual import DualGraph, MergeForest, build_dual
from .hierarchy import Hierarchy, ThresholdSchedule, build_hierarchy, simplify, thresholds_from_fractions
from .encode import (
    ChannelStack,
    GnnGraph,
    PersistenceImage,
    PersistenceLandscape,
    persistence_image,
    persistence_landscape,
    to_channels,
    to_gnn_graph,
)
from .estimators import ChannelAugmenter, PersistenceImager, PersistenceLandscaper

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "ScalarField",
    "distance_transform",
    "load_field",
    "load_graph_csv",
    "load_graph_field",
    "load_graph_json",
    "load_grid_field",
    "load_image_field",
    "save_field",
    "CriticalSet",
    "DiscreteGradient",
    "Segmentation",
    "build_gradient",
    "find_critical",
    "segment",
    "SUBLEVEL",
    "SUPERLEVEL",
    "PersistenceDiagram",
    "PersistencePairSet",
    "bottleneck",
    "diagram",
    "sublevel_pairs",
    "superlevel_pairs",
    "DualGraph",
    "MergeForest",
    "build_dual",
    "Hierarchy",
    "ThresholdSchedule",
    "build_hierarchy",
    "simplify",
    "thresholds_from_fractions",
    "ChannelStack",
    "GnnGraph",
    "PersistenceImage",
    "PersistenceLandscape",
    "persistence_image",
    "persistence_landscape",
    "to_channels",
    "to_gnn_graph",
    "ChannelAugmenter",
    "PersistenceImager",
    "PersistenceLandscaper",
    "__version__",
]
