"""Temporal network alignment with graphlet-orbit transition features."""

from .align import Alignment, ObjectiveScore, align, ideal_score, score
from .census import brute_force_census, enumerate_occurrences
from .evaluation import ScoredPair, dis, gain_higher_better, gain_lower_better, node_correctness, pr_roc
from .features import fit_pca, node_similarities, similarity_matrix
from .gots import GoTTensor, extract_gots, flatten, resolve_k_set
from .models import MODELS, ModelSpec, generate, generate_suite
from .network import Event, NetworkFormatError, TemporalNetwork, load_network, parse_network, save_network
from .noise import NoiseSpec, noise_ladder, randomize
from .orbits import build_catalog, classify

__version__ = "0.1.0"

__all__ = [
    "Alignment", "ObjectiveScore", "align", "ideal_score", "score",
    "brute_force_census", "enumerate_occurrences",
    "ScoredPair", "dis", "gain_higher_better", "gain_lower_better", "node_correctness", "pr_roc",
    "fit_pca", "node_similarities", "similarity_matrix",
    "GoTTensor", "extract_gots", "flatten", "resolve_k_set",
    "MODELS", "ModelSpec", "generate", "generate_suite",
    "Event", "NetworkFormatError", "TemporalNetwork", "load_network", "parse_network", "save_network",
    "NoiseSpec", "noise_ladder", "randomize",
    "build_catalog", "classify",
]
