"""Sentiment, friendship and activity paradoxes on social networks."""

__version__ = "0.1.0"

from .graph import ConnectionType, SocialGraph, build_graph, enumerate_triads  # noqa: E402
from .ingest import DatasetBundle, filter_min_posts, load_dataset, load_lexicon  # noqa: E402
from .paradox import AggKind, Kind, ParadoxStats, ParadoxVerdict, run_analysis  # noqa: E402
from .sentiment import compute_activity, compute_swb  # noqa: E402

__all__ = [
    "AggKind",
    "ConnectionType",
    "DatasetBundle",
    "Kind",
    "ParadoxStats",
    "ParadoxVerdict",
    "SocialGraph",
    "build_graph",
    "compute_activity",
    "compute_swb",
    "enumerate_triads",
    "filter_min_posts",
    "load_dataset",
    "load_lexicon",
    "run_analysis",
]
