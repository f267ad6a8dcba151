"""Monthly cost of storing vs. re-transcoding video GOPs on tiered cloud storage."""
from .clustering import ClusterResult, TierAssignment, cluster_views, map_clusters_to_tiers
from .experiment import SweepRow, UndefinedSavingsError, emit_sweep_csv, run_sweep, savings
from .model import (
    CapacityError,
    CostReport,
    Gop,
    GopTable,
    InvalidArgumentError,
    PricingConfig,
    StorageTier,
    Video,
    retranscode_cost_monthly,
    storage_cost_monthly,
)
from .policies import (
    FavSelection,
    PolicySpec,
    evaluate,
    evaluate_clustered,
    evaluate_full_pre,
    evaluate_full_re,
    evaluate_partial,
    select_favs,
)
from .synthesis import (
    Repository,
    SynthesisConfig,
    repository_from_videos,
    synthesize_repository,
    tail_profile,
    transcode_time,
)

__version__ = "0.1.0"
