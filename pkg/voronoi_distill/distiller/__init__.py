from voronoi_distill.distiller.config import DistillConfig
from voronoi_distill.distiller.distiller import (
    DistilledPolicy,
    DistillResult,
    EpisodeTrace,
    EpochRecord,
    MergeEvent,
    SplitEvent,
    TrainingSlot,
    act,
    assign_experiences,
    collect_episode,
    merge_regions,
    run_distillation,
    split_regions,
    train_subpolicies,
)
