from voronoi_distill.evaluation.evaluate import episode_return, evaluate, evaluate_many
from voronoi_distill.evaluation.grids import (
    CELL_COLUMN,
    HeatmapGrid,
    QuiverGrid,
    grid_states,
    heatmap_data,
    quiver_data,
)
from voronoi_distill.evaluation.stats import SpreadStats, policy_means, spread_stats, success_rate
