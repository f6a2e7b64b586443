from voronoi_distill.policies.linear import (
    AdamSettings,
    ExperienceBuffer,
    LinearPolicy,
    OptimizerState,
    mse,
    param_distance,
    train_epoch,
)
from voronoi_distill.policies.formula import format_formula, parse_formula
