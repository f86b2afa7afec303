from volren.stochastic.estimators import (
    EstimateStats,
    draw_terminations,
    empirical_opacity,
    ks_distance,
    mc_estimate,
    mc_expected_depth,
)
from volren.stochastic.rng import STREAM_BLOCK, philox_generator, stream_uniforms
