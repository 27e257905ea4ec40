"""Model-order estimation from Hankel matrix rank.

Signals are kept in binary128 inside the extension; values returned to
Python are floats.
"""

from ._hokalman import (
    Signal,
    __version__,
    add_noise,
    add_offset,
    aic_order,
    augmented_rank,
    covariance_determinants,
    exact_rank,
    gen_high_order,
    gen_mode_sum,
    gen_nonhomogeneous,
    gen_pole_proximity,
    gen_y5,
    hankel_rank,
    hankel_singular_values,
    hokalman_order,
    list_experiments,
    rank_sweep,
    run_experiment,
    snr_db,
)

__all__ = [
    "Signal",
    "add_noise",
    "add_offset",
    "aic_order",
    "augmented_rank",
    "covariance_determinants",
    "exact_rank",
    "gen_high_order",
    "gen_mode_sum",
    "gen_nonhomogeneous",
    "gen_pole_proximity",
    "gen_y5",
    "hankel_rank",
    "hankel_singular_values",
    "hokalman_order",
    "list_experiments",
    "rank_sweep",
    "run_experiment",
    "snr_db",
]
