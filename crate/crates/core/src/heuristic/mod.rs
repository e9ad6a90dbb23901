//! Smoothness machinery and the random-subset model.

mod dickman;
mod factor;
mod montecarlo;
mod stats;

pub use dickman::{dickman_rho, DickmanTable, DEFAULT_STEP, RHO_MAX_ARG};
pub use factor::{factorize, is_smooth, Factorization};
pub use montecarlo::{
    estimate_fixed_element, estimate_intersection_prob, estimate_with_local_data, log_bounds, random_subset,
    stream_rng, summarize, trial_hit, FixedElementEstimate, SubsetModel, TrialEstimate,
};
pub use stats::{lcm_of_orders, smooth_fraction, smooth_fraction_with, LcmReport, SmoothnessStats};
