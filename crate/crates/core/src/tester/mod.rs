//! The count-vector tester and the collision distinguisher.

pub mod count;
pub mod estimate;
pub mod experiment;
pub mod run;
pub mod sampler;
pub mod stats;

pub use count::{equalize_edit_sequence, exact_count_vector, CountVector, EqualizePlan};
pub use estimate::{estimate_count_vector, sample_count, CountEstimate};
pub use experiment::{calibrate_estimates, singleton_spec, tester_trials, Calibration, TrialRow, TrialSummary};
pub use run::{run_property_tester, run_with_samples, Phase, PropertySpec, TesterVerdict, PHASE_ONE_ATTEMPTS};
pub use sampler::{
    collision_distinguisher, collision_threshold, copies_for, empirical_sample_complexity, evaluate_q,
    ComponentSampler, DistinguisherOutcome, FormSource, Guess, QCell, SweepOptions, SweepRow,
};
pub use stats::{binomial_cdf, two_sample_success, wilson_interval};
