//! Statistical experiments and the tools to summarise them.

pub mod ecdf;
pub mod experiments;
pub mod format;
pub mod histogram;
pub mod plan;
pub mod rng;

pub use ecdf::{ks_distance, ks_two_sample, EmpiricalCdf};
pub use experiments::{
    distance_moment_experiment, distance_moment_has_limit, distance_values, model_density_1d, model_survival_1d,
    region_length_1d,
    moment_from_values, pigeonhole_experiment, qmin_distribution_experiment,
    qmin_moment_experiment, qmin_values, rescale_factor, void_counts, void_statistic_experiment,
    CountHistogram, PigeonholeHistogram, QminDistribution, SurvivalRow,
};
pub use histogram::DensityHistogram;
pub use plan::{DistancePlan, ExperimentPlan, PigeonholePlan, PlanSpec, PointSource, SamplingMode, VoidPlan};
pub use rng::prng_uniform_rational;
