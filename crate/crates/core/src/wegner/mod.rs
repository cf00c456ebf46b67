//! Alloy-type random operators: Monte Carlo Wegner and IDS estimates, plus
//! verifiers for the Weyl lower bound, the semigroup trace bound, the
//! partial-integration inequality and the singular-value decay experiment.

mod decay;
mod experiment;
mod lemma3;
mod model;
mod weyl;

pub use decay::{
    perturbation_singular_values, singular_value_experiment, DecayExperiment, DecayExperimentConfig,
    DecayRow,
};
pub use experiment::{
    averaged_ssf, holder_modulus_check, ids_estimate, log_log_fit, validate_eps_grid,
    wegner_experiment, HolderReport, HolderRow, IdsConfig, IdsCurve, IdsEstimate, WegnerConfig,
    WegnerResult, WegnerRow,
};
pub use lemma3::{lemma3_verify, Lemma3Check, SmoothstepSum, SmoothstepTerm};
pub use model::{AlloyModel, Amplitude};
pub use weyl::{
    refine_potential, semigroup_trace_check, weyl_check, weyl_refinement, SemigroupTraceReport,
    SemigroupTraceRow, WeylReport, WeylRow, DEFAULT_ETA,
};
