//! Exact finite-volume spectral shift functions and the identities and
//! bounds built on them.

mod bounds;
mod curve;
mod ft;
mod switch;

pub use bounds::{
    dual_bound_check, exponentiated_curve, hs_majorization_check, integral_bound_constant,
    krein_check, ssf_integral_bound, synthetic_level_profile, synthetic_singularity_trend,
    trace_bound_check, trace_difference, DualBoundCheck, KreinCheck, MajorizationCheck,
    TraceBoundRow, TraceBoundTable,
};
pub use curve::{ssf_counting, ssf_via_invariance, SsfCurve};
pub use ft::{asymptotic_ratio, FtFunctional};
pub use switch::{make_switch, smoothstep, smoothstep_derivative, SwitchFunction, SMOOTHSTEP_PEAK_SLOPE};

#[cfg(test)]
mod tests;
