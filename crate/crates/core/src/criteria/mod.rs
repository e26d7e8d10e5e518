//! Exact decision procedures for sufficient conditions of membership in the
//! Wiener algebra `A(R^d)` and for the matching sharpness statements.
//!
//! Every rule consumes typed exponent data, evaluates its inequalities in
//! exact rational arithmetic and returns a [`CriterionVerdict`]. Analytic
//! hypotheses that cannot be read off from exponents (continuity, local
//! absolute continuity, decay of a radial profile) are taken as declared by
//! the caller and echoed back in the verdict notes.

mod bundle;
mod rules;
mod types;

pub use bundle::{overall_status, run_all, RuleBundle};
pub use rules::{
    check_bounded_derivative_corollary, check_decay_corollary, check_dim1, check_even_d_proposition, check_legacy_a1d,
    check_legacy_a2d, check_legacy_rules, check_radial_corollary, check_theorem1, check_theorem2, check_theorem213a,
    check_theorem213b, check_theorem2_prime, LegacyInput,
};
pub use types::{
    enumerate_etas, Condition, CriterionVerdict, DecayAssignment, EtaVector, ExponentAssignment, PureDerivativeOrders,
    RadialAssignment, Relation, RuleId, Sharpness, Status, Theorem213Params, Theorem213bParams, Witness, MAX_DIM,
};
