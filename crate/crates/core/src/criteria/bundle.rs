use super::rules::*;
use super::types::*;
use crate::exponent::Exponent;

/// Whatever typed inputs are available for one function.
#[derive(Clone, Debug, Default)]
pub struct RuleBundle {
    pub assignment: Option<ExponentAssignment>,
    /// Lower exponent for the equality form (requires `assignment`).
    pub p_strict: Option<Exponent>,
    pub decay: Option<DecayAssignment>,
    pub radial: Option<RadialAssignment>,
    pub orders: Option<PureDerivativeOrders>,
    pub theorem213: Option<Theorem213Params>,
    pub theorem213b: Option<Theorem213bParams>,
    /// `(p, q)` for `f in L_p`, `f' in L_q` on the line.
    pub dim1: Option<(Exponent, Exponent)>,
}

impl RuleBundle {
    /// Bundle for `f in L_p(R)`, `f' in L_q(R)`.
    pub fn from_dim1(p: Exponent, q: Exponent) -> crate::Result<Self> {
        let assignment = ExponentAssignment::new(1, vec![p.clone(), q.clone()], &[])?;
        Ok(RuleBundle {
            assignment: Some(assignment),
            dim1: Some((p, q)),
            ..Default::default()
        })
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_none()
            && self.decay.is_none()
            && self.radial.is_none()
            && self.orders.is_none()
            && self.theorem213.is_none()
            && self.theorem213b.is_none()
            && self.dim1.is_none()
    }
}

/// Applies every rule whose inputs are present; verdicts come back in rule-id order.
pub fn run_all(bundle: &RuleBundle) -> Vec<CriterionVerdict> {
    let mut out = Vec::new();
    if let Some(a) = &bundle.assignment {
        out.push(check_theorem1(a));
        out.push(check_theorem2(a));
        if let Some(p) = &bundle.p_strict {
            out.push(check_theorem2_prime(a, p));
        }
        out.push(check_bounded_derivative_corollary(a));
        out.push(check_even_d_proposition(a));
        out.push(check_legacy_a2d(a));
    }
    if let Some(g) = &bundle.decay {
        out.push(check_decay_corollary(g));
    }
    if let Some(r) = &bundle.radial {
        out.push(check_radial_corollary(r));
    }
    if let Some(t) = &bundle.theorem213 {
        out.push(check_theorem213a(t));
    }
    if let Some(t) = &bundle.theorem213b {
        out.push(check_theorem213b(t));
    }
    if let Some((p, q)) = &bundle.dim1 {
        out.push(check_dim1(p, q));
    }
    if let Some(o) = &bundle.orders {
        out.push(check_legacy_a1d(o));
    }
    out.sort_by_key(|v| v.rule_id);
    out
}

/// `Certified` if any rule certifies, else `Inconclusive` if any rule is
/// inconclusive, else `CounterexampleExists` if one was found, else `NotApplicable`.
pub fn overall_status(verdicts: &[CriterionVerdict]) -> Status {
    let any = |s: Status| verdicts.iter().any(|v| v.status == s);
    if any(Status::Certified) {
        Status::Certified
    } else if any(Status::Inconclusive) {
        Status::Inconclusive
    } else if any(Status::CounterexampleExists) {
        Status::CounterexampleExists
    } else {
        Status::NotApplicable
    }
}
