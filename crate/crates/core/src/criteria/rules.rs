use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::types::*;
use crate::exponent::{format_rational, int, Exponent, Rational};
use crate::gallery::construct_counterexample_params;

const NOTE_C0: &str = "declared: f in C_0(R^d); f and D^eta f (eta != 1) locally absolutely continuous \
                       on (R\\{0})^d in each variable";
const NOTE_C0_1D: &str = "declared: f in C_0(R) and locally absolutely continuous";

fn pow2(k: usize) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

fn half_lattice(d: usize) -> Rational {
    pow2(d - 1)
}

fn label_recip(eta: EtaVector) -> String {
    format!("1/p_{eta}")
}

fn finish(mut v: CriterionVerdict, certified: bool) -> CriterionVerdict {
    v.status = if certified {
        Status::Certified
    } else {
        Status::NotApplicable
    };
    v
}

fn require_finite_derivatives(a: &ExponentAssignment, rule: RuleId) -> Option<CriterionVerdict> {
    if !a.p0().is_finite() {
        return Some(CriterionVerdict::not_applicable(rule, "requires 1 <= p_0 < inf"));
    }
    if let Some((eta, _)) = a.iter().skip(1).find(|(_, p)| !p.is_finite()) {
        return Some(CriterionVerdict::not_applicable(
            rule,
            format!("requires 1 < p_eta < inf for every eta != 0 (p_{eta} = inf)"),
        ));
    }
    None
}

/// Pairwise condition `1/p_0 + 1/p_eta > 1` for every `eta != 0`.
pub fn check_theorem1(a: &ExponentAssignment) -> CriterionVerdict {
    let rule = RuleId::Thm1;
    if let Some(v) = require_finite_derivatives(a, rule) {
        return v;
    }
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let r0 = a.p0().reciprocal();
    for (eta, p) in a.iter().skip(1) {
        v.conditions.push(Condition::new(
            format!("1/p_0 + {}", label_recip(eta)),
            &r0 + p.reciprocal(),
            Relation::Gt,
            Rational::one(),
        ));
    }
    v.margin = v.conditions.iter().map(Condition::slack).min();
    v.notes.push(NOTE_C0.into());
    v.notes
        .push("sharp in the eta = 1 condition; sharpness for other eta unknown".into());
    let ok = v.conditions.iter().all(|c| c.holds);
    finish(v, ok)
}

/// All-derivative interplay: `sum 1/p_eta > 2^{d-1}` together with
/// `sum_{eta != 0} 1/p_eta <= 2^{d-1}`, or for `d = 2` alternatively
/// `1/p_0 + 1/p_1 > 1`.
pub fn check_theorem2(a: &ExponentAssignment) -> CriterionVerdict {
    let rule = RuleId::Thm2;
    if let Some(v) = require_finite_derivatives(a, rule) {
        return v;
    }
    let d = a.dim();
    let bound = half_lattice(d);
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let total = Condition::new(
        "sum_{0<=eta<=1} 1/p_eta",
        a.reciprocal_sum(),
        Relation::Gt,
        bound.clone(),
    );
    let rest = Condition::new("sum_{eta!=0} 1/p_eta", a.reciprocal_sum_nonzero(), Relation::Le, bound);
    v.margin = Some(total.slack());
    let mut branch = rest.holds.then_some("condOtr1");
    v.conditions.push(total.clone());
    v.conditions.push(rest);
    if branch.is_none() && d == 2 {
        let alt = Condition::new(
            "1/p_0 + 1/p_1 (d = 2 alternative)",
            a.p0().reciprocal() + a.p_ones().reciprocal(),
            Relation::Gt,
            Rational::one(),
        );
        branch = alt.holds.then_some("remark-d2");
        v.conditions.push(alt);
    }
    let ok = total.holds && branch.is_some();
    if ok {
        v.branch = branch.map(String::from);
    }
    v.notes.push(NOTE_C0.into());
    v.notes
        .push("sharp only for certain p_eta; violations are reported as not certified".into());
    finish(v, ok)
}

/// Equality form: `f in L_p` for some `p < p_0 <= inf` and
/// `sum 1/p_eta = 2^{d-1}` with `p_0` as the upper exponent.
pub fn check_theorem2_prime(a: &ExponentAssignment, p_strict: &Exponent) -> CriterionVerdict {
    let rule = RuleId::Thm2Prime;
    if !p_strict.is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires a finite lower exponent p");
    }
    if p_strict >= a.p0() {
        return CriterionVerdict::not_applicable(
            rule,
            format!("requires p < p_0, got p = {p_strict} and p_0 = {}", a.p0()),
        );
    }
    if let Some((eta, _)) = a.iter().skip(1).find(|(_, p)| !p.is_finite()) {
        return CriterionVerdict::not_applicable(
            rule,
            format!("requires 1 < p_eta < inf for every eta != 0 (p_{eta} = inf)"),
        );
    }
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let lower = Condition::new(
        "1/p (lower exponent) vs 1/p_0",
        p_strict.reciprocal(),
        Relation::Gt,
        a.p0().reciprocal(),
    );
    let eq = Condition::new(
        "sum_{0<=eta<=1} 1/p_eta",
        a.reciprocal_sum(),
        Relation::Eq,
        half_lattice(a.dim()),
    );
    v.margin = Some(&eq.lhs - &eq.rhs);
    let ok = eq.holds && lower.holds;
    v.conditions.push(lower);
    v.conditions.push(eq);
    v.notes.push(NOTE_C0.into());
    finish(v, ok)
}

/// `D^eta f in L_inf` for `|eta| <= d/2` plus `sum 1/p_eta > 2^{d-1}`.
/// Flagged entries with `p_eta = inf` contribute zero. `eta = 0` is bounded
/// by the `C_0` hypothesis.
pub fn check_bounded_derivative_corollary(a: &ExponentAssignment) -> CriterionVerdict {
    let rule = RuleId::CorBounded;
    let d = a.dim();
    if !a.p0().is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires 1 <= p_0 < inf");
    }
    let missing: Vec<String> = a
        .iter()
        .filter(|(eta, _)| !eta.is_zero() && 2 * eta.weight() <= d && !a.is_bounded(*eta))
        .map(|(eta, _)| eta.to_string())
        .collect();
    if !missing.is_empty() {
        return CriterionVerdict::not_applicable(
            rule,
            format!(
                "requires D^eta f in L_inf for |eta| <= d/2; not declared for {}",
                missing.join(",")
            ),
        );
    }
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let total = Condition::new(
        "sum_{0<=eta<=1} 1/p_eta",
        a.reciprocal_sum(),
        Relation::Gt,
        half_lattice(d),
    );
    v.margin = Some(total.slack());
    let ok = total.holds;
    v.conditions.push(total);
    v.notes.push(NOTE_C0.into());
    finish(v, ok)
}

/// Even-`d` refinement: bounded derivatives for `|eta| <= d/2 - 1`,
/// `1/p_0 + 1/p_1 > 1`, and `sum 1/p_eta > 2^{d-1}`.
pub fn check_even_d_proposition(a: &ExponentAssignment) -> CriterionVerdict {
    let rule = RuleId::PropEven;
    let d = a.dim();
    if d % 2 == 1 {
        return CriterionVerdict::not_applicable(rule, format!("requires even d, got d = {d}"));
    }
    if !a.p0().is_finite() || !a.p_ones().is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires finite p_0 and p_1");
    }
    let missing: Vec<String> = a
        .iter()
        .filter(|(eta, _)| !eta.is_zero() && 2 * eta.weight() + 2 <= d && !a.is_bounded(*eta))
        .map(|(eta, _)| eta.to_string())
        .collect();
    if !missing.is_empty() {
        return CriterionVerdict::not_applicable(
            rule,
            format!(
                "requires D^eta f in L_inf for |eta| <= d/2 - 1; not declared for {}",
                missing.join(",")
            ),
        );
    }
    let side = Condition::new(
        "1/p_0 + 1/p_1",
        a.p0().reciprocal() + a.p_ones().reciprocal(),
        Relation::Gt,
        Rational::one(),
    );
    if !side.holds {
        let mut v = CriterionVerdict::not_applicable(rule, "side condition 1/p_0 + 1/p_1 > 1 fails");
        v.conditions.push(side);
        return v;
    }
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let total = Condition::new(
        "sum_{0<=eta<=1} 1/p_eta",
        a.reciprocal_sum(),
        Relation::Gt,
        half_lattice(d),
    );
    v.margin = Some(total.slack());
    let ok = total.holds;
    v.conditions.push(side);
    v.conditions.push(total);
    v.notes.push(NOTE_C0.into());
    finish(v, ok)
}

/// Pointwise decay `|D^chi f| <= C (1+|x|)^{-gamma_chi}` with `sum gamma_chi > d 2^{d-1}`.
pub fn check_decay_corollary(g: &DecayAssignment) -> CriterionVerdict {
    let d = g.dim();
    let mut v = CriterionVerdict::new(RuleId::CorDecay, Status::NotApplicable);
    let sum: Rational = g.gamma().iter().sum();
    let c = Condition::new(
        "sum_{0<=chi<=1} gamma_chi",
        sum,
        Relation::Gt,
        int(d as i64) * half_lattice(d),
    );
    v.margin = Some(c.slack());
    let ok = c.holds;
    v.conditions.push(c);
    finish(v, ok)
}

/// Radial functions with exponents depending only on `|eta|`.
pub fn check_radial_corollary(r: &RadialAssignment) -> CriterionVerdict {
    let rule = RuleId::CorRadial;
    if !r.smoothness_declared {
        return CriterionVerdict::not_applicable(rule, "profile smoothness and decay hypotheses were not declared");
    }
    let d = r.dim();
    let p = r.p();
    let weight = |j: usize| Rational::from_integer(binomial(BigInt::from(d), BigInt::from(j)));
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let sum: Rational = (0..=d).map(|j| weight(j) * p[j].reciprocal()).sum();
    let total = Condition::new("sum_j C(d,j)/p_j", sum, Relation::Gt, half_lattice(d));
    v.margin = Some(total.slack());
    let mut ok = total.holds;
    v.conditions.push(total);
    if d.is_multiple_of(2) {
        let pair = Condition::new(
            "1/p_0 + 1/p_d",
            p[0].reciprocal() + p[d].reciprocal(),
            Relation::Gt,
            Rational::one(),
        );
        let h = d / 2;
        let alt_sum: Rational = weight(h) * p[h].reciprocal() / int(2)
            + (h + 1..=d).map(|j| weight(j) * p[j].reciprocal()).sum::<Rational>();
        let alt = Condition::new(
            "C(d,d/2)/(2 p_{d/2}) + sum_{j>d/2} C(d,j)/p_j",
            alt_sum,
            Relation::Le,
            half_lattice(d),
        );
        let branch = if pair.holds {
            Some("condPoR2")
        } else if alt.holds {
            Some("alternative")
        } else {
            None
        };
        ok &= branch.is_some();
        if ok {
            v.branch = branch.map(String::from);
        }
        v.conditions.push(pair);
        v.conditions.push(alt);
    }
    v.notes.push(
        "declared: radial profile f_0 with f_0^(s) continuous on (0,inf) and t^s f_0^(s)(t) -> 0, \
         0 <= s <= (d-1)/2"
            .into(),
    );
    v.notes.push(NOTE_C0.into());
    finish(v, ok)
}

/// Pure derivatives of order `r > d/2`:
/// `r < (2r-d)/p_0 + sum 1/p_j <= (2r-d)/p_0 + r`.
pub fn check_theorem213a(t: &Theorem213Params) -> CriterionVerdict {
    let rule = RuleId::Thm213a;
    let (d, r) = (t.d as i64, t.r as i64);
    if 2 * r <= d {
        return CriterionVerdict::not_applicable(rule, format!("requires r > d/2, got r = {r}, d = {d}"));
    }
    if !t.p0.is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires 1 <= p_0 < inf");
    }
    if let Some(j) = t.p.iter().position(|p| !p.is_open_interior()) {
        return CriterionVerdict::not_applicable(rule, format!("requires 1 < p_{} < inf", j + 1));
    }
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let base = int(2 * r - d) * t.p0.reciprocal();
    let middle = &base + t.p.iter().map(Exponent::reciprocal).sum::<Rational>();
    let left = Condition::new("(2r-d)/p_0 + sum 1/p_j", middle.clone(), Relation::Gt, int(r));
    let right = Condition::new("(2r-d)/p_0 + sum 1/p_j", middle, Relation::Le, &base + int(r));
    v.margin = Some(left.slack());
    let ok = left.holds && right.holds;
    v.conditions.push(left);
    v.conditions.push(right);
    v.notes
        .push("declared: f in C_0(R^d), d^{r-1} f / dx_j^{r-1} locally absolutely continuous in x_j".into());
    finish(v, ok)
}

/// Sharpness companion: a counterexample exists when `(2r-d)/p + d/q < r`.
pub fn check_theorem213b(t: &Theorem213bParams) -> CriterionVerdict {
    let rule = RuleId::Thm213b;
    if !t.p.is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires 1 <= p < inf");
    }
    if !t.q.is_open_interior() {
        return CriterionVerdict::not_applicable(rule, "requires 1 < q < inf");
    }
    let (d, r) = (t.d as i64, t.r as i64);
    let value = int(2 * r - d) * t.p.reciprocal() + int(d) * t.q.reciprocal();
    let c = Condition::new("(2r-d)/p + d/q", value, Relation::Lt, int(r));
    let slack = c.slack();
    let mut v = CriterionVerdict::new(rule, Status::Inconclusive);
    v.margin = Some(slack.clone());
    if c.holds {
        v.status = Status::CounterexampleExists;
        v.witness = Some(Witness::Region {
            inequality: format!("(2r-d)/p + d/q < r with d={d}, r={r}, p={}, q={}", t.p, t.q),
            slack,
        });
    }
    v.conditions.push(c);
    v
}

/// One-dimensional criterion with its sharpness half: certified when
/// `1/p + 1/q > 1` (or inside `1 <= p <= 2`, `1 < q <= 2`), counterexample
/// when `1/p + 1/q < 1`, inconclusive on the remaining boundary.
pub fn check_dim1(p: &Exponent, q: &Exponent) -> CriterionVerdict {
    let rule = RuleId::Thm41;
    if !p.is_finite() {
        return CriterionVerdict::not_applicable(rule, "requires 1 <= p < inf");
    }
    if !q.is_open_interior() {
        return CriterionVerdict::not_applicable(rule, "requires 1 < q < inf");
    }
    let two = int(2);
    let pv = p.value().expect("finite");
    let qv = q.value().expect("finite");
    let s = p.reciprocal() + q.reciprocal();
    let mut v = CriterionVerdict::new(rule, Status::Inconclusive);
    v.notes.push(NOTE_C0_1D.into());
    let sum = Condition::new("1/p + 1/q", s.clone(), Relation::Gt, Rational::one());
    if *pv <= two && *qv <= two {
        v.status = Status::Certified;
        v.branch = Some("thm-a1".into());
        v.conditions
            .push(Condition::new("p", pv.clone(), Relation::Le, two.clone()));
        v.conditions.push(Condition::new("q", qv.clone(), Relation::Le, two));
        let strict = Condition::new("q", qv.clone(), Relation::Gt, Rational::one());
        v.margin = Some(strict.slack());
        v.conditions.push(strict);
        v.conditions.push(sum);
        return v;
    }
    if sum.holds {
        v.status = Status::Certified;
        v.branch = Some("thm4.1a".into());
        v.margin = Some(sum.slack());
        v.conditions.push(sum);
        return v;
    }
    let below = Condition::new("1/p + 1/q", s.clone(), Relation::Lt, Rational::one());
    if below.holds {
        let (alpha, beta) = construct_counterexample_params(p, q).expect("1/p + 1/q < 1 admits a witness");
        v.status = Status::CounterexampleExists;
        v.branch = Some("thm4.1b".into());
        v.margin = Some(below.slack());
        v.witness = Some(Witness::Model {
            alpha,
            beta,
            p: p.clone(),
            q: q.clone(),
        });
        v.conditions.push(below);
        return v;
    }
    v.margin = Some(Rational::zero());
    v.conditions.push(sum);
    v.notes.push(format!(
        "boundary 1/p + 1/q = {} outside 1 <= p <= 2, 1 < q <= 2 is open",
        format_rational(&s)
    ));
    v
}

/// Older criteria kept for comparison.
#[derive(Clone, Debug)]
pub enum LegacyInput {
    PureOrders(PureDerivativeOrders),
    Assignment(ExponentAssignment),
}

pub fn check_legacy_rules(input: &LegacyInput) -> CriterionVerdict {
    match input {
        LegacyInput::PureOrders(o) => check_legacy_a1d(o),
        LegacyInput::Assignment(a) => check_legacy_a2d(a),
    }
}

/// `f` and `d^{beta_j} f / dx_j^{beta_j}` in `L^2` with `sum 1/beta_j < 2`.
pub fn check_legacy_a1d(o: &PureDerivativeOrders) -> CriterionVerdict {
    let mut v = CriterionVerdict::new(RuleId::LegacyA1d, Status::NotApplicable);
    let sum: Rational = o
        .beta()
        .iter()
        .map(|&b| Rational::new(BigInt::one(), BigInt::from(b)))
        .sum();
    let c = Condition::new("sum 1/beta_j", sum, Relation::Lt, int(2));
    v.margin = Some(c.slack());
    let ok = c.holds;
    v.conditions.push(c);
    v.notes
        .push("declared: f and each pure derivative of order beta_j in L^2(R^d)".into());
    finish(v, ok)
}

/// `f in L^1` and every `D^eta f` (`eta != 0`) in one common `L^p`, `1 < p <= 2`.
pub fn check_legacy_a2d(a: &ExponentAssignment) -> CriterionVerdict {
    let rule = RuleId::LegacyA2d;
    if *a.p0() != Exponent::one() {
        return CriterionVerdict::not_applicable(rule, "requires f in L^1 (p_0 = 1)");
    }
    let mut rest = a.iter().skip(1).map(|(_, p)| p);
    let first = rest.next().expect("d >= 1 gives at least one derivative").clone();
    if rest.any(|p| *p != first) {
        return CriterionVerdict::not_applicable(rule, "requires one common p for all eta != 0");
    }
    let Some(pv) = first.value() else {
        return CriterionVerdict::not_applicable(rule, "requires finite p");
    };
    let mut v = CriterionVerdict::new(rule, Status::NotApplicable);
    let lo = Condition::new("p", pv.clone(), Relation::Gt, Rational::one());
    let hi = Condition::new("p", pv.clone(), Relation::Le, int(2));
    v.margin = Some(lo.slack());
    if !hi.holds {
        v.notes.push(format!("p = {first} outside (1, 2]"));
    }
    let ok = lo.holds && hi.holds;
    v.conditions.push(lo);
    v.conditions.push(hi);
    finish(v, ok)
}
