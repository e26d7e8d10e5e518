use num_traits::{One, Zero};
use proptest::prelude::*;
use wiener_core::criteria::*;
use wiener_core::exponent::{rat, Rational};
use wiener_core::gallery::construct_counterexample_params;
use wiener_core::Exponent;

fn e(n: i64, d: i64) -> Exponent {
    Exponent::from_ratio(n, d).unwrap()
}

/// Exponents strictly above 1 given as `1 + a/b`.
fn above_one() -> impl Strategy<Value = Exponent> {
    (1i64..30, 1i64..30).prop_map(|(a, b)| e(a + b, b))
}

fn at_least_one() -> impl Strategy<Value = Exponent> {
    (0i64..30, 1i64..30).prop_map(|(a, b)| e(a + b, b))
}

fn assignment(d: usize) -> impl Strategy<Value = ExponentAssignment> {
    (at_least_one(), prop::collection::vec(above_one(), (1 << d) - 1)).prop_map(move |(p0, rest)| {
        let mut table = vec![p0];
        table.extend(rest);
        ExponentAssignment::new(d, table, &[]).unwrap()
    })
}

fn statuses(v: &[CriterionVerdict]) -> Vec<(RuleId, Status)> {
    v.iter().map(|v| (v.rule_id, v.status)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn theorem1_is_monotone(a in (1usize..=3).prop_flat_map(assignment), idx in 0usize..8, shrink in 1i64..5) {
        let eta = EtaVector::from_index(a.dim(), idx % (1 << a.dim())).unwrap();
        // 1/p -> 1/p + (1 - 1/p) * shrink/10 keeps p >= 1 and p > 1 off zero
        let r = a.get(eta).reciprocal();
        let new_r = &r + (Rational::one() - &r) * rat(shrink, 10);
        let b = a.with(eta, Exponent::from_reciprocal(new_r).unwrap()).unwrap();
        if check_theorem1(&a).is_certified() {
            prop_assert!(check_theorem1(&b).is_certified());
        }
    }

    #[test]
    fn theorem2_is_monotone_in_p0(a in (1usize..=3).prop_flat_map(assignment), shrink in 1i64..10) {
        let r = a.p0().reciprocal();
        let new_r = &r + (Rational::one() - &r) * rat(shrink, 10);
        let b = a.with(EtaVector::zero(a.dim()).unwrap(), Exponent::from_reciprocal(new_r).unwrap()).unwrap();
        if check_theorem2(&a).is_certified() {
            prop_assert!(check_theorem2(&b).is_certified());
        }
    }

    #[test]
    fn verdicts_ignore_common_factors(a in (1usize..=3).prop_flat_map(assignment), k in 2i64..50) {
        let b = a.rescaled(k);
        let bundle = |a: ExponentAssignment| RuleBundle { assignment: Some(a), ..Default::default() };
        prop_assert_eq!(run_all(&bundle(a)), run_all(&bundle(b)));
    }

    #[test]
    fn dim1_agrees_with_theorem1(p in at_least_one(), q in above_one()) {
        let a = ExponentAssignment::new(1, vec![p.clone(), q.clone()], &[]).unwrap();
        let t1 = check_theorem1(&a);
        let d1 = check_dim1(&p, &q);
        let s = p.reciprocal() + q.reciprocal();
        if t1.is_certified() {
            prop_assert_eq!(d1.status, Status::Certified);
        }
        if s != Rational::one() {
            prop_assert_eq!(t1.is_certified(), d1.is_certified());
        }
        if d1.status == Status::CounterexampleExists {
            prop_assert!(d1.witness.as_ref().unwrap().is_valid());
        }
    }

    #[test]
    fn certified_means_positive_margin(a in (1usize..=3).prop_flat_map(assignment)) {
        for v in run_all(&RuleBundle { assignment: Some(a), ..Default::default() }) {
            if v.is_certified() {
                for c in v.conditions.iter().filter(|c| c.relation.is_strict()) {
                    prop_assert!(c.holds && c.slack() > Rational::zero(), "{:?}", v);
                }
            }
        }
    }

    #[test]
    fn counterexample_witnesses_are_valid(pn in 1i64..200, pd in 1i64..50, qn in 1i64..200, qd in 1i64..50) {
        let p = e(pn + pd, pd);
        let q = e(qn + qd, qd);
        let s = p.reciprocal() + q.reciprocal();
        let out = construct_counterexample_params(&p, &q);
        if s < Rational::one() {
            let (alpha, beta) = out.unwrap();
            let w = Witness::Model { alpha, beta, p, q };
            prop_assert!(w.is_valid());
        } else {
            prop_assert!(out.is_err());
        }
    }
}

#[test]
fn theorem1_strictness_flips_at_equality() {
    // p_0 = 3/2, conjugate 3: equality on eta = (1,1), slack elsewhere
    let a = ExponentAssignment::new(2, vec![e(3, 2), e(2, 1), e(2, 1), e(3, 1)], &[]).unwrap();
    let v = check_theorem1(&a);
    assert!(!v.is_certified());
    assert_eq!(v.margin, Some(Rational::zero()));
    let b = a.with(EtaVector::ones(2).unwrap(), e(299, 100)).unwrap();
    assert!(check_theorem1(&b).is_certified());
}

#[test]
fn non_strict_bounds_hold_at_equality() {
    // the upper inequality of theorem 2.13 a) is attained
    let t = Theorem213Params::new(3, 2, e(2, 1), vec![e(3, 2); 3]).unwrap();
    assert!(check_theorem213a(&t).is_certified());
    // sum over eta != 0 equal to 2^{d-1} in theorem 2
    let a = ExponentAssignment::uniform(2, e(1, 1), e(3, 2)).unwrap();
    assert!(check_theorem2(&a).is_certified());
}

#[test]
fn theorem2_is_not_monotone_in_the_derivative_exponents() {
    // lowering p_eta for eta != 0 can push the second sum past 2^{d-1}
    let a = ExponentAssignment::uniform(3, e(1, 1), e(7, 4)).unwrap();
    assert!(check_theorem2(&a).is_certified());
    let b = ExponentAssignment::uniform(3, e(1, 1), e(3, 2)).unwrap();
    assert!(!check_theorem2(&b).is_certified());
}

#[test]
fn rule_orders_are_stable() {
    let a = ExponentAssignment::uniform(2, e(1, 1), e(2, 1)).unwrap();
    let v = run_all(&RuleBundle {
        assignment: Some(a),
        decay: Some(DecayAssignment::uniform(2, rat(11, 10)).unwrap()),
        ..Default::default()
    });
    let ids: Vec<&str> = v.iter().map(|v| v.rule_id.as_str()).collect();
    assert_eq!(
        ids,
        ["thm1", "thm2", "cor-bounded", "prop-even", "cor-decay", "legacy-a2d"]
    );
    assert_eq!(statuses(&v)[0], (RuleId::Thm1, Status::Certified));
}
