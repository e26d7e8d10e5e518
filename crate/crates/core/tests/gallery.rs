use num_complex::Complex64;
use proptest::prelude::*;
use wiener_core::criteria::{EtaVector, Witness};
use wiener_core::exponent::{rat, Rational};
use wiener_core::field::SampledField;
use wiener_core::gallery::*;
use wiener_core::Exponent;

fn rational() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn classification_is_scale_free(alpha in rational(), beta in rational(), k in rational(), d in 1usize..=3) {
        let p = ModelParams::with_default_cutoff(alpha.clone(), beta.clone(), d).unwrap();
        let q = ModelParams::with_default_cutoff(&alpha * &k, &beta * &k, d).unwrap();
        // a common factor can only move the alpha = 1 flag
        prop_assume!(alpha != rat(1, 1) && &alpha * &k != rat(1, 1));
        prop_assert_eq!(classify_m(&p), classify_m(&q));
    }

    #[test]
    fn modulus_ignores_the_phase(alpha in rational(), beta in rational(), x in prop::collection::vec(-4.0f64..4.0, 2)) {
        let p = ModelParams::with_default_cutoff(alpha, beta.clone(), 2).unwrap();
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let want = cutoff_theta(r, 1.0, 2.0).unwrap() * r.powf(-wiener_core::exponent::rational_to_f64(&beta));
        let got = evaluate_m(&p, &x).norm();
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want));
    }
}

#[test]
fn thousand_counterexample_witnesses() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let p = Exponent::from_ratio(rng.gen_range(1..400), rng.gen_range(1..60)).unwrap_or(Exponent::one());
        let q = Exponent::from_ratio(rng.gen_range(2..400), rng.gen_range(1..60));
        let Ok(q) = q else { continue };
        if q == Exponent::one() || p.reciprocal() + q.reciprocal() >= Rational::from_integer(1.into()) {
            continue;
        }
        let (alpha, beta) = construct_counterexample_params(&p, &q).unwrap();
        assert!(Witness::Model { alpha, beta, p, q }.is_valid());
        checked += 1;
    }
}

fn check_derivatives(f: &GalleryFunction, lo: &[f64], hi: &[f64], n: usize, tol: f64) {
    let d = f.d;
    let grid = SampledField::sample(f, lo, hi, &vec![n; d]).unwrap();
    for idx in 1..(1usize << d) {
        let eta = EtaVector::from_index(d, idx).unwrap();
        let numeric = grid.grid_derivative(&eta).unwrap();
        let mut worst: f64 = 0.0;
        for i in (0..numeric.len()).step_by(97) {
            let x = numeric.point(i);
            let exact = f.derivative(&eta, &x).unwrap();
            worst = worst.max((numeric.values()[i] - exact).norm());
        }
        assert!(worst < tol, "{} eta {eta}: {worst}", f.name);
    }
}

#[test]
fn closed_form_derivatives_match_grid_derivatives() {
    check_derivatives(
        &GalleryFunction::parse("gaussian", 1).unwrap(),
        &[-4.0],
        &[4.0],
        4001,
        1e-5,
    );
    check_derivatives(
        &GalleryFunction::parse("gaussian_nd", 2).unwrap(),
        &[-3.0, -3.0],
        &[3.0, 3.0],
        601,
        1e-3,
    );
    check_derivatives(
        &GalleryFunction::parse("m:alpha=3/2,beta=1", 1).unwrap(),
        &[0.5],
        &[6.0],
        20001,
        1e-4,
    );
    check_derivatives(
        &GalleryFunction::parse("m:alpha=2,beta=5/2,a=1,b=2", 2).unwrap(),
        &[0.2, 0.3],
        &[3.0, 2.5],
        801,
        2e-2,
    );
}

#[test]
fn derivative_error_is_second_order() {
    let m = GalleryFunction::parse("m:alpha=2,beta=1", 1).unwrap();
    let eta = EtaVector::ones(1).unwrap();
    let err = |n: usize| {
        let grid = SampledField::sample(&m, &[2.5], &[4.0], &[n]).unwrap();
        let d = grid.grid_derivative(&eta).unwrap();
        (1..n - 1)
            .map(|i| (d.values()[i] - m.derivative(&eta, &d.point(i)).unwrap()).norm())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(1501), err(3001));
    assert!(coarse / fine > 3.5, "{coarse} {fine}");
}

#[test]
fn hat_and_gaussian_are_in_a() {
    for name in ["gaussian", "hat", "gaussian_nd", "hat_nd"] {
        let f = GalleryFunction::parse(name, 2).unwrap();
        assert_eq!(f.status(), KnownStatus::InA);
    }
    let hat = GalleryFunction::parse("hat", 1).unwrap();
    assert_eq!(hat.value(&[0.25]), Complex64::new(0.75, 0.0));
    assert_eq!(
        hat.derivative(&EtaVector::ones(1).unwrap(), &[0.25]).unwrap(),
        Complex64::new(-1.0, 0.0)
    );
}
