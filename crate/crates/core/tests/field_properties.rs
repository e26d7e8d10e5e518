use num_complex::Complex64;
use proptest::prelude::*;
use wiener_core::criteria::EtaVector;
use wiener_core::field::{read_wfield, write_wfield, DifferenceSpec, SampledField};
use wiener_core::Exponent;

fn grid2(seed_vals: &[f64]) -> SampledField {
    SampledField::new(
        vec![-1.0, 0.5],
        vec![0.2, 0.25],
        vec![9, 7],
        seed_vals.iter().map(|&v| v.into()).collect(),
    )
    .unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 63)
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..2.5, 2)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-11 * (1.0 + a.norm() + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn differences_are_linear(a in values(), b in values(), x in point(), c in -2.0f64..2.0, u in 0.01f64..0.8, v in 0.01f64..0.8) {
        let (fa, fb) = (grid2(&a), grid2(&b));
        let sum = fa.combine(c.into(), &fb, 1.0.into()).unwrap();
        let spec = DifferenceSpec::new(EtaVector::ones(2).unwrap(), 2, vec![u, v]).unwrap();
        let lhs = sum.mixed_difference(&spec, &x).unwrap();
        let rhs = fa.mixed_difference(&spec, &x).unwrap() * c + fb.mixed_difference(&spec, &x).unwrap();
        prop_assert!(close(lhs, rhs));
    }

    #[test]
    fn derivatives_are_linear(a in values(), b in values(), c in -2.0f64..2.0) {
        let (fa, fb) = (grid2(&a), grid2(&b));
        let eta = EtaVector::ones(2).unwrap();
        let lhs = fa.combine(c.into(), &fb, 1.0.into()).unwrap().grid_derivative(&eta).unwrap();
        let rhs = fa.grid_derivative(&eta).unwrap().combine(c.into(), &fb.grid_derivative(&eta).unwrap(), 1.0.into()).unwrap();
        for (l, r) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!(close(*l, *r));
        }
    }

    #[test]
    fn axis_differences_commute(a in values(), x in point(), u in 0.01f64..0.8, v in 0.01f64..0.8) {
        let f = grid2(&a);
        let spec = DifferenceSpec::new(EtaVector::ones(2).unwrap(), 1, vec![u, v]).unwrap();
        let direct = f.mixed_difference(&spec, &x).unwrap();
        // axis 1 first, then axis 0, written out by hand
        let mut by_hand = Complex64::new(0.0, 0.0);
        for (s1, w1) in [(1.0, 1.0), (-1.0, -1.0)] {
            for (s0, w0) in [(1.0, 1.0), (-1.0, -1.0)] {
                by_hand += f.evaluate(&[x[0] + s0 * u, x[1] + s1 * v]) * (w0 * w1);
            }
        }
        prop_assert!(close(direct, by_hand));
    }

    #[test]
    fn norm_interpolation_inequality(a in values(), p0 in 1.0f64..2.0, gap in 0.1f64..3.0) {
        let f = grid2(&a);
        let p1 = p0 + gap;
        let lhs = f.lp_sum(p1);
        let rhs = f.sup_norm().powf(p1 - p0) * f.lp_sum(p0);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn wfield_round_trip(a in values(), b in values()) {
        let f = SampledField::new(
            vec![-1.0, 0.5], vec![0.2, 0.25], vec![9, 7],
            a.iter().zip(&b).map(|(x, y)| Complex64::new(*x, *y)).collect(),
        ).unwrap();
        let mut buf = Vec::new();
        write_wfield(&f, None, &mut buf).unwrap();
        prop_assert_eq!(read_wfield(buf.as_slice()).unwrap(), f);
    }
}

#[test]
fn difference_approaches_scaled_derivative() {
    let f = SampledField::from_fn(vec![-3.0, -3.0], vec![0.005, 0.005], vec![1201, 1201], |x| {
        ((-x[0] * x[0] - x[1] * x[1]).exp()).into()
    })
    .unwrap();
    let exact = |x: &[f64]| 4.0 * x[0] * x[1] * (-x[0] * x[0] - x[1] * x[1]).exp();
    let probe: Vec<[f64; 2]> = (0..40)
        .map(|i| [-1.5 + 0.075 * i as f64, 1.2 - 0.06 * i as f64])
        .collect();
    let mut errs = Vec::new();
    for u in [0.2, 0.1, 0.05] {
        let spec = DifferenceSpec::full(vec![u, u]).unwrap();
        let err = probe
            .iter()
            .map(|x| (f.mixed_difference(&spec, x).unwrap().re - 4.0 * u * u * exact(x)).abs() / (u * u))
            .fold(0.0, f64::max);
        errs.push(err);
    }
    // the scaled error shrinks at least linearly in the step
    assert!(errs[1] < 0.6 * errs[0] && errs[2] < 0.6 * errs[1], "{errs:?}");
}

#[test]
fn gaussian_l2_norm_in_two_dimensions() {
    let f = SampledField::from_fn(vec![-6.0, -6.0], vec![0.01, 0.01], vec![1201, 1201], |x| {
        ((-x[0] * x[0] - x[1] * x[1]).exp()).into()
    })
    .unwrap();
    // int e^{-2|x|^2} = pi/2
    let want = (std::f64::consts::PI / 2.0).sqrt();
    assert!((f.lp_norm(&Exponent::integer(2).unwrap()) - want).abs() < 1e-9);
}
