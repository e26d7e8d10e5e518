//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wiener_core::bernstein::{bernstein_sum_1d, bernstein_sum_nd, dyadic_step, ScaleRange, TailSettings, TailVerdict};
use wiener_core::criteria::*;
use wiener_core::exponent::{int, parse_rational, rat};
use wiener_core::field::SampledField;
use wiener_core::fourier::{a_norm_trend, truncated_fourier_l1, TrendThresholds};
use wiener_core::gallery::{construct_counterexample_params, GalleryFunction};
use wiener_core::hardy::{hardy_check, lemma_star_check};
use wiener_core::{Exponent, Rational};

const LEMMA_TOL: f64 = 1e-2;
const INDICATOR_TOL: f64 = 1e-4;
const PRODUCT_REL_TOL: f64 = 1e-6;
const TERM_REL_TOL: f64 = 1e-2;
const L1_REL_TOL: f64 = 2e-2;
const PARSEVAL_TOL: f64 = 1e-6;
const SLOPE_IN_A: f64 = 0.05;
const SLOPE_NOT_IN_A: f64 = 0.1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ex(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn exs(list: &[&str]) -> Vec<Exponent> {
    list.iter().map(|s| ex(s)).collect()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

/// Exponent table in lexicographic eta order, with the listed etas declared bounded.
fn table(d: usize, p: &[&str], bounded: &[&str]) -> ExponentAssignment {
    let flags: Vec<EtaVector> = bounded.iter().map(|b| b.parse().unwrap()).collect();
    ExponentAssignment::new(d, exs(p), &flags).unwrap()
}

fn uniform(d: usize, p0: &str, rest: &str) -> ExponentAssignment {
    ExponentAssignment::uniform(d, ex(p0), ex(rest)).unwrap()
}

fn orders(beta: &[u32]) -> LegacyInput {
    LegacyInput::PureOrders(PureDerivativeOrders::new(beta.to_vec()).unwrap())
}

fn decay(d: usize, gamma: &[&str]) -> DecayAssignment {
    DecayAssignment::new(d, gamma.iter().map(|g| q(g)).collect()).unwrap()
}

fn radial(p: &[&str], smooth: bool) -> RadialAssignment {
    RadialAssignment::new(p.len() - 1, exs(p), smooth).unwrap()
}

fn t213a(d: usize, r: u32, p0: &str, p: &[&str]) -> Theorem213Params {
    Theorem213Params::new(d, r, ex(p0), exs(p)).unwrap()
}

fn t213b(d: usize, r: u32, p: &str, q: &str) -> Theorem213bParams {
    Theorem213bParams::new(d, r, ex(p), ex(q)).unwrap()
}

fn truth_table() -> Outcome {
    use Status::*;
    let na = NotApplicable;
    let ce = CounterexampleExists;
    let inc = Inconclusive;
    let ok = Certified;
    let rows: Vec<(&str, CriterionVerdict, Status)> = vec![
        // d = 1
        ("d1 thm1 (1,2)", check_theorem1(&uniform(1, "1", "2")), ok),
        ("d1 thm1 (3,2)", check_theorem1(&uniform(1, "3", "2")), na),
        ("d1 thm1 (2,2)", check_theorem1(&uniform(1, "2", "2")), na),
        ("d1 line (1,2)", check_dim1(&ex("1"), &ex("2")), ok),
        ("d1 line (2,2)", check_dim1(&ex("2"), &ex("2")), ok),
        ("d1 line (2,3/2)", check_dim1(&ex("2"), &ex("3/2")), ok),
        ("d1 line (4,4)", check_dim1(&ex("4"), &ex("4")), ce),
        ("d1 line (3,3/2)", check_dim1(&ex("3"), &ex("3/2")), inc),
        ("d1 line (3/2,3)", check_dim1(&ex("3/2"), &ex("3")), inc),
        ("d1 line (5,5/4)", check_dim1(&ex("5"), &ex("5/4")), inc),
        ("d1 thm2 (1,2)", check_theorem2(&uniform(1, "1", "2")), ok),
        ("d1 thm2 (2,2)", check_theorem2(&uniform(1, "2", "2")), na),
        (
            "d1 thm2' (2,2) s=1",
            check_theorem2_prime(&uniform(1, "2", "2"), &ex("1")),
            ok,
        ),
        (
            "d1 thm2' (2,3) s=1",
            check_theorem2_prime(&uniform(1, "2", "3"), &ex("1")),
            na,
        ),
        (
            "d1 thm2' (2,2) s=3",
            check_theorem2_prime(&uniform(1, "2", "2"), &ex("3")),
            na,
        ),
        ("d1 legacy beta=1", check_legacy_rules(&orders(&[1])), ok),
        ("d1 decay (1,1)", check_decay_corollary(&decay(1, &["1", "1"])), ok),
        (
            "d1 decay (1/4,1/4)",
            check_decay_corollary(&decay(1, &["1/4", "1/4"])),
            na,
        ),
        ("d1 213b r=1 (3,3)", check_theorem213b(&t213b(1, 1, "3", "3")), ce),
        ("d1 213b r=1 (2,2)", check_theorem213b(&t213b(1, 1, "2", "2")), inc),
        (
            "d1 radial (2,2)",
            check_radial_corollary(&radial(&["2", "2"], true)),
            na,
        ),
        (
            "d1 radial (1,2) smooth",
            check_radial_corollary(&radial(&["1", "2"], true)),
            ok,
        ),
        (
            "d1 radial (1,2) rough",
            check_radial_corollary(&radial(&["1", "2"], false)),
            na,
        ),
        // d = 2, tables in the order p00, p01, p10, p11
        ("d2 thm1 (1,2,2,2)", check_theorem1(&uniform(2, "1", "2")), ok),
        ("d2 thm1 all 2", check_theorem1(&uniform(2, "2", "2")), na),
        (
            "d2 thm1 (2,2,2,4/3)",
            check_theorem1(&table(2, &["2", "2", "2", "4/3"], &[])),
            na,
        ),
        ("d2 thm2 (1,2,2,2)", check_theorem2(&uniform(2, "1", "2")), ok),
        ("d2 thm2 all 2", check_theorem2(&uniform(2, "2", "2")), na),
        ("d2 thm2 (1,3/2,3/2,3/2)", check_theorem2(&uniform(2, "1", "3/2")), ok),
        (
            "d2 thm2 (2,2,2,4/3)",
            check_theorem2(&table(2, &["2", "2", "2", "4/3"], &[])),
            ok,
        ),
        ("d2 thm2 (1,5/4,5/4,5/4)", check_theorem2(&uniform(2, "1", "5/4")), ok),
        ("d2 thm2 (2,5/4,5/4,5/4)", check_theorem2(&uniform(2, "2", "5/4")), ok),
        (
            "d2 thm2 (3,6/5,6/5,3)",
            check_theorem2(&table(2, &["3", "6/5", "6/5", "3"], &[])),
            ok,
        ),
        (
            "d2 thm2 (4,11/10,11/10,4)",
            check_theorem2(&table(2, &["4", "11/10", "11/10", "4"], &[])),
            na,
        ),
        (
            "d2 thm2' (inf,2,2,2) s=4",
            check_theorem2_prime(&uniform(2, "inf", "2"), &ex("4")),
            na,
        ),
        (
            "d2 thm2' all 2 s=1",
            check_theorem2_prime(&uniform(2, "2", "2"), &ex("1")),
            ok,
        ),
        (
            "d2 bounded (1,inf,inf,2)",
            check_bounded_derivative_corollary(&table(2, &["1", "inf", "inf", "2"], &["00", "01", "10"])),
            na,
        ),
        (
            "d2 bounded (1,3/2,3/2,2)",
            check_bounded_derivative_corollary(&table(2, &["1", "3/2", "3/2", "2"], &["00", "01", "10"])),
            ok,
        ),
        (
            "d2 bounded no flags",
            check_bounded_derivative_corollary(&uniform(2, "1", "2")),
            na,
        ),
        (
            "d2 even (1,4,4,2)",
            check_even_d_proposition(&table(2, &["1", "4", "4", "2"], &[])),
            na,
        ),
        (
            "d2 even (1,3,3,2)",
            check_even_d_proposition(&table(2, &["1", "3", "3", "2"], &[])),
            ok,
        ),
        (
            "d2 even (2,3/2,3/2,2)",
            check_even_d_proposition(&table(2, &["2", "3/2", "3/2", "2"], &[])),
            na,
        ),
        (
            "d2 decay all 11/10",
            check_decay_corollary(&decay(2, &["11/10"; 4])),
            ok,
        ),
        ("d2 decay all 1", check_decay_corollary(&decay(2, &["1"; 4])), na),
        (
            "d2 radial (1,2,2)",
            check_radial_corollary(&radial(&["1", "2", "2"], true)),
            ok,
        ),
        (
            "d2 radial (1,2,2) rough",
            check_radial_corollary(&radial(&["1", "2", "2"], false)),
            na,
        ),
        (
            "d2 radial (2,2,2)",
            check_radial_corollary(&radial(&["2", "2", "2"], true)),
            na,
        ),
        (
            "d2 radial (2,6/5,2)",
            check_radial_corollary(&radial(&["2", "6/5", "2"], true)),
            ok,
        ),
        (
            "d2 213a r=2 p0=1 (2,2)",
            check_theorem213a(&t213a(2, 2, "1", &["2", "2"])),
            ok,
        ),
        (
            "d2 213a r=1 p0=1 (2,2)",
            check_theorem213a(&t213a(2, 1, "1", &["2", "2"])),
            na,
        ),
        (
            "d2 213a r=2 p0=4 (4,4)",
            check_theorem213a(&t213a(2, 2, "4", &["4", "4"])),
            na,
        ),
        ("d2 213b r=2 (4,4)", check_theorem213b(&t213b(2, 2, "4", "4")), ce),
        (
            "d2 213b r=2 (1,11/10)",
            check_theorem213b(&t213b(2, 2, "1", "11/10")),
            inc,
        ),
        ("d2 legacy beta=(2,2)", check_legacy_rules(&orders(&[2, 2])), ok),
        ("d2 legacy beta=(1,1)", check_legacy_rules(&orders(&[1, 1])), na),
        ("d2 legacy (1,2,2,2)", check_legacy_a2d(&uniform(2, "1", "2")), ok),
        (
            "d2 legacy (1,5/2,5/2,5/2)",
            check_legacy_a2d(&uniform(2, "1", "5/2")),
            na,
        ),
        ("d2 legacy (2,2,2,2)", check_legacy_a2d(&uniform(2, "2", "2")), na),
        // d = 3
        ("d3 thm1 p0=1 rest 2", check_theorem1(&uniform(3, "1", "2")), ok),
        ("d3 thm1 p0=2 rest 3/2", check_theorem1(&uniform(3, "2", "3/2")), ok),
        ("d3 thm1 all 2", check_theorem1(&uniform(3, "2", "2")), na),
        ("d3 thm2 p0=1 rest 2", check_theorem2(&uniform(3, "1", "2")), ok),
        ("d3 thm2 all 2", check_theorem2(&uniform(3, "2", "2")), na),
        ("d3 thm2 p0=1 rest 7/4", check_theorem2(&uniform(3, "1", "7/4")), ok),
        ("d3 thm2 p0=1 rest 3/2", check_theorem2(&uniform(3, "1", "3/2")), na),
        ("d3 even", check_even_d_proposition(&uniform(3, "1", "2")), na),
        (
            "d3 decay 13 then 1/2",
            check_decay_corollary(&decay(3, &["13", "1/2", "1/2", "1/2", "1/2", "1/2", "1/2", "1/2"])),
            ok,
        ),
        ("d3 decay all 3/2", check_decay_corollary(&decay(3, &["3/2"; 8])), na),
        (
            "d3 213a r=2 p0=2 p=3/2",
            check_theorem213a(&t213a(3, 2, "2", &["3/2"; 3])),
            ok,
        ),
        (
            "d3 213a r=2 p0=2 p=5/4",
            check_theorem213a(&t213a(3, 2, "2", &["5/4"; 3])),
            na,
        ),
        ("d3 213b r=2 (2,2)", check_theorem213b(&t213b(3, 2, "2", "2")), inc),
        ("d3 213b r=2 (4,4)", check_theorem213b(&t213b(3, 2, "4", "4")), ce),
        (
            "d3 radial (1,2,2,2)",
            check_radial_corollary(&radial(&["1", "2", "2", "2"], true)),
            ok,
        ),
        ("d3 radial all 2", check_radial_corollary(&radial(&["2"; 4], true)), na),
        ("d3 legacy beta=(2,2,2)", check_legacy_rules(&orders(&[2, 2, 2])), ok),
        ("d3 legacy beta=(1,2,2)", check_legacy_rules(&orders(&[1, 2, 2])), na),
        (
            "d3 bounded weight<=1 flagged",
            check_bounded_derivative_corollary(&table(
                3,
                &["1", "2", "2", "2", "2", "2", "2", "2"],
                &["001", "010", "100"],
            )),
            ok,
        ),
        (
            "d3 bounded weight-1 inf",
            check_bounded_derivative_corollary(&table(
                3,
                &["1", "inf", "inf", "2", "inf", "2", "2", "2"],
                &["001", "010", "100"],
            )),
            na,
        ),
    ];
    let mismatches: Vec<String> = rows
        .iter()
        .filter(|(_, v, want)| v.status != *want)
        .map(|(label, v, want)| format!("{label}: got {} want {want}", v.status))
        .collect();
    let pass = mismatches.is_empty() && rows.len() >= 40;
    let mut detail = format!("{} rows, {} mismatches, exact", rows.len(), mismatches.len());
    for m in mismatches {
        detail.push_str("\n    ");
        detail.push_str(&m);
    }
    outcome(pass, detail)
}

/// `1/p + 1/q` compared with 1 over the integers; `p = a/b`, `q = c/e`.
fn cmp_reciprocal_sum((a, b): (i64, i64), (c, e): (i64, i64)) -> std::cmp::Ordering {
    (b * c + e * a).cmp(&(a * c))
}

fn line_coherence() -> Outcome {
    use std::cmp::Ordering::*;
    let ps = [
        (1, 1),
        (11, 10),
        (6, 5),
        (5, 4),
        (4, 3),
        (3, 2),
        (5, 3),
        (7, 4),
        (2, 1),
        (9, 4),
        (5, 2),
        (3, 1),
        (7, 2),
        (4, 1),
        (5, 1),
        (6, 1),
        (8, 1),
        (10, 1),
        (12, 1),
        (20, 1),
    ];
    let qs = [
        (11, 10),
        (5, 4),
        (4, 3),
        (3, 2),
        (5, 3),
        (2, 1),
        (5, 2),
        (3, 1),
        (4, 1),
        (5, 1),
    ];
    let mut points = 0;
    let mut both = 0;
    let mut bad = Vec::new();
    for &p in &ps {
        for &qq in &qs {
            points += 1;
            let (pe, qe) = (
                Exponent::from_ratio(p.0, p.1).unwrap(),
                Exponent::from_ratio(qq.0, qq.1).unwrap(),
            );
            let line = check_dim1(&pe, &qe);
            let thm1 = check_theorem1(&ExponentAssignment::uniform(1, pe, qe).unwrap());
            if thm1.is_applicable() {
                both += 1;
                if thm1.status != line.status {
                    bad.push(format!(
                        "p={}/{} q={}/{}: thm1 {} line {}",
                        p.0, p.1, qq.0, qq.1, thm1.status, line.status
                    ));
                }
            }
            let separated = match cmp_reciprocal_sum(p, qq) {
                Greater => line.status == Status::Certified,
                Less => line.status == Status::CounterexampleExists,
                Equal => line.status != Status::Certified || (p.0 <= 2 * p.1 && qq.0 <= 2 * qq.1),
            };
            if !separated {
                bad.push(format!("p={}/{} q={}/{}: line {}", p.0, p.1, qq.0, qq.1, line.status));
            }
        }
    }
    let detail = format!(
        "{points} grid points, {both} with both rules applicable, {} disagreements, exact",
        bad.len()
    );
    outcome(bad.is_empty() && points >= 200, with_list(detail, bad))
}

fn with_list(mut detail: String, items: Vec<String>) -> String {
    for item in items.into_iter().take(10) {
        detail.push_str("\n    ");
        detail.push_str(&item);
    }
    detail
}

fn counterexample_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let one = int(1);
    let mut checked = 0;
    let mut bad = Vec::new();
    while checked < 1000 {
        let p = rat(rng.gen_range(2..400), rng.gen_range(1..40));
        let qv = rat(rng.gen_range(2..400), rng.gen_range(1..40));
        if p <= one || qv <= one || p.recip() + qv.recip() >= one {
            continue;
        }
        checked += 1;
        let (pe, qe) = (Exponent::new(p.clone()).unwrap(), Exponent::new(qv.clone()).unwrap());
        match construct_counterexample_params(&pe, &qe) {
            Ok((alpha, beta)) => {
                let valid = &p * &beta > one
                    && &qv * (&beta - &alpha + &one) > one
                    && alpha > Rational::from_integer(0.into())
                    && &beta * int(2) < alpha;
                if !valid {
                    bad.push(format!("p={pe} q={qe}: alpha={alpha} beta={beta}"));
                }
            }
            Err(e) => bad.push(format!("p={pe} q={qe}: {e}")),
        }
    }
    let detail = format!("{checked} seeded pairs, {} failures, exact", bad.len());
    outcome(bad.is_empty(), with_list(detail, bad))
}

fn random_field(rng: &mut ChaCha8Rng, d: usize) -> SampledField {
    let bumps: Vec<(Vec<f64>, f64, f64)> = (0..rng.gen_range(1..4))
        .map(|_| {
            let c = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (c, rng.gen_range(0.3..1.2), rng.gen_range(-2.0..2.0))
        })
        .collect();
    let n = if d == 1 { 1601 } else { 161 };
    let spacing = 10.0 / (n - 1) as f64;
    SampledField::from_fn(vec![-5.0; d], vec![spacing; d], vec![n; d], move |x| {
        let v: f64 = bumps
            .iter()
            .map(|(c, w, a)| {
                let r2: f64 = x.iter().zip(c).map(|(x, c)| (x - c) * (x - c)).sum();
                a * (-r2 / (w * w)).exp()
            })
            .sum();
        v.into()
    })
    .unwrap()
}

fn lemma_star_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for trial in 0..64 {
        let d = 1 + trial % 2;
        let f = random_field(&mut rng, d);
        for _ in 0..8 {
            let qe = Exponent::from_ratio(rng.gen_range(11..60), 10).unwrap();
            let h: Vec<f64> = (0..d).map(|_| 2f64.powf(rng.gen_range(-5.0..2.0))).collect();
            worst = worst.max(lemma_star_check(&f, &qe, &h).unwrap().ratio);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        count >= 500 && worst <= 1.0 + LEMMA_TOL && secs < 30.0,
        format!("{count} triples, worst ratio {worst:.6} (bound 1 + {LEMMA_TOL}), {secs:.1} s (limit 30 s)"),
    )
}

fn hardy_indicator() -> Outcome {
    let spacing = 1e-3;
    let n = (1.0 / spacing) as usize + 1;
    let f = SampledField::from_fn(vec![0.0], vec![spacing], vec![n], |_| 1.0.into()).unwrap();
    let two = Exponent::integer(2).unwrap();
    let r = hardy_check(&f, &two, &two, &[1.0], &[0]).unwrap();
    let want = (5.0f64 / 3.0).sqrt();
    let err = (r.lhs - want).abs();
    outcome(
        err <= INDICATOR_TOL,
        format!(
            "lhs {:.8} vs sqrt(5/3) {want:.8}, error {err:.2e} (tol {INDICATOR_TOL:.0e}), spacing {spacing}",
            r.lhs
        ),
    )
}

/// `||g(. + h) - g(. - h)||_2` for `g = e^{-t^2}` by Plancherel:
/// `2 int sin^2(h xi) e^{-xi^2 / 2} d xi = sqrt(2 pi) (1 - e^{-2 h^2})`.
fn gaussian_difference_norm(h: f64) -> f64 {
    ((2.0 * std::f64::consts::PI).sqrt() * (1.0 - (-2.0 * h * h).exp())).sqrt()
}

fn bernstein_certificates() -> Outcome {
    let start = Instant::now();
    let settings = TailSettings::default();
    let g1 = GalleryFunction::parse("gaussian", 1).unwrap();
    let g2 = GalleryFunction::parse("gaussian", 2).unwrap();
    let fine = SampledField::sample(&g1, &[-8.0], &[8.0], &[1 << 14]).unwrap();
    let wide = ScaleRange::new(-10, 8).unwrap();
    let r_fine = bernstein_sum_1d(&fine, wide, settings).unwrap();
    let worst_term = wide
        .iter()
        .map(|s| {
            let want = 2f64.powf(s as f64 / 2.0) * gaussian_difference_norm(dyadic_step(s));
            (r_fine.term(&[s]).unwrap() / want - 1.0).abs()
        })
        .fold(0.0, f64::max);

    let line = SampledField::sample(&g1, &[-6.0], &[6.0], &[1025]).unwrap();
    let plane = SampledField::sample(&g2, &[-6.0, -6.0], &[6.0, 6.0], &[1025, 1025]).unwrap();
    let range = ScaleRange::new(-6, 6).unwrap();
    let r1 = bernstein_sum_1d(&line, range, settings).unwrap();
    let r2 = bernstein_sum_nd(&plane, &[range, range], settings).unwrap();
    let product_err = (r2.partial_sum / (r1.partial_sum * r1.partial_sum) - 1.0).abs();

    let hat = GalleryFunction::parse("hat", 1).unwrap();
    let hf = SampledField::sample(&hat, &[-2.0], &[2.0], &[4001]).unwrap();
    let rh = bernstein_sum_1d(&hf, ScaleRange::new(-6, 9).unwrap(), settings).unwrap();

    let certified = [&r_fine, &r1, &r2, &rh]
        .iter()
        .all(|r| r.verdict == TailVerdict::CertifiedConvergent);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        certified && product_err <= PRODUCT_REL_TOL && worst_term <= TERM_REL_TOL && secs < 60.0,
        format!(
            "verdicts gaussian-1d {} / gaussian-2d {} / hat {}, product rel error {product_err:.2e} (tol {PRODUCT_REL_TOL:.0e}), \
             worst term rel error {worst_term:.2e} (tol {TERM_REL_TOL:.0e}), {secs:.1} s (limit 60 s)",
            r_fine.verdict.as_str(),
            r2.verdict.as_str(),
            rh.verdict.as_str()
        ),
    )
}

fn a_norm_estimator() -> Outcome {
    let g = GalleryFunction::parse("gaussian", 1).unwrap();
    let hat = GalleryFunction::parse("hat", 1).unwrap();
    let eg = truncated_fourier_l1(&g, 8.0, 4096).unwrap();
    let eh = truncated_fourier_l1(&hat, 4.0, 4096).unwrap();
    let (dg, dh) = ((eg.l1_estimate - 1.0).abs(), (eh.l1_estimate - 1.0).abs());
    outcome(
        dg <= L1_REL_TOL && dh <= L1_REL_TOL && eg.parseval_residual <= PARSEVAL_TOL,
        format!(
            "gaussian l1 {:.5}, hat l1 {:.5} (tol {L1_REL_TOL}), gaussian Parseval residual {:.2e} (tol {PARSEVAL_TOL:.0e})",
            eg.l1_estimate, eh.l1_estimate, eg.parseval_residual
        ),
    )
}

fn regime_separation() -> Outcome {
    let start = Instant::now();
    let radii = [16.0, 32.0, 64.0, 128.0];
    let slope = |beta: &str| {
        let g = GalleryFunction::parse(&format!("m:alpha=2,beta={beta}"), 1).unwrap();
        a_norm_trend(&g, &radii, 1.0 / 64.0, TrendThresholds::default())
            .unwrap()
            .slope
    };
    let (s_in, s_out) = (slope("1.2"), slope("0.8"));
    let secs = start.elapsed().as_secs_f64();
    outcome(
        s_in < SLOPE_IN_A && s_out > SLOPE_NOT_IN_A && secs < 120.0,
        format!(
            "slope beta=1.2 {s_in:.4} (need < {SLOPE_IN_A}), slope beta=0.8 {s_out:.4} (need > {SLOPE_NOT_IN_A}), {secs:.1} s (limit 120 s)"
        ),
    )
}

const CORPUS: [(&str, &str); 15] = [
    ("criteria", "d=1\np0=1\np1=2\n"),
    (
        "criteria",
        "d=2\np00=1\np01=2\np10=2\np11=2\ngamma=11/10\nradial=1,2,2\n",
    ),
    ("criteria", "d=3\norders=2,2,2\nr=2\nsharp_p=4\nsharp_q=4\n"),
    ("region", "rule=thm4.1\n"),
    ("region", "rule=thm213b\nd=2\nr=2\np=1..4:1/3\nq=1..4:1/3\n"),
    ("bernstein", "function=gaussian\nscales=-10..8\n"),
    ("bernstein", "function=hat\nbox=-2..2\npoints=4001\nscales=-6..9\n"),
    ("hardy", "mode=hardy\nfunction=hat\nh=0.5\n"),
    (
        "hardy",
        "mode=lemma-star\nfunction=gaussian\nd=2\nbox=-5..5\npoints=129\nh=0.25,0.5\nq=3/2\n",
    ),
    ("hardy", "mode=empirical\ntrials=20\nQ=3\n"),
    ("gallery", "function=m:alpha=2,beta=1.2\nx=1.5\neta=1\n"),
    ("gallery", "p=4\nq=4\n"),
    ("norms", "function=gaussian\nd=2\npoints=129\neta=11\np=1,2,inf\n"),
    ("anorm", "function=gaussian\nR=4,8,16\n"),
    ("anorm", "function=m:alpha=2,beta=0.8\nR=16,32\n"),
];

/// Exit code, stdout, and the JSON and CSV files written to `--out`.
type RunOutput = (String, Vec<u8>, Vec<u8>, Vec<u8>);

fn run_corpus(dir: &Path, threads: &str) -> Vec<RunOutput> {
    let bin = env!("CARGO_BIN_EXE_wiener");
    CORPUS
        .iter()
        .enumerate()
        .map(|(i, (command, text))| {
            let cfg = dir.join(format!("case{i}.conf"));
            std::fs::write(&cfg, text).unwrap();
            let out = dir.join(format!("out{i}"));
            let o = Command::new(bin)
                .arg(command)
                .arg("--config")
                .arg(&cfg)
                .args(["--seed", "20240611", "--threads", threads, "--out"])
                .arg(&out)
                .output()
                .unwrap();
            let read = |ext: &str| std::fs::read(out.join(format!("{command}.{ext}"))).unwrap_or_default();
            let code = o.status.code().map_or("signal".into(), |c| c.to_string());
            (code, o.stdout, read("json"), read("csv"))
        })
        .collect()
}

fn cli_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_corpus(a.path(), "1");
    let second = run_corpus(b.path(), "4");
    let mut bad = Vec::new();
    for (i, (x, y)) in first.iter().zip(&second).enumerate() {
        if x.0 == "3" || x.1.is_empty() || x.2.is_empty() {
            bad.push(format!("case {i} ({}): exit {} or empty output", CORPUS[i].0, x.0));
        } else if x != y {
            bad.push(format!("case {i} ({}): outputs differ", CORPUS[i].0));
        }
    }
    let commands: std::collections::BTreeSet<&str> = CORPUS.iter().map(|c| c.0).collect();
    let detail = format!(
        "{} configs over {} subcommands, two runs (1 and 4 threads, same seed), {} differences, byte comparison",
        CORPUS.len(),
        commands.len(),
        bad.len()
    );
    outcome(
        bad.is_empty() && CORPUS.len() >= 12 && commands.len() == 7,
        with_list(detail, bad),
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("criterion truth tables", truth_table),
        ("d=1 coherence", line_coherence),
        ("counterexample witnesses", counterexample_witnesses),
        ("lemma-star bound", lemma_star_bound),
        ("Hardy indicator case", hardy_indicator),
        ("Bernstein certificates", bernstein_certificates),
        ("A-norm estimator", a_norm_estimator),
        ("model regime separation", regime_separation),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
