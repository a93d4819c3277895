use kneadzeta::combinatorics::{generate_vu, pl_model, turning_points, Combinatorics};
use kneadzeta::kneading::*;
use kneadzeta::series::{Poly, RationalFn, TruncSeries};
use proptest::prelude::*;

fn rho(s: &str) -> Combinatorics {
    s.parse().unwrap()
}

fn det_of(s: &str, order: usize) -> TruncSeries {
    kneading_determinant(&kneading_matrix(&pl_model(&rho(s)), order).unwrap()).unwrap()
}

fn rf(num: &[i64], den: &[i64]) -> RationalFn {
    RationalFn::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
}

/// Signs along the turning orbit of a unimodal combinatorics, read directly
/// off the integer orbit.
fn integer_signs(r: &Combinatorics, len: usize) -> Vec<i8> {
    let e = r.entries();
    let c = turning_points(r)[0];
    let lap_sign = |x: usize| if x < c { (e[1] as i64 - e[0] as i64).signum() as i8 } else { (e[c + 1] as i64 - e[c] as i64).signum() as i8 };
    let mut out = Vec::new();
    let mut prod = 1i8;
    let mut x = e[c];
    for _ in 0..len {
        let s = if x == c { prod } else { lap_sign(x) };
        out.push(s);
        prod *= s;
        x = e[x];
    }
    out
}

#[test]
fn full_tent() {
    let d = det_of("0,2,0", 12);
    assert_eq!(d, rf(&[1, -2], &[1, -1]).to_series(12));
    assert_eq!(det_of("2,0,2", 12), d);
}

#[test]
fn period_three_superattracting() {
    let d = det_of("0,2,3,1,0", 15);
    assert_eq!(d, rf(&[1, -1, -1], &[1, 0, 0, -1]).to_series(15));
}

#[test]
fn generated_family_has_the_unimodal_determinant() {
    let expected = rf(&[1, -1, -1], &[1, 0, 0, -1]).to_series(14);
    for nu in 2..=5 {
        let r = generate_vu(nu).unwrap();
        let kd = kneading_matrix(&pl_model(&r), 14).unwrap();
        assert_eq!(kneading_determinant(&kd).unwrap(), expected, "nu = {nu}");
    }
}

#[test]
fn column_determinants_agree_up_to_one() {
    let r = generate_vu(3).unwrap();
    let kd = kneading_matrix(&pl_model(&r), 10).unwrap();
    let cols = column_determinants(&kd);
    assert_eq!(cols.len(), kd.m() + 1);
    assert!(cols.windows(2).all(|w| w[0] == w[1]));
    assert!(cols[0].coeff(0) == kneadzeta::series::q(1));
}

#[test]
fn theta_of_fixed_endpoint() {
    let m = pl_model(&rho("0,2,3,1,0"));
    let th = theta_series(&m, 1, Side::Plus, 6).unwrap();
    // c+ lies in I_1 (decreasing), so the orbit lands at 3 from below and
    // thereafter follows 3 -> 1 -> 2 with alternating sides.
    assert_eq!(th.len(), 2);
    assert_eq!(th[1].coeff(0), kneadzeta::series::q(1));
}

#[test]
fn vu_structure_on_generated_maps() {
    for nu in 2..=4 {
        let r = generate_vu(nu).unwrap();
        let j = turning_index(&r, nu + 2).unwrap();
        let kd = kneading_matrix(&pl_model(&r), 24).unwrap();
        assert!(vu_structure_check(&kd, j), "nu = {nu}");
    }
}

#[test]
fn vu_structure_fails_for_wrong_column() {
    let r = generate_vu(2).unwrap();
    let kd = kneading_matrix(&pl_model(&r), 24).unwrap();
    assert!(!vu_structure_check(&kd, 1));
    assert!(!vu_structure_check(&kd, 0));
    assert!(!vu_structure_check(&kd, 3));
}

#[test]
fn unimodal_specialisation_matches_matrix() {
    for s in ["0,2,3,1,0", "0,2,0", "0,3,2,1", "1,3,2,0", "0,2,4,3,1", "4,2,0,1,3"] {
        let m = pl_model(&rho(s));
        let eps = unimodal_signs(&m, 14).unwrap();
        assert_eq!(eps, integer_signs(&rho(s), 14), "rho = {s}");
        assert_eq!(unimodal_kneading(&eps, 14).unwrap(), det_of(s, 14), "rho = {s}");
    }
}

#[test]
fn unimodal_errors() {
    assert!(matches!(unimodal_signs(&pl_model(&rho("0,1,2")), 3), Err(KneadingError::NotUnimodal(0))));
    assert!(matches!(unimodal_kneading(&[1], 3), Err(KneadingError::TooFewSigns { .. })));
    assert!(matches!(unimodal_kneading(&[1, 0, 1], 3), Err(KneadingError::BadSign)));
    assert!(matches!(unimodal_rational_form(&[1], &[]), Err(KneadingError::EmptyCycle)));
    assert!(matches!(kneading_matrix(&pl_model(&rho("0,1,2")), 3), Err(KneadingError::NoTurningPoints)));
}

#[test]
fn unimodal_closed_form_examples() {
    // Signs (-, +, -) repeating: D = 1 - t - t^2 + t^3 - ... = (1 - t - t^2) / (1 - t^3).
    let r = unimodal_rational_form(&[], &[-1, 1, -1]).unwrap();
    assert_eq!(r, rf(&[1, -1, -1], &[1, 0, 0, -1]));
    // Full tent: (-) then (+) forever.
    let r = unimodal_rational_form(&[-1], &[1]).unwrap();
    assert_eq!(r, rf(&[1, -2], &[1, -1]));
}

#[test]
fn float_tent_agrees_with_exact_model() {
    let tent = FloatMap { f: |x: f64| if x <= 1.0 { 2.0 * x } else { 4.0 - 2.0 * x }, turning: vec![1.0], shape: vec![1, -1], band: 1e-12 };
    assert_eq!(unimodal_signs(&tent, 20).unwrap(), unimodal_signs(&pl_model(&rho("0,2,0")), 20).unwrap());
    let kd = kneading_matrix(&tent, 10).unwrap();
    assert_eq!(kneading_determinant(&kd).unwrap(), det_of("0,2,0", 10));
}

#[test]
fn float_map_reports_ambiguity() {
    let f = FloatMap { f: |x: f64| 3.9 * x * (1.0 - x), turning: vec![0.5], shape: vec![1, -1], band: 0.4 };
    assert!(matches!(unimodal_signs(&f, 10), Err(KneadingError::Ambiguous { turning: 1, .. })));
}

proptest! {
    #[test]
    fn closed_form_expands_to_sign_products(
        prefix in prop::collection::vec(prop::bool::ANY, 0..6),
        cycle in prop::collection::vec(prop::bool::ANY, 1..6),
    ) {
        let sg = |b: &bool| if *b { 1i8 } else { -1 };
        let prefix: Vec<i8> = prefix.iter().map(sg).collect();
        let cycle: Vec<i8> = cycle.iter().map(sg).collect();
        let n = 40;
        let eps = expand_signs(&prefix, &cycle, n);
        let series = unimodal_kneading(&eps, n).unwrap();
        let closed = unimodal_rational_form(&prefix, &cycle).unwrap();
        prop_assert_eq!(closed.to_series(n), series);
        prop_assert!(closed.den().coeff(0) == kneadzeta::series::q(1));
    }

    #[test]
    fn determinant_has_unit_constant_term(e in prop::collection::vec(0usize..=5, 6)) {
        if let Ok(r) = Combinatorics::new(e) {
            if kneadzeta::combinatorics::is_pm(&r).is_pm() && !turning_points(&r).is_empty() {
                let kd = kneading_matrix(&pl_model(&r), 8).unwrap();
                let d = kneading_determinant(&kd).unwrap();
                prop_assert_eq!(d.coeff(0), kneadzeta::series::q(1));
            }
        }
    }
}
