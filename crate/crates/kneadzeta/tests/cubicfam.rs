use kneadzeta::cubicfam::*;
use kneadzeta::kneading::{kneading_determinant, kneading_matrix, FloatMap};
use kneadzeta::series::{q, qr, Poly, RationalFn, Q};
use kneadzeta::subshift::fib_language;
use kneadzeta::zeta::{counts_from_zeta, mt_relation_check};
use num::{BigInt, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cubic_zeta() -> RationalFn {
    let den = Poly::one_minus_t_pow(3).mul(&Poly::one_minus_t_pow(2)).mul(&Poly::from_ints(&[1, -1, -1]));
    RationalFn::reciprocal_of(den).unwrap()
}

fn random_rationals(n: usize, seed: u64) -> Vec<Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let d: i64 = rng.gen_range(1..=1000);
            let k: i64 = rng.gen_range(0..=(37 * d) / 100);
            Q::new(BigInt::from(d + k), BigInt::from(d))
        })
        .collect()
}

/// Sign changes of `F^n(x) - x` on a uniform grid. The superattracting cycle
/// is crossed transversally, so it needs no special treatment.
fn grid_count(m: &CubicMap, n: usize, steps: usize) -> usize {
    let (alpha, beta) = filled_julia_endpoints(m).unwrap();
    let (lo, hi) = (alpha - 1e-6, beta + 1e-6);
    let g = |x: f64| m.iterate(x, n) - x;
    let mut count = 0;
    let mut prev = g(lo);
    for k in 1..=steps {
        let cur = g(lo + (hi - lo) * k as f64 / steps as f64);
        if prev.signum() != cur.signum() {
            count += 1;
        }
        prev = cur;
    }
    count
}

#[test]
fn coefficients_at_one() {
    let (poly, p) = cubic_family(&q(1)).unwrap();
    assert_eq!(poly.coeffs(), &[q(1), q(0), qr(-3, 2), qr(-1, 2)]);
    assert_eq!((p.a.clone(), p.b.clone(), p.c.clone()), (qr(-1, 2), qr(-3, 2), q(-2)));
    assert!(matches!(cubic_family(&qr(1, 2)), Err(CubicError::BelowOne(_))));
    assert!(CubicMap::new(0.9).is_err());
}

#[test]
fn critical_cycle_identities() {
    for s in [q(1), qr(5, 4), q(2), qr(7, 5)] {
        assert!(verify_critical_orbit(&s), "s = {s}");
    }
    for s in random_rationals(50, 7) {
        let p = CubicParam::new(s.clone()).unwrap();
        assert_eq!(p.eval(&q(0)), q(1));
        assert_eq!(p.eval(&q(1)), -s.clone());
        assert_eq!(p.eval(&-s.clone()), q(0));
        assert!(p.a.is_negative() && p.b.is_negative() && p.c.is_negative());
        let cv = critical_value(&s).unwrap();
        assert_eq!(cv.direct, cv.factored, "s = {s}");
    }
}

#[test]
fn critical_value_examples() {
    let cv = critical_value(&q(1)).unwrap();
    assert_eq!(cv.direct, q(-1));
    let cv = critical_value(&qr(6, 5)).unwrap();
    assert_eq!(cv.direct, cv.factored);
    assert_eq!(p_poly().eval(&q(1)), q(-3));
    assert_eq!(p_poly().eval(&q(2)), q(16));
}

#[test]
fn critical_value_increases_and_turning_point_stays_left() {
    let star = s_star(1e-12);
    let grid = rational_grid(&star.lo, 40);
    let values: Vec<Q> = grid.iter().map(|s| critical_value(s).unwrap().direct).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values.last().unwrap().to_f64().unwrap().abs() < 1e-9);
    for s in &grid[..grid.len() - 1] {
        assert!(turning_gap(s).unwrap().is_negative(), "s = {s}");
    }
    assert!(turning_gap(&star.hi).unwrap().to_f64().unwrap().abs() < 1e-9);
}

#[test]
fn s_star_bracket() {
    let st = s_star(1e-3);
    assert!((st.value - 1.371).abs() < 1e-3);
    assert!(&st.hi - &st.lo <= qr(1, 1000));
    assert!(p_poly().eval(&st.lo).is_negative() && p_poly().eval(&st.hi).is_positive());
    let fine = s_star(1e-14);
    assert!((fine.value - 1.371_228_711_186_1).abs() < 1e-12);
    for k in 0..=100 {
        assert!(q_poly().eval_f64(1.0 + k as f64 / 100.0) > 0.0);
    }
}

#[test]
fn julia_endpoints() {
    let (a, b) = filled_julia_endpoints(&CubicMap::new(1.0).unwrap()).unwrap();
    assert!((a + 3.08).abs() < 0.01 && (b - 1.37).abs() < 0.01, "{a} {b}");
    let st = s_star(1e-14).value;
    let m = CubicMap::new(st).unwrap();
    let (a, b) = filled_julia_endpoints(&m).unwrap();
    assert!((a + 2.09).abs() < 0.01 && (b - 1.12).abs() < 0.01, "{a} {b}");
    for k in 0..=1000 {
        let y = m.eval(a + (b - a) * k as f64 / 1000.0);
        assert!(y >= a - 1e-9 && y <= b + 1e-9);
    }
}

#[test]
fn periodic_counts_match_zeta() {
    let expected = counts_from_zeta(&cubic_zeta(), 6).unwrap();
    assert_eq!(expected, [1, 5, 7, 9, 11, 23].map(BigInt::from).to_vec());
    let st = s_star(1e-14).value;
    for s in [1.0, 0.5 * (1.0 + st), st - 0.01] {
        let m = CubicMap::new(s).unwrap();
        for n in 1..=6 {
            assert_eq!(BigInt::from(count_periodic(&m, n, 1e-12).unwrap()), expected[n - 1], "s = {s}, n = {n}");
        }
    }
}

#[test]
fn counts_agree_with_grid_sampling() {
    let m = CubicMap::new(1.2).unwrap();
    for n in 1..=4 {
        let pts = periodic_points(&m, n, 1e-12).unwrap();
        for &x in &pts {
            assert!((m.iterate(x, n) - x).abs() < 1e-8);
        }
        assert_eq!(pts.len(), grid_count(&m, n, 400_001), "n = {n}");
    }
}

#[test]
fn coarse_tolerance_reports_tangency() {
    let m = CubicMap::new(1.2).unwrap();
    assert!(matches!(count_periodic(&m, 4, 0.5), Err(CubicError::Tangency { .. })));
    assert_eq!(count_periodic(&m, 9, 1e-12), Err(CubicError::PeriodTooLarge(9)));
}

#[test]
fn kneading_of_first_member_fits_the_zeta() {
    // F_1 has turning points -2 and 0 and a critical orbit of dyadic points,
    // so every address is computed exactly in floating point.
    let m = CubicMap::new(1.0).unwrap();
    let fm = FloatMap { f: move |x| m.eval(x), turning: vec![-2.0, 0.0], shape: vec![-1, 1, -1], band: 1e-9 };
    let kd = kneading_matrix(&fm, 24).unwrap();
    let d = kneading_determinant(&kd).unwrap();
    assert!(mt_relation_check(&cubic_zeta(), &d, 24).is_some());
}

#[test]
fn branch_system_invariants() {
    for s in [1.0, 1.2, s_star(1e-14).value] {
        let bs = build_branch_system(&CubicMap::new(s).unwrap(), 1e-9).unwrap();
        assert!(bs.j1.1 < bs.j2.0, "s = {s}");
        assert!(bs.j.0 < bs.j1.0 && bs.j2.1 < bs.j.1);
        let m = bs.map;
        for &x in &bs.p {
            assert!((m.iterate(x, 3) - x).abs() < 1e-10);
        }
        assert!((m.eval(bs.p[2]) - bs.p[0]).abs() < 1e-12);
        assert!(m.iterate(bs.p[0], 3).abs() > 0.01);
    }
    let m = CubicMap::new(1.0).unwrap();
    assert!(matches!(build_branch_system(&m, 0.5), Err(CubicError::Invariant(_))));
}

#[test]
fn pieces_follow_the_fibonacci_language() {
    let bs = build_branch_system(&CubicMap::new(1.2).unwrap(), 1e-9).unwrap();
    for depth in 1..=10 {
        let pieces = repeller_pieces(&bs, depth).unwrap();
        assert_eq!(pieces.len(), fib_language(depth).len());
        assert!(pairwise_disjoint(&pieces), "depth = {depth}");
        assert!(pieces.iter().all(|p| p.diameter() > 0.0));
    }
    assert_eq!(repeller_pieces(&bs, 13).unwrap_err(), CubicError::DepthTooLarge(13));
}

#[test]
fn pieces_shrink_along_prefixes() {
    let bs = build_branch_system(&CubicMap::new(1.2).unwrap(), 1e-9).unwrap();
    let shallow = repeller_pieces(&bs, 4).unwrap();
    for p in repeller_pieces(&bs, 8).unwrap() {
        let prefix = &p.word.symbols()[..4];
        let parent = shallow.iter().find(|s| s.word.symbols() == prefix).unwrap();
        assert!(p.diameter() < parent.diameter());
        assert!(parent.interval.0 <= p.interval.0 && p.interval.1 <= parent.interval.1);
    }
}

#[test]
fn exact_and_float_parameters_agree() {
    let p = CubicParam::new(qr(6, 5)).unwrap();
    let m = CubicMap::new(1.2).unwrap();
    let pm = p.to_map();
    assert!((pm.a - m.a).abs() < 1e-15 && (pm.b - m.b).abs() < 1e-15 && (pm.c - m.c).abs() < 1e-15);
}
