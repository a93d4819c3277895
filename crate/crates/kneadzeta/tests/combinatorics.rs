use kneadzeta::combinatorics::*;
use kneadzeta::series::{q, qr, Q};
use num::ToPrimitive;
use proptest::prelude::*;

fn rho(s: &str) -> Combinatorics {
    s.parse().unwrap()
}

/// `F_rho(x)` in floating point, written from the connect-the-dots picture.
fn float_eval(r: &[usize], x: f64) -> f64 {
    let n = r.len() - 1;
    let j = (x.floor() as usize).min(n - 1);
    let t = x - j as f64;
    r[j] as f64 * (1.0 - t) + r[j + 1] as f64 * t
}

/// Number of solutions of `F^p(x) = x`, by sign changes on the grid
/// `k / m` plus exact zeros at grid points. `m` is coprime to the small
/// denominators of the periodic points, and integers land on the grid so that
/// tangential zeros at integer cycles are seen.
fn float_fixed_count(r: &[usize], p: usize, m: usize) -> usize {
    let n = r.len() - 1;
    let g = |x: f64| {
        let mut y = x;
        for _ in 0..p {
            y = float_eval(r, y);
        }
        y - x
    };
    let mut count = 0;
    let mut prev = g(0.0);
    if prev == 0.0 {
        count += 1;
    }
    for k in 1..=n * m {
        let cur = g(k as f64 / m as f64);
        if cur == 0.0 || (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            count += 1;
        }
        prev = cur;
    }
    count
}

#[test]
fn model_evaluation() {
    let m = pl_model(&rho("0,2,3,1,0"));
    assert_eq!(m.eval(&q(2)).unwrap(), q(3));
    assert_eq!(m.eval(&qr(3, 2)).unwrap(), qr(5, 2));
    assert!(m.eval(&q(5)).is_err());
    assert!(m.eval(&qr(-1, 3)).is_err());
    let id = pl_model(&rho("0,1"));
    assert_eq!(id.eval(&qr(1, 2)).unwrap(), qr(1, 2));
}

#[test]
fn turning_point_examples() {
    assert_eq!(turning_points(&rho("0,2,3,1,0")), vec![2]);
    assert!(turning_points(&rho("0,1,2,3")).is_empty());
    assert_eq!(turning_points(&rho("7,3,4,5,6,3,2,0")), vec![1, 4]);
}

#[test]
fn orbit_examples() {
    let o = orbit(&rho("0,2,3,1,0"), 2);
    assert_eq!((o.preperiod, o.cycle), (0, vec![2, 3, 1]));
    let o = orbit(&rho("0,2,3,1,0"), 0);
    assert_eq!((o.preperiod, o.cycle), (0, vec![0]));
    let o = orbit(&rho("7,3,4,5,6,3,2,0"), 1);
    assert_eq!((o.preperiod, o.cycle.clone(), o.tail), (1, vec![3, 5], vec![1]));
}

#[test]
fn pm_examples() {
    assert_eq!(is_pm(&rho("0,3,3,2,0")), PmCheck::EqualAdjacent(1));
    assert!(is_pm(&rho("0,1")).is_pm());
    assert!(is_pm(&rho("0,2,3,1,0")).is_pm());
}

#[test]
fn own_combinatorics_examples() {
    assert!(is_own_combinatorics(&rho("0,2,3,1,0")).is_own());
    assert!(is_own_combinatorics(&rho("5,2,3,4,2,0")).is_own());
    match is_own_combinatorics(&rho("0,3,4,7,6,5,2,1,0")) {
        OwnCheck::Induced { rho: induced, marked } => {
            assert_eq!(marked, vec![0, 1, 3, 7, 8]);
            assert_eq!(induced, rho("0,2,3,1,0"));
        }
        OwnCheck::Own => panic!("cycles (2,4,6) and (5) are not post-turning"),
    }
}

#[test]
fn framed_examples() {
    assert!(is_framed(&rho("7,3,4,5,6,3,2,0")));
    assert!(is_framed(&rho("0,1")));
    assert!(is_framed(&rho("5,2,3,4,2,0")));
    assert!(!is_framed(&rho("1,2,3,1")));
}

#[test]
fn vu_examples() {
    assert_eq!(is_virtually_unimodal(&rho("5,2,3,4,2,0")), Some(3));
    assert_eq!(is_virtually_unimodal(&rho("0,2,3,1,0")), Some(2));
    assert_eq!(is_virtually_unimodal(&rho("6,2,1,4,5,3,0")), None);
    assert_eq!(turning_points(&rho("6,2,1,4,5,3,0")), vec![2, 4]);
}

#[test]
fn point_classes() {
    use PointKind::*;
    let kinds = classify_points(&rho("7,3,4,5,6,3,2,0"));
    assert_eq!(kinds, vec![Julia, Fatou, Fatou, Julia, Fatou, Julia, Fatou, Julia]);
    assert!(classify_points(&rho("0,1,2,3")).iter().all(|&k| k == Julia));
    let kinds = classify_points(&rho("0,2,3,1,0"));
    assert_eq!(&kinds[1..4], &[Fatou, Fatou, Fatou]);
}

#[test]
fn expanding_examples() {
    assert!(is_expanding(&rho("7,3,4,5,6,3,2,0")).expanding);
    assert!(is_expanding(&rho("0,6,4,5,6,7,4,3,0")).expanding);
    let id = is_expanding(&rho("0,1,2,3"));
    assert!(!id.expanding);
    assert_eq!(id.witnesses.len(), 3);
    assert!(id.witnesses.iter().all(|w| w.m.is_none()));
    // The doubling map on three points separates its only Julia edge.
    let r = is_expanding(&rho("0,2,1"));
    assert_eq!(r.witnesses, vec![]);
}

/// Exhaustive search for small combinatorics that are not expanding even
/// though every index is of Julia type.
#[test]
fn brute_force_non_expanding_monotone_maps() {
    let mut found = Vec::new();
    for n in 2..=4usize {
        let total = (n + 1).pow(n as u32 + 1);
        for code in 0..total {
            let mut c = code;
            let e: Vec<usize> = (0..=n)
                .map(|_| {
                    let d = c % (n + 1);
                    c /= n + 1;
                    d
                })
                .collect();
            let r = Combinatorics::new(e).unwrap();
            if !is_pm(&r).is_pm() {
                continue;
            }
            if classify_points(&r).iter().all(|&k| k == PointKind::Julia) && !is_expanding(&r).expanding {
                found.push(r);
            }
        }
    }
    assert!(found.contains(&rho("0,1,2,3")));
    assert!(found.contains(&rho("3,2,1,0")));
    for r in &found {
        // Without turning points every Julia edge keeps unit length forever.
        assert!(turning_points(r).is_empty());
    }
}

#[test]
fn generate_vu_examples() {
    assert_eq!(generate_vu(2).unwrap(), rho("7,3,4,5,6,3,2,0"));
    assert_eq!(generate_vu(3).unwrap(), rho("0,6,4,5,6,7,4,3,0"));
    assert_eq!(generate_vu(4).unwrap(), rho("9,5,7,5,6,7,8,5,4,0"));
    assert_eq!(generate_vu(1), Err(CombError::NuTooSmall(1)));
}

#[test]
fn generated_family_passes_every_predicate() {
    for nu in 2..=16 {
        let r = generate_vu(nu).unwrap();
        assert!(is_pm(&r).is_pm(), "nu = {nu}");
        assert!(is_own_combinatorics(&r).is_own(), "nu = {nu}");
        assert!(is_framed(&r), "nu = {nu}");
        assert_eq!(turning_points(&r).len(), nu, "nu = {nu}");
        assert_eq!(is_virtually_unimodal(&r), Some(nu + 2), "nu = {nu}");
        assert!(is_expanding(&r).expanding, "nu = {nu}");
        let c = nu + 2;
        let (lo, hi) = vu_hull(&r, c);
        assert_eq!(pl_model(&r).image_of_integer_interval(lo, hi), (lo, hi), "nu = {nu}");
    }
}

#[test]
fn period_two_orbit_of_base_map() {
    let m = pl_model(&rho("0,2,3,1,0"));
    let res = periodic_orbits_of_pl(&m, 2).unwrap();
    assert_eq!(res.orbits.len(), 1);
    assert_eq!(res.orbits[0].cycle, vec![qr(5, 3), qr(8, 3)]);
    assert!(res.degenerate.is_empty());
}

#[test]
fn fixed_points_of_base_map() {
    let m = pl_model(&rho("0,2,3,1,0"));
    let res = periodic_orbits_of_pl(&m, 1).unwrap();
    let pts: Vec<Q> = res.orbits.iter().map(|o| o.cycle[0].clone()).collect();
    // 2x = x on [0,1]; 7 - 2x = x on [2,3]; the slope-1 piece has no solution.
    assert_eq!(pts, vec![q(0), qr(7, 3)]);
}

#[test]
fn identity_edge_is_degenerate() {
    let m = pl_model(&rho("0,1"));
    let res = periodic_orbits_of_pl(&m, 1).unwrap();
    let pts: Vec<Q> = res.orbits.iter().map(|o| o.cycle[0].clone()).collect();
    assert_eq!(pts, vec![q(0), q(1)]);
    assert_eq!(res.degenerate.len(), 1);
    assert_eq!(res.degenerate[0].interval, (q(0), q(1)));
    assert!(periodic_orbits_of_pl(&m, 0).is_err());
}

#[test]
fn periodic_counts_match_float_sign_changes() {
    for s in ["0,2,3,1,0", "0,2,0", "7,3,4,5,6,3,2,0", "5,2,3,4,2,0", "0,3,1,2"] {
        let r = rho(s);
        let m = pl_model(&r);
        for p in 1..=4 {
            let total: usize = (1..=p)
                .filter(|d| p % d == 0)
                .map(|d| periodic_orbits_of_pl(&m, d).unwrap().orbits.iter().map(|o| o.period()).sum::<usize>())
                .sum();
            let oracle = float_fixed_count(r.entries(), p, 50_021);
            assert_eq!(total, oracle, "rho = {s}, p = {p}");
        }
    }
}

#[test]
fn build_vu_examples() {
    assert_eq!(build_vu_from_periodic_points(&[qr(5, 3)]).unwrap(), rho("7,3,4,5,6,3,2,0"));
    assert_eq!(build_vu_from_periodic_points(&[qr(8, 3), qr(5, 3)]).unwrap(), rho("0,6,4,5,6,7,4,3,0"));
    assert_eq!(
        build_vu_from_periodic_points(&[qr(5, 3), qr(8, 3), qr(5, 3)]).unwrap(),
        generate_vu(4).unwrap()
    );
    assert_eq!(build_vu_from_periodic_points(&[]).unwrap(), rho("0,2,3,1,0"));
}

#[test]
fn build_vu_rejections() {
    assert!(matches!(build_vu_from_periodic_points(&[qr(3, 2)]), Err(CombError::NotPeriodic(_))));
    assert!(matches!(build_vu_from_periodic_points(&[q(4)]), Err(CombError::OutsideCore(_))));
    assert!(matches!(build_vu_from_periodic_points(&[qr(8, 3)]), Err(CombError::LastPointTooLarge(_))));
    assert!(matches!(
        build_vu_from_periodic_points(&[qr(5, 3), qr(8, 3), qr(8, 3), qr(5, 3)]),
        Err(CombError::Alternation(1, 2))
    ));
}

#[test]
fn embedded_block_of_first_example() {
    let r = build_vu_from_periodic_points(&[qr(5, 3)]).unwrap();
    let xi: Vec<usize> = r.entries()[2..7].iter().map(|v| v - 1).collect();
    assert_eq!(xi, vec![3, 4, 5, 2, 1]);
}

#[test]
fn text_and_json_forms() {
    let r = rho("0,2,3,1,0");
    assert_eq!(r.to_string(), "0,2,3,1,0");
    assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"rho":[0,2,3,1,0]}"#);
    assert!("0,a".parse::<Combinatorics>().is_err());
    assert_eq!("3".parse::<Combinatorics>(), Err(CombError::TooShort));
}

fn pm_combinatorics() -> impl Strategy<Value = Combinatorics> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::vec(0..=n, n + 1).prop_filter_map("piecewise monotone", |e| {
            let r = Combinatorics::new(e).ok()?;
            is_pm(&r).is_pm().then_some(r)
        })
    })
}

proptest! {
    #[test]
    fn turning_points_agree_with_sampled_extrema(r in pm_combinatorics()) {
        let e = r.entries();
        let sampled: Vec<usize> = (1..r.n())
            .filter(|&i| {
                let mid = e[i] as f64;
                let l = float_eval(e, i as f64 - 0.25);
                let rr = float_eval(e, i as f64 + 0.25);
                (l < mid && rr < mid) || (l > mid && rr > mid)
            })
            .collect();
        prop_assert_eq!(turning_points(&r), sampled);
    }

    #[test]
    fn orbits_are_short_and_closed(r in pm_combinatorics(), i in 0usize..8) {
        let i = i % (r.n() + 1);
        let o = orbit(&r, i);
        prop_assert!(o.preperiod + o.period() <= r.n() + 1);
        prop_assert_eq!(r.apply(*o.cycle.last().unwrap()), o.cycle[0]);
        let mut sorted = o.cycle.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), o.cycle.len());
        prop_assert_eq!(r.iterate(i, o.preperiod), o.cycle[0]);
    }

    #[test]
    fn induced_map_is_order_preserving_reindexing(r in pm_combinatorics()) {
        let marked = marked_points(&r);
        prop_assert!(marked.contains(&0) && marked.contains(&r.n()));
        for t in turning_points(&r) {
            prop_assert!(marked.contains(&t));
        }
        for &m in &marked {
            prop_assert!(marked.contains(&r.apply(m)));
        }
        if let OwnCheck::Induced { rho: induced, marked: m2 } = is_own_combinatorics(&r) {
            prop_assert_eq!(&m2, &marked);
            for (k, &m) in marked.iter().enumerate() {
                let image = marked.iter().position(|&x| x == r.apply(m)).unwrap();
                prop_assert_eq!(induced.apply(k), image);
            }
        }
    }

    #[test]
    fn periodic_orbits_are_exact(r in pm_combinatorics(), p in 1usize..=3) {
        let m = pl_model(&r);
        let res = periodic_orbits_of_pl(&m, p).unwrap();
        for o in &res.orbits {
            prop_assert_eq!(o.period(), p);
            for x in &o.cycle {
                let mut y = x.clone();
                for _ in 0..p {
                    y = m.eval(&y).unwrap();
                }
                prop_assert_eq!(&y, x);
            }
        }
    }

    #[test]
    fn dominant_hull_is_invariant(r in pm_combinatorics()) {
        if let Some(c) = is_virtually_unimodal(&r) {
            let (lo, hi) = vu_hull(&r, c);
            prop_assert_eq!(pl_model(&r).image_of_integer_interval(lo, hi), (lo, hi));
        }
    }
}

#[test]
fn float_conversion_of_small_rationals() {
    assert_eq!(qr(5, 3).to_f64().map(|x| (x * 3.0).round()), Some(5.0));
}
