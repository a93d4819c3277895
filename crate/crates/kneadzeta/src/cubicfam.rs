//! The bimodal cubic family `F_s(x) = a(s) x^3 + b(s) x^2 + 1` for `s >= 1`,
//! with
//!
//! ```text
//! a(s) = -1 + 1/(s^2 (s+1)),   b(s) = -s - 1/(s^2 (s+1)).
//! ```
//!
//! Every member has the superattracting cycle `0 -> 1 -> -s -> 0` through its
//! local maximum `0`, and a second turning point `c_s = -2b/(3a)` (a local
//! minimum). The lap signs are `(-, +, -)`. Exact identities use rational
//! arithmetic ([`CubicParam`]); everything numerical runs on [`CubicMap`].
//!
//! ```
//! use kneadzeta::cubicfam::{critical_value, verify_critical_orbit};
//! use kneadzeta::series::{q, qr};
//!
//! assert!(verify_critical_orbit(&qr(6, 5)));
//! let cv = critical_value(&q(1)).unwrap();
//! assert_eq!(cv.direct, q(-1));
//! assert_eq!(cv.direct, cv.factored);
//! ```

use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::{q, qr, Poly, Q};
use crate::subshift::{fib_language, vee_map, Word};

/// Polynomial in one real variable with exact coefficients, lowest degree first.
pub type RealPoly = Poly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CubicError {
    #[error("parameter s = {0} is below 1")]
    BelowOne(String),
    #[error("no bounded invariant interval found")]
    NoInvariantInterval,
    #[error("period {n}: unresolved tangency of F^n(x) - x near x = {x}")]
    Tangency { n: usize, x: f64 },
    #[error("period {0} exceeds the supported maximum of 8")]
    PeriodTooLarge(usize),
    #[error("branch system invariant violated: {0}")]
    Invariant(String),
    #[error("value {value} is outside the range of branch {branch}")]
    Inversion { branch: u8, value: f64 },
    #[error("depth {0} exceeds the supported maximum of 12")]
    DepthTooLarge(usize),
}

/// `s` with the derived coefficients and the second turning point, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicParam {
    pub s: Q,
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl CubicParam {
    pub fn new(s: Q) -> Result<Self, CubicError> {
        if s < q(1) {
            return Err(CubicError::BelowOne(s.to_string()));
        }
        let k = (&s * &s * (&s + q(1))).recip();
        let a = &k - q(1);
        let b = -&s - &k;
        let c = qr(-2, 3) * &b / &a;
        Ok(CubicParam { s, a, b, c })
    }

    pub fn poly(&self) -> RealPoly {
        Poly::new(vec![q(1), q(0), self.b.clone(), self.a.clone()])
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.poly().eval(x)
    }

    pub fn to_map(&self) -> CubicMap {
        let f = |v: &Q| v.to_f64().unwrap_or(f64::NAN);
        CubicMap { s: f(&self.s), a: f(&self.a), b: f(&self.b), c: f(&self.c) }
    }
}

/// `F_s` with exact coefficients.
pub fn cubic_family(s: &Q) -> Result<(RealPoly, CubicParam), CubicError> {
    let p = CubicParam::new(s.clone())?;
    Ok((p.poly(), p))
}

/// `F_s(0) = 1`, `F_s(1) = -s` and `F_s(-s) = 0`, checked exactly.
pub fn verify_critical_orbit(s: &Q) -> bool {
    match CubicParam::new(s.clone()) {
        Ok(p) => p.eval(&q(0)) == q(1) && p.eval(&q(1)) == -s && p.eval(&-s).is_zero(),
        Err(_) => false,
    }
}

/// `s^4 + s^3 - 3s - 2`.
pub fn p_poly() -> RealPoly {
    Poly::from_ints(&[-2, -3, 0, 1, 1])
}

/// `4s^4 + 4s^3 - 3s + 1`.
pub fn q_poly() -> RealPoly {
    Poly::from_ints(&[1, -3, 0, 4, 4])
}

/// The critical value `F_s(c_s)` computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalValue {
    pub direct: Q,
    pub factored: Q,
}

/// `F_s(c_s)` by substitution and by `-p(s)^2 q(s) / (27 s^2 (s+1) (s^3+s^2-1)^2)`.
pub fn critical_value(s: &Q) -> Result<CriticalValue, CubicError> {
    let p = CubicParam::new(s.clone())?;
    let direct = p.eval(&p.c);
    let ps = p_poly().eval(s);
    let qs = q_poly().eval(s);
    let r = s * s * s + s * s - q(1);
    let factored = -(&ps * &ps * qs) / (q(27) * s * s * (s + q(1)) * &r * &r);
    Ok(CriticalValue { direct, factored })
}

/// Bracket `[lo, hi]` with dyadic rational endpoints around the unique root of
/// `p` in `[1, 2]`.
#[derive(Clone, Debug, Serialize)]
pub struct SStar {
    #[serde(serialize_with = "ser_q")]
    pub lo: Q,
    #[serde(serialize_with = "ser_q")]
    pub hi: Q,
    pub value: f64,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact bisection of `p(s) = s^4 + s^3 - 3s - 2` until the bracket is no
/// wider than `tol`.
pub fn s_star(tol: f64) -> SStar {
    let p = p_poly();
    let (mut lo, mut hi) = (q(1), q(2));
    debug_assert!(p.eval(&lo).is_negative() && p.eval(&hi).is_positive());
    let tol = tol.max(f64::MIN_POSITIVE);
    while (&hi - &lo).to_f64().unwrap_or(0.0) > tol {
        let mid = (&lo + &hi) / q(2);
        let v = p.eval(&mid);
        if v.is_zero() {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = ((&lo + &hi) / q(2)).to_f64().unwrap_or(f64::NAN);
    SStar { lo, hi, value }
}

/// Floating-point member of the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CubicMap {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CubicMap {
    pub fn new(s: f64) -> Result<Self, CubicError> {
        if !(s >= 1.0) {
            return Err(CubicError::BelowOne(s.to_string()));
        }
        let k = 1.0 / (s * s * (s + 1.0));
        let (a, b) = (k - 1.0, -s - k);
        Ok(CubicMap { s, a, b, c: -2.0 * b / (3.0 * a) })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x * x + 1.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.a * x + 2.0 * self.b) * x
    }

    pub fn iterate(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.eval(y))
    }

    /// Turning points in increasing order.
    pub fn turning_points(&self) -> [f64; 2] {
        [self.c, 0.0]
    }

    pub fn shape(&self) -> [i8; 3] {
        [-1, 1, -1]
    }

    /// Solutions of `F(x) = y` in `[lo, hi]`.
    pub fn preimages(&self, y: f64, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        let mut cuts = vec![lo];
        cuts.extend(self.turning_points().into_iter().filter(|&t| lo < t && t < hi));
        cuts.push(hi);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let g = |x: f64| self.eval(x) - y;
            if let Some(r) = bisect_root(g, w[0], w[1], tol) {
                if out.last().is_none_or(|&l: &f64| (r - l).abs() > tol) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Root of a continuous `g` on `[lo, hi]` when `g(lo)` and `g(hi)` differ in
/// sign or one of them vanishes.
pub fn bisect_root(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let (mut glo, ghi) = (g(lo), g(hi));
    if glo == 0.0 {
        return Some(lo);
    }
    if ghi == 0.0 {
        return Some(hi);
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Real filled Julia set `[alpha, beta]`: the outermost solutions of
/// `F^2(x) = x`, which form a 2-cycle swapped by `F`.
pub fn filled_julia_endpoints(m: &CubicMap) -> Result<(f64, f64), CubicError> {
    let r = 4.0 + 4.0 * (m.b.abs() + 1.0) / m.a.abs();
    let g = |x: f64| m.iterate(x, 2) - x;
    let steps = 40_000;
    let h = 2.0 * r / steps as f64;
    let mut roots = Vec::new();
    for k in 0..steps {
        let (x0, x1) = (-r + k as f64 * h, -r + (k + 1) as f64 * h);
        if let Some(x) = bisect_root(g, x0, x1, 1e-13) {
            if roots.last().is_none_or(|&l: &f64| x - l > 1e-9) {
                roots.push(x);
            }
        }
    }
    let two_cycle: Vec<f64> = roots.into_iter().filter(|&x| (m.eval(x) - x).abs() > 1e-7).collect();
    let (&alpha, &beta) = match (two_cycle.first(), two_cycle.last()) {
        (Some(a), Some(b)) if a < b => (a, b),
        _ => return Err(CubicError::NoInvariantInterval),
    };
    let slack = 1e-7 * (beta - alpha);
    let swapped = (m.eval(alpha) - beta).abs() < slack && (m.eval(beta) - alpha).abs() < slack;
    let images = [alpha, beta, m.c, 0.0].map(|x| m.eval(x));
    let inside = images.iter().all(|&y| y >= alpha - slack && y <= beta + slack);
    if swapped && inside {
        Ok((alpha, beta))
    } else {
        Err(CubicError::NoInvariantInterval)
    }
}

/// Turning points of `F^n` in `[lo, hi]`: preimages of `{c_s, 0}` under
/// `F^k`, `k < n`, sorted and merged.
fn lap_boundaries(m: &CubicMap, n: usize, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let mut level: Vec<f64> = m.turning_points().into_iter().filter(|&t| lo < t && t < hi).collect();
    let mut all = level.clone();
    for _ in 1..n {
        level = level.iter().flat_map(|&y| m.preimages(y, lo, hi, tol)).collect();
        all.extend(level.iter().copied());
    }
    all.push(lo);
    all.push(hi);
    all.sort_by(f64::total_cmp);
    let merge = 1e-13 * (hi - lo);
    all.dedup_by(|b, a| (*b - *a).abs() <= merge);
    all
}

/// Solutions of `F^n(x) = x` on the filled Julia interval.
///
/// `F^n - x` is bisected on each monotone lap of `F^n`. Values within `tol`
/// of zero at lap boundaries are roots, which is how the superattracting
/// cycle through the turning point `0` is picked up. A sample with
/// `|F^n(x) - x| < tol` that is neither a root nor a sign change is reported
/// as an unresolved tangency.
pub fn periodic_points(m: &CubicMap, n: usize, tol: f64) -> Result<Vec<f64>, CubicError> {
    if n == 0 || n > 8 {
        return Err(CubicError::PeriodTooLarge(n));
    }
    let (alpha, beta) = filled_julia_endpoints(m)?;
    let delta = 1e-6 * (beta - alpha);
    let (lo, hi) = (alpha - delta, beta + delta);
    let g = |x: f64| m.iterate(x, n) - x;
    let mut roots = Vec::new();
    let mut near_misses = Vec::new();
    let samples = 64;
    for lap in lap_boundaries(m, n, lo, hi, 1e-14).windows(2) {
        let (l, r) = (lap[0], lap[1]);
        let xs: Vec<f64> = (0..=samples).map(|k| l + (r - l) * k as f64 / samples as f64).collect();
        let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        for (x, v) in [(l, gs[0]), (r, gs[samples])] {
            if v.abs() < tol {
                roots.push(x);
            }
        }
        for k in 0..samples {
            if gs[k] != 0.0 && gs[k + 1] != 0.0 && gs[k].signum() != gs[k + 1].signum() {
                roots.extend(bisect_root(g, xs[k], xs[k + 1], 1e-12));
            }
        }
        for k in 1..samples {
            if gs[k].abs() < tol && gs[k - 1].signum() == gs[k + 1].signum() {
                near_misses.push(xs[k]);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    let merge = 1e-9 * (hi - lo);
    roots.dedup_by(|b, a| (*b - *a).abs() <= merge);
    if let Some(&x) = near_misses.iter().find(|&&x| roots.iter().all(|&r| (r - x).abs() > merge)) {
        return Err(CubicError::Tangency { n, x });
    }
    Ok(roots)
}

/// `N_n`, the number of solutions of `F^n(x) = x`.
pub fn count_periodic(m: &CubicMap, n: usize, tol: f64) -> Result<usize, CubicError> {
    periodic_points(m, n, tol).map(|r| r.len())
}

/// Inverse branches generating the Fibonacci repeller inside `J`.
///
/// `phi_1` inverts `F^2` on `J_1` and `phi_2` inverts `F` on `J_2`; both map
/// `J` into itself.
#[derive(Clone, Debug, Serialize)]
pub struct BranchSystem {
    pub map: CubicMap,
    /// Repelling 3-cycle `p_0 -> p_1 -> p_2` with `p_2 < 0`.
    pub p: [f64; 3],
    pub l0: f64,
    pub l1: f64,
    /// The point of `(-s, 0)` with `F(hat_p) = F^2(l0)`.
    pub hat_p: f64,
    pub j: (f64, f64),
    pub j1: (f64, f64),
    pub j2: (f64, f64),
}

fn hull(x: f64, y: f64) -> (f64, f64) {
    (x.min(y), x.max(y))
}

impl BranchSystem {
    fn invert(&self, branch: u8, v: f64) -> Result<f64, CubicError> {
        let m = self.map;
        let (dom, n) = match branch {
            1 => (self.j1, 2),
            _ => (self.j2, 1),
        };
        let g = |x: f64| m.iterate(x, n) - v;
        bisect_root(g, dom.0, dom.1, 1e-15).ok_or(CubicError::Inversion { branch, value: v })
    }

    /// `phi_b` applied to an interval.
    pub fn apply(&self, branch: u8, iv: (f64, f64)) -> Result<(f64, f64), CubicError> {
        Ok(hull(self.invert(branch, iv.0)?, self.invert(branch, iv.1)?))
    }
}

/// Builds the branch system of `F_s`. Every containment and separation must
/// hold with margin `tol`.
pub fn build_branch_system(m: &CubicMap, tol: f64) -> Result<BranchSystem, CubicError> {
    let s = m.s;
    let fail = |what: &str| Err(CubicError::Invariant(what.to_string()));
    let g3 = |x: f64| m.iterate(x, 3) - x;
    let steps = 20_000;
    let h = (1.0 + s) / steps as f64;
    let mut cycle = Vec::new();
    for k in 0..steps {
        let (x0, x1) = (-s + k as f64 * h, -s + (k + 1) as f64 * h);
        if let Some(x) = bisect_root(g3, x0, x1, 1e-14) {
            let superattracting = [0.0, 1.0, -s].iter().any(|&c| (x - c).abs() < 1e-9);
            let fixed = (m.eval(x) - x).abs() < 1e-9;
            if !superattracting && !fixed && x < 0.0 && cycle.last().is_none_or(|&l: &f64| x - l > 1e-9) {
                cycle.push(x);
            }
        }
    }
    let p2 = match cycle.as_slice() {
        [x] => *x,
        _ => return fail("expected exactly one negative point of a repelling 3-cycle"),
    };
    let p0 = m.eval(p2);
    let p1 = m.eval(p0);
    let l0 = 0.5 * (-s + p2);
    let l1 = 0.5 * (m.iterate(l0, 3) + l0);
    let target = m.iterate(l0, 2);
    let hat_p = match bisect_root(|x| m.eval(x) - target, -s, 0.0, 1e-15) {
        Some(x) => x,
        None => return fail("no point of (-s, 0) maps onto F^2(l0)"),
    };
    let j = hull(m.iterate(l0, 3), m.iterate(l1, 2));
    let j1 = hull(l1, hat_p);
    let j2 = hull(m.eval(l1), target);
    let within = |a: (f64, f64), b: (f64, f64)| a.0 >= b.0 + tol && a.1 <= b.1 - tol;
    if !within(j1, j) || !within(j2, j) {
        return fail("J1 and J2 must lie inside J");
    }
    if !(j1.1 + tol < j2.0 || j2.1 + tol < j1.0) {
        return fail("J1 and J2 must be disjoint");
    }
    let off_critical = |iv: (f64, f64)| iv.1 < -tol || iv.0 > tol;
    let f_j1 = hull(m.eval(j1.0), m.eval(j1.1));
    if !off_critical(j1) || !off_critical(j2) || !off_critical(f_j1) {
        return fail("the turning point 0 must stay outside both branch domains");
    }
    let covers = |iv: (f64, f64), n: usize| {
        let img = hull(m.iterate(iv.0, n), m.iterate(iv.1, n));
        img.0 <= j.0 + tol && img.1 >= j.1 - tol
    };
    if !covers(j1, 2) || !covers(j2, 1) {
        return fail("each branch must cover J");
    }
    Ok(BranchSystem { map: *m, p: [p0, p1, p2], l0, l1, hat_p, j, j1, j2 })
}

/// Piece of the repeller construction labelled by an admissible word.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub word: Word,
    pub interval: (f64, f64),
}

impl Piece {
    pub fn diameter(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

/// `phi_{v(w)}(J)` for every `w` in the depth-`n` Fibonacci language, where
/// `v` is [`vee_map`] and the last symbol of `v(w)` is applied first.
pub fn repeller_pieces(bs: &BranchSystem, depth: usize) -> Result<Vec<Piece>, CubicError> {
    if depth > 12 {
        return Err(CubicError::DepthTooLarge(depth));
    }
    fib_language(depth)
        .into_iter()
        .map(|w| {
            let v = vee_map(&w).expect("language words are admissible");
            let interval = v
                .symbols()
                .iter()
                .rev()
                .try_fold(bs.j, |iv, &b| bs.apply(b, iv))?;
            Ok(Piece { word: w, interval })
        })
        .collect()
}

/// `true` when the intervals, sorted by left endpoint, do not touch.
pub fn pairwise_disjoint(pieces: &[Piece]) -> bool {
    let mut iv: Vec<(f64, f64)> = pieces.iter().map(|p| p.interval).collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    iv.windows(2).all(|w| w[0].1 < w[1].0)
}

/// `s` values where `F_s(c_s)` is checked to increase: `k + 1` evenly spaced
/// rationals on `[1, hi]`.
pub fn rational_grid(hi: &Q, k: usize) -> Vec<Q> {
    (0..=k).map(|i| q(1) + (hi - q(1)) * Q::new(i.into(), k.max(1).into())).collect()
}

/// `c_s + s`, which is nonpositive on `[1, s_*]`.
pub fn turning_gap(s: &Q) -> Result<Q, CubicError> {
    let p = CubicParam::new(s.clone())?;
    Ok(p.c + s)
}
