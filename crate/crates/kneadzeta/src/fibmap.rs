//! The Fibonacci tent map and the interval families built from the closest
//! returns of its turning point.
//!
//! `T(x) = lambda * min(x, 1 - x)` on `[0, 1]`, turning point `c = 1/2`,
//! `c_n = T^n(c)`. The cut times `S(k)` are the Fibonacci numbers with
//! `S(-2) = 0`, `S(-1) = 1`, and the Fibonacci parameter is the slope at which
//! `c_{S(k)}` are exactly the successive closest returns of `c` to itself.
//!
//! Orbits are computed in fixed point: a point `x` is the integer
//! `floor(x * 2^bits)`. Every step loses less than one unit and multiplies
//! earlier errors by at most 2, so `bits` well above the orbit length keeps all
//! comparisons with `c` exact.

use num::{BigInt, BigRational, One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FibError {
    #[error("side of c_S({k}) disagrees with the mod 4 pattern")]
    SideMismatch { k: usize },
    #[error("the target sequence is not bracketed by the slopes {lo} and {hi}")]
    Bracket { lo: f64, hi: f64 },
    #[error("depth {0} is outside 1..=20")]
    Depth(usize),
    #[error("slope {0} is outside (1, 2]")]
    Slope(f64),
    #[error("needs the kneading sequence through c_{needed}, slope is validated through c_{matched}")]
    NotValidated { needed: usize, matched: usize },
    #[error("closest-return ordering fails at level {0}")]
    OrbitOrder(usize),
}

/// `S(k)` for `k >= -2`.
pub fn cut_time(k: i64) -> usize {
    assert!(k >= -2, "cut times start at S(-2)");
    let (mut a, mut b) = (0usize, 1usize);
    for _ in -2..k {
        (a, b) = (b, a + b);
    }
    a
}

/// `S(0), ..., S(k)`.
pub fn cut_times(k: usize) -> Vec<usize> {
    (0..=k as i64).map(cut_time).collect()
}

fn side_by_rule(k: usize) -> i8 {
    if matches!(k % 4, 0 | 3) {
        1
    } else {
        -1
    }
}

/// Sides of `c_1, ..., c_{S(depth)}` relative to `c` (`+1` right, `-1` left).
///
/// Positions `S(k-1)+1 ..= S(k)` repeat positions `1 ..= S(k-2)` with the last
/// symbol flipped. The result is checked against the rule that `c_{S(k)}` lies
/// right of `c` for `k = 0, 3 (mod 4)` and left otherwise.
pub fn target_kneading(depth: usize) -> Result<Vec<i8>, FibError> {
    let mut seq: Vec<i8> = vec![1];
    for k in 1..=depth as i64 {
        let len = cut_time(k - 2);
        seq.extend_from_within(..len);
        let last = seq.len() - 1;
        seq[last] = -seq[last];
        debug_assert_eq!(seq.len(), cut_time(k), "segment ends at S({k})");
    }
    for k in 0..=depth {
        if seq[cut_time(k as i64) - 1] != side_by_rule(k) {
            return Err(FibError::SideMismatch { k });
        }
    }
    Ok(seq)
}

/// Signs `e_n = -side(c_n)` of `T'` along the orbit, `n = 1..=len`.
pub fn fibonacci_epsilon(len: usize) -> Vec<i8> {
    let mut depth = 1;
    while cut_time(depth as i64) < len {
        depth += 1;
    }
    let target = target_kneading(depth).expect("segment rule is consistent");
    target[..len].iter().map(|s| -s).collect()
}

fn raw_to_f64(x: &BigInt, bits: u32) -> f64 {
    let len = x.bits();
    let drop = len.saturating_sub(64);
    let mantissa: BigInt = x >> drop as usize;
    mantissa.to_f64().unwrap_or(f64::NAN) * 2f64.powi(drop as i32 - bits as i32)
}

/// Orbit `c_0, ..., c_len` of the turning point in fixed point.
#[derive(Clone, Debug)]
pub struct TentOrbit {
    bits: u32,
    lambda: BigInt,
    points: Vec<BigInt>,
}

impl TentOrbit {
    pub fn new(lambda: &BigInt, bits: u32, len: usize) -> Self {
        let one = BigInt::one() << bits as usize;
        let mut x = BigInt::one() << (bits - 1) as usize;
        let mut points = Vec::with_capacity(len + 1);
        points.push(x.clone());
        for _ in 0..len {
            let folded = if x.clone() * 2 > one { &one - &x } else { x.clone() };
            x = (lambda * folded) >> bits as usize;
            points.push(x.clone());
        }
        TentOrbit { bits, lambda: lambda.clone(), points }
    }

    /// Largest index available.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() <= 1
    }

    pub fn raw(&self, n: usize) -> &BigInt {
        &self.points[n]
    }

    pub fn point(&self, n: usize) -> f64 {
        raw_to_f64(&self.points[n], self.bits)
    }

    pub fn lambda(&self) -> f64 {
        raw_to_f64(&self.lambda, self.bits)
    }

    /// `+1`, `0` or `-1` as `c_n` is right of, at, or left of `c`.
    pub fn side(&self, n: usize) -> i8 {
        let twice: BigInt = &self.points[n] * 2;
        let one = BigInt::one() << self.bits as usize;
        match twice.cmp(&one) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => -1,
        }
    }

    /// `|c_n - c|` in fixed point.
    pub fn dist_raw(&self, n: usize) -> BigInt {
        let half = BigInt::one() << (self.bits - 1) as usize;
        (&self.points[n] - half).abs()
    }

    pub fn dist(&self, n: usize) -> f64 {
        raw_to_f64(&self.dist_raw(n), self.bits)
    }

    /// Sides of `c_1..c_len`.
    pub fn itinerary(&self) -> Vec<i8> {
        (1..=self.len()).map(|n| self.side(n)).collect()
    }
}

/// Compares itineraries of `c_1` in the unimodal order: the first difference
/// decides, `L < C < R`, reversed after an odd number of common `R`s.
pub fn compare_itineraries(a: &[i8], b: &[i8]) -> std::cmp::Ordering {
    let mut flips = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            let ord = x.cmp(y);
            return if flips % 2 == 0 { ord } else { ord.reverse() };
        }
        if *x == 1 {
            flips += 1;
        }
    }
    std::cmp::Ordering::Equal
}

/// Number of leading positions where two itineraries agree.
fn agreement(a: &[i8], b: &[i8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// A slope together with the length of the prefix of the target kneading
/// sequence it reproduces.
#[derive(Clone, Debug, Serialize)]
pub struct FibLambda {
    pub value: f64,
    pub bracket: (f64, f64),
    pub depth: usize,
    /// The itinerary of `c_1` agrees with the target through `c_matched`.
    pub matched: usize,
    #[serde(skip)]
    raw: BigInt,
    #[serde(skip)]
    bits: u32,
}

impl FibLambda {
    /// Wraps a floating slope, checking how far its itinerary follows the
    /// Fibonacci sequence.
    pub fn from_f64(lambda: f64) -> Result<Self, FibError> {
        if !(lambda > 1.0 && lambda <= 2.0) {
            return Err(FibError::Slope(lambda));
        }
        let q = BigRational::from_float(lambda).ok_or(FibError::Slope(lambda))?;
        Self::from_rational(&q, 64)
    }

    /// Parses a decimal slope such as `1.7292119317087...`, keeping every
    /// digit given.
    pub fn from_decimal(text: &str) -> Result<Self, FibError> {
        let bad = || FibError::Slope(text.parse().unwrap_or(f64::NAN));
        let (int, frac) = text.trim().split_once('.').unwrap_or((text.trim(), ""));
        if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(num, den);
        let value = q.to_f64().unwrap_or(f64::NAN);
        if !(value > 1.0 && value <= 2.0) {
            return Err(FibError::Slope(value));
        }
        Self::from_rational(&q, 4 * frac.len() as u32 + 64)
    }

    fn from_rational(q: &BigRational, precision: u32) -> Result<Self, FibError> {
        let mut depth = 2;
        while cut_time(depth as i64) < 2 * precision as usize + 40 {
            depth += 1;
        }
        let horizon = cut_time(depth as i64);
        let bits = horizon as u32 + 128;
        let scaled = q * BigRational::from_integer(BigInt::one() << bits as usize);
        let raw = scaled.floor().to_integer();
        let orbit = TentOrbit::new(&raw, bits, horizon);
        let matched = agreement(&orbit.itinerary(), &target_kneading(depth)?);
        let value = raw_to_f64(&raw, bits);
        Ok(FibLambda { value, bracket: (value, value), depth: 0, matched, raw, bits })
    }

    /// The slope to `digits` decimal places, truncated.
    pub fn decimal(&self, digits: usize) -> String {
        let scaled: BigInt = (&self.raw * num::pow(BigInt::from(10), digits)) >> self.bits as usize;
        let s = scaled.to_string();
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{int}.{frac}")
    }

    pub fn orbit(&self, len: usize) -> TentOrbit {
        TentOrbit::new(&self.raw, self.bits, len)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

/// Bisects the slope until the bracket is narrower than `tol` and the
/// itinerary of `c_1` reproduces the target through `c_{S(depth+1)}`.
///
/// The order of [`compare_itineraries`] is monotone in the slope. Which end
/// of the bracket is larger is read off the endpoints, so nothing depends on
/// the direction of that monotonicity.
pub fn find_fib_lambda(depth: usize, tol: f64) -> Result<FibLambda, FibError> {
    if depth == 0 || depth > 20 {
        return Err(FibError::Depth(depth));
    }
    let needed = cut_time(depth as i64 + 1);
    let horizon = cut_time(depth as i64 + 2);
    let bits = horizon as u32 + 128;
    let target = target_kneading(depth + 2)?;
    let scale = BigInt::one() << bits as usize;
    let cmp_at = |raw: &BigInt| {
        let it = TentOrbit::new(raw, bits, horizon).itinerary();
        (compare_itineraries(&it, &target), agreement(&it, &target))
    };
    let mut lo: BigInt = &scale * 3 / 2;
    let mut hi: BigInt = &scale * 2;
    let (lo_ord, _) = cmp_at(&lo);
    let (hi_ord, _) = cmp_at(&hi);
    let to_f = |x: &BigInt| raw_to_f64(x, bits);
    if lo_ord == hi_ord || lo_ord.is_eq() || hi_ord.is_eq() {
        return Err(FibError::Bracket { lo: to_f(&lo), hi: to_f(&hi) });
    }
    let tol_raw = BigInt::from((tol.max(0.0) * 2f64.powi(60)) as u64) << (bits as usize).saturating_sub(60);
    let mut matched = 0;
    let mut mid = (&lo + &hi) >> 1usize;
    for _ in 0..bits {
        mid = (&lo + &hi) >> 1usize;
        let (ord, agree) = cmp_at(&mid);
        matched = agree;
        if ord.is_eq() || ((&hi - &lo) <= tol_raw && agree >= needed) {
            break;
        }
        if ord == lo_ord {
            lo = mid.clone();
        } else {
            hi = mid.clone();
        }
    }
    let found = FibLambda {
        value: to_f(&mid),
        bracket: (to_f(&lo), to_f(&hi)),
        depth,
        matched,
        raw: mid,
        bits,
    };
    let orbit = found.orbit(needed);
    for k in 0..=depth {
        if !orbit_order_holds(&orbit, k) {
            return Err(FibError::OrbitOrder(k));
        }
    }
    Ok(found)
}

/// `|c_i - c| > |c_{S(k-1)} - c|` for every `0 < i < S(k)` other than
/// `S(k-1)`.
pub fn orbit_order_holds(orbit: &TentOrbit, k: usize) -> bool {
    let k = k as i64;
    let (prev, upto) = (cut_time(k - 1), cut_time(k));
    if upto > orbit.len() + 1 {
        return false;
    }
    let d = orbit.dist_raw(prev);
    (1..upto).filter(|&i| i != prev).all(|i| orbit.dist_raw(i) > d)
}

/// Closed interval between two orbit points, named by their indices and
/// listed left endpoint first. Index `0` is `c` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeled {
    pub name: String,
    pub left: usize,
    pub right: usize,
}

impl Labeled {
    fn new(name: String, a: usize, b: usize, orbit: &TentOrbit) -> Self {
        let (left, right) = if orbit.raw(a) <= orbit.raw(b) { (a, b) } else { (b, a) };
        Labeled { name, left, right }
    }

    /// Endpoint indices as an unordered pair, smaller index first.
    pub fn indices(&self) -> (usize, usize) {
        (self.left.min(self.right), self.left.max(self.right))
    }

    pub fn label(&self) -> String {
        format!("[c_{}, c_{}]", self.left, self.right)
    }
}

/// One level `k` of the construction.
#[derive(Clone, Debug, Serialize)]
pub struct Level {
    pub k: usize,
    pub i: Labeled,
    pub d: Labeled,
    pub j: Option<Labeled>,
    /// `I_k^n` for `n < S(k-1)`, then `J_k^n` for `n < S(k-2)`.
    pub m: Vec<Labeled>,
}

#[derive(Clone, Debug)]
pub struct IntervalFamily {
    pub orbit: TentOrbit,
    pub levels: Vec<Level>,
}

/// `I_k^n` (with `I_k^0 = I_k`).
fn i_piece(k: usize, n: usize, orbit: &TentOrbit) -> Labeled {
    let s = |j: i64| cut_time(j);
    let k_ = k as i64;
    let (a, b) = if n == 0 {
        (s(k_), if k.is_multiple_of(2) { s(k_ + 1) } else { s(k_ + 2) })
    } else {
        (n, s(k_) + n)
    };
    let name = if n == 0 { format!("I_{k}") } else { format!("I_{k}^{n}") };
    Labeled::new(name, a, b, orbit)
}

/// `J_k^n = [c_{S(k-1)+n}, c_{S(k+1)+S(k-1)+n}]`.
fn j_piece(k: usize, n: usize, orbit: &TentOrbit) -> Labeled {
    let k_ = k as i64;
    let a = cut_time(k_ - 1) + n;
    let b = cut_time(k_ + 1) + cut_time(k_ - 1) + n;
    let name = if n == 0 { format!("J_{k}") } else { format!("J_{k}^{n}") };
    Labeled::new(name, a, b, orbit)
}

/// Levels `0..=k_max + 1` of `I_k`, `D_k`, `J_k` and `M_k`.
pub fn interval_families(lam: &FibLambda, k_max: usize) -> Result<IntervalFamily, FibError> {
    let needed = cut_time(k_max as i64 + 3);
    if lam.matched < needed {
        return Err(FibError::NotValidated { needed, matched: lam.matched });
    }
    let orbit = lam.orbit(needed);
    let levels = (0..=k_max + 1)
        .map(|k| {
            let k_ = k as i64;
            let mut m: Vec<Labeled> = (0..cut_time(k_ - 1)).map(|n| i_piece(k, n, &orbit)).collect();
            m.extend((0..cut_time(k_ - 2)).map(|n| j_piece(k, n, &orbit)));
            Level {
                k,
                i: i_piece(k, 0, &orbit),
                d: Labeled::new(format!("D_{k}"), 0, cut_time(k_), &orbit),
                j: (k >= 1).then(|| j_piece(k, 0, &orbit)),
                m,
            }
        })
        .collect();
    Ok(IntervalFamily { orbit, levels })
}

impl IntervalFamily {
    fn bounds<'a>(&'a self, iv: &Labeled) -> (&'a BigInt, &'a BigInt) {
        (self.orbit.raw(iv.left), self.orbit.raw(iv.right))
    }

    pub fn contains(&self, outer: &Labeled, inner: &Labeled) -> bool {
        let (a, b) = self.bounds(outer);
        let (x, y) = self.bounds(inner);
        a <= x && y <= b
    }

    pub fn disjoint(&self, p: &Labeled, q: &Labeled) -> bool {
        let (a, b) = self.bounds(p);
        let (x, y) = self.bounds(q);
        b < x || y < a
    }

    pub fn diameter(&self, iv: &Labeled) -> f64 {
        let (a, b) = self.bounds(iv);
        raw_to_f64(&(b - a), self.orbit.bits)
    }

    pub fn level(&self, k: usize) -> &Level {
        &self.levels[k]
    }
}

/// Outcome of each structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Sides of `c_{S(k)}` follow the mod 4 rule.
    pub side_pattern: bool,
    /// Closest-return ordering at every level.
    pub orbit_order: bool,
    /// `J_{k'} ⊂ D_{k'-1} ⊂ I_k` for `0 < k < k'`.
    pub j_inside_d_inside_i: bool,
    /// `J_k ∩ J_{k'} = ∅` for `0 < k < k'`.
    pub j_disjoint: bool,
    /// `M_k` has `S(k)` pairwise disjoint pieces.
    pub level_pieces: bool,
    /// Every piece of `M_{k+1}` lies in a piece of `M_k`.
    pub nested: bool,
    /// The pieces of `M_{k+1}` meeting `I_k` are exactly `I_{k+1}` and `J_{k+1}`.
    pub i_splits: bool,
    /// `c` avoids `[c_n, c_{S(k)+n}]` for `0 < n < S(k-1)`, so `T^j` is
    /// injective on `[c_1, c_{S(k)+1}]` for `j < S(k-1)`.
    pub t_injective: bool,
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.side_pattern
            && self.orbit_order
            && self.j_inside_d_inside_i
            && self.j_disjoint
            && self.level_pieces
            && self.nested
            && self.i_splits
            && self.t_injective
    }
}

pub fn verify_structure(fam: &IntervalFamily, k_max: usize) -> StructureReport {
    let o = &fam.orbit;
    let lv = |k: usize| fam.level(k);
    let side_pattern = (0..=k_max + 1).all(|k| o.side(cut_time(k as i64)) == side_by_rule(k));
    let orbit_order = (0..=k_max + 1).all(|k| orbit_order_holds(o, k));
    let mut j_inside_d_inside_i = true;
    let mut j_disjoint = true;
    for k in 1..=k_max {
        for kp in k + 1..=k_max {
            let (jk, jkp) = (lv(k).j.as_ref().unwrap(), lv(kp).j.as_ref().unwrap());
            let d = &lv(kp - 1).d;
            j_inside_d_inside_i &= fam.contains(d, jkp) && fam.contains(&lv(k).i, d);
            j_disjoint &= fam.disjoint(jk, jkp);
        }
    }
    let level_pieces = (0..=k_max).all(|k| {
        let m = &lv(k).m;
        m.len() == cut_time(k as i64)
            && m.iter().enumerate().all(|(a, p)| m[a + 1..].iter().all(|q| fam.disjoint(p, q)))
    });
    let nested = (0..k_max).all(|k| {
        lv(k + 1).m.iter().all(|p| lv(k).m.iter().any(|outer| fam.contains(outer, p)))
    });
    let i_splits = (0..k_max).all(|k| {
        let i = &lv(k).i;
        let mut meeting: Vec<&str> =
            lv(k + 1).m.iter().filter(|p| !fam.disjoint(i, p)).map(|p| p.name.as_str()).collect();
        meeting.sort();
        let mut expected = vec![lv(k + 1).i.name.as_str(), lv(k + 1).j.as_ref().unwrap().name.as_str()];
        expected.sort();
        let inside = lv(k + 1).m.iter().filter(|p| !fam.disjoint(i, p)).all(|p| fam.contains(i, p));
        meeting == expected && inside
    });
    let half = BigInt::one() << (o.bits - 1) as usize;
    let t_injective = (1..=k_max).all(|k| {
        let s = cut_time(k as i64);
        (1..cut_time(k as i64 - 1)).all(|n| {
            let (a, b) = (o.raw(n), o.raw(s + n));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            !(lo <= &half && &half <= hi)
        })
    });
    StructureReport {
        side_pattern,
        orbit_order,
        j_inside_d_inside_i,
        j_disjoint,
        level_pieces,
        nested,
        i_splits,
        t_injective,
    }
}

/// One row of the diameter estimates.
#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub k: usize,
    /// `|D_k| / |D_{k+1}|`.
    pub nu: f64,
    /// `nu_k lambda^{-S(k)}`.
    pub c: f64,
    /// `1 - C_k`, evaluated in fixed point before rounding.
    pub one_minus_c: f64,
    /// `|lambda^{S(k-1)} - nu_{k-1} - 1/nu_k|`, absent for `k = 0`.
    pub residual: Option<f64>,
    /// The residual divided by `lambda^{S(k-1)}`.
    pub relative_residual: Option<f64>,
    /// Relative gap between `|D_0| / |D_{k+1}|` and
    /// `lambda^{S(k+2)-S(1)} prod_{i<=k} C_i`.
    pub product_error: f64,
}

impl TentOrbit {
    /// `lambda^n` in fixed point.
    fn lambda_pow(&self, n: usize) -> BigInt {
        let mut acc = BigInt::one() << self.bits as usize;
        for _ in 0..n {
            acc = (acc * &self.lambda) >> self.bits as usize;
        }
        acc
    }

    /// `1 - C_k` in fixed point.
    fn one_minus_c_raw(&self, k: usize) -> BigInt {
        let s = cut_time(k as i64);
        let num: BigInt = self.dist_raw(s) << (2 * self.bits) as usize;
        let c = num / (self.dist_raw(cut_time(k as i64 + 1)) * self.lambda_pow(s));
        (BigInt::one() << self.bits as usize) - c
    }
}

/// `0 < C_k < 1` for every row and `C_k` strictly increasing, decided on the
/// fixed-point values.
pub fn c_unit_increasing(fam: &IntervalFamily, k_max: usize) -> bool {
    let one = BigInt::one() << fam.orbit.bits as usize;
    let gaps: Vec<BigInt> = (0..=k_max).map(|k| fam.orbit.one_minus_c_raw(k)).collect();
    gaps.iter().all(|g| g.is_positive() && g < &one) && gaps.windows(2).all(|w| w[1] < w[0])
}

pub fn diameter_ratios(fam: &IntervalFamily, k_max: usize) -> Vec<RatioRow> {
    let o = &fam.orbit;
    let lambda = o.lambda();
    let d = |k: usize| o.dist(cut_time(k as i64));
    let nu: Vec<f64> = (0..=k_max).map(|k| d(k) / d(k + 1)).collect();
    let mut prod_c = 1.0;
    (0..=k_max)
        .map(|k| {
            let one_minus_c = raw_to_f64(&o.one_minus_c_raw(k), o.bits);
            let c = 1.0 - one_minus_c;
            prod_c *= c;
            let (residual, relative_residual) = if k == 0 {
                (None, None)
            } else {
                let pw = lambda.powf(cut_time(k as i64 - 1) as f64);
                let r = (pw - nu[k - 1] - 1.0 / nu[k]).abs();
                (Some(r), Some(r / pw))
            };
            let exponent = (cut_time(k as i64 + 2) - cut_time(1)) as f64;
            let predicted = lambda.powf(exponent) * prod_c;
            let product_error = (d(0) / d(k + 1) - predicted).abs() / predicted;
            RatioRow { k, nu: nu[k], c, one_minus_c, residual, relative_residual, product_error }
        })
        .collect()
}

