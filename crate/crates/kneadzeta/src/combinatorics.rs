//! Combinatorics vectors `rho` and their piecewise-linear models.
//!
//! A combinatorics of size `n` is a vector `(rho_0, ..., rho_n)` with entries
//! in `{0, ..., n}`; it records where each marked point `i` of a piecewise
//! monotone map is sent. The model `F_rho` joins the dots `(i, rho_i)` by
//! straight segments, so on `[j, j+1]` it is
//! `F(x) = (rho_{j+1} - rho_j)(x - j) + rho_j`.
//!
//! ```
//! use kneadzeta::combinatorics::{generate_vu, is_virtually_unimodal, turning_points};
//!
//! let rho = generate_vu(2).unwrap();
//! assert_eq!(rho.to_string(), "7,3,4,5,6,3,2,0");
//! assert_eq!(turning_points(&rho), vec![1, 4]);
//! assert_eq!(is_virtually_unimodal(&rho), Some(4));
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombError {
    #[error("a combinatorics needs at least two entries")]
    TooShort,
    #[error("entry {value} at index {index} exceeds n = {n}")]
    OutOfRange { index: usize, value: usize, n: usize },
    #[error("cannot parse combinatorics `{0}`")]
    Parse(String),
    #[error("adjacent equal entries at {0}")]
    NotPiecewiseMonotone(usize),
    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("nu must be at least 2, got {0}")]
    NuTooSmall(usize),
    #[error("point {0} is not periodic")]
    NotPeriodic(String),
    #[error("point {0} lies outside [1, 3]")]
    OutsideCore(String),
    #[error("points {0} and {1} must differ with signs alternating along the list")]
    Alternation(usize, usize),
    #[error("last point {0} exceeds 2")]
    LastPointTooLarge(String),
    #[error("an interval of points has period {0}")]
    Degenerate(usize),
}

/// The vector `(rho_0, ..., rho_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Combinatorics {
    entries: Vec<usize>,
}

impl Combinatorics {
    pub fn new(entries: Vec<usize>) -> Result<Self, CombError> {
        if entries.len() < 2 {
            return Err(CombError::TooShort);
        }
        let n = entries.len() - 1;
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v > n) {
            return Err(CombError::OutOfRange { index, value, n });
        }
        Ok(Combinatorics { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `rho_i`.
    pub fn apply(&self, i: usize) -> usize {
        self.entries[i]
    }

    /// Iterates `i -> rho_i` `k` times.
    pub fn iterate(&self, mut i: usize, k: usize) -> usize {
        for _ in 0..k {
            i = self.entries[i];
        }
        i
    }
}

impl FromStr for Combinatorics {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Self, CombError> {
        let entries = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|e| e.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CombError::Parse(s.to_string()))?;
        Combinatorics::new(entries)
    }
}

impl fmt::Display for Combinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Combinatorics {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Combinatorics", 1)?;
        st.serialize_field("rho", &self.entries)?;
        st.end()
    }
}

/// Connect-the-dots map `F_rho` on `[0, n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlModel {
    rho: Combinatorics,
}

pub fn pl_model(rho: &Combinatorics) -> PlModel {
    PlModel { rho: rho.clone() }
}

impl PlModel {
    pub fn rho(&self) -> &Combinatorics {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    /// Slope on `[j, j+1]`.
    pub fn slope(&self, j: usize) -> i64 {
        self.rho.entries[j + 1] as i64 - self.rho.entries[j] as i64
    }

    /// Affine data `(slope, intercept)` of the piece on `[j, j+1]`.
    pub fn piece(&self, j: usize) -> (Q, Q) {
        let s = self.slope(j);
        (q(s), q(self.rho.entries[j] as i64 - s * j as i64))
    }

    /// Index `j` of a segment `[j, j+1]` containing `x`.
    pub fn segment_of(&self, x: &Q) -> usize {
        let j = x.floor().to_integer();
        let j: usize = j.try_into().unwrap_or(0);
        j.min(self.n() - 1)
    }

    pub fn contains(&self, x: &Q) -> bool {
        !x.is_negative() && *x <= q(self.n() as i64)
    }

    pub fn eval(&self, x: &Q) -> Result<Q, CombError> {
        if !self.contains(x) {
            return Err(CombError::OutsideDomain(x.to_string()));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Q) -> Q {
        let j = self.segment_of(x);
        let (a, b) = self.piece(j);
        a * x + b
    }

    /// Image of `[lo, hi]` with integer ends.
    pub fn image_of_integer_interval(&self, lo: usize, hi: usize) -> (usize, usize) {
        let vals = &self.rho.entries[lo..=hi];
        (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
    }
}

/// Interior indices where the direction of `rho` flips.
pub fn turning_points(rho: &Combinatorics) -> Vec<usize> {
    let e = &rho.entries;
    (1..rho.n())
        .filter(|&i| {
            let left = e[i] as i64 - e[i - 1] as i64;
            let right = e[i + 1] as i64 - e[i] as i64;
            left * right < 0
        })
        .collect()
}

/// Orbit decomposed as a preperiodic tail followed by a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo<T> {
    pub preperiod: usize,
    pub cycle: Vec<T>,
    /// The tail before the cycle.
    pub tail: Vec<T>,
}

impl<T> OrbitInfo<T> {
    pub fn period(&self) -> usize {
        self.cycle.len()
    }
}

impl<T: Clone> OrbitInfo<T> {
    /// Tail followed by cycle.
    pub fn points(&self) -> Vec<T> {
        self.tail.iter().chain(self.cycle.iter()).cloned().collect()
    }
}

/// Orbit of the index `i` under `i -> rho_i`.
pub fn orbit(rho: &Combinatorics, i: usize) -> OrbitInfo<usize> {
    let mut seen = vec![usize::MAX; rho.entries.len()];
    let mut path = Vec::new();
    let mut x = i;
    while seen[x] == usize::MAX {
        seen[x] = path.len();
        path.push(x);
        x = rho.entries[x];
    }
    let pre = seen[x];
    OrbitInfo { preperiod: pre, cycle: path[pre..].to_vec(), tail: path[..pre].to_vec() }
}

/// Result of [`is_pm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmCheck {
    Pm,
    /// `rho_i == rho_{i+1}` at this `i`.
    EqualAdjacent(usize),
}

impl PmCheck {
    pub fn is_pm(self) -> bool {
        self == PmCheck::Pm
    }
}

/// Whether `F_rho` is piecewise monotone: no two adjacent entries agree.
pub fn is_pm(rho: &Combinatorics) -> PmCheck {
    match rho.entries.windows(2).position(|w| w[0] == w[1]) {
        Some(i) => PmCheck::EqualAdjacent(i),
        None => PmCheck::Pm,
    }
}

/// Result of [`is_own_combinatorics`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OwnCheck {
    Own,
    /// The combinatorics actually realized by `F_rho`, obtained by keeping
    /// only the boundary and the turning-point orbits. `marked` lists the
    /// kept indices of the original vector in increasing order.
    Induced { rho: Combinatorics, marked: Vec<usize> },
}

impl OwnCheck {
    pub fn is_own(&self) -> bool {
        matches!(self, OwnCheck::Own)
    }
}

/// Forward closure of the boundary and the turning points.
pub fn marked_points(rho: &Combinatorics) -> Vec<usize> {
    let mut marked = BTreeSet::new();
    let seeds = [0, rho.n()].into_iter().chain(turning_points(rho));
    for s in seeds {
        marked.extend(orbit(rho, s).points());
    }
    marked.into_iter().collect()
}

/// Whether every interior index lies on a turning-point orbit, so that the
/// combinatorics read off `F_rho` is `rho` itself.
pub fn is_own_combinatorics(rho: &Combinatorics) -> OwnCheck {
    let mut covered = vec![false; rho.entries.len()];
    for c in turning_points(rho) {
        for x in orbit(rho, c).points() {
            covered[x] = true;
        }
    }
    if (1..rho.n()).all(|i| covered[i]) {
        return OwnCheck::Own;
    }
    let marked = marked_points(rho);
    let index: HashMap<usize, usize> = marked.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let entries = marked.iter().map(|&m| index[&rho.entries[m]]).collect();
    let induced = Combinatorics::new(entries).expect("marked set is forward invariant");
    OwnCheck::Induced { rho: induced, marked }
}

/// Both boundary points are sent into `{0, n}`.
pub fn is_framed(rho: &Combinatorics) -> bool {
    let n = rho.n();
    let ok = |v: usize| v == 0 || v == n;
    ok(rho.entries[0]) && ok(rho.entries[n])
}

/// The interval spanned by the first two images of `c`.
pub fn vu_hull(rho: &Combinatorics, c: usize) -> (usize, usize) {
    let f1 = rho.apply(c);
    let f2 = rho.apply(f1);
    (f1.min(f2), f1.max(f2))
}

fn is_dominant(rho: &Combinatorics, trn: &[usize], c: usize) -> bool {
    let (lo, hi) = vu_hull(rho, c);
    let inside: Vec<usize> = trn.iter().copied().filter(|&t| lo < t && t < hi).collect();
    if inside != [c] {
        return false;
    }
    if !orbit(rho, c).points().iter().all(|&x| lo <= x && x <= hi) {
        return false;
    }
    trn.iter().all(|&t| orbit(rho, t).points().iter().any(|&x| lo <= x && x <= hi))
}

/// Dominant turning point of a virtually unimodal `F_rho`, if any.
///
/// For a turning point `c` with hull `H = <F^2(c), F(c)>` the conditions are:
/// `c` is the only turning point inside `H`, the orbit of `c` stays in `H`,
/// and every turning-point orbit reaches `H`.
pub fn is_virtually_unimodal(rho: &Combinatorics) -> Option<usize> {
    let trn = turning_points(rho);
    trn.iter().copied().find(|&c| is_dominant(rho, &trn, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Fatou,
    Julia,
}

/// Fatou when the orbit of the index meets a turning point.
pub fn classify_points(rho: &Combinatorics) -> Vec<PointKind> {
    let trn: BTreeSet<usize> = turning_points(rho).into_iter().collect();
    (0..=rho.n())
        .map(|i| {
            if orbit(rho, i).points().iter().any(|x| trn.contains(x)) {
                PointKind::Fatou
            } else {
                PointKind::Julia
            }
        })
        .collect()
}

/// Separation time of one Julia edge `(j, j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeWitness {
    pub j: usize,
    /// First `m >= 1` with `|F^m(j) - F^m(j+1)| > 1`; `None` when the pair
    /// orbit cycles first.
    pub m: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpandingReport {
    pub expanding: bool,
    pub witnesses: Vec<EdgeWitness>,
}

/// Checks that every pair of consecutive Julia indices is eventually pulled
/// more than one unit apart.
pub fn is_expanding(rho: &Combinatorics) -> ExpandingReport {
    let kinds = classify_points(rho);
    let mut witnesses = Vec::new();
    for j in 0..rho.n() {
        if kinds[j] != PointKind::Julia || kinds[j + 1] != PointKind::Julia {
            continue;
        }
        let mut seen = BTreeSet::new();
        let (mut a, mut b) = (j, j + 1);
        let mut m = 0;
        let found = loop {
            if !seen.insert((a, b)) {
                break None;
            }
            a = rho.apply(a);
            b = rho.apply(b);
            m += 1;
            if a.abs_diff(b) > 1 {
                break Some(m);
            }
        };
        witnesses.push(EdgeWitness { j, m: found });
    }
    let expanding = witnesses.iter().all(|w| w.m.is_some());
    ExpandingReport { expanding, witnesses }
}

/// Framed virtually unimodal combinatorics with `nu` turning points.
///
/// Layout for size `n = nu + 5`:
/// `rho_0` is `n` for even `nu` and `0` for odd `nu`; indices `1..nu-1`
/// alternate between `nu+3` and `nu+1`, ending on `nu+1`; indices
/// `nu..=nu+4` carry `(nu+2, nu+3, nu+4, nu+1, nu)`; `rho_n = 0`. The block
/// `nu..=nu+4` is a copy of `(0,2,3,1,0)` restricted to its core and marked
/// along a 2-cycle, and every extra turning point lands on that 2-cycle. The
/// dominant turning point sits at `nu + 2`.
pub fn generate_vu(nu: usize) -> Result<Combinatorics, CombError> {
    if nu < 2 {
        return Err(CombError::NuTooSmall(nu));
    }
    let n = nu + 5;
    let mut e = vec![0; n + 1];
    e[0] = if nu.is_multiple_of(2) { n } else { 0 };
    for i in 1..nu {
        e[i] = if (nu - 1 - i).is_multiple_of(2) { nu + 1 } else { nu + 3 };
    }
    e[nu..nu + 5].copy_from_slice(&[nu + 2, nu + 3, nu + 4, nu + 1, nu]);
    e[n] = 0;
    Combinatorics::new(e)
}

/// Continuum of periodic points: `F^p` is the identity on `interval`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateFamily {
    /// Segment indices visited by the family.
    pub word: Vec<usize>,
    #[serde(serialize_with = "ser_pair")]
    pub interval: (Q, Q),
}

fn ser_pair<S: serde::Serializer>(p: &(Q, Q), s: S) -> Result<S::Ok, S::Error> {
    [p.0.to_string(), p.1.to_string()].serialize(s)
}

/// Periodic orbits of a given minimal period of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlPeriodic {
    pub orbits: Vec<OrbitInfo<Q>>,
    pub degenerate: Vec<DegenerateFamily>,
}

struct Branch {
    word: Vec<usize>,
    lo: Q,
    hi: Q,
    a: Q,
    b: Q,
}

/// All orbits of minimal period `p` of `F_rho`, in exact arithmetic.
///
/// Points are found by walking segment itineraries of length `p`: along an
/// itinerary `F^p` is affine, `x -> a x + b`, on an interval of admissible
/// starting points, and the unique solution of `a x + b = x` is kept when it
/// lies in that interval. Itineraries with `a = 1, b = 0` are reported as
/// degenerate families; their endpoints are ordinary periodic points and are
/// included among the orbits.
pub fn periodic_orbits_of_pl(model: &PlModel, p: usize) -> Result<PlPeriodic, CombError> {
    if p == 0 {
        return Err(CombError::ZeroPeriod);
    }
    if let PmCheck::EqualAdjacent(i) = is_pm(model.rho()) {
        return Err(CombError::NotPiecewiseMonotone(i));
    }
    let n = model.n();
    let mut stack: Vec<Branch> = (0..n)
        .map(|j| {
            let (a, b) = model.piece(j);
            Branch { word: vec![j], lo: q(j as i64), hi: q(j as i64 + 1), a, b }
        })
        .collect();
    let mut fixed: BTreeSet<Q> = BTreeSet::new();
    let mut degenerate: Vec<DegenerateFamily> = Vec::new();
    while let Some(br) = stack.pop() {
        if br.word.len() == p {
            if br.a.is_one() {
                if br.b.is_zero() {
                    fixed.insert(br.lo.clone());
                    fixed.insert(br.hi.clone());
                    if br.lo < br.hi && !degenerate.iter().any(|d| d.interval == (br.lo.clone(), br.hi.clone())) {
                        degenerate.push(DegenerateFamily { word: br.word, interval: (br.lo, br.hi) });
                    }
                }
                continue;
            }
            let x = &br.b / (Q::one() - &br.a);
            if br.lo <= x && x <= br.hi {
                fixed.insert(x);
            }
            continue;
        }
        let y0 = &br.a * &br.lo + &br.b;
        let y1 = &br.a * &br.hi + &br.b;
        let (ylo, yhi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        for j in 0..n {
            let (slo, shi) = (q(j as i64), q(j as i64 + 1));
            let lo_y = if ylo > slo { ylo.clone() } else { slo.clone() };
            let hi_y = if yhi < shi { yhi.clone() } else { shi.clone() };
            if lo_y > hi_y {
                continue;
            }
            let x0 = (&lo_y - &br.b) / &br.a;
            let x1 = (&hi_y - &br.b) / &br.a;
            let (lo, hi) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
            let (s, c) = model.piece(j);
            let mut word = br.word.clone();
            word.push(j);
            stack.push(Branch { word, lo, hi, a: &s * &br.a, b: &s * &br.b + c });
        }
    }
    degenerate.sort_by(|x, y| x.interval.cmp(&y.interval));
    let mut orbits = Vec::new();
    let mut used: BTreeSet<Q> = BTreeSet::new();
    for x in &fixed {
        if used.contains(x) {
            continue;
        }
        let mut cycle = vec![x.clone()];
        let mut y = model.eval_unchecked(x);
        while &y != x && cycle.len() <= p {
            cycle.push(y.clone());
            y = model.eval_unchecked(&y);
        }
        if cycle.len() == p && &y == x {
            used.extend(cycle.iter().cloned());
            orbits.push(OrbitInfo { preperiod: 0, cycle, tail: Vec::new() });
        }
    }
    Ok(PlPeriodic { orbits, degenerate })
}

/// Number of fixed points of `F^k` for `k = 1..=n`. Fails when some `F^k`
/// fixes a whole interval.
pub fn periodic_counts_of_pl(model: &PlModel, n: usize) -> Result<Vec<usize>, CombError> {
    let mut by_period = Vec::with_capacity(n);
    for p in 1..=n {
        let found = periodic_orbits_of_pl(model, p)?;
        if !found.degenerate.is_empty() {
            return Err(CombError::Degenerate(p));
        }
        by_period.push(p * found.orbits.len());
    }
    Ok((1..=n)
        .map(|k| (1..=k).filter(|d| k % d == 0).map(|d| by_period[d - 1]).sum())
        .collect())
}

/// Orbit of a rational point under `F_rho`, detected exactly.
pub fn pl_orbit(model: &PlModel, x: &Q) -> Result<OrbitInfo<Q>, CombError> {
    let mut seen: BTreeMap<Q, usize> = BTreeMap::new();
    let mut path = Vec::new();
    let mut y = x.clone();
    if !model.contains(&y) {
        return Err(CombError::OutsideDomain(y.to_string()));
    }
    while !seen.contains_key(&y) {
        seen.insert(y.clone(), path.len());
        path.push(y.clone());
        y = model.eval_unchecked(&y);
    }
    let pre = seen[&y];
    Ok(OrbitInfo { preperiod: pre, cycle: path[pre..].to_vec(), tail: path[..pre].to_vec() })
}

/// Builds a framed virtually unimodal combinatorics by grafting extra turning
/// points onto the period-three map `(0,2,3,1,0)`.
///
/// The `nu - 1` points `k_1, ..., k_{nu-1}` must be periodic for that map,
/// lie in `[1, 3]`, satisfy `k_{nu-1} <= 2`, and zigzag: the signs of
/// `k_i - k_{i+1}` alternate. Their orbits together with `0, ..., 4` are
/// marked; if `y_1 < ... < y_{n'}` are the marked points in `[1, 3]` and
/// `xi_i` is the position of `F(y_i)`, the output of size `n = n' + nu` is
///
/// * `rho_0 = n` for even `nu`, `0` for odd `nu`;
/// * `rho_i = pos(k_i) + nu - 1` for `1 <= i < nu`;
/// * `rho_{i + nu - 1} = xi_i + nu - 1` for `1 <= i <= n'`;
/// * `rho_n = 0`.
pub fn build_vu_from_periodic_points(points: &[Q]) -> Result<Combinatorics, CombError> {
    let base = Combinatorics::new(vec![0, 2, 3, 1, 0]).expect("valid");
    if points.is_empty() {
        return Ok(base);
    }
    let model = pl_model(&base);
    let (one, three) = (q(1), q(3));
    let mut marked: BTreeSet<Q> = (0..=4).map(q).collect();
    for k in points {
        if *k < one || *k > three {
            return Err(CombError::OutsideCore(k.to_string()));
        }
        let orb = pl_orbit(&model, k)?;
        if orb.preperiod != 0 {
            return Err(CombError::NotPeriodic(k.to_string()));
        }
        marked.extend(orb.cycle);
    }
    let mut last_sign = None;
    for (i, w) in points.windows(2).enumerate() {
        let d = &w[0] - &w[1];
        if d.is_zero() || last_sign == Some(d.is_positive()) {
            return Err(CombError::Alternation(i, i + 1));
        }
        last_sign = Some(d.is_positive());
    }
    let last = points.last().expect("nonempty");
    if *last > q(2) {
        return Err(CombError::LastPointTooLarge(last.to_string()));
    }
    let y: Vec<Q> = marked.into_iter().collect();
    let pos: BTreeMap<&Q, usize> = y.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let core: Vec<&Q> = y.iter().filter(|v| **v >= one && **v <= three).collect();
    let nu = points.len() + 1;
    let n = core.len() + nu;
    let mut e = vec![0; n + 1];
    e[0] = if nu.is_multiple_of(2) { n } else { 0 };
    for (i, k) in points.iter().enumerate() {
        e[i + 1] = pos[k] + nu - 1;
    }
    for (i, v) in core.iter().enumerate() {
        let image = model.eval_unchecked(v);
        e[i + nu] = pos[&image] + nu - 1;
    }
    let rho = Combinatorics::new(e)?;
    if let PmCheck::EqualAdjacent(i) = is_pm(&rho) {
        return Err(CombError::NotPiecewiseMonotone(i));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_parentheses() {
        let rho: Combinatorics = "(0, 2, 3, 1, 0)".parse().unwrap();
        assert_eq!(rho.to_string(), "0,2,3,1,0");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            Combinatorics::new(vec![0, 1, 3, 7, 0]),
            Err(CombError::OutOfRange { index: 3, value: 7, n: 4 })
        ));
    }
}
