//! Kneading matrices and kneading determinants of piecewise monotone maps.
//!
//! A map with turning points `c_1 < ... < c_m` has laps `I_0, ..., I_m`, and
//! `I_i` carries the sign `s_i` of the slope there. Each point gets an
//! address, either a lap `I_i` or a turning point `C_j`. One-sided orbits
//! of the turning points are followed symbolically: a point approached from
//! the right of `c_j` lies in `I_j`, from the left in `I_{j-1}`, and the
//! side flips whenever the orbit crosses a decreasing lap.
//!
//! With `theta(x) = sum_n eps_0(x) ... eps_{n-1}(x) A_n(x) t^n` the increment
//! of `c_i` is `theta(c_i+) - theta(c_i-) = sum_j N_{ij} I_j`. Deleting
//! column `i` of the `m x (m+1)` matrix `[N_{ij}]` and dividing by
//! `1 - s_i t` gives the same series `D(t)` for every `i`, up to the sign
//! `(-1)^i`; that common series is the kneading determinant.
//!
//! ```
//! use kneadzeta::combinatorics::pl_model;
//! use kneadzeta::kneading::{kneading_determinant, kneading_matrix};
//!
//! let model = pl_model(&"0,2,3,1,0".parse().unwrap());
//! let kd = kneading_matrix(&model, 8).unwrap();
//! let d = kneading_determinant(&kd).unwrap();
//! assert_eq!(d.to_i64().unwrap(), vec![1, -1, -1, 1, -1, -1, 1, -1, -1]);
//! ```

use num::One;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{self, PlModel};
use crate::series::{q, series_matrix_det, Poly, RationalFn, SeriesError, TruncSeries, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KneadingError {
    #[error("point {point} is within {band:e} of turning point c_{turning} but not on it")]
    Ambiguous { point: String, turning: usize, band: f64 },
    #[error("the map has no turning points")]
    NoTurningPoints,
    #[error("column {column} gives a different determinant than column 0")]
    ColumnDisagreement { column: usize },
    #[error("determinant has leading coefficient {0}, expected 1")]
    LeadingCoefficient(String),
    #[error("expected a unimodal map, found {0} turning points")]
    NotUnimodal(usize),
    #[error("need {needed} signs, got {got}")]
    TooFewSigns { needed: usize, got: usize },
    #[error("sign entries must be +1 or -1")]
    BadSign,
    #[error("empty cycle")]
    EmptyCycle,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Lap `I_i` or turning point `C_j` (numbered from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SymbolicAddress {
    Lap(usize),
    Turning(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn flip_by(self, sign: i8) -> Side {
        match (self, sign < 0) {
            (s, false) => s,
            (Side::Plus, true) => Side::Minus,
            (Side::Minus, true) => Side::Plus,
        }
    }
}

/// A piecewise monotone map that knows its turning points.
pub trait IntervalMap {
    type Point: Clone;

    /// Number of turning points `m`.
    fn turning_count(&self) -> usize;

    /// Signs `s_0, ..., s_m` of the laps.
    fn shape(&self) -> Vec<i8>;

    fn image(&self, x: &Self::Point) -> Self::Point;

    /// Turning point `c_j`, numbered from 1.
    fn turning_point(&self, j: usize) -> Self::Point;

    fn address(&self, x: &Self::Point) -> Result<SymbolicAddress, KneadingError>;
}

/// Sign attached to an address: the lap sign, or 0 on a turning point.
pub fn epsilon(shape: &[i8], a: SymbolicAddress) -> i8 {
    match a {
        SymbolicAddress::Lap(i) => shape[i],
        SymbolicAddress::Turning(_) => 0,
    }
}

impl IntervalMap for PlModel {
    type Point = Q;

    fn turning_count(&self) -> usize {
        combinatorics::turning_points(self.rho()).len()
    }

    fn shape(&self) -> Vec<i8> {
        let mut starts = vec![0];
        starts.extend(combinatorics::turning_points(self.rho()));
        starts.iter().map(|&j| self.slope(j).signum() as i8).collect()
    }

    fn image(&self, x: &Q) -> Q {
        self.eval_unchecked(x)
    }

    fn turning_point(&self, j: usize) -> Q {
        q(combinatorics::turning_points(self.rho())[j - 1] as i64)
    }

    fn address(&self, x: &Q) -> Result<SymbolicAddress, KneadingError> {
        let trn = combinatorics::turning_points(self.rho());
        let mut lap = 0;
        for (k, &c) in trn.iter().enumerate() {
            let c = q(c as i64);
            if *x == c {
                return Ok(SymbolicAddress::Turning(k + 1));
            }
            if *x > c {
                lap = k + 1;
            }
        }
        Ok(SymbolicAddress::Lap(lap))
    }
}

/// Floating-point map given by a closure and its sorted turning points.
///
/// Points within `band` of a turning point, but not equal to it, have no
/// trustworthy address and are reported as ambiguous.
pub struct FloatMap<F: Fn(f64) -> f64> {
    pub f: F,
    pub turning: Vec<f64>,
    pub shape: Vec<i8>,
    pub band: f64,
}

impl<F: Fn(f64) -> f64> IntervalMap for FloatMap<F> {
    type Point = f64;

    fn turning_count(&self) -> usize {
        self.turning.len()
    }

    fn shape(&self) -> Vec<i8> {
        self.shape.clone()
    }

    fn image(&self, x: &f64) -> f64 {
        (self.f)(*x)
    }

    fn turning_point(&self, j: usize) -> f64 {
        self.turning[j - 1]
    }

    fn address(&self, x: &f64) -> Result<SymbolicAddress, KneadingError> {
        let mut lap = 0;
        for (k, &c) in self.turning.iter().enumerate() {
            if *x == c {
                return Ok(SymbolicAddress::Turning(k + 1));
            }
            if (x - c).abs() <= self.band {
                return Err(KneadingError::Ambiguous {
                    point: x.to_string(),
                    turning: k + 1,
                    band: self.band,
                });
            }
            if *x > c {
                lap = k + 1;
            }
        }
        Ok(SymbolicAddress::Lap(lap))
    }
}

/// A point with the side it is approached from and the product of the
/// one-sided signs collected so far.
#[derive(Clone, Debug, PartialEq)]
pub struct SidedState<P> {
    pub point: P,
    pub side: Side,
    pub sign: i8,
}

/// One-sided address of the current state and the state one step later.
pub fn sided_step<M: IntervalMap>(
    map: &M,
    shape: &[i8],
    st: &SidedState<M::Point>,
) -> Result<(usize, SidedState<M::Point>), KneadingError> {
    let lap = match map.address(&st.point)? {
        SymbolicAddress::Lap(i) => i,
        SymbolicAddress::Turning(j) => match st.side {
            Side::Plus => j,
            Side::Minus => j - 1,
        },
    };
    let eps = shape[lap];
    let next = SidedState {
        point: map.image(&st.point),
        side: st.side.flip_by(eps),
        sign: st.sign * eps,
    };
    Ok((lap, next))
}

/// `theta(c_i^side)` through `t^N`, as one series per lap `I_0..I_m`.
pub fn theta_series<M: IntervalMap>(
    map: &M,
    i: usize,
    side: Side,
    order: usize,
) -> Result<Vec<TruncSeries>, KneadingError> {
    let shape = map.shape();
    let mut comps = vec![vec![0i64; order + 1]; shape.len()];
    let mut st = SidedState { point: map.turning_point(i), side, sign: 1 };
    for n in 0..=order {
        let (lap, next) = sided_step(map, &shape, &st)?;
        comps[lap][n] += st.sign as i64;
        st = next;
    }
    Ok(comps.iter().map(|c| TruncSeries::from_ints(c, order)).collect())
}

/// Lap signs and the `m x (m+1)` matrix of increment coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KneadingData {
    pub shape: Vec<i8>,
    pub matrix: Vec<Vec<TruncSeries>>,
    pub order: usize,
}

impl KneadingData {
    pub fn m(&self) -> usize {
        self.matrix.len()
    }

    fn minor_without(&self, column: usize) -> Vec<Vec<TruncSeries>> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != column)
                    .map(|(_, s)| s.clone())
                    .collect()
            })
            .collect()
    }

    /// `det` of the matrix with column `column` removed.
    pub fn minor_det(&self, column: usize) -> TruncSeries {
        series_matrix_det(&self.minor_without(column)).expect("square minor")
    }
}

pub fn kneading_matrix<M: IntervalMap>(map: &M, order: usize) -> Result<KneadingData, KneadingError> {
    let m = map.turning_count();
    if m == 0 {
        return Err(KneadingError::NoTurningPoints);
    }
    let mut matrix = Vec::with_capacity(m);
    for i in 1..=m {
        let plus = theta_series(map, i, Side::Plus, order)?;
        let minus = theta_series(map, i, Side::Minus, order)?;
        matrix.push(plus.iter().zip(&minus).map(|(a, b)| a - b).collect());
    }
    Ok(KneadingData { shape: map.shape(), matrix, order })
}

/// `(-1)^i det(D_i) / (1 - s_i t)` for each column `i = 0..=m`.
pub fn column_determinants(kd: &KneadingData) -> Vec<TruncSeries> {
    (0..=kd.m())
        .map(|i| {
            let det = kd.minor_det(i);
            let det = if i % 2 == 1 { -det } else { det };
            let lin = TruncSeries::from_ints(&[1, -(kd.shape[i] as i64)], kd.order);
            det.div(&lin).expect("1 - s t is invertible")
        })
        .collect()
}

/// The kneading determinant, after checking that every column agrees and
/// that the constant term is 1.
pub fn kneading_determinant(kd: &KneadingData) -> Result<TruncSeries, KneadingError> {
    let cols = column_determinants(kd);
    if let Some(column) = cols.iter().position(|d| d != &cols[0]) {
        return Err(KneadingError::ColumnDisagreement { column });
    }
    let d = cols.into_iter().next().expect("m >= 1");
    if !d.coeff(0).is_one() {
        return Err(KneadingError::LeadingCoefficient(d.coeff(0).to_string()));
    }
    Ok(d)
}

fn check_signs(eps: &[i8]) -> Result<(), KneadingError> {
    if eps.iter().all(|&e| e == 1 || e == -1) {
        Ok(())
    } else {
        Err(KneadingError::BadSign)
    }
}

/// `1 + e_1 t + e_1 e_2 t^2 + ...` from the signs `eps = (e_1, e_2, ...)`.
pub fn unimodal_kneading(eps: &[i8], order: usize) -> Result<TruncSeries, KneadingError> {
    if eps.len() < order {
        return Err(KneadingError::TooFewSigns { needed: order, got: eps.len() });
    }
    check_signs(eps)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut prod = 1i64;
    coeffs.push(prod);
    for &e in &eps[..order] {
        prod *= e as i64;
        coeffs.push(prod);
    }
    Ok(TruncSeries::from_ints(&coeffs, order))
}

/// The first `len` signs of the sequence `prefix` followed by `cycle` repeated.
pub fn expand_signs(prefix: &[i8], cycle: &[i8], len: usize) -> Vec<i8> {
    prefix.iter().chain(cycle.iter().cycle()).take(len).copied().collect()
}

/// Closed form of the unimodal kneading series of an eventually periodic
/// sign sequence.
///
/// With `L` prefix signs and a cycle of length `k` starting at position
/// `p = L + 1`, the partial products `e_{p,p+j}` repeat with period `2k`, so
/// `D = sum_{n<L} e_{1,n} t^n + e_{1,L} t^L (1 + e_{p,p} t + ... +
/// e_{p,p+2k-2} t^{2k-1}) / (1 - t^{2k})`, returned in lowest terms.
pub fn unimodal_rational_form(prefix: &[i8], cycle: &[i8]) -> Result<RationalFn, KneadingError> {
    if cycle.is_empty() {
        return Err(KneadingError::EmptyCycle);
    }
    check_signs(prefix)?;
    check_signs(cycle)?;
    let l = prefix.len();
    let k = cycle.len();
    let mut head = Vec::with_capacity(l);
    let mut prod = 1i64;
    for &e in prefix {
        head.push(prod);
        prod *= e as i64;
    }
    let e1l = prod;
    let mut block = vec![0i64; l];
    let mut inner = 1i64;
    for j in 0..2 * k {
        block.push(e1l * inner);
        inner *= cycle[j % k] as i64;
    }
    let den = Poly::one_minus_t_pow(2 * k);
    let num = Poly::from_ints(&head).mul(&den).add(&Poly::from_ints(&block));
    Ok(RationalFn::new(num, den)?)
}

/// Signs `e_1..e_N` along the orbit of the turning point of a unimodal map.
/// When `f^n(c) = c`, `e_n` is set to `e_1 ... e_{n-1}` so that the partial
/// product returns to 1.
pub fn unimodal_signs<M: IntervalMap>(map: &M, order: usize) -> Result<Vec<i8>, KneadingError> {
    if map.turning_count() != 1 {
        return Err(KneadingError::NotUnimodal(map.turning_count()));
    }
    let shape = map.shape();
    let mut out = Vec::with_capacity(order);
    let mut x = map.image(&map.turning_point(1));
    let mut prod = 1i8;
    for _ in 0..order {
        let e = match map.address(&x)? {
            SymbolicAddress::Lap(i) => shape[i],
            SymbolicAddress::Turning(_) => prod,
        };
        out.push(e);
        prod *= e;
        x = map.image(&x);
    }
    Ok(out)
}

/// Number of trailing zero coefficients required before a truncated series
/// is treated as a polynomial.
fn trailing_needed(order: usize) -> usize {
    order / 2
}

/// Structure of the kneading matrix of a virtually unimodal map whose
/// dominant turning point is `c_j` (numbered from 1, laps `I_{j-1}, I_j`).
///
/// Every entry outside the two dominant columns must be a polynomial, and
/// deleting either dominant column must leave a determinant that is a
/// polynomial multiple of the surviving dominant-row entry.
pub fn vu_structure_check(kd: &KneadingData, j: usize) -> bool {
    let m = kd.m();
    if j == 0 || j > m {
        return false;
    }
    let need = trailing_needed(kd.order);
    for row in &kd.matrix {
        for (col, entry) in row.iter().enumerate() {
            if col + 1 != j && col != j && entry.polynomial_degree(need).is_none() {
                return false;
            }
        }
    }
    let dom = &kd.matrix[j - 1];
    [(j, j - 1), (j - 1, j)].iter().all(|&(deleted, kept)| {
        let det = kd.minor_det(deleted);
        if det.is_zero() {
            return true;
        }
        match det.div_shifted(&dom[kept]) {
            Ok(p) => p.polynomial_degree(trailing_needed(p.order())).is_some(),
            Err(_) => false,
        }
    })
}

/// Position (from 1) of the turning point `c` of a combinatorics among its
/// turning points.
pub fn turning_index(rho: &combinatorics::Combinatorics, c: usize) -> Option<usize> {
    combinatorics::turning_points(rho).iter().position(|&t| t == c).map(|p| p + 1)
}
