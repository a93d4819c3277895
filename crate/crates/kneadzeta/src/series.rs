//! Truncated power series, polynomials and rational functions over `Q`.
//!
//! Every series carries its truncation order `N` and holds the coefficients
//! `a_0..=a_N`. Binary operations truncate to the smaller of the two orders,
//! so mixing orders never silently invents coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Integer `n` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The fraction `n/d` in lowest terms. Panics when `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("exp requires constant term 0")]
    ExpConstantTerm,
    #[error("log requires constant term 1")]
    LogConstantTerm,
    #[error("denominator has zero constant term")]
    DenominatorVanishesAtZero,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("empty cycle")]
    EmptyCycle,
    #[error("divisor valuation {divisor} exceeds dividend valuation {dividend}")]
    Valuation { divisor: usize, dividend: usize },
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

/// Parses `"a"`, `"a/b"` or a decimal such as `"-1.25"` into a rational.
pub fn parse_q(text: &str) -> Result<Q, SeriesError> {
    let text = text.trim();
    let bad = || SeriesError::Parse(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            if let Ok(n) = text.parse::<BigInt>() {
                return Ok(Q::from_integer(n));
            }
            let (int, frac) = text.split_once('.').ok_or_else(bad)?;
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            Ok(Q::new(digits, num::pow(BigInt::from(10), frac.len())))
        }
    }
}

/// Truncated power series `a_0 + a_1 t + ... + a_N t^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Q>,
}

impl TruncSeries {
    /// Builds a series of the given order, padding with zeros or truncating.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        TruncSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::monomial(Q::one(), 1, order)
    }

    /// `c * t^k`, which is zero when `k > order`.
    pub fn monomial(c: Q, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `t^n`; zero past the order.
    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set_coeff(&mut self, n: usize, c: Q) {
        if n < self.coeffs.len() {
            self.coeffs[n] = c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the last nonzero coefficient.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Returns the degree when the coefficients vanish past some index and at
    /// least `min_trailing` trailing coefficients are zero.
    pub fn polynomial_degree(&self, min_trailing: usize) -> Option<usize> {
        let deg = self.last_nonzero().unwrap_or(0);
        (self.order() - deg >= min_trailing).then_some(deg)
    }

    /// The coefficients as integers, if all of them are integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// The coefficients as `i64`, if all of them are small integers.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num::ToPrimitive;
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if i + k > order {
                break;
            }
            out.coeffs[i + k] = a.clone();
        }
        out
    }

    /// Divides by `t^k`; the top `k` coefficients are lost.
    pub fn unshift(&self, k: usize) -> Self {
        let order = self.order().saturating_sub(k);
        Self::new(self.coeffs.iter().skip(k).cloned().collect(), order)
    }

    /// `a(c t)`: rescales the variable.
    pub fn compose_scale(&self, c: &Q) -> Self {
        let mut power = Q::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power *= c;
        }
        TruncSeries { coeffs }
    }

    pub fn derivative(&self) -> Self {
        let order = self.order();
        let coeffs = (1..=order).map(|n| &self.coeffs[n] * q(n as i64)).collect();
        Self::new(coeffs, order.saturating_sub(1))
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = a0.recip();
        let order = self.order();
        let mut b = vec![Q::zero(); order + 1];
        b[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = Q::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &b[n - k];
                }
            }
            b[n] = -acc * &inv0;
        }
        Ok(TruncSeries { coeffs: b })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.recip()?)
    }

    /// Division allowing a divisor with positive valuation `v`; the quotient
    /// has order reduced by `v`.
    pub fn div_shifted(&self, other: &Self) -> Result<Self, SeriesError> {
        let v = other.valuation().ok_or(SeriesError::ZeroDivisor)?;
        let w = self.valuation().unwrap_or(self.order() + 1);
        if w < v {
            return Err(SeriesError::Valuation { divisor: v, dividend: w });
        }
        let order = self.order().min(other.order());
        let num = self.truncate(order).unshift(v);
        let den = other.truncate(order).unshift(v);
        num.div(&den)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let order = self.order();
        let mut e = vec![Q::zero(); order + 1];
        e[0] = Q::one();
        for n in 1..=order {
            let mut acc = Q::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &e[n - k] * q(k as i64);
                }
            }
            e[n] = acc / q(n as i64);
        }
        Ok(TruncSeries { coeffs: e })
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let order = self.order();
        let mut l = vec![Q::zero(); order + 1];
        for n in 1..=order {
            let mut acc = &self.coeffs[n] * q(n as i64);
            for k in 1..n {
                if !self.coeffs[n - k].is_zero() {
                    acc -= &l[k] * &self.coeffs[n - k] * q(k as i64);
                }
            }
            l[n] = acc / q(n as i64);
        }
        Ok(TruncSeries { coeffs: l })
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (n, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}t")?,
                (_, true) => write!(f, "t^{n}")?,
                (_, false) => write!(f, "{a}t^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect();
        TruncSeries { coeffs }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect();
        TruncSeries { coeffs }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Q::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncSeries { coeffs: out }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries { (&self).$m(&rhs) }
        }
        impl $tr<&TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: &TruncSeries) -> TruncSeries { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        -&self
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TruncSeries", 2)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `1 - t^p`.
    pub fn one_minus_t_pow(p: usize) -> Self {
        let mut c = vec![Q::zero(); p + 1];
        c[0] = Q::one();
        c[p] -= Q::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), SeriesError> {
        let dd = d.degree().ok_or(SeriesError::ZeroDivisor)?;
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if ds < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Q::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            quo[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(quo), Poly::new(r)))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (quo, rem) = self.div_rem(d).ok()?;
        rem.is_zero().then_some(quo)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().recip();
        a.scale(&l)
    }

    pub fn to_series(&self, order: usize) -> TruncSeries {
        TruncSeries::new(self.coeffs.clone(), order)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_series(self.degree().unwrap_or(0)).to_string();
        let body = s.rsplit_once(" + O(").map_or(s.as_str(), |(b, _)| b);
        write!(f, "{body}")
    }
}

/// Rational function `num/den` with `den(0) = 1` and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, SeriesError> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(SeriesError::DenominatorVanishesAtZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        } else {
            (num, den)
        };
        let c = den.coeff(0).recip();
        Ok(RationalFn { num: num.scale(&c), den: den.scale(&c) })
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalFn { num: p, den: Poly::one() }
    }

    /// `1 / den`.
    pub fn reciprocal_of(den: Poly) -> Result<Self, SeriesError> {
        Self::new(Poly::one(), den)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("den(0) = 1")
    }

    /// Multiplicative inverse; needs a numerator with nonzero constant term.
    pub fn inv(&self) -> Result<RationalFn, SeriesError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn to_series(&self, order: usize) -> TruncSeries {
        let den = self.den.to_series(order).recip().expect("den(0) = 1");
        &self.num.to_series(order) * &den
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strs = |p: &Poly| p.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut st = serializer.serialize_struct("RationalFn", 2)?;
        st.serialize_field("den", &strs(&self.den))?;
        st.serialize_field("num", &strs(&self.num))?;
        st.end()
    }
}

pub fn rf_to_series(rf: &RationalFn, order: usize) -> TruncSeries {
    rf.to_series(order)
}

/// Coefficientwise comparison through the order of `s`.
pub fn series_matches_rf(s: &TruncSeries, rf: &RationalFn) -> bool {
    *s == rf.to_series(s.order())
}

/// Witness that a sequence is eventually periodic on the inspected range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PeriodicityCertificate {
    pub preperiod: usize,
    pub period: usize,
    /// Number of coefficients inspected.
    pub depth: usize,
}

/// Search bounds for [`detect_eventual_periodicity`]; `None` means a third of
/// the sequence length.
#[derive(Clone, Copy, Debug, Default)]
pub struct PeriodicityLimits {
    pub max_preperiod: Option<usize>,
    pub max_period: Option<usize>,
}

/// Finds the smallest preperiod `p`, then the smallest period `k`, such that
/// `a[i + k] == a[i]` for every inspected `i >= p` and the tail after `p`
/// holds at least two full periods.
pub fn detect_eventual_periodicity(
    coeffs: &[i64],
    limits: PeriodicityLimits,
) -> Option<PeriodicityCertificate> {
    let len = coeffs.len();
    let max_p = limits.max_preperiod.unwrap_or(len / 3);
    let max_k = limits.max_period.unwrap_or(len / 3);
    for p in 0..=max_p {
        for k in 1..=max_k {
            if len < p + 2 * k {
                break;
            }
            if (p..len - k).all(|i| coeffs[i + k] == coeffs[i]) {
                return Some(PeriodicityCertificate { preperiod: p, period: k, depth: len });
            }
        }
    }
    None
}

/// `prefix(t) + t^L cycle(t) / (1 - t^k)` in lowest terms, where `L` is the
/// prefix length and `k` the cycle length.
pub fn rational_from_eventually_periodic(
    prefix: &[Q],
    cycle: &[Q],
) -> Result<RationalFn, SeriesError> {
    if cycle.is_empty() {
        return Err(SeriesError::EmptyCycle);
    }
    let k = cycle.len();
    let l = prefix.len();
    let den = Poly::one_minus_t_pow(k);
    let pre = Poly::new(prefix.to_vec());
    let mut shifted = vec![Q::zero(); l];
    shifted.extend(cycle.iter().cloned());
    let num = pre.mul(&den).add(&Poly::new(shifted));
    RationalFn::new(num, den)
}

/// Outcome of [`cyclotomic_peel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelResult {
    /// Exponents `p` of the removed factors `1 - t^p`, ascending.
    pub factors: Vec<usize>,
    pub residual: Poly,
}

impl PeelResult {
    pub fn is_complete(&self) -> bool {
        self.residual.is_one()
    }
}

/// Writes `poly` as `prod (1 - t^p) * residual`.
///
/// The largest admissible exponent is removed first. A primitive `p`-th root
/// of unity can only come from a factor `1 - t^{p'}` with `p | p'`, so the
/// largest `p` for which `1 - t^p` divides is always one of the factors and
/// the decomposition, when it exists, is found.
pub fn cyclotomic_peel(poly: &Poly) -> PeelResult {
    let mut residual = poly.clone();
    let mut factors = Vec::new();
    'outer: loop {
        let Some(deg) = residual.degree() else { break };
        for p in (1..=deg).rev() {
            if let Some(quo) = residual.exact_div(&Poly::one_minus_t_pow(p)) {
                factors.push(p);
                residual = quo;
                continue 'outer;
            }
        }
        break;
    }
    factors.sort_unstable();
    PeelResult { factors, residual }
}

/// Determinant by cofactor expansion along the first row.
pub fn series_matrix_det(m: &[Vec<TruncSeries>]) -> Result<TruncSeries, SeriesError> {
    let rows = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != rows {
            return Err(SeriesError::NotSquare { rows, row, cols: r.len() });
        }
    }
    let order = m.iter().flatten().map(TruncSeries::order).min().unwrap_or(0);
    let cols: Vec<usize> = (0..rows).collect();
    Ok(cofactor(m, 0, &cols, order))
}

fn cofactor(m: &[Vec<TruncSeries>], row: usize, cols: &[usize], order: usize) -> TruncSeries {
    if row == m.len() {
        return TruncSeries::one(order);
    }
    let mut acc = TruncSeries::zero(order);
    for (pos, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &cofactor(m, row + 1, &rest, order);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_readable() {
        let s = TruncSeries::from_ints(&[1, -1, 0, 2], 3);
        assert_eq!(s.to_string(), "1 - t + 2t^3 + O(t^4)");
        assert_eq!(Poly::from_ints(&[1, 0, -1]).to_string(), "1 - t^2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_q("-4").unwrap(), q(-4));
        assert_eq!(parse_q("1.25").unwrap(), qr(5, 4));
        assert!(parse_q("1/0").is_err());
    }
}
