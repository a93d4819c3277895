//! Artin-Mazur zeta functions and the relation `1/zeta = Phi * D`.

use num::{BigInt, One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::{cyclotomic_peel, PeelResult, Poly, RationalFn, SeriesError, TruncSeries, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("need {needed} counts, got {got}")]
    TooFewCounts { needed: usize, got: usize },
    #[error("count N_{n} = {value} is not an integer")]
    NonIntegralCount { n: usize, value: String },
    #[error("zeta(0) must be 1")]
    NotNormalized,
    #[error("nu must be at least 2, got {0}")]
    NuTooSmall(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `exp(sum_{n=1}^{N} N_n t^n / n)` through `t^N`.
pub fn zeta_from_counts(counts: &[BigInt], order: usize) -> Result<TruncSeries, ZetaError> {
    if counts.len() < order {
        return Err(ZetaError::TooFewCounts { needed: order, got: counts.len() });
    }
    let mut log = vec![Q::zero(); order + 1];
    for n in 1..=order {
        log[n] = Q::new(counts[n - 1].clone(), BigInt::from(n));
    }
    Ok(TruncSeries::new(log, order).exp()?)
}

/// Counts `N_1..N_N` read off a zeta series through its logarithmic derivative.
pub fn counts_from_zeta_series(zeta: &TruncSeries) -> Result<Vec<BigInt>, ZetaError> {
    if !zeta.coeff(0).is_one() {
        return Err(ZetaError::NotNormalized);
    }
    let order = zeta.order();
    let logd = &zeta.derivative() * &zeta.truncate(order.saturating_sub(1)).recip()?;
    (1..=order)
        .map(|n| {
            let c = logd.coeff(n - 1);
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(ZetaError::NonIntegralCount { n, value: c.to_string() })
            }
        })
        .collect()
}

/// Counts `N_1..N_N` of a rational zeta function.
pub fn counts_from_zeta(rf: &RationalFn, order: usize) -> Result<Vec<BigInt>, ZetaError> {
    counts_from_zeta_series(&rf.to_series(order))
}

/// `1 / (Phi_nu(t) (1 - t^3) (1 - t - t^2))` with `Phi_nu = 1 - t^2` for even
/// `nu` and `1 - t` for odd `nu`.
pub fn zeta_vu_closed_form(nu: usize) -> Result<RationalFn, ZetaError> {
    if nu < 2 {
        return Err(ZetaError::NuTooSmall(nu));
    }
    let phi = Poly::one_minus_t_pow(if nu.is_multiple_of(2) { 2 } else { 1 });
    let den = phi.mul(&Poly::one_minus_t_pow(3)).mul(&Poly::from_ints(&[1, -1, -1]));
    Ok(RationalFn::reciprocal_of(den)?)
}

/// Everything computed while testing `1/zeta = Phi * D`.
#[derive(Clone, Debug, Serialize)]
pub struct MtReport {
    /// `1 / (zeta * D)` as a truncated series.
    pub phi: TruncSeries,
    /// Degree of `Phi` when the series has stabilized to a polynomial.
    pub phi_degree: Option<usize>,
    /// Exponents `p` of the factors `1 - t^p`, when the peel is complete.
    pub phi_factors: Option<Vec<usize>>,
    #[serde(skip)]
    pub peel: Option<PeelResult>,
}

/// Series form of the relation check. `Phi` counts as a polynomial when at
/// least half of its coefficients past the degree are zero.
pub fn mt_relation_report(zeta: &TruncSeries, d: &TruncSeries) -> Result<MtReport, ZetaError> {
    let product = zeta * d;
    let phi = product.recip()?;
    let order = phi.order();
    let phi_degree = phi.polynomial_degree(order / 2);
    let peel = phi_degree.map(|deg| cyclotomic_peel(&Poly::new(phi.coeffs()[..=deg].to_vec())));
    let phi_factors = peel.as_ref().filter(|p| p.is_complete()).map(|p| p.factors.clone());
    Ok(MtReport { phi, phi_degree, phi_factors, peel })
}

/// Returns the factor exponents of `Phi = 1/(zeta D)` when `Phi` is a product
/// of terms `1 - t^p`, and `None` otherwise.
pub fn mt_relation_check(zeta: &RationalFn, d: &TruncSeries, order: usize) -> Option<Vec<usize>> {
    let order = order.min(d.order());
    mt_relation_report(&zeta.to_series(order), &d.truncate(order))
        .ok()
        .and_then(|r| r.phi_factors)
}
