//! Kneading determinants and Artin-Mazur zeta functions of piecewise
//! monotone interval maps.
//!
//! Power series live in [`series`]. Combinatorics vectors and their exact
//! piecewise linear models are in [`combinatorics`], and [`kneading`] turns
//! any [`kneading::IntervalMap`] into a kneading matrix. Periodic-point counts
//! become zeta functions in [`zeta`]. The remaining modules study two
//! examples in detail: a bimodal cubic family in [`cubicfam`] and the
//! Fibonacci tent map in [`fibmap`], with the word combinatorics of the
//! latter in [`subshift`].
//!
//! ```
//! use kneadzeta::zeta::{counts_from_zeta, zeta_vu_closed_form};
//!
//! let z = zeta_vu_closed_form(3).unwrap();
//! assert_eq!(counts_from_zeta(&z, 3).unwrap(), vec![2.into(), 4.into(), 8.into()]);
//! ```

pub mod combinatorics;
pub mod cubicfam;
pub mod fibmap;
pub mod kneading;
pub mod series;
pub mod subshift;
pub mod zeta;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/combinatorics.md")]
    mod combinatorics {}
    #[doc = include_str!("../../../book/src/kneading.md")]
    mod kneading {}
    #[doc = include_str!("../../../book/src/shifts.md")]
    mod shifts {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/cubic.md")]
    mod cubic {}
    #[doc = include_str!("../../../book/src/fibonacci.md")]
    mod fibonacci {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
