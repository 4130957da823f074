#![allow(dead_code)]

use hopf_spectra::poly::{Monomial, Poly, RealPoly};
use hopf_spectra::scalar::{rat, QSqrt2};
use proptest::prelude::*;

pub fn qsqrt2() -> impl Strategy<Value = QSqrt2> {
    (-40i64..=40, 1i64..=12, -40i64..=40, 1i64..=12).prop_map(|(a, b, c, d)| QSqrt2::new(rat(a, b), rat(c, d)))
}

pub fn small_qsqrt2() -> impl Strategy<Value = QSqrt2> {
    (-5i64..=5, 1i64..=3, -3i64..=3).prop_map(|(a, b, c)| QSqrt2::new(rat(a, b), rat(c, 1)))
}

/// Random polynomial with up to `terms` terms of total degree at most `deg`.
pub fn poly(deg: u32, terms: usize) -> impl Strategy<Value = RealPoly> {
    let mono = (0..=deg, 0..=deg, 0..=deg, 0..=deg)
        .prop_filter("degree bound", move |(a, b, c, d)| a + b + c + d <= deg)
        .prop_map(|(a, b, c, d)| Monomial([a, b, c, d]));
    prop::collection::vec((mono, small_qsqrt2()), 0..=terms).prop_map(|ts| Poly::from_terms(ts))
}
