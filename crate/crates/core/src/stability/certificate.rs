//! Closed-form lower bounds on the spectrum in degree `k` and their
//! positivity for all large `k`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat_int, Field, QSqrt2};
use crate::stability::OperatorTag;
use crate::unipoly::UniPoly;

type P = UniPoly<QSqrt2>;

fn poly(coeffs: &[QSqrt2]) -> P {
    UniPoly::new(coeffs.to_vec())
}

/// `λ_k − 2k = k²/2 − k`, the smallest eigenvalue of `J^ψ` in degree `k > 2`.
pub fn jacobi_margin() -> P {
    poly(&[QSqrt2::zero(), QSqrt2::int(-1), QSqrt2::frac(1, 2)])
}

/// `k²(k+2)²/4 + 2k(k+2) − 2k(k(k+2)+4) − √2·k²(k+2)`, expanded.
pub fn iphi_bound_a() -> P {
    poly(&[
        QSqrt2::zero(),
        QSqrt2::int(-4),
        QSqrt2::new(rat_int(-1), rat_int(-2)),
        QSqrt2::new(rat_int(-1), rat_int(-1)),
        QSqrt2::frac(1, 4),
    ])
}

/// `k²(k+2)²/4 − 2√2·k²(k+2) − 16`, expanded.
pub fn iphi_bound_b() -> P {
    poly(&[
        QSqrt2::int(-16),
        QSqrt2::zero(),
        QSqrt2::new(rat_int(1), rat_int(-4)),
        QSqrt2::new(rat_int(1), rat_int(-2)),
        QSqrt2::frac(1, 4),
    ])
}

/// `p(t + a)`
pub fn taylor_shift(p: &P, a: &QSqrt2) -> P {
    let lin = poly(&[a.clone(), QSqrt2::one()]);
    p.coeffs().iter().rev().fold(P::zero(), |acc, c| acc.mul(&lin).add(&P::constant(c.clone())))
}

/// `p(k) > 0` for every real `k ≥ k0`: after shifting to `k0` all
/// coefficients are non-negative and the constant term is positive.
pub fn positive_from(p: &P, k0: u32) -> bool {
    let s = taylor_shift(p, &QSqrt2::int(k0 as i64));
    let c = s.coeffs();
    !c.is_empty() && c[0] > QSqrt2::zero() && c.iter().all(|x| *x >= QSqrt2::zero())
}

/// Smallest `k0 ≤ limit` from which `p` is certified positive on all integers.
pub fn first_certified_degree(p: &P, limit: u32) -> Option<u32> {
    let k0 = (0..=limit).find(|&k| positive_from(p, k))?;
    // Walk down over integers where the value alone is positive.
    let mut first = k0;
    while first > 0 && p.eval(&QSqrt2::int(first as i64 - 1)) > QSqrt2::zero() {
        first -= 1;
    }
    Some(first)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: String,
    pub value: QSqrt2,
}

/// Lower bounds in one degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityCertificate {
    pub operator: OperatorTag,
    pub k: u32,
    pub bounds: Vec<NamedBound>,
    /// Every bound is strictly positive.
    pub holds: bool,
}

pub fn positivity_certificate(tag: OperatorTag, k: u32) -> Result<PositivityCertificate> {
    let kk = QSqrt2::int(k as i64);
    let bounds = match tag {
        OperatorTag::Jpsi | OperatorTag::Ipsi => {
            if k <= 2 {
                return Err(Error::InvalidArgument(format!("{tag} certificate requires k > 2, got {k}")));
            }
            let m = jacobi_margin().eval(&kk);
            if tag == OperatorTag::Jpsi {
                vec![NamedBound { name: "lambda_k - 2k".into(), value: m }]
            } else {
                vec![NamedBound { name: "(lambda_k - 2k)^2".into(), value: m.mul_ref(&m) }]
            }
        }
        OperatorTag::Iphi => {
            if k == 0 {
                return Err(Error::InvalidArgument("iphi certificate requires k >= 1".into()));
            }
            vec![
                NamedBound { name: "A_k".into(), value: iphi_bound_a().eval(&kk) },
                NamedBound { name: "B_k".into(), value: iphi_bound_b().eval(&kk) },
            ]
        }
    };
    let holds = bounds.iter().all(|b| b.value > QSqrt2::zero());
    Ok(PositivityCertificate { operator: tag, k, bounds, holds })
}

/// Positivity of the operator in every degree `k ≥ from_k`, proved by the
/// shifted-coefficient test on the bound polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformCertificate {
    pub operator: OperatorTag,
    pub from_k: u32,
    pub statement: String,
    pub holds: bool,
}

pub fn uniform_certificate(tag: OperatorTag) -> UniformCertificate {
    match tag {
        OperatorTag::Jpsi | OperatorTag::Ipsi => {
            let holds = positive_from(&jacobi_margin(), 3);
            UniformCertificate {
                operator: tag,
                from_k: 3,
                statement: "lambda_k - 2k = k(k-2)/2 > 0 for all k >= 3".into(),
                holds,
            }
        }
        OperatorTag::Iphi => {
            let holds = positive_from(&iphi_bound_a(), 12) && positive_from(&iphi_bound_b(), 12);
            UniformCertificate {
                operator: tag,
                from_k: 12,
                statement: "A_k > 0 and B_k > 0 for all k >= 12".into(),
                holds,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_a(k: i64) -> QSqrt2 {
        let k = QSqrt2::int(k);
        let two = QSqrt2::int(2);
        let kp2 = &k + &two;
        let kk = &k * &k;
        let t1 = (&kk * &(&kp2 * &kp2)).scale(&crate::scalar::rat(1, 4));
        let t2 = &(&two * &k) * &kp2;
        let t3 = &(&two * &k) * &(&(&k * &kp2) + &QSqrt2::int(4));
        let t4 = &(&QSqrt2::sqrt2() * &kk) * &kp2;
        &(&(&t1 + &t2) - &t3) - &t4
    }

    #[test]
    fn expanded_bound_matches_definition() {
        for k in 0..20 {
            assert_eq!(iphi_bound_a().eval(&QSqrt2::int(k)), direct_a(k));
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(first_certified_degree(&iphi_bound_a(), 100), Some(12));
        assert_eq!(first_certified_degree(&iphi_bound_b(), 100), Some(10));
        assert_eq!(first_certified_degree(&jacobi_margin(), 100), Some(3));
        assert!(iphi_bound_a().eval(&QSqrt2::int(11)) < QSqrt2::zero());
        assert!(iphi_bound_b().eval(&QSqrt2::int(9)) < QSqrt2::zero());
    }

    #[test]
    fn per_degree() {
        assert!(positivity_certificate(OperatorTag::Iphi, 12).unwrap().holds);
        assert!(!positivity_certificate(OperatorTag::Iphi, 11).unwrap().holds);
        assert!(positivity_certificate(OperatorTag::Jpsi, 3).unwrap().holds);
        assert!(positivity_certificate(OperatorTag::Jpsi, 2).is_err());
        assert!(OperatorTag::ALL.iter().all(|&t| uniform_certificate(t).holds));
    }
}
