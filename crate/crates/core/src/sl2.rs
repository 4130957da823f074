//! The `sl(2,C)` action on complex polynomials generated by `e`, `f`, `h`,
//! and the weight decomposition of `H^k` it induces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::chart::{complex_laplacian, vector_field_to_complex, W, WB, Z, ZB};
use crate::error::{Error, Result};
use crate::geometry::FrameField;
use crate::harmonic::{dimension, vertical_spectrum_bruteforce, HarmonicSpace, RationalSpectrum};
use crate::linalg::Matrix;
use crate::poly::{ComplexPoly, DiffOp, Monomial, Poly, NVARS};
use crate::scalar::{GaussQSqrt2, QSqrt2, Rational};

type Op = DiffOp<GaussQSqrt2>;

fn first_order(terms: &[(GaussQSqrt2, usize, usize)]) -> Op {
    // c · var_a · ∂_{var_b}
    terms.iter().fold(Op::zero(), |acc, (c, a, b)| {
        acc.add(&Op::multiply_by(ComplexPoly::var(*a).scale(c)).compose(&Op::partial(*b)))
    })
}

#[derive(Clone, Debug)]
pub struct Sl2Ops {
    pub e: Op,
    pub f: Op,
    pub h: Op,
    pub lambda: Op,
    pub laplacian: Op,
}

impl Sl2Ops {
    /// Builds the operators and checks every structural relation, including
    /// `h = i√2·X₁`.
    pub fn new() -> Result<Self> {
        let one = GaussQSqrt2::one();
        let m1 = -one.clone();
        let i = GaussQSqrt2::i();
        let mi = -i.clone();
        let ops = Sl2Ops {
            h: first_order(&[(one.clone(), ZB, ZB), (m1.clone(), Z, Z), (one.clone(), WB, WB), (m1.clone(), W, W)]),
            e: first_order(&[(i.clone(), WB, Z), (mi.clone(), ZB, W)]),
            f: first_order(&[(i, W, ZB), (mi, Z, WB)]),
            lambda: first_order(&[(one.clone(), Z, Z), (m1.clone(), ZB, ZB), (m1, W, W), (one, WB, WB)]),
            laplacian: complex_laplacian(),
        };
        for (name, ok) in ops.relations() {
            if !ok {
                return Err(Error::IdentityFailed(name));
            }
        }
        Ok(ops)
    }

    /// Every defining relation with its verdict.
    pub fn relations(&self) -> Vec<(String, bool)> {
        let two = GaussQSqrt2::int(2);
        let zero = Op::zero();
        let x1 = vector_field_to_complex(&FrameField::x(1).ambient());
        let i_sqrt2 = GaussQSqrt2::new(QSqrt2::zero(), QSqrt2::sqrt2());
        vec![
            ("[e,f] = h".into(), self.e.commutator(&self.f) == self.h),
            ("[h,e] = 2e".into(), self.h.commutator(&self.e) == self.e.scale(&two)),
            ("[h,f] = -2f".into(), self.h.commutator(&self.f) == self.f.scale(&(-two.clone()))),
            ("[Delta,e] = 0".into(), self.laplacian.commutator(&self.e) == zero),
            ("[Delta,f] = 0".into(), self.laplacian.commutator(&self.f) == zero),
            ("[Delta,h] = 0".into(), self.laplacian.commutator(&self.h) == zero),
            ("[Lambda,f] = 0".into(), self.lambda.commutator(&self.f) == zero),
            ("h = i*sqrt2*X1".into(), x1.scale(&i_sqrt2) == self.h),
        ]
    }
}

/// `f_n = z̄ⁿ w̄^{k−n}`, `n = 0..=k`.
pub fn highest_weight_vectors(k: u32) -> Vec<ComplexPoly> {
    (0..=k)
        .map(|n| {
            let mut e = [0; NVARS];
            e[ZB] = n;
            e[WB] = k - n;
            Poly::term(GaussQSqrt2::one(), Monomial(e))
        })
        .collect()
}

/// `H^k` as a sum of chains `fˡ(f_n)`, `l = 0..=k`.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub k: u32,
    /// `(n, [f⁰(f_n), …, f^k(f_n)])`
    pub chains: Vec<(u32, Vec<ComplexPoly>)>,
}

impl WeightDecomposition {
    /// Weight `k − 2l` of every chain element, keyed by `(n, l)`.
    pub fn weights(&self) -> BTreeMap<(u32, u32), i64> {
        let mut out = BTreeMap::new();
        for (n, chain) in &self.chains {
            for l in 0..chain.len() as u32 {
                out.insert((*n, l), self.k as i64 - 2 * l as i64);
            }
        }
        out
    }

    /// Weight multiplicities.
    pub fn weight_multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for w in self.weights().values() {
            *out.entry(*w).or_insert(0) += 1;
        }
        out
    }
}

fn coefficient_rows(polys: &[ComplexPoly], k: u32) -> Matrix<GaussQSqrt2> {
    let monos = Monomial::of_degree(k);
    Matrix::from_fn(polys.len(), monos.len(), |r, c| polys[r].coeff(&monos[c]))
}

pub fn decompose(ops: &Sl2Ops, k: u32) -> Result<WeightDecomposition> {
    let kk = GaussQSqrt2::int(k as i64);
    let mut chains = Vec::new();
    for (n, v) in highest_weight_vectors(k).into_iter().enumerate() {
        let fail = |what: &str| Error::IdentityFailed(format!("{what} for f_{n} at k={k}"));
        if !ops.laplacian.apply(&v).is_zero() {
            return Err(fail("Delta(f_n) = 0"));
        }
        if !ops.e.apply(&v).is_zero() {
            return Err(fail("e(f_n) = 0"));
        }
        if ops.h.apply(&v) != v.scale(&kk) {
            return Err(fail("h(f_n) = k f_n"));
        }
        let lam = GaussQSqrt2::int(k as i64 - 2 * n as i64);
        let mut chain = vec![v];
        for l in 0..=k {
            let cur = chain.last().unwrap().clone();
            let weight = GaussQSqrt2::int(k as i64 - 2 * l as i64);
            if ops.h.apply(&cur) != cur.scale(&weight) {
                return Err(fail("h(f^l f_n) = (k-2l) f^l f_n"));
            }
            if ops.lambda.apply(&cur) != cur.scale(&lam) {
                return Err(fail("Lambda(f^l f_n) = (k-2n) f^l f_n"));
            }
            let next = ops.f.apply(&cur);
            if l == k {
                if !next.is_zero() {
                    return Err(fail("f^(k+1)(f_n) = 0"));
                }
            } else {
                if next.is_zero() {
                    return Err(fail("chain ends early"));
                }
                chain.push(next);
            }
        }
        chains.push((n as u32, chain));
    }
    let all: Vec<ComplexPoly> = chains.iter().flat_map(|(_, c)| c.iter().cloned()).collect();
    let rank = coefficient_rows(&all, k).rank();
    if rank != dimension(k) {
        return Err(Error::Dimension(format!("chains span {rank} of {} at k={k}", dimension(k))));
    }
    let dec = WeightDecomposition { k, chains };
    if dec.weight_multiplicities().values().any(|&m| m != k as usize + 1) {
        return Err(Error::Dimension(format!("weight space of wrong size at k={k}")));
    }
    Ok(dec)
}

/// `Δ^V = ½h²`: each weight `m` gives the vertical eigenvalue `m²/2`.
pub fn vertical_spectrum_from_weights(dec: &WeightDecomposition) -> RationalSpectrum {
    let mut out: BTreeMap<Rational, usize> = BTreeMap::new();
    for (w, m) in dec.weight_multiplicities() {
        *out.entry(Rational::new((w * w).into(), 2.into())).or_insert(0) += m;
    }
    RationalSpectrum(out.into_iter().collect())
}

/// Vertical spectrum through the weight decomposition, required to agree
/// with the brute-force computation.
pub fn vertical_spectrum_via_sl2(ops: &Sl2Ops, k: u32) -> Result<RationalSpectrum> {
    let spectrum = vertical_spectrum_from_weights(&decompose(ops, k)?);
    let brute = vertical_spectrum_bruteforce(k)?;
    if spectrum != brute {
        return Err(Error::Spectrum(format!("sl2 and brute-force vertical spectra differ at k={k}")));
    }
    Ok(spectrum)
}

/// Weights of `h = i√2·X₁` on the complexified `H^k`, from exact nullities of
/// its matrix, and whether `h² = 2Δ^V` holds as matrices.
pub fn h_matrix_weights(space: &HarmonicSpace) -> (BTreeMap<i64, usize>, bool) {
    let i_sqrt2 = GaussQSqrt2::new(QSqrt2::zero(), QSqrt2::sqrt2());
    let h = space.x(1).map(|c| GaussQSqrt2::real(c.clone())).scale(&i_sqrt2);
    let k = space.k() as i64;
    let mut out = BTreeMap::new();
    for l in 0..=k {
        let m = k - 2 * l;
        let nul = h.shift(&GaussQSqrt2::int(m)).nullity();
        if nul > 0 {
            out.insert(m, nul);
        }
    }
    let dv = space.vertical_laplacian().map(|c| GaussQSqrt2::real(c.clone())).scale(&GaussQSqrt2::int(2));
    (out, h.mul(&h) == dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn relations_hold() {
        let ops = Sl2Ops::new().unwrap();
        assert!(ops.relations().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn highest_weights() {
        let ops = Sl2Ops::new().unwrap();
        let v = &highest_weight_vectors(1)[0];
        assert_eq!(ops.h.apply(v), v.clone());
        let zw = &highest_weight_vectors(2)[1];
        assert!(ops.e.apply(zw).is_zero());
        assert_eq!(highest_weight_vectors(0), vec![ComplexPoly::one()]);
    }

    #[test]
    fn weight_multiplicities() {
        let ops = Sl2Ops::new().unwrap();
        let d = decompose(&ops, 2).unwrap();
        assert_eq!(d.weight_multiplicities(), BTreeMap::from([(-2, 3), (0, 3), (2, 3)]));
        let d = decompose(&ops, 1).unwrap();
        assert_eq!(d.weight_multiplicities(), BTreeMap::from([(-1, 2), (1, 2)]));
    }

    #[test]
    fn sl2_matches_bruteforce() {
        let ops = Sl2Ops::new().unwrap();
        let s = vertical_spectrum_via_sl2(&ops, 5).unwrap();
        assert_eq!(s.0, vec![(rat(1, 2), 12), (rat(9, 2), 12), (rat(25, 2), 12)]);
    }

    #[test]
    fn h_matrix_consistency() {
        let space = HarmonicSpace::new(3).unwrap();
        let (w, sq) = h_matrix_weights(&space);
        assert!(sq);
        assert_eq!(w, BTreeMap::from([(-3, 4), (-1, 4), (1, 4), (3, 4)]));
    }
}
