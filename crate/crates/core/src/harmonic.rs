//! Harmonic homogeneous polynomials `H^k` on `R⁴`, their Gram matrices on
//! `S³(√2)`, and matrices of frame-field operators acting on them.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::eigen;
use crate::error::{Error, Result};
use crate::geometry::{sphere_moment, vf_apply, FrameField};
use crate::linalg::Matrix;
use crate::poly::{euclidean_laplacian, Monomial, Poly, RealPoly};
use crate::scalar::{QSqrt2, Rational};

/// `λ_k = k(k+2)/2`, eigenvalue of the Laplacian of `S³(√2)` on `H^k`.
pub fn lambda(k: u32) -> Rational {
    Rational::new((k * (k + 2)).into(), 2.into())
}

/// `μ_l = 2l(l+1)`, eigenvalue of the Laplacian of `S²(1/√2)`.
pub fn mu(l: u32) -> Rational {
    Rational::from_integer((2 * l * (l + 1)).into())
}

pub fn dimension(k: u32) -> usize {
    ((k + 1) * (k + 1)) as usize
}

/// An ordered basis of `H^k` with its Gram matrix.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub k: u32,
    pub basis: Vec<RealPoly>,
    pub gram: Matrix<QSqrt2>,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Monomials whose coefficients determine the coordinates.
    selected: Vec<usize>,
    /// Inverse of the basis restricted to the selected monomials.
    selector_inv: Matrix<QSqrt2>,
}

fn canonical_basis(k: u32) -> Option<Vec<RealPoly>> {
    let p = |s: &str| RealPoly::parse(s).expect("valid literal");
    match k {
        0 => Some(vec![RealPoly::one()]),
        1 => Some((0..4).map(|i| Poly::var(i).scale(&QSqrt2::sqrt2())).collect()),
        2 => Some(
            [
                "x1*x2 + x3*x4",
                "x1*x2 - x3*x4",
                "x1*x3 + x2*x4",
                "x1*x3 - x2*x4",
                "x1*x4 + x2*x3",
                "x1*x4 - x2*x3",
                "1/2*x1^2 + 1/2*x2^2 - 1/2*x3^2 - 1/2*x4^2",
                "1/2*x1^2 - 1/2*x2^2 + 1/2*x3^2 - 1/2*x4^2",
                "1/2*x1^2 - 1/2*x2^2 - 1/2*x3^2 + 1/2*x4^2",
            ]
            .iter()
            .map(|s| p(s))
            .collect(),
        ),
        _ => None,
    }
}

/// Echelon basis of `ker Δ` on degree-`k` polynomials, one element per free
/// monomial (graded-lexicographic order).
fn echelon_basis(k: u32) -> Vec<RealPoly> {
    let monos = Monomial::of_degree(k);
    let targets = Monomial::of_degree(k.saturating_sub(2));
    let tindex: HashMap<Monomial, usize> = targets.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let lap = euclidean_laplacian();
    let mut m = Matrix::<Rational>::zeros(targets.len(), monos.len());
    for (j, mono) in monos.iter().enumerate() {
        for (t, c) in lap.apply(&Poly::term(QSqrt2::one(), *mono)).terms() {
            m[(tindex[t], j)] = c.a.clone();
        }
    }
    m.nullspace()
        .into_iter()
        .map(|v| Poly::from_terms(v.into_iter().zip(&monos).map(|(c, mono)| (*mono, QSqrt2::rational(c)))))
        .collect()
}

impl HarmonicBasis {
    /// The fixed bases for `k ≤ 2`, echelon bases above.
    pub fn new(k: u32) -> Result<Self> {
        let basis = canonical_basis(k).unwrap_or_else(|| echelon_basis(k));
        Self::from_polys(k, basis)
    }

    /// Always the echelon basis, whatever the degree.
    pub fn echelon(k: u32) -> Result<Self> {
        Self::from_polys(k, echelon_basis(k))
    }

    pub fn from_polys(k: u32, basis: Vec<RealPoly>) -> Result<Self> {
        let lap = euclidean_laplacian();
        for b in &basis {
            if !b.is_homogeneous() || b.degree().unwrap_or(0) != k || b.is_zero() {
                return Err(Error::NotHomogeneous);
            }
            if !lap.apply(b).is_zero() {
                return Err(Error::InvalidArgument(format!("not harmonic: {b}")));
            }
        }
        if basis.len() != dimension(k) {
            return Err(Error::Dimension(format!("H^{k} needs {} elements, got {}", dimension(k), basis.len())));
        }
        let monomials = Monomial::of_degree(k);
        let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let n = basis.len();
        let coeffs_t = Matrix::from_fn(n, monomials.len(), |r, c| basis[r].coeff(&monomials[c]));
        let (_, selected) = coeffs_t.rref();
        if selected.len() != n {
            return Err(Error::Dimension("basis polynomials are dependent".into()));
        }
        let restricted = Matrix::from_fn(n, n, |r, c| basis[c].coeff(&monomials[selected[r]]));
        let selector_inv = if restricted.is_identity() {
            restricted
        } else {
            restricted.solve(&Matrix::identity(n))?.ok_or_else(|| Error::Dimension("singular selector".into()))?
        };
        let gram = gram_matrix(&basis);
        Ok(HarmonicBasis { k, basis, gram, monomials, index, selected, selector_inv })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p ∈ H^k`; errors if `p` is not in the span.
    pub fn coordinates(&self, p: &RealPoly) -> Result<Vec<QSqrt2>> {
        let mut v = vec![QSqrt2::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            match self.index.get(m) {
                Some(&i) => v[i] = c.clone(),
                None => return Err(self.residual_error(p)),
            }
        }
        let picked: Vec<QSqrt2> = self.selected.iter().map(|&i| v[i].clone()).collect();
        let coords = self.selector_inv.mul_vec(&picked);
        let mut back = vec![QSqrt2::zero(); self.monomials.len()];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (m, bc) in b.terms() {
                let i = self.index[m];
                back[i] = &back[i] + &(c * bc);
            }
        }
        if back != v {
            return Err(self.residual_error(p));
        }
        Ok(coords)
    }

    fn residual_error(&self, p: &RealPoly) -> Error {
        Error::NotInvariant { operator: "coordinates".into(), k: self.k as usize, residual: p.to_text() }
    }

    pub fn combination(&self, coords: &[QSqrt2]) -> RealPoly {
        coords
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(Poly::zero(), |acc, (c, b)| acc.add(&b.scale(c)))
    }
}

/// Parity class of a monomial's exponents; moments vanish across classes.
fn parity(m: &Monomial) -> u8 {
    m.0.iter().enumerate().fold(0, |acc, (i, e)| acc | (((e % 2) as u8) << i))
}

fn gram_matrix(basis: &[RealPoly]) -> Matrix<QSqrt2> {
    let n = basis.len();
    let classes: Vec<Vec<u8>> = basis
        .iter()
        .map(|b| {
            let mut c: Vec<u8> = b.terms().map(|(m, _)| parity(m)).collect();
            c.sort();
            c.dedup();
            c
        })
        .collect();
    let cache = std::sync::Mutex::new(HashMap::<[u32; 4], Rational>::new());
    let moment = |a: [u32; 4]| -> Rational {
        if let Some(v) = cache.lock().unwrap().get(&a) {
            return v.clone();
        }
        let v = sphere_moment(a);
        cache.lock().unwrap().insert(a, v.clone());
        v
    };
    let rows: Vec<Vec<QSqrt2>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < i || !classes[i].iter().any(|c| classes[j].contains(c)) {
                        return QSqrt2::zero();
                    }
                    let mut acc = QSqrt2::zero();
                    for (m1, c1) in basis[i].terms() {
                        for (m2, c2) in basis[j].terms() {
                            if parity(m1) != parity(m2) {
                                continue;
                            }
                            let mom = moment(m1.mul(m2).0);
                            if !mom.is_zero() {
                                acc = &acc + &(c1 * c2).scale(&mom);
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Matrix::from_fn(n, n, |i, j| if j >= i { rows[i][j].clone() } else { rows[j][i].clone() })
}

/// Matrix of a linear operator on `H^k`: `op(b_j) = Σ_i A_ij b_i`.
#[derive(Clone, Debug)]
pub struct OperatorOnHk {
    pub name: String,
    pub k: u32,
    pub matrix: Matrix<QSqrt2>,
}

pub fn operator_matrix(
    name: &str,
    basis: &HarmonicBasis,
    op: impl Fn(&RealPoly) -> RealPoly + Sync,
) -> Result<OperatorOnHk> {
    let columns: Vec<Vec<QSqrt2>> = basis
        .basis
        .par_iter()
        .map(|b| {
            basis.coordinates(&op(b)).map_err(|e| match e {
                Error::NotInvariant { k, residual, .. } => Error::NotInvariant { operator: name.into(), k, residual },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    Ok(OperatorOnHk { name: name.into(), k: basis.k, matrix: Matrix::from_columns(basis.dim(), &columns) })
}

/// Matrix of the derivation `X_i` (`i ∈ 1..=6`).
pub fn frame_matrix(i: usize, basis: &HarmonicBasis) -> Result<OperatorOnHk> {
    let x = FrameField::x(i);
    operator_matrix(&format!("X{i}"), basis, |p| vf_apply(&x, p))
}

/// `H^k` together with the matrices of `X₁, X₂, X₃`.
#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    pub basis: HarmonicBasis,
    /// `frame[i]` is the matrix of `X_{i+1}`.
    pub frame: [Matrix<QSqrt2>; 3],
}

impl HarmonicSpace {
    pub fn new(k: u32) -> Result<Self> {
        Self::from_basis(HarmonicBasis::new(k)?)
    }

    pub fn from_basis(basis: HarmonicBasis) -> Result<Self> {
        let mats: Vec<Matrix<QSqrt2>> =
            (1..=3).map(|i| frame_matrix(i, &basis).map(|o| o.matrix)).collect::<Result<_>>()?;
        let [a1, a2, a3]: [Matrix<QSqrt2>; 3] = mats.try_into().expect("three matrices");
        let space = HarmonicSpace { basis, frame: [a1, a2, a3] };
        space.check_casimir()?;
        Ok(space)
    }

    pub fn k(&self) -> u32 {
        self.basis.k
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Matrix of `X_i`, `i ∈ 1..=3`.
    pub fn x(&self, i: usize) -> &Matrix<QSqrt2> {
        &self.frame[i - 1]
    }

    /// Matrix of the composition `X_i X_j` (apply `X_j` first).
    pub fn xx(&self, i: usize, j: usize) -> Matrix<QSqrt2> {
        self.x(i).mul(self.x(j))
    }

    /// `−(X₁² + X₂² + X₃²)` must equal `λ_k·I`; this ties the frame matrices to
    /// the spherical Laplacian.
    fn check_casimir(&self) -> Result<()> {
        let cas = self.xx(1, 1).add(&self.xx(2, 2)).add(&self.xx(3, 3));
        let expected = Matrix::identity(self.dim()).scale(&QSqrt2::rational(-lambda(self.k())));
        if cas != expected {
            return Err(Error::IdentityFailed(format!("-(X1^2+X2^2+X3^2) != lambda_{} on H^{}", self.k(), self.k())));
        }
        Ok(())
    }

    /// `Δ^V = −X₁X₁`
    pub fn vertical_laplacian(&self) -> Matrix<QSqrt2> {
        self.xx(1, 1).scale(&QSqrt2::int(-1))
    }
}

pub fn vertical_laplacian_matrix(k: u32) -> Result<OperatorOnHk> {
    let space = HarmonicSpace::new(k)?;
    Ok(OperatorOnHk { name: "vertical Laplacian".into(), k, matrix: space.vertical_laplacian() })
}

/// Eigenvalues with exact multiplicities, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSpectrum(pub Vec<(Rational, usize)>);

impl RationalSpectrum {
    pub fn total(&self) -> usize {
        self.0.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, value: &Rational) -> usize {
        self.0.iter().find(|(v, _)| v == value).map_or(0, |(_, m)| *m)
    }
}

/// Candidate vertical eigenvalues `(k−2l)²/2`, `l = 0..⌊k/2⌋`, ascending.
pub fn vertical_candidates(k: u32) -> Vec<Rational> {
    let mut c: Vec<Rational> = (0..=k / 2)
        .map(|l| {
            let d = k as i64 - 2 * l as i64;
            Rational::new((d * d).into(), 2.into())
        })
        .collect();
    c.sort();
    c
}

/// Spectrum of `Δ^V` on `H^k` from exact nullities at the candidate values,
/// cross-checked by a floating-point solve for stray eigenvalues.
pub fn vertical_spectrum_bruteforce(k: u32) -> Result<RationalSpectrum> {
    let space = HarmonicSpace::new(k)?;
    let m = space.vertical_laplacian();
    let n = space.dim();
    let mut out = BTreeMap::new();
    for c in vertical_candidates(k) {
        let nul = m.shift(&QSqrt2::rational(c.clone())).nullity();
        if nul > 0 {
            out.insert(c, nul);
        }
    }
    let spectrum = RationalSpectrum(out.into_iter().collect());
    if spectrum.total() != n {
        return Err(Error::Spectrum(format!(
            "vertical candidates cover {} of {} dimensions at k={k}",
            spectrum.total(),
            n
        )));
    }
    let floats = eigen::generalized_eigenvalues(&m.to_f64(), &space.basis.gram.to_f64(), n)?;
    let cands: Vec<f64> = spectrum.0.iter().map(|(c, _)| crate::scalar::rational_to_f64(c)).collect();
    for mu in floats {
        let best = cands.iter().map(|c| (c - mu).abs()).fold(f64::INFINITY, f64::min);
        if best > eigen::cluster_tolerance(1e-9, mu) {
            return Err(Error::Spectrum(format!("unexpected vertical eigenvalue {mu} at k={k}")));
        }
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn spec(v: &[(i64, i64, usize)]) -> RationalSpectrum {
        RationalSpectrum(v.iter().map(|&(n, d, m)| (rat(n, d), m)).collect())
    }

    #[test]
    fn dimensions() {
        for k in 0..=6 {
            assert_eq!(HarmonicBasis::new(k).unwrap().dim(), dimension(k));
        }
    }

    #[test]
    fn canonical_grams() {
        assert!(HarmonicBasis::new(0).unwrap().gram.is_identity());
        assert!(HarmonicBasis::new(1).unwrap().gram.is_identity());
        let g2 = HarmonicBasis::new(2).unwrap().gram;
        assert_eq!(g2, Matrix::identity(9).scale(&QSqrt2::frac(1, 3)));
    }

    #[test]
    fn x1_on_first_harmonics() {
        let b = HarmonicBasis::new(1).unwrap();
        let a = frame_matrix(1, &b).unwrap().matrix;
        let s = QSqrt2::sqrt2_times(1, 2);
        // X1 f1 = -f2/√2, X1 f2 = f1/√2
        assert_eq!(a[(1, 0)], -s.clone());
        assert_eq!(a[(0, 1)], s.clone());
        assert_eq!(a[(3, 2)], -s.clone());
        assert_eq!(a[(2, 3)], s);
    }

    #[test]
    fn x1_kills_f3_at_degree_two() {
        let b = HarmonicBasis::new(2).unwrap();
        let a = frame_matrix(1, &b).unwrap().matrix;
        assert!(a.column(2).iter().all(|c| c.is_zero()));
        assert!(a.column(5).iter().all(|c| c.is_zero()));
        assert!(a.column(6).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn identity_operator() {
        let b = HarmonicBasis::new(3).unwrap();
        assert!(operator_matrix("id", &b, |p| p.clone()).unwrap().matrix.is_identity());
    }

    #[test]
    fn killing_matrices_are_gram_skew() {
        for k in 0..=4 {
            let b = HarmonicBasis::new(k).unwrap();
            for i in 1..=6 {
                assert!(frame_matrix(i, &b).unwrap().matrix.is_gram_skew(&b.gram), "X{i} k={k}");
            }
        }
    }

    #[test]
    fn non_invariant_operator_is_rejected() {
        let b = HarmonicBasis::new(2).unwrap();
        let r = operator_matrix("x1*", &b, |p| p.mul(&Poly::var(0)));
        assert!(matches!(r, Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn vertical_spectra() {
        assert_eq!(vertical_spectrum_bruteforce(0).unwrap(), spec(&[(0, 1, 1)]));
        assert_eq!(vertical_spectrum_bruteforce(1).unwrap(), spec(&[(1, 2, 4)]));
        assert_eq!(vertical_spectrum_bruteforce(2).unwrap(), spec(&[(0, 1, 3), (2, 1, 6)]));
        assert_eq!(vertical_spectrum_bruteforce(3).unwrap(), spec(&[(1, 2, 8), (9, 2, 8)]));
        assert_eq!(vertical_spectrum_bruteforce(4).unwrap(), spec(&[(0, 1, 5), (2, 1, 10), (8, 1, 10)]));
    }

    #[test]
    fn vertical_laplacian_at_degree_one() {
        let m = vertical_laplacian_matrix(1).unwrap().matrix;
        assert_eq!(m, Matrix::identity(4).scale(&QSqrt2::frac(1, 2)));
    }

    #[test]
    fn echelon_and_canonical_coordinates_agree_with_gram_solve() {
        let b = HarmonicBasis::new(3).unwrap();
        let p = vf_apply(&FrameField::x(2), &b.basis[5]);
        let c = b.coordinates(&p).unwrap();
        // ⟨p, b_i⟩ = Σ_j G_ij c_j
        let rhs: Vec<QSqrt2> = b.basis.iter().map(|bi| crate::geometry::inner_product(&p, bi)).collect();
        assert_eq!(b.gram.mul_vec(&c), rhs);
    }
}
