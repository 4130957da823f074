//! Eigenvalues of `G`-self-adjoint operators: a floating-point path, and an
//! exact path that certifies every float cluster over `Q(√2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::eigen::{cluster, generalized_eigenvalues, Cluster};
use crate::error::{Error, Result};
use crate::linalg::{Inertia, Matrix};
use crate::scalar::{rational_str, rational_to_f64, recognize_rational, square_part, QSqrt2, Rational};
use crate::unipoly::{charpoly, UniPoly};

/// Relative clustering tolerance for float eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Components up to this size are certified through their characteristic
/// polynomial; larger ones through the nullity of `q(M)`.
pub const CHARPOLY_LIMIT: usize = 12;

/// Clusters closer to zero than this (relative to the spectral radius) are
/// re-examined exactly in float mode.
const SUSPECT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenValue {
    Exact(QSqrt2),
    /// Both roots of `t² − trace·t + det`, irreducible over `Q(√2)`.
    Quadratic {
        #[serde(with = "rational_str")]
        trace: Rational,
        #[serde(with = "rational_str")]
        det: Rational,
    },
    Float(f64),
}

/// `x` rounded to `digits` significant digits, shortest rendering.
pub fn significant(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
    format!("{rounded}")
}

/// `m·√r` with `r` squarefree, `r > 1`.
fn surd(x: &Rational) -> (Rational, BigInt) {
    // √(n/d) = √(n·d)/d
    let nd = x.numer() * x.denom();
    let (m, r) = square_part(&nd, 1 << 20);
    (Rational::new(m, x.denom().clone()), r)
}

impl EigenValue {
    /// Numerical values of the eigenvalues this entry stands for.
    pub fn roots_f64(&self) -> Vec<f64> {
        match self {
            EigenValue::Exact(q) => vec![q.to_f64()],
            EigenValue::Float(x) => vec![*x],
            EigenValue::Quadratic { trace, det } => {
                let s = rational_to_f64(trace);
                let d = rational_to_f64(&(trace * trace - det * Rational::from_integer(4.into()))).sqrt();
                vec![(s - d) / 2.0, (s + d) / 2.0]
            }
        }
    }

    /// How many of `multiplicity` eigenvalues are negative, zero and positive.
    pub fn sign_counts(&self, multiplicity: usize) -> (usize, usize, usize) {
        let by_sign = |s: i32, m| match s {
            s if s < 0 => (m, 0, 0),
            0 => (0, m, 0),
            _ => (0, 0, m),
        };
        match self {
            EigenValue::Exact(q) => by_sign(q.signum(), multiplicity),
            EigenValue::Float(x) => by_sign(if *x < 0.0 { -1 } else if *x == 0.0 { 0 } else { 1 }, multiplicity),
            EigenValue::Quadratic { trace, det } => {
                let half = multiplicity / 2;
                if det.is_negative() {
                    (half, 0, half)
                } else if trace.is_negative() {
                    (multiplicity, 0, 0)
                } else {
                    (0, 0, multiplicity)
                }
            }
        }
    }

    /// Smallest root as a float.
    pub fn min_f64(&self) -> f64 {
        self.roots_f64().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `-1/2`, `24-16*sqrt(3), 24+16*sqrt(3)`, `1.5234`.
    pub fn pretty(&self) -> String {
        match self {
            EigenValue::Exact(q) => q.pretty(),
            EigenValue::Float(x) => significant(*x, 12),
            EigenValue::Quadratic { trace, det } => {
                let half = trace / Rational::from_integer(2.into());
                let disc4 = &half * &half - det;
                let (m, r) = surd(&disc4);
                let rad = if m == Rational::from_integer(1.into()) { format!("sqrt({r})") } else { format!("{m}*sqrt({r})") };
                if half.is_zero() {
                    format!("-{rad}, {rad}")
                } else {
                    format!("{half}-{rad}, {half}+{rad}")
                }
            }
        }
    }
}

impl fmt::Display for EigenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// An eigenvalue with its multiplicity; a quadratic entry counts both roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    #[serde(flatten)]
    pub value: EigenValue,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMethod {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub method: SpectrumMethod,
    pub entries: Vec<EigenEntry>,
    pub inertia: Inertia,
    /// Whether `inertia` was obtained by exact symmetric elimination.
    pub exact_inertia: bool,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn index(&self) -> usize {
        self.inertia.negative
    }

    pub fn nullity(&self) -> usize {
        self.inertia.zero
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries.iter().map(|e| e.value.min_f64()).fold(f64::INFINITY, f64::min)
    }

    /// Multiplicity of an exact eigenvalue.
    pub fn multiplicity_of(&self, value: &QSqrt2) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(&e.value, EigenValue::Exact(q) if q == value))
            .map(|e| e.multiplicity)
            .sum()
    }
}

fn components(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Vec<Vec<usize>> {
    Matrix::components(&[m, g])
}

/// Sorted float eigenvalues of `M` (with `G·M` symmetric), per component.
pub fn float_eigenvalues(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Result<Vec<f64>> {
    let mut all = Vec::with_capacity(m.rows());
    for comp in components(m, g) {
        let sm = m.submatrix(&comp, &comp);
        let sg = g.submatrix(&comp, &comp);
        all.extend(generalized_eigenvalues(&sm.to_f64(), &sg.to_f64(), comp.len())?);
    }
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(all)
}

pub fn float_clusters(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Result<Vec<Cluster>> {
    Ok(cluster(&float_eigenvalues(m, g)?, CLUSTER_TOL))
}

/// `dim ker(M − μ)`, exactly, component by component.
pub fn exact_nullity(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>, mu: &QSqrt2) -> usize {
    components(m, g).iter().map(|c| m.submatrix(c, c).shift(mu).nullity()).sum()
}

/// Exact inertia of `G·M`, which by congruence is the sign pattern of the
/// eigenvalues of `M`.
pub fn exact_inertia(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Result<Inertia> {
    let mut total = Inertia::default();
    for c in components(m, g) {
        let gm = g.submatrix(&c, &c).mul(&m.submatrix(&c, &c));
        let i = gm.inertia()?;
        total.positive += i.positive;
        total.negative += i.negative;
        total.zero += i.zero;
    }
    Ok(total)
}

/// Multiplicity of each root of the irreducible `t² − s·t + p`.
fn quadratic_multiplicity(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>, s: &Rational, p: &Rational) -> usize {
    let (s, p) = (QSqrt2::rational(s.clone()), QSqrt2::rational(p.clone()));
    let q = UniPoly::quadratic(&s, &p);
    components(m, g)
        .iter()
        .map(|c| {
            let sub = m.submatrix(c, c);
            if c.len() <= CHARPOLY_LIMIT {
                charpoly(&sub).multiplicity_of(&q).0
            } else {
                let qm = sub.mul(&sub).sub(&sub.scale(&s)).add(&Matrix::identity(c.len()).scale(&p));
                qm.nullity() / 2
            }
        })
        .sum()
}

fn recognize(x: f64) -> Option<Rational> {
    recognize_rational(x, 100_000, 1e-7 * x.abs().max(1.0))
}

fn sign_counts(entries: &[EigenEntry]) -> Inertia {
    let mut i = Inertia::default();
    for e in entries {
        let (n, z, p) = e.value.sign_counts(e.multiplicity);
        i.negative += n;
        i.zero += z;
        i.positive += p;
    }
    i
}

/// Every float cluster certified exactly: as a `Q(√2)` eigenvalue through an
/// exact nullity, or as a pair of conjugate quadratic roots through the
/// characteristic polynomial. Fails if any cluster cannot be certified or the
/// exact multiplicities disagree with the float ones.
pub fn exact_spectrum(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Result<Spectrum> {
    let clusters = float_clusters(m, g)?;
    let mut used = vec![false; clusters.len()];
    let mut entries = Vec::new();
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        let c = &clusters[i];
        if let Some(q) = recognize(c.value) {
            let mu = QSqrt2::rational(q);
            if exact_nullity(m, g, &mu) == c.multiplicity {
                used[i] = true;
                entries.push(EigenEntry { value: EigenValue::Exact(mu), multiplicity: c.multiplicity });
                continue;
            }
        }
        let mut resolved = false;
        for j in i + 1..clusters.len() {
            if used[j] || clusters[j].multiplicity != c.multiplicity {
                continue;
            }
            let d = &clusters[j];
            let (Some(s), Some(p)) = (recognize(c.value + d.value), recognize(c.value * d.value)) else {
                continue;
            };
            let disc = &s * &s - &p * Rational::from_integer(4.into());
            if !disc.is_positive() {
                continue;
            }
            // Roots in Q(√2) when disc/8 is a rational square.
            let (root, rest) = surd(&(&disc / Rational::from_integer(8.into())));
            if rest == BigInt::from(1) {
                let half = QSqrt2::rational(&s / Rational::from_integer(2.into()));
                let off = QSqrt2::new(Rational::zero(), root);
                let lo = &half - &off;
                let hi = &half + &off;
                if exact_nullity(m, g, &lo) == c.multiplicity && exact_nullity(m, g, &hi) == d.multiplicity {
                    entries.push(EigenEntry { value: EigenValue::Exact(lo), multiplicity: c.multiplicity });
                    entries.push(EigenEntry { value: EigenValue::Exact(hi), multiplicity: d.multiplicity });
                    resolved = true;
                }
            } else if quadratic_multiplicity(m, g, &s, &p) == c.multiplicity {
                entries.push(EigenEntry {
                    value: EigenValue::Quadratic { trace: s, det: p },
                    multiplicity: 2 * c.multiplicity,
                });
                resolved = true;
            }
            if resolved {
                used[i] = true;
                used[j] = true;
                break;
            }
        }
        if !resolved {
            return Err(Error::Spectrum(format!(
                "eigenvalue cluster {:.12} (multiplicity {}) could not be certified exactly",
                c.value, c.multiplicity
            )));
        }
    }
    let total: usize = entries.iter().map(|e| e.multiplicity).sum();
    if total != m.rows() {
        return Err(Error::Spectrum(format!("certified multiplicities sum to {total}, expected {}", m.rows())));
    }
    let inertia = exact_inertia(m, g)?;
    if inertia != sign_counts(&entries) {
        return Err(Error::Spectrum(format!("exact inertia {inertia:?} disagrees with the certified spectrum")));
    }
    entries.sort_by(|a, b| a.value.min_f64().partial_cmp(&b.value.min_f64()).expect("finite"));
    Ok(Spectrum { method: SpectrumMethod::Exact, entries, inertia, exact_inertia: true })
}

/// Float clusters. Index and nullity come from the float signs unless some
/// cluster is negative or close to zero, in which case exact inertia decides
/// and a near-zero cluster confirmed as an exact kernel is reported as `0`.
pub fn float_spectrum(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>) -> Result<Spectrum> {
    let clusters = float_clusters(m, g)?;
    let scale = clusters.iter().map(|c| c.value.abs()).fold(1.0, f64::max);
    let suspect = |c: &Cluster| c.value.abs() <= SUSPECT_TOL * scale || c.value < 0.0;
    let mut entries: Vec<EigenEntry> = clusters
        .iter()
        .map(|c| EigenEntry { value: EigenValue::Float(c.value), multiplicity: c.multiplicity })
        .collect();
    if !clusters.iter().any(suspect) {
        let inertia = Inertia { positive: m.rows(), negative: 0, zero: 0 };
        return Ok(Spectrum { method: SpectrumMethod::Float, entries, inertia, exact_inertia: false });
    }
    let inertia = exact_inertia(m, g)?;
    for (e, c) in entries.iter_mut().zip(&clusters) {
        if c.value.abs() <= SUSPECT_TOL * scale && exact_nullity(m, g, &QSqrt2::default()) == c.multiplicity {
            e.value = EigenValue::Exact(QSqrt2::default());
        }
    }
    Ok(Spectrum { method: SpectrumMethod::Float, entries, inertia, exact_inertia: true })
}

pub fn spectrum(m: &Matrix<QSqrt2>, g: &Matrix<QSqrt2>, method: SpectrumMethod) -> Result<Spectrum> {
    match method {
        SpectrumMethod::Exact => exact_spectrum(m, g),
        SpectrumMethod::Float => float_spectrum(m, g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::HarmonicSpace;
    use crate::scalar::rat;
    use crate::stability::{assemble_i_phi, assemble_j_psi};

    #[test]
    fn jacobi_degree_one() {
        let a = assemble_j_psi(&HarmonicSpace::new(1).unwrap());
        let s = exact_spectrum(&a.matrix, &a.gram).unwrap();
        assert_eq!(s.multiplicity_of(&QSqrt2::frac(-1, 2)), 4);
        assert_eq!(s.multiplicity_of(&QSqrt2::frac(7, 2)), 4);
        assert_eq!(s.index(), 4);
    }

    #[test]
    fn bienergy_phi_degree_one_has_quadratic_pair() {
        let a = assemble_i_phi(&HarmonicSpace::new(1).unwrap());
        let s = exact_spectrum(&a.matrix, &a.gram).unwrap();
        assert_eq!(s.multiplicity_of(&QSqrt2::frac(105, 4)), 4);
        let quad = s.entries.iter().find(|e| matches!(e.value, EigenValue::Quadratic { .. })).unwrap();
        assert_eq!(quad.value, EigenValue::Quadratic { trace: rat(-15, 2), det: rat(-415, 16) });
        assert_eq!(quad.multiplicity, 8);
        assert_eq!(quad.value.pretty(), "-15/4-2*sqrt(10), -15/4+2*sqrt(10)");
        assert_eq!((s.index(), s.nullity()), (4, 0));
    }

    #[test]
    fn float_agrees_with_exact() {
        let a = assemble_i_phi(&HarmonicSpace::new(2).unwrap());
        let e = exact_spectrum(&a.matrix, &a.gram).unwrap();
        let f = float_spectrum(&a.matrix, &a.gram).unwrap();
        assert_eq!(e.inertia, f.inertia);
        assert!(f.exact_inertia);
    }

    #[test]
    fn serde_shape() {
        let e = EigenEntry { value: EigenValue::Quadratic { trace: rat(48, 1), det: rat(-192, 1) }, multiplicity: 4 };
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(j, r#"{"quadratic":{"trace":"48","det":"-192"},"multiplicity":4}"#);
        assert_eq!(serde_json::from_str::<EigenEntry>(&j).unwrap(), e);
        assert_eq!(e.value.pretty(), "24-16*sqrt(3), 24+16*sqrt(3)");
    }
}
