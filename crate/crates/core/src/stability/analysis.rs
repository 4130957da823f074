//! Index and nullity totals across degrees, and explicit descriptions of the
//! kernel, the negative directions and the basic subspace.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, dpsi, hopf_map, vf_apply, FrameField, IdentityCheck};
use crate::harmonic::{HarmonicSpace, dimension};
use crate::linalg::{is_zero_vec, same_span, span_rank, Matrix};
use crate::poly::{constant_on_sphere, RealPoly};
use crate::scalar::QSqrt2;
use crate::stability::{
    assemble, assemble_i_phi, assemble_j_psi, spectrum, uniform_certificate, Assembly, EigenEntry, OperatorTag,
    SectionBlock, SpectrumMethod, UniformCertificate,
};

/// Degrees at or below this are solved exactly by default.
pub const EXACT_DEGREE_LIMIT: u32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub k: u32,
    pub dim: usize,
    pub method: SpectrumMethod,
    pub exact_inertia: bool,
    pub index: usize,
    pub nullity: usize,
    pub min_eigenvalue: f64,
    pub spectrum: Vec<EigenEntry>,
}

pub fn degree_summary(tag: OperatorTag, k: u32, method: SpectrumMethod) -> Result<DegreeSummary> {
    let space = HarmonicSpace::new(k)?;
    let a = assemble(tag, &space)?;
    summarize(&a, method)
}

pub fn summarize(a: &Assembly, method: SpectrumMethod) -> Result<DegreeSummary> {
    let s = spectrum(&a.matrix, &a.gram, method)?;
    Ok(DegreeSummary {
        k: a.k,
        dim: a.dim(),
        method,
        exact_inertia: s.exact_inertia,
        index: s.index(),
        nullity: s.nullity(),
        min_eigenvalue: s.min_eigenvalue(),
        spectrum: s.entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub operator: OperatorTag,
    pub kmax: u32,
    pub degrees: Vec<DegreeSummary>,
    pub certificate: UniformCertificate,
    pub index: usize,
    pub nullity: usize,
    /// Every degree is either solved or covered by the certificate.
    pub complete: bool,
    pub uncovered: Vec<u32>,
    pub warnings: Vec<String>,
}

/// Solves degrees `0..=kmax` (exactly up to [`EXACT_DEGREE_LIMIT`], in floats
/// above) and combines them with the uniform certificate. A gap between
/// `kmax` and the certified range is a warning, or an error when
/// `require_complete` is set.
pub fn index_nullity_report(tag: OperatorTag, kmax: u32, require_complete: bool) -> Result<IndexReport> {
    let certificate = uniform_certificate(tag);
    let uncovered: Vec<u32> =
        if certificate.holds { (kmax + 1..certificate.from_k).collect() } else { Vec::new() };
    if require_complete && (!uncovered.is_empty() || !certificate.holds) {
        return Err(Error::CoverageGap(uncovered.iter().map(|&k| k as usize).collect()));
    }
    let mut degrees: Vec<DegreeSummary> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let method = if k <= EXACT_DEGREE_LIMIT { SpectrumMethod::Exact } else { SpectrumMethod::Float };
            degree_summary(tag, k, method)
        })
        .collect::<Result<_>>()?;
    degrees.sort_by_key(|d| d.k);
    let mut warnings = Vec::new();
    if !certificate.holds {
        warnings.push(format!("uniform certificate for {tag} failed; only degrees 0..={kmax} are covered"));
    }
    if let (Some(a), Some(b)) = (uncovered.first(), uncovered.last()) {
        warnings.push(format!("coverage incomplete above k={kmax}: degrees {a}..={b} are neither solved nor certified"));
    }
    let index = degrees.iter().map(|d| d.index).sum();
    let nullity = degrees.iter().map(|d| d.nullity).sum();
    Ok(IndexReport {
        operator: tag,
        kmax,
        complete: certificate.holds && uncovered.is_empty(),
        degrees,
        certificate,
        index,
        nullity,
        uncovered,
        warnings,
    })
}

fn coords(space: &HarmonicSpace, p: &RealPoly) -> Result<Vec<QSqrt2>> {
    space.basis.coordinates(p)
}

fn frame_dot(i: usize, j: usize) -> RealPoly {
    dot(&FrameField::x(i).ambient(), &FrameField::x(j).ambient())
}

/// The sections `dψ(X₄), dψ(X₅), dψ(X₆)` as `[⟨X_i,X₂⟩ | ⟨X_i,X₃⟩]` in degree 2.
pub fn killing_sections(space: &HarmonicSpace, a: &Assembly) -> Result<Vec<Vec<QSqrt2>>> {
    (4..=6)
        .map(|i| {
            let f2 = coords(space, &frame_dot(i, 2))?;
            let f3 = coords(space, &frame_dot(i, 3))?;
            Ok(a.section(&[(SectionBlock::X2, &f2), (SectionBlock::X3, &f3)]))
        })
        .collect()
}

/// `dψ(grad g) = (X₂g)·dψ(X₂) + (X₃g)·dψ(X₃)` for `g = ψ¹, ψ², ψ³`, plus the
/// normal part `c·g·η` when the operator acts on `φ` sections.
pub fn gradient_sections(space: &HarmonicSpace, a: &Assembly, normal_factor: &QSqrt2) -> Result<Vec<Vec<QSqrt2>>> {
    hopf_map()
        .iter()
        .map(|g| {
            let f2 = coords(space, &vf_apply(&FrameField::x(2), g))?;
            let f3 = coords(space, &vf_apply(&FrameField::x(3), g))?;
            let mut parts = vec![(SectionBlock::X2, f2.as_slice()), (SectionBlock::X3, f3.as_slice())];
            let fe: Vec<QSqrt2>;
            if a.tag == OperatorTag::Iphi {
                fe = coords(space, &g.scale(normal_factor))?;
                parts.push((SectionBlock::Eta, &fe));
            }
            Ok(a.section(&parts))
        })
        .collect()
}

/// Basic sections in one degree: `(u, −(1/√2)X₁u)` for `u ∈ ker(Δ^V − 2)`.
pub fn basic_tangent_sections(space: &HarmonicSpace, a: &Assembly) -> Vec<Vec<QSqrt2>> {
    let dv = space.vertical_laplacian();
    let ker = dv.shift(&QSqrt2::int(2)).nullspace();
    let c = QSqrt2::sqrt2_times(-1, 2);
    ker.iter()
        .map(|u| {
            let f3: Vec<QSqrt2> = space.x(1).mul_vec(u).iter().map(|x| x * &c).collect();
            a.section(&[(SectionBlock::X2, u), (SectionBlock::X3, &f3)])
        })
        .collect()
}

fn in_kernel(a: &Assembly, v: &[QSqrt2]) -> bool {
    is_zero_vec(&a.apply(v))
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> IdentityCheck {
    let detail = detail.into();
    IdentityCheck { name: name.into(), passed, residual: if passed { "0".into() } else { detail } }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelReport {
    /// `dim ker J^ψ` in degree 0.
    pub degree0: usize,
    /// `dim ker J^ψ` in degree 2.
    pub degree2: usize,
    pub killing_rank: usize,
    pub gradient_rank: usize,
    pub total: usize,
    pub checks: Vec<IdentityCheck>,
}

/// `ker J^ψ`: the constant sections in degree 0, and in degree 2 the span of
/// the Killing and gradient sections, which is also the basic locus.
pub fn kernel_characterization() -> Result<KernelReport> {
    let s0 = HarmonicSpace::new(0)?;
    let j0 = assemble_j_psi(&s0);
    let degree0 = j0.matrix.nullity();
    let s2 = HarmonicSpace::new(2)?;
    let j2 = assemble_j_psi(&s2);
    let ker = j2.matrix.nullspace();
    let killing = killing_sections(&s2, &j2)?;
    let gradient = gradient_sections(&s2, &j2, &QSqrt2::zero())?;
    let basic = basic_tangent_sections(&s2, &j2);
    let both: Vec<Vec<QSqrt2>> = killing.iter().chain(&gradient).cloned().collect();
    let killing_rank = span_rank(&killing);
    let gradient_rank = span_rank(&gradient);
    let others: Vec<u32> = (0..=6).filter(|&k| k != 0 && k != 2).collect();
    let elsewhere: usize = others
        .par_iter()
        .map(|&k| HarmonicSpace::new(k).map(|s| assemble_j_psi(&s).matrix.nullity()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();
    let checks = vec![
        check("Killing sections lie in ker J", killing.iter().all(|v| in_kernel(&j2, v)), "nonzero image"),
        check("gradient sections lie in ker J", gradient.iter().all(|v| in_kernel(&j2, v)), "nonzero image"),
        check("Killing and gradient sections span ker J at k=2", same_span(&both, &ker), format!("rank {}", span_rank(&both))),
        check("basic locus equals ker J at k=2", same_span(&basic, &ker), format!("basic dim {}", basic.len())),
        check("ker J vanishes in degrees 1 and 3..=6", elsewhere == 0, format!("{elsewhere}")),
    ];
    Ok(KernelReport {
        degree0,
        degree2: ker.len(),
        killing_rank,
        gradient_rank,
        total: degree0 + ker.len(),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativeSpaceReport {
    pub eigenvalue: QSqrt2,
    pub dim: usize,
    pub checks: Vec<IdentityCheck>,
}

/// The negative eigenspace of `J^ψ`: in degree 1, the sections
/// `(X₂f)·dψ(X₂) + (X₃f)·dψ(X₃)` for `f ∈ H¹`, all with eigenvalue `−1/2`.
pub fn negative_space_characterization() -> Result<NegativeSpaceReport> {
    let s1 = HarmonicSpace::new(1)?;
    let j1 = assemble_j_psi(&s1);
    let mu = QSqrt2::frac(-1, 2);
    let sections: Vec<Vec<QSqrt2>> = (0..s1.dim())
        .map(|i| {
            let e: Vec<QSqrt2> = (0..s1.dim()).map(|j| if i == j { QSqrt2::one() } else { QSqrt2::zero() }).collect();
            let f2 = s1.x(2).mul_vec(&e);
            let f3 = s1.x(3).mul_vec(&e);
            j1.section(&[(SectionBlock::X2, &f2), (SectionBlock::X3, &f3)])
        })
        .collect();
    let shifted = j1.matrix.shift(&mu);
    let eigenspace = shifted.nullspace();
    let others: usize = [0u32, 2, 3, 4]
        .par_iter()
        .map(|&k| -> Result<usize> {
            let s = HarmonicSpace::new(k)?;
            let a = assemble_j_psi(&s);
            Ok(crate::stability::exact_inertia(&a.matrix, &a.gram)?.negative)
        })
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();
    let checks = vec![
        check("(X2 f, X3 f) are eigenvectors for -1/2", sections.iter().all(|v| is_zero_vec(&shifted.mul_vec(v))), "residual"),
        check("they span the -1/2 eigenspace", same_span(&sections, &eigenspace), format!("rank {}", span_rank(&sections))),
        check("no negative eigenvalues in degrees 0, 2, 3, 4", others == 0, format!("{others}")),
    ];
    Ok(NegativeSpaceReport { eigenvalue: mu, dim: eigenspace.len(), checks })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstabilityWitness {
    /// Energy density of `ψ`, constant on the sphere.
    pub energy_density: QSqrt2,
    /// `|Δη|² − 4e⟨Δη,η⟩ − 12e²` with `Δη = 2eη`.
    pub value: QSqrt2,
    /// The `η`-diagonal entry of the degree-0 `I^φ` matrix.
    pub matrix_entry: QSqrt2,
    pub unstable: bool,
}

/// The normal section `η` as a destabilizing direction for `φ`.
pub fn instability_witness() -> Result<InstabilityWitness> {
    let half = QSqrt2::frac(1, 2);
    let density = (1..=3)
        .map(|i| {
            let d = dpsi(&FrameField::x(i));
            dot(&d, &d)
        })
        .fold(RealPoly::zero(), |acc, p| acc.add(&p))
        .scale(&half);
    let e = constant_on_sphere(&density)
        .ok_or_else(|| Error::IdentityFailed("energy density is not constant".into()))?;
    let lap = &QSqrt2::int(2) * &e;
    let ee = &e * &e;
    let value = &(&(&lap * &lap) - &(&(&QSqrt2::int(4) * &e) * &lap)) - &(&QSqrt2::int(12) * &ee);
    let a = assemble_i_phi(&HarmonicSpace::new(0)?);
    let idx = a.index_of(SectionBlock::Eta, 0);
    let matrix_entry = a.matrix[(idx, idx)].clone();
    if matrix_entry != value {
        return Err(Error::IdentityFailed(format!("witness {value} differs from matrix entry {matrix_entry}")));
    }
    let unstable = value < QSqrt2::zero();
    Ok(InstabilityWitness { energy_density: e, value, matrix_entry, unstable })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasicDegree {
    pub k: u32,
    pub dim: usize,
    pub index: usize,
    pub nullity: usize,
    pub spectrum: Vec<EigenEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasicReport {
    pub kmax: u32,
    pub degrees: Vec<BasicDegree>,
    pub index: usize,
    pub nullity: usize,
    pub checks: Vec<IdentityCheck>,
}

/// Basic sections of `φ` in degree `k`: basic tangent pairs and `f·η` with
/// `f ∈ ker Δ^V`. Returns the restricted operator and Gram matrix.
pub fn basic_restriction(a: &Assembly, space: &HarmonicSpace) -> Result<Option<(Matrix<QSqrt2>, Matrix<QSqrt2>, Matrix<QSqrt2>)>> {
    let mut cols = basic_tangent_sections(space, a);
    for f in space.vertical_laplacian().nullspace() {
        cols.push(a.section(&[(SectionBlock::Eta, &f)]));
    }
    if cols.is_empty() {
        return Ok(None);
    }
    let b = Matrix::from_columns(a.dim(), &cols);
    let c = b
        .solve(&a.matrix.mul(&b))?
        .ok_or_else(|| Error::NotInvariant { operator: "I^phi on basic sections".into(), k: a.k as usize, residual: "image leaves the subspace".into() })?;
    let g = b.transpose().mul(&a.gram).mul(&b);
    Ok(Some((b, c, g)))
}

/// `I^φ` on the basic subspace for degrees `0..=kmax`, exactly.
pub fn basic_subspace_spectrum(kmax: u32) -> Result<BasicReport> {
    if kmax < 4 {
        return Err(Error::InvalidArgument(format!("basic subspace scan needs kmax >= 4, got {kmax}")));
    }
    let mut degrees: Vec<BasicDegree> = (0..=kmax)
        .into_par_iter()
        .map(|k| -> Result<BasicDegree> {
            let space = HarmonicSpace::new(k)?;
            let a = assemble_i_phi(&space);
            match basic_restriction(&a, &space)? {
                None => Ok(BasicDegree { k, dim: 0, index: 0, nullity: 0, spectrum: Vec::new() }),
                Some((_, c, g)) => {
                    let s = spectrum(&c, &g, SpectrumMethod::Exact)?;
                    Ok(BasicDegree { k, dim: c.rows(), index: s.index(), nullity: s.nullity(), spectrum: s.entries })
                }
            }
        })
        .collect::<Result<_>>()?;
    degrees.sort_by_key(|d| d.k);
    let s2 = HarmonicSpace::new(2)?;
    let a2 = assemble_i_phi(&s2);
    let mut sections = killing_sections(&s2, &a2)?;
    sections.extend(gradient_sections(&s2, &a2, &QSqrt2::int(2))?);
    let ker = a2.matrix.nullspace();
    let checks = vec![
        check("Killing and (X2 g, X3 g, 2g) sections lie in ker I^phi", sections.iter().all(|v| in_kernel(&a2, v)), "nonzero image"),
        check("they span ker I^phi at k=2", same_span(&sections, &ker), format!("rank {} of {}", span_rank(&sections), ker.len())),
        check("basic dimension at k=2 is 9", degrees[2].dim == 9, format!("{}", degrees[2].dim)),
        check("H^2 has dimension 9", dimension(2) == 9, ""),
    ];
    let index = degrees.iter().map(|d| d.index).sum();
    let nullity = degrees.iter().map(|d| d.nullity).sum();
    Ok(BasicReport { kmax, degrees, index, nullity, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel() {
        let r = kernel_characterization().unwrap();
        assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
        assert_eq!((r.degree0, r.degree2, r.killing_rank, r.gradient_rank, r.total), (2, 6, 3, 3, 8));
    }

    #[test]
    fn negative_space() {
        let r = negative_space_characterization().unwrap();
        assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
        assert_eq!(r.dim, 4);
    }

    #[test]
    fn witness() {
        let w = instability_witness().unwrap();
        assert_eq!(w.energy_density, QSqrt2::one());
        assert_eq!(w.value, QSqrt2::int(-16));
        assert!(w.unstable);
    }

    #[test]
    fn basic_subspace() {
        let r = basic_subspace_spectrum(4).unwrap();
        assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
        assert_eq!((r.index, r.nullity), (1, 6));
    }

    #[test]
    fn small_tallies() {
        let j = index_nullity_report(OperatorTag::Jpsi, 2, false).unwrap();
        assert_eq!((j.index, j.nullity), (4, 8));
        assert!(j.complete);
        let i = index_nullity_report(OperatorTag::Ipsi, 2, false).unwrap();
        assert_eq!((i.index, i.nullity), (0, 8));
        let p = index_nullity_report(OperatorTag::Iphi, 2, false).unwrap();
        assert_eq!((p.index, p.nullity), (11, 8));
        assert!(!p.complete);
        assert_eq!(p.uncovered, (3..12).collect::<Vec<_>>());
        assert!(matches!(index_nullity_report(OperatorTag::Iphi, 2, true), Err(Error::CoverageGap(_))));
    }
}
