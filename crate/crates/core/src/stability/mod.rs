//! Jacobi and bienergy Hessian operators restricted to the invariant section
//! spaces built from `H^k`.
//!
//! Sections along `ψ` are `f₂·dψ(X₂) + f₃·dψ(X₃)`; sections along `φ` add a
//! normal part `f·η`. With `f₂, f₃, f ∈ H^k` and coordinates in the basis of
//! `H^k`, a section is a block vector `[f₂ | f₃]` or `[f₂ | f₃ | f]`.

mod analysis;
mod certificate;
mod spectrum;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use analysis::*;
pub use certificate::*;
pub use spectrum::*;

use crate::error::{Error, Result};
use crate::harmonic::{lambda, HarmonicSpace};
use crate::linalg::Matrix;
use crate::scalar::QSqrt2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorTag {
    /// Jacobi operator of `ψ`.
    Jpsi,
    /// Bienergy Hessian of `ψ`.
    Ipsi,
    /// Bienergy Hessian of `φ = i∘ψ`.
    Iphi,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 3] = [OperatorTag::Jpsi, OperatorTag::Ipsi, OperatorTag::Iphi];

    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::Jpsi => "jpsi",
            OperatorTag::Ipsi => "ipsi",
            OperatorTag::Iphi => "iphi",
        }
    }

    pub fn blocks(self) -> &'static [SectionBlock] {
        match self {
            OperatorTag::Jpsi | OperatorTag::Ipsi => &[SectionBlock::X2, SectionBlock::X3],
            OperatorTag::Iphi => &[SectionBlock::X2, SectionBlock::X3, SectionBlock::Eta],
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jpsi" => Ok(OperatorTag::Jpsi),
            "ipsi" => Ok(OperatorTag::Ipsi),
            "iphi" => Ok(OperatorTag::Iphi),
            _ => Err(Error::Parse(format!("unknown operator `{s}` (expected jpsi, ipsi or iphi)"))),
        }
    }
}

/// Which coefficient a block of a section vector holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectionBlock {
    /// coefficient of `dψ(X₂)` (or `dφ(X₂)`)
    X2,
    /// coefficient of `dψ(X₃)` (or `dφ(X₃)`)
    X3,
    /// coefficient of `η`
    Eta,
}

/// An operator on one section space, with the `L²` Gram matrix of that space.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub tag: OperatorTag,
    pub k: u32,
    /// Dimension of `H^k`, the size of every block.
    pub block_dim: usize,
    /// `op(s_j) = Σ_i matrix_ij s_i`.
    pub matrix: Matrix<QSqrt2>,
    pub gram: Matrix<QSqrt2>,
}

impl Assembly {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn blocks(&self) -> &'static [SectionBlock] {
        self.tag.blocks()
    }

    /// Position of coordinate `i` of `block` in a section vector.
    pub fn index_of(&self, block: SectionBlock, i: usize) -> usize {
        let b = self.blocks().iter().position(|&x| x == block).expect("block belongs to this operator");
        b * self.block_dim + i
    }

    /// Section vector from per-block coordinates; missing blocks are zero.
    pub fn section(&self, parts: &[(SectionBlock, &[QSqrt2])]) -> Vec<QSqrt2> {
        let mut v = vec![QSqrt2::default(); self.dim()];
        for (block, coords) in parts {
            assert_eq!(coords.len(), self.block_dim);
            for (i, c) in coords.iter().enumerate() {
                v[self.index_of(*block, i)] = c.clone();
            }
        }
        v
    }

    pub fn apply(&self, v: &[QSqrt2]) -> Vec<QSqrt2> {
        self.matrix.mul_vec(v)
    }

    /// `Mᵀ·G = G·M`
    pub fn is_self_adjoint(&self) -> bool {
        self.matrix.is_gram_symmetric(&self.gram)
    }

    /// Index sets on which both the operator and the Gram matrix are block diagonal.
    pub fn components(&self) -> Vec<Vec<usize>> {
        Matrix::components(&[&self.matrix, &self.gram])
    }
}

fn lam(space: &HarmonicSpace) -> QSqrt2 {
    QSqrt2::rational(lambda(space.k()))
}

fn gram_for(space: &HarmonicSpace, blocks: usize) -> Matrix<QSqrt2> {
    let g = &space.basis.gram;
    Matrix::block_diagonal(&vec![g; blocks])
}

pub fn assemble(tag: OperatorTag, space: &HarmonicSpace) -> Result<Assembly> {
    match tag {
        OperatorTag::Jpsi => Ok(assemble_j_psi(space)),
        OperatorTag::Ipsi => assemble_i_psi(space),
        OperatorTag::Iphi => Ok(assemble_i_phi(space)),
    }
}

/// `J^ψ = [[λI, −2√2·X₁], [2√2·X₁, λI]]`
pub fn assemble_j_psi(space: &HarmonicSpace) -> Assembly {
    let n = space.dim();
    let id = Matrix::identity(n).scale(&lam(space));
    let c = space.x(1).scale(&QSqrt2::sqrt2_times(2, 1));
    let matrix = Matrix::from_blocks(&[
        vec![id.clone(), c.scale(&QSqrt2::int(-1))],
        vec![c, id],
    ]);
    Assembly { tag: OperatorTag::Jpsi, k: space.k(), block_dim: n, matrix, gram: gram_for(space, 2) }
}

/// `I^ψ = J^ψ ∘ J^ψ`, required to be self-adjoint.
pub fn assemble_i_psi(space: &HarmonicSpace) -> Result<Assembly> {
    let j = assemble_j_psi(space);
    let a = Assembly { tag: OperatorTag::Ipsi, matrix: j.matrix.mul(&j.matrix), ..j };
    if !a.is_self_adjoint() {
        return Err(Error::IdentityFailed(format!("I^psi not self-adjoint at k={}", a.k)));
    }
    Ok(a)
}

/// `I^φ` from the closed-form blocks in `X₁, X₂, X₃`.
pub fn assemble_i_phi(space: &HarmonicSpace) -> Assembly {
    let n = space.dim();
    let l = lam(space);
    let q = |x: i64| QSqrt2::int(x);
    let r2 = |x: i64| QSqrt2::sqrt2_times(x, 1);
    let id = Matrix::<QSqrt2>::identity(n);
    let xx = |i, j| space.xx(i, j);
    let a = |i| space.x(i).clone();
    let l2_4l = &(&l * &l) + &(&l * &q(4));

    let b22 = id.scale(&l2_4l).sub(&xx(1, 1).scale(&q(8))).sub(&xx(2, 2).scale(&q(4)));
    let b33 = id.scale(&l2_4l).sub(&xx(1, 1).scale(&q(8))).sub(&xx(3, 3).scale(&q(4)));
    let bee = id.scale(&(&(&l * &l) - &q(16))).sub(&xx(2, 2).scale(&q(4))).sub(&xx(3, 3).scale(&q(4)));
    let lp2 = &l + &q(2);
    let b32 = a(1).scale(&(&r2(4) * &lp2)).sub(&xx(3, 2).scale(&q(4)));
    let b23 = a(1).scale(&(&r2(-4) * &lp2)).sub(&xx(2, 3).scale(&q(4)));
    let be2 = a(2).scale(&(&l * &q(4))).add(&xx(3, 1).scale(&r2(4)));
    let be3 = a(3).scale(&(&l * &q(4))).sub(&xx(2, 1).scale(&r2(4)));
    let b2e = a(2).scale(&(&l * &q(-4))).add(&xx(1, 3).scale(&r2(4)));
    let b3e = a(3).scale(&(&l * &q(-4))).sub(&xx(1, 2).scale(&r2(4)));

    let matrix = Matrix::from_blocks(&[vec![b22, b23, b2e], vec![b32, b33, b3e], vec![be2, be3, bee]]);
    Assembly { tag: OperatorTag::Iphi, k: space.k(), block_dim: n, matrix, gram: gram_for(space, 3) }
}

/// Matrix of the rough Laplacian `Δ^φ` on the `φ` section space.
pub fn rough_laplacian_phi(space: &HarmonicSpace) -> Matrix<QSqrt2> {
    let n = space.dim();
    let l = lam(space);
    let q = |x: i64| QSqrt2::int(x);
    let id = Matrix::<QSqrt2>::identity(n);
    let c = space.x(1).scale(&QSqrt2::sqrt2_times(2, 1));
    Matrix::from_blocks(&[
        vec![id.scale(&(&l + &q(3))), c.scale(&q(-1)), space.x(2).scale(&q(-2))],
        vec![c, id.scale(&(&l + &q(3))), space.x(3).scale(&q(-2))],
        vec![space.x(2).scale(&q(2)), space.x(3).scale(&q(2)), id.scale(&(&l + &q(2)))],
    ])
}

/// `I^φ` rebuilt from `Δ^φ`, the curvature term and the tension terms:
/// tangent sources get `D² − 3D + T·D − 3 − 4(X_a f)η`, normal sources get
/// `D² − 4D + T·D − 12 + 4 dφ(grad f)`.
pub fn assemble_i_phi_from_rough_laplacian(space: &HarmonicSpace) -> Assembly {
    let n = space.dim();
    let q = |x: i64| QSqrt2::int(x);
    let d = rough_laplacian_phi(space);
    let zero = Matrix::<QSqrt2>::zeros(n, n);
    let id = Matrix::<QSqrt2>::identity(n);
    let t = Matrix::block_diagonal(&[&id, &id, &zero]);
    let base = d.mul(&d).add(&t.mul(&d));
    let tangent = Matrix::block_diagonal(&[&id, &id, &zero]);
    let normal = Matrix::block_diagonal(&[&zero, &zero, &id]);
    let id3 = Matrix::<QSqrt2>::identity(3 * n);
    let lower = d.scale(&q(3)).add(&id3.scale(&q(3))).mul(&tangent)
        .add(&d.scale(&q(4)).add(&id3.scale(&q(12))).mul(&normal));
    let a2 = space.x(2);
    let a3 = space.x(3);
    let extra = Matrix::from_blocks(&[
        vec![zero.clone(), zero.clone(), a2.scale(&q(4))],
        vec![zero.clone(), zero.clone(), a3.scale(&q(4))],
        vec![a2.scale(&q(-4)), a3.scale(&q(-4)), zero],
    ]);
    let matrix = base.sub(&lower).add(&extra);
    Assembly { tag: OperatorTag::Iphi, k: space.k(), block_dim: n, matrix, gram: gram_for(space, 3) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_are_self_adjoint() {
        for k in 0..=3 {
            let s = HarmonicSpace::new(k).unwrap();
            assert!(assemble_j_psi(&s).is_self_adjoint(), "J k={k}");
            assert!(assemble_i_psi(&s).is_ok(), "Ipsi k={k}");
            assert!(assemble_i_phi(&s).is_self_adjoint(), "Iphi k={k}");
        }
    }

    #[test]
    fn closed_form_matches_rough_laplacian_route() {
        for k in 0..=3 {
            let s = HarmonicSpace::new(k).unwrap();
            assert_eq!(assemble_i_phi(&s).matrix, assemble_i_phi_from_rough_laplacian(&s).matrix, "k={k}");
        }
    }

    #[test]
    fn degree_zero() {
        let s = HarmonicSpace::new(0).unwrap();
        let i = assemble_i_phi(&s);
        let diag: Vec<QSqrt2> = (0..3).map(|r| i.matrix[(r, r)].clone()).collect();
        assert_eq!(diag, vec![QSqrt2::int(0), QSqrt2::int(0), QSqrt2::int(-16)]);
        assert!(assemble_j_psi(&s).matrix.is_zero());
    }

    #[test]
    fn tag_round_trip() {
        for t in OperatorTag::ALL {
            assert_eq!(t.name().parse::<OperatorTag>().unwrap(), t);
        }
        assert!("jacobi".parse::<OperatorTag>().is_err());
    }
}
