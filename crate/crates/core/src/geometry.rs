//! The sphere `S³(√2) ⊂ R⁴`, its Killing frame, and the Hopf map onto
//! `S²(1/√2)`.
//!
//! All integrals are normalized by the volume of `S³(√2)`, so moments and
//! Gram entries are rational.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{equal_on_sphere, reduce_mod_sphere, Monomial, Poly, RealPoly, NVARS};
use crate::scalar::{QSqrt2, Rational};

fn double_factorial(n: i64) -> BigInt {
    let mut r = BigInt::one();
    let mut k = n;
    while k > 1 {
        r *= k;
        k -= 2;
    }
    r
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Normalized mean of `x^α` over `S³(√2)`.
///
/// For `α = 2β` this is `∏(2βᵢ−1)!! / (|β|+1)!`; any odd exponent gives zero.
pub fn sphere_moment(alpha: [u32; NVARS]) -> Rational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rational::zero();
    }
    let beta: Vec<u32> = alpha.iter().map(|a| a / 2).collect();
    let num = beta.iter().fold(BigInt::one(), |acc, &b| acc * double_factorial(2 * b as i64 - 1));
    Rational::new(num, factorial(beta.iter().sum::<u32>() + 1))
}

/// Normalized `L²(S³(√2))` pairing.
pub fn inner_product(p: &RealPoly, q: &RealPoly) -> QSqrt2 {
    let mut acc = QSqrt2::zero();
    for (m1, c1) in p.terms() {
        for (m2, c2) in q.terms() {
            let mom = sphere_moment(m1.mul(m2).0);
            if !mom.is_zero() {
                acc = &acc + &(c1 * c2).scale(&mom);
            }
        }
    }
    acc
}

/// Mean value of `p` over the sphere.
pub fn sphere_mean(p: &RealPoly) -> QSqrt2 {
    inner_product(p, &Poly::one())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FrameName {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
    Y1,
    Y2,
    Y3,
}

impl fmt::Display for FrameName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A linear vector field. `X₁..X₆` live on `R⁴`; `Y₁..Y₃` live on `R³`
/// and use the first three variables as `y¹, y², y³`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField {
    pub name: FrameName,
    pub coeffs: Vec<RealPoly>,
}

fn lin(terms: &[(i64, usize)], scale: &QSqrt2) -> RealPoly {
    Poly::from_terms(terms.iter().map(|&(s, v)| (Monomial::var(v), &QSqrt2::int(s) * scale)))
}

impl FrameField {
    /// `X_i`, `i ∈ 1..=6`.
    pub fn x(i: usize) -> Self {
        let s = QSqrt2::sqrt2_times(1, 2);
        // (sign, variable) per component
        let table: [[(i64, usize); 4]; 6] = [
            [(-1, 1), (1, 0), (-1, 3), (1, 2)],
            [(-1, 2), (1, 3), (1, 0), (-1, 1)],
            [(-1, 3), (-1, 2), (1, 1), (1, 0)],
            [(-1, 1), (1, 0), (1, 3), (-1, 2)],
            [(-1, 2), (-1, 3), (1, 0), (1, 1)],
            [(-1, 3), (1, 2), (-1, 1), (1, 0)],
        ];
        let names = [FrameName::X1, FrameName::X2, FrameName::X3, FrameName::X4, FrameName::X5, FrameName::X6];
        assert!((1..=6).contains(&i), "frame index out of range");
        FrameField { name: names[i - 1], coeffs: table[i - 1].iter().map(|t| lin(&[*t], &s)).collect() }
    }

    /// `Y_i`, `i ∈ 1..=3`, on `R³`.
    pub fn y(i: usize) -> Self {
        let s = QSqrt2::sqrt2();
        let coeffs = match i {
            1 => vec![lin(&[(-1, 1)], &s), lin(&[(1, 0)], &s), Poly::zero()],
            2 => vec![lin(&[(1, 2)], &s), Poly::zero(), lin(&[(-1, 0)], &s)],
            3 => vec![Poly::zero(), lin(&[(-1, 2)], &s), lin(&[(1, 1)], &s)],
            _ => panic!("frame index out of range"),
        };
        let name = [FrameName::Y1, FrameName::Y2, FrameName::Y3][i - 1];
        FrameField { name, coeffs }
    }

    pub fn all_x() -> Vec<FrameField> {
        (1..=6).map(Self::x).collect()
    }

    /// Ambient coefficients as a fixed-size array (only for `X` fields).
    pub fn ambient(&self) -> [RealPoly; NVARS] {
        assert_eq!(self.coeffs.len(), NVARS, "not a field on R⁴");
        std::array::from_fn(|i| self.coeffs[i].clone())
    }
}

/// Directional derivative `Σᵢ Xⁱ ∂ᵢ p`.
pub fn vf_apply(x: &FrameField, p: &RealPoly) -> RealPoly {
    let mut out = Poly::zero();
    for (i, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&c.mul(&p.partial(i)));
        }
    }
    out
}

/// Applies `X_{i}` for each index in `word`, rightmost first.
pub fn vf_word(word: &[usize], p: &RealPoly) -> RealPoly {
    word.iter().rev().fold(p.clone(), |acc, &i| vf_apply(&FrameField::x(i), &acc))
}

/// `−X₁X₁`
pub fn vertical_laplacian(p: &RealPoly) -> RealPoly {
    vf_word(&[1, 1], p).neg()
}

/// Constant-coefficient combination `Σ cᵢ Xᵢ` of `X₁..X₆`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameCombination {
    pub coeffs: [QSqrt2; 6],
}

impl FrameCombination {
    pub fn zero() -> Self {
        FrameCombination { coeffs: std::array::from_fn(|_| QSqrt2::zero()) }
    }

    pub fn single(i: usize, c: QSqrt2) -> Self {
        let mut out = Self::zero();
        out.coeffs[i - 1] = c;
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        FrameCombination { coeffs: std::array::from_fn(|i| &self.coeffs[i] - &o.coeffs[i]) }
    }

    pub fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl fmt::Display for FrameCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*X{}", c.pretty(), i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Writes an ambient vector field as a constant combination of `X₁..X₆`,
/// comparing canonical remainders modulo the sphere relation.
pub fn express_in_frame(v: &[RealPoly; NVARS]) -> Result<FrameCombination> {
    let frame = FrameField::all_x();
    let reduced_v: Vec<RealPoly> = v.iter().map(reduce_mod_sphere).collect();
    let mut rows: Vec<(usize, Monomial)> = Vec::new();
    for j in 0..NVARS {
        for (m, _) in reduced_v[j].terms() {
            rows.push((j, *m));
        }
        for x in &frame {
            for (m, _) in x.coeffs[j].terms() {
                rows.push((j, *m));
            }
        }
    }
    rows.sort();
    rows.dedup();
    let a = Matrix::from_fn(rows.len(), 6, |r, c| frame[c].coeffs[rows[r].0].coeff(&rows[r].1));
    let b = Matrix::from_fn(rows.len(), 1, |r, _| reduced_v[rows[r].0].coeff(&rows[r].1));
    match a.solve(&b)? {
        Some(x) => Ok(FrameCombination { coeffs: std::array::from_fn(|i| x[(i, 0)].clone()) }),
        None => Err(Error::NotInFrameSpan(
            v.iter().map(|p| p.to_text()).collect::<Vec<_>>().join(", "),
        )),
    }
}

/// `[X, Y]` expressed in the frame.
pub fn vf_bracket(x: &FrameField, y: &FrameField) -> Result<FrameCombination> {
    let v: [RealPoly; NVARS] =
        std::array::from_fn(|j| vf_apply(x, &y.coeffs[j]).sub(&vf_apply(y, &x.coeffs[j])));
    express_in_frame(&v)
}

/// `∇_X Y`: ambient derivative followed by tangential projection
/// `V ↦ V − ⟨V, x⟩x/2`.
pub fn levi_civita(x: &FrameField, y: &FrameField) -> Result<FrameCombination> {
    let d: Vec<RealPoly> = y.coeffs.iter().map(|c| vf_apply(x, c)).collect();
    let radial = (0..NVARS).fold(Poly::zero(), |acc, j| acc.add(&d[j].mul(&Poly::var(j))));
    let half = QSqrt2::frac(1, 2);
    let v: [RealPoly; NVARS] = std::array::from_fn(|j| d[j].sub(&radial.mul(&Poly::var(j)).scale(&half)));
    express_in_frame(&v)
}

/// Euclidean dot product of polynomial vectors.
pub fn dot(a: &[RealPoly], b: &[RealPoly]) -> RealPoly {
    a.iter().zip(b).fold(Poly::zero(), |acc, (p, q)| acc.add(&p.mul(q)))
}

/// Components `ψ¹, ψ², ψ³` of the Hopf map.
pub fn hopf_map() -> [RealPoly; 3] {
    let s = QSqrt2::sqrt2_times(1, 4); // 1/(2√2)
    let p = |t: &str| RealPoly::parse(t).expect("valid literal").scale(&s);
    [
        p("2*x1*x3 + 2*x2*x4"),
        p("2*x2*x3 - 2*x1*x4"),
        p("x1^2 + x2^2 - x3^2 - x4^2"),
    ]
}

/// The unit normal `η` of `S²(1/√2)` in `S³`, pulled back through `ψ`:
/// `(ψ¹, ψ², ψ³, −1/√2)`.
pub fn normal_section() -> [RealPoly; 4] {
    let [a, b, c] = hopf_map();
    [a, b, c, Poly::constant(QSqrt2::sqrt2_times(-1, 2))]
}

/// `dψ(X) = (Xψ¹, Xψ², Xψ³)`
pub fn dpsi(x: &FrameField) -> [RealPoly; 3] {
    let psi = hopf_map();
    std::array::from_fn(|a| vf_apply(x, &psi[a]))
}

/// `dφ(X)` for `φ = i∘ψ`, `i(y) = (y, 1/√2)`.
pub fn dphi(x: &FrameField) -> [RealPoly; 4] {
    let [a, b, c] = dpsi(x);
    [a, b, c, Poly::zero()]
}

/// Whether `f₂X₂ + f₃X₃` is basic: `Δ^V f₂ = 2f₂` and `f₃ = −(1/√2)X₁f₂`.
pub fn is_basic(f2: &RealPoly, f3: &RealPoly) -> bool {
    let two = QSqrt2::int(2);
    let cond1 = equal_on_sphere(&vertical_laplacian(f2), &f2.scale(&two));
    let x1f2 = vf_apply(&FrameField::x(1), f2);
    let cond2 = equal_on_sphere(f3, &x1f2.scale(&QSqrt2::sqrt2_times(-1, 2)));
    cond1 && cond2
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Canonical remainder of `lhs − rhs`, or the mismatching values.
    pub residual: String,
}

impl IdentityCheck {
    /// Checks `lhs ≡ rhs` modulo the sphere relation.
    pub fn on_sphere(name: impl Into<String>, lhs: &RealPoly, rhs: &RealPoly) -> Self {
        let r = reduce_mod_sphere(&lhs.sub(rhs));
        IdentityCheck { name: name.into(), passed: r.is_zero(), residual: r.to_text() }
    }

    pub fn values<T: PartialEq + fmt::Display>(name: impl Into<String>, got: &T, expected: &T) -> Self {
        let passed = got == expected;
        IdentityCheck {
            name: name.into(),
            passed,
            residual: if passed { "0".into() } else { format!("got {got}, expected {expected}") },
        }
    }
}

/// Submersion identities for `ψ`, all modulo the sphere relation.
pub fn submersion_checks() -> Vec<IdentityCheck> {
    let x = FrameField::x;
    let one = RealPoly::one();
    let d2 = dpsi(&x(2));
    let d3 = dpsi(&x(3));
    let psi = hopf_map();
    let mut out = vec![
        IdentityCheck::on_sphere("|dpsi(X2)|^2 = 1", &dot(&d2, &d2), &one),
        IdentityCheck::on_sphere("|dpsi(X3)|^2 = 1", &dot(&d3, &d3), &one),
        IdentityCheck::on_sphere("<dpsi(X2), dpsi(X3)> = 0", &dot(&d2, &d3), &Poly::zero()),
    ];
    for (a, p) in psi.iter().enumerate() {
        out.push(IdentityCheck::on_sphere(format!("X1 psi^{} = 0", a + 1), &vf_apply(&x(1), p), &Poly::zero()));
    }
    let psi_sub: [RealPoly; NVARS] = [psi[0].clone(), psi[1].clone(), psi[2].clone(), Poly::zero()];
    for (xi, yi) in [(4, 1), (5, 2), (6, 3)] {
        let y = FrameField::y(yi);
        let dx = dpsi(&x(xi));
        for a in 0..3 {
            let rhs = y.coeffs[a].substitute(&psi_sub, |c| c.clone());
            out.push(IdentityCheck::on_sphere(format!("X{xi} psi^{} = Y{yi}^{} o psi", a + 1, a + 1), &dx[a], &rhs));
        }
    }
    let energy = dot(&d2, &d2).add(&dot(&d3, &d3)).scale(&QSqrt2::frac(1, 2));
    out.push(IdentityCheck::on_sphere("e(psi) = 1", &energy, &one));
    out.push(IdentityCheck::on_sphere("|psi|^2 = 1/2", &dot(&psi, &psi), &Poly::constant(QSqrt2::frac(1, 2))));
    for (a, p) in psi.iter().enumerate() {
        let lap = crate::poly::euclidean_laplacian().apply(p);
        out.push(IdentityCheck::on_sphere(format!("psi^{} harmonic", a + 1), &lap, &Poly::zero()));
    }
    let eta = normal_section();
    out.push(IdentityCheck::on_sphere("|eta|^2 = 1", &dot(&eta, &eta), &one));
    out.push(IdentityCheck::on_sphere("<eta, dphi(X2)> = 0", &dot(&eta, &dphi(&x(2))), &Poly::zero()));
    out.push(IdentityCheck::on_sphere("<eta, dphi(X3)> = 0", &dot(&eta, &dphi(&x(3))), &Poly::zero()));
    // Volumes in units of π²: vol S³(√2) = 2π²(√2)³, vol S²(1/√2) = 4π·(1/2),
    // and the fibre length factor is 2√2π.
    let vol_s3 = QSqrt2::sqrt2_times(4, 1);
    let vol_s2_times_fibre = &QSqrt2::sqrt2_times(2, 1) * &QSqrt2::int(2);
    out.push(IdentityCheck::values("coarea: vol S3(sqrt2) = 2*sqrt2*pi * vol S2(1/sqrt2)", &vol_s3, &vol_s2_times_fibre));
    out
}

/// Expected entries of the connection and bracket tables on `X₁, X₂, X₃`.
fn expected_connection(i: usize, j: usize) -> FrameCombination {
    let s = |n| QSqrt2::sqrt2_times(n, 2);
    match (i, j) {
        (1, 2) => FrameCombination::single(3, s(-1)),
        (1, 3) => FrameCombination::single(2, s(1)),
        (2, 1) => FrameCombination::single(3, s(1)),
        (2, 3) => FrameCombination::single(1, s(-1)),
        (3, 1) => FrameCombination::single(2, s(-1)),
        (3, 2) => FrameCombination::single(1, s(1)),
        _ => FrameCombination::zero(),
    }
}

fn expected_bracket(i: usize, j: usize) -> FrameCombination {
    let m = QSqrt2::sqrt2_times(-1, 1);
    let base = |a, b, k| ((i, j) == (a, b)).then(|| FrameCombination::single(k, m.clone()));
    base(1, 2, 3)
        .or_else(|| base(2, 3, 1))
        .or_else(|| base(3, 1, 2))
        .or_else(|| {
            let (a, b) = (j, i);
            [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
                .iter()
                .find(|t| (t.0, t.1) == (a, b))
                .map(|t| FrameCombination::single(t.2, m.clone()).neg())
        })
        .unwrap_or_else(FrameCombination::zero)
}

/// Connection and bracket tables for `X₁, X₂, X₃` against their closed forms,
/// plus torsion-freeness.
pub fn connection_checks() -> Vec<IdentityCheck> {
    let x = FrameField::x;
    let mut out = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            let name = format!("nabla_X{i} X{j}");
            out.push(match levi_civita(&x(i), &x(j)) {
                Ok(c) => IdentityCheck::values(name, &c, &expected_connection(i, j)),
                Err(e) => IdentityCheck { name, passed: false, residual: e.to_string() },
            });
            let name = format!("[X{i},X{j}]");
            let bracket = vf_bracket(&x(i), &x(j));
            out.push(match &bracket {
                Ok(c) => IdentityCheck::values(name, c, &expected_bracket(i, j)),
                Err(e) => IdentityCheck { name, passed: false, residual: e.to_string() },
            });
            if let (Ok(b), Ok(a1), Ok(a2)) = (bracket, levi_civita(&x(i), &x(j)), levi_civita(&x(j), &x(i))) {
                out.push(IdentityCheck::values(format!("torsion-free X{i},X{j}"), &a1.sub(&a2), &b));
            }
        }
    }
    for i in 1..=3 {
        for j in 1..=3 {
            let g = dot(&FrameField::x(i).coeffs, &FrameField::x(j).coeffs);
            let expected = if i == j { RealPoly::one() } else { Poly::zero() };
            out.push(IdentityCheck::on_sphere(format!("<X{i},X{j}> orthonormal"), &g, &expected));
        }
    }
    out
}
