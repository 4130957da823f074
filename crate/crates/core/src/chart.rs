//! Translation between the real chart `(x¹, x², x³, x⁴)` and the complex
//! chart `(z, z̄, w, w̄)` with `z = x¹ + i·x²`, `w = x³ + i·x⁴`.

use num_traits::{One, Zero};

use crate::poly::{ComplexPoly, DiffOp, Poly, RealPoly, NVARS};
use crate::scalar::{GaussQSqrt2, QSqrt2};

pub const Z: usize = 0;
pub const ZB: usize = 1;
pub const W: usize = 2;
pub const WB: usize = 3;

fn half() -> GaussQSqrt2 {
    GaussQSqrt2::real(QSqrt2::frac(1, 2))
}

fn minus_half_i() -> GaussQSqrt2 {
    GaussQSqrt2::new(QSqrt2::zero(), QSqrt2::frac(-1, 2))
}

/// Real coordinates in terms of the complex ones:
/// `x¹ = (z+z̄)/2`, `x² = −i(z−z̄)/2`, and likewise for `w`.
fn real_vars_in_complex() -> [ComplexPoly; NVARS] {
    let v = |i| ComplexPoly::var(i);
    [
        v(Z).add(&v(ZB)).scale(&half()),
        v(Z).sub(&v(ZB)).scale(&minus_half_i()),
        v(W).add(&v(WB)).scale(&half()),
        v(W).sub(&v(WB)).scale(&minus_half_i()),
    ]
}

pub fn to_complex(p: &RealPoly) -> ComplexPoly {
    p.substitute(&real_vars_in_complex(), |c| GaussQSqrt2::real(c.clone()))
}

/// Inverse translation. Fails when the result has non-real coefficients.
pub fn to_real(p: &ComplexPoly) -> Option<RealPoly> {
    let i = GaussQSqrt2::i();
    let x = |k| Poly::<GaussQSqrt2>::var(k);
    let images = [
        x(0).add(&x(1).scale(&i)),
        x(0).sub(&x(1).scale(&i)),
        x(2).add(&x(3).scale(&i)),
        x(2).sub(&x(3).scale(&i)),
    ];
    let q = p.substitute(&images, |c| c.clone());
    if q.terms().all(|(_, c)| c.is_real()) {
        Some(q.map_coeffs(|c| c.re.clone()))
    } else {
        None
    }
}

/// Complex-chart form of a real first-order operator `Σ vⁱ ∂ᵢ`, using
/// `∂₁ = ∂_z + ∂_z̄`, `∂₂ = i(∂_z − ∂_z̄)` and likewise for `w`.
pub fn vector_field_to_complex(coeffs: &[RealPoly; NVARS]) -> DiffOp<GaussQSqrt2> {
    let i = GaussQSqrt2::i();
    let one = GaussQSqrt2::one();
    let partials: [[(usize, GaussQSqrt2); 2]; NVARS] = [
        [(Z, one.clone()), (ZB, one.clone())],
        [(Z, i.clone()), (ZB, -i.clone())],
        [(W, one.clone()), (WB, one.clone())],
        [(W, i.clone()), (WB, -i)],
    ];
    let mut d = DiffOp::zero();
    for (v, parts) in coeffs.iter().zip(partials.iter()) {
        let c = to_complex(v);
        for (var, s) in parts {
            d = d.add(&DiffOp::multiply_by(c.scale(s)).compose(&DiffOp::partial(*var)));
        }
    }
    d
}

/// `−4(∂_z∂_z̄ + ∂_w∂_w̄)`
pub fn complex_laplacian() -> DiffOp<GaussQSqrt2> {
    let m4 = GaussQSqrt2::int(-4);
    let mut a = [0; NVARS];
    a[Z] = 1;
    a[ZB] = 1;
    let mut b = [0; NVARS];
    b[W] = 1;
    b[WB] = 1;
    DiffOp::term(Poly::constant(m4.clone()), a).add(&DiffOp::term(Poly::constant(m4), b))
}
