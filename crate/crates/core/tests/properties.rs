mod common;

use common::{poly, qsqrt2};
use hopf_spectra::chart::{complex_laplacian, to_complex};
use hopf_spectra::geometry::{inner_product, sphere_moment, vf_apply, FrameField};
use hopf_spectra::poly::{euclidean_laplacian, reduce_mod_sphere, DiffOp, RealPoly};
use hopf_spectra::scalar::{rat, Field, QSqrt2};
use hopf_spectra::sl2::Sl2Ops;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn x_op(i: usize) -> DiffOp<QSqrt2> {
    DiffOp::vector_field(&FrameField::x(i).ambient())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in qsqrt2(), y in qsqrt2(), z in qsqrt2()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QSqrt2::one());
        }
    }

    #[test]
    fn canonical_form(x in qsqrt2(), y in qsqrt2(), z in qsqrt2()) {
        let a = &x * &(&y + &z);
        let b = &(&x * &y) + &(&x * &z);
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn float_conversion_is_multiplicative(x in qsqrt2(), y in qsqrt2()) {
        let p = (&x * &y).to_f64();
        let q = x.to_f64() * y.to_f64();
        prop_assert!((p - q).abs() <= 1e-12 * p.abs().max(1e-300) || (p - q).abs() < 1e-13);
    }

    #[test]
    fn ordering_matches_floats(x in qsqrt2(), y in qsqrt2()) {
        if (x.to_f64() - y.to_f64()).abs() > 1e-9 {
            prop_assert_eq!(x < y, x.to_f64() < y.to_f64());
        }
    }

    #[test]
    fn diffop_composition(p in poly(6, 8), i in 1usize..=6, j in 1usize..=6) {
        let d1 = x_op(i);
        let d2 = x_op(j).compose(&euclidean_laplacian());
        prop_assert_eq!(d1.compose(&d2).apply(&p), d1.apply(&d2.apply(&p)));
    }

    #[test]
    fn sphere_reduction_is_multiplicative(p in poly(4, 6), q in poly(4, 6)) {
        let lhs = reduce_mod_sphere(&p.mul(&q));
        let rhs = reduce_mod_sphere(&reduce_mod_sphere(&p).mul(&reduce_mod_sphere(&q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chart_translation_commutes_with_laplacian(p in poly(6, 8)) {
        prop_assert_eq!(complex_laplacian().apply(&to_complex(&p)), to_complex(&euclidean_laplacian().apply(&p)));
    }

    #[test]
    fn killing_fields_are_skew(f in poly(4, 5), g in poly(4, 5), i in 1usize..=6) {
        let x = FrameField::x(i);
        let s = &inner_product(&vf_apply(&x, &f), &g) + &inner_product(&f, &vf_apply(&x, &g));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn frame_commutes_with_laplacian(p in poly(6, 8), i in 1usize..=6) {
        let lap = euclidean_laplacian();
        let x = FrameField::x(i);
        prop_assert_eq!(lap.apply(&vf_apply(&x, &p)), vf_apply(&x, &lap.apply(&p)));
    }
}

fn jac<C: hopf_spectra::poly::Chart>(a: &DiffOp<C>, b: &DiffOp<C>, c: &DiffOp<C>) -> DiffOp<C> {
    a.commutator(&b.commutator(c)).add(&b.commutator(&c.commutator(a))).add(&c.commutator(&a.commutator(b)))
}

#[test]
fn jacobi_identity_for_commutators() {
    let ops = Sl2Ops::new().unwrap();
    assert!(jac(&ops.e, &ops.f, &ops.h).is_zero());
    assert!(jac(&x_op(1), &x_op(2), &x_op(3)).is_zero());
}

#[test]
fn moment_identities() {
    let total = (0..4).fold(rat(0, 1), |acc, i| {
        let mut e = [0; 4];
        e[i] = 2;
        acc + sphere_moment(e)
    });
    assert_eq!(total, rat(2, 1));
    assert_eq!(rat(4, 1) * sphere_moment([4, 0, 0, 0]) + rat(12, 1) * sphere_moment([2, 2, 0, 0]), rat(4, 1));
}

#[test]
fn frame_is_orthonormal_on_sphere() {
    for i in 1..=3 {
        for j in 1..=3 {
            let a = FrameField::x(i).ambient();
            let b = FrameField::x(j).ambient();
            let d = hopf_spectra::geometry::dot(&a, &b);
            let expected = if i == j { RealPoly::one() } else { RealPoly::zero() };
            assert!(hopf_spectra::poly::equal_on_sphere(&d, &expected), "X{i}, X{j}");
        }
    }
}

#[test]
fn field_trait_helpers() {
    let x = QSqrt2::sqrt2();
    assert_eq!(x.mul_ref(&x), QSqrt2::int(2));
    assert!(QSqrt2::zero().inv().is_none());
}
