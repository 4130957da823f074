use hopf_spectra::harmonic::{dimension, frame_matrix, vertical_spectrum_bruteforce, HarmonicBasis, HarmonicSpace};
use hopf_spectra::scalar::{rat, QSqrt2};
use hopf_spectra::sl2::{decompose, h_matrix_weights, vertical_spectrum_via_sl2, Sl2Ops};

#[test]
fn dimensions() {
    for k in 0..=12 {
        let b = HarmonicBasis::new(k).unwrap();
        assert_eq!(b.dim(), ((k + 1) * (k + 1)) as usize);
        assert_eq!(b.dim(), dimension(k));
    }
}

#[test]
fn vertical_multiplicities() {
    for k in 0..=8u32 {
        let s = vertical_spectrum_bruteforce(k).unwrap();
        for l in 0..=k {
            let w = k as i64 - 2 * l as i64;
            let m = s.multiplicity(&rat(w * w, 2));
            let expected = if w == 0 { k as usize + 1 } else { 2 * (k as usize + 1) };
            assert_eq!(m, expected, "k={k}, l={l}");
        }
        assert_eq!(s.total(), dimension(k));
    }
}

#[test]
fn vertical_kernel_matches_base_eigenspaces() {
    for j in 1..=3u32 {
        let space = HarmonicSpace::new(2 * j).unwrap();
        assert_eq!(space.vertical_laplacian().nullity(), (2 * j + 1) as usize);
    }
}

#[test]
fn frame_matrices_skew_and_vertical_laplacian_positive() {
    for k in 0..=5 {
        let space = HarmonicSpace::new(k).unwrap();
        let g = &space.basis.gram;
        for i in 1..=6 {
            assert!(frame_matrix(i, &space.basis).unwrap().matrix.is_gram_skew(g), "X{i} on H^{k}");
        }
        let dv = space.vertical_laplacian();
        assert!(dv.is_gram_symmetric(g));
        assert_eq!(g.mul(&dv).inertia().unwrap().negative, 0);
        assert_eq!(space.x(1).mul(&dv), dv.mul(space.x(1)));
    }
}

#[test]
fn gram_is_positive_definite() {
    for k in 0..=6 {
        let b = HarmonicBasis::new(k).unwrap();
        let i = b.gram.inertia().unwrap();
        assert_eq!((i.negative, i.zero), (0, 0), "k={k}");
    }
    let g2 = HarmonicBasis::new(2).unwrap().gram;
    assert!(g2.sub(&hopf_spectra::linalg::Matrix::identity(9).scale(&QSqrt2::frac(1, 3))).is_zero());
}

#[test]
fn sl2_and_bruteforce_agree() {
    let ops = Sl2Ops::new().unwrap();
    for k in 0..=8 {
        vertical_spectrum_via_sl2(&ops, k).unwrap();
    }
}

#[test]
fn weights_are_symmetric_and_shift_by_two() {
    let ops = Sl2Ops::new().unwrap();
    for k in 0..=6u32 {
        let dec = decompose(&ops, k).unwrap();
        let mult = dec.weight_multiplicities();
        for (w, m) in &mult {
            assert_eq!(mult.get(&-w), Some(m));
        }
        for (_, chain) in &dec.chains {
            for (l, v) in chain.iter().enumerate() {
                let w = k as i64 - 2 * l as i64;
                let up = ops.e.apply(v);
                if l > 0 {
                    assert!(!up.is_zero());
                    assert_eq!(ops.h.apply(&up), up.scale(&hopf_spectra::scalar::GaussQSqrt2::int(w + 2)));
                } else {
                    assert!(up.is_zero());
                }
                let down = ops.f.apply(v);
                assert_eq!(ops.h.apply(&down), down.scale(&hopf_spectra::scalar::GaussQSqrt2::int(w - 2)));
            }
        }
    }
}

#[test]
fn h_matrix_weights_on_real_basis() {
    for k in 0..=5u32 {
        let space = HarmonicSpace::new(k).unwrap();
        let (w, squares) = h_matrix_weights(&space);
        assert!(squares);
        for l in 0..=k {
            assert_eq!(w.get(&(k as i64 - 2 * l as i64)), Some(&(k as usize + 1)));
        }
    }
}
