use hopf_spectra::harmonic::{lambda, vertical_spectrum_bruteforce, HarmonicSpace};
use hopf_spectra::scalar::{rational_to_f64, QSqrt2};
use hopf_spectra::stability::{
    assemble_i_phi, assemble_i_psi, assemble_j_psi, exact_nullity, float_eigenvalues, float_spectrum,
    positivity_certificate, OperatorTag,
};

#[test]
fn self_adjoint_through_degree_eleven() {
    let ok: Vec<bool> = (0..=11u32)
        .map(|k| {
            let s = HarmonicSpace::new(k).unwrap();
            assemble_j_psi(&s).is_self_adjoint() && assemble_i_psi(&s).is_ok() && assemble_i_phi(&s).is_self_adjoint()
        })
        .collect();
    assert!(ok.iter().all(|x| *x), "{ok:?}");
}

#[test]
fn jacobi_spectrum_from_vertical_spectrum() {
    for k in 0..=6u32 {
        let s = HarmonicSpace::new(k).unwrap();
        let j = assemble_j_psi(&s);
        let got = float_eigenvalues(&j.matrix, &j.gram).unwrap();
        let lam = rational_to_f64(&lambda(k));
        let mut expected = Vec::new();
        for (c, m) in vertical_spectrum_bruteforce(k).unwrap().0 {
            let r = 2.0 * (2.0 * rational_to_f64(&c)).sqrt();
            for _ in 0..m {
                expected.push(lam - r);
                expected.push(lam + r);
            }
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got.len(), 2 * (k as usize + 1).pow(2));
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn bienergy_of_psi_shares_kernel_with_jacobi() {
    for k in 0..=2u32 {
        let s = HarmonicSpace::new(k).unwrap();
        let j = assemble_j_psi(&s);
        let i = assemble_i_psi(&s).unwrap();
        assert_eq!(i.matrix, j.matrix.mul(&j.matrix));
        let zero = QSqrt2::default();
        assert_eq!(exact_nullity(&i.matrix, &i.gram, &zero), exact_nullity(&j.matrix, &j.gram, &zero));
    }
}

#[test]
fn multiplicities_sum_to_section_dimension() {
    for k in 0..=5u32 {
        let s = HarmonicSpace::new(k).unwrap();
        let n = (k as usize + 1).pow(2);
        let j = assemble_j_psi(&s);
        assert_eq!(float_spectrum(&j.matrix, &j.gram).unwrap().dim(), 2 * n);
        let p = assemble_i_phi(&s);
        assert_eq!(float_spectrum(&p.matrix, &p.gram).unwrap().dim(), 3 * n);
    }
}

#[test]
fn certificates_agree_with_float_solves() {
    for k in 3..=6u32 {
        assert!(positivity_certificate(OperatorTag::Jpsi, k).unwrap().holds);
        let j = assemble_j_psi(&HarmonicSpace::new(k).unwrap());
        assert!(float_eigenvalues(&j.matrix, &j.gram).unwrap()[0] > 0.0, "k={k}");
    }
    for k in [12u32, 13] {
        assert!(positivity_certificate(OperatorTag::Iphi, k).unwrap().holds);
        let p = assemble_i_phi(&HarmonicSpace::new(k).unwrap());
        let min = float_eigenvalues(&p.matrix, &p.gram).unwrap()[0];
        assert!(min > 0.0, "k={k}: {min}");
    }
}
