//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hopf_spectra::geometry::{connection_checks, submersion_checks};
use hopf_spectra::harmonic::{dimension, vertical_spectrum_bruteforce, HarmonicSpace, RationalSpectrum};
use hopf_spectra::oracle::{moment_consistency_checks, oracle_check};
use hopf_spectra::reproduction::{
    operator_identity_checks, reference_i_phi_0, reference_i_phi_1, reference_i_phi_2, reference_j_psi_1,
    reference_j_psi_2, restrict, verify_paper, SUB_BASES_2,
};
use hopf_spectra::scalar::{rat, QSqrt2, Rational};
use hopf_spectra::sl2::{vertical_spectrum_via_sl2, Sl2Ops};
use hopf_spectra::stability::{
    assemble_i_phi, assemble_i_psi, assemble_j_psi, basic_subspace_spectrum, degree_summary, exact_spectrum,
    first_certified_degree, float_eigenvalues, index_nullity_report, instability_witness, iphi_bound_a,
    iphi_bound_b, kernel_characterization, negative_space_characterization, positivity_certificate,
    uniform_certificate, EigenEntry, EigenValue, OperatorTag, Spectrum, SpectrumMethod,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn q(s: &str) -> QSqrt2 {
    QSqrt2::parse(s).unwrap()
}

fn exact(v: &str, m: usize) -> EigenEntry {
    EigenEntry { value: EigenValue::Exact(q(v)), multiplicity: m }
}

fn quadratic(trace: Rational, det: Rational, m: usize) -> EigenEntry {
    EigenEntry { value: EigenValue::Quadratic { trace, det }, multiplicity: m }
}

/// Exact multiset equality plus a float cross-check of every root.
fn spectrum_is(s: &Spectrum, expected: &[EigenEntry], floats: &[f64]) -> Result<(), String> {
    let mut got = s.entries.clone();
    let mut want = expected.to_vec();
    let key = |e: &EigenEntry| format!("{:?}", e);
    got.sort_by_key(key);
    want.sort_by_key(key);
    ensure(got == want, format!("got {got:?}"))?;
    let mut roots: Vec<f64> = Vec::new();
    for e in expected {
        let r = e.value.roots_f64();
        let per = e.multiplicity / r.len();
        for x in r {
            roots.extend(std::iter::repeat(x).take(per));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ensure(roots.len() == floats.len(), "float count")?;
    for (a, b) in roots.iter().zip(floats) {
        ensure((a - b).abs() <= 1e-9 * a.abs().max(1.0), format!("float {b} vs {a}"))?;
    }
    Ok(())
}

fn expected_vertical(k: u32) -> RationalSpectrum {
    let mut v: Vec<(Rational, usize)> = (0..=k / 2)
        .map(|l| {
            let w = k as i64 - 2 * l as i64;
            (rat(w * w, 2), if w == 0 { k as usize + 1 } else { 2 * (k as usize + 1) })
        })
        .collect();
    v.sort();
    RationalSpectrum(v)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let ops = Sl2Ops::new().map_err(|e| e.to_string())?;
    for k in 0..=8 {
        let want = expected_vertical(k);
        let mut a = vertical_spectrum_via_sl2(&ops, k).map_err(|e| e.to_string())?;
        let mut b = vertical_spectrum_bruteforce(k).map_err(|e| e.to_string())?;
        a.0.sort();
        b.0.sort();
        ensure(a == want && b == want, format!("k={k}: sl2 {a:?}, brute force {b:?}"))?;
        ensure(want.total() == dimension(k), format!("k={k}: total"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("k=0..=8 exact, {:.2?}", start.elapsed()))
}

fn ac2() -> Outcome {
    let s: Vec<HarmonicSpace> = (0..=2).map(|k| HarmonicSpace::new(k).unwrap()).collect();
    ensure(assemble_j_psi(&s[1]).matrix == reference_j_psi_1(), "J k=1")?;
    let j2 = assemble_j_psi(&s[2]);
    for (b, picks) in SUB_BASES_2.iter().enumerate() {
        let (m, _) = restrict(&j2, picks).map_err(|e| e.to_string())?;
        ensure(m == reference_j_psi_2(), format!("J k=2 sub-basis {}", b + 1))?;
    }
    ensure(assemble_i_phi(&s[0]).matrix == reference_i_phi_0(), "I^phi k=0")?;
    ensure(assemble_i_phi(&s[1]).matrix == reference_i_phi_1(), "I^phi k=1")?;
    let (m, _) = restrict(&assemble_i_phi(&s[2]), &SUB_BASES_2[0]).map_err(|e| e.to_string())?;
    ensure(m == reference_i_phi_2(), "I^phi k=2 block")?;
    Ok("J k=1, J k=2 sub-bases, I^phi k=0,1 and the degree-2 block".into())
}

fn ac3() -> Outcome {
    let s1 = HarmonicSpace::new(1).unwrap();
    let s2 = HarmonicSpace::new(2).unwrap();
    let check = |m: &hopf_spectra::linalg::Matrix<QSqrt2>,
                 g: &hopf_spectra::linalg::Matrix<QSqrt2>,
                 want: &[EigenEntry],
                 name: &str|
     -> Result<(), String> {
        let s = exact_spectrum(m, g).map_err(|e| e.to_string())?;
        let f = float_eigenvalues(m, g).map_err(|e| e.to_string())?;
        spectrum_is(&s, want, &f).map_err(|e| format!("{name}: {e}"))
    };
    let j1 = assemble_j_psi(&s1);
    check(&j1.matrix, &j1.gram, &[exact("-1/2", 4), exact("7/2", 4)], "J k=1")?;
    let j2 = assemble_j_psi(&s2);
    check(&j2.matrix, &j2.gram, &[exact("0", 6), exact("4", 6), exact("8", 6)], "J k=2")?;
    let p1 = assemble_i_phi(&s1);
    check(&p1.matrix, &p1.gram, &[quadratic(rat(-15, 2), rat(-415, 16), 8), exact("105/4", 4)], "I^phi k=1")?;
    let p2 = assemble_i_phi(&s2);
    let (m, g) = restrict(&p2, &SUB_BASES_2[0]).map_err(|e| e.to_string())?;
    check(
        &m,
        &g,
        &[exact("0", 2), exact("96", 2), quadratic(rat(48, 1), rat(-192, 1), 4), exact("32", 1)],
        "I^phi k=2 block",
    )?;
    Ok("J k=1,2; I^phi k=1 and degree-2 block, exact and float".into())
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (tag, kmax, index, nullity) in
        [(OperatorTag::Jpsi, 2, 4, 8), (OperatorTag::Ipsi, 2, 0, 8), (OperatorTag::Iphi, 2, 11, 8)]
    {
        let r = index_nullity_report(tag, kmax, false).map_err(|e| e.to_string())?;
        ensure(r.index == index && r.nullity == nullity, format!("{tag}: ({}, {})", r.index, r.nullity))?;
        parts.push(format!("{tag} ({}, {})", r.index, r.nullity));
    }
    for tag in [OperatorTag::Jpsi, OperatorTag::Ipsi] {
        let c = uniform_certificate(tag);
        ensure(c.holds && c.from_k == 3, format!("{tag} certificate from {}", c.from_k))?;
        ensure(index_nullity_report(tag, 2, true).map(|r| r.complete).unwrap_or(false), format!("{tag} complete"))?;
    }
    for k in 3..=40 {
        ensure(positivity_certificate(OperatorTag::Jpsi, k).map(|c| c.holds).unwrap_or(false), format!("J k={k}"))?;
    }
    ensure(first_certified_degree(&iphi_bound_a(), 100) == Some(12), "A threshold")?;
    ensure(first_certified_degree(&iphi_bound_b(), 100) == Some(10), "B threshold")?;
    for k in 1..=40u32 {
        let c = positivity_certificate(OperatorTag::Iphi, k).map_err(|e| e.to_string())?;
        ensure(c.holds == (k >= 12), format!("I^phi certificate at k={k}: {}", c.holds))?;
    }
    let c = uniform_certificate(OperatorTag::Iphi);
    ensure(c.holds && c.from_k == 12, "I^phi uniform certificate")?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{}; A from 12, B from 10; {:.2?}", parts.join(", "), start.elapsed()))
}

fn ac5() -> Outcome {
    let r = kernel_characterization().map_err(|e| e.to_string())?;
    ensure(r.degree0 == 2 && r.killing_rank == 3 && r.gradient_rank == 3 && r.degree2 == 6 && r.total == 8, format!("{r:?}"))?;
    for c in &r.checks {
        ensure(c.passed, format!("{}: {}", c.name, c.residual))?;
    }
    Ok(format!("2 + 3 + 3 = {}, {} checks", r.total, r.checks.len()))
}

fn ac6() -> Outcome {
    let w = instability_witness().map_err(|e| e.to_string())?;
    ensure(w.value == QSqrt2::int(-16) && w.matrix_entry == w.value && w.unstable, format!("{w:?}"))?;
    ensure(w.energy_density == QSqrt2::int(1), "energy density")?;
    let ns = negative_space_characterization().map_err(|e| e.to_string())?;
    ensure(ns.dim == 4, "negative space")?;
    Ok("(I^phi eta, eta) = -16".into())
}

fn ac7() -> Outcome {
    let r = basic_subspace_spectrum(4).map_err(|e| e.to_string())?;
    ensure(r.index == 1 && r.nullity == 6, format!("({}, {})", r.index, r.nullity))?;
    for c in &r.checks {
        ensure(c.passed, format!("{}: {}", c.name, c.residual))?;
    }
    ensure(r.degrees.iter().filter(|d| d.k > 0).all(|d| d.index == 0), "negative direction outside degree 0")?;
    Ok(format!("index {}, nullity {} through k=4", r.index, r.nullity))
}

fn scan() -> Result<Vec<(u32, usize, usize, String)>, String> {
    (3..=11u32)
        .map(|k| {
            let d = degree_summary(OperatorTag::Iphi, k, SpectrumMethod::Float).map_err(|e| e.to_string())?;
            let total: usize = d.spectrum.iter().map(|e| e.multiplicity).sum();
            if total != 3 * (k as usize + 1).pow(2) || total != d.dim {
                return Err(format!("k={k}: multiplicities sum to {total}"));
            }
            if !(d.exact_inertia || d.min_eigenvalue > 1e-6) {
                return Err(format!("k={k}: unresolved cluster near zero"));
            }
            Ok((k, d.index, d.nullity, serde_json::to_string(&d).map_err(|e| e.to_string())?))
        })
        .collect()
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let a = scan()?;
    let b = scan()?;
    ensure(a == b, "runs differ")?;
    let (index, nullity) = a.iter().fold((0, 0), |(i, n), d| (i + d.1, n + d.2));
    ensure(index == 0 && nullity == 0, format!("k=3..=11 contribute ({index}, {nullity})"))?;
    let full = index_nullity_report(OperatorTag::Iphi, 11, true).map_err(|e| e.to_string())?;
    ensure(full.index == 11 && full.nullity == 8 && full.complete, format!("({}, {})", full.index, full.nullity))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("k=3..=11 reproducible, total (11, 8) complete; {:.2?}", start.elapsed()))
}

fn ac9() -> Outcome {
    let checks = operator_identity_checks(6).map_err(|e| e.to_string())?;
    for c in &checks {
        ensure(c.passed, format!("{}: {}", c.name, c.residual))?;
    }
    for k in 0..=6 {
        let s = HarmonicSpace::new(k).unwrap();
        let j = assemble_j_psi(&s);
        let i = assemble_i_psi(&s).map_err(|e| e.to_string())?;
        ensure(i.matrix == j.matrix.mul(&j.matrix), format!("I^psi = J^2 at k={k}"))?;
        ensure(assemble_i_phi(&s).is_self_adjoint(), format!("I^phi self-adjoint at k={k}"))?;
    }
    Ok(format!("{} identities, k <= 6", checks.len()))
}

fn ac10() -> Outcome {
    let mut checks = submersion_checks();
    checks.extend(connection_checks());
    checks.extend(moment_consistency_checks(6));
    for c in &checks {
        ensure(c.passed, format!("{}: {}", c.name, c.residual))?;
    }
    let r = oracle_check(10_000_000, 2024, 3.0);
    ensure(r.pass, format!("{:?}", r.moments.iter().map(|m| m.z).collect::<Vec<_>>()))?;
    let zmax = r.moments.iter().map(|m| m.z).fold(0.0, f64::max);
    let suite = verify_paper().map_err(|e| e.to_string())?;
    ensure(suite.pass, "reproduction suite")?;
    Ok(format!("{} identities; oracle 1e7 samples, max z {zmax:.2}", checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("AC1", "vertical Laplacian spectrum", ac1),
        ("AC2", "reference matrices", ac2),
        ("AC3", "reference spectra", ac3),
        ("AC4", "index and nullity tallies", ac4),
        ("AC5", "kernel of J^psi", ac5),
        ("AC6", "instability witness", ac6),
        ("AC7", "basic-subspace spectrum", ac7),
        ("AC8", "extended I^phi scan", ac8),
        ("AC9", "operator identities", ac9),
        ("AC10", "geometry and moment oracle", ac10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, what, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| id.eq_ignore_ascii_case(p)) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("{id:<5} PASS  {what}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id:<5} FAIL  {what}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
