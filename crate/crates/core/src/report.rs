//! Report types and their JSON, CSV and plain-text renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::IdentityCheck;
use crate::harmonic::{HarmonicSpace, RationalSpectrum};
use crate::oracle::OracleReport;
use crate::reproduction::ReproductionSuiteResult;
use crate::scalar::QSqrt2;
use crate::sl2::WeightDecomposition;
use crate::stability::{
    assemble, spectrum, BasicReport, EigenEntry, EigenValue, IndexReport, InstabilityWitness, KernelReport,
    NegativeSpaceReport, OperatorTag, SpectrumMethod,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

/// A report renderable in every output format.
pub trait Report: Serialize {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
    fn pretty(&self) -> String;
    /// Whether every check in the report passed (exit status 1 otherwise).
    fn passed(&self) -> bool {
        true
    }
}

pub fn serialize_report<R: Report + ?Sized>(r: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(r).map(|s| s + "\n").map_err(|e| Error::Parse(e.to_string())),
        Format::Pretty => Ok(r.pretty()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record(r.csv_header()).map_err(io)?;
            for row in r.csv_rows() {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

/// `(rendering, multiplicity)` per eigenvalue; a quadratic entry becomes two rows.
pub fn eigen_rows(entries: &[EigenEntry]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for e in entries {
        match &e.value {
            EigenValue::Quadratic { .. } => {
                for root in e.value.pretty().split(", ") {
                    out.push((root.to_string(), e.multiplicity / 2));
                }
            }
            v => out.push((v.pretty(), e.multiplicity)),
        }
    }
    out
}

fn eigen_lines(out: &mut String, entries: &[EigenEntry]) {
    for (v, m) in eigen_rows(entries) {
        let _ = writeln!(out, "  {v:>28}  x{m}");
    }
}

fn check_lines(out: &mut String, checks: &[IdentityCheck]) {
    for c in checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = write!(out, "  [{mark}] {}", c.name);
        if !c.passed {
            let _ = write!(out, "  ({})", c.residual);
        }
        out.push('\n');
    }
}

fn check_rows(checks: &[IdentityCheck]) -> Vec<Vec<String>> {
    checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.residual.clone()]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub operator: OperatorTag,
    pub k: u32,
    pub dim: usize,
    pub method: SpectrumMethod,
    pub index: usize,
    pub nullity: usize,
    pub eigenvalues: Vec<EigenEntry>,
    /// Operator matrix, rows = targets, block-first layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<QSqrt2>>>,
}

pub fn spectrum_report(tag: OperatorTag, k: u32, method: SpectrumMethod, with_matrix: bool) -> Result<SpectrumReport> {
    let space = HarmonicSpace::new(k)?;
    let a = assemble(tag, &space)?;
    let s = spectrum(&a.matrix, &a.gram, method)?;
    let matrix = with_matrix.then(|| (0..a.dim()).map(|r| a.matrix.row(r).to_vec()).collect());
    Ok(SpectrumReport {
        operator: tag,
        k,
        dim: a.dim(),
        method,
        index: s.index(),
        nullity: s.nullity(),
        eigenvalues: s.entries,
        matrix,
    })
}

impl Report for SpectrumReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["operator", "k", "eigenvalue", "multiplicity"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        eigen_rows(&self.eigenvalues)
            .into_iter()
            .map(|(v, m)| vec![self.operator.to_string(), self.k.to_string(), v, m.to_string()])
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!(
            "{} on degree-{} sections (dim {}, {} spectrum)\n",
            self.operator,
            self.k,
            self.dim,
            if self.method == SpectrumMethod::Exact { "exact" } else { "float" }
        );
        if let Some(m) = &self.matrix {
            let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(QSqrt2::pretty).collect()).collect();
            let w = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
            out.push_str("matrix:\n");
            for row in cells {
                let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
                let _ = writeln!(out, "  {}", line.join(" "));
            }
        }
        out.push_str("eigenvalues:\n");
        eigen_lines(&mut out, &self.eigenvalues);
        let _ = writeln!(out, "index {}, nullity {}", self.index, self.nullity);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticalEntry {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainDump {
    pub n: u32,
    pub polynomials: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticalReport {
    pub k: u32,
    pub method: String,
    pub spectrum: Vec<VerticalEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<Vec<ChainDump>>,
}

impl VerticalReport {
    pub fn new(k: u32, method: &str, s: &RationalSpectrum, dec: Option<&WeightDecomposition>) -> Self {
        VerticalReport {
            k,
            method: method.into(),
            spectrum: s.0.iter().map(|(v, m)| VerticalEntry { value: v.to_string(), multiplicity: *m }).collect(),
            chains: dec.map(|d| {
                d.chains
                    .iter()
                    .map(|(n, c)| ChainDump { n: *n, polynomials: c.iter().map(|p| p.to_text()).collect() })
                    .collect()
            }),
        }
    }
}

impl Report for VerticalReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["operator", "k", "eigenvalue", "multiplicity"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.spectrum
            .iter()
            .map(|e| vec!["vertical".into(), self.k.to_string(), e.value.clone(), e.multiplicity.to_string()])
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!("vertical Laplacian on H^{} ({})\n", self.k, self.method);
        for e in &self.spectrum {
            let _ = writeln!(out, "  {:>8}  x{}", e.value, e.multiplicity);
        }
        if let Some(chains) = &self.chains {
            for c in chains {
                let _ = writeln!(out, "chain n={}:", c.n);
                for (l, p) in c.polynomials.iter().enumerate() {
                    let _ = writeln!(out, "  f^{l}: {p}");
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(title: impl Into<String>, checks: Vec<IdentityCheck>) -> Self {
        let pass = checks.iter().all(|c| c.passed);
        CheckReport { title: title.into(), checks, pass }
    }
}

impl Report for CheckReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["check", "passed", "residual"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        check_rows(&self.checks)
    }

    fn pretty(&self) -> String {
        let mut out = format!("{}\n", self.title);
        check_lines(&mut out, &self.checks);
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

impl Report for IndexReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["operator", "k", "eigenvalue", "multiplicity"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.degrees
            .iter()
            .flat_map(|d| {
                eigen_rows(&d.spectrum)
                    .into_iter()
                    .map(move |(v, m)| vec![self.operator.to_string(), d.k.to_string(), v, m.to_string()])
            })
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!("{} index/nullity, degrees 0..={}\n", self.operator, self.kmax);
        let _ = writeln!(out, "  {:>3} {:>5} {:>6} {:>6} {:>8}  {}", "k", "dim", "index", "null", "method", "min eigenvalue");
        for d in &self.degrees {
            let method = match (d.method, d.exact_inertia) {
                (SpectrumMethod::Exact, _) => "exact",
                (SpectrumMethod::Float, true) => "float+ex",
                (SpectrumMethod::Float, false) => "float",
            };
            let _ = writeln!(
                out,
                "  {:>3} {:>5} {:>6} {:>6} {:>8}  {}",
                d.k,
                d.dim,
                d.index,
                d.nullity,
                method,
                crate::stability::significant(d.min_eigenvalue, 12)
            );
        }
        let _ = writeln!(
            out,
            "certificate: {} ({})",
            self.certificate.statement,
            if self.certificate.holds { "holds" } else { "FAILS" }
        );
        let _ = writeln!(out, "index {}, nullity {}", self.index, self.nullity);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelSummary {
    pub kernel: KernelReport,
    pub negative_space: NegativeSpaceReport,
    pub witness: InstabilityWitness,
}

impl Report for KernelSummary {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["check", "passed", "residual"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = check_rows(&self.kernel.checks);
        rows.extend(check_rows(&self.negative_space.checks));
        rows.push(vec!["instability witness".into(), self.witness.unstable.to_string(), self.witness.value.pretty()]);
        rows
    }

    fn pretty(&self) -> String {
        let k = &self.kernel;
        let mut out = format!(
            "ker J^psi: {} (k=0) + {} (Killing) + {} (gradient) = {}\n",
            k.degree0, k.killing_rank, k.gradient_rank, k.total
        );
        check_lines(&mut out, &k.checks);
        let n = &self.negative_space;
        let _ = writeln!(out, "negative space of J^psi: eigenvalue {} x{}", n.eigenvalue.pretty(), n.dim);
        check_lines(&mut out, &n.checks);
        let w = &self.witness;
        let _ = writeln!(
            out,
            "instability witness: e = {}, (I^phi eta, eta)/vol = {} (matrix entry {})",
            w.energy_density.pretty(),
            w.value.pretty(),
            w.matrix_entry.pretty()
        );
        out
    }

    fn passed(&self) -> bool {
        self.kernel.checks.iter().chain(&self.negative_space.checks).all(|c| c.passed) && self.witness.unstable
    }
}

impl Report for BasicReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["operator", "k", "eigenvalue", "multiplicity"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.degrees
            .iter()
            .flat_map(|d| {
                eigen_rows(&d.spectrum).into_iter().map(move |(v, m)| vec!["iphi-basic".into(), d.k.to_string(), v, m.to_string()])
            })
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!("I^phi on basic sections, degrees 0..={}\n", self.kmax);
        for d in &self.degrees {
            let _ = writeln!(out, "k={} dim={} index={} nullity={}", d.k, d.dim, d.index, d.nullity);
            eigen_lines(&mut out, &d.spectrum);
        }
        check_lines(&mut out, &self.checks);
        let _ = writeln!(out, "index {}, nullity {}", self.index, self.nullity);
        out
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl Report for ReproductionSuiteResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["check", "anchor", "expected", "computed", "pass"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| vec![c.name.clone(), c.anchor.clone(), c.expected.clone(), c.computed.clone(), c.pass.to_string()])
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!("basis map: {}\n", self.basis_map);
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.anchor);
            let _ = writeln!(out, "       expected: {}", c.expected);
            let _ = writeln!(out, "       computed: {}", c.computed);
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

impl Report for OracleReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["exponents", "exact", "estimate", "std_error", "z", "pass"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.moments
            .iter()
            .map(|m| {
                vec![
                    format!("{:?}", m.exponents),
                    m.exact.clone(),
                    m.estimate.to_string(),
                    m.std_error.to_string(),
                    m.z.to_string(),
                    m.pass.to_string(),
                ]
            })
            .collect()
    }

    fn pretty(&self) -> String {
        let mut out = format!("sphere moments, {} samples, seed {}, tolerance {} sigma\n", self.samples, self.seed, self.sigmas);
        for m in &self.moments {
            let _ = writeln!(
                out,
                "  [{}] x^{:?}: exact {} estimate {:.6} (se {:.2e}, z {:.2})",
                if m.pass { "ok  " } else { "FAIL" },
                m.exponents,
                m.exact,
                m.estimate,
                m.std_error,
                m.z
            );
        }
        check_lines(&mut out, &self.consistency);
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}
