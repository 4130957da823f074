use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hopf_spectra::geometry::{connection_checks, submersion_checks};
use hopf_spectra::harmonic::vertical_spectrum_bruteforce;
use hopf_spectra::oracle::oracle_check;
use hopf_spectra::report::{
    serialize_report, spectrum_report, CheckReport, Format, KernelSummary, Report, VerticalReport,
};
use hopf_spectra::reproduction::{operator_identity_checks, verify_paper};
use hopf_spectra::sl2::{decompose, vertical_spectrum_from_weights, Sl2Ops};
use hopf_spectra::stability::{
    basic_subspace_spectrum, index_nullity_report, instability_witness, kernel_characterization,
    negative_space_characterization, OperatorTag, SpectrumMethod, EXACT_DEGREE_LIMIT,
};
use hopf_spectra::Error;

/// Largest degree accepted by the per-degree commands.
const MAX_K: u32 = 40;

#[derive(Parser, Debug)]
#[command(name = "hopf-spectra", version, about = "Spectra of the Jacobi operator and bienergy Hessians of the Hopf map")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Pretty, global = true)]
    format: FormatArg,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum VerticalMethod {
    Bruteforce,
    Sl2,
    Both,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OperatorArg {
    Jpsi,
    Ipsi,
    Iphi,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MapArg {
    Psi,
    Phi,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    k: u32,
    /// Certify every eigenvalue exactly.
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Floating-point eigenvalues only (signs near zero are still decided exactly).
    #[arg(long)]
    float: bool,
    #[arg(long)]
    print_matrix: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frame, connection and submersion identities plus the operator identities.
    CheckGeometry {
        #[arg(long, default_value_t = 6)]
        kmax: u32,
    },
    /// Spectrum of the vertical Laplacian on H^k.
    VerticalSpectrum {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = VerticalMethod::Both)]
        method: VerticalMethod,
        /// Include the sl(2) chains.
        #[arg(long)]
        dump_chains: bool,
    },
    /// Jacobi operator of psi on degree-k sections.
    Jacobi(SpectrumArgs),
    /// Bienergy Hessian on degree-k sections.
    Bienergy {
        #[command(flatten)]
        args: SpectrumArgs,
        #[arg(long, value_enum, default_value_t = MapArg::Phi)]
        map: MapArg,
    },
    /// Index and nullity over degrees 0..=kmax, combined with the uniform certificate.
    Index {
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long)]
        kmax: u32,
        /// Fail when some degree is neither solved nor certified.
        #[arg(long)]
        require_complete: bool,
    },
    /// Kernel and negative space of the Jacobi operator, and the instability witness.
    Kernel,
    /// Bienergy Hessian of i o psi on basic sections.
    Basic {
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Every reference matrix, spectrum and tally; deterministic.
    VerifyPaper,
    /// Monte-Carlo check of the sphere moments.
    OracleCheck {
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn check_k(k: u32) -> Result<(), Failure> {
    if k > MAX_K {
        return Err(Failure::Usage(format!("k = {k} exceeds the supported maximum {MAX_K}")));
    }
    Ok(())
}

fn method(args: &SpectrumArgs) -> SpectrumMethod {
    if args.exact || (!args.float && args.k <= EXACT_DEGREE_LIMIT) {
        SpectrumMethod::Exact
    } else {
        SpectrumMethod::Float
    }
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let format: Format = cli.format.into();
    let emit = |r: &dyn ErasedReport| -> Result<(String, bool), Failure> { Ok((r.render(format)?, r.ok())) };
    match &cli.command {
        Command::CheckGeometry { kmax } => {
            check_k(*kmax)?;
            let mut checks = submersion_checks();
            checks.extend(connection_checks());
            checks.extend(operator_identity_checks(*kmax)?);
            emit(&CheckReport::new(format!("geometry and operator identities, degrees 0..={kmax}"), checks))
        }
        Command::VerticalSpectrum { k, method, dump_chains } => {
            check_k(*k)?;
            let ops = Sl2Ops::new()?;
            let dec = match method {
                VerticalMethod::Bruteforce if !dump_chains => None,
                _ => Some(decompose(&ops, *k)?),
            };
            let (s, label) = match method {
                VerticalMethod::Bruteforce => (vertical_spectrum_bruteforce(*k)?, "bruteforce"),
                VerticalMethod::Sl2 => (vertical_spectrum_from_weights(dec.as_ref().expect("decomposed")), "sl2"),
                VerticalMethod::Both => {
                    let a = vertical_spectrum_from_weights(dec.as_ref().expect("decomposed"));
                    let b = vertical_spectrum_bruteforce(*k)?;
                    if a != b {
                        return Err(Failure::Runtime(format!("sl2 and brute-force spectra differ at k={k}")));
                    }
                    (a, "sl2+bruteforce")
                }
            };
            let chains = if *dump_chains { dec.as_ref() } else { None };
            emit(&VerticalReport::new(*k, label, &s, chains))
        }
        Command::Jacobi(args) => {
            check_k(args.k)?;
            emit(&spectrum_report(OperatorTag::Jpsi, args.k, method(args), args.print_matrix)?)
        }
        Command::Bienergy { args, map } => {
            check_k(args.k)?;
            let tag = match map {
                MapArg::Psi => OperatorTag::Ipsi,
                MapArg::Phi => OperatorTag::Iphi,
            };
            emit(&spectrum_report(tag, args.k, method(args), args.print_matrix)?)
        }
        Command::Index { operator, kmax, require_complete } => {
            check_k(*kmax)?;
            let tag = match operator {
                OperatorArg::Jpsi => OperatorTag::Jpsi,
                OperatorArg::Ipsi => OperatorTag::Ipsi,
                OperatorArg::Iphi => OperatorTag::Iphi,
            };
            let r = index_nullity_report(tag, *kmax, *require_complete)?;
            if !matches!(format, Format::Pretty) {
                for w in &r.warnings {
                    eprintln!("warning: {w}");
                }
            }
            emit(&r)
        }
        Command::Kernel => {
            let summary = KernelSummary {
                kernel: kernel_characterization()?,
                negative_space: negative_space_characterization()?,
                witness: instability_witness()?,
            };
            emit(&summary)
        }
        Command::Basic { kmax } => {
            check_k(*kmax)?;
            emit(&basic_subspace_spectrum(*kmax)?)
        }
        Command::VerifyPaper => emit(&verify_paper()?),
        Command::OracleCheck { samples, seed, sigmas } => {
            if *samples < 2 {
                return Err(Failure::Usage("need at least 2 samples".into()));
            }
            emit(&oracle_check(*samples, *seed, *sigmas))
        }
    }
}

/// Object-safe view of [`Report`].
trait ErasedReport {
    fn render(&self, f: Format) -> Result<String, Error>;
    fn ok(&self) -> bool;
}

impl<R: Report> ErasedReport for R {
    fn render(&self, f: Format) -> Result<String, Error> {
        serialize_report(self, f)
    }

    fn ok(&self) -> bool {
        self.passed()
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HOPF_SPECTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("HOPF_SPECTRA_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(&cli)).and_then(|(text, ok)| {
        match &cli.output {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
