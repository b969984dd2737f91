use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use latticek::lattice::{lattice_direct, lattice_mellin_est, LatticeSumSpec};
use latticek::quadrature::{k_integral, KIntegralSpec};
use latticek::registry::{self, IdentityRecord, VerificationReport};
use latticek::symbolic::{
    compute_f4p, compute_gp, compute_pn, constant_identity, derive_e_identity, e4_case_identity, eisenstein_as_e4e6,
    theta2_fourth_identity, theta2_squared_identity, QIdentity, Q,
};
use latticek::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "latticek", version, about = "Integrals of K and E, lattice sums and their closed forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Mellin,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    /// (8/B_4) sum j^3 (-q)^j/(1-q^2j) = 240 k^2 k'^2 K^4/pi^4
    E4Case,
    /// theta_2^4 = 4 k^2 K^2/pi^2
    Theta2Fourth,
    /// theta_2^2 = 2 k K/pi
    Theta2Squared,
    /// 1 = 1
    One,
}

#[derive(Subcommand)]
enum Command {
    /// int_0^1 poly(k) k^alpha k'^beta K^gamma K'^delta dk by quadrature
    Eval {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta: f64,
        #[arg(long = "gamma", allow_hyphen_values = true, default_value_t = 0.0)]
        gamma_k: f64,
        #[arg(long = "delta", allow_hyphen_values = true, default_value_t = 0.0)]
        delta_kp: f64,
        /// Polynomial coefficients in k, lowest first: "c0,c1,..."
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        poly: Vec<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// L(m, n, p; s)
    Lattice {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, value_enum, default_value_t = Method::Mellin)]
        method: Method,
        #[arg(long, default_value_t = registry::DIRECT_RADIUS)]
        radius: usize,
        /// Largest relative disagreement accepted by `--method both`.
        #[arg(long, default_value_t = 1e-6)]
        agree: f64,
    },
    /// E_2n as a polynomial in E_4, E_6, with Q_n, p_n and the K integral
    Eisenstein {
        #[arg(long)]
        n: usize,
    },
    /// f_4p = G_p K^{4p+1}, g_p and the closed form of int g_p K'^{4p-1}
    Modular {
        #[arg(long)]
        p: usize,
    },
    /// Differentiate a q-identity and print the K, E form and its integral
    DeriveE {
        #[arg(long, value_enum)]
        base: Base,
        /// Number of q d/dq applications.
        #[arg(long, default_value_t = 1)]
        times: u32,
        /// Also evaluate the Mellin transform of the K, E side at this s.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// Verify registry identities; exits 2 on any failure
    Verify(SuiteArgs),
    /// Like verify, but always exits 0 once the report is written
    Report(SuiteArgs),
    /// List registry ids with their citations
    List {
        #[arg(long, default_value = "")]
        filter: String,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SuiteArgs {
    /// Tag, id, or prefix of either (e.g. table1, generated:thm31); empty for all.
    #[arg(long, default_value = "")]
    filter: String,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Registry file to use instead of the bundled one.
    #[arg(long)]
    registry: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verify(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Schema { .. } | Error::DuplicateId(_) | Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn records(path: &Option<PathBuf>) -> std::result::Result<Vec<IdentityRecord>, Failure> {
    Ok(match path {
        Some(p) => registry::registry_with_generated(p)?,
        None => registry::bundled_registry()?,
    })
}

fn cmd_eval(spec: KIntegralSpec, tol: f64) -> CliResult {
    let r = k_integral(&spec, tol)?;
    println!("value          {:.17e}", r.value);
    println!("error_estimate {:.3e}", r.error_estimate);
    println!("evaluations    {}", r.evaluations);
    Ok(())
}

fn cmd_lattice(spec: LatticeSumSpec, method: Method, radius: usize, agree: f64) -> CliResult {
    let mellin = || -> std::result::Result<f64, Failure> {
        let r = lattice_mellin_est(&spec, 1e-12)?;
        println!("mellin {:.17e}  (error estimate {:.2e})", r.value, r.error_estimate);
        Ok(r.value)
    };
    let direct = || -> std::result::Result<f64, Failure> {
        let (v, e) = lattice_direct(&spec, radius)?;
        println!("direct {v:.17e}  (error estimate {e:.2e}, radius {radius})");
        Ok(v)
    };
    match method {
        Method::Mellin => {
            mellin()?;
        }
        Method::Direct => {
            direct()?;
        }
        Method::Both => {
            let (a, b) = (mellin()?, direct()?);
            let rel = (a - b).abs() / a.abs().max(f64::MIN_POSITIVE);
            println!("relative difference {rel:.3e}");
            if rel > agree {
                return Err(Failure::Verify(format!("methods disagree by {rel:.3e} > {agree:e}")));
            }
        }
    }
    Ok(())
}

fn cmd_eisenstein(n: usize) -> CliResult {
    let p = eisenstein_as_e4e6(2 * n)?;
    let r = compute_pn(n)?;
    let w = 2 * n - 1;
    println!("E_{} = {}", 2 * n, p);
    println!("Q_{n}(k) = {}", r.q_n.display_in("k"));
    println!("p_{n}(k) = {}", r.p_n.display_in("k"));
    match r.complement_sign() {
        Some(1) => println!("p_{n}(k') = p_{n}(k)"),
        Some(_) => println!("p_{n}(k') = -p_{n}(k)"),
        None => println!("p_{n}(k') is not +-p_{n}(k)"),
    }
    println!("int_0^1 k p_{n}(k) K^({w}-s) K'^(s-1) dk = {} pi^({w}-s) Gamma(s) eta(s-{w}) lambda(s)", r.constant);
    Ok(())
}

fn cmd_modular(p: usize) -> CliResult {
    let f = compute_f4p(p)?;
    let g = compute_gp(p)?;
    println!("f_{} = G_{p}(k) K^{}, G_{p}(k) = ({}) pi^({})", 4 * p, 4 * p + 1, f.g, f.pi_pow);
    println!("g_{p}(k) = {}", g.g_p.display_in("k"));
    println!(
        "int_0^1 g_{p}(k) K'^{} dk = {} Gamma(1/4)^{} pi^({})",
        4 * p - 1,
        g.constant,
        g.gamma_quarter_pow,
        g.pi_pow
    );
    println!("  = {:.17e}", g.rhs_f64());
    Ok(())
}

fn cmd_derive_e(base: Base, times: u32, s: Option<f64>, order: usize) -> CliResult {
    let mut id: QIdentity = match base {
        Base::E4Case => e4_case_identity(order)?,
        Base::Theta2Fourth => theta2_fourth_identity(order)?,
        Base::Theta2Squared => theta2_squared_identity(order)?,
        Base::One => constant_identity(Q::from_integer(1.into()), order),
    };
    for _ in 0..times {
        id = derive_e_identity(&id);
    }
    println!("series  = {}", id.series);
    println!("K, E form = {}", id.expr);
    let ok = id.check()?;
    println!("exact agreement through q^{}: {}", id.series.order, if ok { "yes" } else { "NO" });
    if !ok {
        return Err(Failure::Verify("the derived identity does not hold".into()));
    }
    if let Some(s) = s {
        let spec = id.expr.mellin_k_spec(s)?;
        let r = k_integral(&spec, 1e-12)?;
        println!("M_{s}[K, E form] = {:.17e}  (error estimate {:.2e})", r.value, r.error_estimate);
        println!("  (the base's transform at s - {})", id.derivatives);
    }
    Ok(())
}

fn emit(report: &VerificationReport, args: &SuiteArgs) -> CliResult {
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    };
    match &args.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    let s = &report.summary;
    eprintln!("{} rows: {} passed, {} failed, {} skipped", s.rows, s.passed, s.failed, s.skipped);
    Ok(())
}

fn cmd_suite(args: &SuiteArgs, strict: bool) -> CliResult {
    let recs = records(&args.registry)?;
    let report = registry::run_suite(&recs, &args.filter, args.threads)?;
    emit(&report, args)?;
    if strict && !report.all_passed() {
        return Err(Failure::Verify(format!("{} verification failure(s)", report.summary.failed)));
    }
    Ok(())
}

fn cmd_list(filter: &str, path: &Option<PathBuf>) -> CliResult {
    for r in records(path)?.iter().filter(|r| r.matches(filter)) {
        let cite = if r.citation.is_empty() { "(generated)" } else { r.citation.as_str() };
        println!("{}\t{}\t{}", r.id, r.tags.join(","), cite);
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval { alpha, beta, gamma_k, delta_kp, poly, tol } => {
            let mut spec = KIntegralSpec::monomial(alpha, beta, gamma_k, delta_kp);
            if !poly.is_empty() {
                spec = spec.with_poly(poly);
            }
            cmd_eval(spec, tol)
        }
        Command::Lattice { m, n, p, s, method, radius, agree } => {
            let spec = LatticeSumSpec::new(m, n, p, s).map_err(|e| Failure::Usage(e.to_string()))?;
            cmd_lattice(spec, method, radius, agree)
        }
        Command::Eisenstein { n } => cmd_eisenstein(n),
        Command::Modular { p } => cmd_modular(p),
        Command::DeriveE { base, times, s, order } => cmd_derive_e(base, times, s, order),
        Command::Verify(a) => cmd_suite(&a, true),
        Command::Report(a) => cmd_suite(&a, false),
        Command::List { filter, registry } => cmd_list(&filter, &registry),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
