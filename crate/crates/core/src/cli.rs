//! The `ordprimes` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for bad input data. Every
//! failure prints one line `error[usage]: ...` or `error[data]: ...` to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::galois::{Extremum, PermGroupAction, Permutation};
use crate::pipeline::{analyze_forms, emit_report, guarantee, load_forms_file, ReportFormat};
use crate::polygon::{format_rational, p_family, p_prime_family, SlopeMultiset};
use crate::satotate::{self, c_auto, c_numeric, c_table_with, CEstimate, Method};

#[derive(Parser, Debug)]
#[command(name = "ordprimes", version, about = "Newton polygons and ordinary primes of Hilbert eigenforms")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = satotate::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolygonOp {
    Oplus,
    Otimes,
    Dual,
    Leq,
    #[value(name = "P")]
    P,
    #[value(name = "Pprime")]
    Pprime,
    Vertices,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StcMethod {
    Auto,
    ClosedForm,
    Quadrature,
    #[value(alias = "mc")]
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassifyFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Slope multiset arithmetic and the P families.
    Polygon {
        #[arg(long, value_enum)]
        op: PolygonOp,
        /// Slopes as comma-separated rationals, e.g. `0,1/2,1`.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Second operand for oplus, otimes and leq.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Degree d for P and Pprime.
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        i: Option<i64>,
    },
    /// Orbit lengths, slope and bisection for a permutation group.
    Slope {
        /// Generators separated by ';', in cycle or one-line notation.
        #[arg(long)]
        gens: String,
        /// Number of points acted on.
        #[arg(long)]
        n: usize,
        /// Use the smallest orbit length instead of the largest.
        #[arg(long)]
        min: bool,
    },
    /// One tail constant c(k, t).
    Stc {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value_t = StcMethod::Auto)]
        method: StcMethod,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = satotate::DEFAULT_SAMPLES)]
        samples: u64,
        /// Quadrature nodes per panel.
        #[arg(long, default_value_t = satotate::DEFAULT_NODES)]
        nodes: u64,
    },
    /// The table of c(k, t) for t <= k <= max-k.
    Table {
        #[arg(long, default_value_t = 6)]
        max_k: u32,
        #[arg(long, default_value_t = satotate::DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// Per-prime analysis of the forms in a JSON file.
    Analyze {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Guarantee classification of the forms in a JSON file.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassifyFormat::Text)]
        format: ClassifyFormat,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn data(e: impl ToString) -> Failure {
    Failure::Data(e.to_string())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Run with process stdout/stderr; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {}", one_line(first));
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error[usage]: {}", one_line(&e.to_string()));
            return 1;
        }
    };
    let (mut buf_out, mut buf_err) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(&cli, &mut buf_out, &mut buf_err));
    let _ = out.write_all(&buf_out);
    let _ = err.write_all(&buf_err);
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error[usage]: {}", one_line(&m));
            1
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error[data]: {}", one_line(&m));
            2
        }
    }
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| usage(format!("--{flag} is required for this operation")))
}

fn multiset(v: &Option<String>, flag: &str) -> Result<SlopeMultiset, Failure> {
    required(v, flag)?.parse::<SlopeMultiset>().map_err(|e| usage(format!("--{flag}: {e}")))
}

fn io(e: std::io::Error) -> Failure {
    data(e)
}

fn estimate_line(e: &CEstimate) -> String {
    format!("{}\t{}\t{:.6}\t{:.2e}\t{}", e.k, e.t, e.value, e.abs_error, e.method)
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<(), Failure> {
    match &cli.command {
        Command::Polygon { op, a, b, d, k, i } => {
            let text = match op {
                PolygonOp::Oplus => multiset(a, "a")?.oplus(&multiset(b, "b")?).to_string(),
                PolygonOp::Otimes => multiset(a, "a")?.otimes(&multiset(b, "b")?).to_string(),
                PolygonOp::Dual => multiset(a, "a")?.dual().to_string(),
                PolygonOp::Leq => multiset(a, "a")?.leq(&multiset(b, "b")?).to_string(),
                PolygonOp::Vertices => multiset(a, "a")?.vertices().to_string(),
                PolygonOp::P | PolygonOp::Pprime => {
                    let (d, k, i) = (*required(d, "d")?, *required(k, "k")?, *required(i, "i")?);
                    let m = if matches!(op, PolygonOp::P) { p_family(d, k, i) } else { p_prime_family(d, k, i) };
                    m.map_err(usage)?.to_string()
                }
            };
            writeln!(out, "{text}").map_err(io)?;
        }
        Command::Slope { gens, n, min } => {
            let g = PermGroupAction::parse(gens, *n).map_err(usage)?;
            let which = if *min { Extremum::Min } else { Extremum::Max };
            let lambda = g.lambda(which).map_err(usage)?;
            let sigma = if *min { g.slope_prime() } else { g.slope() }.map_err(usage)?;
            let bisecting = g.has_bisecting().map_err(usage)?;
            let fraction = g.chebotarev_fraction(Permutation::bisects).map_err(usage)?;
            let (ln, sn) = if *min { ("lambda_prime", "sigma_prime") } else { ("lambda", "sigma") };
            writeln!(out, "order\t{}", g.order().map_err(usage)?).map_err(io)?;
            writeln!(out, "{ln}\t{lambda}").map_err(io)?;
            writeln!(out, "{sn}\t{}", format_rational(&sigma)).map_err(io)?;
            writeln!(out, "bisecting\t{bisecting}").map_err(io)?;
            writeln!(out, "bisection_fraction\t{}", format_rational(&fraction)).map_err(io)?;
        }
        Command::Stc { k, t, method, samples, nodes } => {
            let est = match method {
                StcMethod::Auto => c_auto(*k, *t, *samples, cli.seed),
                StcMethod::ClosedForm => c_numeric(*k, *t, Method::ClosedForm, 0, cli.seed),
                StcMethod::Quadrature => c_numeric(*k, *t, Method::Quadrature, *nodes, cli.seed),
                StcMethod::MonteCarlo => c_numeric(*k, *t, Method::MonteCarlo, *samples, cli.seed),
            }
            .map_err(usage)?;
            writeln!(out, "{}", serde_json::to_string(&est).expect("estimate serializes")).map_err(io)?;
        }
        Command::Table { max_k, samples } => {
            let table = c_table_with(*max_k, *samples, cli.seed).map_err(usage)?;
            writeln!(out, "k\tt\tvalue\tabs_error\tmethod").map_err(io)?;
            for e in table.iter().flatten() {
                writeln!(out, "{}", estimate_line(e)).map_err(io)?;
            }
        }
        Command::Analyze { file, out: path, format } => {
            let forms = load_forms_file(file).map_err(|e| data(format!("{}: {e}", file.display())))?;
            let analyses = analyze_forms(&forms).map_err(|e| data(format!("{}: {e}", file.display())))?;
            for a in &analyses {
                for w in &a.warnings {
                    writeln!(err, "warning: {}: {w}", a.label).map_err(io)?;
                }
            }
            let fmt = match format {
                Format::Json => ReportFormat::Json,
                Format::Tsv => ReportFormat::Tsv,
            };
            let text = emit_report(&analyses, fmt);
            match path {
                Some(p) => std::fs::write(p, text).map_err(|e| data(format!("{}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
        }
        Command::Classify { file, format } => {
            let forms = load_forms_file(file).map_err(|e| data(format!("{}: {e}", file.display())))?;
            match format {
                ClassifyFormat::Text => {
                    for f in &forms {
                        let g = guarantee(f);
                        writeln!(out, "{}\t{g}", f.label).map_err(io)?;
                        for b in &g.branches {
                            writeln!(
                                out,
                                "{}\tif k_f_circ = {}: {} k_p <= {} {}",
                                f.label,
                                b.k_f_circ,
                                b.case,
                                format_rational(&b.bound_on_kp),
                                b.density_class
                            )
                            .map_err(io)?;
                        }
                    }
                }
                ClassifyFormat::Json => {
                    let all: Vec<serde_json::Value> = forms
                        .iter()
                        .map(|f| serde_json::json!({ "label": f.label, "guarantee": guarantee(f) }))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&all).expect("serializes")).map_err(io)?;
                }
            }
        }
    }
    Ok(())
}
