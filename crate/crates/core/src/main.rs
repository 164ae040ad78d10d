//! Command-line front end: parse representation descriptors, run the
//! analyses, and emit text or JSON reports.
//!
//! Exit codes: 0 on success, 2 on validation failure (schema, relation, or
//! inconsistent input), 3 when a requested quantity is undetermined and
//! `--allow-partial` was not given, 1 on internal errors.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vvmf::descriptor::{parse_descriptor, DescriptorError};
use vvmf::forms::{subgroup_generator_weights, Caps, FormsError, RepAnalysis, Status};
use vvmf::qseries::{identity_suite, DEFAULT_ORDER};
use vvmf::report::{analyze_parsed, has_undetermined, Report, ReportError};
use vvmf::wpline::WeightedLine;

#[derive(Parser)]
#[command(
    name = "vvmf",
    about = "Exact analysis of SL2(Z) representations and their vector valued modular forms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Descriptor file path; `-` or omitted reads standard input.
    path: Option<String>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Report undetermined quantities instead of failing with exit code 3.
    #[arg(long)]
    allow_partial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a descriptor, checking the group relations.
    Validate { path: Option<String> },
    /// Full analysis report: traces, parity, spectra, exponents, weights,
    /// dimensions.
    Analyze(InputArgs),
    /// Dimension table over a weight range.
    Dims {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        /// Cusp forms instead of holomorphic forms.
        #[arg(long)]
        cusp: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Free-module generator weights and roots.
    Weights(InputArgs),
    /// Hilbert-Poincare numerator and series expansion.
    Hilbert {
        /// Expansion order.
        #[arg(long, default_value_t = 24)]
        order: usize,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Splitting type of the weight-k bundle.
    Splitting {
        #[arg(long)]
        weight: i64,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Line-bundle cohomology on a weighted projective line.
    Wpline {
        #[arg(value_enum)]
        what: WplineWhat,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long)]
        k: i64,
    },
    /// Run the q-expansion identity suite.
    Qcheck {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Generator weights of the modular forms ring of a finite-index
    /// subgroup, from the permutation action on its cosets.
    Subgroup(InputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum WplineWhat {
    H0,
    H1,
    Euler,
}

const EXIT_INTERNAL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn undetermined(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_UNDETERMINED,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<DescriptorError> for Failure {
    fn from(e: DescriptorError) -> Failure {
        Failure::validation(e.to_string())
    }
}

impl From<FormsError> for Failure {
    fn from(e: FormsError) -> Failure {
        match e {
            FormsError::YUndetermined { .. } => Failure::undetermined(e.to_string()),
            FormsError::Rep(_) | FormsError::Spectrum(_) | FormsError::Inconsistent(_) => {
                Failure::validation(e.to_string())
            }
            other => Failure::internal(other.to_string()),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Failure {
        match e {
            ReportError::Descriptor(d) => d.into(),
            ReportError::Forms(f) => f.into(),
        }
    }
}

fn caps_from_env() -> Caps {
    let mut caps = Caps::default();
    if let Ok(v) = std::env::var("VVMF_CAP") {
        if let Ok(n) = v.trim().parse::<usize>() {
            caps.order_cap = n;
            caps.closure_cap = n;
        }
    }
    caps
}

fn read_input(path: &Option<String>) -> Result<String, Failure> {
    match path.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::validation(format!("cannot read standard input: {}", e)))?;
            Ok(buf)
        }
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::validation(format!("cannot read {}: {}", p, e))),
    }
}

fn load_analysis(path: &Option<String>, caps: Caps) -> Result<RepAnalysis, Failure> {
    let input = read_input(path)?;
    let parsed = parse_descriptor(&input)?;
    let bundle = analyze_parsed(&input, parsed, caps)?;
    Ok(bundle.analysis)
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Exact => "exact",
        Status::ConditionalOnPositivity => "conditional-on-positivity",
        Status::Undetermined => "undetermined",
    }
}

fn print_report_text(report: &Report) {
    println!("descriptor sha256  {}", report.descriptor_sha256);
    println!("dimension          {}", report.dim);
    println!(
        "flags              image {}; good {}; positive {}; unitarizable {}",
        report.flags.finite_image,
        report.flags.good,
        report.flags.positive,
        report.flags.unitarizable
    );
    println!(
        "parity             d+ = {}, d- = {}",
        report.parity.d_plus, report.parity.d_minus
    );
    println!(
        "eigenvalues        alpha = {:?}, beta = {:?}",
        report.eig_multiplicities.alpha, report.eig_multiplicities.beta
    );
    let spectrum: Vec<String> = report
        .t_spectrum
        .entries
        .iter()
        .map(|e| {
            let block = if e.block > 1 {
                format!(" (block {})", e.block)
            } else {
                String::new()
            };
            format!("{}{} x{} {}", e.rotation, block, e.mult, e.parity)
        })
        .collect();
    println!(
        "T-spectrum         order {}: {}",
        report.t_spectrum.order,
        spectrum.join(", ")
    );
    println!(
        "standard exponents {}  Tr L = {} (+ {}, - {})",
        report.standard_exponents.interval,
        report.standard_exponents.tr_l,
        report.standard_exponents.tr_l_plus,
        report.standard_exponents.tr_l_minus
    );
    println!(
        "cusp exponents     {}  Tr L = {}",
        report.cusp_exponents.interval, report.cusp_exponents.tr_l
    );
    println!("invariants (x)     {}", report.invariants_dim);
    match (&report.weights.weights, &report.weights.y.range) {
        (Some(w), _) => {
            println!(
                "weights            {:?} [{}] (y = {})",
                w,
                report.weights.status,
                report.weights.y.exact.unwrap_or(0)
            );
            if let Some(roots) = &report.weights.roots {
                println!("roots              {:?}", roots);
            }
        }
        (None, Some([lo, hi])) => {
            println!(
                "weights            undetermined: y pinned only to {}..={}",
                lo, hi
            );
        }
        (None, None) => println!("weights            undetermined"),
    }
    let dim_line = |entries: &[vvmf::report::DimEntryJson]| -> String {
        entries
            .iter()
            .map(|e| match e.dim {
                Some(d) => d.to_string(),
                None => "?".to_string(),
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    println!("dim M_k (k=0..12)  {}", dim_line(&report.dims_modular));
    println!("dim S_k (k=0..12)  {}", dim_line(&report.dims_cusp));
}

fn finish_with_report(report: &Report, json: bool, allow_partial: bool) -> Result<(), Failure> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("serializable")
        );
    } else {
        print_report_text(report);
    }
    if has_undetermined(report) && !allow_partial {
        return Err(Failure::undetermined(
            "some quantities are undetermined; pass --allow-partial to accept",
        ));
    }
    Ok(())
}

fn run() -> Result<(), Failure> {
    let cli = Cli::parse();
    let caps = caps_from_env();
    match cli.command {
        Command::Validate { path } => {
            let input = read_input(&path)?;
            let parsed = parse_descriptor(&input)?;
            println!(
                "ok: {}-dimensional representation (relations verified)",
                parsed.rep.dim()
            );
            Ok(())
        }
        Command::Analyze(input) => {
            let raw = read_input(&input.path)?;
            let parsed = parse_descriptor(&raw)?;
            let bundle = analyze_parsed(&raw, parsed, caps)?;
            finish_with_report(&bundle.report, input.json, input.allow_partial)
        }
        Command::Dims {
            from,
            to,
            cusp,
            input,
        } => {
            if from > to {
                return Err(Failure::validation("--from must not exceed --to"));
            }
            let analysis = load_analysis(&input.path, caps)?;
            let report = analysis.dims(from, to, cusp)?;
            let undetermined = report
                .entries
                .iter()
                .any(|e| e.status == Status::Undetermined);
            if input.json {
                let entries: Vec<serde_json::Value> = report
                    .entries
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "k": e.k,
                            "dim": e.dim,
                            "status": status_label(e.status),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "cusp": cusp,
                        "entries": entries,
                    }))
                    .expect("serializable")
                );
            } else {
                let label = if cusp { "dim S" } else { "dim M" };
                for e in &report.entries {
                    let dim = e
                        .dim
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "undetermined".to_string());
                    let mark = match e.status {
                        Status::ConditionalOnPositivity => "  (conditional on positivity)",
                        _ => "",
                    };
                    println!("{}_{}  = {}{}", label, e.k, dim, mark);
                }
            }
            if undetermined && !input.allow_partial {
                return Err(Failure::undetermined(
                    "dimension table contains undetermined entries",
                ));
            }
            Ok(())
        }
        Command::Weights(input) => {
            let analysis = load_analysis(&input.path, caps)?;
            let gw = analysis.generator_weights()?;
            match gw.weight_multiset() {
                Ok(weights) => {
                    let roots = gw.roots().expect("resolved");
                    if input.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "weights": weights,
                                "roots": roots,
                                "x": gw.x,
                                "y": gw.y.exact(),
                                "status": status_label(gw.status),
                            }))
                            .expect("serializable")
                        );
                    } else {
                        println!("weights {:?}", weights);
                        println!("roots   {:?}", roots);
                    }
                    Ok(())
                }
                Err(FormsError::YUndetermined { lo, hi }) => {
                    if input.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "weights": serde_json::Value::Null,
                                "y_range": [lo, hi],
                                "status": "undetermined",
                            }))
                            .expect("serializable")
                        );
                    } else {
                        println!("weights undetermined: y pinned only to {}..={}", lo, hi);
                    }
                    if input.allow_partial {
                        Ok(())
                    } else {
                        Err(Failure::undetermined(format!(
                            "weight-one data undetermined (y in {}..={})",
                            lo, hi
                        )))
                    }
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Hilbert { order, input } => {
            let analysis = load_analysis(&input.path, caps)?;
            let h = analysis.hilbert(order)?;
            if input.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "numerator": h.numerator.to_vec(),
                        "series": h.series,
                    }))
                    .expect("serializable")
                );
            } else {
                let terms: Vec<String> = h
                    .numerator
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(w, &c)| match (w, c) {
                        (0, 1) => "1".to_string(),
                        (0, c) => c.to_string(),
                        (w, 1) => format!("X^{}", w),
                        (w, c) => format!("{} X^{}", c, w),
                    })
                    .collect();
                println!("numerator N(X) = {}", terms.join(" + "));
                println!(
                    "series         {}",
                    h.series
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
            Ok(())
        }
        Command::Splitting { weight, input } => {
            let analysis = load_analysis(&input.path, caps)?;
            let split = analysis.splitting(weight)?;
            if input.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "weight": weight,
                        "summands": split.summands(),
                    }))
                    .expect("serializable")
                );
            } else {
                let parts: Vec<String> = split
                    .summands()
                    .iter()
                    .map(|a| format!("O({})", a))
                    .collect();
                println!("{}", parts.join(" + "));
            }
            Ok(())
        }
        Command::Wpline { what, n1, n2, k } => {
            if n1 == 0 || n2 == 0 {
                return Err(Failure::validation("weights must be positive"));
            }
            let w = WeightedLine::new(n1, n2);
            let value = match what {
                WplineWhat::H0 => w.h0(k) as i64,
                WplineWhat::H1 => w.h1(k) as i64,
                WplineWhat::Euler => w.euler_line(k),
            };
            println!("{}", value);
            Ok(())
        }
        Command::Qcheck { order } => {
            let checks = identity_suite(order);
            let mut all_pass = true;
            for c in &checks {
                if c.pass {
                    println!("ok   {}", c.name);
                } else {
                    all_pass = false;
                    match c.first_failure {
                        Some(idx) => {
                            println!("FAIL {} (first failing coefficient {})", c.name, idx)
                        }
                        None => println!("FAIL {}", c.name),
                    }
                }
            }
            if all_pass {
                println!(
                    "qcheck: {} identities verified to order {}",
                    checks.len(),
                    order
                );
                Ok(())
            } else {
                Err(Failure::validation("q-expansion identity suite failed"))
            }
        }
        Command::Subgroup(input) => {
            let raw = read_input(&input.path)?;
            let parsed = parse_descriptor(&raw)?;
            if !parsed.is_plain_permutation {
                return Err(Failure::validation(
                    "subgroup expects a permutation descriptor of a coset action without subtract_trivial",
                ));
            }
            let weights = subgroup_generator_weights(&parsed.rep, caps)?;
            if input.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "index": parsed.rep.dim(),
                        "weights": weights,
                    }))
                    .expect("serializable")
                );
            } else {
                println!("index   {}", parsed.rep.dim());
                println!("weights {:?}", weights);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
