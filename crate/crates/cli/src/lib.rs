//! `framelab` command-line front end. Indices are one-based on the command
//! line and in reports.

pub mod report;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use framelab_core::gallery::{paper_example, random_frame, standard_frame, StandardKind};
use framelab_core::io::{format_frame, parse_family, parse_frame};
use framelab_core::series::{sign_sup, subset_sup, tail_decay_profile, SubsetSup};
use framelab_core::subfamily::DEFAULT_SUBSET_BUDGET;
use framelab_core::{
    common_bound_decay, extract, riesz_frame_constant, tail_localization, DecayFamily, Frame,
    NormMode, SignSup, Strategy, SubsetId, SupMethod, TolerancePolicy,
};

pub use report::{fmt_num, sha256_hex, Entries, Input, Report, Table, Value, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "framelab", version, about = "Finite frame analysis")]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Relative eigenvalue cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub rank_rel: f64,
    /// Absolute residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub residual_abs: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, frame bounds, excess and Riesz-basis check.
    Analyze { file: PathBuf },
    /// Common lower bound over all subfamilies.
    Subsets {
        file: PathBuf,
        /// Largest number of subsets to enumerate exhaustively.
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u64,
    },
    /// Extend a seed set until its tail is eps-small on the seed span.
    Localize {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        seed_indices: Vec<usize>,
        #[arg(long)]
        eps: f64,
    },
    /// Extract a Riesz basis for the span.
    Extract {
        file: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Seed size for the projection strategy.
        #[arg(long)]
        seed_size: Option<usize>,
    },
    /// Sign and subset suprema of a coefficient family.
    Series {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// One-based tail start; without it every tail is reported.
        #[arg(long)]
        tail_start: Option<usize>,
    },
    /// Write a generated frame file (to stdout without --out).
    Gallery(GalleryArgs),
    /// Common lower bound for growing members of a family.
    Decay {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GalleryArgs {
    #[arg(value_enum)]
    pub kind: GalleryKind,
    /// Size parameter: truncation for `paper`, dimension otherwise.
    #[arg(long)]
    pub n: Option<usize>,
    /// Vector count for `random`.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target condition number B/A for `random`.
    #[arg(long)]
    pub condition: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Greedy,
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Euclidean,
    #[value(name = "coordinate_max", alias = "coordinate-max")]
    CoordinateMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GalleryKind {
    Paper,
    Onb,
    Mercedes,
    #[value(name = "duplicated_onb", alias = "duplicated-onb")]
    DuplicatedOnb,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Paper,
    Onb,
    #[value(name = "duplicated_onb", alias = "duplicated-onb")]
    DuplicatedOnb,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl From<framelab_core::Error> for CliError {
    fn from(e: framelab_core::Error) -> Self {
        if let framelab_core::Error::IndexOutOfRange { index, len } = e {
            return CliError::Precondition(format!("index {} out of range 1..={len}", index + 1));
        }
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: a report, or raw file text for `gallery`
/// without `--out`.
enum Output {
    Report(Report),
    Text(String),
}

/// Runs one invocation. `args` excludes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(
        std::iter::once("framelab".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "{e}");
        return e.exit_code();
    }
    let start = Instant::now();
    match execute(&cli, &args) {
        Ok(Output::Text(t)) => {
            let _ = write!(out, "{t}");
            EXIT_OK
        }
        Ok(Output::Report(mut r)) => {
            r.duration_seconds = start.elapsed().as_secs_f64();
            let rendered = if cli.json {
                r.to_json() + "\n"
            } else {
                r.to_text()
            };
            let _ = write!(out, "{rendered}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("FRAMELAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Input(format!(
            "FRAMELAB_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn policy(cli: &Cli) -> CliResult<TolerancePolicy> {
    TolerancePolicy::new(cli.rank_rel, cli.residual_abs).map_err(|e| CliError::Input(e.to_string()))
}

fn read_input(path: &Path) -> CliResult<(String, Input)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let input = Input {
        source: path.display().to_string(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((text, input))
}

fn tolerances(pol: &TolerancePolicy) -> Entries {
    let mut t = Entries::default();
    t.push("rank_rel", Value::Num(pol.rank_rel));
    t.push("residual_abs", Value::Num(pol.residual_abs));
    t
}

fn new_report(args: &[String], input: Input, pol: &TolerancePolicy) -> Report {
    Report {
        command: args.to_vec(),
        input,
        results: Entries::default(),
        witnesses: Vec::new(),
        tables: Vec::new(),
        tolerances: tolerances(pol),
        duration_seconds: 0.0,
    }
}

fn witness(frame: &Frame, name: &str, subset: &SubsetId) -> Witness {
    Witness {
        name: name.to_string(),
        indices: subset.indices().iter().map(|i| i + 1).collect(),
        labels: subset.indices().iter().map(|&i| frame.label(i)).collect(),
    }
}

fn zero_based(indices: &[usize]) -> CliResult<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| CliError::Input("indices are one-based".into()))
        })
        .collect()
}

fn method_name(m: SupMethod) -> &'static str {
    match m {
        SupMethod::Exhaustive => "exhaustive",
        SupMethod::ClosedForm => "closed_form",
        SupMethod::RandomizedLowerBound => "randomized_lower_bound",
    }
}

fn execute(cli: &Cli, args: &[String]) -> CliResult<Output> {
    let pol = policy(cli)?;
    match &cli.command {
        Command::Analyze { file } => {
            let (text, input) = read_input(file)?;
            let frame = parse_frame(&text)?;
            let mut r = new_report(args, input, &pol);
            r.results = analyze_frame(&frame, &pol)?;
            Ok(Output::Report(r))
        }
        Command::Subsets { file, budget } => {
            let (text, input) = read_input(file)?;
            let frame = parse_frame(&text)?;
            let c = riesz_frame_constant(&frame, &pol, *budget)?;
            let mut r = new_report(args, input, &pol);
            r.results.push("constant", Value::Num(c.constant));
            r.results
                .push("subsets_examined", Value::Int(c.subsets_examined));
            r.results.push(
                "method",
                Value::Text(format!("{:?}", c.method).to_lowercase()),
            );
            r.witnesses.push(witness(&frame, "witness", &c.witness));
            r.tolerances.push("budget", Value::Int(*budget));
            Ok(Output::Report(r))
        }
        Command::Localize {
            file,
            seed_indices,
            eps,
        } => {
            let (text, input) = read_input(file)?;
            let frame = parse_frame(&text)?;
            let seed = SubsetId::from_unsorted(zero_based(seed_indices)?);
            let l = tail_localization(&frame, &seed, *eps, &pol)?;
            let mut r = new_report(args, input, &pol);
            r.results.push("achieved", Value::Num(l.achieved));
            r.results.push("span_dim", Value::Int(l.span_dim as u64));
            r.results
                .push("extended_size", Value::Int(l.extended.len() as u64));
            r.witnesses.push(witness(&frame, "seed", &seed));
            r.witnesses.push(witness(&frame, "extended", &l.extended));
            r.tolerances.push("eps", Value::Num(*eps));
            Ok(Output::Report(r))
        }
        Command::Extract {
            file,
            strategy,
            seed_size,
        } => {
            let strategy = match (strategy, seed_size) {
                (StrategyArg::Projection, k) => Strategy::Projection { seed_size: *k },
                (_, Some(_)) => {
                    return Err(CliError::Input(
                        "--seed-size applies to the projection strategy only".into(),
                    ))
                }
                (StrategyArg::Exhaustive, None) => Strategy::Exhaustive,
                (StrategyArg::Greedy, None) => Strategy::Greedy,
            };
            let (text, input) = read_input(file)?;
            let frame = parse_frame(&text)?;
            let e = extract(&frame, strategy, &pol)?;
            let mut r = new_report(args, input, &pol);
            r.results
                .push("strategy", Value::Text(e.strategy.to_string()));
            r.results.push("rank", Value::Int(e.selected.len() as u64));
            r.results.push("riesz_lower", Value::Num(e.riesz_lower));
            r.results.push("riesz_upper", Value::Num(e.riesz_upper));
            r.witnesses.push(witness(&frame, "selected", &e.selected));
            if !e.completed_with.is_empty() {
                r.witnesses
                    .push(witness(&frame, "completed_with", &e.completed_with));
            }
            Ok(Output::Report(r))
        }
        Command::Series {
            file,
            mode,
            tail_start,
        } => {
            let mode = match mode {
                ModeArg::Euclidean => NormMode::Euclidean,
                ModeArg::CoordinateMax => NormMode::CoordinateMax,
            };
            let (text, input) = read_input(file)?;
            let family = parse_family(&text, mode)?;
            let mut r = new_report(args, input, &pol);
            r.results.push("terms", Value::Int(family.len() as u64));
            let terms = family.terms();
            let start = match tail_start {
                Some(0) => return Err(CliError::Input("--tail-start is one-based".into())),
                Some(m) if *m > family.len() => {
                    return Err(CliError::Precondition(format!(
                        "tail start {m} exceeds the {} terms",
                        family.len()
                    )))
                }
                Some(m) => {
                    let s = sign_sup(&family, m - 1);
                    r.results.push("tail_start", Value::Int(*m as u64));
                    push_sign_sup(&mut r.results, &s);
                    m - 1
                }
                None => {
                    let profile = tail_decay_profile(&family);
                    r.results.push(
                        "profile_method",
                        Value::Text(method_name(profile.method).into()),
                    );
                    r.tables.push(Table {
                        name: "tail_profile".into(),
                        columns: ["m", "lower", "upper", "method"].map(String::from).to_vec(),
                        rows: profile
                            .tail_starts
                            .iter()
                            .zip(&profile.values)
                            .map(|(m, v)| {
                                vec![
                                    Value::Int(*m as u64 + 1),
                                    Value::Num(v.lower),
                                    Value::Num(v.upper),
                                    Value::Text(method_name(v.method).into()),
                                ]
                            })
                            .collect(),
                    });
                    0
                }
            };
            match subset_sup(&terms[start..], mode) {
                Ok(SubsetSup { value, method }) => {
                    r.results.push("subset_sup", Value::Num(value));
                    r.results
                        .push("subset_sup_method", Value::Text(method_name(method).into()));
                }
                Err(framelab_core::Error::TooLarge { .. }) => {
                    r.results.push(
                        "subset_sup_method",
                        Value::Text("skipped: too many terms".into()),
                    );
                }
                Err(e) => return Err(e.into()),
            }
            Ok(Output::Report(r))
        }
        Command::Gallery(g) => {
            let (_, text) = gallery_frame(g)?;
            match &g.out {
                None => Ok(Output::Text(text)),
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| {
                        CliError::Input(format!("cannot write {}: {e}", path.display()))
                    })?;
                    let frame = parse_frame(&text)?;
                    let input = Input {
                        source: path.display().to_string(),
                        sha256: sha256_hex(text.as_bytes()),
                    };
                    let mut r = new_report(args, input, &pol);
                    r.results
                        .push("ambient_dim", Value::Int(frame.ambient_dim() as u64));
                    r.results.push("count", Value::Int(frame.len() as u64));
                    Ok(Output::Report(r))
                }
            }
        }
        Command::Decay {
            family,
            n_from,
            n_to,
            budget,
        } => {
            let fam = match family {
                FamilyArg::Paper => DecayFamily::Paper,
                FamilyArg::Onb => DecayFamily::Onb,
                FamilyArg::DuplicatedOnb => DecayFamily::DuplicatedOnb,
            };
            let range: RangeInclusive<usize> = *n_from..=*n_to;
            let rows = common_bound_decay(fam, range, &pol, *budget)?;
            let description = format!("{family:?} n={n_from}..={n_to}").to_lowercase();
            let input = Input {
                sha256: sha256_hex(description.as_bytes()),
                source: format!("generator {description}"),
            };
            let mut r = new_report(args, input, &pol);
            let mut table_rows = Vec::new();
            for row in &rows {
                let frame = fam.generate(row.n)?;
                let w = witness(&frame, "witness", &row.certificate.witness);
                let idx: Vec<String> = w.indices.iter().map(usize::to_string).collect();
                table_rows.push(vec![
                    Value::Int(row.n as u64),
                    Value::Num(row.certificate.constant),
                    Value::Num(0.25f64.powi(row.n as i32)),
                    Value::Text(format!("{:?}", row.certificate.method).to_lowercase()),
                    Value::Text(format!("{{{}}}", idx.join(","))),
                ]);
            }
            r.results.push("rows", Value::Int(rows.len() as u64));
            r.tables.push(Table {
                name: "decay".into(),
                columns: ["n", "constant", "4^-n", "method", "witness"]
                    .map(String::from)
                    .to_vec(),
                rows: table_rows,
            });
            r.tolerances.push("budget", Value::Int(*budget));
            Ok(Output::Report(r))
        }
    }
}

fn push_sign_sup(results: &mut Entries, s: &SignSup) {
    results.push("sign_sup_lower", Value::Num(s.lower));
    results.push("sign_sup_upper", Value::Num(s.upper));
    results.push("sign_sup_method", Value::Text(method_name(s.method).into()));
}

/// The `results` section of `analyze`.
pub fn analyze_frame(frame: &Frame, pol: &TolerancePolicy) -> CliResult<Entries> {
    let spectrum = frame.spectrum(pol)?;
    let bounds = frame.frame_bounds(pol)?;
    let riesz = frame.riesz_check(pol)?;
    let mut e = Entries::default();
    e.push("ambient_dim", Value::Int(frame.ambient_dim() as u64));
    e.push("count", Value::Int(frame.len() as u64));
    e.push("rank", Value::Int(bounds.span_rank as u64));
    e.push("spectrum", Value::Nums(spectrum.values.clone()));
    e.push("lower_bound", Value::Num(bounds.lower));
    e.push("upper_bound", Value::Num(bounds.upper));
    e.push("condition", Value::Num(bounds.condition()));
    e.push("excess", Value::Int(frame.excess(pol)? as u64));
    e.push("is_riesz_basis", Value::Bool(riesz.is_riesz_basis));
    e.push("gram_lower", Value::Num(riesz.gram_lower));
    e.push("gram_upper", Value::Num(riesz.gram_upper));
    Ok(e)
}

/// The frame a `gallery` invocation generates, and its file text.
pub fn gallery_frame(g: &GalleryArgs) -> CliResult<(Frame, String)> {
    let (frame, header) = match g.kind {
        GalleryKind::Paper => {
            let n = g.n.unwrap_or(4);
            (paper_example(n)?, format!("paper example n={n}"))
        }
        GalleryKind::Onb => {
            let d = g.n.unwrap_or(3);
            (
                standard_frame(StandardKind::Onb, d)?,
                format!("orthonormal basis d={d}"),
            )
        }
        GalleryKind::Mercedes => {
            let d = g.n.unwrap_or(2);
            (
                standard_frame(StandardKind::Mercedes, d)?,
                "mercedes frame".to_string(),
            )
        }
        GalleryKind::DuplicatedOnb => {
            let d = g.n.unwrap_or(2);
            (
                standard_frame(StandardKind::DuplicatedOnb, d)?,
                format!("duplicated orthonormal basis d={d}"),
            )
        }
        GalleryKind::Random => {
            let d = g.n.unwrap_or(3);
            let count = g.count.unwrap_or(2 * d);
            let mut header = format!("random frame d={d} count={count} seed={}", g.seed);
            if let Some(k) = g.condition {
                header.push_str(&format!(" condition={}", fmt_num(k)));
            }
            (random_frame(d, count, g.seed, g.condition)?, header)
        }
    };
    let text = format_frame(&frame, &[header]);
    Ok((frame, text))
}
