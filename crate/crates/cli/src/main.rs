use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qpbasis_core::characters::{compute, Formula};
use qpbasis_core::qp_enum::{enumerate_census_with, Listing, DEFAULT_LIST_GUARD};
use qpbasis_core::verify::{parse_manifest, reports_to_json, run_suite, suite_passed, ManifestRow, RowMode, Status};
use qpbasis_core::{build_root_system, AlgebraSpec, EngineError, Family, RootSystemData, WeightSpec};

#[derive(Parser, Debug)]
#[command(name = "qpbasis", version, about = "Quasi-particle bases, character formulas and exact identity checks")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "QPBASIS_THREADS")]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// TOML file with defaults for the global options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cartan matrix, labels and positive roots.
    Roots(AlgebraArgs),
    /// A character series.
    Char(CharArgs),
    /// Counts (and optionally lists) basis monomials.
    Census(CensusArgs),
    /// Runs identity and basis checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct AlgebraArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Debug, Clone)]
struct WeightArgs {
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Level `k` for standard and alt-e modes.
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    k0: Option<u32>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    kj: Option<u32>,
}

#[derive(Args, Debug)]
struct CharArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, value_parser = parse_formula)]
    formula: Formula,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    max_q: u32,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    max_q: u32,
    /// Include the monomial listing when at most this many monomials.
    #[arg(long)]
    list_guard: Option<usize>,
    /// List monomials regardless of the guard.
    #[arg(long)]
    force_list: bool,
    /// Never list monomials.
    #[arg(long, conflicts_with = "force_list")]
    no_list: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// JSON manifest of rows; replaces the inline row options.
    #[arg(long, conflicts_with_all = ["family", "rank", "max_q"])]
    manifest: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    rank: Option<usize>,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    max_q: Option<u32>,
    /// Leave one positive root out of the product side.
    #[arg(long)]
    drop_root: Option<usize>,
    /// Record wall-clock time per row (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Identity,
    Verma,
    Standard,
    Rectangular,
    AltE,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    threads: Option<usize>,
    format: Option<Format>,
    output: Option<PathBuf>,
    list_guard: Option<usize>,
}

fn parse_formula(s: &str) -> Result<Formula, String> {
    s.parse().map_err(|e: EngineError| e.to_string())
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.threads);
    let format = cli.format.or(file.format).unwrap_or(Format::Json);
    let output = cli.output.clone().or(file.output.clone());
    if let Some(n) = threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let (text, code) = match cli.command {
        Command::Roots(a) => (cmd_roots(&a, format)?, ExitCode::SUCCESS),
        Command::Char(a) => (cmd_char(&a, format)?, ExitCode::SUCCESS),
        Command::Census(a) => (cmd_census(&a, format, file.list_guard)?, ExitCode::SUCCESS),
        Command::Verify(a) => cmd_verify(&a, format)?,
    };
    emit(&text, output.as_deref())?;
    Ok(code)
}

fn load_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn root_system(a: &AlgebraArgs) -> Result<RootSystemData, Failure> {
    Ok(build_root_system(AlgebraSpec::new(a.family, a.rank)?)?)
}

fn weight(w: &WeightArgs, default: Mode) -> Result<Option<WeightSpec>, Failure> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| usage(format!("this mode needs --{flag}")));
    Ok(match w.mode.unwrap_or(default) {
        Mode::Identity => None,
        Mode::Verma => Some(WeightSpec::GenericVerma),
        Mode::Standard => Some(WeightSpec::Standard { k: need(w.level, "level")? }),
        Mode::AltE => Some(WeightSpec::AltE { k: need(w.level, "level")? }),
        Mode::Rectangular => Some(WeightSpec::Rectangular {
            k0: need(w.k0, "k0")?,
            j: w.j.ok_or_else(|| usage("this mode needs --j"))?,
            kj: need(w.kj, "kj")?,
        }),
    })
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn cmd_roots(a: &AlgebraArgs, format: Format) -> Result<String, Failure> {
    let rs = root_system(a)?;
    Ok(match format {
        Format::Json => with_newline(rs.to_json()),
        Format::Csv => {
            let mut out = (1..=rs.rank()).map(|i| format!("a{i}")).collect::<Vec<_>>().join(",");
            out.push_str(",height\n");
            for r in &rs.positive_roots {
                let cells: Vec<String> = r.iter().map(u32::to_string).collect();
                out.push_str(&format!("{},{}\n", cells.join(","), r.iter().sum::<u32>()));
            }
            out
        }
        Format::Text => {
            let mut out = format!("{}: {} positive roots\n", rs.spec, rs.positive_roots.len());
            out.push_str(&format!("nu: {:?}\n", rs.nu));
            out.push_str(&format!("i': {:?}\n", rs.i_prime));
            out.push_str(&format!("mu: {:?}\n", rs.mu));
            out.push_str(&format!("highest root: {:?}\n", rs.highest_root));
            out.push_str(&format!("level-one nodes: {:?}\n", rs.level_one_nodes));
            for row in &rs.cartan {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            out
        }
    })
}

fn cmd_char(a: &CharArgs, format: Format) -> Result<String, Failure> {
    let rs = root_system(&a.algebra)?;
    let default = match a.formula {
        Formula::LSum => Mode::Standard,
        Formula::RectSum => Mode::Rectangular,
        Formula::Census => Mode::Verma,
        _ => Mode::Identity,
    };
    let w = weight(&a.weight, default)?;
    let out = compute(&rs, a.formula, w, a.max_q)?;
    Ok(match format {
        Format::Json => with_newline(out.to_json()),
        Format::Csv => out.series.to_csv(),
        Format::Text => with_newline(out.series.to_text()),
    })
}

fn cmd_census(a: &CensusArgs, format: Format, file_guard: Option<usize>) -> Result<String, Failure> {
    let rs = root_system(&a.algebra)?;
    let w = weight(&a.weight, Mode::Verma)?.ok_or_else(|| usage("census needs a weight mode, not identity"))?;
    let listing = if a.no_list {
        Listing::Off
    } else if a.force_list {
        Listing::Forced
    } else {
        Listing::Guarded(a.list_guard.or(file_guard).unwrap_or(DEFAULT_LIST_GUARD))
    };
    let census = enumerate_census_with(&rs, &w, a.max_q, listing)?;
    Ok(match format {
        Format::Json => with_newline(census.to_json()),
        Format::Csv => {
            let mut out = String::from("q,color_type,count\n");
            for (k, c) in census.counts.iter() {
                let ct: Vec<String> = k.y.iter().map(u32::to_string).collect();
                out.push_str(&format!("{},{},{c}\n", k.q, ct.join(" ")));
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} {} M={}: {} monomials\n", census.spec, census.mode, census.truncation, census.total());
            for (k, c) in census.counts.iter() {
                out.push_str(&format!("q^{} {:?}: {c}\n", k.q, k.y.as_slice()));
            }
            if let Some(list) = &census.monomials {
                for m in list {
                    let parts: Vec<String> = m
                        .particles()
                        .map(|p| format!("x_{}a{}({})", p.charge, p.color, p.mode))
                        .collect();
                    out.push_str(&format!("{}\n", if parts.is_empty() { "1".into() } else { parts.join(" ") }));
                }
            }
            out
        }
    })
}

fn row_mode(m: Mode) -> RowMode {
    match m {
        Mode::Identity => RowMode::Identity,
        Mode::Verma => RowMode::Verma,
        Mode::Standard => RowMode::Standard,
        Mode::Rectangular => RowMode::Rectangular,
        Mode::AltE => RowMode::AltE,
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format) -> Result<(String, ExitCode), Failure> {
    let rows = match &a.manifest {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_manifest(&text)?
        }
        None => {
            let family = a.family.ok_or_else(|| usage("verify needs --manifest or --family/--rank/--max-q"))?;
            let rank = a.rank.ok_or_else(|| usage("verify needs --rank"))?;
            let truncation = a.max_q.ok_or_else(|| usage("verify needs --max-q"))?;
            let row = ManifestRow {
                family,
                rank,
                mode: row_mode(a.weight.mode.unwrap_or(Mode::Identity)),
                k: a.weight.level,
                k0: a.weight.k0,
                j: a.weight.j,
                kj: a.weight.kj,
                truncation,
                drop_root: a.drop_root,
            };
            row.validate()?;
            vec![row]
        }
    };
    let reports = run_suite(&rows, a.timing);
    let code = if suite_passed(&reports) { ExitCode::SUCCESS } else { ExitCode::from(1) };
    let text = match format {
        Format::Json => with_newline(reports_to_json(&reports)),
        Format::Csv => {
            let mut out = String::from("task,status,mismatch_q,mismatch_y,lhs,rhs\n");
            for r in &reports {
                let (q, y, l, rh) = match &r.first_mismatch {
                    Some(m) => {
                        let y: Vec<String> = m.y.iter().map(u32::to_string).collect();
                        (m.q.to_string(), y.join(" "), m.lhs.clone(), m.rhs.clone())
                    }
                    None => Default::default(),
                };
                out.push_str(&format!("{},{},{q},{y},{l},{rh}\n", r.task, status_name(r.status)));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("{:<10} {}", status_name(r.status), r.task));
                if let Some(m) = &r.first_mismatch {
                    out.push_str(&format!(
                        "  first mismatch at q^{} y^{:?}: {} {} vs {} {}",
                        m.q, m.y, m.lhs_formula, m.lhs, m.rhs_formula, m.rhs
                    ));
                }
                if let Some(e) = &r.error {
                    out.push_str(&format!("  {e}"));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok((text, code))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::Mismatch => "mismatch",
        Status::Aborted => "aborted",
    }
}
