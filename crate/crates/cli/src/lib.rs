//! The `smtc` command-line driver: parse, abstract, compile, then count,
//! enumerate, validate or export.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use smtc_core::abstraction::{boolean_abstract, to_cnf};
use smtc_core::compiler::{compile, CompileConfig, Heuristic, Mode, Stats};
use smtc_core::ddnnf::{
    condense, count, enumerate, export_nnf, import_nnf, validate, weighted_count, DdnnfGraph, ValidationLevel,
    WeightMap, DEFAULT_THEORY_BOUND,
};
use smtc_core::frontend::{parse_rational, parse_smt2};
use smtc_core::oracle::brute_counts;
use smtc_core::Literal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "smtc", version, about = "Knowledge compiler for QF_LRA formulas into d-DNNF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a formula and write `<out>.nnf` plus an `.atoms` sidecar.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        opts: CompileOpts,
    },
    /// Count the models of a formula or of a compiled graph.
    Count {
        input: Option<PathBuf>,
        #[arg(long, requires = "atoms", conflicts_with = "input")]
        nnf: Option<PathBuf>,
        #[arg(long, requires = "nnf")]
        atoms: Option<PathBuf>,
        /// Literal weights, one `<signed-var> <p/q>` per line.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        opts: CompileOpts,
    },
    /// List models of a formula, one per line as signed atom ids.
    Enumerate {
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        max: usize,
        #[command(flatten)]
        opts: CompileOpts,
    },
    /// Validate a compiled graph.
    Check {
        #[arg(long)]
        nnf: PathBuf,
        #[arg(long)]
        atoms: PathBuf,
        /// Also check every captured assignment against the theory.
        #[arg(long)]
        theory: bool,
    },
    /// Print brute-force agnostic and aware model counts.
    Oracle { input: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Lazy,
    Eager,
    Agnostic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HeuristicArg {
    Dlcs,
    Fixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatsFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct CompileOpts {
    #[arg(long, value_enum, default_value = "lazy")]
    mode: ModeArg,
    #[arg(long)]
    eager_k: Option<usize>,
    #[arg(long)]
    no_components: bool,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    no_learning: bool,
    #[arg(long, value_enum, default_value = "dlcs")]
    heuristic: HeuristicArg,
    #[arg(long)]
    prop_budget: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print compilation statistics (always printed by `compile`).
    #[arg(long, value_enum)]
    stats: Option<StatsFormat>,
    /// Drop theory-implied literals from the exported graph.
    #[arg(long)]
    condense: bool,
}

impl CompileOpts {
    fn config(&self) -> CompileConfig {
        CompileConfig {
            mode: match self.mode {
                ModeArg::Lazy => Mode::Lazy,
                ModeArg::Eager => Mode::Eager,
                ModeArg::Agnostic => Mode::Agnostic,
            },
            components: !self.no_components,
            cache: !self.no_cache,
            learning: !self.no_learning,
            propagation_budget: self.prop_budget,
            heuristic: match self.heuristic {
                HeuristicArg::Dlcs => Heuristic::Dlcs,
                HeuristicArg::Fixed => Heuristic::FixedOrder,
            },
            condense_output: self.condense,
            random_seed: self.seed,
            eager_k: self.eager_k,
            audit_cache: false,
        }
    }
}

/// A failure with its exit code.
struct Failure(i32, String);

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn compile_file(path: &Path, cfg: &CompileConfig) -> Result<(DdnnfGraph, Stats), Failure> {
    let f = parse_smt2(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let (p, map) = boolean_abstract(&f);
    Ok(compile(&to_cnf(&p), &map, cfg))
}

fn stats_json(s: &Stats) -> Value {
    let mut m = Map::new();
    for (k, v) in s.counters() {
        m.insert(k.into(), v.into());
    }
    m.insert("wall_ms".into(), s.wall_ms.into());
    Value::Object(m)
}

fn print_stats(out: &mut dyn Write, s: &Stats, format: StatsFormat) -> std::io::Result<()> {
    match format {
        StatsFormat::Text => write!(out, "{s}"),
        StatsFormat::Json => writeln!(out, "{}", stats_json(s)),
    }
}

/// Parses a weights file: `<signed-var> <p/q>` per line; blank lines and
/// lines starting with `c` or `#` are skipped.
fn parse_weights(text: &str) -> Result<WeightMap, String> {
    let mut w = WeightMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
            continue;
        }
        let bad = |m: &str| format!("weights line {}: {m}", i + 1);
        let mut toks = line.split_whitespace();
        let (Some(lit), Some(val), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(bad("expected `<signed-var> <p/q>`"));
        };
        let lit = lit.parse().ok().and_then(Literal::from_dimacs).ok_or_else(|| bad("bad literal"))?;
        let val = parse_rational(val).map_err(|m| bad(&m))?;
        w.set(lit, val).map_err(|e| bad(&e.to_string()))?;
    }
    Ok(w)
}

fn sidecar(nnf: &Path) -> PathBuf {
    nnf.with_extension("atoms")
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure(EXIT_INPUT, e.to_string());
    match cli.command {
        Command::Compile { input, output, opts } => {
            let (g, stats) = compile_file(&input, &opts.config())?;
            let g = if opts.condense { condense(&g).map_err(input_err)? } else { g };
            let (nnf, atoms) = export_nnf(&g);
            write_file(&output, &nnf)?;
            write_file(&sidecar(&output), &atoms)?;
            print_stats(out, &stats, opts.stats.unwrap_or(StatsFormat::Text)).map_err(io)?;
        }
        Command::Count { input, nnf, atoms, weights, opts } => {
            let (g, stats) = match (input, nnf, atoms) {
                (Some(input), None, None) => {
                    let (g, s) = compile_file(&input, &opts.config())?;
                    (g, Some(s))
                }
                (None, Some(nnf), Some(atoms)) => {
                    let (g, _) = import_nnf(&read(&nnf)?, &read(&atoms)?).map_err(input_err)?;
                    (g, None)
                }
                _ => return Err(Failure(EXIT_USAGE, "give an input formula or --nnf with --atoms".into())),
            };
            match weights {
                Some(path) => {
                    let w = parse_weights(&read(&path)?).map_err(input_err)?;
                    writeln!(out, "{}", weighted_count(&g, &w).map_err(input_err)?).map_err(io)?;
                }
                None => writeln!(out, "{}", count(&g).map_err(input_err)?).map_err(io)?,
            }
            if let (Some(format), Some(s)) = (opts.stats, stats) {
                print_stats(out, &s, format).map_err(io)?;
            }
        }
        Command::Enumerate { input, max, opts } => {
            let (g, stats) = compile_file(&input, &opts.config())?;
            for m in enumerate(&g, max).map_err(input_err)? {
                let line: Vec<String> = m.iter().map(|l| l.to_dimacs().to_string()).collect();
                writeln!(out, "{}", line.join(" ")).map_err(io)?;
            }
            if let Some(format) = opts.stats {
                print_stats(out, &stats, format).map_err(io)?;
            }
        }
        Command::Check { nnf, atoms, theory } => {
            let (g, _) = import_nnf(&read(&nnf)?, &read(&atoms)?).map_err(input_err)?;
            let level = if theory { ValidationLevel::Theory } else { ValidationLevel::Structural };
            let report = validate(&g, level, DEFAULT_THEORY_BOUND);
            for v in &report.violations {
                writeln!(out, "{v}").map_err(io)?;
            }
            if let Some(n) = &report.theory_skipped {
                writeln!(out, "theory check skipped: {n} assignments exceed {DEFAULT_THEORY_BOUND}").map_err(io)?;
            }
            writeln!(out, "{} violations", report.violations.len()).map_err(io)?;
            if !report.is_ok() {
                return Ok(EXIT_INVALID);
            }
        }
        Command::Oracle { input } => {
            let f = parse_smt2(&read(&input)?).map_err(|e| input_err(format!("{}: {e}", input.display())))?;
            let (agnostic, aware) = brute_counts(&f).map_err(input_err)?;
            writeln!(out, "agnostic {agnostic}\naware {aware}").map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the driver on `args` (including the program name). Results go to
/// `out`, diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
