//! Command-line front end: operator parsing and printing, verification
//! suites and constructions, and their reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or a
//! construction differs from the transcription, and 2 on usage errors.

pub mod checks;
pub mod parse;
pub mod print;
pub mod report;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::exact::parse_rational;
use checks::{EpsMode, Settings};
pub use parse::parse_op;
pub use print::{print_op, Format};
use report::{Inputs, Outcome, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "commuting-ops", version, about = "Construct and verify a rank-3 commuting pair of differential operators")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// `symbolic`, or a rational value substituted for eps.
    #[arg(long, global = true, default_value = "symbolic", allow_hyphen_values = true, value_parser = parse_eps)]
    pub eps: EpsMode,
    /// Decimal digits for the numeric suite.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u32).range(25..=2000))]
    pub precision: u32,
    /// Series truncation order in z.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(8..=64))]
    pub order: u64,
    /// x-exponent window `lo..hi` for the commutant ansatz.
    #[arg(long, global = true, default_value = "-16..28", allow_hyphen_values = true, value_parser = parse_window)]
    pub window: RangeInclusive<i32>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Seed for the randomized spot checks.
    #[arg(long, global = true, default_value_t = checks::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites.
    Verify {
        suite: Suite,
        /// Sample points for the kn suite.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=21))]
        points: u64,
    },
    /// Re-derive an object and compare it with the transcription.
    Construct {
        target: Target,
        /// Artifact path; defaults to `<target>.op` (`bc.txt` for bc).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in operator or one read from a file.
    Print {
        /// `l1`, `l2`, `cal-l`, `l2-mu`, or a path to an operator file.
        operator: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Commute,
    Bc,
    Limit,
    Rank,
    Kn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    L1,
    L2,
    Bc,
}

fn parse_eps(s: &str) -> Result<EpsMode, String> {
    if s == "symbolic" {
        return Ok(EpsMode::Symbolic);
    }
    parse_rational(s).map(EpsMode::Value).ok_or_else(|| format!("expected `symbolic` or a rational, got `{s}`"))
}

fn parse_window(s: &str) -> Result<RangeInclusive<i32>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo: i32 = lo.trim().parse().map_err(|e| format!("bad window start: {e}"))?;
    let hi: i32 = hi.trim().parse().map_err(|e| format!("bad window end: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

impl GlobalOpts {
    fn settings(&self, points: usize) -> Settings {
        Settings {
            eps: self.eps.clone(),
            precision: self.precision,
            order: self.order as usize,
            window: self.window.clone(),
            seed: self.seed,
            points,
        }
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Commute => "commute",
        Suite::Bc => "bc",
        Suite::Limit => "limit",
        Suite::Rank => "rank",
        Suite::Kn => "kn",
    }
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::L1 => "l1",
        Target::L2 => "l2",
        Target::Bc => "bc",
    }
}

/// Runs a verification suite.
pub fn cmd_verify(suite: Suite, global: &GlobalOpts, points: usize) -> Report {
    verify_with(suite, &global.settings(points))
}

fn inputs_of(s: &Settings, points: Option<usize>, target: Option<String>) -> Inputs {
    Inputs {
        eps: s.eps.label(),
        precision: s.precision,
        order: s.order,
        window: [*s.window.start(), *s.window.end()],
        seed: s.seed,
        points,
        target,
    }
}

/// [`cmd_verify`] with explicit settings.
pub fn verify_with(suite: Suite, s: &Settings) -> Report {
    let mut checks = Vec::new();
    let wants = |x: Suite| suite == Suite::All || suite == x;
    if wants(Suite::Commute) {
        checks.extend(checks::commute_checks(s));
    }
    if wants(Suite::Limit) {
        checks.extend(checks::limit_checks());
    }
    if wants(Suite::Rank) {
        checks.extend(checks::rank_checks(s));
    }
    if wants(Suite::Bc) {
        checks.extend(checks::bc_checks(s));
    }
    if wants(Suite::Kn) {
        checks.extend(checks::kn_checks(s));
    }
    let pts = wants(Suite::Kn).then_some(s.points);
    Report::new(&format!("verify {}", suite_name(suite)), inputs_of(s, pts, None), checks)
}

/// Runs a construction. The artifact text is returned alongside the report.
pub fn cmd_construct(target: Target, global: &GlobalOpts) -> (Report, Option<String>) {
    let s = global.settings(0);
    let c = match target {
        Target::L1 => checks::construct_l1(&s),
        Target::L2 => checks::construct_l2(&s),
        Target::Bc => checks::construct_bc(&s),
    };
    let name = target_name(target);
    let mut report = Report::new(&format!("construct {name}"), inputs_of(&s, None, Some(name.into())), c.checks);
    let only_transcription = report.checks.iter().filter(|k| !k.passed).all(|k| c.transcription_checks.contains(&k.name));
    if report.outcome == Outcome::Fail && only_transcription && c.artifact.is_some() {
        report.outcome = Outcome::Finding;
    }
    (report, c.artifact)
}

/// Loads a built-in operator by name or parses a file.
pub fn load_operator(name: &str) -> crate::Result<crate::diffop::DiffOp<crate::exact::XLaurent>> {
    use crate::opdata::*;
    Ok(match name {
        "l1" => make_l1(),
        "l2" => make_l2(),
        "cal-l" => make_cal_l(),
        "l2-mu" => make_l2_mu(),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| crate::Error::InvalidArgument(format!("cannot read `{path}`: {e}")))?;
            parse_op(&text)?
        }
    })
}

fn emit(report: &mut Report, started: Instant, json: Option<&PathBuf>) -> i32 {
    report.wall_time_seconds = started.elapsed().as_secs_f64();
    match json.map(|p| p.to_string_lossy().into_owned()) {
        Some(p) if p == "-" => print!("{}", report.to_json()),
        Some(p) => {
            print!("{}", report.human());
            if let Err(e) = std::fs::write(&p, report.to_json()) {
                eprintln!("error: cannot write `{p}`: {e}");
                return EXIT_USAGE;
            }
        }
        None => print!("{}", report.human()),
    }
    report.outcome.exit_code()
}

/// Runs the parsed command and returns the exit status.
pub fn execute(cli: Cli) -> i32 {
    let started = Instant::now();
    let g = &cli.global;
    match cli.command {
        Command::Verify { suite, points } => {
            if matches!(suite, Suite::Kn | Suite::All) {
                if let Err(e) = checks::validate_numeric_eps(&g.eps) {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
            let mut report = cmd_verify(suite, g, points as usize);
            emit(&mut report, started, g.json.as_ref())
        }
        Command::Construct { target, out } => {
            let (mut report, artifact) = cmd_construct(target, g);
            if let Some(text) = artifact {
                let default = if target == Target::Bc { "bc.txt".to_string() } else { format!("{}.op", target_name(target)) };
                let path = out.unwrap_or_else(|| PathBuf::from(default));
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: cannot write `{}`: {e}", path.display());
                    return EXIT_USAGE;
                }
                report.artifact = Some(path.display().to_string());
            }
            emit(&mut report, started, g.json.as_ref())
        }
        Command::Print { operator, format } => match load_operator(&operator) {
            Ok(op) => {
                let op = match &g.eps {
                    EpsMode::Symbolic => op,
                    EpsMode::Value(v) => op.specialize_eps(v),
                };
                println!("{}", print_op(&op, format));
                EXIT_PASS
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
    }
}

/// Parses `args` (program name first) and runs; usage errors exit 2.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
