mod commands;
mod mvf;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metord::rational::parse_rat;
use metord::Rational;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "metord", version, about = "Finite metric linear and cyclic orders with exact rationals")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Append the elapsed wall time to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Accept structures above the default point cap.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a defect checker and the matching axiom file on a structure.
    Check(CheckArgs),
    /// Generate a random structure that passes its kind's checks.
    Gen(GenArgs),
    /// Build an ε-correlation between two metric linear orders.
    Correlate(CorrelateArgs),
    /// Split a predicate into nondecreasing parts and a residual.
    Decompose(DecomposeArgs),
    /// Approximate a predicate by a quantifier-free formula.
    Synth(SynthArgs),
    /// Evaluate a continuous-logic formula on a structure.
    Eval(EvalArgs),
    /// Valued-field sandbox.
    #[command(subcommand)]
    Mvf(MvfCommand),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub structure: PathBuf,
    /// One of mlo, um, ulo, mco, or a path to an axiom file.
    pub theory: String,
    #[arg(long, default_value = "0/1", value_parser = rational)]
    pub tol: Rational,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Ulo,
    UsSample,
    Cyclic,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// For us-sample: redraw every support value below this key, giving a
    /// sample within this ε of the unperturbed one.
    #[arg(long, value_parser = rational, requires = "perturb_seed")]
    pub perturb: Option<Rational>,
    #[arg(long)]
    pub perturb_seed: Option<u64>,
    /// Write the structure here and print a report instead of the structure.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorrelateArgs {
    pub m: PathBuf,
    pub n: PathBuf,
    #[arg(long, value_parser = rational)]
    pub eps: Rational,
    /// A seed pair `a:b` of point names in M and N; repeatable.
    #[arg(long = "seed", value_parser = seed_pair)]
    pub seeds: Vec<(String, String)>,
    /// Ignore the order and bound only the metric distortion.
    #[arg(long)]
    pub unordered: bool,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub structure: PathBuf,
    pub predicate: PathBuf,
    #[arg(long)]
    pub m: usize,
    /// Also check the partition bound at this ε.
    #[arg(long, value_parser = rational)]
    pub eps: Option<Rational>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Gap,
    Interpolate,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    pub structure: PathBuf,
    pub predicate: PathBuf,
    #[arg(long, value_parser = rational)]
    pub eps: Rational,
    #[arg(long, value_enum, default_value = "gap")]
    pub mode: Mode,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    pub structure: PathBuf,
    /// Formula text; at most one free variable.
    pub formula: String,
    /// Modulus table for `mod(NAME, ...)` subformulas.
    #[arg(long)]
    pub mods: Option<PathBuf>,
    /// Fail unless every value is at most this.
    #[arg(long, value_parser = rational)]
    pub tol: Option<Rational>,
}

#[derive(Subcommand, Debug)]
pub enum MvfCommand {
    /// The divisibility predicate D(x,y).
    Dpred {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Export the value order of the given series as a metric linear order.
    Valorder {
        #[arg(required = true, allow_hyphen_values = true)]
        series: Vec<String>,
    },
    /// Distance between two points of the projective line.
    Projdist { p: String, q: String },
    /// The cyclic-order predicate and its distance on three points.
    Ceq { p: String, q: String, r: String },
    /// A point between p and q at the given distance exponent from p.
    Density {
        p: String,
        q: String,
        #[arg(value_parser = rational)]
        target: Rational,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn seed_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(':') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.into(), b.into())),
        _ => Err(format!("expected `a:b`, got `{s}`")),
    }
}

/// How a command ended when it produced no report.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable files, or malformed input: exit 2.
    Usage(String),
    /// Input was well formed but the computation was refused: exit 1.
    Refused(String),
}

impl From<metord::Error> for Failure {
    fn from(e: metord::Error) -> Self {
        match e {
            metord::Error::Parse(_) | metord::Error::Syntax(_) | metord::Error::TooLarge { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Refused(e.to_string()),
        }
    }
}

pub type Outcome = Result<Output, Failure>;

/// What a command prints on success.
pub enum Output {
    Report(Report),
    Raw(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let large = cli.allow_large;
    let result = match cli.command {
        Command::Check(a) => commands::check(command, &a, large),
        Command::Gen(a) => commands::gen(command, &a),
        Command::Correlate(a) => commands::correlate(command, &a, large),
        Command::Decompose(a) => commands::decompose(command, &a, large),
        Command::Synth(a) => commands::synth(command, &a, large),
        Command::Eval(a) => commands::eval(command, &a, large),
        Command::Mvf(c) => mvf::run(command, &c),
    };
    match result {
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(mut r)) => {
            if cli.timing {
                r.elapsed_ms = Some(start.elapsed().as_millis());
            }
            print!("{}", if cli.json { r.render_json() } else { r.render_text() });
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
