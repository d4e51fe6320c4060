//! The `ultrashift` command line.
//!
//! Exit codes: 0 success or membership true, 1 membership false, 2 usage or
//! parse error, 3 `obstruct` found the shifts not conjugate, 4 the operation
//! itself failed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::invariants::obstruction_with;
use crate::ktheory::{boundary_matrix, k_groups, KOptions};
use crate::partialaction::{GroupWord, PartialAction};
use crate::presentation::{parse_presentation, render_presentation};
use crate::shiftspace::{
    edge_shift_forbidden_set, enumerate_paths, in_xf, shift, ultragraph_from_one_step, EdgeShift, ForbiddenSet,
    ForbiddenVerdict, Word,
};
use crate::ultragraph::Ultragraph;
use crate::vertexset::Universe;
use crate::Index;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONJUGATE: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ultrashift", version, about = "Ultragraph edge shifts, partial actions and K-theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classification and hypothesis report
    Info { file: PathBuf },
    /// Parse and validate a presentation
    Validate { file: PathBuf },
    /// K0 and K1 of the ultragraph C*-algebra
    Ktheory {
        file: PathBuf,
        /// Print the boundary matrix of the accepted truncation
        #[arg(long)]
        emit_matrix: bool,
        /// Largest truncation to try
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
    /// Membership of a word in the edge shift
    Member { file: PathBuf, word: String },
    /// Membership of a word in X_F
    XfMember {
        #[arg(long)]
        forbid: PathBuf,
        /// `infinite` or `finite(N)`
        #[arg(long, default_value = "infinite")]
        alphabet: String,
        word: String,
    },
    /// Apply the shift map
    Shift { word: String },
    /// Apply θ_g of the partial action
    Theta { file: PathBuf, group_word: String, word: String },
    /// Presentation of the edge shift equal to a one-step X_F
    FromForbidden { file: PathBuf },
    /// Forbidden pairs of the edge shift
    Forbidden { file: PathBuf },
    /// Conjugacy-obstruction report
    Obstruct {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
    /// Paths of a given length over edges up to an index
    Paths {
        file: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        max_edge: Index,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(code: i32, err: &Error) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

/// Input errors exit with 2, failures of the operation with 4.
enum Failure {
    Input(Error),
    Operation(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Operation(e)
    }
}

trait InputResult<T> {
    fn input(self) -> std::result::Result<T, Failure>;
}

impl<T> InputResult<T> for Result<T> {
    fn input(self) -> std::result::Result<T, Failure> {
        self.map_err(Failure::Input)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Ultragraph> {
    parse_presentation(&read(path)?).map_err(|e| Error::File { path: path.display().to_string(), source: Box::new(e) })
}

fn parse_alphabet(text: &str) -> Result<Universe> {
    if text == "infinite" {
        return Ok(Universe::POSITIVE);
    }
    text.strip_prefix("finite(")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|n| n.trim().parse().ok())
        .map(Universe::first_n)
        .ok_or_else(|| Error::Usage(format!("alphabet must be `infinite` or `finite(N)`, got `{text}`")))
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(Failure::Input(e)) => Outcome::error(EXIT_USAGE, &e),
        Err(Failure::Operation(e)) => Outcome::error(EXIT_FAILED, &e),
    }
}

fn dispatch(command: Command) -> std::result::Result<Outcome, Failure> {
    let mut out = String::new();
    match command {
        Command::Info { file } => {
            let g = load(&file).input()?;
            info(&g, &mut out)?;
        }
        Command::Validate { file } => {
            let g = load(&file).input()?;
            let eligible = g.validate_hypotheses().eligible();
            writeln!(out, "valid").unwrap();
            writeln!(out, "eligible (H1-H4): {eligible}").unwrap();
        }
        Command::Ktheory { file, emit_matrix, n_max } => {
            let g = load(&file).input()?;
            let k = k_groups::<BigInt>(&g, KOptions { n_start: 2, n_max })?;
            if emit_matrix {
                let b = boundary_matrix::<BigInt>(&g, k.n)?;
                writeln!(out, "boundary matrix (n = {}, rows: regular tracked vertices)", k.n).unwrap();
                if b.matrix.rows() == 0 {
                    writeln!(out, "(no rows; columns {})", b.tracked.labels().join(" ")).unwrap();
                } else {
                    out.push_str(&b.matrix.to_string());
                }
            }
            writeln!(out, "K0 = {}", k.k0).unwrap();
            writeln!(out, "K1 = {}", k.k1).unwrap();
        }
        Command::Member { file, word } => {
            let g = load(&file).input()?;
            let x = Word::parse(&word).input()?;
            let m = EdgeShift::new(&g)?.membership(&x)?;
            writeln!(out, "{m}").unwrap();
            return Ok(Outcome::with_code(if m.is_member() { EXIT_OK } else { EXIT_FALSE }, out));
        }
        Command::XfMember { forbid, alphabet, word } => {
            let f = ForbiddenSet::parse(&read(&forbid).input()?).input()?;
            let alphabet = parse_alphabet(&alphabet).input()?;
            let x = Word::parse(&word).input()?;
            let member = in_xf(&f, &alphabet, &x).input()?;
            writeln!(out, "{}", if member { "member" } else { "not a member" }).unwrap();
            return Ok(Outcome::with_code(if member { EXIT_OK } else { EXIT_FALSE }, out));
        }
        Command::Shift { word } => {
            let x = Word::parse(&word).input()?;
            writeln!(out, "{}", shift(&x)).unwrap();
        }
        Command::Theta { file, group_word, word } => {
            let g = load(&file).input()?;
            let w = GroupWord::parse(&group_word).input()?;
            let x = Word::parse(&word).input()?;
            let action = PartialAction::new(&g)?;
            writeln!(out, "{}", action.theta(&w, &x)?).unwrap();
        }
        Command::FromForbidden { file } => {
            let f = ForbiddenSet::parse(&read(&file).input()?).input()?;
            let g = ultragraph_from_one_step(&f).input()?;
            out.push_str(&render_presentation(&g)?);
        }
        Command::Forbidden { file } => {
            let g = load(&file).input()?;
            match edge_shift_forbidden_set(&g)? {
                ForbiddenVerdict::FinitelyForbidden(f) => writeln!(out, "{f}").unwrap(),
                ForbiddenVerdict::InfinitelyForbidden => {
                    writeln!(out, "infinitely many forbidden pairs (not a shift of finite type)").unwrap()
                }
            }
        }
        Command::Obstruct { a, b, n_max } => {
            let ga = load(&a).input()?;
            let gb = load(&b).input()?;
            let report = obstruction_with(&ga, &gb, KOptions { n_start: 2, n_max });
            out.push_str(&report.to_string());
            let code = if report.verdict.is_not_conjugate() { EXIT_NOT_CONJUGATE } else { EXIT_OK };
            return Ok(Outcome::with_code(code, out));
        }
        Command::Paths { file, len, max_edge } => {
            let g = load(&file).input()?;
            for p in enumerate_paths(&g, len, max_edge).input()? {
                writeln!(out, "{p}").unwrap();
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn info(g: &Ultragraph, out: &mut String) -> Result<()> {
    let c = g.classify();
    let mut lines: Vec<(String, String)> = vec![
        ("vertices".into(), g.vertices().to_string()),
        ("edges".into(), g.all_edges().describe()),
        ("is_graph".into(), c.is_graph.to_string()),
        ("is_bouquet".into(), c.is_bouquet.to_string()),
        ("sinks".into(), c.sinks.labeled("v").to_string()),
        ("regular vertices".into(), c.regular_vertices.labeled("v").to_string()),
    ];
    let report = g.validate_hypotheses();
    lines.extend(report.lines());
    lines.push(("eligible (H1-H4)".into(), report.eligible().to_string()));
    lines.push(("condition (L)".into(), g.check_condition_l(6)?.to_string()));
    let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0) + 1;
    for (k, v) in lines {
        writeln!(out, "{:<width$} {v}", format!("{k}:")).unwrap();
    }
    Ok(())
}
