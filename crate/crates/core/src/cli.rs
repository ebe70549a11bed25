//! The `propalg` command line. [`run`] returns the exit code and both
//! output streams so it can be tested without spawning a process.
//!
//! Exit codes: 0 success or a positive verdict, 1 a negative verdict,
//! 2 usage and input errors, 3 an exhausted budget.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::congruence::{basic_form, try_equal, try_normalize};
use crate::error::{Error, Result};
use crate::expressive::{search_equivalent, OperatorCatalog, SearchBounds};
use crate::laws::run_suite;
use crate::projective::{eval_spec, project, unfold_levels, LinearSpec};
use crate::sat::{acc, sat, sat_witnessed};
use crate::syntax::{desugar, parse, print, print_sugared};
use crate::term::{atoms, Atom, Term, Variety};
use crate::transform::{caching, re_eval, Variant};
use crate::valuation::model::{equiv_oracle, oracle_verdict, OracleVerdict};
use crate::valuation::{evaluate, ValuationTable};

#[derive(Parser, Debug)]
#[command(name = "propalg", version, about = "Proposition algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a statement and print it back.
    Parse { stmt: String },
    /// Print the basic form.
    Bf { stmt: String },
    /// Print the canonical form under a congruence.
    Normalize {
        #[arg(long)]
        variety: Variety,
        stmt: String,
    },
    /// Decide equality under a congruence (exit 0 equal, 1 not equal).
    Equal {
        #[arg(long)]
        variety: Variety,
        lhs: String,
        rhs: String,
    },
    /// Compare two statements by running them on valuations.
    Equiv {
        #[arg(long)]
        variety: Variety,
        lhs: String,
        rhs: String,
    },
    /// Satisfiability (exit 0 satisfiable, 1 not).
    Sat {
        #[arg(long)]
        variety: Variety,
        #[arg(long)]
        witness: bool,
        stmt: String,
    },
    /// Falsifiability (exit 0 falsifiable, 1 not).
    Fal {
        #[arg(long)]
        variety: Variety,
        #[arg(long)]
        witness: bool,
        stmt: String,
    },
    /// Atoms reachable by some evaluation.
    Acc { stmt: String },
    /// Evaluate against a valuation file.
    Eval {
        #[arg(long = "val")]
        val: String,
        stmt: String,
    },
    /// Projection to the first N query levels.
    Project {
        #[arg(short = 'n')]
        n: usize,
        stmt: String,
    },
    /// Linear specifications.
    Spec {
        #[command(subcommand)]
        command: SpecCommand,
    },
    /// Program transformations.
    Transform {
        #[command(subcommand)]
        command: TransformCommand,
    },
    /// Search for a composition of operators equal to a target.
    Search {
        #[arg(long)]
        target: String,
        #[arg(long)]
        variety: Variety,
        #[arg(long = "max-2p", default_value_t = 2)]
        max_2p: usize,
        #[arg(long = "body-depth", default_value_t = 2)]
        body_depth: usize,
        #[arg(long = "max-depth", default_value_t = 4)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = CatalogKind::Bodies)]
        catalog: CatalogKind,
        /// Comma-separated atoms; defaults to the atoms of the target.
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Run the built-in law suite.
    Laws {
        #[arg(long)]
        variety: Variety,
    },
}

#[derive(Subcommand, Debug)]
enum SpecCommand {
    /// Print the first N approximants of a variable.
    Project {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        var: String,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Run a variable against a valuation file.
    Eval {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        var: String,
        #[arg(long = "val")]
        val: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TransformCommand {
    /// Rewrite into an equivalent statement without repeated queries.
    Caching { stmt: String },
    /// Compile repeated queries into restarts.
    ReEval {
        #[arg(long, default_value = "plain")]
        variant: Variant,
        stmt: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogKind {
    /// Every operator body up to `--body-depth`.
    Bodies,
    /// Negation and the eight sequential connectives.
    Connectives,
    /// `T`, negation and left-sequential disjunction.
    Tnd,
}

/// Output of one invocation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(e) => {
            Outcome { code: if e.is_budget() { 3 } else { 2 }, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn term(stmt: &str) -> Result<Term> {
    parse(stmt).map(|s| desugar(&s))
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read `{path}`: {e}")))
}

fn verdict(b: bool) -> i32 {
    if b {
        0
    } else {
        1
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Result<i32> {
    match cmd {
        Command::Parse { stmt } => {
            writeln!(out, "{}", print_sugared(&parse(&stmt)?)).unwrap();
            Ok(0)
        }
        Command::Bf { stmt } => {
            writeln!(out, "{}", print(&basic_form(&term(&stmt)?))).unwrap();
            Ok(0)
        }
        Command::Normalize { variety, stmt } => {
            writeln!(out, "{}", print(&try_normalize(&term(&stmt)?, variety)?)).unwrap();
            Ok(0)
        }
        Command::Equal { variety, lhs, rhs } => {
            let eq = try_equal(&term(&lhs)?, &term(&rhs)?, variety)?;
            writeln!(out, "equal: {eq}").unwrap();
            Ok(verdict(eq))
        }
        Command::Equiv { variety, lhs, rhs } => {
            let (p, q) = (term(&lhs)?, term(&rhs)?);
            let equivalent = equiv_oracle(&p, &q, variety)?;
            let v = oracle_verdict(&p, &q, variety)?;
            writeln!(out, "equivalent: {equivalent}").unwrap();
            writeln!(out, "congruent: {}", v == OracleVerdict::Congruent).unwrap();
            let name = match v {
                OracleVerdict::Congruent => "congruent",
                OracleVerdict::DistinguishedByValue => "distinguished-by-value",
                OracleVerdict::DistinguishedByDerivative => "distinguished-by-derivative",
            };
            writeln!(out, "verdict: {name}").unwrap();
            Ok(verdict(v == OracleVerdict::Congruent))
        }
        Command::Sat { variety, witness, stmt } => sat_verb(variety, witness, &stmt, true, out),
        Command::Fal { variety, witness, stmt } => sat_verb(variety, witness, &stmt, false, out),
        Command::Acc { stmt } => {
            let set = acc(&parse(&stmt)?)?;
            let names: Vec<&str> = set.iter().map(Atom::name).collect();
            writeln!(out, "acc: {{{}}}", names.join(", ")).unwrap();
            Ok(0)
        }
        Command::Eval { val, stmt } => {
            let h = ValuationTable::parse_file(&read(&val)?)?;
            let r = evaluate(&term(&stmt)?, &h)?;
            writeln!(out, "value: {}", if r.value { 'T' } else { 'F' }).unwrap();
            writeln!(out, "trace: {}", r.trace_string()).unwrap();
            Ok(0)
        }
        Command::Project { n, stmt } => {
            if n == 0 {
                return Err(Error::InvalidArgument("-n must be at least 1".into()));
            }
            writeln!(out, "{}", print(&project(n, &term(&stmt)?))).unwrap();
            Ok(0)
        }
        Command::Spec { command } => spec_verb(command, out),
        Command::Transform { command } => match command {
            TransformCommand::Caching { stmt } => {
                writeln!(out, "{}", print(&caching(&term(&stmt)?))).unwrap();
                Ok(0)
            }
            TransformCommand::ReEval { variant, stmt } => {
                out.push_str(&re_eval(&basic_form(&term(&stmt)?), variant)?.to_file_string());
                Ok(0)
            }
        },
        Command::Search { target, variety, max_2p, body_depth, max_depth, catalog, atoms: alphabet } => {
            let target = term(&target)?;
            let alphabet: Vec<Atom> = match alphabet {
                Some(list) => list.split(',').map(|s| Atom::new(s.trim())).collect::<Result<_>>()?,
                None => atoms(&target).into_iter().collect(),
            };
            let catalog = match catalog {
                CatalogKind::Bodies => OperatorCatalog::from_bodies(body_depth),
                CatalogKind::Connectives => OperatorCatalog::connectives(),
                CatalogKind::Tnd => OperatorCatalog::tnd(),
            };
            let bounds = SearchBounds { max_2p, max_depth, ..SearchBounds::default() };
            let outcome = search_equivalent(&target, variety, &alphabet, &catalog, &bounds)?;
            writeln!(out, "found: {}", outcome.witness.is_some()).unwrap();
            if let Some(w) = &outcome.witness {
                writeln!(out, "witness: {}", print(&w.term)).unwrap();
                writeln!(out, "composition: {}", w.expr).unwrap();
                writeln!(out, "two_place_count: {}", w.two_place_count).unwrap();
            }
            writeln!(out, "bounds: {}", outcome.bounds_line()).unwrap();
            Ok(verdict(outcome.witness.is_some()))
        }
        Command::Laws { variety } => {
            if !variety.in_chain() {
                return Err(Error::UnsupportedVariety(variety.name().to_string()));
            }
            let outcomes = run_suite(variety);
            for o in &outcomes {
                writeln!(out, "{}: {}", o.law.name, if o.pass() { "pass" } else { "fail" }).unwrap();
            }
            let passed = outcomes.iter().filter(|o| o.pass()).count();
            writeln!(out, "passed: {passed}/{}", outcomes.len()).unwrap();
            Ok(verdict(passed == outcomes.len()))
        }
    }
}

fn sat_verb(k: Variety, witness: bool, stmt: &str, want: bool, out: &mut String) -> Result<i32> {
    let p = term(stmt)?;
    let v = if witness { sat_witnessed(&p, k)? } else { sat(&p, k)? };
    let (key, holds, table) = if want {
        ("satisfiable", v.satisfiable, v.sat_witness)
    } else {
        ("falsifiable", v.falsifiable, v.fal_witness)
    };
    writeln!(out, "{key}: {holds}").unwrap();
    if witness {
        if let Some(h) = table {
            writeln!(out, "witness:").unwrap();
            out.push_str(&h.to_file_string());
        }
    }
    Ok(verdict(holds))
}

fn spec_verb(cmd: SpecCommand, out: &mut String) -> Result<i32> {
    match cmd {
        SpecCommand::Project { spec, var, n } => {
            let spec = LinearSpec::parse(&read(&spec)?)?;
            for (i, t) in unfold_levels(&spec, &var, n)?.iter().enumerate() {
                writeln!(out, "pi_{}: {}", i + 1, print(t)).unwrap();
            }
            Ok(0)
        }
        SpecCommand::Eval { spec, var, val, fuel } => {
            let spec = LinearSpec::parse(&read(&spec)?)?;
            let h = ValuationTable::parse_file(&read(&val)?)?;
            let (value, trace) = eval_spec(&spec, &var, &h, fuel)?;
            let trace: Vec<&str> = trace.iter().map(Atom::name).collect();
            writeln!(out, "result: {value}").unwrap();
            writeln!(out, "trace: {}", trace.join(".")).unwrap();
            Ok(0)
        }
    }
}
