//! Subcommand dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use expmap_core::algebra::{subalgebra_intersection_bounded, AlgebraElement};
use expmap_core::catalog;
use expmap_core::expmap::{express_in_localization, min_positive_degree, ExponentialMap};
use expmap_core::grading::{bound_is_sharp, FiltrationContext};
use expmap_core::poly::{fmt_fraction, weighted_homog_factor, Polynomial};
use expmap_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{Report, ResultLine};
use crate::session::{parse_expression, parse_session, Loaded, SessionError};

/// Random combinations tried by the minimal-degree search.
const SEARCH_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "expmap", version, about = "Exact computations with exponential maps")]
pub struct Cli {
    /// Session file describing the algebra, weights and maps.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree bound for bounded-degree linear algebra.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_degree: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the axiom suite on a map.
    Verify {
        #[arg(long)]
        map: String,
    },
    /// phi-degree of an element.
    Degree {
        #[arg(long)]
        map: String,
        #[arg(long)]
        expr: String,
    },
    /// Decide whether an element is invariant.
    Invariant {
        #[arg(long)]
        map: String,
        #[arg(long)]
        expr: String,
    },
    /// Homogenize a map with respect to a weight vector.
    Homogenize {
        #[arg(long)]
        map: String,
        #[arg(long)]
        weights: String,
    },
    /// Write an element as a polynomial in a local slice over the localized invariants.
    Express {
        #[arg(long)]
        map: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        xmin: Option<String>,
    },
    /// Bounded-degree intersection of two generated subalgebras.
    Intersect {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        gens1: Vec<String>,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        gens2: Vec<String>,
    },
    /// Factor a weighted-homogeneous form in two variables.
    Factor {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        weights: String,
    },
    /// List built-in entries and check their documented facts.
    Catalog {
        #[arg(long)]
        entry: Option<String>,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
}

/// Errors that end a command with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Usage(String),
    #[error("session: {0}")]
    Session(#[from] SessionError),
    #[error("{0}")]
    Core(Error),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Core errors that are mathematical verdicts rather than bad input.
fn is_math_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotExponential(_)
            | Error::HomogenizationNotExponential(_)
            | Error::NonDivisibleDegree { .. }
            | Error::RecursionNoProgress(_)
            | Error::DoesNotSplit { .. }
            | Error::TrivialMap
    )
}

/// Records a math failure as a FAIL line, passes everything else on.
fn fail_or_raise(report: &mut Report, check: &str, e: Error) -> Result<(), UsageError> {
    if is_math_failure(&e) {
        report.push(ResultLine::verdict(check, false).with_witness(Some(e.to_string())));
        Ok(())
    } else {
        Err(UsageError::Core(e))
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError::Core(e)
    }
}

fn load(cli: &Cli, report: &mut Report) -> Result<Loaded, UsageError> {
    let path = cli.input.as_ref().ok_or_else(|| UsageError::Usage("--input is required".into()))?;
    report.input("session", path.display().to_string());
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(parse_session(&text)?.load()?)
}

fn render_u(map: &ExponentialMap, p: &Polynomial) -> String {
    let order = map.algebra().order().extended(map.algebra().nvars() + 1);
    p.render(&order)
}

fn braces(xs: &[AlgebraElement]) -> String {
    format!("{{{}}}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Runs the command; usage problems still produce a report, with exit code 2.
pub fn execute(cli: &Cli) -> Report {
    let name = match &cli.command {
        Command::Verify { .. } => "verify",
        Command::Degree { .. } => "degree",
        Command::Invariant { .. } => "invariant",
        Command::Homogenize { .. } => "homogenize",
        Command::Express { .. } => "express",
        Command::Intersect { .. } => "intersect",
        Command::Factor { .. } => "factor",
        Command::Catalog { .. } => "catalog",
    };
    let mut report = Report::new(name);
    match run(cli, &mut report) {
        Ok(()) => report.settle(),
        Err(e) => {
            report.push(ResultLine::verdict("input", false).with_value(e.to_string()));
            report.exit_code = 2;
        }
    }
    report
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), UsageError> {
    match &cli.command {
        Command::Verify { map } => {
            let loaded = load(cli, report)?;
            report.input("map", map.as_str());
            let m = loaded.map(map)?;
            let verdict = m.verify();
            for c in &verdict.checks {
                let mut line = ResultLine::verdict(c.name, c.passed).with_witness(c.witness_text.clone());
                if let Some(g) = &c.generator {
                    line = line.with_value(format!("generator {g}"));
                }
                report.push(line);
            }
            report.push(ResultLine::info("trivial", verdict.trivial.to_string()));
        }
        Command::Degree { map, expr } => {
            let loaded = load(cli, report)?;
            report.input("map", map.as_str());
            report.input("expr", expr.as_str());
            let m = loaded.map(map)?;
            let a = loaded.element(expr)?;
            match m.phi_degree(&a)? {
                Some(n) => {
                    report.push(ResultLine::info("degree", n.to_string()));
                    report.push(ResultLine::info("leading coefficient", m.coefficient_d(n, &a)?.to_string()));
                }
                None => report.push(ResultLine::info("degree", "-inf")),
            }
        }
        Command::Invariant { map, expr } => {
            let loaded = load(cli, report)?;
            report.input("map", map.as_str());
            report.input("expr", expr.as_str());
            let m = loaded.map(map)?;
            let a = loaded.element(expr)?;
            let moved = &m.apply(&a)? - &a.rep().embed(m.u_ring())?;
            let witness = (!moved.is_zero()).then(|| render_u(m, &moved));
            report.push(ResultLine::verdict("invariant", moved.is_zero()).with_witness(witness));
        }
        Command::Homogenize { map, weights } => {
            let loaded = load(cli, report)?;
            report.input("map", map.as_str());
            report.input("weights", weights.as_str());
            let m = loaded.map(map)?;
            let ctx = FiltrationContext::new(&loaded.algebra, loaded.weight(weights)?.clone())?;
            let graded = ctx.graded_model();
            if !graded.is_free() {
                report.push(ResultLine::info("graded relation", graded.relation().render(graded.order())));
            }
            let h = match ctx.grade(m) {
                Ok(h) => h,
                Err(e) => return fail_or_raise(report, "grdegU", e),
            };
            report.push(ResultLine::info("grdegU", fmt_fraction(h.grdeg_u())));
            let names = loaded.algebra.ring().vars().names().to_vec();
            for (g, s) in names.iter().zip(h.generator_support_sets()?) {
                let set: Vec<String> = s.iter().map(|n| n.to_string()).collect();
                report.push(ResultLine::info(format!("S({g})"), format!("{{{}}}", set.join(", "))));
            }
            report.push(ResultLine::verdict("degree bound sharp", bound_is_sharp(&h)?));
            let bar = match h.homogenize_map() {
                Ok(bar) => bar,
                Err(e) => return fail_or_raise(report, "homogenized map", e),
            };
            for (i, g) in names.iter().enumerate() {
                report.push(ResultLine::info(format!("bar({g})"), bar.render_image(i)));
            }
            for c in bar.verify().checks {
                report.push(
                    ResultLine::verdict(format!("homogenized {}", c.name), c.passed).with_witness(c.witness_text),
                );
            }
        }
        Command::Express { map, expr, xmin } => {
            let loaded = load(cli, report)?;
            report.input("map", map.as_str());
            report.input("expr", expr.as_str());
            let m = loaded.map(map)?;
            let a = loaded.element(expr)?;
            let x = match xmin {
                Some(text) => {
                    report.input("xmin", text.as_str());
                    loaded.element(text)?
                }
                None => {
                    report.input("seed", cli.seed.to_string());
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    match min_positive_degree(m, SEARCH_BOUND, &mut rng) {
                        Ok((x, _)) => {
                            report.push(ResultLine::info("x_min search", "heuristic minimum"));
                            x
                        }
                        Err(e) => return fail_or_raise(report, "x_min search", e),
                    }
                }
            };
            report.push(ResultLine::info("x_min", x.to_string()));
            let rep = match express_in_localization(m, &x, &a) {
                Ok(r) => r,
                Err(e) => return fail_or_raise(report, "expression", e),
            };
            report.push(ResultLine::info("c", rep.c.to_string()));
            report.push(ResultLine::info("exponent", rep.exponent.to_string()));
            for (i, h) in rep.coefficients.iter().enumerate() {
                report.push(ResultLine::info(format!("h{i}"), h.to_string()));
            }
            report.push(ResultLine::verdict("reconstructs", rep.reconstructs(&a)));
        }
        Command::Intersect { gens1, gens2 } => {
            let loaded = load(cli, report)?;
            report.input("gens1", gens1.join(", "));
            report.input("gens2", gens2.join(", "));
            report.input("max-degree", cli.max_degree.to_string());
            let parse = |xs: &[String]| xs.iter().map(|s| loaded.element(s)).collect::<Result<Vec<_>, _>>();
            let (g1, g2) = (parse(gens1)?, parse(gens2)?);
            let basis = subalgebra_intersection_bounded(&g1, &g2, cli.max_degree)?;
            report.push(ResultLine::info("dimension", basis.len().to_string()));
            report.push(ResultLine::info("basis", braces(&basis)));
        }
        Command::Factor { expr, weights } => {
            let loaded = load(cli, report)?;
            report.input("expr", expr.as_str());
            report.input("weights", weights.as_str());
            let ring = loaded.algebra.ring();
            let g = parse_expression(expr, ring, false)?;
            let used: Vec<usize> = (0..ring.nvars()).filter(|&i| g.uses_var(i)).collect();
            let [z, t] = used[..] else {
                return Err(UsageError::Usage(format!(
                    "factor needs a form in exactly two variables, got {}",
                    used.len()
                )));
            };
            let f = match weighted_homog_factor(&g, z, t, loaded.weight(weights)?) {
                Ok(f) => f,
                Err(e) => return fail_or_raise(report, "splits", e),
            };
            let (zn, tn) = (ring.vars().name(z), ring.vars().name(t));
            let (a, b) = f.binomial_exponents;
            report.push(ResultLine::info("lambda", f.lambda.to_string()));
            report.push(ResultLine::info(format!("exponent of {zn}"), f.n.to_string()));
            report.push(ResultLine::info(format!("exponent of {tn}"), f.m.to_string()));
            report.push(ResultLine::info("binomial", format!("{zn}^{a} + mu*{tn}^{b}")));
            let mus: Vec<String> = f.mu_multiset().iter().map(|c| c.to_string()).collect();
            report.push(ResultLine::info("mu", format!("{{{}}}", mus.join(", "))));
            report.push(ResultLine::verdict("expansion", f.expand(ring) == g));
        }
        Command::Catalog { entry, characteristic } => {
            report.input("char", characteristic.to_string());
            report.input("max-degree", cli.max_degree.to_string());
            let names: Vec<&str> = match entry {
                Some(e) => {
                    report.input("entry", e.as_str());
                    vec![e.as_str()]
                }
                None => catalog::ENTRY_NAMES.to_vec(),
            };
            report.push(ResultLine::info("entries", catalog::ENTRY_NAMES.join(", ")));
            for name in names {
                let entries = catalog::entry(name, *characteristic)?;
                let checked = std::thread::scope(|s| {
                    let handles: Vec<_> = entries
                        .iter()
                        .map(|e| {
                            s.spawn(move || -> Result<_, Error> {
                                let mut facts = e.check_facts();
                                if e.name == "russell" {
                                    for f in catalog::russell_invariant_suite(e, cli.max_degree.max(3))? {
                                        if !facts.iter().any(|g| g.fact == f.fact) {
                                            facts.push(f);
                                        }
                                    }
                                }
                                Ok((e.name.clone(), facts))
                            })
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("catalog worker")).collect::<Result<Vec<_>, _>>()
                })?;
                for (entry_name, facts) in checked {
                    for (i, f) in facts.into_iter().enumerate() {
                        let check = format!("{entry_name} fact {}", i + 1);
                        let line = match (f.passed, f.detail) {
                            (true, Some(d)) if !d.starts_with("witness ") => {
                                ResultLine::verdict(check, true).with_value(format!("{} [{d}]", f.fact))
                            }
                            (true, _) => ResultLine::verdict(check, true).with_value(f.fact),
                            (false, d) => ResultLine::verdict(check, false).with_value(f.fact).with_witness(d),
                        };
                        report.push(line);
                    }
                }
            }
        }
    }
    Ok(())
}
