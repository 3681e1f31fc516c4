//! `graphflow`: the graph complex, orientation of cocycles into Kontsevich
//! graphs, Leibniz factorization, and evaluation of the resulting flows.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphflow::complex::{differential, kernel_basis, Limits};
use graphflow::concrete::{evaluate_oriented, ConcreteBivector};
use graphflow::diffpoly::{parse_diff_poly, print_diff_poly};
use graphflow::graph::{format_graph_sum, parse_graph_sum, GraphSum};
use graphflow::leibniz::{coboundary_split, diamond_from_cocycle, leibniz_expand, verify_factorization};
use graphflow::orient::{orient, orientation_arity, schouten_bracket_graphs};
use graphflow::oriented::{format_oriented_sum, parse_oriented_sum, reduce_mod_skew, OrientedSum};
use graphflow::rational::{format_rational, Rational};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "graphflow", version, about = "Graph cocycles, Kontsevich orientation and Leibniz factorization")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input file (default: standard input).
    #[arg(long, short)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the differential d = [stick, ·] to a graph sum.
    D(Input),
    /// Basis of cocycles among graphs with the given vertex and edge counts.
    Kernel {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        /// Include disconnected graphs.
        #[arg(long)]
        disconnected: bool,
        /// Give up beyond this many isomorphism classes.
        #[arg(long, default_value_t = 200_000)]
        max_graphs: usize,
    },
    /// Orient a graph sum into Kontsevich graphs with P in every vertex.
    Orient {
        #[command(flatten)]
        input: Input,
        /// Expected number of sinks (1, 2 or 3), checked against the edge count.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Graph-level Schouten bracket of two oriented sums.
    Bracket {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Leibniz graphs of the factorization for a bi-vector cocycle.
    Leibniz {
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Expand Jacobiator vertices into Kontsevich graphs.
    Expand(Input),
    /// Normalize an oriented sum modulo sink skew-symmetry.
    Reduce(Input),
    /// Check the factorization of [[P, Or(γ)(P)]] for a cocycle γ.
    Verify {
        #[arg(long)]
        cocycle: PathBuf,
        /// Allow inputs with eight or more vertices.
        #[arg(long)]
        heavy: bool,
    },
    /// Split the flow of a coboundary dβ into [[P, X]] and Leibniz graphs.
    Split {
        #[arg(long)]
        potential: PathBuf,
    },
    /// Print an oriented sum as a differential polynomial.
    PrintPoly {
        #[command(flatten)]
        input: Input,
        /// Compare with a term list in the same notation, up to a constant factor.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Evaluate an oriented sum at a polynomial bi-vector.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Bi-vector file: the dimension, then lines `i j <polynomial>`.
        #[arg(long, conflicts_with = "random_dim")]
        bivector: Option<PathBuf>,
        /// Use a random bi-vector of this dimension (see --seed).
        #[arg(long)]
        random_dim: Option<usize>,
        /// Degree of the random coefficients.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Evaluate [[P, ·]] of the input instead.
        #[arg(long)]
        bracket: bool,
    },
}

enum Failure {
    /// A check ran and came out false.
    Refuted(String),
    /// Bad input or usage.
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_text(path: Option<&PathBuf>) -> Result<(String, String), Failure> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map(|t| (t, p.display().to_string()))
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut t = String::new();
            io::stdin().read_to_string(&mut t).map_err(usage)?;
            Ok((t, "<stdin>".into()))
        }
    }
}

fn read_graphs(path: Option<&PathBuf>) -> Result<GraphSum, Failure> {
    let (text, name) = read_text(path)?;
    parse_graph_sum(&text).map_err(|e| usage(format!("{name}: {e}")))
}

fn read_oriented(path: Option<&PathBuf>) -> Result<OrientedSum, Failure> {
    let (text, name) = read_text(path)?;
    parse_oriented_sum(&text).map_err(|e| usage(format!("{name}: {e}")))
}

fn verdict(equal: bool) -> &'static str {
    if equal {
        "EQUAL"
    } else {
        "UNEQUAL"
    }
}

/// Scales a basis vector so that its smallest coefficient in absolute value is 1.
fn normalize(s: &GraphSum) -> GraphSum {
    match s.iter().map(|(_, c)| c.clone()).min_by(|a, b| a.abs().cmp(&b.abs())) {
        Some(c) => s.scale(&(Rational::one() / c.abs())),
        None => s.clone(),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::D(input) => Ok(format_graph_sum(&differential(&read_graphs(input.input.as_ref())?))),
        Command::Kernel { vertices, edges, disconnected, max_graphs } => {
            let limits = Limits { max_graphs: *max_graphs };
            let basis = kernel_basis(*vertices, *edges, !disconnected, limits).map_err(usage)?;
            let mut out = format!("# kernel dimension {}\n", basis.len());
            for (i, v) in basis.iter().enumerate() {
                out.push_str(&format!("# basis vector {}\n", i + 1));
                out.push_str(&format_graph_sum(&normalize(v)));
            }
            Ok(out)
        }
        Command::Orient { input, arity } => {
            let gamma = read_graphs(input.input.as_ref())?;
            if let Some(k) = arity {
                for (g, _) in gamma.iter() {
                    let got = orientation_arity(g.vertex_count(), g.edge_count()).map_err(usage)?;
                    if got != *k {
                        return Err(usage(format!("graph {g} gives a {got}-vector, not a {k}-vector")));
                    }
                }
            }
            Ok(format_oriented_sum(&orient(&gamma).map_err(usage)?))
        }
        Command::Bracket { left, right } => {
            let a = read_oriented(Some(left))?;
            let b = read_oriented(Some(right))?;
            Ok(format_oriented_sum(&schouten_bracket_graphs(&a, &b).map_err(usage)?))
        }
        Command::Leibniz { cocycle } => {
            Ok(format_oriented_sum(&diamond_from_cocycle(&read_graphs(Some(cocycle))?).map_err(usage)?))
        }
        Command::Expand(input) => Ok(format_oriented_sum(&leibniz_expand(&read_oriented(input.input.as_ref())?))),
        Command::Reduce(input) => Ok(format_oriented_sum(&reduce_mod_skew(&read_oriented(input.input.as_ref())?))),
        Command::Verify { cocycle, heavy } => {
            let gamma = read_graphs(Some(cocycle))?;
            if !heavy && gamma.iter().any(|(g, _)| g.vertex_count() >= 8) {
                return Err(usage("inputs with eight or more vertices need --heavy"));
            }
            let r = verify_factorization(&gamma).map_err(usage)?;
            let report = format!(
                "cocycle: {}\norient_terms: {}\nlhs_terms: {}\nrhs_leibniz_terms: {}\nrhs_leibniz_graphs: {}\nrhs_expanded_terms: {}\nresidual_terms: {}\nverdict: {}\n",
                if r.is_cocycle { "yes" } else { "no" },
                r.orient_terms,
                r.lhs_terms,
                r.rhs_leibniz_orbits,
                r.rhs_leibniz_terms,
                r.rhs_expanded_terms,
                r.residual_terms,
                verdict(r.equal()),
            );
            if r.equal() {
                Ok(report)
            } else {
                Err(Failure::Refuted(report))
            }
        }
        Command::Split { potential } => {
            let beta = read_graphs(Some(potential))?;
            let s = coboundary_split(&beta).map_err(usage)?;
            let report = format!(
                "x_terms: {}\nflow_terms: {}\nbracket_terms: {}\nimproper_leibniz_terms: {}\nimproper_expanded_terms: {}\nresidual_terms: {}\nverdict: {}\n",
                s.x.len(),
                s.flow.len(),
                s.bracket.len(),
                s.improper.sink_orbit_count(),
                s.improper_expanded.len(),
                s.residual.len(),
                verdict(s.residual.is_empty()),
            );
            if s.residual.is_empty() {
                Ok(report)
            } else {
                Err(Failure::Refuted(report))
            }
        }
        Command::PrintPoly { input, reference } => {
            let s = read_oriented(input.input.as_ref())?;
            if s.sink_count() > 3 {
                return Err(usage("at most three sinks can be printed"));
            }
            let Some(reference) = reference else {
                return Ok(print_diff_poly(&s));
            };
            let (text, name) = read_text(Some(reference))?;
            let r = parse_diff_poly(&text).map_err(|e| usage(format!("{name}: {e}")))?;
            match r.ratio_to(&s) {
                Some(c) => Ok(format!("reference_terms: {}\nratio: {}\nverdict: EQUAL\n", r.len(), format_rational(&c))),
                None => Err(Failure::Refuted(format!(
                    "reference_terms: {}\nterms: {}\nratio: none\nverdict: UNEQUAL\n",
                    r.len(),
                    s.len()
                ))),
            }
        }
        Command::Eval { input, bivector, random_dim, degree, bracket } => {
            let s = read_oriented(input.input.as_ref())?;
            let p = match (bivector, random_dim) {
                (Some(path), _) => {
                    let (text, name) = read_text(Some(path))?;
                    ConcreteBivector::parse(&text).map_err(|e| usage(format!("{name}: {e}")))?
                }
                (None, Some(r)) if (1..=64).contains(r) => {
                    ConcreteBivector::random(*r, *degree, &mut ChaCha8Rng::seed_from_u64(cli.seed))
                }
                (None, Some(_)) => return Err(usage("--random-dim must be between 1 and 64")),
                (None, None) => return Err(usage("give --bivector or --random-dim")),
            };
            let s = if *bracket {
                let wedge = OrientedSum::from_graph(&graphflow::oriented::KontsevichGraph::wedge());
                schouten_bracket_graphs(&wedge, &s).map_err(usage)?
            } else {
                s
            };
            let v = evaluate_oriented(&s, &p).map_err(usage)?;
            let mut out = format!("# dim={} poisson={}\n", p.dim(), p.is_poisson());
            if v.is_zero() {
                out.push_str("0\n");
            }
            for (idx, poly) in v.components() {
                let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!("{}: {}\n", idx.join(" "), poly));
            }
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (text, code) = match run(&cli) {
        Ok(t) => (t, 0),
        Err(Failure::Refuted(t)) => (t, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
