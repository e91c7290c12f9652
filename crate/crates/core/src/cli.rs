//! The `edgelab` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::graph::{parse_graph, EdgeId, Graph};
use crate::labeling::{format_labeling, parse_labeling, verify, EdgeLabeling, Label, PartialLabeling};
use crate::recognizer::{class_line, construct_labeling_small, decide_span_le, oracle_compare};
use crate::reduction::{
    build_reduction, check_gadget_contract, enumeration_transcript, format_sidecar, gadget, nae_satisfiable,
    parse_mcnf, ContractError, ContractReport, GadgetError, GadgetRole, NaeOutcome,
};
use crate::solver::{compute_span, find_labeling, SolveBudget, SolveOutcome, SpanOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "edgelab", version, about = "Distance edge labelings L'(2,1)")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone, Copy)]
struct Budget {
    /// Stop each search after this many nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop each search after this many seconds.
    #[arg(long)]
    budget_seconds: Option<u64>,
}

impl Budget {
    fn for_graph(self, g: &Graph) -> SolveBudget {
        self.or(SolveBudget::default_for(g))
    }

    fn or(self, fallback: SolveBudget) -> SolveBudget {
        if self.budget_nodes.is_none() && self.budget_seconds.is_none() {
            return fallback;
        }
        SolveBudget {
            node_limit: self.budget_nodes,
            time_limit: self.budget_seconds.map(Duration::from_secs),
        }
    }
}

fn parse_pin(s: &str) -> Result<(EdgeId, Label), String> {
    let (e, l) = s.split_once('=').ok_or("expected <edge>=<label>")?;
    let e = e.trim().parse().map_err(|_| format!("bad edge id {e:?}"))?;
    let l = l.trim().parse().map_err(|_| format!("bad label {l:?}"))?;
    Ok((e, l))
}

fn parse_role(s: &str) -> Result<GadgetRole, String> {
    GadgetRole::ALL
        .into_iter()
        .find(|r| r.as_str() == s)
        .ok_or_else(|| format!("unknown role {s:?}"))
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Print the minimum span of a graph.
    Span {
        graph: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print a labeling with span at most `--lambda`.
    Label {
        graph: PathBuf,
        #[arg(long)]
        lambda: Label,
        /// Fix an edge label, as `<edge>=<label>`.
        #[arg(long = "pin", value_parser = parse_pin)]
        pins: Vec<(EdgeId, Label)>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check a labeling file and print its violations.
    Verify {
        graph: PathBuf,
        labeling: PathBuf,
        #[arg(long)]
        lambda: Label,
    },
    /// Print the span-4 structure line of a connected graph.
    Classify { graph: PathBuf },
    /// Write the reduction graph and its port map for a formula.
    Reduce {
        formula: PathBuf,
        #[arg(long)]
        lambda: Label,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Decide NAE-satisfiability of a formula by brute force.
    Nae { formula: PathBuf },
    /// Check the gadget contracts at one span.
    CheckGadgets {
        #[arg(long)]
        lambda: Label,
        /// Outputs of the variable gadget.
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// Only this role.
        #[arg(long, value_parser = parse_role)]
        role: Option<GadgetRole>,
        /// Print the branch transcript over this many edges instead.
        #[arg(long)]
        transcript: Option<usize>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compare the span-4 recognizer with the exact solver on small graphs.
    OracleCompare {
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        /// Restrict to these spans (default all of 0..=4).
        #[arg(long)]
        lambda: Vec<Label>,
    },
}

/// A failed command: exit code and message for the error stream.
struct Fail(i32, String);

fn usage(msg: impl ToString) -> Fail {
    Fail(EXIT_USAGE, msg.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Fail> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Run one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.verb, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "edgelab: {msg}");
            code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Fail> {
    out.write_all(text.as_bytes()).map_err(|e| usage(format!("write failed: {e}")))
}

fn dispatch(verb: Verb, out: &mut dyn Write) -> Result<i32, Fail> {
    match verb {
        Verb::Span { graph, budget } => {
            let g = load_graph(&graph)?;
            match compute_span(&g, budget.for_graph(&g)) {
                SpanOutcome::Span(s) => emit(out, &format!("{s}\n"))?,
                SpanOutcome::BudgetExhausted => return Err(Fail(EXIT_BUDGET, "budget exhausted".into())),
            }
            Ok(EXIT_OK)
        }
        Verb::Label {
            graph,
            lambda,
            pins,
            budget,
        } => {
            let g = load_graph(&graph)?;
            let pins: PartialLabeling = pins.into_iter().collect();
            let lab = label(&g, lambda, &pins, budget)?;
            // Never print a labeling that does not check out.
            if g.edge_count() > 0 {
                let bad = verify(&g, &lab, lambda).map_err(|e| Fail(EXIT_NEGATIVE, e.to_string()))?;
                if !bad.is_empty() || !lab.extends(&pins) {
                    return Err(Fail(EXIT_NEGATIVE, "internal error: labeling failed verification".into()));
                }
            }
            emit(out, &format_labeling(&g, &lab))?;
            Ok(EXIT_OK)
        }
        Verb::Verify { graph, labeling, lambda } => {
            let g = load_graph(&graph)?;
            let lab = parse_labeling(&read(&labeling)?, &g).map_err(|e| usage(format!("{}: {e}", labeling.display())))?;
            match verify(&g, &lab, lambda) {
                Ok(bad) if bad.is_empty() => {
                    emit(out, "valid\n")?;
                    Ok(EXIT_OK)
                }
                Ok(bad) => {
                    for v in bad {
                        emit(out, &format!("{v}\n"))?;
                    }
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => {
                    emit(out, &format!("invalid {e}\n"))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Verb::Classify { graph } => {
            let g = load_graph(&graph)?;
            let line = class_line(&g).map_err(usage)?;
            emit(out, &format!("{line}\n"))?;
            Ok(EXIT_OK)
        }
        Verb::Reduce { formula, lambda, out: dir } => {
            let f = parse_mcnf(&read(&formula)?).map_err(|e| usage(format!("{}: {e}", formula.display())))?;
            let art = build_reduction(&f, lambda).map_err(usage)?;
            fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            let write = |name: &str, text: String| {
                let p = dir.join(name);
                fs::write(&p, text).map_err(|e| usage(format!("{}: {e}", p.display())))
            };
            write("g.graph", art.graph.to_text())?;
            write("g.map", format_sidecar(&art))?;
            emit(
                out,
                &format!(
                    "{} vertices {} edges lambda {}\n",
                    art.graph.vertex_count(),
                    art.graph.edge_count(),
                    lambda
                ),
            )?;
            Ok(EXIT_OK)
        }
        Verb::Nae { formula } => {
            let f = parse_mcnf(&read(&formula)?).map_err(|e| usage(format!("{}: {e}", formula.display())))?;
            match nae_satisfiable(&f).map_err(usage)? {
                NaeOutcome::Satisfiable(a) => {
                    let bits: String = a.values().iter().map(|&b| if b { '1' } else { '0' }).collect();
                    emit(out, &format!("SAT {bits}\n"))?;
                    Ok(EXIT_OK)
                }
                NaeOutcome::Unsatisfiable => {
                    emit(out, "UNSAT\n")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Verb::CheckGadgets {
            lambda,
            arity,
            role,
            transcript,
            budget,
        } => check_gadgets(out, lambda, arity, role, transcript, budget),
        Verb::OracleCompare { max_vertices, lambda } => {
            let lambdas = if lambda.is_empty() { vec![0, 1, 2, 3, 4] } else { lambda };
            let report = oracle_compare(max_vertices, &lambdas, |g, l| decide_span_le(g, l).unwrap_or(false)).map_err(usage)?;
            emit(out, &format!("{report}\n"))?;
            Ok(match report {
                crate::recognizer::OracleReport::Agree(_) => EXIT_OK,
                crate::recognizer::OracleReport::Discrepancy { .. } => EXIT_NEGATIVE,
                crate::recognizer::OracleReport::Budget { .. } => EXIT_BUDGET,
            })
        }
    }
}

fn label(g: &Graph, lambda: Label, pins: &PartialLabeling, budget: Budget) -> Result<EdgeLabeling, Fail> {
    // Span 4 has a direct construction; components are independent.
    if lambda == 4 && pins.is_empty() && budget.budget_nodes.is_none() {
        let ok = g.components().iter().all(|c| decide_span_le(&g.induced(c).0, 4).unwrap_or(false));
        if !ok {
            return Err(Fail(EXIT_NEGATIVE, format!("no labeling with span {lambda}")));
        }
        return construct_labeling_small(g)
            .map(|(lab, _)| lab)
            .map_err(|e| Fail(EXIT_NEGATIVE, e.to_string()));
    }
    match find_labeling(g, lambda, budget.for_graph(g), pins).map_err(usage)? {
        SolveOutcome::Found(lab) => Ok(lab),
        SolveOutcome::Infeasible => Err(Fail(EXIT_NEGATIVE, format!("no labeling with span {lambda}"))),
        SolveOutcome::BudgetExhausted => Err(Fail(EXIT_BUDGET, "budget exhausted".into())),
    }
}

fn check_gadgets(
    out: &mut dyn Write,
    lambda: Label,
    arity: usize,
    only: Option<GadgetRole>,
    transcript: Option<usize>,
    budget: Budget,
) -> Result<i32, Fail> {
    let mut code = EXIT_OK;
    let mut checked = 0;
    for role in GadgetRole::ALL {
        if only.is_some_and(|r| r != role) {
            continue;
        }
        let a = match role {
            GadgetRole::Variable => arity,
            GadgetRole::Clause => 3,
            _ => 1,
        };
        let t = match gadget(lambda, role, a) {
            Ok(t) => t,
            Err(GadgetError::Unsupported { .. }) if only.is_none() => continue,
            Err(e) => return Err(usage(e)),
        };
        checked += 1;
        let b = budget.or(SolveBudget::default_for(&t.graph));
        if let Some(depth) = transcript {
            match enumeration_transcript(&t, depth, b) {
                Ok(s) => emit(out, &s)?,
                Err(ContractError::BudgetExhausted) => return Err(Fail(EXIT_BUDGET, "budget exhausted".into())),
                Err(e) => return Err(usage(e)),
            }
            continue;
        }
        let line = match check_gadget_contract(&t, b) {
            Ok(ContractReport::Pass) => format!("{role} lambda={lambda} pass"),
            Ok(ContractReport::Counterexample(c)) => {
                code = code.max(EXIT_NEGATIVE);
                format!("{role} lambda={lambda} FAIL {c}")
            }
            Err(ContractError::BudgetExhausted) => {
                code = EXIT_BUDGET;
                format!("{role} lambda={lambda} BUDGET")
            }
            Err(e) => return Err(usage(e)),
        };
        emit(out, &format!("{line}\n"))?;
    }
    if checked == 0 {
        return Err(usage(format!("no gadgets at span {lambda}")));
    }
    Ok(code)
}
