//! Exhaustive checks of gadget contracts over port labels.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use std::borrow::Cow;

use crate::graph::{EdgeId, Graph};
use crate::labeling::{Label, PartialLabeling};
use crate::solver::{find_labeling, SolveBudget, SolveError, SolveOutcome};

use super::build::with_variables;
use super::gadgets::{Contract, GadgetError, GadgetRole, GadgetTemplate, PortDir};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractReport {
    Pass,
    Counterexample(String),
}

impl ContractReport {
    pub fn passed(&self) -> bool {
        *self == ContractReport::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractError {
    #[error("solver budget exhausted while checking the contract")]
    BudgetExhausted,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

/// Solves for one template. Clause templates are solved with a variable
/// gadget glued onto every input, since a clause only has to behave when it
/// sits next to the outputs it will meet in a reduction.
struct Checker<'a> {
    t: &'a GadgetTemplate,
    graph: Cow<'a, Graph>,
    /// Id in `graph` of each template edge.
    ids: Vec<EdgeId>,
    budget: SolveBudget,
}

impl<'a> Checker<'a> {
    fn new(t: &'a GadgetTemplate, budget: SolveBudget) -> Result<Self, ContractError> {
        if t.role != GadgetRole::Clause {
            return Ok(Checker {
                t,
                graph: Cow::Borrowed(&t.graph),
                ids: (0..t.graph.edge_count()).collect(),
                budget,
            });
        }
        let (graph, ids) = with_variables(t)?;
        // Padding that yielded to a variable edge has no id of its own.
        let ids = ids.into_iter().map(|e| e.unwrap_or(usize::MAX)).collect();
        Ok(Checker {
            t,
            graph: Cow::Owned(graph),
            ids,
            budget,
        })
    }

    /// Whether the template's labeling extends `pins`; the template's own
    /// constants are inverted along with everything else when `inverted`.
    fn feasible(&self, pins: &PartialLabeling, inverted: bool) -> Result<bool, ContractError> {
        let lambda = self.t.lambda;
        let mut all = PartialLabeling::new();
        let t_pins = self
            .t
            .pins
            .iter()
            .map(|(&e, &l)| (e, if inverted { lambda - l } else { l }));
        for (e, l) in pins.iter().map(|(&e, &l)| (e, l)).chain(t_pins) {
            let e = self.ids[e];
            if e == usize::MAX {
                continue;
            }
            if *all.entry(e).or_insert(l) != l {
                return Ok(false);
            }
        }
        match find_labeling(&self.graph, lambda, self.budget, &all)? {
            SolveOutcome::Found(_) => Ok(true),
            SolveOutcome::Infeasible => Ok(false),
            SolveOutcome::BudgetExhausted => Err(ContractError::BudgetExhausted),
        }
    }

    /// Every feasible label tuple on `ports`, in lexicographic order.
    fn tuples(&self, ports: &[EdgeId]) -> Result<Vec<Vec<Label>>, ContractError> {
        let all: Vec<Label> = (0..=self.t.lambda).collect();
        self.tuples_over(ports, &all)
    }

    /// Feasible tuples on `ports` with every label drawn from `labels`.
    fn tuples_over(&self, ports: &[EdgeId], labels: &[Label]) -> Result<Vec<Vec<Label>>, ContractError> {
        let mut out = Vec::new();
        let mut pins = PartialLabeling::new();
        self.extend(ports, labels, 0, &mut pins, &mut out)?;
        Ok(out)
    }

    fn extend(
        &self,
        ports: &[EdgeId],
        labels: &[Label],
        i: usize,
        pins: &mut PartialLabeling,
        out: &mut Vec<Vec<Label>>,
    ) -> Result<(), ContractError> {
        if !self.feasible(pins, false)? {
            return Ok(());
        }
        if i == ports.len() {
            out.push(ports.iter().map(|p| pins[p]).collect());
            return Ok(());
        }
        for &l in labels {
            pins.insert(ports[i], l);
            self.extend(ports, labels, i + 1, pins, out)?;
        }
        pins.remove(&ports[i]);
        Ok(())
    }

    fn variable(&self, f: &[Label], tr: &[Label]) -> Result<ContractReport, ContractError> {
        let outs: Vec<EdgeId> = self.t.outputs().iter().map(|p| p.edge).collect();
        // Labels each output can take on its own; every feasible tuple is
        // made of these.
        for &e in &outs {
            for l in 0..=self.t.lambda {
                if !f.contains(&l) && !tr.contains(&l) && self.feasible(&PartialLabeling::from([(e, l)]), false)? {
                    return Ok(ContractReport::Counterexample(format!(
                        "output edge {e} can take label {l}, outside both alphabets"
                    )));
                }
            }
        }
        let alphabet: Vec<Label> = f.iter().chain(tr).copied().collect();
        let tuples = self.tuples_over(&outs, &alphabet)?;
        let (mut saw_false, mut saw_true) = (false, false);
        for tup in &tuples {
            if tup.iter().all(|l| f.contains(l)) {
                saw_false = true;
            } else if tup.iter().all(|l| tr.contains(l)) {
                saw_true = true;
            } else {
                return Ok(ContractReport::Counterexample(format!(
                    "output labels {tup:?} are not uniformly of one polarity"
                )));
            }
        }
        if !(saw_false && saw_true) {
            return Ok(ContractReport::Counterexample(format!(
                "only {} outputs occur",
                if saw_false { "false" } else if saw_true { "true" } else { "no" }
            )));
        }
        let set: BTreeSet<&Vec<Label>> = tuples.iter().collect();
        for tup in &tuples {
            let inv: Vec<Label> = tup.iter().map(|l| self.t.lambda - l).collect();
            if !set.contains(&inv) {
                return Ok(ContractReport::Counterexample(format!(
                    "output tuple {tup:?} has no inverted counterpart"
                )));
            }
        }
        Ok(ContractReport::Pass)
    }

    fn clause(&self, f: &[Label], tr: &[Label]) -> Result<ContractReport, ContractError> {
        let ins: Vec<EdgeId> = self.t.inputs().iter().map(|p| p.edge).collect();
        let alphabet: Vec<(Label, bool)> = f
            .iter()
            .map(|&l| (l, false))
            .chain(tr.iter().map(|&l| (l, true)))
            .collect();
        let mut idx = vec![0usize; ins.len()];
        loop {
            let pins: PartialLabeling = ins
                .iter()
                .zip(&idx)
                .map(|(&e, &i)| (e, alphabet[i].0))
                .collect();
            let values: Vec<bool> = idx.iter().map(|&i| alphabet[i].1).collect();
            let mixed = values.iter().any(|&v| v != values[0]);
            if self.feasible(&pins, false)? != mixed {
                let labels: Vec<Label> = idx.iter().map(|&i| alphabet[i].0).collect();
                return Ok(ContractReport::Counterexample(format!(
                    "inputs {labels:?} are {} yet the clause {} labelable",
                    if mixed { "mixed" } else { "all equal" },
                    if mixed { "is not" } else { "is" }
                )));
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(ContractReport::Pass);
                }
                idx[k] += 1;
                if idx[k] < alphabet.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// With all inputs pinned to `input` the output must take exactly
    /// `outputs`; the inverted statement is checked as well.
    fn forcing(&self, input: Label, outputs: &[Label]) -> Result<ContractReport, ContractError> {
        let lambda = self.t.lambda;
        let outs = self.t.outputs();
        if outs.len() != 1 {
            return Ok(ContractReport::Counterexample(format!(
                "expected one output, found {}",
                outs.len()
            )));
        }
        let out = outs[0].edge;
        for inverted in [false, true] {
            let m = |l: Label| if inverted { lambda - l } else { l };
            let mut pins: PartialLabeling =
                self.t.inputs().iter().map(|p| (p.edge, m(input))).collect();
            let mut got = Vec::new();
            for l in 0..=lambda {
                pins.insert(out, l);
                if self.feasible(&pins, inverted)? {
                    got.push(l);
                }
            }
            let mut want: Vec<Label> = outputs.iter().map(|&l| m(l)).collect();
            want.sort();
            if got != want {
                return Ok(ContractReport::Counterexample(format!(
                    "inputs pinned to {} give outputs {got:?}, expected {want:?}",
                    m(input)
                )));
            }
        }
        Ok(ContractReport::Pass)
    }
}

/// Check `t` against its declared contract by solving with every relevant
/// combination of port labels pinned. `budget` applies to each solver call.
pub fn check_gadget_contract(
    t: &GadgetTemplate,
    budget: SolveBudget,
) -> Result<ContractReport, ContractError> {
    let c = Checker::new(t, budget)?;
    match &t.contract {
        Contract::Variable {
            false_labels,
            true_labels,
        } => c.variable(false_labels, true_labels),
        Contract::Clause {
            false_labels,
            true_labels,
        } => c.clause(false_labels, true_labels),
        Contract::MiddlePiece { input, outputs } => c.forcing(*input, outputs),
        Contract::Auxiliary { input, output } => c.forcing(*input, &[*output]),
    }
}

/// The `count` non-padding edges nearest to the first port, in
/// breadth-first order over shared endpoints.
fn highlighted(t: &GadgetTemplate, count: usize) -> Vec<EdgeId> {
    let g = &t.graph;
    let Some(first) = t.ports.first() else {
        return Vec::new();
    };
    let skip: BTreeSet<EdgeId> = t.padding.iter().copied().collect();
    let mut seen = vec![false; g.edge_count()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([first.edge]);
    seen[first.edge] = true;
    while let Some(e) = queue.pop_front() {
        if !skip.contains(&e) {
            order.push(e);
            if order.len() == count {
                break;
            }
        }
        let (a, b) = g.edge(e);
        for v in [a, b] {
            for &(_, f) in g.incident(v) {
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
    }
    order
}

/// A textual record of the gadget's branch structure: the feasible port
/// tuples, then every labeling of the first `depth` highlighted edges
/// (first edge in the lower half, up to inversion) marked `ok` when it
/// extends to the whole gadget and `---` at the first label where it
/// cannot.
pub fn enumeration_transcript(
    t: &GadgetTemplate,
    depth: usize,
    budget: SolveBudget,
) -> Result<String, ContractError> {
    let c = Checker::new(t, budget)?;
    let mut s = String::new();
    let arity = t.ports.iter().filter(|p| p.dir == PortDir::Output).count();
    writeln!(s, "gadget {} lambda={} outputs={}", t.role, t.lambda, arity).unwrap();
    for p in &t.ports {
        writeln!(s, "port {} edge={} {:?}", p.name, p.edge, t.graph.edge(p.edge)).unwrap();
    }
    let ports: Vec<EdgeId> = t.ports.iter().map(|p| p.edge).collect();
    if t.role == GadgetRole::Clause || t.role == GadgetRole::Variable {
        for tup in c.tuples(&ports)? {
            writeln!(s, "ports {tup:?}").unwrap();
        }
    }
    let edges = highlighted(t, depth);
    let names: Vec<String> = edges
        .iter()
        .enumerate()
        .map(|(i, &e)| format!("e{i}={:?}", t.graph.edge(e)))
        .collect();
    writeln!(s, "edges {}", names.join(" ")).unwrap();
    let mut pins = PartialLabeling::new();
    let mut prefix = Vec::new();
    branch(&c, &edges, &mut pins, &mut prefix, &mut s)?;
    Ok(s)
}

fn branch(
    c: &Checker<'_>,
    edges: &[EdgeId],
    pins: &mut PartialLabeling,
    prefix: &mut Vec<Label>,
    s: &mut String,
) -> Result<(), ContractError> {
    let i = prefix.len();
    let row = |p: &[Label]| {
        p.iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    if !c.feasible(pins, false)? {
        writeln!(s, "{} ---", row(prefix)).unwrap();
        return Ok(());
    }
    if i == edges.len() {
        writeln!(s, "{} ok", row(prefix)).unwrap();
        return Ok(());
    }
    let top = if i == 0 { c.t.lambda / 2 } else { c.t.lambda };
    for l in 0..=top {
        pins.insert(edges[i], l);
        prefix.push(l);
        branch(c, edges, pins, prefix, s)?;
        prefix.pop();
    }
    pins.remove(&edges[i]);
    Ok(())
}
