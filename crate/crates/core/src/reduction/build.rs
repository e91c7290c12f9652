//! Assembling `G_φ` from gadget templates, and reading assignments back.

use std::collections::HashMap;

use crate::error::ParseError;
use crate::graph::{parse_num, EdgeId, Graph};
use crate::labeling::{verify, EdgeLabeling, Label};

use super::formula::{Assignment, Formula3MCNF};
use super::gadgets::{gadget, max_degree_for, GadgetError, GadgetRole, GadgetTemplate};
use super::Polarity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub graph: Graph,
    pub lambda: Label,
    /// Output edges of each variable gadget, in clause order. Variables that
    /// occur in no clause get no gadget and no ports.
    pub variable_ports: Vec<Vec<EdgeId>>,
    /// The three input edges of each clause gadget.
    pub clause_ports: Vec<[EdgeId; 3]>,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("labeling is not valid for the reduction graph at span {0}")]
    InvalidLabeling(Label),
    #[error("port edge {edge} of variable {var} has label {label}, outside both polarity classes")]
    Unclassified { var: usize, edge: EdgeId, label: Label },
    #[error("ports of variable {0} disagree on its value")]
    Inconsistent(usize),
}

/// Vertices and edges collected from several templates before gluing.
#[derive(Default)]
struct Assembly {
    parent: Vec<usize>,
    edges: Vec<(usize, usize)>,
    padding: Vec<bool>,
}

impl Assembly {
    /// Copy `t` in and return its vertex offset and edge offset.
    fn add(&mut self, t: &GadgetTemplate) -> (usize, usize) {
        let (voff, eoff) = (self.parent.len(), self.edges.len());
        self.parent.extend(voff..voff + t.graph.vertex_count());
        self.edges
            .extend(t.graph.edges().iter().map(|&(a, b)| (a + voff, b + voff)));
        let mut pad = vec![false; t.graph.edge_count()];
        for &e in &t.padding {
            pad[e] = true;
        }
        self.padding.extend(pad);
        (voff, eoff)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = rb.min(ra);
        }
    }

    /// Merge identified vertices, collapse duplicate edges, drop padding
    /// where a merged vertex exceeds `max_deg`, and renumber. Returns the
    /// graph and the final id of every assembled edge that survives.
    fn finish(mut self, max_deg: usize) -> (Graph, Vec<Option<EdgeId>>) {
        let m = self.edges.len();
        let mut key_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut rep: Vec<usize> = (0..m).collect();
        let mut ends = Vec::with_capacity(m);
        let mut alive = vec![true; m];
        for e in 0..m {
            let (a, b) = self.edges[e];
            let (a, b) = (self.find(a), self.find(b));
            let key = (a.min(b), a.max(b));
            ends.push(key);
            if let Some(&first) = key_of.get(&key) {
                rep[e] = first;
                alive[e] = false;
            } else {
                key_of.insert(key, e);
            }
        }
        let n = self.parent.len();
        let mut deg = vec![0usize; n];
        for e in (0..m).filter(|&e| alive[e]) {
            deg[ends[e].0] += 1;
            deg[ends[e].1] += 1;
        }
        // Later templates are dropped first, so clause padding yields to
        // the variable structure it is glued onto.
        for e in (0..m).rev() {
            if !alive[e] || !self.padding[e] {
                continue;
            }
            let (a, b) = ends[e];
            let (hub, leaf) = if deg[a] == 1 { (b, a) } else { (a, b) };
            if deg[leaf] == 1 && deg[hub] > max_deg {
                alive[e] = false;
                deg[hub] -= 1;
                deg[leaf] -= 1;
            }
        }
        assert!(
            deg.iter().all(|&d| d <= max_deg),
            "gluing left a vertex above the maximum degree"
        );
        let mut new_id = vec![usize::MAX; n];
        let mut next = 0;
        let mut out_edges = Vec::new();
        let mut final_id = vec![None; m];
        for e in (0..m).filter(|&e| alive[e]) {
            let (a, b) = self.edges[e];
            let mut map = |x: usize| {
                let r = self.find(x);
                if new_id[r] == usize::MAX {
                    new_id[r] = next;
                    next += 1;
                }
                new_id[r]
            };
            let (a, b) = (map(a), map(b));
            final_id[e] = Some(out_edges.len());
            out_edges.push((a, b));
        }
        for e in 0..m {
            if final_id[e].is_none() && rep[e] != e {
                final_id[e] = final_id[rep[e]];
            }
        }
        let g = Graph::new(next, out_edges).expect("glued graph is simple");
        (g, final_id)
    }
}

/// Build the graph for `f` at span `lambda`: one variable gadget per
/// occurring variable with one output per occurrence, one clause gadget per
/// clause, and every clause input identified with the next unused output of
/// its variable.
pub fn build_reduction(f: &Formula3MCNF, lambda: Label) -> Result<ReductionArtifact, BuildError> {
    gadget(lambda, GadgetRole::Clause, 3)?;
    let occ = f.occurrences();
    let mut asm = Assembly::default();
    // Per variable: (inner, outer, assembled edge) of each output.
    let mut outs: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); f.variable_count()];
    for (v, &k) in occ.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let t = gadget(lambda, GadgetRole::Variable, k)?;
        let (voff, eoff) = asm.add(&t);
        outs[v] = t
            .outputs()
            .iter()
            .map(|p| (p.inner + voff, p.outer + voff, p.edge + eoff))
            .collect();
    }
    let mut used = vec![0usize; f.variable_count()];
    let mut clause_edges = Vec::new();
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); f.variable_count()];
    for c in f.clauses() {
        let t = gadget(lambda, GadgetRole::Clause, 3)?;
        let (voff, eoff) = asm.add(&t);
        let mut ins = [0usize; 3];
        for (i, (&x, p)) in c.iter().zip(t.inputs()).enumerate() {
            let (inner, outer, e) = outs[x][used[x]];
            used[x] += 1;
            asm.union(inner, p.outer + voff);
            asm.union(outer, p.inner + voff);
            ins[i] = p.edge + eoff;
            var_edges[x].push(e);
        }
        clause_edges.push(ins);
    }
    let (graph, ids) = asm.finish(max_degree_for(lambda));
    let id = |e: usize| ids[e].expect("port edges survive gluing");
    Ok(ReductionArtifact {
        graph,
        lambda,
        variable_ports: var_edges
            .iter()
            .map(|es| es.iter().map(|&e| id(e)).collect())
            .collect(),
        clause_ports: clause_edges.iter().map(|c| c.map(id)).collect(),
        polarity: Polarity::standard(lambda),
    })
}

/// `clause` with a one-output variable gadget glued onto each input, the
/// way [`build_reduction`] glues them. Returns the graph and the new id of
/// every clause edge.
pub(crate) fn with_variables(clause: &GadgetTemplate) -> Result<(Graph, Vec<Option<EdgeId>>), GadgetError> {
    let lambda = clause.lambda;
    let mut asm = Assembly::default();
    let mut outs = Vec::new();
    for _ in clause.inputs() {
        let t = gadget(lambda, GadgetRole::Variable, 1)?;
        let (voff, _) = asm.add(&t);
        let p = t.outputs()[0];
        outs.push((p.inner + voff, p.outer + voff));
    }
    let (voff, eoff) = asm.add(clause);
    for (&(inner, outer), p) in outs.iter().zip(clause.inputs()) {
        asm.union(inner, p.outer + voff);
        asm.union(outer, p.inner + voff);
    }
    let (graph, ids) = asm.finish(max_degree_for(lambda));
    Ok((graph, ids[eoff..].to_vec()))
}

/// Read each variable's value off its port labels. Variables without ports
/// are false.
pub fn decode_assignment(art: &ReductionArtifact, lab: &EdgeLabeling) -> Result<Assignment, DecodeError> {
    match verify(&art.graph, lab, art.lambda) {
        Ok(v) if v.is_empty() => {}
        _ => return Err(DecodeError::InvalidLabeling(art.lambda)),
    }
    let mut values = Vec::with_capacity(art.variable_ports.len());
    for (var, ports) in art.variable_ports.iter().enumerate() {
        let mut value = None;
        for &edge in ports {
            let label = lab.get(edge);
            let b = art
                .polarity
                .value(label)
                .ok_or(DecodeError::Unclassified { var, edge, label })?;
            if value.is_some_and(|x| x != b) {
                return Err(DecodeError::Inconsistent(var));
            }
            value = Some(b);
        }
        values.push(value.unwrap_or(false));
    }
    Ok(Assignment(values))
}

/// Port maps as stored next to a reduction graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sidecar {
    pub variable_ports: Vec<Vec<EdgeId>>,
    pub clause_ports: Vec<[EdgeId; 3]>,
}

/// `c vars <n> clauses <m>` followed by `var <v> out <e>` and
/// `clause <c> in <e> <e> <e>` lines.
pub fn format_sidecar(art: &ReductionArtifact) -> String {
    let mut s = format!(
        "c vars {} clauses {} lambda {}\n",
        art.variable_ports.len(),
        art.clause_ports.len(),
        art.lambda
    );
    for (v, ports) in art.variable_ports.iter().enumerate() {
        for e in ports {
            s.push_str(&format!("var {v} out {e}\n"));
        }
    }
    for (c, p) in art.clause_ports.iter().enumerate() {
        s.push_str(&format!("clause {c} in {} {} {}\n", p[0], p[1], p[2]));
    }
    s
}

pub fn parse_sidecar(text: &str) -> Result<Sidecar, ParseError> {
    let mut vars: Vec<Vec<EdgeId>> = Vec::new();
    let mut clauses: Vec<(usize, [EdgeId; 3])> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let f: Vec<&str> = raw.split_whitespace().collect();
        match f.as_slice() {
            [] => {}
            ["c", "vars", n, ..] => {
                let n = parse_num(n, line_no)?;
                if vars.len() < n {
                    vars.resize(n, Vec::new());
                }
            }
            ["c", ..] => {}
            ["var", v, "out", e] => {
                let v = parse_num(v, line_no)?;
                if vars.len() <= v {
                    vars.resize(v + 1, Vec::new());
                }
                vars[v].push(parse_num(e, line_no)?);
            }
            ["clause", c, "in", a, b, d] => {
                let ids = [
                    parse_num(a, line_no)?,
                    parse_num(b, line_no)?,
                    parse_num(d, line_no)?,
                ];
                clauses.push((parse_num(c, line_no)?, ids));
            }
            _ => return Err(ParseError::at(line_no, "unrecognized sidecar line")),
        }
    }
    clauses.sort_by_key(|c| c.0);
    if clauses.iter().enumerate().any(|(i, c)| c.0 != i) {
        return Err(ParseError::at(0, "clause indices are not 0..m"));
    }
    Ok(Sidecar {
        variable_ports: vars,
        clause_ports: clauses.into_iter().map(|c| c.1).collect(),
    })
}
