//! Edge labelings: the verifier, λ-inversion, the max-degree bound, and the
//! labeling file format.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ParseError;
use crate::graph::{parse_num, EdgeDistanceIndex, EdgeId, Graph};

pub type Label = u32;

/// Partial association edge id -> label, used for pins.
pub type PartialLabeling = BTreeMap<EdgeId, Label>;

/// A total labeling: `labels[e]` is the label of edge `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabeling(pub Vec<Label>);

impl EdgeLabeling {
    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn get(&self, e: EdgeId) -> Label {
        self.0[e]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest label used, 0 for the empty labeling.
    pub fn span(&self) -> Label {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Whether every pin agrees with this labeling.
    pub fn extends(&self, pins: &PartialLabeling) -> bool {
        pins.iter().all(|(&e, &l)| self.0.get(e) == Some(&l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Distance1Gap,
    Distance2Gap,
    LabelOverSpan,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Distance1Gap => "distance1-gap",
            ViolationKind::Distance2Gap => "distance2-gap",
            ViolationKind::LabelOverSpan => "label-over-span",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edges: Vec<EdgeId>,
    pub labels: Vec<Label>,
}

/// One violation per line: `<kind> <e> [<f>] <labels...>`.
impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.as_str())?;
        for e in &self.edges {
            write!(f, " {e}")?;
        }
        for l in &self.labels {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelingError {
    #[error("labeling has {found} labels but the graph has {expected} edges")]
    WrongLength { expected: usize, found: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("label {label} on edge {edge} exceeds span {span}")]
    OverSpan { edge: EdgeId, label: Label, span: Label },
    #[error("graph has no edges")]
    Edgeless,
}

/// All violations of `lab` as a labeling of `g` with span at most `span`,
/// sorted; empty means valid.
pub fn verify(g: &Graph, lab: &EdgeLabeling, span: Label) -> Result<Vec<Violation>, LabelingError> {
    verify_with_index(&g.distance_index(), lab, span)
}

pub fn verify_with_index(
    idx: &EdgeDistanceIndex,
    lab: &EdgeLabeling,
    span: Label,
) -> Result<Vec<Violation>, LabelingError> {
    if lab.len() != idx.edge_count() {
        return Err(LabelingError::WrongLength {
            expected: idx.edge_count(),
            found: lab.len(),
        });
    }
    let mut out = Vec::new();
    for (e, &l) in lab.0.iter().enumerate() {
        if l > span {
            out.push(Violation {
                kind: ViolationKind::LabelOverSpan,
                edges: vec![e],
                labels: vec![l],
            });
        }
    }
    for (e, f) in idx.dist1_pairs() {
        let (a, b) = (lab.0[e], lab.0[f]);
        if a.abs_diff(b) < 2 {
            out.push(Violation {
                kind: ViolationKind::Distance1Gap,
                edges: vec![e, f],
                labels: vec![a, b],
            });
        }
    }
    for (e, f) in idx.dist2_pairs() {
        let (a, b) = (lab.0[e], lab.0[f]);
        if a == b {
            out.push(Violation {
                kind: ViolationKind::Distance2Gap,
                edges: vec![e, f],
                labels: vec![a, b],
            });
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_valid(g: &Graph, lab: &EdgeLabeling, span: Label) -> bool {
    matches!(verify(g, lab, span), Ok(v) if v.is_empty())
}

/// The λ-inversion `x -> span - x`.
pub fn invert(lab: &EdgeLabeling, span: Label) -> Result<EdgeLabeling, LabelingError> {
    lab.0
        .iter()
        .enumerate()
        .map(|(edge, &label)| {
            span.checked_sub(label)
                .ok_or(LabelingError::OverSpan { edge, label, span })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(EdgeLabeling)
}

/// `2 * (Δ - 1)`: the edges at a maximum-degree vertex need pairwise gaps of two.
pub fn delta_lower_bound(g: &Graph) -> Result<Label, LabelingError> {
    match g.max_degree() {
        0 => Err(LabelingError::Edgeless),
        d => Ok(2 * (d as Label - 1)),
    }
}

/// Parse `<u> <v> <label>` lines, one per edge in graph order.
pub fn parse_labeling(text: &str, g: &Graph) -> Result<EdgeLabeling, ParseError> {
    let mut labels = Vec::with_capacity(g.edge_count());
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::at(line_no, "expected `<u> <v> <label>`"));
        }
        let u = parse_num(fields[0], line_no)?;
        let v = parse_num(fields[1], line_no)?;
        let label = parse_num(fields[2], line_no)?;
        let e = labels.len();
        if e >= g.edge_count() {
            return Err(ParseError::at(line_no, "more labels than graph edges"));
        }
        let (a, b) = g.edge(e);
        if (a, b) != (u, v) && (b, a) != (u, v) {
            return Err(ParseError::at(
                line_no,
                format!("edge {e} is {{{a}, {b}}} in the graph, not {{{u}, {v}}}"),
            ));
        }
        let label = Label::try_from(label)
            .map_err(|_| ParseError::at(line_no, "label too large"))?;
        labels.push(label);
    }
    if labels.len() != g.edge_count() {
        return Err(ParseError::at(
            0,
            format!("expected {} labels, found {}", g.edge_count(), labels.len()),
        ));
    }
    Ok(EdgeLabeling(labels))
}

pub fn format_labeling(g: &Graph, lab: &EdgeLabeling) -> String {
    let mut s = String::new();
    for (&(u, v), l) in g.edges().iter().zip(&lab.0) {
        s.push_str(&format!("{u} {v} {l}\n"));
    }
    s
}
