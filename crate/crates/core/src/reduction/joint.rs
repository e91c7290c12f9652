//! Completing the labeling of a `K_{2,k−1}` joint between an odd side and
//! an even side, by a perfect matching between compatible label pairs.

use std::fmt;

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::graph::{EdgeId, Graph};
use crate::labeling::{EdgeLabeling, Label, PartialLabeling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointCase {
    I,
    II,
    III,
    IV,
}

impl JointCase {
    pub const ALL: [JointCase; 4] = [JointCase::I, JointCase::II, JointCase::III, JointCase::IV];

    /// Degree of `u` and `v` the case is stated for.
    pub fn degree(self, lambda: Label) -> usize {
        let max = lambda as usize / 2 + 1;
        match self {
            JointCase::I => max,
            _ => max - 1,
        }
    }

    fn needs_odd(self) -> bool {
        self != JointCase::II
    }

    /// Labels of the two edges entering the joint at `u` and `v`.
    fn entry_labels(self) -> (Label, Label) {
        match self {
            JointCase::I | JointCase::II => (0, 0),
            JointCase::III => (2, 3),
            JointCase::IV => (4, 5),
        }
    }

    /// Odd labels excluded on the `u` side and even labels on the `v` side.
    fn excluded(self, lambda: Label) -> (Vec<Label>, Vec<Label>) {
        match self {
            JointCase::I => (vec![1], vec![0]),
            JointCase::II => (vec![1], vec![0, lambda]),
            JointCase::III => (vec![1, 3], vec![2, 4]),
            JointCase::IV => (vec![3, 5], vec![4, 6]),
        }
    }

    /// Pairs added so that every vertex of the incompatibility graph has
    /// degree two, written (odd, even).
    fn patch(self, lambda: Label) -> Vec<(Label, Label)> {
        match self {
            JointCase::I => vec![(lambda, 2)],
            JointCase::II => vec![(lambda - 1, 2)],
            JointCase::III => vec![(5, 0), (lambda, 0)],
            JointCase::IV => vec![(7, 2), (lambda, 0)],
        }
    }

    /// Labels on the output stubs at `w`.
    fn outputs(self, lambda: Label) -> Vec<Label> {
        match self {
            JointCase::I => vec![1],
            JointCase::II => vec![1, lambda],
            _ => vec![],
        }
    }
}

impl fmt::Display for JointCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JointCase::I => "I",
            JointCase::II => "II",
            JointCase::III => "III",
            JointCase::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JointError {
    #[error("case {case} does not apply to span {lambda} with degree {k}")]
    Precondition { case: JointCase, lambda: Label, k: usize },
    #[error("incompatibility graph is not 2-regular after patching")]
    NotRegular,
    #[error("no perfect matching between the two label sides")]
    NoMatching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCompletion {
    pub case: JointCase,
    pub lambda: Label,
    pub k: usize,
    /// `u = 0`, `v = 1`, entry stubs `2` and `3`, then the common
    /// neighbours (the first is `w`) and any output stubs.
    pub graph: Graph,
    pub labeling: EdgeLabeling,
    /// The two entry edges with the labels the case prescribes.
    pub pinned: PartialLabeling,
    /// Output edges at `w` with their labels.
    pub outputs: Vec<(EdgeId, Label)>,
    /// Matched (odd, even) label pairs, one per common neighbour.
    pub matching: Vec<(Label, Label)>,
    /// Degree of every label in the complement of the patched
    /// incompatibility graph, odd side first.
    pub complement_degrees: Vec<usize>,
}

/// Label the joint for `case` at span `lambda` with `deg(u) = deg(v) = k`.
pub fn joint_complete(case: JointCase, lambda: Label, k: usize) -> Result<JointCompletion, JointError> {
    let bad = JointError::Precondition { case, lambda, k };
    let odd_span = lambda % 2 == 1;
    if k < 4 || k != case.degree(lambda) || case.needs_odd() != odd_span {
        return Err(bad);
    }
    if case == JointCase::IV && lambda < 9 {
        return Err(bad);
    }
    let (skip_odd, skip_even) = case.excluded(lambda);
    let left: Vec<Label> = (0..=lambda)
        .filter(|x| x % 2 == 1 && !skip_odd.contains(x))
        .collect();
    let right: Vec<Label> = (0..=lambda)
        .filter(|x| x % 2 == 0 && !skip_even.contains(x))
        .collect();
    if left.len() != k - 1 || right.len() != k - 1 {
        return Err(bad);
    }

    let mut clash = vec![vec![false; right.len()]; left.len()];
    for (i, &o) in left.iter().enumerate() {
        for (j, &e) in right.iter().enumerate() {
            clash[i][j] = o.abs_diff(e) == 1;
        }
    }
    for (o, e) in case.patch(lambda) {
        let i = left.iter().position(|&x| x == o).ok_or(JointError::NotRegular)?;
        let j = right.iter().position(|&x| x == e).ok_or(JointError::NotRegular)?;
        if clash[i][j] {
            return Err(JointError::NotRegular);
        }
        clash[i][j] = true;
    }
    let left_deg = clash.iter().map(|r| r.iter().filter(|&&c| c).count());
    let right_deg = (0..right.len()).map(|j| clash.iter().filter(|r| r[j]).count());
    if left_deg.chain(right_deg).any(|d| d != 2) {
        return Err(JointError::NotRegular);
    }

    let mut h: UnGraph<Label, ()> = UnGraph::new_undirected();
    let ln: Vec<NodeIndex> = left.iter().map(|&o| h.add_node(o)).collect();
    let rn: Vec<NodeIndex> = right.iter().map(|&e| h.add_node(e)).collect();
    for i in 0..left.len() {
        for j in 0..right.len() {
            if !clash[i][j] {
                h.add_edge(ln[i], rn[j], ());
            }
        }
    }
    let complement_degrees = ln
        .iter()
        .chain(&rn)
        .map(|&n| h.neighbors(n).count())
        .collect();
    let m = maximum_matching(&h);
    if !m.is_perfect() {
        return Err(JointError::NoMatching);
    }
    let mut matching: Vec<(Label, Label)> = ln
        .iter()
        .map(|&n| {
            let mate = m.mate(n).expect("perfect matching covers every vertex");
            (h[n], h[mate])
        })
        .collect();

    // The vertex carrying outputs must keep its inner labels clear of them.
    let outputs = case.outputs(lambda);
    let fits = |&(o, e): &(Label, Label)| {
        outputs
            .iter()
            .all(|&x| o.abs_diff(x) >= 2 && e.abs_diff(x) >= 2)
    };
    let w = matching.iter().position(fits).ok_or(JointError::NoMatching)?;
    matching.swap(0, w);

    let (l1, l2) = case.entry_labels();
    let mut edges = vec![(0, 2), (1, 3)];
    let mut labels = vec![l1, l2];
    for (j, &(o, e)) in matching.iter().enumerate() {
        let z = 4 + j;
        edges.push((0, z));
        labels.push(o);
        edges.push((1, z));
        labels.push(e);
    }
    let mut out_edges = Vec::new();
    let mut n = 4 + matching.len();
    for &x in &outputs {
        out_edges.push((edges.len(), x));
        edges.push((4, n));
        labels.push(x);
        n += 1;
    }
    let graph = Graph::new(n, edges).expect("joint graph is simple");
    Ok(JointCompletion {
        case,
        lambda,
        k,
        graph,
        labeling: EdgeLabeling(labels),
        pinned: PartialLabeling::from([(0, l1), (1, l2)]),
        outputs: out_edges,
        matching,
        complement_degrees,
    })
}
