//! Deciding `λ'(G) ≤ λ` for `λ ≤ 4` and building such labelings.
//!
//! Up to span 3 only short paths qualify. At span 4 the maximum degree is
//! three and a vertex of degree three sees exactly `{0, 2, 4}`; the edge
//! labeled 2 must end in a leaf. So a 4-labelable component is a path or a
//! cycle with pendant edges hung at some vertices ("hairy" vertices), and
//! the question reduces to the spacing of the hairy vertices along it.

use std::fmt;

use crate::graph::{EdgeId, Graph};
use crate::labeling::{EdgeLabeling, Label};
use crate::solver::{find_labeling, SolveBudget, SolveOutcome};

/// Edge labels of the period-4 path pattern.
const PERIOD: [Label; 4] = [0, 3, 1, 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureTag {
    /// The path with this many vertices, `1..=5`.
    TinyPath(usize),
    GeneralizedPath,
    GeneralizedCycle,
    Unlabelable4,
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureTag::TinyPath(n) => write!(f, "tiny-path-{n}"),
            StructureTag::GeneralizedPath => f.write_str("generalized-path"),
            StructureTag::GeneralizedCycle => f.write_str("generalized-cycle"),
            StructureTag::Unlabelable4 => f.write_str("unlabelable-4"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureClass {
    pub tag: StructureTag,
    /// For generalized shapes, the path or cycle in order. A path skeleton
    /// runs from leaf to leaf; every vertex off it is a pendant leaf.
    pub skeleton: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HairyProfile {
    /// Indices into the skeleton of the vertices carrying a pendant.
    pub hairy_positions: Vec<usize>,
    /// Skeleton distances between consecutive hairy vertices. A cycle's
    /// list is cyclic and reported in its least rotation or reflection.
    pub gaps: Vec<usize>,
    /// Pendants at each hairy vertex, in `hairy_positions` order.
    pub pendant_multiplicity: Vec<usize>,
}

/// Labels along consecutive skeleton edges; `bars[i]` is the number of
/// skeleton edges before the `i`-th hairy vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentSequence {
    pub labels: Vec<Label>,
    pub bars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecognizerError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("profile needs a generalized path or cycle, got {0}")]
    WrongClass(StructureTag),
    #[error("span {0} is outside 0..=4")]
    SpanOutOfRange(Label),
    #[error("graph has no labeling with span 4")]
    NotLabelable,
}

/// Span of the path on `n` vertices, for `n ≤ 5`.
fn tiny_span(n: usize) -> Label {
    match n {
        0..=2 => 0,
        3 => 2,
        _ => 3,
    }
}

fn is_path(g: &Graph) -> bool {
    let n = g.vertex_count();
    g.edge_count() + 1 == n && (0..n).all(|v| g.degree(v) <= 2)
}

/// Walk a path or cycle in `g` restricted to `keep`, starting at `start`.
fn walk(g: &Graph, keep: &[bool], start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g
            .incident(cur)
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| keep[w] && w != prev && w != start && !order[1..].contains(&w));
        match next {
            Some(w) => {
                order.push(w);
                prev = cur;
                cur = w;
            }
            None => return order,
        }
    }
}

/// Classify a connected graph by the shapes that can have span 4.
pub fn classify(g: &Graph) -> Result<StructureClass, RecognizerError> {
    if !g.is_connected() {
        return Err(RecognizerError::Disconnected);
    }
    let n = g.vertex_count();
    let unlabelable = StructureClass {
        tag: StructureTag::Unlabelable4,
        skeleton: Vec::new(),
    };
    if n <= 1 || (is_path(g) && n <= 5) {
        let skeleton = if n == 0 {
            Vec::new()
        } else {
            let end = (0..n).find(|&v| g.degree(v) <= 1).unwrap_or(0);
            walk(g, &vec![true; n], end)
        };
        return Ok(StructureClass {
            tag: StructureTag::TinyPath(n.max(1)),
            skeleton,
        });
    }
    if g.max_degree() > 3 {
        return Ok(unlabelable);
    }
    // Remove the leaves; what is left must be a path or a cycle.
    let core: Vec<bool> = (0..n).map(|v| g.degree(v) >= 2).collect();
    let core_deg = |v: usize| g.incident(v).iter().filter(|&&(w, _)| core[w]).count();
    let core_vertices: Vec<usize> = (0..n).filter(|&v| core[v]).collect();
    if core_vertices.iter().any(|&v| core_deg(v) > 2) {
        return Ok(unlabelable);
    }
    let core_edges = g.edges().iter().filter(|&&(a, b)| core[a] && core[b]).count();
    if core_edges == core_vertices.len() {
        // Leaves only hang off the cycle, and the core is connected because
        // removing leaves keeps a connected graph connected.
        let skeleton = walk(g, &core, core_vertices[0]);
        return Ok(StructureClass {
            tag: StructureTag::GeneralizedCycle,
            skeleton,
        });
    }
    if g.edge_count() + 1 != n {
        return Ok(unlabelable);
    }
    // A tree whose inner vertices form a path: extend it by a leaf at each
    // end so that every vertex of degree three lies inside the skeleton.
    let leaf_of = |v: usize, not: usize| {
        g.incident(v)
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| g.degree(w) == 1 && w != not)
    };
    let skeleton = match core_vertices.as_slice() {
        [] => unreachable!("paths on six or more vertices have inner vertices"),
        [c] => {
            let a = leaf_of(*c, usize::MAX).expect("star has leaves");
            let b = leaf_of(*c, a).expect("star has two leaves");
            vec![a, *c, b]
        }
        _ => {
            let end = *core_vertices
                .iter()
                .find(|&&v| core_deg(v) == 1)
                .expect("inner path has ends");
            let inner = walk(g, &core, end);
            let last = *inner.last().unwrap();
            let a = leaf_of(end, usize::MAX).expect("inner end has a leaf");
            let b = leaf_of(last, usize::MAX).expect("inner end has a leaf");
            let mut s = vec![a];
            s.extend(inner);
            s.push(b);
            s
        }
    };
    Ok(StructureClass {
        tag: StructureTag::GeneralizedPath,
        skeleton,
    })
}

/// Positions of hairy vertices and the raw gap list in skeleton order.
fn raw_profile(g: &Graph, cls: &StructureClass) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let s = &cls.skeleton;
    let cyclic = cls.tag == StructureTag::GeneralizedCycle;
    let skeleton_degree = |i: usize| {
        if cyclic || (i > 0 && i + 1 < s.len()) {
            2
        } else {
            1
        }
    };
    let mut pos = Vec::new();
    let mut mult = Vec::new();
    for (i, &v) in s.iter().enumerate() {
        let extra = g.degree(v) - skeleton_degree(i).min(g.degree(v));
        if extra > 0 {
            pos.push(i);
            mult.push(extra);
        }
    }
    let mut gaps: Vec<usize> = pos.windows(2).map(|w| w[1] - w[0]).collect();
    if cyclic && !pos.is_empty() {
        gaps.push(pos[0] + s.len() - pos[pos.len() - 1]);
    }
    (pos, gaps, mult)
}

/// Least rotation or reflection of a cyclic list.
pub fn canonical_cycle(gaps: &[usize]) -> Vec<usize> {
    let n = gaps.len();
    let mut best: Option<Vec<usize>> = None;
    for dir in [false, true] {
        let seq: Vec<usize> = if dir {
            gaps.iter().rev().copied().collect()
        } else {
            gaps.to_vec()
        };
        for r in 0..n {
            let rot: Vec<usize> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

pub fn hairy_profile(g: &Graph, cls: &StructureClass) -> Result<HairyProfile, RecognizerError> {
    match cls.tag {
        StructureTag::GeneralizedPath | StructureTag::GeneralizedCycle => {}
        tag => return Err(RecognizerError::WrongClass(tag)),
    }
    let (hairy_positions, mut gaps, pendant_multiplicity) = raw_profile(g, cls);
    if cls.tag == StructureTag::GeneralizedCycle {
        gaps = canonical_cycle(&gaps);
    }
    Ok(HairyProfile {
        hairy_positions,
        gaps,
        pendant_multiplicity,
    })
}

/// Every gap between consecutive hairy vertices on a path is 4 or at least 8.
pub fn path_condition(gaps: &[usize]) -> bool {
    gaps.iter().all(|&d| d == 4 || d >= 8)
}

/// Gaps that admit a 0 ... 0 segment. Length 15 does too, by
/// `031420413024130`.
fn absorbs(d: usize) -> bool {
    d >= 13
}

/// Gaps on a cycle are 4, 8, 9 or at least 10; gaps of exactly 10 come in
/// even number unless some gap is at least 13.
pub fn cycle_condition(gaps: &[usize]) -> bool {
    if !gaps.iter().all(|&d| matches!(d, 4 | 8 | 9) || d >= 10) {
        return false;
    }
    let tens = gaps.iter().filter(|&&d| d == 10).count();
    tens % 2 == 0 || gaps.iter().any(|&d| absorbs(d))
}

/// Inner vertices of a path skeleton, i.e. the ones left after deleting
/// every leaf, span this many edges at most for the exact fallback.
const FALLBACK_CORE_EDGES: usize = 2;

fn core_edges(g: &Graph) -> usize {
    g.edges()
        .iter()
        .filter(|&&(a, b)| g.degree(a) >= 2 && g.degree(b) >= 2)
        .count()
}

fn exact_at_four(g: &Graph) -> Option<EdgeLabeling> {
    match find_labeling(g, 4, SolveBudget::UNLIMITED, &Default::default()) {
        Ok(SolveOutcome::Found(l)) => Some(l),
        _ => None,
    }
}

/// Decision for one connected component.
fn component_le(g: &Graph, lambda: Label) -> bool {
    let cls = classify(g).expect("component is connected");
    match cls.tag {
        StructureTag::TinyPath(n) => tiny_span(n) <= lambda,
        _ if lambda < 4 => false,
        StructureTag::Unlabelable4 => false,
        StructureTag::GeneralizedPath => {
            if core_edges(g) <= FALLBACK_CORE_EDGES {
                return exact_at_four(g).is_some();
            }
            let (_, gaps, _) = raw_profile(g, &cls);
            path_condition(&gaps)
        }
        StructureTag::GeneralizedCycle => {
            let (_, gaps, _) = raw_profile(g, &cls);
            cycle_condition(&gaps)
        }
    }
}

/// Whether `λ'(g) ≤ lambda` for a connected graph.
pub fn decide_span_le(g: &Graph, lambda: Label) -> Result<bool, RecognizerError> {
    if lambda > 4 {
        return Err(RecognizerError::SpanOutOfRange(lambda));
    }
    if !g.is_connected() {
        return Err(RecognizerError::Disconnected);
    }
    Ok(component_le(g, lambda))
}

fn inverted(seq: &[Label]) -> Vec<Label> {
    seq.iter().map(|&x| 4 - x).collect()
}

fn digits(s: &str) -> Vec<Label> {
    s.bytes().map(|b| Label::from(b - b'0')).collect()
}

/// Labels for a stretch of `d` skeleton edges between two hairy vertices,
/// starting with 0. A plain segment ends in 4, so the next one starts at 0
/// again; a turning segment ends in 0 and the next one must be inverted.
pub fn segment(d: usize, turning: bool) -> Option<Vec<Label>> {
    let mut pumps = 0;
    while 4 * pumps <= d {
        let r = d - 4 * pumps;
        let core = if turning {
            // 031 (420)^k 4130, and one odd length out
            match r {
                15 => Some("031420413024130".to_string()),
                _ if r >= 10 && (r - 7) % 3 == 0 => Some(format!("031{}4130", "420".repeat((r - 7) / 3))),
                _ => None,
            }
        } else {
            match r {
                4 => Some("0314".to_string()),
                9 => Some("031420314".to_string()),
                // 0314 (024)^k 0314
                _ if r >= 8 && (r - 8) % 3 == 0 => Some(format!("0314{}0314", "024".repeat((r - 8) / 3))),
                _ => None,
            }
        };
        if let Some(c) = core {
            return Some(digits(&format!("{}{c}", "0314".repeat(pumps))));
        }
        pumps += 1;
    }
    None
}

fn plain_cycle(n: usize) -> Vec<Label> {
    match n {
        3 => digits("024"),
        5 => digits("02413"),
        _ => {
            let threes = (0..=n / 3).find(|b| (n - 3 * b) % 4 == 0).expect("n ≥ 6 splits into 3s and 4s");
            digits(&format!("{}{}", "0314".repeat((n - 3 * threes) / 4), "024".repeat(threes)))
        }
    }
}

/// Skeleton labels for a generalized path or cycle at span 4.
pub fn skeleton_sequence(g: &Graph, cls: &StructureClass) -> Result<SegmentSequence, RecognizerError> {
    let (pos, gaps, _) = match cls.tag {
        StructureTag::GeneralizedPath | StructureTag::GeneralizedCycle => raw_profile(g, cls),
        tag => return Err(RecognizerError::WrongClass(tag)),
    };
    let cyclic = cls.tag == StructureTag::GeneralizedCycle;
    let len = if cyclic {
        cls.skeleton.len()
    } else {
        cls.skeleton.len() - 1
    };
    if pos.is_empty() {
        let labels = if cyclic {
            plain_cycle(len)
        } else {
            (0..len).map(|j| PERIOD[j % 4]).collect()
        };
        return Ok(SegmentSequence { labels, bars: pos });
    }
    if !(if cyclic { cycle_condition(&gaps) } else { path_condition(&gaps) }) {
        return Err(RecognizerError::NotLabelable);
    }
    // Which segments turn: every 10 must, and on a cycle one absorbing
    // segment fixes an odd count.
    let mut turn: Vec<bool> = gaps.iter().map(|&d| d == 10).collect();
    if cyclic && turn.iter().filter(|&&t| t).count() % 2 == 1 {
        let k = gaps.iter().position(|&d| absorbs(d)).expect("cycle condition holds");
        turn[k] = true;
    }
    let mut labels = vec![0; len];
    let start = pos[0];
    let mut flipped = false;
    let mut at = start;
    for (&d, &t) in gaps.iter().zip(&turn) {
        let seg = segment(d, t).expect("gap passed the condition");
        let seg = if flipped { inverted(&seg) } else { seg };
        for (i, &x) in seg.iter().enumerate() {
            labels[(at + i) % len] = x;
        }
        at += d;
        flipped ^= t;
    }
    if !cyclic {
        // Periodic tails: ...0314 | before the first bar, | 0314... after
        // the last, the latter in the current polarity.
        for (j, l) in labels.iter_mut().enumerate().take(start) {
            *l = PERIOD[(j + 4 - start % 4) % 4];
        }
        let last = pos[pos.len() - 1];
        for (j, l) in labels.iter_mut().enumerate().skip(last) {
            let x = PERIOD[(j - last) % 4];
            *l = if flipped { 4 - x } else { x };
        }
    }
    Ok(SegmentSequence { labels, bars: pos })
}

fn tiny_labels(n: usize) -> Vec<Label> {
    match n {
        0..=1 => vec![],
        2 => vec![0],
        3 => vec![0, 2],
        4 => vec![1, 3, 0],
        _ => vec![1, 3, 0, 2],
    }
}

/// Labeling of one component with span at most 4.
fn construct_component(g: &Graph) -> Result<EdgeLabeling, RecognizerError> {
    let cls = classify(g)?;
    let mut labels = vec![Label::MAX; g.edge_count()];
    let on_skeleton = |seq: &[Label], labels: &mut [Label], cyclic: bool| {
        let s = &cls.skeleton;
        let steps = if cyclic { s.len() } else { s.len() - 1 };
        for (j, &x) in seq.iter().enumerate().take(steps) {
            let e: EdgeId = g.edge_between(s[j], s[(j + 1) % s.len()]).expect("skeleton edge");
            labels[e] = x;
        }
    };
    match cls.tag {
        StructureTag::TinyPath(n) => on_skeleton(&tiny_labels(n), &mut labels, false),
        StructureTag::Unlabelable4 => return Err(RecognizerError::NotLabelable),
        StructureTag::GeneralizedPath if core_edges(g) <= FALLBACK_CORE_EDGES => {
            return exact_at_four(g).ok_or(RecognizerError::NotLabelable);
        }
        tag => {
            let seq = skeleton_sequence(g, &cls)?;
            on_skeleton(&seq.labels, &mut labels, tag == StructureTag::GeneralizedCycle);
        }
    }
    // Everything left is a pendant at a hairy vertex.
    for l in labels.iter_mut().filter(|l| **l == Label::MAX) {
        *l = 2;
    }
    Ok(EdgeLabeling(labels))
}

/// A labeling of `g` with span at most 4, and its largest label.
pub fn construct_labeling_small(g: &Graph) -> Result<(EdgeLabeling, Label), RecognizerError> {
    let mut labels = vec![0; g.edge_count()];
    for comp in g.components() {
        let (sub, origin) = g.induced(&comp);
        let lab = construct_component(&sub)?;
        for (i, &e) in origin.iter().enumerate() {
            labels[e] = lab.get(i);
        }
    }
    let lab = EdgeLabeling(labels);
    let span = lab.span();
    Ok((lab, span))
}

/// `class=<tag> gaps=<list> span_le4=<bool>` for a connected graph.
pub fn class_line(g: &Graph) -> Result<String, RecognizerError> {
    let cls = classify(g)?;
    let gaps = match cls.tag {
        StructureTag::GeneralizedPath | StructureTag::GeneralizedCycle => hairy_profile(g, &cls)?.gaps,
        _ => Vec::new(),
    };
    let list: Vec<String> = gaps.iter().map(|d| d.to_string()).collect();
    Ok(format!(
        "class={} gaps={} span_le4={}",
        cls.tag,
        list.join(","),
        decide_span_le(g, 4)?
    ))
}

/// Outcome of a recognizer-versus-solver campaign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleReport {
    /// Number of (graph, span) pairs checked.
    Agree(usize),
    Discrepancy {
        graph: Graph,
        lambda: Label,
        recognizer: bool,
        solver: bool,
    },
    /// The solver gave up; cannot happen within the vertex cap in practice.
    Budget { graph: Graph, lambda: Label },
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleReport::Agree(n) => write!(f, "OK {n}"),
            OracleReport::Discrepancy {
                graph,
                lambda,
                recognizer,
                solver,
            } => write!(
                f,
                "DISCREPANCY lambda={lambda} recognizer={recognizer} solver={solver} graph={:?}",
                graph.edges()
            ),
            OracleReport::Budget { graph, lambda } => {
                write!(f, "BUDGET lambda={lambda} graph={:?}", graph.edges())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("at most 10 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("span {0} is outside 0..=4")]
    SpanOutOfRange(Label),
}

/// Above this many vertices the campaign caps the edge count.
pub const UNCAPPED_VERTICES: usize = 7;
pub const EDGE_CAP: usize = 11;

/// Compare `decide` with the exact solver on every connected graph with at
/// most `max_vertices` vertices (and at most [`EDGE_CAP`] edges once past
/// [`UNCAPPED_VERTICES`]) for each span in `lambdas`. Reports the first
/// disagreement in enumeration order.
pub fn oracle_compare<F>(max_vertices: usize, lambdas: &[Label], decide: F) -> Result<OracleReport, OracleError>
where
    F: Fn(&Graph, Label) -> bool + Sync,
{
    if max_vertices > 10 {
        return Err(OracleError::TooManyVertices(max_vertices));
    }
    if let Some(&l) = lambdas.iter().find(|&&l| l > 4) {
        return Err(OracleError::SpanOutOfRange(l));
    }
    let cap = if max_vertices <= UNCAPPED_VERTICES { usize::MAX } else { EDGE_CAP };
    let graphs = crate::enumerate::connected_graphs(max_vertices, cap);
    let jobs: Vec<(usize, Label)> = (0..graphs.len())
        .flat_map(|i| lambdas.iter().map(move |&l| (i, l)))
        .collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = jobs.len().div_ceil(workers).max(1);
    // First bad job per worker; the least index overall wins.
    let bad: Vec<(usize, OracleReport)> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let graphs = &graphs;
                let decide = &decide;
                scope.spawn(move || {
                    for (k, &(i, l)) in part.iter().enumerate() {
                        let g = &graphs[i];
                        let mine = decide(g, l);
                        let exact = match find_labeling(g, l, SolveBudget::UNLIMITED, &Default::default()) {
                            Ok(SolveOutcome::Found(_)) => true,
                            Ok(SolveOutcome::Infeasible) | Err(_) => false,
                            Ok(SolveOutcome::BudgetExhausted) => {
                                return Some((c * chunk + k, OracleReport::Budget { graph: g.clone(), lambda: l }))
                            }
                        };
                        if mine != exact {
                            let report = OracleReport::Discrepancy {
                                graph: g.clone(),
                                lambda: l,
                                recognizer: mine,
                                solver: exact,
                            };
                            return Some((c * chunk + k, report));
                        }
                    }
                    None
                })
            })
            .collect();
        handles.into_iter().filter_map(|h| h.join().expect("worker panicked")).collect()
    });
    Ok(bad
        .into_iter()
        .min_by_key(|(k, _)| *k)
        .map_or(OracleReport::Agree(jobs.len()), |(_, r)| r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::is_valid;

    /// A path skeleton of `len` edges with a pendant at each listed position.
    fn hairy_path(len: usize, hairy: &[usize]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
        let mut n = len + 1;
        for &h in hairy {
            edges.push((h, n));
            n += 1;
        }
        Graph::new(n, edges).unwrap()
    }

    fn hairy_cycle(len: usize, hairy: &[usize]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        let mut n = len;
        for &h in hairy {
            edges.push((h, n));
            n += 1;
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&Graph::path(4)).unwrap().tag, StructureTag::TinyPath(4));
        let g = hairy_path(5, &[2]);
        assert_eq!(classify(&g).unwrap().tag, StructureTag::GeneralizedPath);
        // Subdivided claw: the centre's neighbours all have degree 2.
        let claw = Graph::new(7, vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert_eq!(classify(&claw).unwrap().tag, StructureTag::Unlabelable4);
        assert_eq!(classify(&Graph::star(4)).unwrap().tag, StructureTag::Unlabelable4);
        assert_eq!(classify(&Graph::cycle(7)).unwrap().tag, StructureTag::GeneralizedCycle);
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(classify(&two), Err(RecognizerError::Disconnected));
    }

    #[test]
    fn profile_examples() {
        let g = hairy_path(10, &[3, 7]);
        let p = hairy_profile(&g, &classify(&g).unwrap()).unwrap();
        assert_eq!(p.gaps, vec![4]);
        let g = hairy_cycle(10, &[0]);
        assert_eq!(hairy_profile(&g, &classify(&g).unwrap()).unwrap().gaps, vec![10]);
        let g = Graph::cycle(6);
        assert!(hairy_profile(&g, &classify(&g).unwrap()).unwrap().gaps.is_empty());
        let g = hairy_cycle(17, &[0, 4, 13]);
        assert_eq!(hairy_profile(&g, &classify(&g).unwrap()).unwrap().gaps, vec![4, 4, 9]);
        assert!(hairy_profile(&Graph::path(3), &classify(&Graph::path(3)).unwrap()).is_err());
    }

    #[test]
    fn condition_examples() {
        assert!(path_condition(&[4, 9, 11]));
        assert!(!path_condition(&[5]));
        assert!(path_condition(&[]));
        assert!(cycle_condition(&[10, 10]));
        assert!(!cycle_condition(&[10]));
        assert!(cycle_condition(&[10, 14]));
        assert!(!cycle_condition(&[10, 11]));
        assert!(cycle_condition(&[10, 15]));
        assert!(!cycle_condition(&[10, 12]));
        assert!(!cycle_condition(&[7]));
    }

    #[test]
    fn decisions_for_small_spans() {
        assert!(decide_span_le(&Graph::path(5), 3).unwrap());
        assert!(!decide_span_le(&Graph::path(6), 3).unwrap());
        assert!(!decide_span_le(&Graph::path(3), 1).unwrap());
        for n in 3..20 {
            assert!(decide_span_le(&Graph::cycle(n), 4).unwrap());
        }
        assert!(decide_span_le(&Graph::star(3), 4).unwrap());
        assert!(decide_span_le(&Graph::star(3), 5).is_err());
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(decide_span_le(&two, 4), Err(RecognizerError::Disconnected));
    }

    #[test]
    fn segments_are_valid_paths() {
        for d in 4..40 {
            for turning in [false, true] {
                let Some(seq) = segment(d, turning) else {
                    continue;
                };
                assert_eq!(seq.len(), d);
                assert_eq!(seq[0], 0);
                assert_eq!(*seq.last().unwrap(), if turning { 0 } else { 4 });
                // With a hairy vertex at each end and one more segment of
                // matching polarity on either side.
                let g = hairy_path(d + 8, &[4, d + 4]);
                let mut labels: Vec<Label> = digits("0314").into_iter().chain(seq.iter().copied()).collect();
                let tail = if turning { inverted(&digits("0314")) } else { digits("0314") };
                labels.extend(tail);
                labels.extend([2, 2]);
                assert!(is_valid(&g, &EdgeLabeling(labels), 4), "d={d} turning={turning}");
            }
        }
        let plain: Vec<usize> = (1..30).filter(|&d| segment(d, false).is_some()).collect();
        assert_eq!(&plain[..6], &[4, 8, 9, 11, 12, 13]);
        assert!(plain.iter().all(|&d| d != 10));
        let turning: Vec<usize> = (1..30).filter(|&d| segment(d, true).is_some()).collect();
        assert_eq!(&turning[..5], &[10, 13, 14, 15, 16]);
        assert!((13..30).all(|d| turning.contains(&d)));
    }

    #[test]
    fn templates_match_known_sequences() {
        assert_eq!(segment(4, false).unwrap(), digits("0314"));
        assert_eq!(segment(9, false).unwrap(), digits("031420314"));
        assert_eq!(segment(10, true).unwrap(), digits("0314204130"));
        assert_eq!(segment(11, false).unwrap(), digits("03140240314"));
        assert_eq!(segment(14, false).unwrap(), digits("03140240240314"));
    }

    #[test]
    fn constructions_verify() {
        let graphs = [
            hairy_path(12, &[3, 7]),
            hairy_path(30, &[2, 12, 22, 26]),
            hairy_cycle(20, &[0, 10]),
            hairy_cycle(24, &[0, 10]),
            hairy_cycle(13, &[5]),
            hairy_cycle(25, &[0, 10]),
            hairy_cycle(45, &[0, 10, 20, 30]),
            Graph::path(9),
            Graph::cycle(5),
            Graph::cycle(11),
            Graph::star(3),
            Graph::path(4),
        ];
        for g in &graphs {
            assert!(decide_span_le(g, 4).unwrap());
            let (lab, span) = construct_labeling_small(g).unwrap();
            assert!(span <= 4);
            assert!(is_valid(g, &lab, 4), "{g:?} {lab:?}");
        }
        let (lab, _) = construct_labeling_small(&Graph::path(12)).unwrap();
        assert_eq!(&lab.0[..8], &[0, 3, 1, 4, 0, 3, 1, 4]);
        let g = hairy_cycle(20, &[0, 10]);
        let cls = classify(&g).unwrap();
        let seq = skeleton_sequence(&g, &cls).unwrap();
        assert_eq!(seq.labels[..10], digits("0314204130")[..]);
        assert_eq!(seq.labels[10..], inverted(&digits("0314204130"))[..]);
        assert!(construct_labeling_small(&hairy_cycle(10, &[0])).is_err());
    }

    #[test]
    fn class_line_format() {
        let g = hairy_path(10, &[3, 7]);
        assert_eq!(class_line(&g).unwrap(), "class=generalized-path gaps=4 span_le4=true");
        assert_eq!(
            class_line(&Graph::star(4)).unwrap(),
            "class=unlabelable-4 gaps= span_le4=false"
        );
    }

    #[test]
    fn oracle_agrees_on_small_graphs() {
        let report = oracle_compare(5, &[0, 1, 2, 3, 4], |g, l| decide_span_le(g, l).unwrap()).unwrap();
        assert_eq!(report, OracleReport::Agree(31 * 5));
    }

    #[test]
    fn oracle_catches_mutation() {
        // Pretend a single gap of 3 is fine on paths.
        let mutated = |g: &Graph, l: Label| {
            let cls = classify(g).unwrap();
            if l == 4 && cls.tag == StructureTag::GeneralizedPath {
                let (_, gaps, _) = raw_profile(g, &cls);
                if gaps == [3] {
                    return true;
                }
            }
            decide_span_le(g, l).unwrap()
        };
        let report = oracle_compare(8, &[4], mutated).unwrap();
        match report {
            OracleReport::Discrepancy { graph, recognizer, solver, .. } => {
                assert!(recognizer && !solver);
                assert_eq!(graph.vertex_count(), 8);
            }
            other => panic!("mutation missed: {other}"),
        }
    }
}
