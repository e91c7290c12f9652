//! Simple undirected graphs with stable edge identifiers, the edge-list file
//! format, and the distance-1 / distance-2 edge index.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::ParseError;

/// Edge identifier: the 0-based position of the edge in the edge list.
pub type EdgeId = usize;

/// A simple undirected graph. Edge ids are file order and never change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, EdgeId)>>,
    names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    Duplicate(usize, usize),
    #[error("endpoint {endpoint} out of range for {n} vertices")]
    OutOfRange { endpoint: usize, n: usize },
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { endpoint: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::Duplicate(u, v));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Ok(Graph {
            n,
            edges,
            adj,
            names: None,
        })
    }

    pub fn path(vertices: usize) -> Self {
        let edges = (1..vertices).map(|i| (i - 1, i)).collect();
        Graph::new(vertices, edges).expect("path is simple")
    }

    pub fn cycle(vertices: usize) -> Self {
        assert!(vertices >= 3, "cycle needs at least 3 vertices");
        let edges = (0..vertices).map(|i| (i, (i + 1) % vertices)).collect();
        Graph::new(vertices, edges).expect("cycle is simple")
    }

    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, edges).expect("star is simple")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = Some(names);
        self
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` paired with the connecting edge id.
    pub fn incident(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on `vertices` (in the given order). Returns the
    /// subgraph and, for each of its edges, the original edge id.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<EdgeId>) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                edges.push((index[u], index[v]));
                origin.push(id);
            }
        }
        let g = Graph::new(vertices.len(), edges).expect("induced subgraph is simple");
        (g, origin)
    }

    pub fn distance_index(&self) -> EdgeDistanceIndex {
        EdgeDistanceIndex::new(self)
    }

    /// Vertex `i` of the result is edge `i` of `self`.
    pub fn line_graph(&self) -> Graph {
        let idx = self.distance_index();
        let edges = idx.dist1_pairs().collect();
        Graph::new(self.edge_count(), edges).expect("line graph is simple")
    }

    /// Serialize in the edge-list format accepted by [`parse_graph`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "p edge {} {}", self.n, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }
}

/// Parse the `p edge <n> <m>` format: comment lines start with `c`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 4 || fields[0] != "p" || fields[1] != "edge" {
                    return Err(ParseError::at(line_no, "expected header `p edge <n> <m>`"));
                }
                let n = parse_num(fields[2], line_no)?;
                let m = parse_num(fields[3], line_no)?;
                header = Some((n, m));
            }
            Some((n, m)) => {
                if fields.len() != 2 {
                    return Err(ParseError::at(line_no, "expected `<u> <v>`"));
                }
                if edges.len() == m {
                    return Err(ParseError::at(line_no, format!("more than {m} edges")));
                }
                let u = parse_num(fields[0], line_no)?;
                let v = parse_num(fields[1], line_no)?;
                if u >= n || v >= n {
                    return Err(ParseError::at(
                        line_no,
                        format!("endpoint out of range (n = {n})"),
                    ));
                }
                if u == v {
                    return Err(ParseError::at(line_no, format!("self-loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(ParseError::at(line_no, format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| ParseError::at(0, "missing header"))?;
    if edges.len() != m {
        return Err(ParseError::at(
            text.lines().count(),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Ok(Graph::new(n, edges).expect("validated during parsing"))
}

pub(crate) fn parse_num(field: &str, line: usize) -> Result<usize, ParseError> {
    field
        .parse()
        .map_err(|_| ParseError::at(line, format!("not a nonnegative integer: `{field}`")))
}

/// Distance-1 and distance-2 edge pairs, stored as per-edge neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDistanceIndex {
    dist1: Vec<Vec<EdgeId>>,
    dist2: Vec<Vec<EdgeId>>,
}

impl EdgeDistanceIndex {
    pub fn new(g: &Graph) -> Self {
        let m = g.edge_count();
        let mut dist1 = vec![BTreeSet::new(); m];
        for v in 0..g.vertex_count() {
            let inc = g.incident(v);
            for (i, &(_, e)) in inc.iter().enumerate() {
                for &(_, f) in &inc[i + 1..] {
                    dist1[e].insert(f);
                    dist1[f].insert(e);
                }
            }
        }
        let mut dist2 = vec![BTreeSet::new(); m];
        for e in 0..m {
            for &f in &dist1[e] {
                for &h in &dist1[f] {
                    if h != e && !dist1[e].contains(&h) {
                        dist2[e].insert(h);
                    }
                }
            }
        }
        EdgeDistanceIndex {
            dist1: dist1.into_iter().map(|s| s.into_iter().collect()).collect(),
            dist2: dist2.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Edges sharing an endpoint with `e`, ascending.
    pub fn near(&self, e: EdgeId) -> &[EdgeId] {
        &self.dist1[e]
    }

    /// Edges at line-graph distance exactly two from `e`, ascending.
    pub fn far(&self, e: EdgeId) -> &[EdgeId] {
        &self.dist2[e]
    }

    pub fn edge_count(&self) -> usize {
        self.dist1.len()
    }

    /// Unordered distance-1 pairs `(e, f)` with `e < f`.
    pub fn dist1_pairs(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        pairs(&self.dist1)
    }

    /// Unordered distance-2 pairs `(e, f)` with `e < f`.
    pub fn dist2_pairs(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        pairs(&self.dist2)
    }
}

fn pairs(lists: &[Vec<EdgeId>]) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
    lists
        .iter()
        .enumerate()
        .flat_map(|(e, l)| l.iter().filter(move |&&f| f > e).map(move |&f| (e, f)))
}
