//! Exact backtracking search for edge labelings of a fixed span.
//!
//! Domains are bitmasks over `0..=span`. Assigning label `x` to an edge
//! removes `x-1..=x+1` from the domains of its distance-1 neighbors and `x`
//! from its distance-2 neighbors. After each assignment every touched vertex
//! is checked: the unassigned edges around it must still fit into the union
//! of their domains with pairwise gaps of two.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::graph::{EdgeDistanceIndex, EdgeId, Graph};
use crate::labeling::{delta_lower_bound, EdgeLabeling, Label, PartialLabeling};

/// Largest span the bitmask domains can represent.
pub const MAX_SPAN: Label = 63;

/// Edge count up to which [`SolveBudget::default_for`] imposes no limit.
pub const UNLIMITED_EDGE_COUNT: usize = 20;
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

/// Entries kept in the failed-group cache before it is flushed.
const DEAD_CACHE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SolveBudget {
    pub const UNLIMITED: SolveBudget = SolveBudget {
        node_limit: None,
        time_limit: None,
    };

    pub fn nodes(limit: u64) -> Self {
        SolveBudget {
            node_limit: Some(limit),
            time_limit: None,
        }
    }

    /// Unlimited for small graphs, otherwise [`DEFAULT_NODE_LIMIT`] nodes.
    pub fn default_for(g: &Graph) -> Self {
        if g.edge_count() <= UNLIMITED_EDGE_COUNT {
            SolveBudget::UNLIMITED
        } else {
            SolveBudget::nodes(DEFAULT_NODE_LIMIT)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(EdgeLabeling),
    Infeasible,
    BudgetExhausted,
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SolveOutcome::Found(_))
    }

    pub fn labeling(self) -> Option<EdgeLabeling> {
        match self {
            SolveOutcome::Found(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanOutcome {
    Span(Label),
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("pinned edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("pinned label {label} on edge {edge} exceeds span {span}")]
    PinOverSpan { edge: EdgeId, label: Label, span: Label },
    #[error("span {0} exceeds the supported maximum {MAX_SPAN}")]
    SpanTooLarge(Label),
}

fn check_inputs(g: &Graph, span: Label, pins: &PartialLabeling) -> Result<(), SolveError> {
    if span > MAX_SPAN {
        return Err(SolveError::SpanTooLarge(span));
    }
    for (&edge, &label) in pins {
        if edge >= g.edge_count() {
            return Err(SolveError::UnknownEdge(edge));
        }
        if label > span {
            return Err(SolveError::PinOverSpan { edge, label, span });
        }
    }
    Ok(())
}

/// Search for a labeling of `g` with span at most `span` extending `pins`.
/// Connected components are solved independently.
pub fn find_labeling(
    g: &Graph,
    span: Label,
    budget: SolveBudget,
    pins: &PartialLabeling,
) -> Result<SolveOutcome, SolveError> {
    check_inputs(g, span, pins)?;
    let mut labels = vec![0; g.edge_count()];
    let mut clock = Clock::new(budget);
    let mut exhausted = false;
    for comp in g.components() {
        let (sub, origin) = g.induced(&comp);
        if sub.edge_count() == 0 {
            continue;
        }
        let mut local_pins = PartialLabeling::new();
        for (i, &e) in origin.iter().enumerate() {
            if let Some(&l) = pins.get(&e) {
                local_pins.insert(i, l);
            }
        }
        let mut search = Search::new(&sub, span, &local_pins, true);
        match search.run(&mut clock) {
            Step::Found => {
                for (i, &e) in origin.iter().enumerate() {
                    labels[e] = search.val[i];
                }
            }
            Step::Dead => return Ok(SolveOutcome::Infeasible),
            // A later component may still prove infeasibility.
            Step::Abort => exhausted = true,
        }
    }
    if exhausted {
        Ok(SolveOutcome::BudgetExhausted)
    } else {
        Ok(SolveOutcome::Found(EdgeLabeling(labels)))
    }
}

/// `λ'(g)`: the minimum span, searched upward from the max-degree bound.
pub fn compute_span(g: &Graph, budget: SolveBudget) -> SpanOutcome {
    let mut clock = Clock::new(budget);
    let mut best = 0;
    for comp in g.components() {
        let (sub, _) = g.induced(&comp);
        if sub.edge_count() == 0 {
            continue;
        }
        let mut span = delta_lower_bound(&sub).expect("component has an edge").max(best);
        loop {
            if span > MAX_SPAN {
                return SpanOutcome::BudgetExhausted;
            }
            let mut search = Search::new(&sub, span, &PartialLabeling::new(), true);
            match search.run(&mut clock) {
                Step::Found => break,
                Step::Dead => span += 1,
                Step::Abort => return SpanOutcome::BudgetExhausted,
            }
        }
        best = best.max(span);
    }
    SpanOutcome::Span(best)
}

/// Every valid labeling extending `pins`, in lexicographic order of the
/// label vector (indexed by edge id). No symmetry breaking is applied.
pub fn enumerate_labelings(
    g: &Graph,
    span: Label,
    pins: &PartialLabeling,
) -> Result<Enumerate, SolveError> {
    check_inputs(g, span, pins)?;
    Ok(Enumerate::new(g, span, pins))
}

struct Clock {
    budget: SolveBudget,
    start: Instant,
    nodes: u64,
}

impl Clock {
    fn new(budget: SolveBudget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            nodes: 0,
        }
    }

    /// Count one search node; false once a limit is exceeded.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.budget.node_limit {
            if self.nodes > limit {
                return false;
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes % 1024 == 0 && self.start.elapsed() > limit {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Dead,
    Abort,
}

const UNSET: Label = Label::MAX;

fn full_mask(span: Label) -> u64 {
    if span >= 63 {
        u64::MAX
    } else {
        (1u64 << (span + 1)) - 1
    }
}

fn near_mask(x: Label) -> u64 {
    let mut m = 1u64 << x;
    if x > 0 {
        m |= 1u64 << (x - 1);
    }
    if x < 63 {
        m |= 1u64 << (x + 1);
    }
    m
}

/// Largest number of labels from `mask` with pairwise gaps of at least two.
fn packing(mut mask: u64) -> u32 {
    let mut count = 0;
    while mask != 0 {
        let b = mask.trailing_zeros();
        count += 1;
        if b >= 62 {
            break;
        }
        mask &= !((1u64 << (b + 2)) - 1);
    }
    count
}

/// Shared constraint state for both search drivers.
struct State {
    idx: EdgeDistanceIndex,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<EdgeId>>,
    dom: Vec<u64>,
    val: Vec<Label>,
    trail: Vec<(EdgeId, u64, Label)>,
    touched: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    /// Sibling pendant edges are kept in increasing label order (prev, next).
    chain: Vec<(Option<EdgeId>, Option<EdgeId>)>,
    /// The edge whose domain ran empty in the last failed assignment.
    culprit: Option<EdgeId>,
}

impl State {
    fn new(g: &Graph, span: Label) -> Self {
        let m = g.edge_count();
        State {
            idx: g.distance_index(),
            ends: g.edges().to_vec(),
            incident: (0..g.vertex_count())
                .map(|v| g.incident(v).iter().map(|&(_, e)| e).collect())
                .collect(),
            dom: vec![full_mask(span); m],
            val: vec![UNSET; m],
            trail: Vec::new(),
            touched: Vec::new(),
            stamp: vec![0; g.vertex_count()],
            epoch: 0,
            chain: vec![(None, None); m],
            culprit: None,
        }
    }

    fn set_dom(&mut self, e: EdgeId, d: u64) {
        self.trail.push((e, self.dom[e], self.val[e]));
        self.dom[e] = d;
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (e, d, v) = self.trail.pop().unwrap();
            self.dom[e] = d;
            self.val[e] = v;
        }
    }

    fn touch(&mut self, e: EdgeId) {
        let (a, b) = self.ends[e];
        for v in [a, b] {
            if self.stamp[v] != self.epoch {
                self.stamp[v] = self.epoch;
                self.touched.push(v);
            }
        }
    }

    /// Assign `x` to `e` and propagate. False on a wipe-out.
    fn assign(&mut self, e: EdgeId, x: Label) -> bool {
        if self.dom[e] & (1u64 << x) == 0 {
            return false;
        }
        self.trail.push((e, self.dom[e], self.val[e]));
        self.dom[e] = 1u64 << x;
        self.val[e] = x;
        self.epoch = self.epoch.wrapping_add(1);
        self.touched.clear();
        self.culprit = None;
        self.touch(e);
        let near_cut = !near_mask(x);
        let far_cut = !(1u64 << x);
        let (prev, next) = self.chain[e];
        if let Some(f) = next {
            if !self.restrict(f, !((2u64 << x) - 1)) {
                return false;
            }
        }
        if let Some(f) = prev {
            if !self.restrict(f, (1u64 << x) - 1) {
                return false;
            }
        }
        for i in 0..self.idx.near(e).len() {
            let f = self.idx.near(e)[i];
            if self.val[f] == UNSET {
                let d = self.dom[f] & near_cut;
                if d != self.dom[f] {
                    if d == 0 {
                        self.culprit = Some(f);
                        return false;
                    }
                    self.set_dom(f, d);
                    self.touch(f);
                }
            }
        }
        for i in 0..self.idx.far(e).len() {
            let f = self.idx.far(e)[i];
            if self.val[f] == UNSET {
                let d = self.dom[f] & far_cut;
                if d != self.dom[f] {
                    if d == 0 {
                        self.culprit = Some(f);
                        return false;
                    }
                    self.set_dom(f, d);
                    self.touch(f);
                }
            }
        }
        let mut i = 0;
        while i < self.touched.len() {
            if !self.prune_vertex(self.touched[i]) {
                return false;
            }
            i += 1;
        }
        true
    }

    fn restrict(&mut self, f: EdgeId, keep: u64) -> bool {
        if self.val[f] != UNSET {
            return true;
        }
        let d = self.dom[f] & keep;
        if d != self.dom[f] {
            if d == 0 {
                self.culprit = Some(f);
                return false;
            }
            self.set_dom(f, d);
            self.touch(f);
        }
        true
    }

    /// Order the unpinned pendant edges hanging off each vertex. Such edges
    /// have identical constraint neighborhoods, so any labeling can be
    /// permuted into one where their labels increase with edge id.
    fn chain_pendants(&mut self, g: &Graph, pins: &PartialLabeling) -> Vec<bool> {
        let mut in_group = vec![false; g.edge_count()];
        for v in 0..g.vertex_count() {
            if g.degree(v) < 2 {
                continue;
            }
            let group: Vec<EdgeId> = g
                .incident(v)
                .iter()
                .filter(|&&(w, e)| g.degree(w) == 1 && !pins.contains_key(&e))
                .map(|&(_, e)| e)
                .collect();
            if group.len() < 2 {
                continue;
            }
            for pair in group.windows(2) {
                self.chain[pair[0]].1 = Some(pair[1]);
                self.chain[pair[1]].0 = Some(pair[0]);
            }
            for &e in &group {
                in_group[e] = true;
            }
        }
        in_group
    }

    /// Drop labels that leave too little room for the other open edges at
    /// `v`, touching the far endpoints of narrowed edges. False if the open
    /// edges at `v` cannot all be placed.
    fn prune_vertex(&mut self, v: usize) -> bool {
        let mut union = 0u64;
        let mut open = 0;
        for &f in &self.incident[v] {
            if self.val[f] == UNSET {
                union |= self.dom[f];
                open += 1;
            }
        }
        if open <= 1 {
            return true;
        }
        if packing(union) < open {
            self.culprit = self.incident[v].iter().copied().find(|&f| self.val[f] == UNSET);
            return false;
        }
        let mut allowed = 0u64;
        let mut rest = union;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            if 1 + packing(union & !near_mask(x)) >= open {
                allowed |= 1u64 << x;
            }
        }
        if allowed == union {
            return true;
        }
        for i in 0..self.incident[v].len() {
            let f = self.incident[v][i];
            if self.val[f] != UNSET {
                continue;
            }
            let d = self.dom[f] & allowed;
            if d != self.dom[f] {
                if d == 0 {
                    self.culprit = Some(f);
                    return false;
                }
                self.set_dom(f, d);
                let (a, b) = self.ends[f];
                let w = if a == v { b } else { a };
                if self.stamp[w] != self.epoch {
                    self.stamp[w] = self.epoch;
                    self.touched.push(w);
                }
            }
        }
        true
    }
}

struct Search {
    st: State,
    val: Vec<Label>,
    priority: Vec<usize>,
    ok: bool,
    break_symmetry: bool,
    span: Label,
    pinned: bool,
    in_group: Vec<bool>,
    mark: Vec<bool>,
    /// Edge groups (with their domains) already shown to have no labeling.
    dead: HashSet<Vec<u64>>,
    /// Failure counts: edges that keep causing wipe-outs are branched on
    /// earlier.
    weight: Vec<u32>,
}

impl Search {
    fn new(g: &Graph, span: Label, pins: &PartialLabeling, break_symmetry: bool) -> Self {
        let mut st = State::new(g, span);
        let priority = g
            .edges()
            .iter()
            .map(|&(u, v)| g.degree(u) + g.degree(v))
            .collect();
        let in_group = if break_symmetry {
            st.chain_pendants(g, pins)
        } else {
            vec![false; g.edge_count()]
        };
        let mut ok = true;
        for (&e, &l) in pins {
            if !st.assign(e, l) {
                ok = false;
                break;
            }
        }
        Search {
            st,
            val: Vec::new(),
            priority,
            ok,
            break_symmetry,
            span,
            pinned: !pins.is_empty(),
            in_group,
            mark: vec![false; g.edge_count()],
            dead: HashSet::new(),
            weight: vec![1; g.edge_count()],
        }
    }

    fn run(&mut self, clock: &mut Clock) -> Step {
        if !self.ok {
            return Step::Dead;
        }
        if self.break_symmetry && !self.pinned {
            // Inversion maps any labeling to one with this edge in the lower
            // half; pendant sorting never moves it since it is not pendant.
            let anchor = (0..self.priority.len())
                .filter(|&e| !self.in_group[e])
                .max_by_key(|&e| (self.priority[e], std::cmp::Reverse(e)));
            if let Some(e) = anchor {
                let half = full_mask(self.span / 2);
                let d = self.st.dom[e] & half;
                self.st.set_dom(e, d);
            }
        }
        let r = self.dfs(clock);
        if r == Step::Found {
            self.val = self.st.val.clone();
        }
        r
    }

    fn dfs(&mut self, clock: &mut Clock) -> Step {
        let all: Vec<EdgeId> = (0..self.st.val.len()).collect();
        self.solve(clock, &all)
    }

    /// Label the open edges of `scope`. Once the open edges fall apart into
    /// groups with no constraint between them, each group is solved on its
    /// own, so a failure in one never re-explores another.
    fn solve(&mut self, clock: &mut Clock, scope: &[EdgeId]) -> Step {
        let open: Vec<EdgeId> = scope
            .iter()
            .copied()
            .filter(|&e| self.st.val[e] == UNSET)
            .collect();
        if open.is_empty() {
            return Step::Found;
        }
        let mut parts = self.split(&open);
        if parts.len() == 1 {
            return self.branch(clock, &open);
        }
        parts.sort_by_key(Vec::len);
        for part in &mut parts {
            // A group's fate depends only on the domains of its edges.
            part.sort_unstable();
            let key: Vec<u64> = part
                .iter()
                .flat_map(|&e| [e as u64, self.st.dom[e]])
                .collect();
            if self.dead.contains(&key) {
                return Step::Dead;
            }
            match self.branch(clock, part) {
                Step::Found => {}
                Step::Dead => {
                    if self.dead.len() >= DEAD_CACHE_LIMIT {
                        self.dead.clear();
                    }
                    self.dead.insert(key);
                    return Step::Dead;
                }
                Step::Abort => return Step::Abort,
            }
        }
        Step::Found
    }

    /// Connected groups of `open` under the distance-1 and distance-2
    /// relations restricted to unlabeled edges.
    fn split(&mut self, open: &[EdgeId]) -> Vec<Vec<EdgeId>> {
        self.mark.iter_mut().for_each(|m| *m = false);
        let mut parts = Vec::new();
        for &s in open {
            if self.mark[s] {
                continue;
            }
            self.mark[s] = true;
            let mut part = vec![s];
            let mut i = 0;
            while i < part.len() {
                let e = part[i];
                i += 1;
                for &f in self.st.idx.near(e).iter().chain(self.st.idx.far(e)) {
                    if !self.mark[f] && self.st.val[f] == UNSET {
                        self.mark[f] = true;
                        part.push(f);
                    }
                }
            }
            parts.push(part);
        }
        parts
    }

    /// Smallest domain first within `scope`; ties go to the edge with the
    /// most failures, then the larger endpoint-degree sum, then lower id.
    fn pick(&self, scope: &[EdgeId]) -> Option<EdgeId> {
        let mut best: Option<(u32, std::cmp::Reverse<u32>, std::cmp::Reverse<usize>, EdgeId)> = None;
        for &e in scope {
            if self.st.val[e] != UNSET {
                continue;
            }
            let key = (
                self.st.dom[e].count_ones(),
                std::cmp::Reverse(self.weight[e]),
                std::cmp::Reverse(self.priority[e]),
                e,
            );
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        best.map(|b| b.3)
    }

    fn branch(&mut self, clock: &mut Clock, scope: &[EdgeId]) -> Step {
        let Some(e) = self.pick(scope) else {
            return Step::Found;
        };
        let mut d = self.st.dom[e];
        while d != 0 {
            let x = d.trailing_zeros();
            d &= d - 1;
            if !clock.tick() {
                return Step::Abort;
            }
            let mark = self.st.trail.len();
            if self.st.assign(e, x) {
                match self.solve(clock, scope) {
                    Step::Dead => {}
                    r => return r,
                }
            } else {
                self.weight[e] = self.weight[e].saturating_add(1);
                if let Some(f) = self.st.culprit {
                    self.weight[f] = self.weight[f].saturating_add(1);
                }
            }
            self.st.undo(mark);
        }
        Step::Dead
    }
}

/// Lazy enumeration of all labelings in lexicographic order.
pub struct Enumerate {
    st: State,
    frames: Vec<(u64, usize)>,
    started: bool,
    done: bool,
}

impl Enumerate {
    fn new(g: &Graph, span: Label, pins: &PartialLabeling) -> Self {
        let mut st = State::new(g, span);
        let mut ok = true;
        for (&e, &l) in pins {
            if !st.assign(e, l) {
                ok = false;
                break;
            }
            // Pinned edges are re-assigned in id order; keep only the domain.
            st.val[e] = UNSET;
        }
        Enumerate {
            st,
            frames: Vec::new(),
            started: false,
            done: !ok,
        }
    }
}

impl Iterator for Enumerate {
    type Item = EdgeLabeling;

    fn next(&mut self) -> Option<EdgeLabeling> {
        if self.done {
            return None;
        }
        let m = self.st.val.len();
        if !self.started {
            self.started = true;
            if m == 0 {
                self.done = true;
                return Some(EdgeLabeling(Vec::new()));
            }
            self.frames.push((self.st.dom[0], self.st.trail.len()));
        }
        loop {
            let Some(&mut (ref mut remaining, mark)) = self.frames.last_mut() else {
                self.done = true;
                return None;
            };
            self.st.undo(mark);
            if *remaining == 0 {
                self.frames.pop();
                continue;
            }
            let x = remaining.trailing_zeros();
            *remaining &= *remaining - 1;
            let e = self.frames.len() - 1;
            if !self.st.assign(e, x) {
                continue;
            }
            if e + 1 == m {
                return Some(EdgeLabeling(self.st.val.clone()));
            }
            let next_mark = self.st.trail.len();
            self.frames.push((self.st.dom[e + 1], next_mark));
        }
    }
}
