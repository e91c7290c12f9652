//! Gadget templates.
//!
//! Every template is a small graph whose maximum-degree vertices pin the
//! labels around them. For `λ = 2t` a vertex of degree `t + 1` sees exactly
//! the even labels; for `λ = 2t + 1` two adjacent vertices of degree `t + 1`
//! (a "pair") carry `0` or `λ` on their common edge, which acts as a bit.
//! Ports are stub edges whose outer endpoint is a leaf, except at `λ = 5`
//! where a port is the common edge of a pair itself.

use std::fmt;

use crate::graph::{EdgeId, Graph};
use crate::labeling::{Label, PartialLabeling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetRole {
    Variable,
    MiddlePiece,
    Auxiliary,
    Clause,
}

impl GadgetRole {
    pub const ALL: [GadgetRole; 4] = [
        GadgetRole::Variable,
        GadgetRole::MiddlePiece,
        GadgetRole::Auxiliary,
        GadgetRole::Clause,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetRole::Variable => "variable",
            GadgetRole::MiddlePiece => "middle-piece",
            GadgetRole::Auxiliary => "auxiliary",
            GadgetRole::Clause => "clause",
        }
    }
}

impl fmt::Display for GadgetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortDir {
    Input,
    Output,
}

/// A port edge. `inner` lies in the gadget body, `outer` is the side that
/// gets identified with the neighbouring gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub edge: EdgeId,
    pub dir: PortDir,
    pub inner: usize,
    pub outer: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contract {
    /// All outputs take labels from one alphabet in every valid labeling;
    /// both alphabets occur and the set of output tuples is closed under
    /// inversion.
    Variable {
        false_labels: Vec<Label>,
        true_labels: Vec<Label>,
    },
    /// With inputs pinned from the alphabets, a labeling exists iff the
    /// inputs are not all of one polarity.
    Clause {
        false_labels: Vec<Label>,
        true_labels: Vec<Label>,
    },
    /// With every input pinned to `input`, the output takes exactly the
    /// labels `outputs` (and the mirrored statement after inversion).
    MiddlePiece { input: Label, outputs: Vec<Label> },
    /// With every input pinned to `input`, the output is forced to `output`.
    Auxiliary { input: Label, output: Label },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub lambda: Label,
    pub role: GadgetRole,
    pub graph: Graph,
    pub ports: Vec<Port>,
    /// Constant labels the template expects on some stub edges.
    pub pins: PartialLabeling,
    /// Leaf edges that only fill a vertex up to its prescribed degree. When
    /// two gadgets are glued these may be dropped in favour of real edges.
    pub padding: Vec<EdgeId>,
    pub contract: Contract,
}

impl GadgetTemplate {
    pub fn inputs(&self) -> Vec<&Port> {
        self.ports.iter().filter(|p| p.dir == PortDir::Input).collect()
    }

    pub fn outputs(&self) -> Vec<&Port> {
        self.ports.iter().filter(|p| p.dir == PortDir::Output).collect()
    }

    /// Whether every port is a stub edge with a leaf on its outer side.
    pub fn has_stub_ports(&self) -> bool {
        self.ports.iter().all(|p| self.graph.degree(p.outer) == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("no {role} gadget for span {lambda}")]
    Unsupported { lambda: Label, role: GadgetRole },
    #[error("{role} gadget cannot have {arity} ports")]
    BadArity { role: GadgetRole, arity: usize },
}

/// Maximum degree a graph with span `lambda` can have.
pub fn max_degree_for(lambda: Label) -> usize {
    lambda as usize / 2 + 1
}

/// The registered template for `(lambda, role)`. `arity` is the number of
/// outputs for a variable, 3 for a clause and 1 for the other roles.
pub fn gadget(lambda: Label, role: GadgetRole, arity: usize) -> Result<GadgetTemplate, GadgetError> {
    let unsupported = GadgetError::Unsupported { lambda, role };
    if lambda < 5 {
        return Err(unsupported);
    }
    let want = match role {
        GadgetRole::Variable => arity.max(1),
        GadgetRole::Clause => 3,
        _ => 1,
    };
    if arity != want {
        return Err(GadgetError::BadArity { role, arity });
    }
    let even = lambda % 2 == 0;
    let t = lambda as usize / 2;
    let mut b = Builder::default();
    match (role, lambda) {
        (GadgetRole::Variable, 5) => variable5(&mut b, arity),
        (GadgetRole::Variable, 7) => variable7(&mut b, arity),
        (GadgetRole::Variable, _) if even => variable_even(&mut b, t, arity),
        (GadgetRole::Variable, _) => variable_odd(&mut b, t, arity),
        (GadgetRole::Clause, 5) => clause5(&mut b),
        (GadgetRole::Clause, 7) => clause7(&mut b),
        (GadgetRole::Clause, _) if even => clause_even(&mut b, t),
        (GadgetRole::Clause, _) => clause_odd(&mut b, t),
        (GadgetRole::MiddlePiece, 5 | 6) => return Err(unsupported),
        (GadgetRole::MiddlePiece, _) if even => middle_even(&mut b, t),
        (GadgetRole::MiddlePiece, _) => middle_odd(&mut b, lambda, t),
        (GadgetRole::Auxiliary, _) if even || lambda < 7 => return Err(unsupported),
        (GadgetRole::Auxiliary, _) => auxiliary(&mut b, t),
    }
    let (f, tr) = if lambda == 5 {
        (vec![0], vec![lambda])
    } else {
        (vec![1], vec![lambda - 1])
    };
    let contract = match role {
        GadgetRole::Variable => Contract::Variable {
            false_labels: f,
            true_labels: tr,
        },
        GadgetRole::Clause => Contract::Clause {
            false_labels: f,
            true_labels: tr,
        },
        GadgetRole::MiddlePiece => Contract::MiddlePiece {
            input: 1,
            outputs: vec![0, 2],
        },
        GadgetRole::Auxiliary => Contract::Auxiliary {
            input: 0,
            output: 1,
        },
    };
    Ok(b.finish(lambda, role, contract))
}

#[derive(Default)]
struct Builder {
    deg: Vec<usize>,
    edges: Vec<(usize, usize)>,
    padding: Vec<EdgeId>,
    ports: Vec<Port>,
    pins: PartialLabeling,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.deg.push(0);
        self.deg.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) -> EdgeId {
        self.deg[a] += 1;
        self.deg[b] += 1;
        self.edges.push((a, b));
        self.edges.len() - 1
    }

    fn leaf(&mut self, a: usize) -> EdgeId {
        let l = self.vertex();
        self.edge(a, l)
    }

    fn pad(&mut self, v: usize, degree: usize) {
        while self.deg[v] < degree {
            let e = self.leaf(v);
            self.padding.push(e);
        }
    }

    /// A path with `len` edges from `a` to `c`.
    fn path(&mut self, a: usize, c: usize, len: usize) {
        let mut p = a;
        for _ in 1..len {
            let m = self.vertex();
            self.edge(p, m);
            p = m;
        }
        self.edge(p, c);
    }

    fn port(&mut self, inner: usize, outer: usize, edge: EdgeId, dir: PortDir) {
        let k = self.ports.iter().filter(|p| p.dir == dir).count();
        let name = match dir {
            PortDir::Input => format!("in{k}"),
            PortDir::Output => format!("out{k}"),
        };
        self.ports.push(Port {
            name,
            edge,
            dir,
            inner,
            outer,
        });
    }

    fn stub(&mut self, inner: usize, dir: PortDir) -> EdgeId {
        let s = self.vertex();
        let e = self.edge(inner, s);
        self.port(inner, s, e, dir);
        e
    }

    fn constant(&mut self, at: usize, label: Label) {
        let e = self.leaf(at);
        self.pins.insert(e, label);
    }

    /// A vertex joined to `nbrs` and padded to degree `t + 1`.
    fn hub(&mut self, t: usize, nbrs: &[usize]) -> usize {
        let h = self.vertex();
        for &x in nbrs {
            self.edge(h, x);
        }
        self.pad(h, t + 1);
        h
    }

    fn pair(&mut self) -> Pair {
        let u = self.vertex();
        let v = self.vertex();
        let uv = self.edge(u, v);
        Pair { u, v, uv }
    }

    /// A vertex adjacent to both ends of the pair.
    fn tap(&mut self, d: &Pair) -> usize {
        let w = self.vertex();
        self.edge(d.u, w);
        self.edge(d.v, w);
        w
    }

    fn close(&mut self, d: &Pair, t: usize) {
        self.pad(d.u, t + 1);
        self.pad(d.v, t + 1);
    }

    fn finish(self, lambda: Label, role: GadgetRole, contract: Contract) -> GadgetTemplate {
        let graph = Graph::new(self.deg.len(), self.edges).expect("gadget graphs are simple");
        GadgetTemplate {
            lambda,
            role,
            graph,
            ports: self.ports,
            pins: self.pins,
            padding: self.padding,
            contract,
        }
    }
}

struct Pair {
    u: usize,
    v: usize,
    uv: EdgeId,
}

// Even span λ = 2t. A hub of degree t + 1 uses every even label, so a
// partner q of degree t next to it sees only odd labels apart from the
// hub edge. A tap w joined to the hub and to q then has its stub
// squeezed to 1 or λ − 1. Partners of consecutive parts are linked by a
// path of length two, which keeps the parity choice the same.
fn variable_even(b: &mut Builder, t: usize, arity: usize) {
    // At λ = 6 the tap needs a hub of its own.
    let shared = t >= 4;
    // A part without output in front gives the first partner its link too.
    let (q0, p0) = (b.vertex(), b.vertex());
    b.hub(t, &[q0, p0]);
    b.pad(q0, t);
    let mut prev = Some(p0);
    for _ in 0..arity {
        let q = b.vertex();
        let p = b.vertex();
        let w = b.vertex();
        if shared {
            b.hub(t, &[q, p, w]);
        } else {
            b.hub(t, &[q, p]);
            b.hub(t, &[w]);
        }
        b.edge(q, w);
        b.stub(w, PortDir::Output);
        if let Some(pp) = prev {
            let m = b.vertex();
            b.edge(pp, m);
            b.edge(m, q);
            b.pad(pp, t);
        }
        prev = Some(p);
        b.pad(q, t);
    }
    if let Some(pp) = prev {
        b.pad(pp, t);
    }
}

// The clause hub has degree t + 1. For t > 4 the surplus slots are filled
// with vertices fed by both partners of a constant hub, which keeps their
// edges to the clause hub away from the extreme labels.
fn clause_even(b: &mut Builder, t: usize) {
    let mut nbrs = Vec::new();
    for _ in 0..3 {
        let y = b.vertex();
        b.stub(y, PortDir::Input);
        if t == 3 {
            let m = b.vertex();
            b.edge(y, m);
            nbrs.push(m);
        } else {
            nbrs.push(y);
        }
    }
    // At λ = 8 only two labels at the hub are open to a false input, so
    // three equal inputs already clash and the spare slots stay leaves.
    if t > 4 {
        let q = b.vertex();
        let p = b.vertex();
        b.hub(t, &[q, p]);
        for _ in 0..t - 3 {
            let z = b.vertex();
            for src in [q, p] {
                let w = b.vertex();
                b.edge(src, w);
                b.edge(w, z);
            }
            nbrs.push(z);
        }
        b.pad(q, t);
        b.pad(p, t);
    }
    b.hub(t, &nbrs);
}

// Odd span λ = 2t + 1, t ≥ 4. A tap of a closed pair has its stub forced
// to 1 or λ − 1 by the pair's bit; two taps joined by an edge force equal
// bits on their pairs.
fn variable_odd(b: &mut Builder, t: usize, arity: usize) {
    let mut prev: Option<Pair> = None;
    for _ in 0..arity {
        let d = b.pair();
        if let Some(p) = prev.take() {
            let x = b.tap(&p);
            let y = b.tap(&d);
            b.edge(x, y);
            b.close(&p, t);
        }
        let w = b.tap(&d);
        b.stub(w, PortDir::Output);
        prev = Some(d);
    }
    if let Some(p) = prev {
        b.close(&p, t);
    }
}

// A vertex with one tap from each of two pairs forces their bits apart and
// keeps its edge to the clause hub in the middle of the range.
fn clause_odd(b: &mut Builder, t: usize) {
    let c = b.vertex();
    for _ in 0..3 {
        let y = b.vertex();
        b.stub(y, PortDir::Input);
        b.edge(c, y);
    }
    let da = b.pair();
    let db = b.pair();
    for _ in 0..t - 2 {
        let z = b.vertex();
        b.edge(c, z);
        let x = b.tap(&da);
        let y = b.tap(&db);
        b.edge(x, z);
        b.edge(y, z);
    }
    b.close(&da, t);
    b.close(&db, t);
}

/// A pair of degree-4 vertices with two filler taps and a vertex `z` of
/// degree 3 hanging off `v`, which fixes the orientation of the pair. The
/// free slot at `u` is left to the caller.
fn oriented7(b: &mut Builder) -> (Pair, usize) {
    let d = b.pair();
    let z = b.vertex();
    b.edge(d.v, z);
    b.pad(z, 3);
    (d, z)
}

fn filler_tap(b: &mut Builder, d: &Pair) {
    let w = b.tap(d);
    b.leaf(w);
}

// λ = 7 (t = 3): a pair supports only two taps. Spine pairs are bridged
// tap to tap; each spine pair's free slot at `u` meets the free slot of a
// branch pair through a middle vertex. A branch pair carries one output
// tap and one filler: the two taps of a pair see complementary labels, and
// a clause must not be able to tell which of them it is attached to.
fn variable7(b: &mut Builder, arity: usize) {
    let n = arity;
    let mut prev: Option<Pair> = None;
    for i in 0..n {
        let (d, _) = oriented7(b);
        match prev.take() {
            Some(p) => {
                let x = b.tap(&p);
                let y = b.tap(&d);
                b.edge(x, y);
                b.close(&p, 3);
            }
            None => filler_tap(b, &d),
        }
        if i == n - 1 {
            filler_tap(b, &d);
        }
        let (e, _) = oriented7(b);
        let m = b.vertex();
        b.edge(d.u, m);
        b.edge(e.u, m);
        let w = b.tap(&e);
        b.stub(w, PortDir::Output);
        filler_tap(b, &e);
        b.close(&e, 3);
        prev = Some(d);
    }
    if let Some(p) = prev {
        b.close(&p, 3);
    }
}

// λ = 7 clause: the fourth hub slot goes to the free slot of an oriented
// pair, whose label sits next to one of the polarity ends.
fn clause7(b: &mut Builder) {
    let c = b.vertex();
    for _ in 0..3 {
        let y = b.vertex();
        b.stub(y, PortDir::Input);
        b.edge(c, y);
    }
    let x = b.vertex();
    b.edge(c, x);
    let (d, _) = oriented7(b);
    b.edge(d.u, x);
    filler_tap(b, &d);
    filler_tap(b, &d);
    b.close(&d, 3);
}

// λ = 5 (max degree 3): the port is the pair edge itself, labeled 0 or 5.
// Paths of length three between pair endpoints copy the bit. Each output
// pair hangs off a spine endpoint that already carries two such paths.
fn variable5(b: &mut Builder, arity: usize) {
    let m = if arity <= 2 { 1 } else { arity - 1 };
    let mut spine: Vec<Pair> = Vec::new();
    for i in 0..m {
        let d = b.pair();
        if i > 0 {
            let pv = spine[i - 1].v;
            b.path(pv, d.u, 3);
        }
        spine.push(d);
    }
    let mut slots = vec![spine[0].u, spine[0].u];
    slots.extend(spine[1..].iter().map(|d| d.u));
    let mut outs = Vec::new();
    for &slot in slots.iter().take(arity) {
        let d = b.pair();
        b.path(slot, d.u, 3);
        b.port(d.u, d.v, d.uv, PortDir::Output);
        outs.push(d);
    }
    for d in spine.iter().chain(&outs) {
        b.close(d, 2);
    }
}

// λ = 5 clause: three pairs whose free endpoints reach a common vertex by
// paths of length two.
fn clause5(b: &mut Builder) {
    let h = b.vertex();
    for _ in 0..3 {
        let d = b.pair();
        b.path(d.v, h, 2);
        b.port(d.v, d.u, d.uv, PortDir::Input);
        b.close(&d, 2);
    }
}

// Even middle piece: a hub whose t − 1 input neighbours each see a 1 leaves
// only {0, 2} for the output and one spare leaf.
fn middle_even(b: &mut Builder, t: usize) {
    let v = b.vertex();
    for _ in 0..t - 1 {
        let y = b.vertex();
        b.edge(v, y);
        b.stub(y, PortDir::Input);
    }
    b.stub(v, PortDir::Output);
    b.leaf(v);
}

// Odd middle piece: constant odd labels around the hub rule out every odd
// label on its edges; the inputs labeled 1 then leave {0, 2} to the output.
fn middle_odd(b: &mut Builder, lambda: Label, t: usize) {
    let v = b.vertex();
    let ys: Vec<usize> = (0..t)
        .map(|_| {
            let y = b.vertex();
            b.edge(v, y);
            y
        })
        .collect();
    for &y in &ys[..t - 1] {
        b.stub(y, PortDir::Input);
    }
    b.constant(ys[0], 3);
    for l in (5..=lambda).step_by(2) {
        b.constant(ys[t - 1], l);
    }
    b.stub(v, PortDir::Output);
}

// K_{2,t} between two vertices of degree t + 1, each with an input stub;
// one common neighbour has the output stub.
fn auxiliary(b: &mut Builder, t: usize) {
    let u = b.vertex();
    let v = b.vertex();
    b.stub(u, PortDir::Input);
    b.stub(v, PortDir::Input);
    let ws: Vec<usize> = (0..t)
        .map(|_| {
            let w = b.vertex();
            b.edge(u, w);
            b.edge(v, w);
            w
        })
        .collect();
    b.stub(ws[0], PortDir::Output);
}
