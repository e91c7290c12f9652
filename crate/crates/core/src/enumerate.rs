//! Connected graphs up to isomorphism, by vertex extension.
//!
//! Every connected graph on `n + 1` vertices loses a non-cut vertex and
//! stays connected, so attaching a new vertex to each nonempty subset of
//! each graph on `n` vertices reaches all of them. Duplicates are removed
//! by a canonical adjacency code.

use std::collections::BTreeSet;

use crate::graph::Graph;

/// Largest vertex count the 128-bit adjacency code can hold.
pub const MAX_VERTICES: usize = 16;

/// Upper-triangle adjacency bits of `adj` under the vertex order `perm`.
fn code(adj: &[u32], perm: &[usize]) -> u128 {
    let n = perm.len();
    let mut out = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            out <<= 1;
            if adj[perm[i]] >> perm[j] & 1 == 1 {
                out |= 1;
            }
        }
    }
    out
}

/// Colour refinement from degrees; returns stable cells ordered by an
/// isomorphism-invariant signature.
fn cells(adj: &[u32]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut colour: Vec<usize> = adj.iter().map(|a| a.count_ones() as usize).collect();
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let ranks: Vec<&(usize, Vec<usize>)> = sig.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sig.iter().map(|s| ranks.binary_search(&s).unwrap()).collect();
        let stable = ranks.len() == colour.iter().collect::<BTreeSet<_>>().len();
        colour = next;
        if stable {
            break;
        }
    }
    let k = colour.iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![Vec::new(); k];
    for v in 0..n {
        out[colour[v]].push(v);
    }
    out
}

/// Least code over orderings that keep the refined cells in order.
fn canonical(adj: &[u32]) -> u128 {
    let cells = cells(adj);
    let mut perm = Vec::with_capacity(adj.len());
    let mut best = u128::MAX;
    fn rec(cells: &[Vec<usize>], used: &mut Vec<bool>, perm: &mut Vec<usize>, adj: &[u32], best: &mut u128) {
        if perm.len() == adj.len() {
            *best = (*best).min(code(adj, perm));
            return;
        }
        // Advance to the cell holding the next slot.
        let mut c = 0;
        let mut before = 0;
        while before + cells[c].len() <= perm.len() {
            before += cells[c].len();
            c += 1;
        }
        for &v in &cells[c] {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(cells, used, perm, adj, best);
                perm.pop();
                used[v] = false;
            }
        }
    }
    rec(&cells, &mut vec![false; adj.len()], &mut perm, adj, &mut best);
    best
}

fn to_graph(adj: &[u32]) -> Graph {
    let n = adj.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            if adj[u] >> w & 1 == 1 {
                edges.push((u, w));
            }
        }
    }
    Graph::new(n, edges).expect("adjacency is simple")
}

/// All connected graphs with `1..=max_vertices` vertices and at most
/// `max_edges` edges, one per isomorphism class. Ordered by vertex count,
/// then edge count, then canonical code.
pub fn connected_graphs(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    assert!(max_vertices <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
    let mut out = Vec::new();
    if max_vertices == 0 {
        return out;
    }
    let mut level: Vec<Vec<u32>> = vec![vec![0]];
    out.push(Graph::new(1, Vec::new()).unwrap());
    for n in 1..max_vertices {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for adj in &level {
            let edges: u32 = adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2;
            for mask in 1u32..1 << n {
                if (edges + mask.count_ones()) as usize > max_edges {
                    continue;
                }
                let mut grown = adj.clone();
                for (v, a) in grown.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 {
                        *a |= 1 << n;
                    }
                }
                grown.push(mask);
                let key = ((edges + mask.count_ones()) as usize, canonical(&grown));
                if seen.insert(key) {
                    next.push((key, grown));
                }
            }
        }
        next.sort_by_key(|&(k, _)| k);
        out.extend(next.iter().map(|(_, a)| to_graph(a)));
        level = next.into_iter().map(|(_, a)| a).collect();
    }
    out
}
