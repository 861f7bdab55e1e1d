//! Layered layout used when a spec places no constraints on positions.

use std::collections::{BTreeMap, BTreeSet};

use crate::compile::LayoutProblem;
use crate::params::LayoutParams;

use super::{Geometry, NodeRect};

const ORDERING_SWEEPS: usize = 4;

/// Distance between consecutive layer centers.
pub fn layer_gap(problem: &LayoutProblem, params: &LayoutParams) -> f64 {
    let tallest = problem.nodes.iter().map(|n| n.height).fold(0.0, f64::max);
    tallest + params.separation()
}

/// Structure edges as index pairs, self-loops and unknown endpoints dropped.
pub(crate) fn index_edges(problem: &LayoutProblem) -> Vec<(usize, usize)> {
    let index: BTreeMap<&str, usize> = problem
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();
    problem
        .structure
        .iter()
        .filter_map(|(a, b)| Some((*index.get(a.as_str())?, *index.get(b.as_str())?)))
        .filter(|(a, b)| a != b)
        .collect()
}

/// Remove back edges found by depth-first search from nodes in order,
/// following outgoing edges in the order given.
pub fn acyclic_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        out[a].push((b, k));
    }
    // 0 = unvisited, 1 = on stack, 2 = finished
    let mut state = vec![0u8; n];
    let mut back: BTreeSet<usize> = BTreeSet::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some((v, next)) = stack.last_mut() {
            let v = *v;
            if *next < out[v].len() {
                let (w, k) = out[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => {
                        back.insert(k);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    edges
        .iter()
        .enumerate()
        .filter(|(k, _)| !back.contains(k))
        .map(|(_, e)| *e)
        .collect()
}

/// Longest-path layer of every node in a DAG: sources sit on layer 0.
pub fn longest_path_layers(n: usize, dag: &[(usize, usize)]) -> Vec<usize> {
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in dag {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut layer = vec![0usize; n];
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop_first() {
        for &w in &succ[v] {
            layer[w] = layer[w].max(layer[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    layer
}

/// Order nodes within each layer by alternating barycenter sweeps. Nodes
/// start in input order; ties keep the previous order.
pub fn order_layers(layers: &[usize], dag: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let depth = layers.iter().copied().max().map_or(0, |m| m + 1);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for (v, &l) in layers.iter().enumerate() {
        rows[l].push(v);
    }
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); layers.len()];
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); layers.len()];
    for &(a, b) in dag {
        down[a].push(b);
        up[b].push(a);
    }

    let mut pos = vec![0.0f64; layers.len()];
    let reindex = |rows: &Vec<Vec<usize>>, pos: &mut Vec<f64>| {
        for row in rows {
            for (i, &v) in row.iter().enumerate() {
                pos[v] = i as f64;
            }
        }
    };
    reindex(&rows, &mut pos);

    let sweep = |row: &mut Vec<usize>, neigh: &Vec<Vec<usize>>, pos: &Vec<f64>| {
        let mut keyed: Vec<(f64, usize, usize)> = row
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let ns = &neigh[v];
                let bary = if ns.is_empty() {
                    pos[v]
                } else {
                    ns.iter().map(|&u| pos[u]).sum::<f64>() / ns.len() as f64
                };
                (bary, i, v)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        *row = keyed.into_iter().map(|(_, _, v)| v).collect();
    };

    for _ in 0..ORDERING_SWEEPS {
        for l in 1..depth {
            sweep(&mut rows[l], &up, &pos);
            reindex(&rows, &mut pos);
        }
        for l in (0..depth.saturating_sub(1)).rev() {
            sweep(&mut rows[l], &down, &pos);
            reindex(&rows, &mut pos);
        }
    }
    rows
}

/// Layered layout of the problem's nodes over its structure edges. Rows are
/// centered on the widest row; every coordinate is at least `margin`.
pub fn default_layout(problem: &LayoutProblem, params: &LayoutParams) -> Geometry {
    let n = problem.nodes.len();
    let dag = acyclic_edges(n, &index_edges(problem));
    let layers = longest_path_layers(n, &dag);
    let rows = order_layers(&layers, &dag);
    let sep = params.separation();
    let gap = layer_gap(problem, params);
    let tallest = gap - sep;

    let row_width = |row: &Vec<usize>| -> f64 {
        let widths: f64 = row.iter().map(|&v| problem.nodes[v].width).sum();
        widths + sep * row.len().saturating_sub(1) as f64
    };
    let widest = rows.iter().map(row_width).fold(0.0, f64::max);

    let mut centers = vec![(0.0, 0.0); n];
    for (l, row) in rows.iter().enumerate() {
        let mut cursor = params.margin + (widest - row_width(row)) / 2.0;
        let y = params.margin + tallest / 2.0 + l as f64 * gap;
        for &v in row {
            let w = problem.nodes[v].width;
            centers[v] = (cursor + w / 2.0, y);
            cursor += w + sep;
        }
    }

    Geometry {
        nodes: problem
            .nodes
            .iter()
            .zip(centers)
            .map(|(spec, (x, y))| NodeRect {
                id: spec.id.clone(),
                x,
                y,
                w: spec.width,
                h: spec.height,
            })
            .collect(),
        groups: Vec::new(),
        cycles: Vec::new(),
    }
}
