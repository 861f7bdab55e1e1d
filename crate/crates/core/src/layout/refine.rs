//! Stress majorization with projection onto the feasible set.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compile::LayoutProblem;
use crate::params::LayoutParams;
use crate::solver::SolverState;

use super::default::index_edges;
use super::{read_centers, set_targets};

const DISCONNECTED_HOPS: f64 = 2.0;

/// Graph-theoretic distances over the undirected structure graph, in hops.
/// Pairs in different components are treated as two hops apart.
pub fn hop_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for s in 0..n {
        dist[s][s] = 0.0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[s][w].is_infinite() {
                    dist[s][w] = dist[s][v] + 1.0;
                    queue.push_back(w);
                }
            }
        }
    }
    let far = DISCONNECTED_HOPS;
    for row in &mut dist {
        for d in row.iter_mut() {
            if d.is_infinite() {
                *d = far;
            }
        }
    }
    dist
}

/// One Gauss-Seidel majorization sweep over the free nodes.
fn sweep(centers: &mut [(f64, f64)], ideal: &[Vec<f64>], fixed: &[bool], rng: &mut ChaCha8Rng) {
    let n = centers.len();
    for i in 0..n {
        if fixed[i] {
            continue;
        }
        let (mut nx, mut ny, mut den) = (0.0, 0.0, 0.0);
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = ideal[i][j];
            let w = 1.0 / (d * d);
            let (dx, dy) = (centers[i].0 - centers[j].0, centers[i].1 - centers[j].1);
            let len = dx.hypot(dy);
            let (ux, uy) = if len < 1e-9 {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (t.cos(), t.sin())
            } else {
                (dx / len, dy / len)
            };
            nx += w * (centers[j].0 + d * ux);
            ny += w * (centers[j].1 + d * uy);
            den += w;
        }
        if den > 0.0 {
            centers[i] = (nx / den, ny / den);
        }
    }
}

/// Run `params.refine_iterations` majorization sweeps starting from
/// `centers`, projecting through `state` after every sweep. Pinned nodes do
/// not move. Returns the projected centers, in problem node order.
pub fn refine_with(
    state: &mut SolverState,
    problem: &LayoutProblem,
    params: &LayoutParams,
    centers: Vec<(f64, f64)>,
) -> Vec<(f64, f64)> {
    let n = problem.nodes.len();
    if params.refine_iterations == 0 || n < 2 {
        return centers;
    }
    let hops = hop_distances(n, &index_edges(problem));
    let unit = params.ideal_edge_length();
    let ideal: Vec<Vec<f64>> = hops
        .iter()
        .map(|row| row.iter().map(|h| h * unit).collect())
        .collect();
    let fixed: Vec<bool> = problem
        .nodes
        .iter()
        .map(|node| state.is_edited(&crate::compile::LayoutVar::x(&node.id)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut current = centers;
    // Majorization keeps collinear points collinear; nudge them off the line.
    for (c, &pinned) in current.iter_mut().zip(&fixed) {
        if !pinned {
            c.0 += rng.gen_range(-0.5..0.5);
            c.1 += rng.gen_range(-0.5..0.5);
        }
    }
    for _ in 0..params.refine_iterations {
        sweep(&mut current, &ideal, &fixed, &mut rng);
        set_targets(state, problem, &current, params);
        current = read_centers(state, problem);
    }
    current
}

/// Refine feasible `centers` for `problem` from scratch: build a solver
/// holding every problem constraint, then majorize and project.
pub fn refine(
    problem: &LayoutProblem,
    params: &LayoutParams,
    centers: Vec<(f64, f64)>,
) -> Result<Vec<(f64, f64)>, crate::error::UnsatError> {
    if params.refine_iterations == 0 {
        return Ok(centers);
    }
    let mut state = SolverState::new();
    set_targets(&mut state, problem, &centers, params);
    state.add_all(problem.constraints.iter().cloned())?;
    Ok(refine_with(&mut state, problem, params, centers))
}
