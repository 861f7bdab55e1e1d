use std::collections::{BTreeMap, BTreeSet};

use crate::error::Provenance;
use crate::params::LayoutParams;
use crate::spec::Flow;

use super::problem::{Axis, CycleComponent, LayoutVar, LinConstraint, VarOwner};

/// Weakly connected components of a binary relation, each ordered by
/// depth-first exploration.
///
/// `atoms` fixes the tie-break order; `tuples` are the (visible) pairs of the
/// field in instance order. Components are listed by their earliest atom.
/// Exploration starts at the atom with the smallest in-degree and follows
/// outgoing pairs in tuple order; if atoms remain unreached, it restarts from
/// the remaining atom with the smallest in-degree.
pub fn dfs_components(atoms: &[String], tuples: &[(String, String)]) -> Vec<Vec<String>> {
    let rank: BTreeMap<&str, usize> = atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let mut out_edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut in_degree: BTreeMap<&str, usize> = BTreeMap::new();
    let mut neighbours: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (a, b) in tuples {
        out_edges.entry(a).or_default().push(b);
        *in_degree.entry(b).or_default() += 1;
        in_degree.entry(a).or_default();
        neighbours.entry(a).or_default().insert(b);
        neighbours.entry(b).or_default().insert(a);
    }

    let mut involved: Vec<&str> = neighbours.keys().copied().collect();
    involved.sort_by_key(|a| rank[a]);

    let mut assigned: BTreeSet<&str> = BTreeSet::new();
    let mut components = Vec::new();
    for &start in &involved {
        if assigned.contains(start) {
            continue;
        }
        // undirected flood fill for membership
        let mut members = vec![start];
        assigned.insert(start);
        let mut i = 0;
        while i < members.len() {
            for &n in &neighbours[members[i]] {
                if assigned.insert(n) {
                    members.push(n);
                }
            }
            i += 1;
        }
        members.sort_by_key(|a| rank[a]);

        let mut order: Vec<String> = Vec::with_capacity(members.len());
        let mut visited: BTreeSet<&str> = BTreeSet::new();
        while order.len() < members.len() {
            let root = members
                .iter()
                .filter(|m| !visited.contains(*m))
                .min_by_key(|m| (in_degree[*m], rank[*m]))
                .copied()
                .expect("unvisited member remains");
            // iterative preorder DFS
            let mut stack: Vec<(&str, usize)> = vec![(root, 0)];
            visited.insert(root);
            order.push(root.to_string());
            while let Some((node, next)) = stack.last_mut() {
                let succ = out_edges.get(*node).map(|v| v.as_slice()).unwrap_or(&[]);
                if *next < succ.len() {
                    let child = succ[*next];
                    *next += 1;
                    if visited.insert(child) {
                        order.push(child.to_string());
                        stack.push((child, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
        components.push(order);
    }
    components
}

/// Angle, in radians measured clockwise from "up" on screen, of the `i`-th
/// of `n` positions.
pub fn slot_angle(i: usize, n: usize, flow: Flow) -> f64 {
    let step = std::f64::consts::TAU * i as f64 / n as f64;
    match flow {
        Flow::Clockwise => step,
        Flow::Counterclockwise => -step,
    }
}

/// Place each component on its own circle: member `i` at
/// `(cx + r sin t, cy - r cos t)` for `t = slot_angle(i)`.
pub fn compile_cycle(
    field: &str,
    flow: Flow,
    atoms: &[String],
    tuples: &[(String, String)],
    params: &LayoutParams,
    line: usize,
    text: &str,
) -> (Vec<CycleComponent>, Vec<LinConstraint>) {
    let mut comps = Vec::new();
    let mut constraints = Vec::new();
    for (k, order) in dfs_components(atoms, tuples).into_iter().enumerate() {
        let id = format!("{field}-{}-{k}", flow.as_str());
        let n = order.len();
        let radius = params.cycle_radius(n);
        let cx = LayoutVar {
            owner: VarOwner::CycleCenter(id.clone()),
            axis: Axis::X,
        };
        let cy = LayoutVar {
            owner: VarOwner::CycleCenter(id.clone()),
            axis: Axis::Y,
        };
        for (i, atom) in order.iter().enumerate() {
            let t = slot_angle(i, n, flow);
            let prov = Provenance {
                line,
                text: text.to_string(),
                atoms: vec![atom.clone()],
            };
            constraints.push(LinConstraint::offset(
                LayoutVar::x(atom),
                cx.clone(),
                radius * t.sin(),
                prov.clone(),
            ));
            constraints.push(LinConstraint::offset(
                LayoutVar::y(atom),
                cy.clone(),
                -radius * t.cos(),
                prov,
            ));
        }
        comps.push(CycleComponent {
            id,
            field: field.to_string(),
            order,
            radius,
        });
    }
    (comps, constraints)
}
