//! Final geometry: feasibility solve, refinement, and group separation.
//!
//! An unconstrained problem with no pins is returned exactly as the default
//! layered layout. Otherwise the default layout seeds weak stays, every
//! compiled constraint is added as a required constraint, pins become strong
//! edits, the result is refined, and disjoint groups are pushed apart.

mod default;
mod refine;

use std::collections::{BTreeMap, BTreeSet};

use crate::compile::{depths, Axis, LayoutProblem, LayoutVar, LinConstraint, VarOwner};
use crate::error::{LayoutError, Provenance, UnsatError};
use crate::params::LayoutParams;
use crate::solver::{to_f64, SolverState};

pub use default::{acyclic_edges, default_layout, layer_gap, longest_path_layers, order_layers};
pub use refine::{hop_distances, refine, refine_with};

/// Largest constraint violation tolerated when re-checking final geometry.
pub const TOLERANCE: f64 = 1e-7;

/// A node placed by its center and size.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRect {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

/// A group box, by center and size; `depth` is 1 for outermost groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRect {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub depth: usize,
}

/// The circle a cyclic component was placed on.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleGeom {
    pub id: String,
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Geometry {
    pub nodes: Vec<NodeRect>,
    pub groups: Vec<GroupRect>,
    pub cycles: Vec<CircleGeom>,
}

impl Geometry {
    pub fn node(&self, id: &str) -> Option<&NodeRect> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn group(&self, id: &str) -> Option<&GroupRect> {
        self.groups.iter().find(|g| g.id == id)
    }

    /// The value a layout variable takes in this geometry.
    pub fn value(&self, var: &LayoutVar) -> Option<f64> {
        let pick = |x: f64, y: f64| match var.axis {
            Axis::X => x,
            Axis::Y => y,
        };
        match &var.owner {
            VarOwner::Atom(id) => self.node(id).map(|n| pick(n.x, n.y)),
            VarOwner::GroupMin(id) => self
                .group(id)
                .map(|g| pick(g.x - g.w / 2.0, g.y - g.h / 2.0)),
            VarOwner::GroupMax(id) => self
                .group(id)
                .map(|g| pick(g.x + g.w / 2.0, g.y + g.h / 2.0)),
            VarOwner::CycleCenter(id) => self
                .cycles
                .iter()
                .find(|c| &c.id == id)
                .map(|c| pick(c.cx, c.cy)),
        }
    }

    /// The first constraint this geometry violates by more than [`TOLERANCE`].
    pub fn first_violation<'a>(&self, constraints: &'a [LinConstraint]) -> Option<&'a LinConstraint> {
        constraints
            .iter()
            .find(|c| c.violation(|v| self.value(v)) > TOLERANCE)
    }
}

/// Point every stay at the given node centers. Cycle centers aim at the
/// centroid of their members, group boxes at the tight bounds of theirs.
pub(crate) fn set_targets(
    state: &mut SolverState,
    problem: &LayoutProblem,
    centers: &[(f64, f64)],
    params: &LayoutParams,
) {
    let index: BTreeMap<&str, usize> = problem
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();
    for (node, &(x, y)) in problem.nodes.iter().zip(centers) {
        state.set_stay(&LayoutVar::x(&node.id), x);
        state.set_stay(&LayoutVar::y(&node.id), y);
    }
    for cycle in &problem.cycles {
        let pts: Vec<(f64, f64)> = cycle
            .order
            .iter()
            .filter_map(|m| index.get(m.as_str()).map(|&i| centers[i]))
            .collect();
        let k = pts.len().max(1) as f64;
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let owner = VarOwner::CycleCenter(cycle.id.clone());
        state.set_stay(&LayoutVar { owner: owner.clone(), axis: Axis::X }, cx);
        state.set_stay(&LayoutVar { owner, axis: Axis::Y }, cy);
    }
    for group in &problem.groups {
        let (mut l, mut t, mut r, mut b) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for m in &group.members {
            if let Some(&i) = index.get(m.as_str()) {
                let node = &problem.nodes[i];
                let (x, y) = centers[i];
                l = l.min(x - node.width / 2.0 - params.group_pad);
                r = r.max(x + node.width / 2.0 + params.group_pad);
                t = t.min(y - node.height / 2.0 - params.group_pad);
                b = b.max(y + node.height / 2.0 + params.group_pad);
            }
        }
        if l.is_finite() {
            state.set_stay(&group.min_var(Axis::X), l);
            state.set_stay(&group.min_var(Axis::Y), t);
            state.set_stay(&group.max_var(Axis::X), r);
            state.set_stay(&group.max_var(Axis::Y), b);
        }
    }
}

/// Current solved node centers, in problem node order.
pub(crate) fn read_centers(state: &SolverState, problem: &LayoutProblem) -> Vec<(f64, f64)> {
    let values = to_f64(&state.solve());
    let get = |v: LayoutVar| values.get(&v).copied().unwrap_or(0.0);
    problem
        .nodes
        .iter()
        .map(|n| (get(LayoutVar::x(&n.id)), get(LayoutVar::y(&n.id))))
        .collect()
}

fn geometry_from(state: &SolverState, problem: &LayoutProblem) -> Geometry {
    let values = to_f64(&state.solve());
    let get = |v: &LayoutVar| values.get(v).copied().unwrap_or(0.0);
    let group_depths = depths(&problem.groups);
    Geometry {
        nodes: problem
            .nodes
            .iter()
            .map(|n| NodeRect {
                id: n.id.clone(),
                x: get(&LayoutVar::x(&n.id)),
                y: get(&LayoutVar::y(&n.id)),
                w: n.width,
                h: n.height,
            })
            .collect(),
        groups: problem
            .groups
            .iter()
            .zip(group_depths)
            .map(|(g, depth)| {
                let [l, r, t, b] = g.box_vars().map(|v| get(&v));
                GroupRect {
                    id: g.id.clone(),
                    x: (l + r) / 2.0,
                    y: (t + b) / 2.0,
                    w: r - l,
                    h: b - t,
                    depth,
                }
            })
            .collect(),
        cycles: problem
            .cycles
            .iter()
            .map(|c| {
                let owner = VarOwner::CycleCenter(c.id.clone());
                CircleGeom {
                    id: c.id.clone(),
                    cx: get(&LayoutVar { owner: owner.clone(), axis: Axis::X }),
                    cy: get(&LayoutVar { owner, axis: Axis::Y }),
                    r: c.radius,
                    members: c.order.clone(),
                }
            })
            .collect(),
    }
}

/// True when the two boxes come closer than `gap` on both axes.
fn too_close(a: &GroupRect, b: &GroupRect, gap: f64) -> bool {
    let apart_x = (a.x - b.x).abs() >= (a.w + b.w) / 2.0 + gap - TOLERANCE;
    let apart_y = (a.y - b.y).abs() >= (a.h + b.h) / 2.0 + gap - TOLERANCE;
    !(apart_x || apart_y)
}

fn candidate_order<T>(mut sides: Vec<(T, f64)>) -> Vec<T> {
    sides.sort_by(|a, b| a.1.total_cmp(&b.1));
    sides.into_iter().map(|(s, _)| s).collect()
}

/// Push every pair of groups with disjoint members apart by at least
/// `group_pad`, choosing the side that needs the least movement and falling
/// back to the others. Nodes that are not members of a group are then moved
/// out of its box where the constraints allow it. Returns the separating
/// constraints added.
fn separate_groups(
    state: &mut SolverState,
    problem: &LayoutProblem,
    params: &LayoutParams,
) -> Result<Vec<LinConstraint>, UnsatError> {
    let gap = params.group_pad;
    let member_sets: Vec<BTreeSet<&String>> = problem.groups.iter().map(|g| g.members.iter().collect()).collect();
    let mut added = Vec::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let geom = geometry_from(state, problem);
        let pair = (0..problem.groups.len())
            .flat_map(|i| (i + 1..problem.groups.len()).map(move |j| (i, j)))
            .find(|&(i, j)| {
                !done.contains(&(i, j))
                    && member_sets[i].is_disjoint(&member_sets[j])
                    && too_close(&geom.groups[i], &geom.groups[j], gap)
            });
        let Some((i, j)) = pair else { break };
        done.insert((i, j));
        let (ga, gb) = (&problem.groups[i], &problem.groups[j]);
        let (ra, rb) = (&geom.groups[i], &geom.groups[j]);
        let prov = Provenance {
            line: ga.line.max(gb.line),
            text: format!("group {} apart from group {}", ga.id, gb.id),
            atoms: ga.members.iter().chain(&gb.members).cloned().collect(),
        };
        let sides = candidate_order(vec![
            ((ga, gb, Axis::X), ra.x + ra.w / 2.0 + gap - (rb.x - rb.w / 2.0)),
            ((gb, ga, Axis::X), rb.x + rb.w / 2.0 + gap - (ra.x - ra.w / 2.0)),
            ((ga, gb, Axis::Y), ra.y + ra.h / 2.0 + gap - (rb.y - rb.h / 2.0)),
            ((gb, ga, Axis::Y), rb.y + rb.h / 2.0 + gap - (ra.y - ra.h / 2.0)),
        ]);
        let mut last_err = None;
        for (first, second, axis) in sides {
            let c = LinConstraint::gap(first.max_var(axis), second.min_var(axis), gap, prov.clone());
            match state.add_constraint(c.clone()) {
                Ok(()) => {
                    added.push(c);
                    last_err = None;
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        if let Some(e) = last_err {
            return Err(e);
        }
    }

    let mut tried: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let geom = geometry_from(state, problem);
        let hit = (0..problem.groups.len())
            .flat_map(|g| (0..problem.nodes.len()).map(move |n| (g, n)))
            .find(|&(g, n)| {
                let node = &geom.nodes[n];
                let as_box = GroupRect {
                    id: String::new(),
                    x: node.x,
                    y: node.y,
                    w: node.w,
                    h: node.h,
                    depth: 0,
                };
                !tried.contains(&(g, n))
                    && !member_sets[g].contains(&node.id)
                    && too_close(&geom.groups[g], &as_box, gap)
            });
        let Some((g, n)) = hit else { return Ok(added) };
        tried.insert((g, n));
        let (group, spec) = (&problem.groups[g], &problem.nodes[n]);
        let (r, node) = (&geom.groups[g], &geom.nodes[n]);
        let prov = Provenance {
            line: group.line,
            text: format!("{} outside group {}", spec.id, group.id),
            atoms: vec![spec.id.clone()],
        };
        let (hw, hh) = (spec.width / 2.0 + gap, spec.height / 2.0 + gap);
        let (x, y) = (LayoutVar::x(&spec.id), LayoutVar::y(&spec.id));
        let sides = candidate_order(vec![
            ((group.max_var(Axis::X), x.clone()), r.x + r.w / 2.0 + hw - node.x),
            ((x, group.min_var(Axis::X)), node.x + hw - (r.x - r.w / 2.0)),
            ((group.max_var(Axis::Y), y.clone()), r.y + r.h / 2.0 + hh - node.y),
            ((y, group.min_var(Axis::Y)), node.y + hh - (r.y - r.h / 2.0)),
        ]);
        for (lo, hi) in sides {
            let half = if lo.axis == Axis::X { hw } else { hh };
            let c = LinConstraint::gap(lo, hi, half, prov.clone());
            if state.add_constraint(c.clone()).is_ok() {
                added.push(c);
                break;
            }
        }
    }
}

/// Lay out a compiled problem. `pins` maps atom ids to preferred centers;
/// pins on atoms not in the problem are ignored.
pub fn layout(
    problem: &LayoutProblem,
    params: &LayoutParams,
    pins: &BTreeMap<String, (f64, f64)>,
) -> Result<Geometry, LayoutError> {
    let base = default_layout(problem, params);
    if problem.is_unconstrained() && pins.is_empty() {
        return Ok(base);
    }
    let centers: Vec<(f64, f64)> = base.nodes.iter().map(|n| (n.x, n.y)).collect();
    let mut state = SolverState::new();
    set_targets(&mut state, problem, &centers, params);
    state.add_all(problem.constraints.iter().cloned())?;
    for (id, &(x, y)) in pins {
        if problem.node(id).is_some() {
            state.suggest(&LayoutVar::x(id), x);
            state.suggest(&LayoutVar::y(id), y);
        }
    }
    let mut extra = separate_groups(&mut state, problem, params)?;
    if !problem.is_unconstrained() {
        let start = read_centers(&state, problem);
        refine_with(&mut state, problem, params, start);
        extra.extend(separate_groups(&mut state, problem, params)?);
    }
    let geometry = geometry_from(&state, problem);
    let all: Vec<LinConstraint> = problem.constraints.iter().cloned().chain(extra).collect();
    if let Some(c) = geometry.first_violation(&all) {
        return Err(UnsatError {
            failing: c.provenance.clone(),
            context: Vec::new(),
        }
        .into());
    }
    Ok(geometry)
}
