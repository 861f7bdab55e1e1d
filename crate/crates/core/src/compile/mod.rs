//! Compilation of a checked spec against an instance into a [`LayoutProblem`]:
//! layout variables, required linear constraints with provenance, groups and
//! the edges to draw.
//!
//! Constraint order is spec order, then tuple order, then direction order.
//! Nested-group containment follows all spec constraints.

mod cycle;
mod group;
mod problem;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{CompileError, LayoutError, Provenance};
use crate::instance::Instance;
use crate::params::LayoutParams;
use crate::spec::{AxisOrder, CndSpec, Constraint, Direction, Selector, VisibilityFlag};
use crate::style::{apply_attributes, apply_icons, apply_projection, Style};

pub use cycle::{compile_cycle, dfs_components, slot_angle};
pub use group::{build_groups, check_overlaps, containment, depths, group_id, nested_containment, nesting};
pub use problem::{
    grid_rational, rational, Axis, CycleComponent, Edge, Endpoint, Group, LayoutProblem, LayoutVar,
    LinConstraint, NodeSpec, Relation, VarOwner,
};

/// Atoms that survive projection and the visibility flags, in instance order.
///
/// Projection runs first. Degrees for the hide flags count only tuples whose
/// atoms all survive projection.
pub fn apply_visibility(spec: &CndSpec, instance: &Instance) -> Result<Vec<String>, CompileError> {
    let hidden = apply_projection(spec, instance)?;
    let hide_all = spec.has_flag(VisibilityFlag::HideDisconnected);
    let hide_builtin = spec.has_flag(VisibilityFlag::HideDisconnectedBuiltIns);

    let mut degree: BTreeMap<&str, usize> = BTreeMap::new();
    for t in instance.fields().iter().flat_map(|f| &f.tuples) {
        if t.iter().all(|a| !hidden.contains(a)) {
            let distinct: BTreeSet<&str> = t.iter().map(String::as_str).collect();
            for a in distinct {
                *degree.entry(a).or_default() += 1;
            }
        }
    }

    Ok(instance
        .atoms()
        .iter()
        .filter(|a| !hidden.contains(&a.id))
        .filter(|a| {
            let isolated = degree.get(a.id.as_str()).copied().unwrap_or(0) == 0;
            !(isolated && (hide_all || (hide_builtin && instance.is_builtin_atom(&a.id))))
        })
        .map(|a| a.id.clone())
        .collect())
}

fn layout_field<'a>(
    instance: &'a Instance,
    name: &str,
    line: usize,
) -> Result<&'a crate::instance::Field, CompileError> {
    let field = instance.field(name).ok_or_else(|| CompileError::UnknownField {
        field: name.to_string(),
        line,
    })?;
    if !field.is_binary() {
        return Err(CompileError::NotBinary {
            field: name.to_string(),
            arity: field.arity,
            line,
        });
    }
    Ok(field)
}

/// Linear constraints placing `target` in `dir` relative to `source`.
pub fn orientation_constraints(
    source: &str,
    target: &str,
    dir: Direction,
    sep: f64,
    provenance: &Provenance,
) -> Vec<LinConstraint> {
    let (x, y) = dir.axes();
    let mut out = Vec::new();
    for (order, axis) in [(x, Axis::X), (y, Axis::Y)] {
        let s = LayoutVar::atom(source, axis);
        let t = LayoutVar::atom(target, axis);
        match order {
            None => {}
            Some(AxisOrder::Before) => out.push(LinConstraint::gap(t, s, sep, provenance.clone())),
            Some(AxisOrder::After) => out.push(LinConstraint::gap(s, t, sep, provenance.clone())),
            Some(AxisOrder::Aligned) => out.push(LinConstraint::offset(t, s, 0.0, provenance.clone())),
        }
    }
    out
}

/// Compile `spec` against `instance`. The spec must already have passed
/// [`check_static`](crate::spec::check_static).
pub fn compile(spec: &CndSpec, instance: &Instance, params: &LayoutParams) -> Result<LayoutProblem, LayoutError> {
    // Reference checks up front so errors do not depend on visibility.
    for c in &spec.constraints {
        match &c.item {
            Constraint::Cyclic(cc) => {
                layout_field(instance, &cc.field, c.line)?;
            }
            Constraint::Grouping(g) => {
                layout_field(instance, &g.field, c.line)?;
            }
            Constraint::Orientation(o) => match &o.selector {
                Selector::Field(f) => {
                    layout_field(instance, f, c.line)?;
                }
                Selector::SigPair(a, b) => {
                    for sig in [a, b] {
                        if instance.sig(sig).is_none() {
                            return Err(CompileError::UnknownSig {
                                sig: sig.clone(),
                                line: c.line,
                            }
                            .into());
                        }
                    }
                }
            },
        }
    }

    let (labels, suppressed) = apply_attributes(spec, instance)?;
    let icons = apply_icons(spec, instance)?;
    let sizing = Style {
        labels,
        icons,
        ..Style::default()
    };

    let survivors = apply_visibility(spec, instance)?;
    let visible: BTreeSet<&str> = survivors.iter().map(String::as_str).collect();
    let rank = |a: &str| instance.atom_ordinal(a).unwrap_or(usize::MAX);

    let nodes: Vec<NodeSpec> = survivors
        .iter()
        .map(|id| {
            let (width, height) = sizing.node_size(id, params);
            NodeSpec {
                id: id.clone(),
                width,
                height,
            }
        })
        .collect();

    let visible_pairs = |field: &str| -> Vec<(String, String)> {
        instance
            .field(field)
            .map(|f| {
                f.tuples
                    .iter()
                    .filter(|t| t.iter().all(|a| visible.contains(a.as_str())))
                    .map(|t| (t[0].clone(), t[t.len() - 1].clone()))
                    .collect()
            })
            .unwrap_or_default()
    };

    let sep = params.separation();
    let mut problem = LayoutProblem {
        nodes,
        ..LayoutProblem::default()
    };

    for c in &spec.constraints {
        let text = c.item.to_string();
        match &c.item {
            Constraint::Cyclic(cc) => {
                let (comps, cs) = compile_cycle(
                    &cc.field,
                    cc.flow,
                    &survivors,
                    &visible_pairs(&cc.field),
                    params,
                    c.line,
                    &text,
                );
                problem.cycles.extend(comps);
                problem.constraints.extend(cs);
            }
            Constraint::Orientation(o) => {
                let pairs: Vec<(String, String)> = match &o.selector {
                    Selector::Field(f) => visible_pairs(f),
                    // "A left of B": each A atom is placed relative to each B atom.
                    Selector::SigPair(a, b) => {
                        let sa: Vec<&str> = instance
                            .atoms_of(a)
                            .map(|x| x.id.as_str())
                            .filter(|x| visible.contains(x))
                            .collect();
                        let sb: Vec<&str> = instance
                            .atoms_of(b)
                            .map(|x| x.id.as_str())
                            .filter(|x| visible.contains(x))
                            .collect();
                        sa.iter()
                            .flat_map(|x| sb.iter().map(move |y| (y.to_string(), x.to_string())))
                            .collect()
                    }
                };
                for (source, target) in pairs {
                    let atoms = match &o.selector {
                        Selector::Field(_) => vec![source.clone(), target.clone()],
                        Selector::SigPair(..) => vec![target.clone(), source.clone()],
                    };
                    let prov = Provenance {
                        line: c.line,
                        text: text.clone(),
                        atoms,
                    };
                    for d in &o.directions {
                        problem
                            .constraints
                            .extend(orientation_constraints(&source, &target, *d, sep, &prov));
                    }
                }
            }
            Constraint::Grouping(g) => {
                let groups = build_groups(&g.field, g.target, &visible_pairs(&g.field), rank, c.line);
                for grp in &groups {
                    problem
                        .constraints
                        .extend(containment(grp, &problem.nodes, params.group_pad, &text));
                }
                problem.groups.extend(groups);
            }
        }
    }

    check_overlaps(&problem.groups)?;
    for (outer, inner) in nesting(&problem.groups) {
        let cs = nested_containment(&problem.groups[outer], &problem.groups[inner], params.group_pad);
        problem.constraints.extend(cs);
    }

    // Edges, in field then tuple order. A grouped tuple is drawn once per
    // group, at the position of the group's first tuple.
    let mut drawn_groups: BTreeSet<String> = BTreeSet::new();
    for field in instance.fields() {
        let grouping = spec.constraints.iter().find_map(|c| match &c.item {
            Constraint::Grouping(g) if g.field == field.name => Some(g.target),
            _ => None,
        });
        for t in &field.tuples {
            if !t.iter().all(|a| visible.contains(a.as_str())) {
                continue;
            }
            let (first, last) = (&t[0], &t[t.len() - 1]);
            if first != last {
                problem.structure.push((first.clone(), last.clone()));
            }
            if suppressed.contains(&field.name) {
                continue;
            }
            if let Some(target) = grouping {
                let key = match target {
                    crate::spec::GroupTarget::Range => first,
                    crate::spec::GroupTarget::Domain => last,
                };
                let gid = group_id(&field.name, target, key);
                if problem.group(&gid).is_some() {
                    if drawn_groups.insert(gid.clone()) {
                        let (from, to) = match target {
                            crate::spec::GroupTarget::Range => {
                                (Endpoint::Node(key.clone()), Endpoint::Group(gid))
                            }
                            crate::spec::GroupTarget::Domain => {
                                (Endpoint::Group(gid), Endpoint::Node(key.clone()))
                            }
                        };
                        problem.edges.push(Edge {
                            from,
                            to,
                            field: field.name.clone(),
                            label: field.name.clone(),
                        });
                    }
                    continue;
                }
            }
            let label = if t.len() > 2 {
                format!("{}[{}]", field.name, t[1..t.len() - 1].join(", "))
            } else {
                field.name.clone()
            };
            problem.edges.push(Edge {
                from: Endpoint::Node(first.clone()),
                to: Endpoint::Node(last.clone()),
                field: field.name.clone(),
                label,
            });
        }
    }

    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn tree() -> Instance {
        Instance::parse(
            r#"{"sigs":[{"name":"Node"}],
                "atoms":[{"id":"N0","sig":"Node"},{"id":"N1","sig":"Node"},{"id":"N2","sig":"Node"}],
                "fields":[{"name":"left","owner":"Node","arity":2,"tuples":[["N0","N1"]]},
                          {"name":"right","owner":"Node","arity":2,"tuples":[["N0","N2"]]}]}"#,
        )
        .unwrap()
    }

    fn river() -> Instance {
        Instance::parse(
            r#"{"sigs":[{"name":"Shore"},{"name":"Animal"}],
                "atoms":[{"id":"Near","sig":"Shore"},{"id":"Far","sig":"Shore"},
                         {"id":"Goat0","sig":"Animal"},{"id":"Wolf0","sig":"Animal"},{"id":"Goat1","sig":"Animal"}],
                "fields":[{"name":"animals","owner":"Shore","arity":2,
                           "tuples":[["Near","Goat0"],["Near","Wolf0"],["Far","Goat1"]]}]}"#,
        )
        .unwrap()
    }

    fn compiled(src: &str, inst: &Instance) -> Result<LayoutProblem, LayoutError> {
        compile(&parse_spec(src).unwrap(), inst, &LayoutParams::default())
    }

    #[test]
    fn binary_tree_left_child() {
        let p = compiled("orient field left left,below\norient field right right,below", &tree()).unwrap();
        assert_eq!(p.constraints.len(), 4);
        // x_N1 <= x_N0 - 100  <=>  x_N1 - x_N0 + 100 <= 0
        assert_eq!(p.constraints[0].to_string(), "x(N1) - x(N0) + 100 <= 0");
        // y_N1 >= y_N0 + 100  <=>  y_N0 - y_N1 + 100 <= 0
        assert_eq!(p.constraints[1].to_string(), "y(N0) - y(N1) + 100 <= 0");
        assert_eq!(p.constraints[0].provenance.atoms, vec!["N0", "N1"]);
        assert_eq!(p.constraints[2].provenance.line, 2);
    }

    #[test]
    fn directly_adds_alignment() {
        let p = compiled("orient field left directlyLeft", &tree()).unwrap();
        let text: Vec<String> = p.constraints.iter().map(|c| c.to_string()).collect();
        assert_eq!(text, vec!["x(N1) - x(N0) + 100 <= 0", "y(N1) - y(N0) == 0"]);
    }

    #[test]
    fn empty_spec_is_unconstrained() {
        let inst = river();
        let p = compiled("", &inst).unwrap();
        assert!(p.is_unconstrained());
        assert_eq!(p.nodes.len(), 5);
        assert_eq!(p.edges.len(), 3);
    }

    #[test]
    fn ternary_field_rejected() {
        let inst = Instance::parse(
            r#"{"sigs":[{"name":"A"}],"atoms":[{"id":"a","sig":"A"}],
                "fields":[{"name":"f","owner":"A","arity":3,"tuples":[["a","a","a"]]}]}"#,
        )
        .unwrap();
        let err = compiled("orient field f right", &inst).unwrap_err();
        assert_eq!(
            err,
            LayoutError::Compile(CompileError::NotBinary {
                field: "f".into(),
                arity: 3,
                line: 1
            })
        );
        assert!(err.to_string().contains("arity 3"));
        // n-ary tuples still show up as labelled edges
        let p = compiled("", &inst).unwrap();
        assert_eq!(p.edges[0].label, "f[a]");
    }

    #[test]
    fn unknown_references() {
        assert!(matches!(
            compiled("cyclic nope", &tree()),
            Err(LayoutError::Compile(CompileError::UnknownField { .. }))
        ));
        assert!(matches!(
            compiled("orient sig Node Ghost left", &tree()),
            Err(LayoutError::Compile(CompileError::UnknownSig { .. }))
        ));
    }

    #[test]
    fn grouping_merges_edges() {
        let p = compiled("group animals range", &river()).unwrap();
        assert_eq!(p.groups.len(), 2);
        assert_eq!(p.edges.len(), 2);
        let near: Vec<&Edge> = p
            .edges
            .iter()
            .filter(|e| e.from == Endpoint::Node("Near".into()))
            .collect();
        assert_eq!(near.len(), 1);
        assert_eq!(near[0].to, Endpoint::Group("animals-Near".into()));
        // 4 constraints per member, 3 members
        assert_eq!(p.constraints.len(), 12);
    }

    #[test]
    fn overlapping_groups_rejected() {
        let inst = Instance::parse(
            r#"{"sigs":[{"name":"A"}],
                "atoms":[{"id":"k","sig":"A"},{"id":"a","sig":"A"},{"id":"b","sig":"A"},{"id":"c","sig":"A"}],
                "fields":[{"name":"f","owner":"A","arity":2,"tuples":[["k","a"],["k","b"]]},
                          {"name":"g","owner":"A","arity":2,"tuples":[["k","b"],["k","c"]]}]}"#,
        )
        .unwrap();
        let err = compiled("group f\ngroup g", &inst).unwrap_err();
        let LayoutError::GroupOverlap(e) = err else { panic!("{err:?}") };
        assert_eq!(e.shared, vec!["b"]);
    }

    #[test]
    fn sig_pair_quantifies_all_pairs() {
        let inst = Instance::parse(
            r#"{"sigs":[{"name":"A"},{"name":"B"}],
                "atoms":[{"id":"a0","sig":"A"},{"id":"a1","sig":"A"},{"id":"b0","sig":"B"}],"fields":[]}"#,
        )
        .unwrap();
        let p = compiled("orient sig A B left", &inst).unwrap();
        let text: Vec<String> = p.constraints.iter().map(|c| c.to_string()).collect();
        // every A left of every B: x_a <= x_b - sep
        assert_eq!(text, vec!["x(a0) - x(b0) + 100 <= 0", "x(a1) - x(b0) + 100 <= 0"]);
        assert_eq!(p.constraints[0].provenance.atoms, vec!["a0", "b0"]);
    }

    #[test]
    fn visibility_flags() {
        let inst = Instance::parse(
            r#"{"sigs":[{"name":"Int","builtin":true},{"name":"A"}],
                "atoms":[{"id":"1","sig":"Int"},{"id":"a","sig":"A"},{"id":"b","sig":"A"},{"id":"c","sig":"A"}],
                "fields":[{"name":"f","owner":"A","arity":2,"tuples":[["a","b"]]}]}"#,
        )
        .unwrap();
        let vis = |src: &str| apply_visibility(&parse_spec(src).unwrap(), &inst).unwrap();
        assert_eq!(vis(""), vec!["1", "a", "b", "c"]);
        assert_eq!(vis("flag hideDisconnected"), vec!["a", "b"]);
        assert_eq!(vis("flag hideDisconnectedBuiltIns"), vec!["a", "b", "c"]);
    }

    #[test]
    fn cycles_register_components() {
        let inst = Instance::parse(
            r#"{"sigs":[{"name":"L"}],
                "atoms":[{"id":"L0","sig":"L"},{"id":"L1","sig":"L"},{"id":"L2","sig":"L"}],
                "fields":[{"name":"next","owner":"L","arity":2,"tuples":[["L0","L1"],["L1","L2"],["L2","L0"]]}]}"#,
        )
        .unwrap();
        let p = compiled("cyclic next", &inst).unwrap();
        assert_eq!(p.cycles.len(), 1);
        assert_eq!(p.cycles[0].order, vec!["L0", "L1", "L2"]);
        assert_eq!(p.constraints.len(), 6);
        assert_eq!(p.vars().len(), 8);
    }
}
