use std::collections::BTreeSet;

use crate::error::{GroupOverlapError, Provenance};
use crate::spec::GroupTarget;

use super::problem::{Axis, Group, LinConstraint, NodeSpec};

/// One group per key atom: with `Range` the key is the domain atom and the
/// members its image; with `Domain` the key is a range atom and the members
/// its preimage. Groups appear in order of the key's first tuple.
pub fn build_groups(
    field: &str,
    target: GroupTarget,
    tuples: &[(String, String)],
    atom_rank: impl Fn(&str) -> usize,
    line: usize,
) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (a, b) in tuples {
        let (key, member) = match target {
            GroupTarget::Range => (a, b),
            GroupTarget::Domain => (b, a),
        };
        let id = group_id(field, target, key);
        match groups.iter_mut().find(|g| g.id == id) {
            Some(g) => {
                if !g.members.contains(member) {
                    g.members.push(member.clone());
                }
            }
            None => groups.push(Group {
                id,
                field: field.to_string(),
                key: key.clone(),
                target,
                members: vec![member.clone()],
                line,
            }),
        }
    }
    for g in &mut groups {
        g.members.sort_by_key(|m| atom_rank(m));
    }
    groups
}

pub fn group_id(field: &str, target: GroupTarget, key: &str) -> String {
    match target {
        GroupTarget::Range => format!("{field}-{key}"),
        GroupTarget::Domain => format!("{field}-of-{key}"),
    }
}

/// Keep each member's box, inflated by `pad`, inside the group box.
pub fn containment(group: &Group, nodes: &[NodeSpec], pad: f64, text: &str) -> Vec<LinConstraint> {
    let mut out = Vec::new();
    for m in &group.members {
        let node = nodes.iter().find(|n| &n.id == m).expect("member is a node");
        let prov = Provenance {
            line: group.line,
            text: text.to_string(),
            atoms: vec![group.key.clone(), m.clone()],
        };
        for (axis, half) in [(Axis::X, node.width / 2.0), (Axis::Y, node.height / 2.0)] {
            let v = super::LayoutVar::atom(m, axis);
            out.push(LinConstraint::gap(
                group.min_var(axis),
                v.clone(),
                half + pad,
                prov.clone(),
            ));
            out.push(LinConstraint::gap(v, group.max_var(axis), half + pad, prov.clone()));
        }
    }
    out
}

/// Groups may be disjoint or nested, never partially overlapping.
pub fn check_overlaps(groups: &[Group]) -> Result<(), GroupOverlapError> {
    for (i, a) in groups.iter().enumerate() {
        let sa: BTreeSet<&String> = a.members.iter().collect();
        for b in &groups[i + 1..] {
            let sb: BTreeSet<&String> = b.members.iter().collect();
            let shared: Vec<String> = a
                .members
                .iter()
                .filter(|m| sb.contains(m))
                .cloned()
                .collect();
            if !shared.is_empty() && !sa.is_subset(&sb) && !sb.is_subset(&sa) {
                return Err(GroupOverlapError {
                    first: a.id.clone(),
                    second: b.id.clone(),
                    shared,
                });
            }
        }
    }
    Ok(())
}

/// `(outer, inner)` index pairs for every nested pair of groups. Equal member
/// sets nest the later group inside the earlier one.
pub fn nesting(groups: &[Group]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in groups.iter().enumerate() {
        let sa: BTreeSet<&String> = a.members.iter().collect();
        for (j, b) in groups.iter().enumerate() {
            if i == j {
                continue;
            }
            let sb: BTreeSet<&String> = b.members.iter().collect();
            let strict = sb.is_subset(&sa) && sb.len() < sa.len();
            let equal_later = sa == sb && i < j;
            if strict || equal_later {
                out.push((i, j));
            }
        }
    }
    out
}

/// Nesting depth of each group: 1 for outermost groups.
pub fn depths(groups: &[Group]) -> Vec<usize> {
    let pairs = nesting(groups);
    (0..groups.len())
        .map(|j| 1 + pairs.iter().filter(|(_, inner)| *inner == j).count())
        .collect()
}

/// Keep an inner group's box strictly inside its outer group's box.
pub fn nested_containment(outer: &Group, inner: &Group, pad: f64) -> Vec<LinConstraint> {
    let prov = Provenance {
        line: inner.line.max(outer.line),
        text: format!("group {} inside group {}", inner.id, outer.id),
        atoms: inner.members.clone(),
    };
    let mut out = Vec::new();
    for axis in [Axis::X, Axis::Y] {
        out.push(LinConstraint::gap(outer.min_var(axis), inner.min_var(axis), pad, prov.clone()));
        out.push(LinConstraint::gap(inner.max_var(axis), outer.max_var(axis), pad, prov.clone()));
    }
    out
}
