use crate::error::StaticInconsistencyError;

use super::{CndSpec, Constraint, Direction, Selector};

/// Two directions conflict when, for a single tuple, some axis is asked for
/// two different orderings (before vs after, or strict vs aligned).
pub fn conflicts(a: Direction, b: Direction) -> bool {
    let (ax, ay) = a.axes();
    let (bx, by) = b.axes();
    let clash = |p: Option<_>, q: Option<_>| matches!((p, q), (Some(p), Some(q)) if p != q);
    clash(ax, bx) || clash(ay, by)
}

/// Reject a spec that lays some field out in directions no pair of atoms can
/// satisfy. Fields are examined in order of first mention; the reported
/// directions are the conflicting ones, in source order.
pub fn check_static(spec: &CndSpec) -> Result<(), StaticInconsistencyError> {
    let mut fields: Vec<(&str, Vec<Direction>)> = Vec::new();
    for c in &spec.constraints {
        let Constraint::Orientation(o) = &c.item else {
            continue;
        };
        let Selector::Field(name) = &o.selector else {
            continue;
        };
        let idx = match fields.iter().position(|(f, _)| f == name) {
            Some(i) => i,
            None => {
                fields.push((name, Vec::new()));
                fields.len() - 1
            }
        };
        for d in &o.directions {
            if !fields[idx].1.contains(d) {
                fields[idx].1.push(*d);
            }
        }
    }

    for (field, dirs) in fields {
        let bad: Vec<Direction> = dirs
            .iter()
            .copied()
            .filter(|&d| dirs.iter().any(|&e| conflicts(d, e)))
            .collect();
        if !bad.is_empty() {
            return Err(StaticInconsistencyError {
                field: field.to_string(),
                directions: bad,
            });
        }
    }
    Ok(())
}
