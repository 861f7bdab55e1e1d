//! Shared test helpers: fixture loading and an independent checker that
//! re-derives every layout rule from the instance, the spec and the emitted
//! Diagram JSON alone.

#![allow(dead_code)]

pub mod fm;
pub mod gen;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde_json::Value;

use cnd::spec::{CndSpec, Constraint, Direction, Flow, GroupTarget, Selector};

pub const TOL: f64 = 1e-6;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> String {
    let path = fixture_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every (instance, spec) pair of the corpus that lays out successfully.
pub const CORPUS: [&str; 11] = [
    "ring-lights",
    "bst",
    "river-crossing",
    "dining-philosophers",
    "linked-list",
    "filesystem",
    "chord",
    "client-server",
    "family",
    "fruit",
    "traffic-light",
];

pub fn corpus_pair(name: &str) -> (String, String) {
    (fixture(&format!("{name}.json")), fixture(&format!("{name}.cnd")))
}

struct Inst {
    parent: BTreeMap<String, Option<String>>,
    atom_sig: BTreeMap<String, String>,
    atoms: Vec<String>,
    fields: BTreeMap<String, Vec<Vec<String>>>,
}

impl Inst {
    fn new(v: &Value) -> Inst {
        let parent = v["sigs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| {
                (
                    s["name"].as_str().unwrap().to_string(),
                    s.get("parent").and_then(|p| p.as_str()).map(String::from),
                )
            })
            .collect();
        let mut atom_sig = BTreeMap::new();
        let mut atoms = Vec::new();
        for a in v["atoms"].as_array().unwrap() {
            let id = a["id"].as_str().unwrap().to_string();
            atom_sig.insert(id.clone(), a["sig"].as_str().unwrap().to_string());
            atoms.push(id);
        }
        let fields = v["fields"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| {
                let tuples = f["tuples"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| t.as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect())
                    .collect();
                (f["name"].as_str().unwrap().to_string(), tuples)
            })
            .collect();
        Inst {
            parent,
            atom_sig,
            atoms,
            fields,
        }
    }

    fn is_a(&self, atom: &str, sig: &str) -> bool {
        let mut cur = self.atom_sig.get(atom).cloned();
        while let Some(s) = cur {
            if s == sig {
                return true;
            }
            cur = self.parent.get(&s).cloned().flatten();
        }
        false
    }
}

#[derive(Clone, Copy)]
struct R {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl R {
    fn of(v: &Value) -> R {
        R {
            x: v["x"].as_f64().unwrap(),
            y: v["y"].as_f64().unwrap(),
            w: v["w"].as_f64().unwrap(),
            h: v["h"].as_f64().unwrap(),
        }
    }
    fn l(&self) -> f64 {
        self.x - self.w / 2.0
    }
    fn r(&self) -> f64 {
        self.x + self.w / 2.0
    }
    fn t(&self) -> f64 {
        self.y - self.h / 2.0
    }
    fn b(&self) -> f64 {
        self.y + self.h / 2.0
    }
    fn inside(&self, outer: &R, pad: f64) -> bool {
        self.l() - pad >= outer.l() - TOL
            && self.r() + pad <= outer.r() + TOL
            && self.t() - pad >= outer.t() - TOL
            && self.b() + pad <= outer.b() + TOL
    }
    fn apart(&self, o: &R, gap: f64) -> bool {
        self.r() + gap <= o.l() + TOL
            || o.r() + gap <= self.l() + TOL
            || self.b() + gap <= o.t() + TOL
            || o.b() + gap <= self.t() + TOL
    }
}

fn placed(dir: Direction, src: (f64, f64), dst: (f64, f64), sep: f64) -> bool {
    let (dx, dy) = (dst.0 - src.0, dst.1 - src.1);
    let left = dx <= -sep + TOL;
    let right = dx >= sep - TOL;
    let above = dy <= -sep + TOL;
    let below = dy >= sep - TOL;
    let same_x = dx.abs() <= TOL;
    let same_y = dy.abs() <= TOL;
    match dir {
        Direction::Left => left,
        Direction::Right => right,
        Direction::Above => above,
        Direction::Below => below,
        Direction::DirectlyLeft => left && same_y,
        Direction::DirectlyRight => right && same_y,
        Direction::DirectlyAbove => above && same_x,
        Direction::DirectlyBelow => below && same_x,
    }
}

fn components(tuples: &[(String, String)]) -> Vec<BTreeSet<String>> {
    let mut comps: Vec<BTreeSet<String>> = Vec::new();
    for (a, b) in tuples {
        let hits: Vec<usize> = (0..comps.len())
            .filter(|&i| comps[i].contains(a) || comps[i].contains(b))
            .collect();
        let mut merged: BTreeSet<String> = [a.clone(), b.clone()].into();
        for &i in hits.iter().rev() {
            merged.extend(comps.remove(i));
        }
        comps.push(merged);
    }
    comps
}

/// Everything `diagram` gets wrong about `spec` on `instance`, with the
/// default sizes (separation 100, group pad 15, minimum radius 120).
pub fn violations(instance_json: &str, spec: &CndSpec, diagram_json: &str) -> Vec<String> {
    let inst = Inst::new(&serde_json::from_str(instance_json).unwrap());
    let d: Value = serde_json::from_str(diagram_json).unwrap();
    let (sep, pad, min_r): (f64, f64, f64) = (100.0, 15.0, 120.0);
    let mut out = Vec::new();

    let nodes: BTreeMap<String, R> = d["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| (n["id"].as_str().unwrap().to_string(), R::of(n)))
        .collect();
    let pos = |a: &str| nodes.get(a).map(|r| (r.x, r.y));
    let groups: BTreeMap<String, R> = d["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["id"].as_str().unwrap().to_string(), R::of(g)))
        .collect();

    let canvas = R {
        x: d["canvas"]["x"].as_f64().unwrap() + d["canvas"]["w"].as_f64().unwrap() / 2.0,
        y: d["canvas"]["y"].as_f64().unwrap() + d["canvas"]["h"].as_f64().unwrap() / 2.0,
        w: d["canvas"]["w"].as_f64().unwrap(),
        h: d["canvas"]["h"].as_f64().unwrap(),
    };
    for (id, r) in nodes.iter().chain(&groups) {
        if !r.inside(&canvas, 0.0) {
            out.push(format!("{id} outside canvas"));
        }
    }
    let hides = spec.directives.iter().any(|d| {
            matches!(d.item, cnd::spec::Directive::Projection { .. } | cnd::spec::Directive::Flag(_))
        });
    if !hides {
        for a in &inst.atoms {
            if !nodes.contains_key(a) {
                out.push(format!("atom {a} missing from diagram"));
            }
        }
    }

    let visible_pairs = |field: &str| -> Vec<(String, String)> {
        inst.fields
            .get(field)
            .map(|ts| {
                ts.iter()
                    .filter(|t| t.iter().all(|a| nodes.contains_key(a)))
                    .map(|t| (t[0].clone(), t[t.len() - 1].clone()))
                    .collect()
            })
            .unwrap_or_default()
    };

    let mut expected_groups: Vec<(String, Vec<String>)> = Vec::new();
    let mut edge_fields: BTreeSet<String> = BTreeSet::new();
    for c in &spec.constraints {
        match &c.item {
            Constraint::Orientation(o) => {
                let pairs: Vec<(String, String)> = match &o.selector {
                    Selector::Field(f) => visible_pairs(f),
                    Selector::SigPair(a, b) => {
                        let sa: Vec<&String> = nodes.keys().filter(|x| inst.is_a(x, a)).collect();
                        let sb: Vec<&String> = nodes.keys().filter(|x| inst.is_a(x, b)).collect();
                        sa.iter()
                            .flat_map(|x| sb.iter().map(move |y| (y.to_string(), x.to_string())))
                            .collect()
                    }
                };
                for (s, t) in pairs {
                    for dir in &o.directions {
                        if !placed(*dir, pos(&s).unwrap(), pos(&t).unwrap(), sep) {
                            out.push(format!("line {}: {t} not {} of {s}", c.line, dir.as_str()));
                        }
                    }
                }
            }
            Constraint::Cyclic(cc) => {
                let pairs = visible_pairs(&cc.field);
                for comp in components(&pairs) {
                    let n = comp.len();
                    let want_r = min_r.max(n as f64 * sep / std::f64::consts::TAU);
                    let circle = d["cycles"].as_array().unwrap().iter().find(|c| {
                        let m: BTreeSet<String> = c["members"]
                            .as_array()
                            .unwrap()
                            .iter()
                            .map(|a| a.as_str().unwrap().to_string())
                            .collect();
                        m == comp
                    });
                    let Some(circle) = circle else {
                        out.push(format!("line {}: no circle for {comp:?}", c.line));
                        continue;
                    };
                    let (cx, cy, r) = (
                        circle["cx"].as_f64().unwrap(),
                        circle["cy"].as_f64().unwrap(),
                        circle["r"].as_f64().unwrap(),
                    );
                    if (r - want_r).abs() > TOL {
                        out.push(format!("line {}: radius {r} != {want_r}", c.line));
                    }
                    let members: Vec<&str> = circle["members"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|a| a.as_str().unwrap())
                        .collect();
                    let mut angles = Vec::new();
                    for m in &members {
                        let (x, y) = pos(m).unwrap();
                        let dist = (x - cx).hypot(y - cy);
                        if (dist - r).abs() > TOL {
                            out.push(format!("line {}: {m} at distance {dist} from center, radius {r}", c.line));
                        }
                        angles.push((x - cx).atan2(-(y - cy)).to_degrees());
                    }
                    let step = 360.0 / n as f64;
                    for i in 0..n {
                        let gap = (angles[(i + 1) % n] - angles[i]).rem_euclid(360.0);
                        let want = match cc.flow {
                            Flow::Clockwise => step,
                            Flow::Counterclockwise => 360.0 - step,
                        };
                        let want = if n == 1 { 0.0 } else { want };
                        let err = (gap - want).abs().min(360.0 - (gap - want).abs());
                        if err > 1e-6 {
                            out.push(format!("line {}: angular gap {gap} != {want}", c.line));
                        }
                    }
                    if n > 0 && angles[0].abs() > 1e-6 {
                        out.push(format!("line {}: first member not at the top of the circle", c.line));
                    }
                }
            }
            Constraint::Grouping(g) => {
                let draws_edges = edge_fields.insert(g.field.clone());
                let mut by_key: Vec<(String, Vec<String>)> = Vec::new();
                for (a, b) in visible_pairs(&g.field) {
                    let (key, member) = match g.target {
                        GroupTarget::Range => (a, b),
                        GroupTarget::Domain => (b, a),
                    };
                    let id = match g.target {
                        GroupTarget::Range => format!("{}-{key}", g.field),
                        GroupTarget::Domain => format!("{}-of-{key}", g.field),
                    };
                    match by_key.iter_mut().find(|(k, _)| *k == id) {
                        Some((_, ms)) => {
                            if !ms.contains(&member) {
                                ms.push(member)
                            }
                        }
                        None => by_key.push((id, vec![member])),
                    }
                }
                for (id, members) in &by_key {
                    let Some(rect) = groups.get(id) else {
                        out.push(format!("line {}: group {id} missing", c.line));
                        continue;
                    };
                    for m in members {
                        if !nodes[m].inside(rect, pad) {
                            out.push(format!("line {}: {m} not inside {id}", c.line));
                        }
                    }
                    let edges = d["edges"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .filter(|e| e["field"] == g.field.as_str() && (e["to"]["id"] == id.as_str() || e["from"]["id"] == id.as_str()))
                        .count();
                    if draws_edges && edges != 1 {
                        out.push(format!("line {}: group {id} has {edges} edges", c.line));
                    }
                }
                expected_groups.extend(by_key);
            }
        }
    }

    for i in 0..expected_groups.len() {
        for j in 0..expected_groups.len() {
            if i == j {
                continue;
            }
            let (ia, ma) = &expected_groups[i];
            let (ib, mb) = &expected_groups[j];
            let (Some(ra), Some(rb)) = (groups.get(ia), groups.get(ib)) else { continue };
            let sa: BTreeSet<&String> = ma.iter().collect();
            let sb: BTreeSet<&String> = mb.iter().collect();
            if i < j && sa.is_disjoint(&sb) && !ra.apart(rb, 1.0) {
                out.push(format!("disjoint groups {ia} and {ib} overlap"));
            }
            let nested = (sb.is_subset(&sa) && sb.len() < sa.len()) || (sa == sb && i < j);
            if nested && !rb.inside(ra, pad) {
                out.push(format!("group {ib} not inside {ia}"));
            }
            if !sa.is_disjoint(&sb) && !sa.is_subset(&sb) && !sb.is_subset(&sa) {
                out.push(format!("groups {ia} and {ib} partially overlap"));
            }
        }
    }
    out
}

/// Run the `cnd` binary with `args`.
pub fn cli(args: &[&std::ffi::OsStr]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_cnd"))
        .args(args)
        .env("CND_NO_COLOR", "1")
        .output()
        .expect("cnd binary runs")
}
