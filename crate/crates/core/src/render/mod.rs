//! Diagram assembly and output: the versioned Diagram JSON and static SVG.
//!
//! Diagram JSON v1:
//!
//! ```text
//! { "v": 1,
//!   "canvas": { "x", "y", "w", "h" },                 viewBox in layout coordinates
//!   "nodes":  [ { "id", "sig", "x", "y", "w", "h",    center and size
//!                 "label": [line], "color", "icon"?: { "path", "w", "h" } } ],
//!   "edges":  [ { "id", "from": { "kind", "id" }, "to": { "kind", "id" },
//!                 "field", "label", "points": [[x, y]], "fromAngle", "toAngle",
//!                 "selfLoop" } ],
//!   "groups": [ { "id", "field", "key", "members", "x", "y", "w", "h", "depth" } ],
//!   "cycles": [ { "id", "cx", "cy", "r", "members" } ] }
//! ```
//!
//! Numbers are emitted at full precision so a parsed diagram equals the one
//! rendered. Angles are degrees with y growing downward.

mod arrowheads;
mod svg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compile::{Endpoint, LayoutProblem};
use crate::error::InputError;
use crate::instance::Instance;
use crate::layout::Geometry;
use crate::params::LayoutParams;
use crate::style::Style;

pub use arrowheads::{angular_gap, perimeter_point, place_arrowheads, MIN_SEPARATION};
pub use svg::{fmt2, render_svg};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IconRef {
    pub path: String,
    pub w: u32,
    pub h: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramNode {
    pub id: String,
    pub sig: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub label: Vec<String>,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub icon: Option<IconRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiagramEdge {
    pub id: String,
    pub from: Endpoint,
    pub to: Endpoint,
    pub field: String,
    pub label: String,
    pub points: Vec<[f64; 2]>,
    pub from_angle: f64,
    pub to_angle: f64,
    pub self_loop: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramGroup {
    pub id: String,
    pub field: String,
    pub key: String,
    pub members: Vec<String>,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramCycle {
    pub id: String,
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagram {
    pub v: u32,
    pub canvas: Canvas,
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
    pub groups: Vec<DiagramGroup>,
    pub cycles: Vec<DiagramCycle>,
}

/// Self-loops leave the top edge and return on the right edge.
const SELF_LOOP_ANGLES: (f64, f64) = (-70.0, -20.0);
/// How far a self-loop and its label reach beyond the node.
const SELF_LOOP_REACH: f64 = 20.0;

struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl Diagram {
    pub fn empty(params: &LayoutParams) -> Diagram {
        Diagram {
            v: SCHEMA_VERSION,
            canvas: Canvas {
                x: 0.0,
                y: 0.0,
                w: 2.0 * params.margin,
                h: 2.0 * params.margin,
            },
            nodes: Vec::new(),
            edges: Vec::new(),
            groups: Vec::new(),
            cycles: Vec::new(),
        }
    }

    /// Combine geometry, styling and edges into a drawable diagram.
    pub fn build(
        problem: &LayoutProblem,
        geometry: &Geometry,
        style: &Style,
        instance: &Instance,
        params: &LayoutParams,
    ) -> Diagram {
        let nodes: Vec<DiagramNode> = geometry
            .nodes
            .iter()
            .map(|n| DiagramNode {
                id: n.id.clone(),
                sig: instance.atom(&n.id).map(|a| a.sig.clone()).unwrap_or_default(),
                x: n.x,
                y: n.y,
                w: n.w,
                h: n.h,
                label: style.labels.get(&n.id).cloned().unwrap_or_else(|| vec![n.id.clone()]),
                color: style.colors.get(&n.id).cloned().unwrap_or_else(|| "#999999".into()),
                icon: style.icons.get(&n.id).map(|i| IconRef {
                    path: i.path.clone(),
                    w: i.width,
                    h: i.height,
                }),
            })
            .collect();

        let groups: Vec<DiagramGroup> = problem
            .groups
            .iter()
            .filter_map(|g| {
                let r = geometry.group(&g.id)?;
                Some(DiagramGroup {
                    id: g.id.clone(),
                    field: g.field.clone(),
                    key: g.key.clone(),
                    members: g.members.clone(),
                    x: r.x,
                    y: r.y,
                    w: r.w,
                    h: r.h,
                    depth: r.depth,
                })
            })
            .collect();

        let rect_of = |e: &Endpoint| -> Rect {
            match e {
                Endpoint::Node(id) => geometry
                    .node(id)
                    .map(|n| Rect { x: n.x, y: n.y, w: n.w, h: n.h }),
                Endpoint::Group(id) => geometry
                    .group(id)
                    .map(|g| Rect { x: g.x, y: g.y, w: g.w, h: g.h }),
            }
            .unwrap_or(Rect { x: 0.0, y: 0.0, w: 0.0, h: 0.0 })
        };

        // Incidence angle of every edge end, grouped by the endpoint it sits on.
        let mut ends: BTreeMap<&Endpoint, Vec<(usize, bool, f64)>> = BTreeMap::new();
        for (k, e) in problem.edges.iter().enumerate() {
            if e.from == e.to {
                ends.entry(&e.from).or_default().push((k, false, SELF_LOOP_ANGLES.0));
                ends.entry(&e.to).or_default().push((k, true, SELF_LOOP_ANGLES.1));
                continue;
            }
            let (a, b) = (rect_of(&e.from), rect_of(&e.to));
            let out = (b.y - a.y).atan2(b.x - a.x).to_degrees();
            let inc = (a.y - b.y).atan2(a.x - b.x).to_degrees();
            ends.entry(&e.from).or_default().push((k, false, out));
            ends.entry(&e.to).or_default().push((k, true, inc));
        }
        let mut from_angle = vec![0.0; problem.edges.len()];
        let mut to_angle = vec![0.0; problem.edges.len()];
        for list in ends.values() {
            let raw: Vec<f64> = list.iter().map(|(_, _, a)| *a).collect();
            for (&(k, is_to, _), a) in list.iter().zip(place_arrowheads(&raw)) {
                if is_to {
                    to_angle[k] = a;
                } else {
                    from_angle[k] = a;
                }
            }
        }

        let mut per_field: BTreeMap<&str, usize> = BTreeMap::new();
        let edges: Vec<DiagramEdge> = problem
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let i = per_field.entry(e.field.as_str()).or_default();
                let id = format!("edge-{}-{}", e.field, *i);
                *i += 1;
                let (a, b) = (rect_of(&e.from), rect_of(&e.to));
                let start = perimeter_point(a.x, a.y, a.w, a.h, from_angle[k]);
                let end = perimeter_point(b.x, b.y, b.w, b.h, to_angle[k]);
                DiagramEdge {
                    id,
                    from: e.from.clone(),
                    to: e.to.clone(),
                    field: e.field.clone(),
                    label: e.label.clone(),
                    points: vec![[start.0, start.1], [end.0, end.1]],
                    from_angle: from_angle[k],
                    to_angle: to_angle[k],
                    self_loop: e.from == e.to,
                }
            })
            .collect();

        let cycles = geometry
            .cycles
            .iter()
            .map(|c| DiagramCycle {
                id: c.id.clone(),
                cx: c.cx,
                cy: c.cy,
                r: c.r,
                members: c.members.clone(),
            })
            .collect();

        let mut d = Diagram {
            v: SCHEMA_VERSION,
            canvas: Canvas { x: 0.0, y: 0.0, w: 0.0, h: 0.0 },
            nodes,
            edges,
            groups,
            cycles,
        };
        d.canvas = d.bounds(params.margin);
        d
    }

    /// The box covering every node, group and edge point, grown by `margin`.
    pub fn bounds(&self, margin: f64) -> Canvas {
        let mut xs: Vec<(f64, f64)> = Vec::new();
        let mut ys: Vec<(f64, f64)> = Vec::new();
        for n in &self.nodes {
            xs.push((n.x - n.w / 2.0, n.x + n.w / 2.0));
            ys.push((n.y - n.h / 2.0, n.y + n.h / 2.0));
        }
        for g in &self.groups {
            xs.push((g.x - g.w / 2.0, g.x + g.w / 2.0));
            ys.push((g.y - g.h / 2.0, g.y + g.h / 2.0));
        }
        for e in &self.edges {
            for p in &e.points {
                xs.push((p[0], p[0]));
                ys.push((p[1], p[1]));
            }
            if e.self_loop {
                let (first, last) = (e.points[0], e.points[e.points.len() - 1]);
                let reach = 2.0 * SELF_LOOP_REACH;
                xs.push((last[0], last[0] + reach));
                ys.push((first[1] - reach, first[1]));
            }
        }
        if xs.is_empty() {
            return Canvas { x: 0.0, y: 0.0, w: 2.0 * margin, h: 2.0 * margin };
        }
        let lo_x = xs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi_x = xs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let lo_y = ys.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi_y = ys.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Canvas {
            x: lo_x - margin,
            y: lo_y - margin,
            w: hi_x - lo_x + 2.0 * margin,
            h: hi_y - lo_y + 2.0 * margin,
        }
    }

    pub fn node(&self, id: &str) -> Option<&DiagramNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn group(&self, id: &str) -> Option<&DiagramGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    /// The diagram as a [`Geometry`], for re-checking constraints.
    pub fn geometry(&self) -> Geometry {
        use crate::layout::{CircleGeom, GroupRect, NodeRect};
        Geometry {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRect { id: n.id.clone(), x: n.x, y: n.y, w: n.w, h: n.h })
                .collect(),
            groups: self
                .groups
                .iter()
                .map(|g| GroupRect { id: g.id.clone(), x: g.x, y: g.y, w: g.w, h: g.h, depth: g.depth })
                .collect(),
            cycles: self
                .cycles
                .iter()
                .map(|c| CircleGeom { id: c.id.clone(), cx: c.cx, cy: c.cy, r: c.r, members: c.members.clone() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Diagram, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let d: Diagram = serde_path_to_error::deserialize(de)
            .map_err(|e| InputError::new(format!("invalid diagram at `{}`: {}", e.path(), e.inner())))?;
        if d.v != SCHEMA_VERSION {
            return Err(InputError::new(format!("unsupported diagram version {}", d.v)));
        }
        Ok(d)
    }

    pub fn to_svg(&self) -> String {
        render_svg(self)
    }
}
