//! Static SVG 1.1 output. Numbers use two fixed decimals so equal diagrams
//! give byte-identical documents.

use std::fmt::Write;

use crate::style::LINE_HEIGHT;

use super::{Diagram, DiagramEdge, DiagramGroup, DiagramNode};

const EDGE_COLOR: &str = "#333333";
const GROUP_STROKE: &str = "#888888";
const SELF_LOOP_RADIUS: f64 = 14.0;

/// A number with two decimals; negative zero prints as zero.
pub fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn group_svg(out: &mut String, g: &DiagramGroup) {
    let (l, t) = (g.x - g.w / 2.0, g.y - g.h / 2.0);
    let _ = writeln!(out, r#"  <g id="group-{}" class="group" data-depth="{}">"#, escape(&g.id), g.depth);
    let _ = writeln!(
        out,
        r#"    <rect x="{}" y="{}" width="{}" height="{}" rx="6" fill="none" stroke="{GROUP_STROKE}" stroke-dasharray="6 3"/>"#,
        fmt2(l),
        fmt2(t),
        fmt2(g.w),
        fmt2(g.h)
    );
    let _ = writeln!(
        out,
        r#"    <text x="{}" y="{}" font-size="11" fill="{GROUP_STROKE}">{}</text>"#,
        fmt2(l + 4.0),
        fmt2(t + 12.0),
        escape(&format!("{}: {}", g.field, g.key))
    );
    out.push_str("  </g>\n");
}

fn edge_svg(out: &mut String, e: &DiagramEdge) {
    let _ = writeln!(
        out,
        r#"  <g id="{}" class="edge" data-field="{}">"#,
        escape(&e.id),
        escape(&e.field)
    );
    let first = e.points[0];
    let last = e.points[e.points.len() - 1];
    if e.self_loop {
        let _ = writeln!(
            out,
            r#"    <path d="M {} {} A {r} {r} 0 1 1 {} {}" fill="none" stroke="{EDGE_COLOR}" marker-end="url(#arrow)"/>"#,
            fmt2(first[0]),
            fmt2(first[1]),
            fmt2(last[0]),
            fmt2(last[1]),
            r = fmt2(SELF_LOOP_RADIUS)
        );
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}" font-size="11" fill="{EDGE_COLOR}">{}</text>"#,
            fmt2(last[0] + SELF_LOOP_RADIUS),
            fmt2(first[1] - SELF_LOOP_RADIUS),
            escape(&e.label)
        );
    } else {
        let pts: Vec<String> = e
            .points
            .iter()
            .map(|p| format!("{},{}", fmt2(p[0]), fmt2(p[1])))
            .collect();
        let _ = writeln!(
            out,
            r#"    <polyline points="{}" fill="none" stroke="{EDGE_COLOR}" marker-end="url(#arrow)"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}" font-size="11" text-anchor="middle" fill="{EDGE_COLOR}">{}</text>"#,
            fmt2((first[0] + last[0]) / 2.0),
            fmt2((first[1] + last[1]) / 2.0 - 3.0),
            escape(&e.label)
        );
    }
    out.push_str("  </g>\n");
}

fn node_svg(out: &mut String, n: &DiagramNode) {
    let (l, t) = (n.x - n.w / 2.0, n.y - n.h / 2.0);
    let _ = writeln!(
        out,
        r#"  <g id="node-{}" class="node" data-sig="{}">"#,
        escape(&n.id),
        escape(&n.sig)
    );
    let _ = writeln!(
        out,
        r#"    <rect x="{}" y="{}" width="{}" height="{}" rx="4" fill="{}" stroke="{EDGE_COLOR}"/>"#,
        fmt2(l),
        fmt2(t),
        fmt2(n.w),
        fmt2(n.h),
        escape(&n.color)
    );
    let text_height = n.label.len() as f64 * LINE_HEIGHT;
    let mut top = n.y - text_height / 2.0;
    if let Some(icon) = &n.icon {
        let block = icon.h as f64 + text_height;
        let icon_top = n.y - block / 2.0;
        let _ = writeln!(
            out,
            r#"    <image xlink:href="{}" x="{}" y="{}" width="{}" height="{}"/>"#,
            escape(&icon.path),
            fmt2(n.x - icon.w as f64 / 2.0),
            fmt2(icon_top),
            icon.w,
            icon.h
        );
        top = icon_top + icon.h as f64;
    }
    let _ = writeln!(
        out,
        r#"    <text x="{}" y="{}" font-size="12" text-anchor="middle" fill="black">"#,
        fmt2(n.x),
        fmt2(top)
    );
    for (i, line) in n.label.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"      <tspan x="{}" y="{}">{}</tspan>"#,
            fmt2(n.x),
            fmt2(top + (i as f64 + 0.75) * LINE_HEIGHT),
            escape(line)
        );
    }
    out.push_str("    </text>\n  </g>\n");
}

pub fn render_svg(d: &Diagram) -> String {
    let c = &d.canvas;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        fmt2(c.x),
        fmt2(c.y),
        fmt2(c.w),
        fmt2(c.h),
        fmt2(c.w),
        fmt2(c.h)
    );
    out.push_str("  <defs>\n");
    let _ = writeln!(
        out,
        r#"    <marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z" fill="{EDGE_COLOR}"/></marker>"#
    );
    out.push_str("  </defs>\n");
    let mut groups: Vec<&DiagramGroup> = d.groups.iter().collect();
    groups.sort_by_key(|g| g.depth);
    for g in groups {
        group_svg(&mut out, g);
    }
    for e in &d.edges {
        edge_svg(&mut out, e);
    }
    for n in &d.nodes {
        node_svg(&mut out, n);
    }
    out.push_str("</svg>\n");
    out
}
