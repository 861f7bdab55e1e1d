//! Lights on a ring: `cyclic next clockwise` places every light on one circle.
//!
//! Run with `cargo run --example ring_lights`; the SVG lands in the system
//! temp directory.

use std::path::PathBuf;

use cnd::pipeline::{run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("ring-lights.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("ring-lights.cnd"))?;

    let diagram = run(&instance, &spec, &LayoutParams::default(), &Pins::new())?;
    let ring = &diagram.cycles[0];
    println!("circle at ({:.1}, {:.1}), radius {:.1}", ring.cx, ring.cy, ring.r);
    for id in &ring.members {
        let n = diagram.node(id).expect("ring member is drawn");
        let angle = (n.x - ring.cx).atan2(ring.cy - n.y).to_degrees().rem_euclid(360.0);
        println!("  {id:<7} {angle:6.1} deg  {}", n.label.join(" / "));
    }

    let out = std::env::temp_dir().join("ring_lights.svg");
    std::fs::write(&out, diagram.to_svg())?;
    println!("wrote {}", out.display());
    Ok(())
}
