//! Grouping: each shore's animals are boxed together and the shore has a
//! single `animals` edge into its box.

use std::path::PathBuf;

use cnd::pipeline::{default_diagram, run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("river-crossing.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("river-crossing.cnd"))?;
    let params = LayoutParams::default();

    let plain = default_diagram(&instance, &params);
    let grouped = run(&instance, &spec, &params, &Pins::new())?;
    println!("animals edges without grouping: {}", plain.edges.len());
    println!("animals edges with grouping:    {}", grouped.edges.len());
    for g in &grouped.groups {
        println!(
            "  {:<12} {}x{} at ({:.1}, {:.1}): {}",
            g.id,
            g.w.round(),
            g.h.round(),
            g.x,
            g.y,
            g.members.join(", ")
        );
    }

    let out = std::env::temp_dir().join("river_crossing.svg");
    std::fs::write(&out, grouped.to_svg())?;
    println!("wrote {}", out.display());
    Ok(())
}
