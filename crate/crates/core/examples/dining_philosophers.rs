//! Nothing is hidden: five philosophers sit on a ring, and all six forks are
//! still drawn, including the one nobody holds.

use std::path::PathBuf;

use cnd::pipeline::{run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("dining-philosophers.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("dining-philosophers.cnd"))?;

    let diagram = run(&instance, &spec, &LayoutParams::default(), &Pins::new())?;
    let svg = diagram.to_svg();
    println!("philosophers on the ring: {}", diagram.cycles[0].members.join(", "));
    println!("fork nodes in the SVG: {}", svg.matches("id=\"node-Fork").count());

    let out = std::env::temp_dir().join("dining_philosophers.svg");
    std::fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(())
}
