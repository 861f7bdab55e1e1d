//! A binary search tree: left children go left and down, right children
//! right and down, and integer keys become labels instead of nodes' edges.

use std::path::PathBuf;

use cnd::pipeline::{run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("bst.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("bst.cnd"))?;
    println!("spec:\n{spec}");

    let diagram = run(&instance, &spec, &LayoutParams::default(), &Pins::new())?;
    for field in ["left", "right"] {
        for t in &instance.field(field).expect("tree field").tuples {
            let (p, c) = (diagram.node(&t[0]).unwrap(), diagram.node(&t[1]).unwrap());
            println!("{field:>5}: {} -> {}  dx = {:7.1}  dy = {:6.1}", t[0], t[1], c.x - p.x, c.y - p.y);
        }
    }

    let out = std::env::temp_dir().join("binary_tree.svg");
    std::fs::write(&out, diagram.to_svg())?;
    println!("wrote {}", out.display());
    Ok(())
}
