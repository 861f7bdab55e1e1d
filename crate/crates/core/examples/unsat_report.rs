//! A bad instance never produces a diagram. Here node N0 has N1 as both its
//! left and its right child, which no tree layout can show.

use std::path::PathBuf;

use cnd::error::LayoutError;
use cnd::pipeline::{run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("dag-tree.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("dag-tree.cnd"))?;

    match run(&instance, &spec, &LayoutParams::default(), &Pins::new()) {
        Ok(_) => println!("unexpectedly laid out"),
        Err(LayoutError::Unsat(e)) => {
            println!("{e}\n");
            println!("failing line {}: {}", e.failing.line, e.failing.text);
            println!("atoms to inspect: {}", e.atoms().join(", "));
        }
        Err(e) => println!("other error: {e}"),
    }
    Ok(())
}
