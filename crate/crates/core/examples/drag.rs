//! Dragging: a pinned node goes exactly where it is dropped when that is
//! allowed, and to the nearest allowed spot otherwise. E2 stays pinned where
//! it was, so E3 cannot push it aside.

use std::path::PathBuf;

use cnd::pipeline::{run, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let instance = Instance::parse(&std::fs::read_to_string(dir.join("linked-list.json"))?)?;
    let spec = std::fs::read_to_string(dir.join("linked-list.cnd"))?;
    let params = LayoutParams::default();

    let before = run(&instance, &spec, &params, &Pins::new())?;
    let (e2, e3) = (before.node("E2").unwrap(), before.node("E3").unwrap());
    println!("E2 at ({:.1}, {:.1}), E3 at ({:.1}, {:.1})", e2.x, e2.y, e3.x, e3.y);

    for (what, target) in [("far right", (e3.x + 500.0, e3.y)), ("behind E2", (e2.x - 300.0, e3.y + 80.0))] {
        let pins = Pins::from([("E2".to_string(), (e2.x, e2.y)), ("E3".to_string(), target)]);
        let after = run(&instance, &spec, &params, &pins)?;
        let (n2, n3) = (after.node("E2").unwrap(), after.node("E3").unwrap());
        println!(
            "drop E3 {what} at ({:.1}, {:.1}): lands at ({:.1}, {:.1}), {:.1} right of E2",
            target.0,
            target.1,
            n3.x,
            n3.y,
            n3.x - n2.x
        );
    }
    Ok(())
}
