//! Directives change appearance only: icons, colors, attribute labels and
//! projection.

use std::path::PathBuf;

use cnd::pipeline::{run_full, Pins};
use cnd::{Instance, LayoutParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["fruit", "ring-lights", "family"] {
        let instance = Instance::parse(&std::fs::read_to_string(dir.join(format!("{name}.json")))?)?;
        let spec = std::fs::read_to_string(dir.join(format!("{name}.cnd")))?;
        let outcome = run_full(&instance, &spec, &LayoutParams::default(), &Pins::new(), Some(&dir))?;
        println!("{name}: {} of {} atoms drawn", outcome.diagram.nodes.len(), instance.atoms().len());
        for n in &outcome.diagram.nodes {
            let icon = n.icon.as_ref().map(|i| format!(" icon {}", i.path)).unwrap_or_default();
            println!("  {:<8} {:<20} [{}]{icon}", n.id, n.color, n.label.join(" | "));
        }
        let out = std::env::temp_dir().join(format!("styling_{name}.svg"));
        std::fs::write(&out, outcome.diagram.to_svg())?;
    }
    Ok(())
}
