//! Contradictions in the spec itself are reported before any instance is
//! looked at.

use cnd::pipeline::checked_spec;

fn main() {
    let specs = [
        "orient field next right\norient field next left",
        "orient field next directlyBelow\norient field next right",
        "orient field next right,below\ncyclic next",
        "orient feld next left",
    ];
    for source in specs {
        println!("{}", source.replace('\n', " | "));
        match checked_spec(source) {
            Ok(spec) => println!("  ok: {} constraint(s)\n", spec.constraints.len()),
            Err(e) => println!("  {} (exit {}): {e}\n", e.kind(), e.exit_code()),
        }
    }
}
