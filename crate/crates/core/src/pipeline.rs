//! End-to-end runs: instance and spec text in, diagram or error out.

use std::collections::BTreeMap;
use std::path::Path;

use crate::compile::{compile, LayoutProblem};
use crate::error::LayoutError;
use crate::instance::Instance;
use crate::layout::{default_layout, layout, Geometry};
use crate::params::LayoutParams;
use crate::render::Diagram;
use crate::solver::SolverState;
use crate::spec::{check_static, parse_spec, CndSpec};
use crate::style::Style;

/// Preferred node centers from earlier drags, keyed by atom id.
pub type Pins = BTreeMap<String, (f64, f64)>;

/// Everything computed for one successful run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub spec: CndSpec,
    pub problem: LayoutProblem,
    pub geometry: Geometry,
    pub diagram: Diagram,
}

/// Parse and statically check a spec.
pub fn checked_spec(source: &str) -> Result<CndSpec, LayoutError> {
    let spec = parse_spec(source)?;
    check_static(&spec)?;
    Ok(spec)
}

fn styled(spec: &CndSpec, instance: &Instance, icon_base: Option<&Path>) -> Result<Style, LayoutError> {
    let mut style = Style::apply(spec, instance)?;
    if let Some(base) = icon_base {
        for icon in style.icons.values_mut() {
            if Path::new(&icon.path).is_relative() {
                icon.path = base.join(&icon.path).to_string_lossy().into_owned();
            }
        }
    }
    Ok(style)
}

/// Run the whole pipeline. Relative icon paths are resolved against
/// `icon_base` when one is given.
pub fn run_full(
    instance: &Instance,
    source: &str,
    params: &LayoutParams,
    pins: &Pins,
    icon_base: Option<&Path>,
) -> Result<Outcome, LayoutError> {
    let spec = checked_spec(source)?;
    let style = styled(&spec, instance, icon_base)?;
    let problem = compile(&spec, instance, params)?;
    let geometry = layout(&problem, params, pins)?;
    let diagram = Diagram::build(&problem, &geometry, &style, instance, params);
    Ok(Outcome {
        spec,
        problem,
        geometry,
        diagram,
    })
}

/// Lay out `instance` under the spec in `source`.
pub fn run(instance: &Instance, source: &str, params: &LayoutParams, pins: &Pins) -> Result<Diagram, LayoutError> {
    run_full(instance, source, params, pins, None).map(|o| o.diagram)
}

/// The default layered diagram of an instance, bypassing the solver.
pub fn default_diagram(instance: &Instance, params: &LayoutParams) -> Diagram {
    let spec = CndSpec::default();
    let problem = compile(&spec, instance, params).expect("the empty spec compiles against any instance");
    let style = Style::apply(&spec, instance).expect("the empty spec styles any instance");
    let geometry = default_layout(&problem, params);
    Diagram::build(&problem, &geometry, &style, instance, params)
}

/// Check a spec without rendering. With an instance, also compile it and
/// add every constraint to a solver.
pub fn check(source: &str, instance: Option<&Instance>, params: &LayoutParams) -> Result<(), LayoutError> {
    let spec = checked_spec(source)?;
    if let Some(instance) = instance {
        Style::apply(&spec, instance)?;
        let problem = compile(&spec, instance, params)?;
        SolverState::new().add_all(problem.constraints)?;
    }
    Ok(())
}
