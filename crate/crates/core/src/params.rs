use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// Tunable layout constants. Serialized with camelCase keys, every key optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct LayoutParams {
    pub node_size: f64,
    pub margin: f64,
    pub group_pad: f64,
    pub min_radius: f64,
    pub seed: u64,
    /// Stress-majorization sweeps run after the feasibility solve.
    pub refine_iterations: usize,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            node_size: 60.0,
            margin: 20.0,
            group_pad: 15.0,
            min_radius: 120.0,
            seed: 0,
            refine_iterations: 100,
        }
    }
}

impl LayoutParams {
    /// Minimum center-to-center gap for "left of", "above", ...
    pub fn separation(&self) -> f64 {
        self.node_size + 2.0 * self.margin
    }

    /// Target edge length used by the refinement pass.
    pub fn ideal_edge_length(&self) -> f64 {
        2.0 * self.separation()
    }

    pub fn cycle_radius(&self, members: usize) -> f64 {
        let perimeter_fit = members as f64 * self.separation() / std::f64::consts::TAU;
        self.min_radius.max(perimeter_fit)
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let params: LayoutParams = serde_path_to_error::deserialize(de)
            .map_err(|e| InputError::new(format!("invalid params at `{}`: {}", e.path(), e.inner())))?;
        params.validate()?;
        Ok(params)
    }

    pub fn from_file(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), InputError> {
        let positive = [
            ("nodeSize", self.node_size),
            ("minRadius", self.min_radius),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(InputError::new(format!("params: {name} must be positive")));
            }
        }
        for (name, v) in [("margin", self.margin), ("groupPad", self.group_pad)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(InputError::new(format!("params: {name} must be non-negative")));
            }
        }
        Ok(())
    }
}
