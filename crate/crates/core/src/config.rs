use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances used across the crate.
///
/// Every field can be overridden by name through [`Tolerances::set`], which is
/// how the CLI maps `--tol.NAME=V` flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Symmetry test `|e12 - e21|`.
    pub sym: f64,
    /// Unitarity test `max |M M* - I|`.
    pub unit: f64,
    /// Relative minimum modulus allowed on a winding contour.
    pub contour: f64,
    /// Radius slack used when certifying zero-freeness on the closed disc.
    pub den: f64,
    /// Residual required of a fixed-point solve.
    pub fix: f64,
    /// Gap allowed between the Lempert upper bound and the Caratheodory lower bound.
    pub eq: f64,
    /// Width of the boundary band for membership margins.
    pub boundary: f64,
    /// Denominators below this modulus are treated as singular.
    pub singular: f64,
    /// The Rouche contour is the circle of radius `1 - rouche_eps`.
    pub rouche_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-10,
            unit: 1e-10,
            contour: 1e-8,
            den: 1e-6,
            fix: 1e-11,
            eq: 1e-7,
            boundary: 1e-9,
            singular: 1e-12,
            rouche_eps: 1e-6,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "sym",
        "unit",
        "contour",
        "den",
        "fix",
        "eq",
        "boundary",
        "singular",
        "rouche_eps",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "sym" => &mut self.sym,
            "unit" => &mut self.unit,
            "contour" => &mut self.contour,
            "den" => &mut self.den,
            "fix" => &mut self.fix,
            "eq" => &mut self.eq,
            "boundary" => &mut self.boundary,
            "singular" => &mut self.singular,
            "rouche_eps" => &mut self.rouche_eps,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v)
    }

    /// Overrides one tolerance. Unknown names and non-positive values are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance `{name}` must be positive and finite, got {value}"
            )));
        }
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::UnknownTolerance(name.to_string()))?;
        *slot = value;
        Ok(())
    }
}
