use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Static gravitational potential and the time-time metric factor there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravityPoint {
    pub phi_g: f64,
    pub g00: f64,
}

impl GravityPoint {
    pub fn flat() -> Self {
        Self { phi_g: 0.0, g00: 1.0 }
    }
}

/// `g₀₀ = 1 + 2φ_g/c²`, valid only while `|2φ_g/c²| < 1`.
pub fn weak_field_metric(phi_g: f64, constants: &PhysicalConstants) -> Result<GravityPoint> {
    let c2 = constants.c * constants.c;
    let strength = 2.0 * phi_g / c2;
    if !strength.is_finite() || strength.abs() >= 1.0 {
        return Err(Error::StrongField(strength));
    }
    Ok(GravityPoint {
        phi_g,
        g00: 1.0 + strength,
    })
}

/// Rest beat frequency at a point of a static field, `(m₀c²/h)·√g₀₀`.
pub fn local_rest_frequency(
    rest_mass: f64,
    point: &GravityPoint,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(point.g00 > 0.0) {
        return Err(Error::NonPositiveMetric(point.g00));
    }
    Ok(flat_rest_frequency(rest_mass, constants)? * point.g00.sqrt())
}

/// First-order expansion `ν₀·(1 + φ_g/c²)` of [`local_rest_frequency`].
pub fn local_rest_frequency_linear(
    rest_mass: f64,
    point: &GravityPoint,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let c2 = constants.c * constants.c;
    Ok(flat_rest_frequency(rest_mass, constants)? * (1.0 + point.phi_g / c2))
}

fn flat_rest_frequency(rest_mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(rest_mass.is_finite() && rest_mass > 0.0) {
        return Err(Error::invalid("rest_mass", format!("must be > 0, got {rest_mass}")));
    }
    Ok(rest_mass * constants.c * constants.c / constants.h)
}
