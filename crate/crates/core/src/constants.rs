use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, exact since the 2019 SI redefinition (J·s).
pub const PLANCK_SI: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, exact (m/s).
pub const LIGHT_SPEED_SI: f64 = 299_792_458.0;
/// CODATA 2018 electron rest mass (kg).
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[serde(rename = "si")]
    SI,
    Natural,
}

/// Action quantum and light speed in one consistent unit system.
///
/// Natural units fix `h = 2π` and `c = 1`, so `ħ = 1` and both the beat
/// relations (written with `h`) and the quantization rules (written with
/// `ħ`) stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub h: f64,
    pub c: f64,
    pub hbar: f64,
    pub units: UnitSystem,
}

impl PhysicalConstants {
    pub fn si() -> Self {
        Self {
            h: PLANCK_SI,
            c: LIGHT_SPEED_SI,
            hbar: PLANCK_SI / (2.0 * PI),
            units: UnitSystem::SI,
        }
    }

    pub fn natural() -> Self {
        Self {
            h: 2.0 * PI,
            c: 1.0,
            hbar: 1.0,
            units: UnitSystem::Natural,
        }
    }

    pub fn for_units(units: UnitSystem) -> Self {
        match units {
            UnitSystem::SI => Self::si(),
            UnitSystem::Natural => Self::natural(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::invalid("h", format!("must be positive, got {}", self.h)));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::invalid("c", format!("must be positive, got {}", self.c)));
        }
        if self.hbar != self.h / (2.0 * PI) {
            return Err(Error::invalid("hbar", "must equal h / 2pi"));
        }
        Ok(())
    }
}
