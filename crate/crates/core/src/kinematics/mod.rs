//! Closed-form quantum-beat kinematics of a single massive particle.
//!
//! Every quantity follows from the rest beat frequency `ν₀ = m₀c²/h` and
//! the speed fraction `β`. The total beat rate `ν = E/h` splits into an
//! irregular part `N = ν₀√(1−β²)` (rest mass, thermal wandering) and a
//! regular part `ν_B = β²ν` (the de Broglie wave), with jump probabilities
//! `α₂ = 1 − β²` and `α₁ = β²`.

mod gravity;

pub use gravity::{
    local_rest_frequency, local_rest_frequency_linear, weak_field_metric, GravityPoint,
};

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Rest mass and speed fraction `β = v/c` of a massive particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpec {
    pub rest_mass: f64,
    pub beta: f64,
}

impl ParticleSpec {
    pub fn new(rest_mass: f64, beta: f64) -> Result<Self> {
        let spec = Self { rest_mass, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rest_mass.is_finite() && self.rest_mass > 0.0) {
            return Err(Error::invalid(
                "rest_mass",
                format!("must be > 0, got {}", self.rest_mass),
            ));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::invalid("beta", format!("must be >= 0, got {}", self.beta)));
        }
        if self.beta >= 1.0 {
            return Err(Error::Superluminal(self.beta));
        }
        Ok(())
    }
}

/// All derived per-particle quantities.
///
/// Fields that divide by the speed (`lambda_b`, `lambda_b0`) are `None` in
/// the rest state. The classical action rate `dS/dt` is the Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicsReport {
    pub spec: ParticleSpec,
    pub constants: PhysicalConstants,
    #[serde(rename = "nu0")]
    pub rest_frequency: f64,
    #[serde(rename = "tau0")]
    pub rest_period: f64,
    pub gamma: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "p")]
    pub momentum: f64,
    #[serde(rename = "m")]
    pub mass: f64,
    #[serde(rename = "v")]
    pub speed: f64,
    /// Local beat frequency `E/h` at a fixed point.
    #[serde(rename = "nu")]
    pub frequency: f64,
    #[serde(rename = "tau")]
    pub period: f64,
    /// Frequency of irregular (total-change) events, `N`.
    #[serde(rename = "N")]
    pub irregular_frequency: f64,
    #[serde(rename = "T")]
    pub irregular_period: f64,
    #[serde(rename = "lambdaB")]
    pub lambda_b: Option<f64>,
    #[serde(rename = "nuB")]
    pub nu_b: f64,
    #[serde(rename = "lambdaB0")]
    pub lambda_b0: Option<f64>,
    #[serde(rename = "nuB0")]
    pub nu_b0: f64,
    /// Rest Compton wavelength `h/(m₀c)`.
    #[serde(rename = "lambdaC")]
    pub lambda_c: f64,
    /// Relativistic Compton length `h/(mc)`, the path per beat cycle.
    #[serde(rename = "lambdaCm")]
    pub lambda_cm: f64,
    #[serde(rename = "L")]
    pub lagrangian: f64,
    /// Regular-to-irregular jump ratio `α₁/α₂`.
    #[serde(rename = "R")]
    pub regularity_ratio: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl KinematicsReport {
    /// `(name, value)` rows in the frozen export order.
    pub fn rows(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("m0", Some(self.spec.rest_mass)),
            ("beta", Some(self.spec.beta)),
            ("nu0", Some(self.rest_frequency)),
            ("tau0", Some(self.rest_period)),
            ("gamma", Some(self.gamma)),
            ("E", Some(self.energy)),
            ("p", Some(self.momentum)),
            ("m", Some(self.mass)),
            ("v", Some(self.speed)),
            ("nu", Some(self.frequency)),
            ("tau", Some(self.period)),
            ("N", Some(self.irregular_frequency)),
            ("T", Some(self.irregular_period)),
            ("lambdaB", self.lambda_b),
            ("nuB", Some(self.nu_b)),
            ("lambdaB0", self.lambda_b0),
            ("nuB0", Some(self.nu_b0)),
            ("lambdaC", Some(self.lambda_c)),
            ("lambdaCm", Some(self.lambda_cm)),
            ("L", Some(self.lagrangian)),
            ("R", Some(self.regularity_ratio)),
            ("alpha1", Some(self.alpha1)),
            ("alpha2", Some(self.alpha2)),
        ]
    }
}

pub fn derive_kinematics(
    spec: ParticleSpec,
    constants: PhysicalConstants,
) -> Result<KinematicsReport> {
    spec.validate()?;
    constants.validate()?;
    let PhysicalConstants { h, c, .. } = constants;
    let m0 = spec.rest_mass;
    let beta = spec.beta;

    // (1-β)(1+β) keeps full relative precision as β → 1.
    let alpha2 = (1.0 - beta) * (1.0 + beta);
    let alpha1 = beta * beta;
    let root = alpha2.sqrt();
    let gamma = 1.0 / root;

    let rest_energy = m0 * c * c;
    let rest_frequency = rest_energy / h;
    let speed = beta * c;
    let mass = m0 * gamma;
    let energy = rest_energy * gamma;
    let momentum = mass * speed;
    let frequency = energy / h;
    let irregular_frequency = rest_frequency * root;
    let moving = beta > 0.0;

    Ok(KinematicsReport {
        spec,
        constants,
        rest_frequency,
        rest_period: 1.0 / rest_frequency,
        gamma,
        energy,
        momentum,
        mass,
        speed,
        frequency,
        period: 1.0 / frequency,
        irregular_frequency,
        irregular_period: 1.0 / irregular_frequency,
        lambda_b: moving.then(|| h / momentum),
        nu_b: momentum * speed / h,
        lambda_b0: moving.then(|| h / (m0 * speed)),
        nu_b0: m0 * speed * speed / h,
        lambda_c: h / (m0 * c),
        lambda_cm: h / (mass * c),
        lagrangian: -h * irregular_frequency,
        regularity_ratio: alpha1 / alpha2,
        alpha1,
        alpha2,
    })
}

/// Split of the total energy into its irregular (`hN`) and regular (`pv`)
/// parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionBreakdown {
    pub irregular: f64,
    pub regular: f64,
    pub total: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "R")]
    pub ratio: f64,
}

pub fn energy_partition(report: &KinematicsReport) -> PartitionBreakdown {
    let irregular = report.constants.h * report.irregular_frequency;
    let regular = report.momentum * report.speed;
    PartitionBreakdown {
        irregular,
        regular,
        total: report.energy,
        alpha1: report.alpha1,
        alpha2: report.alpha2,
        ratio: regular / irregular,
    }
}

/// Change of action-complexity after `n_jumps` beat cycles: `−h` each.
pub fn action_increment(n_jumps: u64, constants: &PhysicalConstants) -> f64 {
    -constants.h * n_jumps as f64
}
