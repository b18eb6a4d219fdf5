//! Causal quantization rules and 1D wave equations.
//!
//! * [`plane`]: quantization-rule and dispersion checks on analytic plane
//!   waves.
//! * [`tridiag`]: deterministic symmetric tridiagonal eigensolver
//!   (Sturm-count bisection + inverse iteration), with an optional corner
//!   coupling for periodic grids.
//! * [`bound`]: stationary Schrödinger states on a uniform grid.
//! * [`balance`]: complexity-balance integrals of stationary states.

pub mod balance;
pub mod bound;
pub mod export;
pub mod plane;
pub mod tridiag;

pub use balance::{complexity_balance, kinetic_energy, BalanceLevel, BalanceReport};
pub use bound::{solve_bound_states, EigenLevel, EigenSolution};
pub use plane::{
    apply_quantization, differential_wave_action_check, extract_momentum, kg_dispersion_residual,
    DispersionCheck, MomentumReadout, QuantizationReadout,
};

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::kinematics::KinematicsReport;

/// Free plane wave `exp(i(px − Et)/ħ)` of a particle of rest mass `m₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub momentum: f64,
    pub energy: f64,
    pub rest_mass: f64,
    pub constants: PhysicalConstants,
}

impl PlaneWave {
    pub fn new(momentum: f64, energy: f64, rest_mass: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(momentum.is_finite() && energy.is_finite()) {
            return Err(Error::invalid("plane wave", "momentum and energy must be finite"));
        }
        if !(rest_mass.is_finite() && rest_mass > 0.0) {
            return Err(Error::invalid("rest_mass", format!("must be > 0, got {rest_mass}")));
        }
        Ok(Self {
            momentum,
            energy,
            rest_mass,
            constants,
        })
    }

    /// The on-shell wave carried by a particle with the given kinematics.
    pub fn from_report(report: &KinematicsReport) -> Self {
        Self {
            momentum: report.momentum,
            energy: report.energy,
            rest_mass: report.spec.rest_mass,
            constants: report.constants,
        }
    }

    pub fn wavenumber(&self) -> f64 {
        self.momentum / self.constants.hbar
    }

    pub fn angular_frequency(&self) -> f64 {
        self.energy / self.constants.hbar
    }

    /// `ω₀ = m₀c²/ħ = 2πν₀`.
    pub fn rest_angular_frequency(&self) -> f64 {
        self.rest_mass * self.constants.c * self.constants.c / self.constants.hbar
    }

    pub fn psi(&self, x: f64, t: f64) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(1.0, self.wavenumber() * x - self.angular_frequency() * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 16;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::invalid("grid", format!("need x_max > x_min, got [{x_min}, {x_max}]")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::invalid(
                "n_points",
                format!("must be >= {}, got {n_points}", Self::MIN_POINTS),
            ));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.x(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `Ψ = 0` at both end nodes.
    HardWall,
    /// The last node coincides with the first.
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProblem {
    pub grid: Grid1D,
    pub potential: Vec<f64>,
    pub rest_mass: f64,
    pub constants: PhysicalConstants,
    pub boundary: Boundary,
}

impl WaveProblem {
    pub fn new(
        grid: Grid1D,
        potential: Vec<f64>,
        rest_mass: f64,
        constants: PhysicalConstants,
        boundary: Boundary,
    ) -> Result<Self> {
        if potential.len() != grid.n_points {
            return Err(Error::invalid(
                "potential",
                format!("has {} samples for {} grid nodes", potential.len(), grid.n_points),
            ));
        }
        if let Some(i) = potential.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("potential", format!("not finite at node {i}")));
        }
        if !(rest_mass.is_finite() && rest_mass > 0.0) {
            return Err(Error::invalid("rest_mass", format!("must be > 0, got {rest_mass}")));
        }
        constants.validate()?;
        Ok(Self {
            grid,
            potential,
            rest_mass,
            constants,
            boundary,
        })
    }

    /// `ħ²/(2m₀Δx²)`, the magnitude of the kinetic off-diagonal.
    pub fn hopping(&self) -> f64 {
        let dx = self.grid.spacing();
        self.constants.hbar * self.constants.hbar / (2.0 * self.rest_mass * dx * dx)
    }

    /// Grid nodes carrying independent unknowns.
    pub fn unknowns(&self) -> std::ops::Range<usize> {
        let n = self.grid.n_points;
        match self.boundary {
            Boundary::HardWall => 1..n - 1,
            Boundary::Periodic => 0..n - 1,
        }
    }

    /// Same problem with `V → V + shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        out.potential.iter_mut().for_each(|v| *v += shift);
        out
    }
}

/// Built-in potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Infinite well of unit width, `V = 0` on `[0, 1]` with hard walls.
    Box,
    /// `V = ½m₀ω²x²` with unit `ω` on `±8·√(ħ/(m₀ω))`.
    Oscillator,
    /// `V = 0` on a periodic ring of unit circumference.
    Free,
}

impl Preset {
    pub const OSCILLATOR_OMEGA: f64 = 1.0;
    pub const OSCILLATOR_HALF_WIDTH: f64 = 8.0;

    pub fn problem(self, n_points: usize, rest_mass: f64, constants: PhysicalConstants) -> Result<WaveProblem> {
        match self {
            Preset::Box => {
                let grid = Grid1D::new(0.0, 1.0, n_points)?;
                WaveProblem::new(grid, vec![0.0; n_points], rest_mass, constants, Boundary::HardWall)
            }
            Preset::Oscillator => {
                let w = Self::OSCILLATOR_OMEGA;
                let half = Self::OSCILLATOR_HALF_WIDTH * (constants.hbar / (rest_mass * w)).sqrt();
                let grid = Grid1D::new(-half, half, n_points)?;
                let v = grid.nodes().map(|x| 0.5 * rest_mass * w * w * x * x).collect();
                WaveProblem::new(grid, v, rest_mass, constants, Boundary::HardWall)
            }
            Preset::Free => {
                let grid = Grid1D::new(0.0, 1.0, n_points)?;
                WaveProblem::new(grid, vec![0.0; n_points], rest_mass, constants, Boundary::Periodic)
            }
        }
    }

    /// Continuum energy of level `n` (0-based) for this preset.
    pub fn continuum_energy(self, n: usize, rest_mass: f64, constants: &PhysicalConstants) -> f64 {
        let hbar = constants.hbar;
        match self {
            Preset::Box => {
                let q = (n + 1) as f64 * std::f64::consts::PI * hbar;
                q * q / (2.0 * rest_mass)
            }
            Preset::Oscillator => hbar * Self::OSCILLATOR_OMEGA * (n as f64 + 0.5),
            Preset::Free => {
                // 0, ±k₁, ±k₁, ±k₂, ±k₂, … with k_j = 2πj on the unit ring.
                let j = n.div_ceil(2) as f64;
                let p = 2.0 * std::f64::consts::PI * j * hbar;
                p * p / (2.0 * rest_mass)
            }
        }
    }
}
