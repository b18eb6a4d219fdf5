//! Complexity balance of stationary states.
//!
//! For a normalized stationary state the quantities
//!
//! * `q² = −(1/8π²)∫Ψ*Ψ″dx`,
//! * `V_Ψ = ∫Ψ*VΨdx`,
//! * `K = (ħ²/2m₀)∫|Ψ′|²dx`
//!
//! satisfy `q² = (m₀/h)(K/h)` and `q² + (m₀/h)(V_Ψ/h) = (m₀/h)(E/h)`.
//! `q²` is evaluated from the second difference and `K` from first
//! differences; on the grid they are related by summation by parts, which
//! makes their agreement a genuine cross-check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bound::norm_integral;
use super::{Boundary, EigenSolution, WaveProblem};
use crate::error::{Error, Result};

pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceLevel {
    pub level: usize,
    pub energy: f64,
    /// `q²` from the second-derivative integral.
    pub q2: f64,
    /// `q²` from `(m₀/h)(K/h)`.
    pub q2_kinetic: f64,
    pub v_psi: f64,
    pub kinetic: f64,
    /// `q² + (m₀/h)(V_Ψ/h) − (m₀/h)(E/h)`.
    pub residual: f64,
    /// `|residual|` in units of `m₀|E|/h²`.
    pub relative_residual: f64,
}

impl BalanceLevel {
    pub fn q2_agreement(&self) -> f64 {
        (self.q2 - self.q2_kinetic).abs() / self.q2.abs().max(self.q2_kinetic.abs()).max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub levels: Vec<BalanceLevel>,
}

impl BalanceReport {
    pub const CSV_HEADER: &'static str =
        "level,energy,q2,q2_kinetic,v_psi,kinetic,residual,relative_residual";
}

/// `(ħ²/2m₀)∫|Ψ′|²dx` with forward differences around the whole grid.
pub fn kinetic_energy(problem: &WaveProblem, psi: &[Complex64]) -> f64 {
    let dx = problem.grid.spacing();
    let grad: f64 = psi.windows(2).map(|w| (w[1] - w[0]).norm_sqr()).sum::<f64>() / dx;
    let hbar = problem.constants.hbar;
    hbar * hbar / (2.0 * problem.rest_mass) * grad
}

/// `∫Ψ*Ψ″dx` with the same second difference as the Hamiltonian.
pub fn laplacian_expectation(problem: &WaveProblem, psi: &[Complex64]) -> f64 {
    let dx = problem.grid.spacing();
    let n = psi.len();
    let sum: f64 = problem
        .unknowns()
        .map(|i| {
            let (left, right) = match problem.boundary {
                Boundary::HardWall => (psi[i - 1], psi[i + 1]),
                Boundary::Periodic => {
                    let left = if i == 0 { psi[n - 2] } else { psi[i - 1] };
                    (left, psi[i + 1])
                }
            };
            let second = (right - psi[i]) - (psi[i] - left);
            (psi[i].conj() * second).re
        })
        .sum();
    sum / dx
}

pub fn potential_expectation(problem: &WaveProblem, psi: &[Complex64]) -> f64 {
    let dx = problem.grid.spacing();
    let n = psi.len();
    let integrand = |i: usize| psi[i].norm_sqr() * problem.potential[i];
    dx * (0.5 * (integrand(0) + integrand(n - 1)) + (1..n - 1).map(integrand).sum::<f64>())
}

pub fn complexity_balance(solution: &EigenSolution, problem: &WaveProblem) -> Result<BalanceReport> {
    let h = problem.constants.h;
    let m0 = problem.rest_mass;
    let per_h2 = m0 / h / h;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;

    let levels = solution
        .levels
        .iter()
        .enumerate()
        .map(|(level, state)| {
            if state.psi.len() != problem.grid.n_points {
                return Err(Error::invalid("solution", "sampled on a different grid"));
            }
            let norm = norm_integral(problem, &state.psi);
            if !((norm - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
                return Err(Error::Unnormalized { level, norm });
            }
            let q2 = -laplacian_expectation(problem, &state.psi) / (8.0 * pi2);
            let kinetic = kinetic_energy(problem, &state.psi);
            let v_psi = potential_expectation(problem, &state.psi);
            let residual = q2 + per_h2 * v_psi - per_h2 * state.energy;
            let scale = per_h2 * state.energy.abs().max(kinetic + v_psi.abs());
            Ok(BalanceLevel {
                level,
                energy: state.energy,
                q2,
                q2_kinetic: (m0 / h) * (kinetic / h),
                v_psi,
                kinetic,
                residual,
                relative_residual: residual.abs() / scale,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BalanceReport { levels })
}
