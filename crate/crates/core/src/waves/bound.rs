use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tridiag::SymTridiagonal;
use super::{Boundary, WaveProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenLevel {
    pub energy: f64,
    /// Samples on every grid node, `∫|Ψ|²dx = 1` by the trapezoid rule.
    pub psi: Vec<Complex64>,
}

/// Stationary states in ascending energy.
///
/// Hard-wall levels are strictly increasing. Periodic rings carry the
/// `±k` degeneracy of free motion, so equal neighbours are allowed there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub levels: Vec<EigenLevel>,
}

impl EigenSolution {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// Discretized Hamiltonian `−(ħ²/2m₀)Ψ″ + VΨ` on the unknown nodes.
pub fn hamiltonian(problem: &WaveProblem) -> Result<SymTridiagonal> {
    let t = problem.hopping();
    let nodes = problem.unknowns();
    let diag: Vec<f64> = nodes.clone().map(|i| 2.0 * t + problem.potential[i]).collect();
    let off = vec![-t; diag.len() - 1];
    let corner = match problem.boundary {
        Boundary::HardWall => 0.0,
        Boundary::Periodic => -t,
    };
    SymTridiagonal::new(diag, off, corner)
}

/// Trapezoid-rule `∫|Ψ|²dx` on the problem grid.
pub fn norm_integral(problem: &WaveProblem, psi: &[Complex64]) -> f64 {
    let dx = problem.grid.spacing();
    let n = psi.len();
    let ends = 0.5 * (psi[0].norm_sqr() + psi[n - 1].norm_sqr());
    dx * (ends + psi[1..n - 1].iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn solve_bound_states(problem: &WaveProblem, k_levels: usize) -> Result<EigenSolution> {
    let max_levels = problem.grid.n_points / 4;
    if k_levels == 0 || k_levels > max_levels {
        return Err(Error::invalid(
            "k_levels",
            format!("must be in 1..={max_levels} for {} grid points, got {k_levels}", problem.grid.n_points),
        ));
    }
    let h = hamiltonian(problem)?;
    let pairs = h.lowest_eigenpairs(k_levels)?;
    let n = problem.grid.n_points;
    let first = problem.unknowns().start;

    let levels = pairs
        .into_iter()
        .map(|(energy, v)| {
            let mut psi = vec![Complex64::new(0.0, 0.0); n];
            for (j, x) in v.into_iter().enumerate() {
                psi[first + j] = Complex64::new(x, 0.0);
            }
            if problem.boundary == Boundary::Periodic {
                psi[n - 1] = psi[0];
            }
            let scale = norm_integral(problem, &psi).sqrt().recip();
            psi.iter_mut().for_each(|z| *z *= scale);
            EigenLevel { energy, psi }
        })
        .collect();
    Ok(EigenSolution { levels })
}
