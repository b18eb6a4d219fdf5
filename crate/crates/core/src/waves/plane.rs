use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid1D, PlaneWave};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Samples below this fraction of the peak magnitude are a division hazard.
pub const HAZARD_FRACTION: f64 = 1e-14;

/// Deviation of the finite wave-action increment `−iħ·ΔΨ/Ψ` over `dt`
/// from the exact `−E·dt`.
///
/// The deviation is second order in `ω·dt`.
pub fn differential_wave_action_check(wave: &PlaneWave, dt: f64) -> Result<f64> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
    }
    let hbar = wave.constants.hbar;
    let before = wave.psi(0.0, 0.0);
    let after = wave.psi(0.0, dt);
    let increment = -I * hbar * (after - before) / before;
    Ok((increment - Complex64::new(-wave.energy * dt, 0.0)).norm())
}

/// Node-wise momentum readouts of a sampled wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumReadout {
    /// `−iħ(∂Ψ/∂x)/Ψ` by central differences at interior nodes.
    pub momentum: Vec<Complex64>,
    /// `−ħ²(∂²Ψ/∂x²)/Ψ` by central second differences at interior nodes.
    pub momentum_squared: Vec<Complex64>,
    pub mean_momentum: f64,
    pub mean_momentum_squared: f64,
}

pub fn extract_momentum(samples: &[Complex64], grid: &Grid1D, hbar: f64) -> Result<MomentumReadout> {
    if samples.len() != grid.n_points {
        return Err(Error::invalid(
            "samples",
            format!("has {} values for {} grid nodes", samples.len(), grid.n_points),
        ));
    }
    let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let interior = 1..samples.len() - 1;
    for i in interior.clone() {
        let magnitude = samples[i].norm();
        if !(magnitude >= HAZARD_FRACTION * peak) || magnitude == 0.0 {
            return Err(Error::DivisionHazard { node: i, magnitude });
        }
    }
    let dx = grid.spacing();
    let momentum: Vec<Complex64> = interior
        .clone()
        .map(|i| -I * hbar * (samples[i + 1] - samples[i - 1]) / (2.0 * dx * samples[i]))
        .collect();
    let momentum_squared: Vec<Complex64> = interior
        .map(|i| {
            let second = (samples[i + 1] - samples[i]) - (samples[i] - samples[i - 1]);
            -hbar * hbar * second / (dx * dx * samples[i])
        })
        .collect();
    let count = momentum.len() as f64;
    Ok(MomentumReadout {
        mean_momentum: momentum.iter().map(|z| z.re).sum::<f64>() / count,
        mean_momentum_squared: momentum_squared.iter().map(|z| z.re).sum::<f64>() / count,
        momentum,
        momentum_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReadout {
    pub momentum: f64,
    pub momentum_squared: f64,
    /// `iħ(∂Ψ/∂t)/Ψ` from a central time difference of width `2·dt`.
    pub energy: f64,
    /// `iħ(∂Ψ/∂t)/Ψ` with the analytic time derivative.
    pub energy_exact: f64,
}

/// Applies the differential quantization rules to a plane wave sampled on
/// `grid` at `t = 0`.
pub fn apply_quantization(wave: &PlaneWave, grid: &Grid1D, dt: f64) -> Result<QuantizationReadout> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
    }
    let hbar = wave.constants.hbar;
    let samples: Vec<Complex64> = grid.nodes().map(|x| wave.psi(x, 0.0)).collect();
    let spatial = extract_momentum(&samples, grid, hbar)?;

    let here = wave.psi(0.0, 0.0);
    let d_dt = (wave.psi(0.0, dt) - wave.psi(0.0, -dt)) / (2.0 * dt);
    let exact_d_dt = -I * wave.angular_frequency() * here;
    Ok(QuantizationReadout {
        momentum: spatial.mean_momentum,
        momentum_squared: spatial.mean_momentum_squared,
        energy: (I * hbar * d_dt / here).re,
        energy_exact: (I * hbar * exact_d_dt / here).re,
    })
}

/// Mass-shell residuals of a plane wave under the three equivalent forms
/// of the relativistic wave equation, each normalized by `E²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionCheck {
    /// `|E² − p²c² − (m₀c²)²| / E²`.
    pub residual: f64,
    /// `iħm ∂ₜΨ + ħ²∂ₓ²Ψ − m₀²c²Ψ = 0` with `m = E/c²`.
    pub mixed_form: f64,
    /// `−(ħ²/c²)∂ₜ²Ψ + ħ²∂ₓ²Ψ − m₀²c²Ψ = 0`.
    pub second_order_form: f64,
    /// `∂ₜ²Ψ − c²∂ₓ²Ψ + ω₀²Ψ = 0`.
    pub frequency_form: f64,
}

impl DispersionCheck {
    /// Largest pairwise difference between the three operator forms.
    pub fn form_spread(&self) -> f64 {
        let f = [self.mixed_form, self.second_order_form, self.frequency_form];
        let max = f.iter().copied().fold(f64::MIN, f64::max);
        let min = f.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }
}

pub fn kg_dispersion_residual(wave: &PlaneWave) -> Result<DispersionCheck> {
    if !(wave.energy > 0.0) {
        return Err(Error::invalid("energy", format!("must be > 0, got {}", wave.energy)));
    }
    let hbar = wave.constants.hbar;
    let c = wave.constants.c;
    let (e, p, m0) = (wave.energy, wave.momentum, wave.rest_mass);
    let e2 = e * e;

    let rest = m0 * c * c;
    let residual = (e2 - p * p * c * c - rest * rest).abs() / e2;

    let (x, t) = (0.0, 0.0);
    let psi = wave.psi(x, t);
    let k = wave.wavenumber();
    let omega = wave.angular_frequency();
    let omega0 = wave.rest_angular_frequency();
    let d_t = -I * omega * psi;
    let d_tt = -omega * omega * psi;
    let d_xx = -k * k * psi;
    let mass = e / (c * c);
    let m0c = m0 * c;

    let mixed = I * hbar * mass * d_t + hbar * hbar * d_xx - m0c * m0c * psi;
    let second = -(hbar * hbar / (c * c)) * d_tt + hbar * hbar * d_xx - m0c * m0c * psi;
    let freq = d_tt - c * c * d_xx + omega0 * omega0 * psi;

    Ok(DispersionCheck {
        residual,
        mixed_form: (mixed / psi).norm() * c * c / e2,
        second_order_form: (second / psi).norm() * c * c / e2,
        frequency_form: (freq / psi).norm() * hbar * hbar / e2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::kinematics::{derive_kinematics, ParticleSpec};

    fn natural_wave(p: f64, e: f64) -> PlaneWave {
        PlaneWave::new(p, e, 1.0, PhysicalConstants::natural()).unwrap()
    }

    #[test]
    fn zero_energy_has_no_action_deviation() {
        assert_eq!(differential_wave_action_check(&natural_wave(0.3, 0.0), 1e-3).unwrap(), 0.0);
        assert!(differential_wave_action_check(&natural_wave(0.3, 1.0), 0.0).is_err());
    }

    #[test]
    fn action_deviation_is_second_order() {
        // |e^{−iθ} − 1 + iθ| = θ²/2 + O(θ³): deviation/(E dt) ≈ θ/2.
        let w = natural_wave(0.0, 1.0);
        let dev = differential_wave_action_check(&w, 1e-3).unwrap();
        assert!((dev / 1e-3 - 5e-4).abs() < 1e-6, "{dev}");
        let half = differential_wave_action_check(&w, 5e-4).unwrap();
        assert!((dev / half - 4.0).abs() < 0.08);
    }

    #[test]
    fn zero_momentum_extracts_zero() {
        let g = Grid1D::new(0.0, 1.0, 64).unwrap();
        let r = apply_quantization(&natural_wave(0.0, 1.0), &g, 1e-4).unwrap();
        assert_eq!(r.momentum, 0.0);
        assert_eq!(r.momentum_squared, 0.0);
    }

    #[test]
    fn central_difference_error_series() {
        // ħ sin(kΔx)/Δx = p(1 − (kΔx)²/6 + …); second difference gives
        // p²(1 − (kΔx)²/12 + …).
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let k = 1e-2 / g.spacing();
        let r = apply_quantization(&natural_wave(k, 2.0), &g, 1e-4).unwrap();
        let err = 1.0 - r.momentum / k;
        assert!((err - 1e-4 / 6.0).abs() < 1e-8, "{err}");
        let err2 = 1.0 - r.momentum_squared / (k * k);
        assert!((err2 - 1e-4 / 12.0).abs() < 1e-8, "{err2}");
        assert!((r.energy_exact - 2.0).abs() < 1e-15);
        assert!((r.energy - 2.0).abs() < 2.0 * 1e-8);
    }

    #[test]
    fn division_hazard_is_reported() {
        let g = Grid1D::new(0.0, 1.0, 32).unwrap();
        let mut s = vec![Complex64::new(1.0, 0.0); 32];
        s[7] = Complex64::new(1e-16, 0.0);
        assert!(matches!(
            extract_momentum(&s, &g, 1.0),
            Err(Error::DivisionHazard { node: 7, .. })
        ));
    }

    #[test]
    fn rest_shell() {
        let d = kg_dispersion_residual(&natural_wave(0.0, 1.0)).unwrap();
        assert!(d.residual <= 1e-15);
        assert!(d.form_spread() <= 1e-12);
    }

    #[test]
    fn moving_shell_and_perturbation() {
        let r = derive_kinematics(ParticleSpec::new(1.0, 0.6).unwrap(), PhysicalConstants::natural()).unwrap();
        let on = PlaneWave::from_report(&r);
        let d = kg_dispersion_residual(&on).unwrap();
        assert!(d.residual <= 1e-12);
        let mut off = on;
        off.energy *= 1.001;
        let d = kg_dispersion_residual(&off).unwrap();
        // (1.001² − 1)/1.001² = 1.998003…e-3
        assert!((d.residual - 0.002001 / 1.002001).abs() < 1e-12);
        assert!(d.form_spread() <= 1e-12);
        assert!(kg_dispersion_residual(&natural_wave(0.0, 0.0)).is_err());
    }
}
