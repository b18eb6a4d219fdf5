use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::kinematics::{local_rest_frequency, GravityPoint};

/// Beat counts of two identical particles at rest at two field points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub point_a: GravityPoint,
    pub point_b: GravityPoint,
    pub duration: f64,
    pub count_a: u64,
    pub count_b: u64,
    /// `count_a / count_b`.
    pub ratio: f64,
    /// `√(g00_a / g00_b)`.
    pub expected_ratio: f64,
}

impl PairReport {
    /// One count relative to the smaller clock, the resolution of `ratio`.
    pub fn count_quantum(&self) -> f64 {
        1.0 / self.count_a.min(self.count_b).max(1) as f64
    }
}

pub fn simulate_stationary_pair(
    rest_mass: f64,
    point_a: &GravityPoint,
    point_b: &GravityPoint,
    duration: f64,
    constants: &PhysicalConstants,
) -> Result<PairReport> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::invalid("duration", format!("must be > 0, got {duration}")));
    }
    let rate_a = local_rest_frequency(rest_mass, point_a, constants)?;
    let rate_b = local_rest_frequency(rest_mass, point_b, constants)?;
    let count_a = beat_count(duration, rate_a);
    let count_b = beat_count(duration, rate_b);
    Ok(PairReport {
        point_a: *point_a,
        point_b: *point_b,
        duration,
        count_a,
        count_b,
        ratio: count_a as f64 / count_b.max(1) as f64,
        expected_ratio: (point_a.g00 / point_b.g00).sqrt(),
    })
}

/// Completed cycles in `duration`. A product within a few ulps of an
/// integer is taken as that integer, so `k·τ₀` yields exactly `k` beats.
fn beat_count(duration: f64, rate: f64) -> u64 {
    let cycles = duration * rate;
    let nearest = cycles.round();
    if (cycles - nearest).abs() <= 4.0 * f64::EPSILON * nearest.abs() {
        nearest as u64
    } else {
        cycles.floor() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::weak_field_metric;

    #[test]
    fn equal_points_have_unit_ratio() {
        let k = PhysicalConstants::natural();
        let p = weak_field_metric(-0.01, &k).unwrap();
        let r = simulate_stationary_pair(1.0, &p, &p, 1e6, &k).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.count_a, r.count_b);
    }

    #[test]
    fn whole_rest_periods_count_exactly() {
        let k = PhysicalConstants::natural();
        let flat = GravityPoint::flat();
        let tau0 = k.h / (k.c * k.c);
        for n in [1u64, 7, 1000, 123_456_789, 1_000_000_000] {
            let r = simulate_stationary_pair(1.0, &flat, &flat, n as f64 * tau0, &k).unwrap();
            assert_eq!(r.count_a, n);
        }
    }

    #[test]
    fn deep_point_ratio() {
        let k = PhysicalConstants::natural();
        let a = GravityPoint::flat();
        let b = GravityPoint { phi_g: -0.095, g00: 0.81 };
        let r = simulate_stationary_pair(1.0, &a, &b, 1e7 * k.h, &k).unwrap();
        assert!((r.ratio - 1.0 / 0.9).abs() <= r.count_quantum());
        assert!((r.expected_ratio - 1.0 / 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_duration() {
        let k = PhysicalConstants::natural();
        let a = GravityPoint::flat();
        assert!(simulate_stationary_pair(1.0, &a, &a, 0.0, &k).is_err());
        assert!(simulate_stationary_pair(1.0, &a, &a, -1.0, &k).is_err());
        let bad = GravityPoint { phi_g: 0.0, g00: -0.1 };
        assert!(simulate_stationary_pair(1.0, &a, &bad, 1.0, &k).is_err());
    }
}
