use beatfield::kinematics::{
    derive_kinematics, energy_partition, local_rest_frequency, local_rest_frequency_linear,
    weak_field_metric, GravityPoint, ParticleSpec,
};
use beatfield::{action_increment, Error, PhysicalConstants, UnitSystem};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

fn natural(beta: f64) -> beatfield::KinematicsReport {
    derive_kinematics(ParticleSpec::new(1.0, beta).unwrap(), PhysicalConstants::natural()).unwrap()
}

#[test]
fn rest_state_natural() {
    let r = natural(0.0);
    assert_eq!(r.energy, 1.0);
    assert_eq!(r.momentum, 0.0);
    assert_eq!(r.regularity_ratio, 0.0);
    assert_eq!(r.lagrangian, -1.0);
    assert_eq!(r.irregular_frequency, r.rest_frequency);
    assert_eq!(r.lambda_b, None);
    assert_eq!(r.lambda_b0, None);
    assert!(close(r.rest_frequency, 1.0 / (2.0 * std::f64::consts::PI), 1e-15));
}

#[test]
fn beta_0_6_natural() {
    let r = natural(0.6);
    let nu0 = 1.0 / (2.0 * std::f64::consts::PI);
    assert!(close(r.gamma, 1.25, 1e-15));
    assert!(close(r.energy, 1.25, 1e-15));
    assert!(close(r.momentum, 0.75, 1e-15));
    assert!(close(r.irregular_frequency, 0.8 * nu0, 1e-15));
    assert!(close(r.nu_b, 0.45 * nu0, 1e-15));
    assert!(close(r.lagrangian, -0.8, 1e-15));
    assert!(close(r.regularity_ratio, 0.5625, 1e-15));
    assert!(close(r.lambda_b.unwrap(), 2.0 * std::f64::consts::PI / 0.75, 1e-15));
    assert!(close(r.lambda_cm, 2.0 * std::f64::consts::PI / 1.25, 1e-15));
}

#[test]
fn electron_rest_frequency() {
    let k = PhysicalConstants::si();
    let r = derive_kinematics(ParticleSpec::new(9.1093837015e-31, 0.0).unwrap(), k).unwrap();
    assert!(close(r.rest_frequency, 1.2356e20, 1e-4));
    assert!(close(r.rest_frequency, 1.235589963807414e20, 1e-14));
}

#[test]
fn rows_order_is_frozen() {
    let names: Vec<_> = natural(0.3).rows().into_iter().map(|(n, _)| n).collect();
    assert_eq!(
        names,
        [
            "m0", "beta", "nu0", "tau0", "gamma", "E", "p", "m", "v", "nu", "tau", "N", "T", "lambdaB",
            "nuB", "lambdaB0", "nuB0", "lambdaC", "lambdaCm", "L", "R", "alpha1", "alpha2"
        ]
    );
}

#[test]
fn partition_sums_to_energy() {
    for beta in [0.0, 0.3, 0.6, 0.99] {
        let r = natural(beta);
        let p = energy_partition(&r);
        assert!(close(p.irregular + p.regular, r.energy, 1e-14));
        assert!(close(p.total, r.energy, 1e-15));
    }
    let p = energy_partition(&natural(0.99));
    assert!(close(p.ratio, 0.9801 / 0.0199, 1e-12));
}

#[test]
fn action_is_minus_h_per_cycle() {
    let k = PhysicalConstants::natural();
    assert_eq!(action_increment(0, &k), 0.0);
    assert_eq!(action_increment(3, &k), -3.0 * k.h);
    assert_eq!(action_increment(1, &PhysicalConstants::si()), -6.62607015e-34);
}

#[test]
fn invalid_specs() {
    assert!(matches!(ParticleSpec::new(1.0, 1.0), Err(Error::Superluminal(_))));
    assert!(ParticleSpec::new(0.0, 0.5).is_err());
    assert!(ParticleSpec::new(-1.0, 0.5).is_err());
    assert!(ParticleSpec::new(1.0, -0.1).is_err());
    assert!(ParticleSpec::new(1.0, f64::NAN).is_err());
}

#[test]
fn units_round_trip() {
    assert_eq!(PhysicalConstants::for_units(UnitSystem::SI), PhysicalConstants::si());
    let k = PhysicalConstants::natural();
    assert_eq!(k.c, 1.0);
    assert!(close(k.hbar, 1.0, 1e-15));
}

#[test]
fn weak_field() {
    let k = PhysicalConstants::natural();
    let p = weak_field_metric(-1e-6, &k).unwrap();
    assert!(close(p.g00, 1.0 - 2e-6, 1e-15));
    assert!(matches!(weak_field_metric(-0.5, &k), Err(Error::StrongField(_))));
    let flat = local_rest_frequency(1.0, &GravityPoint::flat(), &k).unwrap();
    let low = local_rest_frequency(1.0, &p, &k).unwrap();
    assert!(close(low / flat, (1.0 - 2e-6f64).sqrt(), 1e-15));
    let linear = local_rest_frequency_linear(1.0, &p, &k).unwrap();
    assert!(close(linear, low, 1e-12));
    let bad = GravityPoint { phi_g: 0.0, g00: 0.0 };
    assert!(matches!(local_rest_frequency(1.0, &bad, &k), Err(Error::NonPositiveMetric(_))));
}
