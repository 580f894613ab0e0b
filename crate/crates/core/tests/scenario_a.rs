mod common;

use common::{bisect, simpson};
use gravdit::constants::{catalog, PhysicalConstants};
use gravdit::scenario_a::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn beam(name: &str) -> ShutterBeam {
    ShutterBeam::for_particle(catalog().lookup(name).unwrap(), None, &PhysicalConstants::default()).unwrap()
}

/// Shutter density from Fresnel integrals done by Simpson quadrature.
fn density_oracle(xi: f64) -> f64 {
    let c = simpson(&|s: f64| (0.5 * PI * s * s).cos(), 0.0, xi, 1e-13);
    let s = simpson(&|s: f64| (0.5 * PI * s * s).sin(), 0.0, xi, 1e-13);
    0.5 * ((0.5 + c).powi(2) + (0.5 + s).powi(2))
}

fn tof_oracle(b: &ShutterBeam, depth: f64) -> f64 {
    bisect(|t| -depth + b.speed * t + 0.5 * b.g * t * t, 0.0, 10.0, 1e-16)
}

/// Width oracle written directly from the kinematics.
fn width_oracle(b: &ShutterBeam, depth: f64) -> f64 {
    let t = tof_oracle(b, depth);
    let k = b.mass * b.speed / b.hbar;
    0.85 * (PI * b.speed * t / (k * (2.0 * depth - b.speed * t).powi(2))).sqrt() * t
}

#[test]
fn density_matches_quadrature_oracle() {
    for xi in [-4.0, -1.3, -0.2, 0.0, 0.4, 1.0, 2.5, 4.0] {
        let got = density_of_xi(xi);
        let want = density_oracle(xi);
        assert!((got - want).abs() < 1e-10, "xi {xi}: {got} vs {want}");
    }
}

#[test]
fn quarter_at_classical_arrival() {
    for name in ["thermal_neutron", "ucn", "cesium", "c60", "c176"] {
        let b = beam(name);
        let t = classical_tof(&b, -1.0).unwrap();
        assert!((t - tof_oracle(&b, 1.0)).abs() < 1e-12 * t);
        assert!(xi(&b, -1.0, t).unwrap().abs() < 1e-6, "{name}");
        assert!((density_a(&b, -1.0, t).unwrap() - 0.25).abs() < 1e-6, "{name}");
    }
    assert!((density_of_xi(0.0) - 0.25).abs() < 1e-15);
}

#[test]
fn monotone_rise_before_arrival() {
    let mut prev = 0.0;
    for i in 0..=4000 {
        let xi = -40.0 + 0.01 * i as f64;
        let d = density_of_xi(xi);
        assert!(d > prev, "not increasing at xi {xi}");
        prev = d;
    }
    assert!(density_of_xi(-1e4) < 1e-8);
}

#[test]
fn envelope_beyond_ten() {
    // rho - 1 = (sin - cos)(pi xi^2 / 2) / (pi xi) + 1 / (2 pi^2 xi^2) + O(xi^-3),
    // so the sharp envelope carries a factor sqrt(2).
    let mut worst: f64 = 0.0;
    for i in 0..20_000 {
        let xi = 10.0 + 0.005 * i as f64;
        let dev = (density_of_xi(xi) - 1.0).abs();
        let env = 2f64.sqrt() / (PI * xi) + 1.0 / (2.0 * PI * PI * xi * xi);
        assert!(dev <= env * (1.0 + 1e-2), "xi {xi}: {dev} vs {env}");
        worst = worst.max(dev * PI * xi);
    }
    assert!(worst > 1.3, "the sqrt(2) envelope is attained: {worst}");
    // mpmath at 30 digits.
    assert!((density_of_xi(10.055) - 1.036_761_663_247_917_3).abs() < 1e-12);
}

#[test]
fn thermal_tof_and_widths() {
    let b = beam("thermal_neutron");
    let t = classical_tof(&b, -1.0).unwrap();
    assert!((t - 4.547e-4).abs() < 1e-3 * 4.547e-4, "{t}");
    for (name, quoted, tol) in [("thermal_neutron", 0.37e-8, 0.05), ("ucn", 6e-5, 0.10), ("cesium", 0.5e-5, 0.10)] {
        let b = beam(name);
        let w = diffraction_width(&b, -1.0).unwrap().delta_t;
        assert!((w - width_oracle(&b, 1.0)).abs() < 1e-9 * w, "{name}");
        assert!((w - quoted).abs() < tol * quoted, "{name}: {w} vs {quoted}");
    }
}

#[test]
fn width_scales_as_inverse_root_mass() {
    let consts = PhysicalConstants::default();
    let masses: Vec<f64> = (0..7).map(|k| 1e-27 * 10f64.powf(0.5 * k as f64)).collect();
    let pts: Vec<(f64, f64)> = masses
        .iter()
        .map(|&m| {
            let b = ShutterBeam::new(m, 0.02, &consts).unwrap();
            (m.ln(), diffraction_width(&b, -1.0).unwrap().delta_t.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() < 0.02, "slope {slope}");
}

#[test]
fn crossings_bracket_the_asymptotic_width() {
    let b = beam("ucn");
    let w = diffraction_width_with_crossings(&b, -1.0).unwrap();
    let (t1, t2) = (w.t1.unwrap(), w.t2.unwrap());
    let arrival = classical_tof(&b, -1.0).unwrap();
    assert!(arrival < t1 && t1 < t2);
    for t in [t1, t2] {
        assert!((density_oracle(xi(&b, -1.0, t).unwrap()) - 1.0).abs() < 1e-8);
    }
    let emp = t2 - t1;
    assert!((emp - w.delta_t).abs() < 0.2 * w.delta_t, "{emp} vs {}", w.delta_t);
}

#[test]
fn guard_rejects_near_field() {
    let consts = PhysicalConstants::default();
    let b = ShutterBeam::new(1.675e-27, 1e-6, &consts).unwrap();
    assert!(diffraction_width(&b, -1e-3).is_err());
}

#[test]
fn local_average_tends_to_classical() {
    let b = beam("ucn");
    let arrival = classical_tof(&b, -1.0).unwrap();
    let t = arrival * 1.05;
    let eps = local_average_window(&b, -1.0, t).unwrap();
    let avg = local_average(&b, -1.0, t, eps).unwrap();
    assert!((avg - classical_density_a(&b, -1.0, t).unwrap()).abs() < 0.02, "{avg}");
    let early = local_average(&b, -1.0, 0.95 * arrival, eps).unwrap();
    assert!(early < 0.02, "{early}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gravity_equals_free_fall_frame(
        log_m in -27.0f64..-23.0,
        v in 1e-3f64..100.0,
        depth in 1e-3f64..10.0,
        target in -100.0f64..100.0,
    ) {
        // Sample around the arrival, where the density is not yet a
        // sub-ulp oscillation in xi.
        let b = ShutterBeam::new(10f64.powf(log_m), v, &PhysicalConstants::default()).unwrap();
        let f = |t: f64| xi(&b, -depth, t).unwrap() - target;
        let t = bisect(f, 1e-9, 20.0, 1e-15);
        let direct = density_a(&b, -depth, t).unwrap();
        let mapped = strong_ep_map_a(&b, -depth, t).unwrap();
        prop_assert!((direct - mapped).abs() < 1e-12);
    }

    #[test]
    fn density_bounded(xi in -50.0f64..50.0) {
        let d = density_of_xi(xi);
        prop_assert!((0.0..=1.5).contains(&d));
    }
}
