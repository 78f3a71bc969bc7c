use std::f64::consts::PI;

use cartan_git::wasserstein::*;
use cartan_git::Error;
use proptest::prelude::*;

/// Pushforward of the uniform density under the flow of `−sin`:
/// `tan(x/2)` decays like `e^{−t}`.
fn exact_cos_flow(t: f64, x: f64) -> f64 {
    let (s, c) = (0.5 * x).sin_cos();
    t.exp() / (2.0 * PI * (c * c + (2.0 * t).exp() * s * s))
}

#[test]
fn pushforward_matches_the_exact_flow() {
    let n = 128;
    let rho = DensityOnCircle::uniform(n).unwrap();
    let f = PotentialFunction::from_fn(n, |x| x.cos()).unwrap();
    let out = cartan_geodesic_density(&rho, &f, 0.5).unwrap();
    let err = out
        .grid()
        .iter()
        .zip(out.values())
        .map(|(x, r)| (r - exact_cos_flow(0.5, *x)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-10, "{}", err);
}

#[test]
fn short_times_follow_the_continuity_equation() {
    // ρ(t) = ρ₀ − t (ρ₀ f′)′ + O(t²): the error ratio on halving t is 4
    let n = 64;
    let rho = DensityOnCircle::normalized_from_fn(n, |x| 2.0 + x.sin()).unwrap();
    let f = PotentialFunction::from_fn(n, |x| (2.0 * x).cos() + 0.3 * x.sin()).unwrap();
    let xs = rho.grid();
    // (ρ₀ f′)′ in closed form
    let flux_div = |x: f64| {
        let r = (2.0 + x.sin()) / (4.0 * PI);
        let dr = x.cos() / (4.0 * PI);
        let df = -2.0 * (2.0 * x).sin() + 0.3 * x.cos();
        let d2f = -4.0 * (2.0 * x).cos() - 0.3 * x.sin();
        dr * df + r * d2f
    };
    let err = |t: f64| {
        let out = cartan_geodesic_density(&rho, &f, t).unwrap();
        out.values()
            .iter()
            .zip(rho.values())
            .zip(&xs)
            .map(|((r, r0), x)| (r - (r0 - t * flux_div(*x))).abs())
            .fold(0.0, f64::max)
    };
    let ratio = err(0.02) / err(0.01);
    assert!((ratio - 4.0).abs() < 0.2, "{}", ratio);
}

#[test]
fn helmholtz_recovers_a_gradient() {
    let n = 64;
    let rho = DensityOnCircle::normalized_from_fn(n, |x| 1.5 + x.cos()).unwrap();
    let f0 = PotentialFunction::from_fn(n, |x| (3.0 * x).sin() - 0.2 * x.cos()).unwrap();
    let (c, f) = helmholtz_1d(&f0.gradient(), &rho).unwrap();
    assert!(c.abs() < 1e-13);
    let gap = f.values().iter().zip(f0.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-12);
}

#[test]
fn helmholtz_reconstructs_smooth_fields() {
    let n = 128;
    let rho = DensityOnCircle::normalized_from_fn(n, |x| (x.sin() + 0.3 * (2.0 * x).cos()).exp()).unwrap();
    let field: Vec<f64> = circle_grid(n).iter().map(|&x| 0.4 + (x + 0.3).sin() * (2.0 * x).cos() + 0.1 * (5.0 * x).sin()).collect();
    let (c, f) = helmholtz_1d(&field, &rho).unwrap();
    assert!(helmholtz_residual(&field, &rho, c, &f) < 1e-8);
    // divergence-free part: ρ · c/(2πρ) is constant; second-order finite-difference cross-check of f′
    let h = 2.0 * PI / n as f64;
    let vals = f.values();
    for j in 0..n {
        let fd = (vals[(j + 1) % n] - vals[(j + n - 1) % n]) / (2.0 * h);
        let want = field[j] - c / (2.0 * PI * rho.values()[j]);
        assert!((fd - want).abs() < 5e-3, "{} {} {}", j, fd, want);
    }
}

#[test]
fn residual_needs_three_times() {
    let rho = DensityOnCircle::uniform(16).unwrap();
    let f = PotentialFunction::zero(16).unwrap();
    let tr = cartan_geodesic_trajectory(&rho, &f, 0.1, 1).unwrap();
    assert!(matches!(continuity_residual(&tr, &f), Err(Error::Domain(_))));
    let tr = cartan_geodesic_trajectory(&rho, &f, 0.1, 4).unwrap();
    assert_eq!(continuity_residual(&tr, &f).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn flows_conserve_mass_or_refuse(a in -1.0f64..1.0, b in -1.0f64..1.0, k in 1usize..4, t in 0.0f64..1.0) {
        let n = 128;
        let rho = DensityOnCircle::normalized_from_fn(n, |x| 2.0 + (x + b).sin()).unwrap();
        let f = PotentialFunction::from_fn(n, |x| a * (k as f64 * x).cos() + b * x.sin()).unwrap();
        match cartan_geodesic_density(&rho, &f, t) {
            Ok(out) => {
                prop_assert!((out.mass() - 1.0).abs() < 1e-8);
                prop_assert!(out.values().iter().all(|r| *r > 0.0));
            }
            Err(e) => prop_assert!(matches!(e, Error::Integrator(_)), "{}", e),
        }
    }

    #[test]
    fn gentle_flows_stay_resolved(a in -0.3f64..0.3, k in 1usize..3, t in 0.0f64..0.5) {
        let n = 128;
        let rho = DensityOnCircle::uniform(n).unwrap();
        let f = PotentialFunction::from_fn(n, |x| a * (k as f64 * x).cos()).unwrap();
        let out = cartan_geodesic_density(&rho, &f, t).unwrap();
        prop_assert!((out.mass() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn potentials_have_zero_mean(shift in -5.0f64..5.0) {
        let f = PotentialFunction::from_fn(32, |x| shift + x.sin() * x.sin()).unwrap();
        prop_assert!(f.values().iter().sum::<f64>().abs() < 1e-12);
    }
}
