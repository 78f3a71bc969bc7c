use cartan_git::kahler_cp1::*;
use cartan_git::quadrature::simpson;
use cartan_git::Error;
use proptest::prelude::*;

/// `ψ = (1 − x²)(1 + ε(1 − x²))` has `S = 2 + 4ε − 12εx²`; with
/// `a² = (1 + ε)/ε` the matching correction is
/// `s = −((a − x) ln(a − x) + (a + x) ln(a + x)) / 2a`.
fn exact_family(n: usize, eps: f64) -> (SymplecticPotential1D, impl Fn(f64) -> f64) {
    let a = ((1.0 + eps) / eps).sqrt();
    let s = move |x: f64| -((a - x) * (a - x).ln() + (a + x) * (a + x).ln()) / (2.0 * a);
    (SymplecticPotential1D::from_fn(n, s).unwrap(), move |x: f64| 2.0 + 4.0 * eps - 12.0 * eps * x * x)
}

/// Toric K-energy relative to the round metric, from the symplectic side.
fn toric_energy(u: &SymplecticPotential1D) -> f64 {
    let h = u.spacing();
    let s = u.correction();
    let ent: Vec<f64> = u.weighted_hessian().iter().map(|q| -q.ln()).collect();
    simpson(&ent, h).unwrap() + 2.0 * (s[0] + s[s.len() - 1]) - 2.0 * simpson(s, h).unwrap()
}

fn bump(n: usize, a: f64, b: f64) -> SymplecticPotential1D {
    SymplecticPotential1D::from_fn(n, |x| (1.0 - x * x).powi(2) * (a + b * x)).unwrap()
}

#[test]
fn curvature_of_the_exact_family() {
    // finer grids lose digits: a fourth derivative amplifies round-off by h⁻⁴
    for eps in [0.1, 0.5] {
        let (u, s_exact) = exact_family(128, eps);
        let sc = scalar_curvature(&u).unwrap();
        let err = u.nodes().iter().zip(&sc.values).map(|(x, s)| (s - s_exact(*x)).abs()).fold(0.0, f64::max);
        assert!(err < 5e-5, "eps {} err {}", eps, err);
        assert!((sc.average - 2.0).abs() < 1e-6, "{}", sc.average);
        assert!(futaki_cp1(&u).unwrap().abs() < 1e-6, "{}", futaki_cp1(&u).unwrap());
    }
}

#[test]
fn curvature_converges_at_fourth_order() {
    let err = |n: usize| {
        let (u, s_exact) = exact_family(n, 0.5);
        let sc = scalar_curvature(&u).unwrap();
        u.nodes().iter().zip(&sc.values).map(|(x, s)| (s - s_exact(*x)).abs()).fold(0.0, f64::max)
    };
    let ratio = err(32) / err(64);
    assert!(ratio > 10.0, "{}", ratio);
}

#[test]
fn chentian_matches_the_toric_formula() {
    // the two quadratures differ at O(h⁴), about 1e-7 on this grid
    for u in [bump(256, 0.1, 0.05), bump(256, -0.05, 0.1), exact_family(256, 0.3).0] {
        let k = k_energy_chentian(&u).unwrap();
        assert!((k.value - toric_energy(&u)).abs() < 1e-6, "{} {}", k.value, toric_energy(&u));
        assert!(k.bookkeeping_residual() < 1e-12);
    }
}

#[test]
fn k_energy_is_translation_invariant() {
    // adding an affine function moves the metric by an automorphism
    let u = bump(128, 0.05, 0.02);
    let shifted = SymplecticPotential1D::new(
        u.nodes().iter().zip(u.correction()).map(|(x, s)| s + 0.3 * x).collect(),
    )
    .unwrap();
    let (a, b) = (k_energy_chentian(&u).unwrap().value, k_energy_chentian(&shifted).unwrap().value);
    assert!((a - b).abs() < 1e-8, "{} {}", a, b);
}

#[test]
fn legendre_round_trip() {
    let u = bump(256, 0.1, -0.05);
    let k = KahlerPotential1D::from_symplectic(&u);
    assert!(k.roundtrip_residual(&u) < 1e-8);
    assert!(k.y.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn nonlinear_paths_are_not_geodesics() {
    let u0 = SymplecticPotential1D::fubini_study(128).unwrap();
    let u1 = bump(128, 0.1, 0.05);
    let quad = |t: f64| (1.0 - t * t, t * t);
    let line = |t: f64| (1.0 - t, t);
    let r_quad = geodesic_residual(&u0, &u1, &quad, &[0.5], 2.0).unwrap();
    let r_line = geodesic_residual(&u0, &u1, &line, &[0.5], 2.0).unwrap();
    assert!(r_quad > 1e-2 && r_line < 1e-3, "{} {}", r_quad, r_line);
}

#[test]
fn descent_energy_decreases() {
    let tr = k_energy_descent(&bump(256, 0.1, 0.05), 1.0, 100, 1e-4).unwrap();
    assert!(tr.converged);
    assert!(tr.records.windows(2).all(|w| w[1].energy <= w[0].energy + 1e-14));
    assert!(tr.records.last().unwrap().energy.abs() < 1e-8);
}

#[test]
fn invalid_inputs() {
    assert!(matches!(SymplecticPotential1D::fubini_study(7), Err(Error::Config(_))));
    assert!(SymplecticPotential1D::from_fn(16, |x| -3.0 * x * x).is_err());
    let u = SymplecticPotential1D::fubini_study(16).unwrap();
    assert!(k_energy_descent(&u, 0.0, 10, 1e-3).is_err());
    assert!(PotentialPath::new(vec![0.0, 0.5, 1.0], vec![u.clone(), u.clone(), u.clone()]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn total_curvature_and_futaki(a in -0.1f64..0.1, b in -0.1f64..0.1, c in -0.05f64..0.05) {
        let u = SymplecticPotential1D::from_fn(256, |x| (1.0 - x * x).powi(2) * (a + b * x + c * x * x)).unwrap();
        let sc = scalar_curvature(&u).unwrap();
        prop_assert!((sc.total() - 4.0).abs() < 1e-5);
        prop_assert!(futaki_cp1(&u).unwrap().abs() < 1e-5);
        prop_assert!(k_energy_chentian(&u).unwrap().value >= -1e-10);
    }
}
