//! Densities on the circle moved by gradient flows: the Cartan geodesics of
//! the volume-form example, and the weighted Helmholtz split of vector fields.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tolerances::{MASS_DRIFT_TOL, MAX_ODE_STEP};

/// Mass slack accepted when constructing a density.
pub const MASS_TOL: f64 = 1e-10;
/// Largest `|∫f|` for a potential.
pub const MEAN_TOL: f64 = 1e-12;

fn spacing(n: usize) -> f64 {
    2.0 * PI / n as f64
}

/// Nodes `2πj/N`, `j = 0..N`.
pub fn circle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 * spacing(n)).collect()
}

fn trapezoid(values: &[f64]) -> f64 {
    spacing(values.len()) * values.iter().sum::<f64>()
}

/// Trigonometric interpolant of periodic samples, with negligible modes dropped.
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    mean: f64,
    /// `(k, a_k, b_k)` for `a_k cos kx + b_k sin kx`.
    modes: Vec<(f64, f64, f64)>,
}

impl TrigInterpolant {
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::Config("circle grids need an even number >= 4 of nodes".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite sample".into()));
        }
        let table: Vec<(f64, f64)> = circle_grid(n).iter().map(|x| (x.cos(), x.sin())).collect();
        let mean = values.iter().sum::<f64>() / n as f64;
        let mut modes = Vec::new();
        for k in 1..=n / 2 {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let (c, s) = table[(j * k) % n];
                a += v * c;
                b += v * s;
            }
            let scale = if k == n / 2 { 1.0 } else { 2.0 } / n as f64;
            let b = if k == n / 2 { 0.0 } else { b * scale };
            modes.push((k as f64, a * scale, b));
        }
        let total: f64 = mean.abs() + modes.iter().map(|m| m.1.abs() + m.2.abs()).sum::<f64>();
        modes.retain(|m| m.1.abs() + m.2.abs() > 1e-15 * total);
        Ok(TrigInterpolant { mean, modes })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.mean + self.modes.iter().map(|(k, a, b)| a * (k * x).cos() + b * (k * x).sin()).sum::<f64>()
    }

    /// First and second derivatives at `x`.
    pub fn derivatives(&self, x: f64) -> (f64, f64) {
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (k, a, b) in &self.modes {
            let (s, c) = (k * x).sin_cos();
            d1 += k * (b * c - a * s);
            d2 -= k * k * (a * c + b * s);
        }
        (d1, d2)
    }

    /// Mean-zero antiderivative; the sine/cosine pair at the Nyquist
    /// frequency has no representable primitive and is dropped.
    fn antiderivative(&self) -> TrigInterpolant {
        let modes = self
            .modes
            .iter()
            .filter(|(_, a, b)| *a != 0.0 || *b != 0.0)
            .map(|(k, a, b)| (*k, -b / k, a / k))
            .collect();
        TrigInterpolant { mean: 0.0, modes }
    }
}

/// A positive density of total mass one on `N` uniform nodes of `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOnCircle {
    rho: Vec<f64>,
}

impl DensityOnCircle {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        Self::with_mass_tol(rho, MASS_TOL)
    }

    fn with_mass_tol(rho: Vec<f64>, tol: f64) -> Result<Self> {
        if rho.len() < 4 || rho.len() % 2 != 0 {
            return Err(Error::Config("circle grids need an even number >= 4 of nodes".into()));
        }
        if let Some(j) = rho.iter().position(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::Domain(alloc::format!("density is not positive at node {}", j)));
        }
        let m = trapezoid(&rho);
        if (m - 1.0).abs() > tol {
            return Err(Error::Domain(alloc::format!("density has mass {} instead of 1", m)));
        }
        Ok(DensityOnCircle { rho })
    }

    /// Samples a positive function and rescales it to unit mass.
    pub fn normalized_from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let raw: Vec<f64> = circle_grid(n).iter().map(|&x| f(x)).collect();
        let m = trapezoid(&raw);
        if !(m > 0.0) {
            return Err(Error::Domain("density has no mass".into()));
        }
        DensityOnCircle::new(raw.iter().map(|r| r / m).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        DensityOnCircle::normalized_from_fn(n, |_| 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn mass(&self) -> f64 {
        trapezoid(&self.rho)
    }

    pub fn grid(&self) -> Vec<f64> {
        circle_grid(self.rho.len())
    }
}

/// A mean-zero function on the circle grid.
#[derive(Clone, Debug)]
pub struct PotentialFunction {
    f: Vec<f64>,
    interp: TrigInterpolant,
}

impl PartialEq for PotentialFunction {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl PotentialFunction {
    pub fn new(f: Vec<f64>) -> Result<Self> {
        let interp = TrigInterpolant::from_samples(&f)?;
        let integral = trapezoid(&f);
        if integral.abs() > MEAN_TOL {
            return Err(Error::Domain(alloc::format!("potential has integral {:e}", integral)));
        }
        Ok(PotentialFunction { f, interp })
    }

    /// Samples `f` and removes its mean.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let raw: Vec<f64> = circle_grid(n).iter().map(|&x| f(x)).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        PotentialFunction::new(raw.iter().map(|v| v - mean).collect())
    }

    pub fn zero(n: usize) -> Result<Self> {
        PotentialFunction::new(alloc::vec![0.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Spectral `f′` at the nodes.
    pub fn gradient(&self) -> Vec<f64> {
        circle_grid(self.f.len()).iter().map(|&x| self.interp.derivatives(x).0).collect()
    }

    fn field(&self, x: f64) -> (f64, f64) {
        self.interp.derivatives(x)
    }
}

/// `X = c / (2πρ) + f′`: the first summand is the `ρ`-divergence-free part,
/// normalized so that a uniform density returns the constant field `c`.
pub fn helmholtz_1d(x_field: &[f64], rho: &DensityOnCircle) -> Result<(f64, PotentialFunction)> {
    let n = rho.len();
    if x_field.len() != n {
        return Err(Error::Shape("field and density live on different grids".into()));
    }
    let inv: f64 = trapezoid(&rho.values().iter().map(|r| 1.0 / r).collect::<Vec<_>>());
    let c = 2.0 * PI * trapezoid(x_field) / inv;
    let remainder: Vec<f64> = x_field
        .iter()
        .zip(rho.values())
        .map(|(x, r)| x - c / (2.0 * PI * r))
        .collect();
    let prim = TrigInterpolant::from_samples(&remainder)?.antiderivative();
    let f = PotentialFunction::new(circle_grid(n).iter().map(|&x| prim.eval(x)).collect())?;
    Ok((c, f))
}

/// `max_j |X_j − c/(2πρ_j) − f′_j|`.
pub fn helmholtz_residual(x_field: &[f64], rho: &DensityOnCircle, c: f64, f: &PotentialFunction) -> f64 {
    f.gradient()
        .iter()
        .zip(x_field)
        .zip(rho.values())
        .map(|((g, x), r)| (x - c / (2.0 * PI * r) - g).abs())
        .fold(0.0, f64::max)
}

/// One RK4 step of the backward characteristic `(X, ln J)` with
/// `dX/ds = −f′(X)`, `d ln J/ds = −f″(X)`.
fn rk4(f: &PotentialFunction, x: f64, lj: f64, ds: f64) -> (f64, f64) {
    let rhs = |x: f64| {
        let (d1, d2) = f.field(x);
        (-d1, -d2)
    };
    let k1 = rhs(x);
    let k2 = rhs(x + 0.5 * ds * k1.0);
    let k3 = rhs(x + 0.5 * ds * k2.0);
    let k4 = rhs(x + ds * k3.0);
    (
        x + ds / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        lj + ds / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// Densities along a gradient flow at uniformly spaced times.
#[derive(Clone, Debug)]
pub struct DensityTrajectory {
    pub times: Vec<f64>,
    pub densities: Vec<DensityOnCircle>,
}

/// `ρ(t_k) = (Φ_{t_k})_* ρ₀` for `t_k = k·dt`, `k = 0..=steps`, `Φ` the flow of `f′`.
///
/// Each node is traced back along the characteristic, and `ρ(t, x) =
/// ρ₀(X) · ∂X/∂x`.
pub fn cartan_geodesic_trajectory(
    rho0: &DensityOnCircle,
    f: &PotentialFunction,
    dt: f64,
    steps: usize,
) -> Result<DensityTrajectory> {
    let n = rho0.len();
    if f.len() != n {
        return Err(Error::Shape("density and potential live on different grids".into()));
    }
    if !dt.is_finite() {
        return Err(Error::Config("time step must be finite".into()));
    }
    if f.interp.mode_count() == 0 {
        // no flow: every time slice is the initial density
        let times = (0..=steps).map(|k| k as f64 * dt).collect();
        return Ok(DensityTrajectory { times, densities: alloc::vec![rho0.clone(); steps + 1] });
    }
    let sub = ((dt.abs() / MAX_ODE_STEP).ceil() as usize).max(1);
    let ds = dt / sub as f64;
    let base = TrigInterpolant::from_samples(rho0.values())?;
    let grid = circle_grid(n);
    let mut state: Vec<(f64, f64)> = grid.iter().map(|&x| (x, 0.0)).collect();
    let mut times = Vec::with_capacity(steps + 1);
    let mut densities = Vec::with_capacity(steps + 1);
    times.push(0.0);
    densities.push(rho0.clone());
    for k in 1..=steps {
        for st in state.iter_mut() {
            for _ in 0..sub {
                *st = rk4(f, st.0, st.1, ds);
            }
            if !st.0.is_finite() || !st.1.is_finite() {
                return Err(Error::Integrator("characteristic left the finite range".into()));
            }
        }
        let rho: Vec<f64> = state.iter().map(|(x, lj)| base.eval(*x) * lj.exp()).collect();
        let d = DensityOnCircle::with_mass_tol(rho, MASS_DRIFT_TOL)
            .map_err(|e| Error::Integrator(alloc::format!("pushforward lost accuracy at step {}: {}", k, e)))?;
        times.push(k as f64 * dt);
        densities.push(d);
    }
    Ok(DensityTrajectory { times, densities })
}

/// The pushforward of `ρ₀` under the time-`t` gradient flow of `f`.
pub fn cartan_geodesic_density(rho0: &DensityOnCircle, f: &PotentialFunction, t: f64) -> Result<DensityOnCircle> {
    let steps = ((t.abs() / MAX_ODE_STEP).ceil() as usize).max(1);
    let mut tr = cartan_geodesic_trajectory(rho0, f, t / steps as f64, steps)?;
    Ok(tr.densities.pop().expect("trajectory has at least two entries"))
}

/// `max |∂_tρ + (ρ f′)′|` over interior times and all nodes, by central differences.
pub fn continuity_residual(traj: &DensityTrajectory, f: &PotentialFunction) -> Result<f64> {
    let m = traj.times.len();
    if m < 3 || traj.densities.len() != m {
        return Err(Error::Domain("continuity residual needs at least three times".into()));
    }
    let dt = traj.times[1] - traj.times[0];
    if traj.times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-12 * (1.0 + dt.abs())) || dt == 0.0 {
        return Err(Error::Domain("time grid must be uniform".into()));
    }
    let n = f.len();
    if traj.densities.iter().any(|d| d.len() != n) {
        return Err(Error::Shape("trajectory and potential live on different grids".into()));
    }
    let h = spacing(n);
    let grad = f.gradient();
    let mut worst: f64 = 0.0;
    for k in 1..m - 1 {
        let (prev, cur, next) = (traj.densities[k - 1].values(), traj.densities[k].values(), traj.densities[k + 1].values());
        for j in 0..n {
            let (l, r) = ((j + n - 1) % n, (j + 1) % n);
            let flux = (cur[r] * grad[r] - cur[l] * grad[l]) / (2.0 * h);
            worst = worst.max(((next[j] - prev[j]) / (2.0 * dt) + flux).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolant_reproduces_trig_polynomials() {
        let g = |x: f64| 0.3 + (2.0 * x).cos() - 0.5 * (3.0 * x).sin();
        let t = TrigInterpolant::from_samples(&circle_grid(16).iter().map(|&x| g(x)).collect::<Vec<_>>()).unwrap();
        assert_eq!(t.mode_count(), 2);
        assert!((t.eval(0.77) - g(0.77)).abs() < 1e-14);
        let (d1, d2) = t.derivatives(0.77);
        assert!((d1 - (-2.0 * (1.54f64).sin() - 1.5 * (2.31f64).cos())).abs() < 1e-13);
        assert!((d2 - (-4.0 * (1.54f64).cos() + 4.5 * (2.31f64).sin())).abs() < 1e-13);
    }

    #[test]
    fn uniform_field_is_divergence_free() {
        let rho = DensityOnCircle::uniform(32).unwrap();
        let (c, f) = helmholtz_1d(&[1.0; 32], &rho).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        assert!(f.values().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn zero_potential_leaves_density_fixed() {
        let rho = DensityOnCircle::normalized_from_fn(32, |x| 2.0 + x.sin()).unwrap();
        let out = cartan_geodesic_density(&rho, &PotentialFunction::zero(32).unwrap(), 0.5).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn validation() {
        assert!(DensityOnCircle::new(alloc::vec![1.0; 8]).is_err());
        assert!(PotentialFunction::new(alloc::vec![1.0; 8]).is_err());
        assert!(DensityOnCircle::uniform(7).is_err());
    }
}
