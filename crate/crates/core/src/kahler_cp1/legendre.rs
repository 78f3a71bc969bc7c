//! Legendre duality between symplectic and Kähler potentials, and toric geodesics.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{u_fs, SymplecticPotential1D};
use crate::error::{Error, Result};

/// Cubic spline on a uniform grid with prescribed end second derivatives.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x0: f64, h: f64, y: Vec<f64>, m_left: f64, m_right: f64) -> Result<Self> {
        let n = y.len().saturating_sub(1);
        if n < 2 {
            return Err(Error::Config("spline needs at least three nodes".into()));
        }
        let mut m = alloc::vec![0.0; n + 1];
        m[0] = m_left;
        m[n] = m_right;
        // Thomas algorithm on the interior second derivatives
        let k = n - 1;
        let (a, b) = (h / 6.0, 2.0 * h / 3.0);
        let mut cp = alloc::vec![0.0; k];
        let mut dp = alloc::vec![0.0; k];
        for j in 0..k {
            let i = j + 1;
            let mut d = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h;
            if i == 1 {
                d -= a * m_left;
            }
            if i == n - 1 {
                d -= a * m_right;
            }
            let denom = if j == 0 { b } else { b - a * cp[j - 1] };
            cp[j] = a / denom;
            dp[j] = if j == 0 { d / denom } else { (d - a * dp[j - 1]) / denom };
        }
        for j in (0..k).rev() {
            m[j + 1] = if j + 1 == k { dp[j] } else { dp[j] - cp[j] * m[j + 2] };
        }
        Ok(CubicSpline { x0, h, y, m })
    }

    /// Interpolates the smooth part of a potential, closing with one-sided `s″` at the ends.
    pub fn of_potential(u: &SymplecticPotential1D) -> Result<Self> {
        let d2 = u.s_second();
        CubicSpline::new(-1.0, u.spacing(), u.correction().to_vec(), d2[0], d2[d2.len() - 1])
    }

    /// Value and first two derivatives at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.y.len() - 1;
        let h = self.h;
        let i = (((x - self.x0) / h).floor().max(0.0) as usize).min(n - 1);
        let xl = self.x0 + i as f64 * h;
        let (a, b) = (xl + h - x, x - xl);
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let ci = self.y[i] / h - mi * h / 6.0;
        let cj = self.y[i + 1] / h - mj * h / 6.0;
        let v = mi * a * a * a / (6.0 * h) + mj * b * b * b / (6.0 * h) + ci * a + cj * b;
        let d1 = -mi * a * a / (2.0 * h) + mj * b * b / (2.0 * h) - ci + cj;
        let d2 = (mi * a + mj * b) / h;
        (v, d1, d2)
    }
}

/// Kähler potential sampled at the dual points `y_i = u′(x_i)` of the interior nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct KahlerPotential1D {
    pub y: Vec<f64>,
    pub phi: Vec<f64>,
}

impl KahlerPotential1D {
    /// `φ(y_i) = x_i y_i − u(x_i)`.
    pub fn from_symplectic(u: &SymplecticPotential1D) -> Self {
        let xs = u.nodes();
        let uv = u.values();
        let ds = u.s_prime();
        let n = xs.len();
        let mut y = Vec::with_capacity(n - 2);
        let mut phi = Vec::with_capacity(n - 2);
        for i in 1..n - 1 {
            let yi = xs[i].atanh() + ds[i];
            y.push(yi);
            phi.push(xs[i] * yi - uv[i]);
        }
        KahlerPotential1D { y, phi }
    }

    /// `ϱ = φ − φ_G` at the samples, with `φ_G(y) = ln cosh y`.
    pub fn relative(&self) -> Vec<f64> {
        self.y.iter().zip(&self.phi).map(|(y, p)| p - log_cosh(*y)).collect()
    }

    /// Discrete transform back: `u(x) = max_i (x y_i − φ_i)`.
    pub fn to_symplectic_at(&self, x: f64) -> f64 {
        self.y
            .iter()
            .zip(&self.phi)
            .map(|(y, p)| x * y - p)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|u(x_i) − (φ)*(x_i)|` over the interior nodes.
    pub fn roundtrip_residual(&self, u: &SymplecticPotential1D) -> f64 {
        let xs = u.nodes();
        let uv = u.values();
        (1..xs.len() - 1)
            .map(|i| (uv[i] - self.to_symplectic_at(xs[i])).abs())
            .fold(0.0, f64::max)
    }
}

fn log_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2
}

/// `u_t = (1 − t) u₀ + t u₁`.
pub fn toric_geodesic(
    u0: &SymplecticPotential1D,
    u1: &SymplecticPotential1D,
    t: f64,
) -> Result<SymplecticPotential1D> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain("geodesic parameter must lie in [0, 1]".into()));
    }
    u0.combine(u1, 1.0 - t, t)
}

/// Kähler potential of the interpolated symplectic potential `(1 − t) s₀ + t s₁`
/// at the dual coordinate `y`, by safeguarded Newton on `u′(x) = y`.
fn dual_value(s0: &CubicSpline, s1: &CubicSpline, path: &dyn Fn(f64) -> (f64, f64), t: f64, y: f64) -> Result<f64> {
    let (a, b) = path(t);
    let eval = |x: f64| {
        let (v0, d0, e0) = s0.eval(x);
        let (v1, d1, e1) = s1.eval(x);
        (a * v0 + b * v1, a * d0 + b * d1, a * e0 + b * e1)
    };
    let (mut lo, mut hi) = (-1.0 + 1e-15, 1.0 - 1e-15);
    let mut x = y.tanh();
    for _ in 0..200 {
        let (_, d1, d2) = eval(x);
        let g = x.atanh() + d1 - y;
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let gp = 1.0 / (1.0 - x * x) + d2;
        let mut next = x - g / gp;
        if !(next > lo && next < hi) || !(gp > 0.0) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-16 {
            x = next;
            break;
        }
        x = next;
    }
    let (v, d1, _) = eval(x);
    if (x.atanh() + d1 - y).abs() > 1e-9 {
        return Err(Error::NonConvergence { iterations: 200, detail: "Legendre inversion failed".into() });
    }
    Ok(x * y - u_fs(x) - v)
}

/// Residual `ϱ̈ − (ϱ̇_y)² / φ_yy` of the Legendre-dual path on a `(t, y)` lattice.
///
/// The lattice spacing is `4h` in both `t` and `y`, with `h` the moment-grid
/// spacing, so the residual measures second-order consistency. `schedule`
/// maps `t` to the weights `(a, b)` in `a s₀ + b s₁`; the straight line is
/// `t ↦ (1 − t, t)`.
pub fn geodesic_residual(
    u0: &SymplecticPotential1D,
    u1: &SymplecticPotential1D,
    schedule: &dyn Fn(f64) -> (f64, f64),
    ts: &[f64],
    y_max: f64,
) -> Result<f64> {
    if u0.intervals() != u1.intervals() {
        return Err(Error::Shape("endpoints live on different grids".into()));
    }
    let s0 = CubicSpline::of_potential(u0)?;
    let s1 = CubicSpline::of_potential(u1)?;
    let k = 4.0 * u0.spacing();
    let phi = |t: f64, y: f64| dual_value(&s0, &s1, schedule, t, y);
    let steps = (y_max / k).floor() as i64;
    let mut worst: f64 = 0.0;
    for &t in ts {
        if t - k < 0.0 || t + k > 1.0 {
            return Err(Error::Domain("lattice leaves the time interval".into()));
        }
        for j in -steps..=steps {
            let y = j as f64 * k;
            let c = phi(t, y)?;
            let ptt = (phi(t + k, y)? - 2.0 * c + phi(t - k, y)?) / (k * k);
            let pyy = (phi(t, y + k)? - 2.0 * c + phi(t, y - k)?) / (k * k);
            let pty = (phi(t + k, y + k)? - phi(t + k, y - k)? - phi(t - k, y + k)? + phi(t - k, y - k)?)
                / (4.0 * k * k);
            worst = worst.max((ptt - pty * pty / pyy).abs());
        }
    }
    Ok(worst)
}
