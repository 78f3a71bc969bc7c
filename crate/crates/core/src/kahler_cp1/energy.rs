//! The K-energy by line integration and by its closed entropy/energy form.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{scalar_curvature, SymplecticPotential1D};
use crate::error::{Error, Result};
use crate::quadrature::simpson;
use crate::stencil::fornberg;

/// A path of potentials sampled on a uniform time grid.
#[derive(Clone, Debug)]
pub struct PotentialPath {
    ts: Vec<f64>,
    potentials: Vec<SymplecticPotential1D>,
}

impl PotentialPath {
    /// Needs an even number (at least four) of uniform time steps.
    pub fn new(ts: Vec<f64>, potentials: Vec<SymplecticPotential1D>) -> Result<Self> {
        if ts.len() != potentials.len() {
            return Err(Error::Shape("one potential per time sample is required".into()));
        }
        let m = ts.len().saturating_sub(1);
        if m < 4 || m % 2 != 0 {
            return Err(Error::Config("path needs an even number >= 4 of time steps".into()));
        }
        let dt = (ts[m] - ts[0]) / m as f64;
        if !(dt > 0.0) || ts.iter().enumerate().any(|(k, t)| (t - ts[0] - k as f64 * dt).abs() > 1e-12) {
            return Err(Error::Config("time grid must be uniform and increasing".into()));
        }
        let n = potentials[0].intervals();
        if potentials.iter().any(|u| u.intervals() != n) {
            return Err(Error::Shape("potentials live on different grids".into()));
        }
        Ok(PotentialPath { ts, potentials })
    }

    /// Samples `t ↦ u(t)` on `steps + 1` uniform times in `[0, 1]`.
    pub fn sample(steps: usize, f: impl Fn(f64) -> Result<SymplecticPotential1D>) -> Result<Self> {
        let ts: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
        let us = ts.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        PotentialPath::new(ts, us)
    }

    pub fn times(&self) -> &[f64] {
        &self.ts
    }

    pub fn potentials(&self) -> &[SymplecticPotential1D] {
        &self.potentials
    }
}

/// `E = ∫ dt ∫ u̇ (S − S₀) dx` along the path.
pub fn k_energy_kempf1(path: &PotentialPath) -> Result<f64> {
    let m = path.ts.len() - 1;
    let dt = (path.ts[m] - path.ts[0]) / m as f64;
    let offsets: Vec<f64> = (0..5).map(|k| k as f64).collect();
    let mut rate = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let start = k.saturating_sub(2).min(m - 4);
        let w = fornberg((k - start) as f64, &offsets, 1);
        let u = &path.potentials[k];
        let sc = scalar_curvature(u)?;
        let npts = u.correction().len();
        let mut integrand = alloc::vec![0.0; npts];
        for (j, wj) in w[1].iter().enumerate() {
            for (acc, s) in integrand.iter_mut().zip(path.potentials[start + j].correction()) {
                *acc += wj * s / dt;
            }
        }
        for (acc, s) in integrand.iter_mut().zip(&sc.values) {
            *acc *= s - sc.average;
        }
        rate.push(simpson(&integrand, u.spacing())?);
    }
    simpson(&rate, dt)
}

/// K-energy split into entropy, energy and Ricci-energy parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KEnergyValue {
    pub value: f64,
    pub entropy: f64,
    /// `S₀ · AM`.
    pub energy: f64,
    /// `−AM_Ric`.
    pub ricci: f64,
}

impl KEnergyValue {
    pub fn bookkeeping_residual(&self) -> f64 {
        (self.entropy + self.energy + self.ricci - self.value).abs()
    }
}

/// Entropy plus Aubin-Mabuchi terms, relative to the round metric.
///
/// With `y = u′(x)` the Kähler coordinate of the moment value `x`, the
/// density ratio of the round form to the new one is
/// `w = (1 + (1 − x²) s″) / (cosh y + x sinh y)²` and the relative Kähler
/// potential is `ϱ = x s′ − s − ln(cosh s′ + x sinh s′)`; every integrand is
/// finite at the poles.
pub fn k_energy_chentian(u: &SymplecticPotential1D) -> Result<KEnergyValue> {
    let sc = scalar_curvature(u)?;
    let xs = u.nodes();
    let s = u.correction();
    let ds = u.s_prime();
    let q = u.weighted_hessian();
    let n = xs.len();
    let mut ent = Vec::with_capacity(n);
    let mut am = Vec::with_capacity(n);
    let mut ric = Vec::with_capacity(n);
    for i in 0..n {
        let x = xs[i];
        let p = ds[i];
        // y = artanh(x) + s′; cosh y + x sinh y = (cosh s′ + x sinh s′) / sqrt(1 − x²)
        let c = p.cosh() + x * p.sinh();
        let w = q[i] / (c * c);
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Numeric("density ratio degenerated at a node".into()));
        }
        let rho = x * p - s[i] - c.ln();
        ent.push(-w.ln());
        am.push(0.5 * rho * (1.0 + w));
        ric.push(2.0 * rho * w);
    }
    let h = u.spacing();
    let entropy = simpson(&ent, h)?;
    let energy = sc.average * simpson(&am, h)?;
    let ricci = -simpson(&ric, h)?;
    Ok(KEnergyValue { value: entropy + energy + ricci, entropy, energy, ricci })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(n: usize, eps: f64) -> SymplecticPotential1D {
        SymplecticPotential1D::from_fn(n, |x| eps * (1.0 - x * x).powi(2)).unwrap()
    }

    #[test]
    fn round_metric_has_zero_energy() {
        let k = k_energy_chentian(&SymplecticPotential1D::fubini_study(64).unwrap()).unwrap();
        assert!(k.value.abs() < 1e-14);
    }

    #[test]
    fn two_formulas_agree() {
        let n = 256;
        let path = PotentialPath::sample(16, |t| Ok(bump(n, 0.05 * t))).unwrap();
        let e1 = k_energy_kempf1(&path).unwrap();
        let e2 = k_energy_chentian(&bump(n, 0.05)).unwrap();
        assert!(e1 > 0.0);
        assert!((e1 - e2.value).abs() / (1.0 + e1.abs()) < 1e-3, "{} {}", e1, e2.value);
        assert!(e2.bookkeeping_residual() < 1e-12);
    }

    #[test]
    fn constant_path_has_zero_energy() {
        let path = PotentialPath::sample(4, |_| Ok(bump(32, 0.05))).unwrap();
        assert!(k_energy_kempf1(&path).unwrap().abs() < 1e-14);
    }
}
