//! S¹-invariant Kähler metrics on CP¹ in the moment coordinate `x ∈ [−1, 1]`.
//!
//! A metric is encoded by its symplectic potential `u = u_G + s`, where
//! `u_G` is the Fubini-Study potential and `s` is smooth up to the boundary.

mod descent;
mod energy;
mod legendre;

pub use descent::{k_energy_descent, DescentRecord, DescentTrajectory};
pub use energy::{k_energy_chentian, k_energy_kempf1, KEnergyValue, PotentialPath};
pub use legendre::{geodesic_residual, toric_geodesic, CubicSpline, KahlerPotential1D};

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::simpson;
use crate::stencil::Operator;

/// `u_G(x) = ½[(1+x) ln(1+x) + (1−x) ln(1−x)]`.
pub fn u_fs(x: f64) -> f64 {
    let xlogx = |y: f64| if y <= 0.0 { 0.0 } else { y * y.ln() };
    0.5 * (xlogx(1.0 + x) + xlogx(1.0 - x))
}

/// Symplectic potential sampled on `N + 1` uniform nodes of `[−1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticPotential1D {
    s: Vec<f64>,
}

impl SymplecticPotential1D {
    /// Builds a potential from its smooth part; `N = s.len() − 1` must be even and at least 6.
    pub fn new(s: Vec<f64>) -> Result<Self> {
        let n = s.len().saturating_sub(1);
        if n < 6 || n % 2 != 0 {
            return Err(Error::Config("grid needs an even number N >= 6 of intervals".into()));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("potential has non-finite samples".into()));
        }
        let u = SymplecticPotential1D { s };
        u.validate()?;
        Ok(u)
    }

    pub fn fubini_study(n: usize) -> Result<Self> {
        SymplecticPotential1D::new(alloc::vec![0.0; n + 1])
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 2.0 / n as f64;
        SymplecticPotential1D::new((0..=n).map(|i| f(-1.0 + i as f64 * h)).collect())
    }

    pub fn intervals(&self) -> usize {
        self.s.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.intervals() as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.s.len()).map(|i| -1.0 + i as f64 * h).collect()
    }

    pub fn correction(&self) -> &[f64] {
        &self.s
    }

    /// `u(x_i)` at every node.
    pub fn values(&self) -> Vec<f64> {
        self.nodes().iter().zip(&self.s).map(|(&x, s)| u_fs(x) + s).collect()
    }

    pub fn s_prime(&self) -> Vec<f64> {
        Operator::uniform(self.intervals(), self.spacing(), 1).apply(&self.s)
    }

    pub fn s_second(&self) -> Vec<f64> {
        Operator::uniform(self.intervals(), self.spacing(), 2).apply(&self.s)
    }

    /// `(1 − x²) u″ = 1 + (1 − x²) s″`, which is `1` at the poles.
    pub fn weighted_hessian(&self) -> Vec<f64> {
        self.nodes()
            .iter()
            .zip(self.s_second())
            .map(|(&x, d2)| 1.0 + (1.0 - x * x) * d2)
            .collect()
    }

    /// `u″` at interior nodes; infinite at the poles.
    pub fn u_second(&self) -> Vec<f64> {
        self.nodes()
            .iter()
            .zip(self.weighted_hessian())
            .map(|(&x, q)| if x.abs() >= 1.0 { f64::INFINITY } else { q / (1.0 - x * x) })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        for (i, q) in self.weighted_hessian().iter().enumerate() {
            if !(*q > 0.0) {
                return Err(Error::Domain(format!("potential is not strictly convex at node {}", i)));
            }
        }
        Ok(())
    }

    /// Largest deviation of the boundary weighted Hessian from `1`.
    pub fn guillemin_defect(&self) -> f64 {
        let q = self.weighted_hessian();
        (q[0] - 1.0).abs().max((q[q.len() - 1] - 1.0).abs())
    }

    pub fn combine(&self, other: &Self, a: f64, b: f64) -> Result<Self> {
        if self.s.len() != other.s.len() {
            return Err(Error::Shape("potentials live on different grids".into()));
        }
        SymplecticPotential1D::new(self.s.iter().zip(&other.s).map(|(x, y)| a * x + b * y).collect())
    }
}

/// Sampled scalar curvature and its average.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarCurvature {
    pub values: Vec<f64>,
    /// `S₀ = ½ ∫ S dx`.
    pub average: f64,
}

impl ScalarCurvature {
    pub fn total(&self) -> f64 {
        2.0 * self.average
    }

    pub fn sup_defect(&self) -> f64 {
        self.values.iter().map(|v| (v - self.average).abs()).fold(0.0, f64::max)
    }
}

/// `S = −ψ″` for `ψ = 1/u″ = w/q`, `w = 1 − x²`, `q = 1 + w s″`.
///
/// `ψ″` is expanded by the quotient rule so that every derivative of `s` comes
/// from its own fourth-order stencil; differencing a computed `ψ` again would
/// amplify the one-sided closure error near the poles.
pub fn scalar_curvature(u: &SymplecticPotential1D) -> Result<ScalarCurvature> {
    u.validate()?;
    let n = u.intervals();
    let h = u.spacing();
    let d = |k: usize| Operator::uniform(n, h, k).apply(&u.s);
    let (s2, s3, s4) = (d(2), d(3), d(4));
    let values: Vec<f64> = u
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let w = 1.0 - x * x;
            let q = 1.0 + w * s2[i];
            let q1 = -2.0 * x * s2[i] + w * s3[i];
            let q2 = -2.0 * s2[i] - 4.0 * x * s3[i] + w * s4[i];
            let num = -2.0 * x * q - w * q1;
            let psi2 = (-2.0 * q - w * q2) / (q * q) - 2.0 * q1 * num / (q * q * q);
            -psi2
        })
        .collect();
    let average = 0.5 * simpson(&values, h)?;
    Ok(ScalarCurvature { values, average })
}

/// `F = −∫ (S − S₀) x dx`, the Futaki invariant paired with the rotation.
pub fn futaki_cp1(u: &SymplecticPotential1D) -> Result<f64> {
    let sc = scalar_curvature(u)?;
    let integrand: Vec<f64> = u
        .nodes()
        .iter()
        .zip(&sc.values)
        .map(|(&x, s)| (s - sc.average) * x)
        .collect();
    Ok(-simpson(&integrand, u.spacing())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_has_constant_curvature() {
        let u = SymplecticPotential1D::fubini_study(64).unwrap();
        let sc = scalar_curvature(&u).unwrap();
        assert!(sc.values.iter().all(|v| (v - 2.0).abs() < 1e-9));
        assert!(futaki_cp1(&u).unwrap().abs() < 1e-12);
    }

    #[test]
    fn total_curvature_is_topological() {
        let u = SymplecticPotential1D::from_fn(256, |x| 0.05 * (1.0 - x * x).powi(2) + 0.02 * x.powi(3))
            .unwrap();
        let sc = scalar_curvature(&u).unwrap();
        assert!((sc.total() - 4.0).abs() < 1e-6);
        assert!(u.guillemin_defect() < 1e-12);
    }

    #[test]
    fn concave_potential_is_rejected() {
        let r = SymplecticPotential1D::from_fn(32, |x| -2.0 * x * x);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn odd_grids_are_rejected() {
        assert!(matches!(SymplecticPotential1D::fubini_study(7), Err(Error::Config(_))));
    }
}
