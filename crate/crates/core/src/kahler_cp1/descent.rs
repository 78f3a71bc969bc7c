//! Preconditioned descent of the K-energy towards constant scalar curvature.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use super::{k_energy_chentian, scalar_curvature, SymplecticPotential1D};
use crate::error::{Error, Result};
use crate::quadrature::simpson_weights;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentRecord {
    pub iter: usize,
    pub energy: f64,
    /// `‖S − S₀‖∞`.
    pub sup_defect: f64,
}

#[derive(Clone, Debug)]
pub struct DescentTrajectory {
    pub records: Vec<DescentRecord>,
    pub potential: SymplecticPotential1D,
    pub converged: bool,
}

/// Largest number of Legendre modes spanning the update directions.
pub const DESCENT_MODES: usize = 16;

/// Values and second derivatives of `(1 − x²) P_k(x)`, `P_k` the Legendre
/// polynomials; these vanish at the poles, which fixes the affine gauge.
fn basis(xs: &[f64], modes: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut val = alloc::vec![alloc::vec![0.0; xs.len()]; modes];
    let mut dd = alloc::vec![alloc::vec![0.0; xs.len()]; modes];
    for (i, &x) in xs.iter().enumerate() {
        let (mut p, mut dp, mut ddp) = ([1.0, x], [0.0, 1.0], [0.0, 0.0]);
        for k in 0..modes {
            let (pk, dpk, ddpk) = (p[0], dp[0], ddp[0]);
            val[k][i] = (1.0 - x * x) * pk;
            dd[k][i] = -2.0 * pk - 4.0 * x * dpk + (1.0 - x * x) * ddpk;
            let kk = (k + 1) as f64;
            let next = ((2.0 * kk + 1.0) * x * p[1] - kk * p[0]) / (kk + 1.0);
            let dnext = dp[0] + (2.0 * kk + 1.0) * p[1];
            let ddnext = ddp[0] + (2.0 * kk + 1.0) * dp[1];
            p = [p[1], next];
            dp = [dp[1], dnext];
            ddp = [ddp[1], ddnext];
        }
    }
    (val, dd)
}

/// Descends `E` along `s ← s − τ w`, with `w` the Newton direction of the
/// K-energy restricted to the span of [`DESCENT_MODES`] smooth modes:
/// `⟨w, φ⟩_H = ∫ (S − S₀) φ` for the Hessian `H(w, φ) = ∫ ψ² w″ φ″`.
/// `τ` starts at `step` and is halved until `E` decreases.
pub fn k_energy_descent(
    u0: &SymplecticPotential1D,
    step: f64,
    iters: usize,
    tol: f64,
) -> Result<DescentTrajectory> {
    if !(step > 0.0) || !(tol > 0.0) {
        return Err(Error::Config("descent needs a positive step and tolerance".into()));
    }
    let n = u0.intervals();
    let h = u0.spacing();
    let quad = simpson_weights(n, h)?;
    let xs = u0.nodes();
    // the zeros of P_K crowd the poles at spacing ~5/K²; keep them resolved
    let modes = DESCENT_MODES.min(((5.0 / (4.0 * h)).sqrt()) as usize).max(2);
    let (phi, phi2) = basis(&xs, modes);
    let mut u = u0.clone();
    let mut energy = k_energy_chentian(&u)?.value;
    let mut records = Vec::new();
    for iter in 0..=iters {
        let sc = scalar_curvature(&u)?;
        let defect = sc.sup_defect();
        records.push(DescentRecord { iter, energy, sup_defect: defect });
        if defect < tol {
            return Ok(DescentTrajectory { records, potential: u, converged: true });
        }
        if iter == iters {
            break;
        }
        let psi2: Vec<f64> = xs
            .iter()
            .zip(u.weighted_hessian())
            .map(|(x, q)| ((1.0 - x * x) / q).powi(2))
            .collect();
        let hess = DMatrix::from_fn(modes, modes, |k, l| {
            (0..=n).map(|i| quad[i] * psi2[i] * phi2[k][i] * phi2[l][i]).sum::<f64>()
        });
        let grad = DVector::from_fn(modes, |k, _| {
            (0..=n).map(|i| quad[i] * phi[k][i] * (sc.values[i] - sc.average)).sum::<f64>()
        });
        let coef = hess
            .cholesky()
            .ok_or_else(|| Error::Singular("K-energy Hessian is not positive definite".into()))?
            .solve(&grad);
        let w: Vec<f64> = (0..=n).map(|i| (0..modes).map(|k| coef[k] * phi[k][i]).sum()).collect();
        let mut tau = step;
        loop {
            let s: Vec<f64> = u.correction().iter().zip(&w).map(|(s, w)| s - tau * w).collect();
            if let Ok(cand) = SymplecticPotential1D::new(s) {
                if let Ok(e) = k_energy_chentian(&cand) {
                    // equal within round-off still counts as progress
                    let slack = 1e-14 * (e.entropy.abs() + e.energy.abs() + e.ricci.abs());
                    if e.value < energy || (e.value <= energy + slack && tau == step) {
                        u = cand;
                        energy = e.value;
                        break;
                    }
                }
            }
            tau *= 0.5;
            if tau < 1e-12 * step {
                return Err(Error::LineSearch(alloc::format!(
                    "no decrease of the K-energy at iteration {} (defect {:e})",
                    iter, defect
                )));
            }
        }
    }
    Ok(DescentTrajectory { records, potential: u, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_metric_is_a_fixed_point() {
        let u = SymplecticPotential1D::fubini_study(64).unwrap();
        let tr = k_energy_descent(&u, 1.0, 10, 1e-6).unwrap();
        assert!(tr.converged);
        assert_eq!(tr.records.len(), 1);
    }

    #[test]
    fn bump_relaxes_to_constant_curvature() {
        let u = SymplecticPotential1D::from_fn(256, |x| 0.05 * (1.0 - x * x).powi(2)).unwrap();
        let tr = k_energy_descent(&u, 1.0, 50, 1e-3).unwrap();
        assert!(tr.converged, "{:?}", tr.records.last());
        assert!(tr.records.windows(2).all(|w| w[1].energy < w[0].energy));
    }
}
