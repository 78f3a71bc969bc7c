//! The generalized Futaki character, the stabilizer form and extremal elements.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::{BundlePoint, CartanBundle, StabilizerBasis};
use crate::error::{Error, Result};
use crate::lie::{bracket, kappa_a, AlgebraElement};
use crate::linalg::{inverse, vec_norm};
use crate::sample;
use crate::tolerances::CONDITION_LIMIT;

/// Sampled values of `F̃_ζ` over the bundle.
#[derive(Clone, Debug)]
pub struct FutakiReport {
    pub zeta: AlgebraElement,
    pub samples: Vec<(BundlePoint, f64)>,
    pub mean: f64,
    /// `max − min` of the sampled values.
    pub spread: f64,
}

/// Symmetric form on 𝔪 in the trace-orthonormal basis of 𝔪.
#[derive(Clone, Debug, PartialEq)]
pub struct MForm {
    matrix: DMatrix<f64>,
}

impl MForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Config("form matrix must be square".into()));
        }
        let asym = (&matrix - matrix.transpose()).norm();
        if asym > 1e-12 * matrix.norm().max(1.0) || matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("form on 𝔪 must be finite and symmetric".into()));
        }
        Ok(MForm { matrix })
    }

    /// The trace form `κ` restricted to 𝔪.
    pub fn trace(bundle: &CartanBundle) -> Self {
        let k = bundle.pair().m_basis().len();
        MForm { matrix: DMatrix::identity(k, k) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Gram matrix of `Ξ` on a stabilizer basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerForm {
    pub matrix: DMatrix<f64>,
    pub base_samples: usize,
}

/// `Ξ(x, y) = Q(Im x, Im y)`; vanishes on 𝔤 by construction.
pub fn xi_pairing(bundle: &CartanBundle, form: &MForm, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    let pair = bundle.pair();
    if form.matrix.nrows() != pair.m_basis().len() {
        return Err(Error::Config("form size does not match dim 𝔪".into()));
    }
    let (_, x2) = pair.split(x)?;
    let (_, y2) = pair.split(y)?;
    let cx = DVector::from_vec(pair.m_coords(x2.matrix()));
    let cy = DVector::from_vec(pair.m_coords(y2.matrix()));
    Ok(cx.dot(&(&form.matrix * cy)))
}

fn check_stabilizer(bundle: &CartanBundle, zeta: &AlgebraElement) -> Result<()> {
    if !bundle.pair().contains_a(zeta) {
        return Err(Error::Domain("ζ is not in 𝔞".into()));
    }
    let t = bundle.action().inf_action(zeta, bundle.base())?;
    if vec_norm(t.vector()) > 1e-8 * zeta.norm().max(1.0) {
        return Err(Error::Domain("ζ does not stabilize the base point".into()));
    }
    Ok(())
}

/// `θ_p(p·ζ) = λ(a ζ a⁻¹)` for the right stabilizer action.
fn transported(bundle: &CartanBundle, p: &BundlePoint, zeta: &AlgebraElement) -> Result<AlgebraElement> {
    let a = p.matrix();
    let x = a * zeta.matrix() * inverse(a)?;
    let y = bundle.twist().apply(bundle.pair(), &x)?;
    Ok(AlgebraElement::raw(y, bundle.pair().ambient_tag()))
}

/// `F̃_ζ(p) = κ_𝔞(J(χ(p)), θ_p(p·ζ))`.
pub fn futaki_tilde(bundle: &CartanBundle, p: &BundlePoint, zeta: &AlgebraElement) -> Result<f64> {
    check_stabilizer(bundle, zeta)?;
    let j = bundle.momentum_at(p)?;
    kappa_a(bundle.pair(), &j, &transported(bundle, p, zeta)?)
}

/// Samples `F̃_ζ` at products of three exponentials of norm at most `radius`.
pub fn futaki_constancy(
    bundle: &CartanBundle,
    zeta: &AlgebraElement,
    n_samples: usize,
    radius: f64,
    seed: u64,
) -> Result<FutakiReport> {
    bundle.require_certified()?;
    check_stabilizer(bundle, zeta)?;
    if n_samples == 0 || !(radius >= 0.0) {
        return Err(Error::Config("constancy sweep needs samples and a non-negative radius".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let a = sample::complex_group_element(bundle.pair(), radius, &mut rng)?;
        let p = BundlePoint::new(a);
        let f = futaki_tilde(bundle, &p, zeta)?;
        samples.push((p, f));
    }
    let (lo, hi, sum) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, s), (_, f)| {
        (lo.min(*f), hi.max(*f), s + f)
    });
    Ok(FutakiReport { zeta: zeta.clone(), mean: sum / n_samples as f64, spread: hi - lo, samples })
}

/// Mean of `|F̃_{[ζ, η]}|` over the identity and nine sampled points.
pub fn character_defect(bundle: &CartanBundle, zeta: &AlgebraElement, eta: &AlgebraElement) -> Result<f64> {
    check_stabilizer(bundle, zeta)?;
    check_stabilizer(bundle, eta)?;
    let br = bracket(zeta, eta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a7);
    let mut total = futaki_tilde(bundle, &bundle.identity_point(), &br)?.abs();
    for _ in 0..9 {
        let p = BundlePoint::new(sample::complex_group_element(bundle.pair(), 1.0, &mut rng)?);
        total += futaki_tilde(bundle, &p, &br)?.abs();
    }
    Ok(total / 10.0)
}

/// `Ξ_p(ζᵢ, ζⱼ) = Ξ(θ_p(p·ζᵢ), θ_p(p·ζⱼ))`.
pub fn xi_form(
    bundle: &CartanBundle,
    p: &BundlePoint,
    basis: &StabilizerBasis,
    form: &MForm,
) -> Result<StabilizerForm> {
    let k = basis.dim();
    let moved: Vec<AlgebraElement> = basis
        .elements
        .iter()
        .map(|z| transported(bundle, p, z))
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = xi_pairing(bundle, form, &moved[i], &moved[j])?;
        }
    }
    Ok(StabilizerForm { matrix: m, base_samples: 1 })
}

/// Largest entrywise spread of `Ξ_p` over `n_points` random base points.
pub fn xi_form_spread(
    bundle: &CartanBundle,
    basis: &StabilizerBasis,
    form: &MForm,
    n_points: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = xi_form(bundle, &bundle.identity_point(), basis, form)?;
    let mut worst: f64 = 0.0;
    for _ in 0..n_points {
        let p = BundlePoint::new(sample::complex_group_element(bundle.pair(), 1.0, &mut rng)?);
        let f = xi_form(bundle, &p, basis, form)?;
        worst = worst.max((f.matrix - &reference.matrix).amax());
    }
    Ok(worst)
}

/// Futaki values at the identity on the stabilizer basis.
pub fn futaki_vector(bundle: &CartanBundle, basis: &StabilizerBasis) -> Result<Vec<f64>> {
    let e = bundle.identity_point();
    basis.elements.iter().map(|z| futaki_tilde(bundle, &e, z)).collect()
}

/// Solves `Ξ_m(ζ_m, ζᵢ) = F_{ζᵢ}` for `ζ_m` in the stabilizer span.
///
/// Directions on which the form degenerates must carry zero Futaki value;
/// the solution is taken orthogonal to them.
pub fn extremal_element(
    bundle: &CartanBundle,
    basis: &StabilizerBasis,
    form: &StabilizerForm,
) -> Result<AlgebraElement> {
    let k = basis.dim();
    if form.matrix.nrows() != k || form.matrix.ncols() != k {
        return Err(Error::Shape("form size differs from the stabilizer basis".into()));
    }
    let f = DVector::from_vec(futaki_vector(bundle, basis)?);
    let eig = form.matrix.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let mut coeffs = DVector::zeros(k);
    let mut smallest = f64::INFINITY;
    for i in 0..k {
        let lam = eig.eigenvalues[i];
        let u = eig.eigenvectors.column(i);
        let fu = u.dot(&f);
        if lam.abs() <= 1e-12 * scale.max(1e-300) || scale == 0.0 {
            if fu.abs() > 1e-8 {
                return Err(Error::Degenerate(alloc::format!(
                    "form is degenerate along a direction with Futaki value {:e}",
                    fu
                )));
            }
            continue;
        }
        smallest = smallest.min(lam.abs());
        coeffs += u * (fu / lam);
    }
    if smallest.is_finite() && scale / smallest > CONDITION_LIMIT {
        return Err(Error::Degenerate(alloc::format!(
            "condition number {:e} exceeds the limit",
            scale / smallest
        )));
    }
    let mut z = AlgebraElement::zero(bundle.pair().ambient_tag());
    for (b, &c) in basis.elements.iter().zip(coeffs.iter()) {
        z = z.add(&b.scale(c))?;
    }
    Ok(AlgebraElement::raw(z.matrix().clone(), bundle.pair().ambient_tag()))
}

/// Largest `|F_{ζᵢ} − Ξ_m(ζ_m, ζᵢ)|` over the basis.
pub fn extremal_residual(
    bundle: &CartanBundle,
    basis: &StabilizerBasis,
    form: &MForm,
    zeta_m: &AlgebraElement,
) -> Result<f64> {
    let f = futaki_vector(bundle, basis)?;
    let mut worst: f64 = 0.0;
    for (z, fz) in basis.elements.iter().zip(f) {
        worst = worst.max((fz - xi_pairing(bundle, form, zeta_m, z)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{LinearAction, ProjectivePoint, WeightMatrix};
    use crate::lie::{AlgebraTag, KleinPair};
    use crate::linalg::{c, CMat};
    use crate::tolerances::STABILIZER_CUTOFF;

    fn sl2_north() -> CartanBundle {
        let act = LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap();
        let mut b = CartanBundle::new(act, ProjectivePoint::from_real(&[1.0, 0.0]).unwrap()).unwrap();
        b.certify(8, 2).unwrap();
        b
    }

    fn sl(m: [f64; 4]) -> AlgebraElement {
        AlgebraElement::new(
            CMat::from_row_slice(2, 2, &[c(m[0], 0.0), c(m[1], 0.0), c(m[2], 0.0), c(m[3], 0.0)]),
            AlgebraTag::SpecialLinear(2),
        )
        .unwrap()
    }

    #[test]
    fn golden_value_on_the_borel() {
        let b = sl2_north();
        let h = sl([1.0, 0.0, 0.0, -1.0]);
        let f = futaki_tilde(&b, &b.identity_point(), &h).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        let e = sl([0.0, 1.0, 0.0, 0.0]);
        assert!(futaki_tilde(&b, &b.identity_point(), &e).unwrap().abs() < 1e-12);
    }

    #[test]
    fn outside_stabilizer_is_rejected() {
        let b = sl2_north();
        let f = sl([0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(futaki_tilde(&b, &b.identity_point(), &f), Err(Error::Domain(_))));
    }

    #[test]
    fn constancy_on_sl2() {
        let b = sl2_north();
        let r = futaki_constancy(&b, &sl([1.0, 0.0, 0.0, -1.0]), 20, 1.0, 9).unwrap();
        assert!(r.spread < 1e-9, "{}", r.spread);
    }

    #[test]
    fn extremal_on_torus_fixed_point() {
        let act = LinearAction::torus(WeightMatrix::scalar(&[1, -1]).unwrap()).unwrap();
        let mut b = CartanBundle::new(act, ProjectivePoint::from_real(&[1.0, 0.0]).unwrap()).unwrap();
        b.certify(4, 3).unwrap();
        let basis = b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF).unwrap();
        let mform = MForm::trace(&b);
        let form = xi_form(&b, &b.identity_point(), &basis, &mform).unwrap();
        let z = extremal_element(&b, &basis, &form).unwrap();
        assert!((z.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(extremal_residual(&b, &basis, &mform, &z).unwrap() < 1e-12);
    }

    #[test]
    fn asymmetric_form_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(MForm::new(m), Err(Error::Config(_))));
    }
}
