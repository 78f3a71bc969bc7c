//! Seeded random sampling of algebra elements, group elements and points.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hamiltonian::{ProjectivePoint, TangentVector};
use crate::lie::{group_exp, AlgebraElement, GroupElement, KleinPair};
use crate::linalg::{c, CVec};

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn combine(pair: &KleinPair, basis: &[AlgebraElement], coeffs: &[f64]) -> AlgebraElement {
    let n = pair.size();
    let mut acc = AlgebraElement::zero(basis.first().map(|b| b.tag()).unwrap_or(pair.compact_tag()));
    if n == 0 {
        return acc;
    }
    for (b, &x) in basis.iter().zip(coeffs) {
        acc = acc.add(&b.scale(x)).expect("basis elements share a size");
    }
    acc
}

/// Gaussian element of 𝔤 rescaled to Frobenius norm `radius`.
pub fn g_element<R: Rng + ?Sized>(pair: &KleinPair, radius: f64, rng: &mut R) -> AlgebraElement {
    let basis = pair.g_basis();
    let coeffs: Vec<f64> = basis.iter().map(|_| normal(rng)).collect();
    let x = combine(pair, &basis, &coeffs);
    let n = x.norm();
    if n > 0.0 { x.scale(radius / n) } else { x }
}

/// Gaussian element of `i𝔪` rescaled to norm `radius`.
pub fn im_element<R: Rng + ?Sized>(pair: &KleinPair, radius: f64, rng: &mut R) -> AlgebraElement {
    let basis = pair.im_basis();
    let coeffs: Vec<f64> = basis.iter().map(|_| normal(rng)).collect();
    let x = combine(pair, &basis, &coeffs);
    let n = x.norm();
    if n > 0.0 { x.scale(radius / n) } else { x }
}

/// Gaussian element of `𝔞` rescaled to norm `radius`.
pub fn a_element<R: Rng + ?Sized>(pair: &KleinPair, radius: f64, rng: &mut R) -> AlgebraElement {
    let basis = pair.a_basis();
    let coeffs: Vec<f64> = basis.iter().map(|_| normal(rng)).collect();
    let x = combine(pair, &basis, &coeffs);
    let n = x.norm();
    if n > 0.0 { x.scale(radius / n) } else { x }
}

/// `exp` of a random element of 𝔤; covers the connected compact group.
pub fn compact_group_element<R: Rng + ?Sized>(pair: &KleinPair, rng: &mut R) -> Result<GroupElement> {
    let r = 3.0 * rng.random::<f64>();
    group_exp(&g_element(pair, r, rng))
}

/// Product of three exponentials of random elements of 𝔞 with norm at most `radius`.
pub fn complex_group_element<R: Rng + ?Sized>(
    pair: &KleinPair,
    radius: f64,
    rng: &mut R,
) -> Result<GroupElement> {
    let mut g = GroupElement::identity(pair.complex_group_tag());
    for _ in 0..3 {
        let r = radius * rng.random::<f64>();
        g = group_exp(&a_element(pair, r, rng))?.mul(&g)?;
    }
    Ok(g)
}

pub fn complex_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| c(normal(rng), normal(rng)))
}

pub fn point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProjectivePoint {
    loop {
        if let Ok(p) = ProjectivePoint::new(complex_vector(n, rng)) {
            return p;
        }
    }
}

pub fn tangent<R: Rng + ?Sized>(m: &ProjectivePoint, rng: &mut R) -> TangentVector {
    TangentVector::new(m, complex_vector(m.dim(), rng)).expect("dimensions agree")
}
