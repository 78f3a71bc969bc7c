//! Linear unitary actions on projective space and their momentum maps.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{adjoint, AlgebraElement, GroupElement, KleinPair};
use crate::linalg::{c, fro_norm, hermitian_part, inner, is_finite, vec_norm, CMat, CVec, I};
use crate::tolerances::FD_STEP;

/// Integer weights `λ_k ∈ ℤ^r`, one row per coordinate of `ℂⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: usize,
    rank: usize,
    data: Vec<i32>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<i32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Config("weight matrix needs at least one row".into()));
        }
        let r = rows[0].len();
        if r == 0 || rows.iter().any(|w| w.len() != r) {
            return Err(Error::Shape("weight rows must share a positive length".into()));
        }
        Ok(WeightMatrix { rows: n, rank: r, data: rows.concat() })
    }

    /// Rank-one torus with the given scalar weights.
    pub fn scalar(ws: &[i32]) -> Result<Self> {
        WeightMatrix::new(ws.iter().map(|&w| alloc::vec![w]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self, k: usize) -> &[i32] {
        &self.data[k * self.rank..(k + 1) * self.rank]
    }

    /// `⟨λ_k, x⟩`.
    pub fn pair(&self, k: usize, x: &[f64]) -> f64 {
        self.weight(k).iter().zip(x).map(|(&w, &y)| w as f64 * y).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    /// The defining representation on `ℂⁿ`.
    Defining,
    /// A diagonal torus representation with integer weights.
    Weights(WeightMatrix),
}

/// A point of `ℙ(ℂⁿ)` stored as a unit representative with a fixed phase.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    v: CVec,
}

impl ProjectivePoint {
    pub fn new(v: CVec) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("projective representative is not finite".into()));
        }
        let n = vec_norm(&v);
        if n < 1e-300 {
            return Err(Error::Domain("the zero vector has no projective class".into()));
        }
        let mut v = v.unscale(n);
        let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(z) = v.iter().find(|z| z.norm() > 1e-12 * big).copied() {
            let phase = z.conj() / z.norm();
            v *= phase;
        }
        Ok(ProjectivePoint { v })
    }

    pub fn from_slice(zs: &[Complex64]) -> Result<Self> {
        ProjectivePoint::new(CVec::from_row_slice(zs))
    }

    pub fn from_real(xs: &[f64]) -> Result<Self> {
        ProjectivePoint::new(CVec::from_iterator(xs.len(), xs.iter().map(|&x| c(x, 0.0))))
    }

    pub fn vector(&self) -> &CVec {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Fubini-Study closeness: `1 - |⟨v, w⟩|`.
    pub fn distance_like(&self, other: &ProjectivePoint) -> f64 {
        1.0 - inner(&self.v, &other.v).norm()
    }

    /// Projection of `w` onto the horizontal space `v^⊥`.
    pub fn horizontal(&self, w: &CVec) -> CVec {
        w - &self.v * inner(&self.v, w)
    }
}

/// A tangent vector at `[v]`, represented horizontally in `v^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    base: ProjectivePoint,
    w: CVec,
}

impl TangentVector {
    pub fn new(base: &ProjectivePoint, w: CVec) -> Result<Self> {
        if w.len() != base.dim() {
            return Err(Error::Shape("tangent vector dimension differs from its base".into()));
        }
        if !w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Numeric("tangent vector is not finite".into()));
        }
        Ok(TangentVector { w: base.horizontal(&w), base: base.clone() })
    }

    pub fn base(&self) -> &ProjectivePoint {
        &self.base
    }

    pub fn vector(&self) -> &CVec {
        &self.w
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector { base: self.base.clone(), w: self.w.scale(s) }
    }

    fn check_base(&self, other: &TangentVector) -> Result<()> {
        if vec_norm(&(self.base.vector() - other.base.vector())) > 1e-10 {
            return Err(Error::Domain("tangent vectors live at different points".into()));
        }
        Ok(())
    }
}

/// Fubini-Study symplectic form `ω(X, Y) = 2 Im⟨X, Y⟩`.
pub fn symplectic_form(x: &TangentVector, y: &TangentVector) -> Result<f64> {
    x.check_base(y)?;
    Ok(2.0 * inner(&x.w, &y.w).im)
}

/// Riemannian metric `g(X, Y) = ω(X, jY) = 2 Re⟨X, Y⟩`.
pub fn metric(x: &TangentVector, y: &TangentVector) -> Result<f64> {
    x.check_base(y)?;
    Ok(2.0 * inner(&x.w, &y.w).re)
}

/// The complex structure, multiplication by `i` on horizontal vectors.
pub fn complex_structure(x: &TangentVector) -> TangentVector {
    TangentVector { base: x.base.clone(), w: x.w.map(|z| z * I) }
}

/// An element of 𝔤 identified with 𝔤* through the invariant pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumCovector {
    value: AlgebraElement,
}

impl MomentumCovector {
    pub fn value(&self) -> &AlgebraElement {
        &self.value
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// A unitary linear action of `G` (and of `Gᶜ`) on `ℙ(ℂⁿ)`.
#[derive(Clone, Debug)]
pub struct LinearAction {
    pair: KleinPair,
    rep: Representation,
    dim: usize,
}

impl LinearAction {
    pub fn new(pair: KleinPair, rep: Representation) -> Result<Self> {
        let dim = match &rep {
            Representation::Defining => pair.size(),
            Representation::Weights(w) => {
                if !pair.is_torus() {
                    return Err(Error::Unsupported("weight representations need a torus".into()));
                }
                if w.rank() != pair.size() {
                    return Err(Error::Shape(format!(
                        "weights of rank {} for a torus of rank {}",
                        w.rank(),
                        pair.size()
                    )));
                }
                w.rows()
            }
        };
        let action = LinearAction { pair, rep, dim };
        for b in action.pair.g_basis() {
            let r = action.rep_algebra(b.matrix());
            if fro_norm(&hermitian_part(&r)) > 1e-12 {
                return Err(Error::Unsupported("representation is not unitary".into()));
            }
        }
        Ok(action)
    }

    /// `SL(2)` or `SU(n)` style defining action.
    pub fn defining(pair: KleinPair) -> Result<Self> {
        LinearAction::new(pair, Representation::Defining)
    }

    pub fn torus(weights: WeightMatrix) -> Result<Self> {
        let pair = KleinPair::torus(weights.rank())?;
        LinearAction::new(pair, Representation::Weights(weights))
    }

    pub fn pair(&self) -> &KleinPair {
        &self.pair
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of an algebra matrix; complex-linear in its argument.
    pub fn rep_algebra(&self, x: &CMat) -> CMat {
        match &self.rep {
            Representation::Defining => x.clone(),
            Representation::Weights(w) => {
                let mut d = CMat::zeros(self.dim, self.dim);
                for k in 0..self.dim {
                    let mut z = c(0.0, 0.0);
                    for (j, &wj) in w.weight(k).iter().enumerate() {
                        z += x[(j, j)] * wj as f64;
                    }
                    d[(k, k)] = z;
                }
                d
            }
        }
    }

    /// Image of a group matrix.
    pub fn rep_group(&self, a: &CMat) -> CMat {
        match &self.rep {
            Representation::Defining => a.clone(),
            Representation::Weights(w) => {
                let mut d = CMat::zeros(self.dim, self.dim);
                for k in 0..self.dim {
                    let mut z = c(1.0, 0.0);
                    for (j, &wj) in w.weight(k).iter().enumerate() {
                        z *= a[(j, j)].powi(wj);
                    }
                    d[(k, k)] = z;
                }
                d
            }
        }
    }

    fn check_point(&self, m: &ProjectivePoint) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::Shape(format!(
                "point in dimension {} for an action on dimension {}",
                m.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    fn check_algebra(&self, x: &AlgebraElement) -> Result<()> {
        if x.size() != self.pair.size() {
            return Err(Error::Shape("algebra element has the wrong size".into()));
        }
        Ok(())
    }

    /// `g · [v]` for any element of `Gᶜ`.
    pub fn act(&self, g: &GroupElement, m: &ProjectivePoint) -> Result<ProjectivePoint> {
        self.check_point(m)?;
        if g.size() != self.pair.size() {
            return Err(Error::Shape("group element has the wrong size".into()));
        }
        ProjectivePoint::new(self.rep_group(g.matrix()) * m.vector())
    }

    /// Fundamental vector field `ξ.m` (also for complex `ξ`).
    pub fn inf_action(&self, xi: &AlgebraElement, m: &ProjectivePoint) -> Result<TangentVector> {
        self.check_point(m)?;
        self.check_algebra(xi)?;
        let w = self.rep_algebra(xi.matrix()) * m.vector();
        TangentVector::new(m, w)
    }

    /// `κ(J([v]), ξ) = Im⟨v, ρ(ξ) v⟩` for `ξ ∈ 𝔤`.
    pub fn momentum_pairing(&self, m: &ProjectivePoint, xi: &CMat) -> f64 {
        let v = m.vector();
        inner(v, &(self.rep_algebra(xi) * v)).im
    }

    pub fn momentum(&self, m: &ProjectivePoint) -> Result<MomentumCovector> {
        self.check_point(m)?;
        let n = self.pair.size();
        let mut j = CMat::zeros(n, n);
        for b in self.pair.g_basis() {
            j += b.matrix().scale(self.momentum_pairing(m, b.matrix()));
        }
        Ok(MomentumCovector { value: AlgebraElement::raw(j, self.pair.compact_tag()) })
    }

    /// Momentum as a bare matrix, skipping validation.
    pub(crate) fn momentum_matrix(&self, v: &CVec) -> CMat {
        let n = self.pair.size();
        let nv = vec_norm(v);
        let u = v.unscale(nv);
        let mut j = CMat::zeros(n, n);
        for b in self.pair.g_basis() {
            let p = inner(&u, &(self.rep_algebra(b.matrix()) * &u)).im;
            j += b.matrix().scale(p);
        }
        j
    }

    /// `|ω(ξ.m, X) + κ(dJ(X), ξ)|`, with `dJ(X)` by central differences.
    pub fn momentum_defect(
        &self,
        m: &ProjectivePoint,
        xi: &AlgebraElement,
        x: &TangentVector,
    ) -> Result<f64> {
        self.check_point(m)?;
        if !self.pair.contains_g(xi) {
            return Err(Error::Domain("momentum defect needs ξ in the compact algebra".into()));
        }
        if vec_norm(&(x.base().vector() - m.vector())) > 1e-10 {
            return Err(Error::Domain("tangent vector is not based at m".into()));
        }
        let h = FD_STEP;
        let v = m.vector();
        let plus = ProjectivePoint::new(v + x.vector().scale(h))?;
        let minus = ProjectivePoint::new(v - x.vector().scale(h))?;
        let dj = (self.momentum_pairing(&plus, xi.matrix()) - self.momentum_pairing(&minus, xi.matrix()))
            / (2.0 * h);
        let om = symplectic_form(&self.inf_action(xi, m)?, x)?;
        Ok((om + dj).abs())
    }

    /// `σ(g, m) = J(g·m) − Ad_g J(m)` for `g ∈ G`.
    pub fn cocycle_sigma(&self, g: &GroupElement, m: &ProjectivePoint) -> Result<MomentumCovector> {
        if !g.tag().is_compact() {
            return Err(Error::Domain("the cocycle is defined on the compact group".into()));
        }
        let gm = self.act(g, m)?;
        let jg = self.momentum(&gm)?;
        let j = self.momentum(m)?;
        let adj = adjoint(g, j.value())?;
        let diff = jg.value().sub(&adj)?;
        if !is_finite(diff.matrix()) {
            return Err(Error::Numeric("cocycle is not finite".into()));
        }
        Ok(MomentumCovector { value: diff })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{AlgebraTag, GroupTag};
    use crate::linalg::expm;

    fn sl2() -> LinearAction {
        LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap()
    }

    #[test]
    fn momentum_at_north_pole() {
        // J([1:0]) is the trace-free part of i e₁e₁†
        let act = sl2();
        let m = ProjectivePoint::from_real(&[1.0, 0.0]).unwrap();
        let j = act.momentum(&m).unwrap();
        let want = CMat::from_row_slice(2, 2, &[c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -0.5)]);
        assert!(fro_norm(&(j.value().matrix() - want)) < 1e-14);
    }

    #[test]
    fn torus_momentum_is_weighted_moment() {
        let w = WeightMatrix::scalar(&[1, -1]).unwrap();
        let act = LinearAction::torus(w).unwrap();
        let m = ProjectivePoint::from_real(&[3f64.sqrt(), 1.0]).unwrap();
        let j = act.momentum(&m).unwrap();
        assert!((j.value().matrix()[(0, 0)] - c(0.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn defect_vanishes_for_fubini_study() {
        let act = sl2();
        let m = ProjectivePoint::from_slice(&[c(0.3, 0.2), c(-0.5, 0.9)]).unwrap();
        let xi = act.pair().g_basis()[2].clone();
        let x = TangentVector::new(&m, CVec::from_row_slice(&[c(0.1, -0.7), c(0.4, 0.2)])).unwrap();
        assert!(act.momentum_defect(&m, &xi, &x).unwrap() < 1e-9);
    }

    #[test]
    fn sigma_vanishes() {
        let act = sl2();
        let m = ProjectivePoint::from_slice(&[c(0.3, 0.2), c(-0.5, 0.9)]).unwrap();
        let x = act.pair().g_basis()[1].scale(0.8);
        let g = GroupElement::new(expm(x.matrix()).unwrap(), GroupTag::SpecialUnitary(2)).unwrap();
        assert!(act.cocycle_sigma(&g, &m).unwrap().norm() < 1e-14);
    }

    #[test]
    fn rejects_weights_on_non_torus() {
        let w = WeightMatrix::scalar(&[1, -1]).unwrap();
        let r = LinearAction::new(KleinPair::sl_su(2).unwrap(), Representation::Weights(w));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn different_bases_are_rejected() {
        let a = ProjectivePoint::from_real(&[1.0, 0.0]).unwrap();
        let b = ProjectivePoint::from_real(&[0.0, 1.0]).unwrap();
        let x = TangentVector::new(&a, CVec::from_row_slice(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let y = TangentVector::new(&b, CVec::from_row_slice(&[c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        assert!(matches!(symplectic_form(&x, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn complex_elements_act() {
        let act = sl2();
        let m = ProjectivePoint::from_real(&[1.0, 1.0]).unwrap();
        let h = AlgebraElement::new(
            CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
            AlgebraTag::SpecialLinear(2),
        )
        .unwrap();
        let t = act.inf_action(&h, &m).unwrap();
        assert!((t.vector()[0] - c(0.5 * 2f64.sqrt(), 0.0)).norm() < 1e-14);
    }
}
