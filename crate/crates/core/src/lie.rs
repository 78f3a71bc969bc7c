//! Matrix Lie algebras, groups, Klein pairs and the invariant pairing.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    anti_hermitian_part, c, commutator, expm, fro_norm, hermitian_part, hermitian_function,
    identity, inverse, is_finite, trace, CMat, I,
};
use crate::tolerances::{MEMBERSHIP_TOL, STRUCTURE_TOL};

/// Which matrix algebra an element is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraTag {
    /// 𝔲(n), anti-Hermitian matrices.
    Unitary(usize),
    /// 𝔰𝔲(n), traceless anti-Hermitian matrices.
    SpecialUnitary(usize),
    /// 𝔰𝔩(n, ℂ).
    SpecialLinear(usize),
    /// 𝔤𝔩(n, ℂ).
    GeneralLinear(usize),
    /// Compact torus, `i · diag(ℝ^r)`.
    Torus(usize),
    /// Complexified torus, `diag(ℂ^r)`.
    ComplexTorus(usize),
    /// A real form `𝔤 ⊕ i𝔪` sitting inside 𝔤𝔩(n, ℂ).
    Extension(usize),
}

impl AlgebraTag {
    pub fn size(&self) -> usize {
        match *self {
            AlgebraTag::Unitary(n)
            | AlgebraTag::SpecialUnitary(n)
            | AlgebraTag::SpecialLinear(n)
            | AlgebraTag::GeneralLinear(n)
            | AlgebraTag::Torus(n)
            | AlgebraTag::ComplexTorus(n)
            | AlgebraTag::Extension(n) => n,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(
            self,
            AlgebraTag::Unitary(_) | AlgebraTag::SpecialUnitary(_) | AlgebraTag::Torus(_)
        )
    }

    pub fn complexified(&self) -> AlgebraTag {
        match *self {
            AlgebraTag::Unitary(n) => AlgebraTag::GeneralLinear(n),
            AlgebraTag::SpecialUnitary(n) => AlgebraTag::SpecialLinear(n),
            AlgebraTag::Torus(n) => AlgebraTag::ComplexTorus(n),
            other => other,
        }
    }

    /// Smallest tag containing both operands.
    pub fn join(&self, other: &AlgebraTag) -> AlgebraTag {
        use AlgebraTag::*;
        if self == other {
            return *self;
        }
        let n = self.size();
        match (*self, *other) {
            (Unitary(_), SpecialUnitary(_)) | (SpecialUnitary(_), Unitary(_)) => Unitary(n),
            (SpecialUnitary(_), SpecialLinear(_)) | (SpecialLinear(_), SpecialUnitary(_)) => {
                SpecialLinear(n)
            }
            (Torus(_), ComplexTorus(_)) | (ComplexTorus(_), Torus(_)) => ComplexTorus(n),
            (Extension(_), t) | (t, Extension(_)) if t.is_compact() => Extension(n),
            _ => GeneralLinear(n),
        }
    }

    fn validate(&self, m: &CMat) -> Result<()> {
        let n = self.size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Shape(format!(
                "{:?} expects {}x{}, got {}x{}",
                self,
                n,
                n,
                m.nrows(),
                m.ncols()
            )));
        }
        if !is_finite(m) {
            return Err(Error::Numeric("algebra element has non-finite entries".into()));
        }
        let tol = STRUCTURE_TOL * fro_norm(m).max(1.0);
        let herm = fro_norm(&hermitian_part(m));
        let tr = trace(m).norm();
        let off_diag = || {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += m[(i, j)].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };
        let bad = match self {
            AlgebraTag::Unitary(_) => herm > tol,
            AlgebraTag::SpecialUnitary(_) => herm > tol || tr > tol,
            AlgebraTag::SpecialLinear(_) => tr > tol,
            AlgebraTag::GeneralLinear(_) | AlgebraTag::Extension(_) => false,
            AlgebraTag::Torus(_) => herm > tol || off_diag() > tol,
            AlgebraTag::ComplexTorus(_) => off_diag() > tol,
        };
        if bad {
            return Err(Error::Domain(format!("matrix is not in {:?}", self)));
        }
        Ok(())
    }
}

/// Which matrix group an element is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupTag {
    Unitary(usize),
    SpecialUnitary(usize),
    SpecialLinear(usize),
    GeneralLinear(usize),
    Torus(usize),
    ComplexTorus(usize),
}

impl GroupTag {
    pub fn size(&self) -> usize {
        match *self {
            GroupTag::Unitary(n)
            | GroupTag::SpecialUnitary(n)
            | GroupTag::SpecialLinear(n)
            | GroupTag::GeneralLinear(n)
            | GroupTag::Torus(n)
            | GroupTag::ComplexTorus(n) => n,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(
            self,
            GroupTag::Unitary(_) | GroupTag::SpecialUnitary(_) | GroupTag::Torus(_)
        )
    }

    pub fn of_algebra(tag: AlgebraTag) -> GroupTag {
        match tag {
            AlgebraTag::Unitary(n) => GroupTag::Unitary(n),
            AlgebraTag::SpecialUnitary(n) => GroupTag::SpecialUnitary(n),
            AlgebraTag::SpecialLinear(n) => GroupTag::SpecialLinear(n),
            AlgebraTag::GeneralLinear(n) | AlgebraTag::Extension(n) => GroupTag::GeneralLinear(n),
            AlgebraTag::Torus(n) => GroupTag::Torus(n),
            AlgebraTag::ComplexTorus(n) => GroupTag::ComplexTorus(n),
        }
    }

    pub fn join(&self, other: &GroupTag) -> GroupTag {
        use GroupTag::*;
        if self == other {
            return *self;
        }
        let n = self.size();
        match (*self, *other) {
            (Unitary(_), SpecialUnitary(_)) | (SpecialUnitary(_), Unitary(_)) => Unitary(n),
            (SpecialUnitary(_), SpecialLinear(_)) | (SpecialLinear(_), SpecialUnitary(_)) => {
                SpecialLinear(n)
            }
            (Torus(_), ComplexTorus(_)) | (ComplexTorus(_), Torus(_)) => ComplexTorus(n),
            _ => GeneralLinear(n),
        }
    }

    fn validate(&self, m: &CMat) -> Result<()> {
        let n = self.size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Shape(format!("{:?} expects {}x{}", self, n, n)));
        }
        if !is_finite(m) {
            return Err(Error::Numeric("group element has non-finite entries".into()));
        }
        let det = m.determinant();
        if det.norm() < 1e-300 {
            return Err(Error::Singular("group element is not invertible".into()));
        }
        let tol = 1e-9 * fro_norm(m).max(1.0);
        let unitary = || fro_norm(&(m.adjoint() * m - identity(n))) <= tol;
        let unimodular = || (det - c(1.0, 0.0)).norm() <= tol;
        let diagonal = || {
            (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= tol))
        };
        let ok = match self {
            GroupTag::Unitary(_) => unitary(),
            GroupTag::SpecialUnitary(_) => unitary() && unimodular(),
            GroupTag::SpecialLinear(_) => unimodular(),
            GroupTag::GeneralLinear(_) => true,
            GroupTag::Torus(_) => unitary() && diagonal(),
            GroupTag::ComplexTorus(_) => diagonal(),
        };
        if !ok {
            return Err(Error::Domain(format!("matrix is not in {:?}", self)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    matrix: CMat,
    tag: AlgebraTag,
}

impl AlgebraElement {
    pub fn new(matrix: CMat, tag: AlgebraTag) -> Result<Self> {
        tag.validate(&matrix)?;
        Ok(AlgebraElement { matrix, tag })
    }

    pub(crate) fn raw(matrix: CMat, tag: AlgebraTag) -> Self {
        AlgebraElement { matrix, tag }
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        let n = tag.size();
        AlgebraElement { matrix: CMat::zeros(n, n), tag }
    }

    /// `i · diag(xs)`, an element of the compact torus.
    pub fn torus(xs: &[f64]) -> Self {
        let n = xs.len();
        let m = CMat::from_fn(n, n, |i, j| if i == j { c(0.0, xs[i]) } else { c(0.0, 0.0) });
        AlgebraElement { matrix: m, tag: AlgebraTag::Torus(n) }
    }

    /// `diag(zs)`, an element of the complexified torus.
    pub fn complex_torus(zs: &[Complex64]) -> Self {
        let n = zs.len();
        let m = CMat::from_fn(n, n, |i, j| if i == j { zs[i] } else { c(0.0, 0.0) });
        AlgebraElement { matrix: m, tag: AlgebraTag::ComplexTorus(n) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn size(&self) -> usize {
        self.tag.size()
    }

    pub fn norm(&self) -> f64 {
        fro_norm(&self.matrix)
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<AlgebraTag> {
        if self.size() != other.size() {
            return Err(Error::Shape(format!(
                "algebra sizes differ: {} vs {}",
                self.size(),
                other.size()
            )));
        }
        Ok(self.tag.join(&other.tag))
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let tag = self.check_same(other)?;
        Ok(AlgebraElement::raw(&self.matrix + &other.matrix, tag))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        let tag = self.check_same(other)?;
        Ok(AlgebraElement::raw(&self.matrix - &other.matrix, tag))
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement::raw(self.matrix.scale(s), self.tag)
    }

    /// Multiplication by `i`; leaves the compact form.
    pub fn times_i(&self) -> AlgebraElement {
        let tag = match self.tag {
            AlgebraTag::Unitary(n) | AlgebraTag::SpecialUnitary(n) => {
                if matches!(self.tag, AlgebraTag::Unitary(_)) {
                    AlgebraTag::GeneralLinear(n)
                } else {
                    AlgebraTag::SpecialLinear(n)
                }
            }
            AlgebraTag::Torus(n) => AlgebraTag::ComplexTorus(n),
            t => t,
        };
        AlgebraElement::raw(self.matrix.map(|z| z * I), tag)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: CMat,
    tag: GroupTag,
}

impl GroupElement {
    pub fn new(matrix: CMat, tag: GroupTag) -> Result<Self> {
        tag.validate(&matrix)?;
        Ok(GroupElement { matrix, tag })
    }

    pub(crate) fn raw(matrix: CMat, tag: GroupTag) -> Self {
        GroupElement { matrix, tag }
    }

    pub fn identity(tag: GroupTag) -> Self {
        GroupElement { matrix: identity(tag.size()), tag }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn size(&self) -> usize {
        self.tag.size()
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.size() != other.size() {
            return Err(Error::Shape("group sizes differ".into()));
        }
        Ok(GroupElement::raw(&self.matrix * &other.matrix, self.tag.join(&other.tag)))
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        Ok(GroupElement::raw(inverse(&self.matrix)?, self.tag))
    }
}

pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    let tag = x.check_same(y)?;
    Ok(AlgebraElement::raw(commutator(&x.matrix, &y.matrix), tag))
}

pub fn group_exp(x: &AlgebraElement) -> Result<GroupElement> {
    let m = expm(&x.matrix)?;
    Ok(GroupElement::raw(m, GroupTag::of_algebra(x.tag)))
}

/// `Ad_g(x) = g x g⁻¹`.
pub fn adjoint(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    if g.size() != x.size() {
        return Err(Error::Shape("adjoint: sizes differ".into()));
    }
    let ginv = inverse(&g.matrix)?;
    let tag = if g.tag.is_compact() || matches!(x.tag, AlgebraTag::Torus(_)) {
        x.tag
    } else {
        x.tag.complexified()
    };
    Ok(AlgebraElement::raw(&g.matrix * &x.matrix * ginv, tag))
}

/// The polar decomposition `a = exp(h) u` with `h` Hermitian and `u` unitary.
///
/// Returns `(u, h)`.
pub fn polar_decompose(a: &GroupElement) -> Result<(GroupElement, CMat)> {
    let m = &a.matrix;
    let p = m * m.adjoint();
    let h = hermitian_function(&p, |l| 0.5 * l.ln());
    let u = hermitian_function(&p, |l| 1.0 / l.sqrt()) * m;
    if !is_finite(&h) || !is_finite(&u) {
        return Err(Error::Singular("polar decomposition of a singular matrix".into()));
    }
    let n = a.size();
    let utag = match a.tag {
        GroupTag::Torus(_) | GroupTag::ComplexTorus(_) => GroupTag::Torus(n),
        GroupTag::SpecialLinear(_) | GroupTag::SpecialUnitary(_) => GroupTag::SpecialUnitary(n),
        _ => GroupTag::Unitary(n),
    };
    Ok((GroupElement::raw(u, utag), h))
}

/// Unchecked invariant pairing `-Re tr(a b)`.
#[inline]
pub fn trace_pairing(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    -s
}

/// Gram-Schmidt with respect to the trace pairing, dropping dependent vectors.
fn orthonormalize(vs: Vec<CMat>) -> Vec<CMat> {
    let mut out: Vec<CMat> = Vec::new();
    for v in vs {
        let mut w = v;
        for _ in 0..2 {
            for b in &out {
                let p = trace_pairing(b, &w);
                w -= b.scale(p);
            }
        }
        let nn = trace_pairing(&w, &w);
        if nn > 1e-20 {
            out.push(w.scale(1.0 / nn.sqrt()));
        }
    }
    out
}

fn elementary(n: usize, i: usize, j: usize, z: Complex64) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = z;
    m
}

fn su_generators(n: usize) -> Vec<CMat> {
    let mut gens = Vec::new();
    for k in 0..n.saturating_sub(1) {
        gens.push(elementary(n, k, k, I) - elementary(n, k + 1, k + 1, I));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            gens.push(elementary(n, k, l, c(1.0, 0.0)) - elementary(n, l, k, c(1.0, 0.0)));
            gens.push(elementary(n, k, l, I) + elementary(n, l, k, I));
        }
    }
    gens
}

/// A compact algebra 𝔤 together with an Ad-stable 𝔪 ⊆ 𝔤, defining `𝔞 = 𝔤 ⊕ i𝔪`.
#[derive(Clone, Debug)]
pub struct KleinPair {
    n: usize,
    compact: AlgebraTag,
    ambient: AlgebraTag,
    g_basis: Vec<CMat>,
    m_basis: Vec<CMat>,
}

impl KleinPair {
    /// `(𝔰𝔩(n, ℂ), 𝔰𝔲(n))`.
    pub fn sl_su(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("sl(n) needs n >= 2".into()));
        }
        let g = orthonormalize(su_generators(n));
        Ok(KleinPair {
            n,
            compact: AlgebraTag::SpecialUnitary(n),
            ambient: AlgebraTag::SpecialLinear(n),
            m_basis: g.clone(),
            g_basis: g,
        })
    }

    /// `(𝔤𝔩(n, ℂ), 𝔲(n))`.
    pub fn gl_u(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Config("gl(n) needs n >= 1".into()));
        }
        let mut gens = su_generators(n);
        gens.push(identity(n).map(|z| z * I));
        let g = orthonormalize(gens);
        Ok(KleinPair {
            n,
            compact: AlgebraTag::Unitary(n),
            ambient: AlgebraTag::GeneralLinear(n),
            m_basis: g.clone(),
            g_basis: g,
        })
    }

    /// The rank-`r` torus `(diag ℂ^r, i diag ℝ^r)`.
    pub fn torus(r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::Config("torus rank must be positive".into()));
        }
        let g: Vec<CMat> = (0..r).map(|k| elementary(r, k, k, I)).collect();
        Ok(KleinPair {
            n: r,
            compact: AlgebraTag::Torus(r),
            ambient: AlgebraTag::ComplexTorus(r),
            m_basis: g.clone(),
            g_basis: g,
        })
    }

    /// Restricts the non-compact directions of `base` to a user-chosen `𝔪 ⊆ 𝔤`.
    ///
    /// Fails unless `𝔪` is a subspace of 𝔤 closed under `[𝔤, ·]`.
    pub fn with_complement(base: &KleinPair, m: &[AlgebraElement]) -> Result<Self> {
        let mut mats = Vec::new();
        for x in m {
            if x.size() != base.n {
                return Err(Error::Shape("complement generator has the wrong size".into()));
            }
            if base.g_residual(x.matrix()) > MEMBERSHIP_TOL {
                return Err(Error::Config("complement generator is not in the compact algebra".into()));
            }
            mats.push(x.matrix().clone());
        }
        let m_basis = orthonormalize(mats);
        let pair = KleinPair {
            n: base.n,
            compact: base.compact,
            ambient: if m_basis.len() == base.g_basis.len() {
                base.compact.complexified()
            } else {
                AlgebraTag::Extension(base.n)
            },
            g_basis: base.g_basis.clone(),
            m_basis,
        };
        for b in &pair.g_basis {
            for mm in &pair.m_basis {
                if pair.m_residual(&commutator(b, mm)) > MEMBERSHIP_TOL {
                    return Err(Error::Config("complement is not Ad-stable".into()));
                }
            }
        }
        Ok(pair)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn compact_tag(&self) -> AlgebraTag {
        self.compact
    }

    pub fn ambient_tag(&self) -> AlgebraTag {
        self.ambient
    }

    pub fn group_tag(&self) -> GroupTag {
        GroupTag::of_algebra(self.compact)
    }

    pub fn complex_group_tag(&self) -> GroupTag {
        GroupTag::of_algebra(self.ambient)
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.compact, AlgebraTag::Torus(_))
    }

    /// Trace-orthonormal real basis of 𝔤.
    pub fn g_basis(&self) -> Vec<AlgebraElement> {
        self.g_basis
            .iter()
            .map(|b| AlgebraElement::raw(b.clone(), self.compact))
            .collect()
    }

    /// Trace-orthonormal real basis of 𝔪.
    pub fn m_basis(&self) -> Vec<AlgebraElement> {
        self.m_basis
            .iter()
            .map(|b| AlgebraElement::raw(b.clone(), self.compact))
            .collect()
    }

    /// Basis of `i𝔪`.
    pub fn im_basis(&self) -> Vec<AlgebraElement> {
        self.m_basis
            .iter()
            .map(|b| AlgebraElement::raw(b.map(|z| z * I), self.ambient))
            .collect()
    }

    /// Real basis of `𝔞`: the 𝔤 basis followed by the `i𝔪` basis.
    pub fn a_basis(&self) -> Vec<AlgebraElement> {
        let mut v = self.g_basis();
        v.extend(self.im_basis());
        v
    }

    pub fn dim_g(&self) -> usize {
        self.g_basis.len()
    }

    pub fn dim_a(&self) -> usize {
        self.g_basis.len() + self.m_basis.len()
    }

    fn residual(basis: &[CMat], x: &CMat) -> f64 {
        let mut r = x.clone();
        for b in basis {
            r -= b.scale(trace_pairing(b, x));
        }
        fro_norm(&r) / fro_norm(x).max(1.0)
    }

    pub(crate) fn g_residual(&self, x: &CMat) -> f64 {
        Self::residual(&self.g_basis, x)
    }

    pub(crate) fn m_residual(&self, x: &CMat) -> f64 {
        Self::residual(&self.m_basis, x)
    }

    /// Coordinates of an element of 𝔤 in the orthonormal basis.
    pub fn g_coords(&self, x: &CMat) -> Vec<f64> {
        self.g_basis.iter().map(|b| trace_pairing(b, x)).collect()
    }

    pub fn m_coords(&self, x: &CMat) -> Vec<f64> {
        self.m_basis.iter().map(|b| trace_pairing(b, x)).collect()
    }

    /// Real coordinates in [`KleinPair::a_basis`].
    pub fn a_coords(&self, x: &CMat) -> Result<Vec<f64>> {
        let (x1, x2) = self.split_matrix(x)?;
        let mut v = self.g_coords(&x1);
        v.extend(self.m_coords(&x2));
        Ok(v)
    }

    pub fn from_a_coords(&self, coords: &[f64]) -> Result<AlgebraElement> {
        if coords.len() != self.dim_a() {
            return Err(Error::Shape("wrong number of coordinates for 𝔞".into()));
        }
        let mut m = CMat::zeros(self.n, self.n);
        for (b, &x) in self.g_basis.iter().zip(coords) {
            m += b.scale(x);
        }
        for (b, &x) in self.m_basis.iter().zip(&coords[self.dim_g()..]) {
            m += b.map(|z| z * I).scale(x);
        }
        Ok(AlgebraElement::raw(m, self.ambient))
    }

    pub fn contains_g(&self, x: &AlgebraElement) -> bool {
        x.size() == self.n && self.g_residual(x.matrix()) <= MEMBERSHIP_TOL
    }

    pub fn contains_a(&self, x: &AlgebraElement) -> bool {
        x.size() == self.n && self.split_matrix(x.matrix()).is_ok()
    }

    fn split_matrix(&self, x: &CMat) -> Result<(CMat, CMat)> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::Shape("element size does not match the Klein pair".into()));
        }
        let x1 = anti_hermitian_part(x);
        let x2 = hermitian_part(x).map(|z| -z * I);
        if self.g_residual(&x1) > MEMBERSHIP_TOL || self.m_residual(&x2) > MEMBERSHIP_TOL {
            return Err(Error::Domain("element is not in 𝔤 ⊕ i𝔪".into()));
        }
        Ok((x1, x2))
    }

    /// Decomposes `x = x₁ + i x₂` with `x₁ ∈ 𝔤`, `x₂ ∈ 𝔪`.
    pub fn split(&self, x: &AlgebraElement) -> Result<(AlgebraElement, AlgebraElement)> {
        let (x1, x2) = self.split_matrix(x.matrix())?;
        Ok((
            AlgebraElement::raw(x1, self.compact),
            AlgebraElement::raw(x2, self.compact),
        ))
    }

    /// `[b_i, b_j]` stays in 𝔤 for all basis pairs (maximum residual).
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.g_basis {
            for b in &self.g_basis {
                worst = worst.max(self.g_residual(&commutator(a, b)));
            }
        }
        worst
    }
}

/// Invariant pairing `κ(μ, ξ) = -Re tr(μ ξ)` on 𝔤.
pub fn kappa(pair: &KleinPair, mu: &AlgebraElement, xi: &AlgebraElement) -> Result<f64> {
    if !pair.contains_g(mu) || !pair.contains_g(xi) {
        return Err(Error::Domain("kappa is only defined on the compact algebra".into()));
    }
    Ok(trace_pairing(mu.matrix(), xi.matrix()))
}

/// `κ_𝔞(μ, ξ₁ + iξ₂) = -κ(μ, ξ₂)`: the pairing of 𝔤* with 𝔞 through its 𝔪 part.
pub fn kappa_a(pair: &KleinPair, mu: &AlgebraElement, xi: &AlgebraElement) -> Result<f64> {
    if !pair.contains_g(mu) {
        return Err(Error::Domain("kappa_a expects its first argument in 𝔤".into()));
    }
    let (_, xi2) = pair.split_matrix(xi.matrix())?;
    Ok(-trace_pairing(mu.matrix(), &xi2))
}

/// Hermitian extension of κ to `𝔤_ℂ`:
/// `κ_ℂ(ξ₁ + iξ₂, η₁ + iη₂) = κ(ξ₁, η₁) + iκ(ξ₂, η₁) − iκ(ξ₁, η₂) + κ(ξ₂, η₂)`.
pub fn kappa_c(mu: &AlgebraElement, zeta: &AlgebraElement) -> Result<Complex64> {
    if mu.size() != zeta.size() {
        return Err(Error::Shape("kappa_c: sizes differ".into()));
    }
    let split = |x: &CMat| (anti_hermitian_part(x), hermitian_part(x).map(|z| -z * I));
    let (x1, x2) = split(mu.matrix());
    let (y1, y2) = split(zeta.matrix());
    let re = trace_pairing(&x1, &y1) + trace_pairing(&x2, &y2);
    let im = trace_pairing(&x2, &y1) - trace_pairing(&x1, &y2);
    Ok(c(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(zs: &[Complex64]) -> CMat {
        let n = zs.len();
        CMat::from_fn(n, n, |i, j| if i == j { zs[i] } else { c(0.0, 0.0) })
    }

    #[test]
    fn su2_basis_is_orthonormal_and_closed() {
        let p = KleinPair::sl_su(2).unwrap();
        assert_eq!(p.dim_g(), 3);
        assert_eq!(p.dim_a(), 6);
        for (i, a) in p.g_basis.iter().enumerate() {
            for (j, b) in p.g_basis.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((trace_pairing(a, b) - e).abs() < 1e-14);
            }
        }
        assert!(p.closure_residual() < 1e-14);
    }

    #[test]
    fn kappa_a_pairs_through_the_hermitian_part() {
        let p = KleinPair::gl_u(2).unwrap();
        let mu = AlgebraElement::new(diag(&[I, -I]), AlgebraTag::Unitary(2)).unwrap();
        let h = AlgebraElement::new(diag(&[c(1.0, 0.0), c(-1.0, 0.0)]), AlgebraTag::GeneralLinear(2))
            .unwrap();
        assert!((kappa_a(&p, &mu, &h).unwrap() - 2.0).abs() < 1e-14);
        // compact directions pair to zero
        assert!(kappa_a(&p, &mu, &mu).unwrap().abs() < 1e-14);
        assert!((kappa(&p, &mu, &mu).unwrap() - 2.0).abs() < 1e-14);
        let kc = kappa_c(&mu, &h).unwrap();
        assert!((kc.im - 2.0).abs() < 1e-14 && kc.re.abs() < 1e-14);
    }

    #[test]
    fn kappa_rejects_non_compact_input() {
        let p = KleinPair::gl_u(2).unwrap();
        let h = AlgebraElement::new(identity(2), AlgebraTag::GeneralLinear(2)).unwrap();
        assert!(matches!(kappa(&p, &h, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn tags_are_validated() {
        assert!(AlgebraElement::new(identity(2), AlgebraTag::Unitary(2)).is_err());
        assert!(AlgebraElement::new(identity(2), AlgebraTag::SpecialLinear(2)).is_err());
        assert!(AlgebraElement::new(identity(3), AlgebraTag::GeneralLinear(2)).is_err());
        assert!(GroupElement::new(identity(2).scale(2.0), GroupTag::SpecialLinear(2)).is_err());
    }

    #[test]
    fn polar_roundtrip() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 1.0), c(0.3, 0.0), c(-1.0, 0.5), c(0.7, -0.2)]);
        let a = GroupElement::new(m.clone(), GroupTag::GeneralLinear(2)).unwrap();
        let (u, h) = polar_decompose(&a).unwrap();
        let back = expm(&h).unwrap() * u.matrix();
        assert!(fro_norm(&(back - m)) < 1e-12);
        assert!(fro_norm(&(u.matrix().adjoint() * u.matrix() - identity(2))) < 1e-12);
    }

    #[test]
    fn complement_must_be_ad_stable() {
        let base = KleinPair::sl_su(2).unwrap();
        let h = AlgebraElement::new(diag(&[I, -I]), AlgebraTag::SpecialUnitary(2)).unwrap();
        assert!(matches!(
            KleinPair::with_complement(&base, &[h]),
            Err(Error::Config(_))
        ));
        let full = KleinPair::with_complement(&base, &base.g_basis()).unwrap();
        assert_eq!(full.dim_a(), 6);
    }
}
