//! The bundle `P = Gᶜ → Gᶜ · m` with its Maurer-Cartan connection and Calabi operator.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::{LinearAction, ProjectivePoint, TangentVector};
use crate::lie::{bracket, group_exp, kappa_a, AlgebraElement, GroupElement, KleinPair};
use crate::linalg::{expm, inverse, realify, real_null_space, real_rank, vec_norm, CMat, CVec, I};
use crate::sample;
use crate::tolerances::{
    EQUIVARIANCE_TOL, FD_STEP, GAP_RATIO, MOMENTUM_DEFECT_TOL, SIGMA_TOL,
};

/// The model map `λ(ξ₁ + iξ₂) = ξ₁ + i·s·ξ₂`; `s = 1` is the canonical choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Twist {
    scale: f64,
}

impl Twist {
    pub fn identity() -> Self {
        Twist { scale: 1.0 }
    }

    pub fn new(scale: f64) -> Result<Self> {
        if !scale.is_finite() || scale == 0.0 {
            return Err(Error::Config("twist scale must be finite and non-zero".into()));
        }
        Ok(Twist { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0
    }

    fn rescale(&self, pair: &KleinPair, x: &CMat, s: f64) -> Result<CMat> {
        let el = AlgebraElement::raw(x.clone(), pair.ambient_tag());
        let (x1, x2) = pair.split(&el)?;
        Ok(x1.matrix() + x2.matrix().map(|z| z * I).scale(s))
    }

    pub fn apply(&self, pair: &KleinPair, x: &CMat) -> Result<CMat> {
        if self.is_identity() {
            return Ok(x.clone());
        }
        self.rescale(pair, x, self.scale)
    }

    pub fn invert(&self, pair: &KleinPair, x: &CMat) -> Result<CMat> {
        if self.is_identity() {
            return Ok(x.clone());
        }
        self.rescale(pair, x, 1.0 / self.scale)
    }
}

/// A point of `P = Gᶜ`, stored as the group element `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    a: GroupElement,
}

impl BundlePoint {
    pub fn new(a: GroupElement) -> Self {
        BundlePoint { a }
    }

    pub fn element(&self) -> &GroupElement {
        &self.a
    }

    pub fn matrix(&self) -> &CMat {
        self.a.matrix()
    }
}

/// Maximum sampled defects recorded when a bundle is certified.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub samples: usize,
    pub seed: u64,
    pub max_momentum_defect: f64,
    pub max_sigma: f64,
    pub max_equivariance_defect: f64,
    pub passed: bool,
}

/// Real basis of the stabilizer subalgebra together with its diagnostics.
#[derive(Clone, Debug)]
pub struct StabilizerBasis {
    pub elements: Vec<AlgebraElement>,
    /// Singular values of `ξ ↦ ρ(ξ, p)`, decreasing.
    pub singular_values: Vec<f64>,
    /// Largest residual of `[ζᵢ, ζⱼ]` outside the span.
    pub closure_residual: f64,
}

impl StabilizerBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug)]
pub struct CartanBundle {
    action: LinearAction,
    base: ProjectivePoint,
    twist: Twist,
    certificate: Option<Certificate>,
}

impl CartanBundle {
    pub fn new(action: LinearAction, base: ProjectivePoint) -> Result<Self> {
        if base.dim() != action.dim() {
            return Err(Error::Shape("base point lives in the wrong projective space".into()));
        }
        Ok(CartanBundle { action, base, twist: Twist::identity(), certificate: None })
    }

    pub fn with_twist(mut self, twist: Twist) -> Self {
        self.twist = twist;
        self.certificate = None;
        self
    }

    pub fn action(&self) -> &LinearAction {
        &self.action
    }

    pub fn pair(&self) -> &KleinPair {
        self.action.pair()
    }

    pub fn base(&self) -> &ProjectivePoint {
        &self.base
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn require_certified(&self) -> Result<()> {
        match &self.certificate {
            Some(c) if c.passed => Ok(()),
            _ => Err(Error::Precondition("bundle has not passed the equivariance certificate".into())),
        }
    }

    pub fn identity_point(&self) -> BundlePoint {
        BundlePoint::new(GroupElement::identity(self.pair().complex_group_tag()))
    }

    pub fn point(&self, a: GroupElement) -> Result<BundlePoint> {
        if a.size() != self.pair().size() {
            return Err(Error::Shape("group element has the wrong size".into()));
        }
        Ok(BundlePoint::new(a))
    }

    /// Unnormalized representative `a · v` of `χ(p)`.
    pub(crate) fn chi_vector(&self, p: &BundlePoint) -> CVec {
        self.action.rep_group(p.matrix()) * self.base.vector()
    }

    /// `χ(p) = a · m`.
    pub fn chi(&self, p: &BundlePoint) -> Result<ProjectivePoint> {
        ProjectivePoint::new(self.chi_vector(p))
    }

    /// The Maurer-Cartan form `θ_p(X) = λ(X a⁻¹)`, for `X` tangent at `a`.
    pub fn theta(&self, p: &BundlePoint, x: &CMat) -> Result<AlgebraElement> {
        let y = x * inverse(p.matrix())?;
        let el = AlgebraElement::raw(y, self.pair().ambient_tag());
        if !self.pair().contains_a(&el) {
            return Err(Error::Domain("tangent vector is not right-invariant along 𝔞".into()));
        }
        let z = self.twist.apply(self.pair(), el.matrix())?;
        Ok(AlgebraElement::raw(z, self.pair().ambient_tag()))
    }

    /// `θ_p⁻¹(ξ) = λ⁻¹(ξ) a`.
    pub fn theta_inverse(&self, p: &BundlePoint, xi: &AlgebraElement) -> Result<CMat> {
        self.check_a(xi)?;
        Ok(self.twist.invert(self.pair(), xi.matrix())? * p.matrix())
    }

    fn check_a(&self, xi: &AlgebraElement) -> Result<()> {
        if !self.pair().contains_a(xi) {
            return Err(Error::Domain(format!("element is not in 𝔞 (tag {:?})", xi.tag())));
        }
        Ok(())
    }

    /// Generator in `Gᶜ` of the flow of `θ⁻¹(ξ)`.
    fn flow_generator(&self, xi: &AlgebraElement) -> Result<CMat> {
        self.check_a(xi)?;
        self.twist.invert(self.pair(), xi.matrix())
    }

    /// `ρ(ξ, p) = dχ(θ_p⁻¹ξ)`.
    pub fn rho(&self, xi: &AlgebraElement, p: &BundlePoint) -> Result<TangentVector> {
        let gen = self.flow_generator(xi)?;
        let m = self.chi(p)?;
        let w = self.action.rep_algebra(&gen) * m.vector();
        TangentVector::new(&m, w)
    }

    /// `C_p(ξ) = dJ(ρ(ξ, p))`, by a central difference along the flow.
    pub fn calabi_operator(&self, p: &BundlePoint, xi: &AlgebraElement) -> Result<AlgebraElement> {
        let gen = self.flow_generator(xi)?;
        let v = self.chi_vector(p);
        let v = v.unscale(vec_norm(&v));
        let w = self.action.rep_algebra(&gen) * &v;
        let h = FD_STEP;
        let jp = self.action.momentum_matrix(&(&v + w.scale(h)));
        let jm = self.action.momentum_matrix(&(&v - w.scale(h)));
        Ok(AlgebraElement::raw((jp - jm).unscale(2.0 * h), self.pair().compact_tag()))
    }

    /// Momentum at `χ(p)` as an element of 𝔤.
    pub fn momentum_at(&self, p: &BundlePoint) -> Result<AlgebraElement> {
        let v = self.chi_vector(p);
        if vec_norm(&v) < 1e-300 || v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("orbit representative degenerated".into()));
        }
        Ok(AlgebraElement::raw(self.action.momentum_matrix(&v), self.pair().compact_tag()))
    }

    /// `|κ_𝔞(C_pξ, η) − κ_𝔞(C_pη, ξ) + κ_𝔞(J(χ(p)), [ξ, η])|`.
    pub fn a_equivariance_defect(
        &self,
        p: &BundlePoint,
        xi: &AlgebraElement,
        eta: &AlgebraElement,
    ) -> Result<f64> {
        let pair = self.pair();
        let cx = self.calabi_operator(p, xi)?;
        let ce = self.calabi_operator(p, eta)?;
        let j = self.momentum_at(p)?;
        let br = bracket(xi, eta)?;
        let d = kappa_a(pair, &cx, eta)? - kappa_a(pair, &ce, xi)? + kappa_a(pair, &j, &br)?;
        Ok(d.abs())
    }

    /// Samples all three defects and stores the certificate when they pass.
    pub fn certify(&mut self, samples: usize, seed: u64) -> Result<Certificate> {
        if samples == 0 {
            return Err(Error::Config("certification needs at least one sample".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = self.pair().clone();
        let nv = self.action.dim();
        let (mut dm, mut ds, mut de) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..samples {
            let m = sample::point(nv, &mut rng);
            let xi = sample::g_element(&pair, 1.0, &mut rng);
            let x = sample::tangent(&m, &mut rng);
            let x = x.scale(1.0 / vec_norm(x.vector()).max(1e-300));
            dm = dm.max(self.action.momentum_defect(&m, &xi, &x)?);

            let g = sample::compact_group_element(&pair, &mut rng)?;
            ds = ds.max(self.action.cocycle_sigma(&g, &m)?.norm());

            let a = sample::complex_group_element(&pair, 1.0, &mut rng)?;
            let p = BundlePoint::new(a);
            let xi = sample::a_element(&pair, 1.0, &mut rng);
            let eta = sample::a_element(&pair, 1.0, &mut rng);
            de = de.max(self.a_equivariance_defect(&p, &xi, &eta)?);
        }
        let cert = Certificate {
            samples,
            seed,
            max_momentum_defect: dm,
            max_sigma: ds,
            max_equivariance_defect: de,
            passed: dm < MOMENTUM_DEFECT_TOL && ds < SIGMA_TOL && de < EQUIVARIANCE_TOL,
        };
        self.certificate = if cert.passed { Some(cert.clone()) } else { None };
        Ok(cert)
    }

    fn rho_matrix(&self, p: &BundlePoint, basis: &[AlgebraElement]) -> Result<DMatrix<f64>> {
        let nv = self.action.dim();
        let mut m = DMatrix::<f64>::zeros(2 * nv, basis.len());
        for (k, b) in basis.iter().enumerate() {
            let t = self.rho(b, p)?;
            m.set_column(k, &realify(t.vector()));
        }
        Ok(m)
    }

    /// Real basis of `𝔞_{χ(p)} = ker(ξ ↦ ρ(ξ, p))`.
    pub fn stabilizer_basis(&self, p: &BundlePoint, cutoff: f64) -> Result<StabilizerBasis> {
        if !(cutoff > 0.0) {
            return Err(Error::Config("stabilizer cutoff must be positive".into()));
        }
        let pair = self.pair();
        let basis = pair.a_basis();
        let m = self.rho_matrix(p, &basis)?;
        let (null, sigma) = real_null_space(&m, cutoff);
        let k = null.len();
        if k > 0 && k < sigma.len() {
            let below = sigma[sigma.len() - k];
            let above = sigma[sigma.len() - k - 1];
            if below / above > GAP_RATIO {
                return Err(Error::Ambiguity(format!(
                    "singular values {:e} and {:e} straddle the cutoff {:e}",
                    above, below, cutoff
                )));
            }
        }
        let elements: Vec<AlgebraElement> = null
            .iter()
            .map(|v| pair.from_a_coords(v.as_slice()))
            .collect::<Result<_>>()?;
        let mut closure: f64 = 0.0;
        for a in &elements {
            for b in &elements {
                let br = bracket(a, b)?;
                let coords = DVector::from_vec(pair.a_coords(br.matrix())?);
                let mut r = coords.clone();
                for v in &null {
                    r -= v * v.dot(&coords);
                }
                closure = closure.max(r.norm());
            }
        }
        Ok(StabilizerBasis { elements, singular_values: sigma, closure_residual: closure })
    }

    /// The geodesic `t ↦ exp(t λ⁻¹ξ) a` through `p`.
    pub fn geodesic(&self, p: &BundlePoint, xi: &AlgebraElement, t: f64) -> Result<BundlePoint> {
        let gen = self.flow_generator(xi)?;
        let e = expm(&gen.scale(t))?;
        Ok(BundlePoint::new(GroupElement::raw(e * p.matrix(), self.pair().complex_group_tag())))
    }

    /// Right action of the stabilizer, `p · exp(ζ)`.
    pub fn right_translate(&self, p: &BundlePoint, zeta: &AlgebraElement) -> Result<BundlePoint> {
        let e = group_exp(zeta)?;
        Ok(BundlePoint::new(GroupElement::raw(
            p.matrix() * e.matrix(),
            self.pair().complex_group_tag(),
        )))
    }

    /// Ranks of `ξ ↦ ρ(ξ, p)` on 𝔞 and of `(ξ₁, ξ₂) ↦ ξ₁.m + j ξ₂.m` on `𝔤 ⊕ 𝔤`.
    pub fn orbit_ranks(&self, p: &BundlePoint, cutoff: f64) -> Result<(usize, usize)> {
        let pair = self.pair();
        let rho = self.rho_matrix(p, &pair.a_basis())?;
        let g = pair.g_basis();
        let mut gc: Vec<AlgebraElement> = g.clone();
        gc.extend(g.iter().map(|x| x.times_i()));
        let m = self.chi(p)?;
        let nv = self.action.dim();
        let mut up = DMatrix::<f64>::zeros(2 * nv, gc.len());
        for (k, x) in gc.iter().enumerate() {
            let w = self.action.rep_algebra(x.matrix()) * m.vector();
            up.set_column(k, &realify(&m.horizontal(&w)));
        }
        Ok((real_rank(&rho, cutoff), real_rank(&up, cutoff)))
    }
}
