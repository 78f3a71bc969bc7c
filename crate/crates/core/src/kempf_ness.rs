//! Kempf-Ness functions, slopes of geodesic rays, stability and momentum zeros.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::{BundlePoint, CartanBundle};
use crate::error::{Error, Result};
use crate::hamiltonian::{metric, LinearAction, ProjectivePoint, WeightMatrix};
use crate::lie::{kappa_a, kappa_c, polar_decompose, AlgebraElement, GroupElement, KleinPair};
use crate::linalg::{expm, fro_norm, hermitian_function, one_norm, vec_norm, CMat, CVec, I};
use crate::lp::{self, Constraint, LpOutcome, Relation};
use crate::quadrature::adaptive;
use crate::sample;
use crate::tolerances::{FD_STEP, PLATEAU_FLATNESS, PROFILE_FD_STEP, SLOPE_TOL, STABILIZER_CUTOFF};

/// Points closer than this to a momentum zero count as zeros for uniqueness checks.
pub const ZERO_PRECONDITION_TOL: f64 = 1e-6;
/// Polar radius beyond which descent is declared divergent.
const DIVERGENCE_RADIUS: f64 = 50.0;

/// `Ψ_[v](a) = ½ log‖a·v‖² − ½ log‖v‖²`.
pub fn kn_lifted(act: &LinearAction, a: &GroupElement, v: &ProjectivePoint) -> Result<f64> {
    if v.dim() != act.dim() {
        return Err(Error::Shape("point lives in the wrong projective space".into()));
    }
    let w = act.rep_group(a.matrix()) * v.vector();
    let n = vec_norm(&w);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Numeric("a·v is zero or not finite".into()));
    }
    Ok(n.ln() - vec_norm(v.vector()).ln())
}

/// `|d/dt Ψ(exp(tζ) a)|_{t=0} − Im κ_ℂ(J(a·m), ζ)|`, derivative by central differences.
pub fn kn_derivative_identity_defect(
    act: &LinearAction,
    a: &GroupElement,
    zeta: &AlgebraElement,
    v: &ProjectivePoint,
) -> Result<f64> {
    let h = FD_STEP;
    let psi = |s: f64| -> Result<f64> {
        let e = GroupElement::new(expm(&zeta.matrix().scale(s))?, crate::lie::GroupTag::GeneralLinear(a.size()))?;
        kn_lifted(act, &e.mul(a)?, v)
    };
    let fd = (psi(h)? - psi(-h)?) / (2.0 * h);
    let am = act.act(a, v)?;
    let j = act.momentum(&am)?;
    let k = kappa_c(j.value(), zeta)?;
    Ok((fd - k.im).abs())
}

/// A geodesic ray `t ↦ exp(t λ⁻¹ξ) · start` sampled on a grid starting at `0`.
#[derive(Clone, Debug)]
pub struct GeodesicRay<'a> {
    bundle: &'a CartanBundle,
    start: BundlePoint,
    direction: AlgebraElement,
    grid: Vec<f64>,
}

impl<'a> GeodesicRay<'a> {
    pub fn new(
        bundle: &'a CartanBundle,
        start: BundlePoint,
        direction: AlgebraElement,
        grid: Vec<f64>,
    ) -> Result<Self> {
        if !bundle.pair().contains_a(&direction) {
            return Err(Error::Domain("ray direction is not in 𝔞".into()));
        }
        if grid.is_empty() || grid[0] != 0.0 {
            return Err(Error::Config("ray grid must start at t = 0".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("ray grid must be strictly increasing".into()));
        }
        Ok(GeodesicRay { bundle, start, direction, grid })
    }

    /// Uniform grid `0, h, …, t_max`.
    pub fn uniform(
        bundle: &'a CartanBundle,
        start: BundlePoint,
        direction: AlgebraElement,
        t_max: f64,
        steps: usize,
    ) -> Result<Self> {
        if steps == 0 || !(t_max > 0.0) {
            return Err(Error::Config("uniform grid needs positive length and steps".into()));
        }
        let grid = (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
        GeodesicRay::new(bundle, start, direction, grid)
    }

    pub fn bundle(&self) -> &CartanBundle {
        self.bundle
    }

    pub fn start(&self) -> &BundlePoint {
        &self.start
    }

    pub fn direction(&self) -> &AlgebraElement {
        &self.direction
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    fn generator(&self) -> Result<CMat> {
        let gen = self.bundle.twist().invert(self.bundle.pair(), self.direction.matrix())?;
        Ok(self.bundle.action().rep_algebra(&gen))
    }

    /// Unit representative of `χ(γ(t))` and `log‖γ(t)·v‖ − log‖start·v‖`,
    /// propagated in chunks so that long horizons do not overflow.
    fn propagate(&self, rep_gen: &CMat, t: f64) -> Result<(CVec, f64)> {
        let w0 = self.bundle.chi_vector(&self.start);
        let n0 = vec_norm(&w0);
        let mut w = w0.unscale(n0);
        let chunks = ((t.abs() * one_norm(rep_gen)).ceil() as usize).max(1);
        let e = expm(&rep_gen.scale(t / chunks as f64))?;
        let mut log_growth = 0.0;
        for _ in 0..chunks {
            w = &e * w;
            let n = vec_norm(&w);
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::Numeric("ray representative degenerated".into()));
            }
            log_growth += n.ln();
            w.unscale_mut(n);
        }
        Ok((w, log_growth))
    }

    fn dpsi_at(&self, rep_gen: &CMat, t: f64) -> Result<f64> {
        let (w, _) = self.propagate(rep_gen, t)?;
        let j = AlgebraElement::raw(
            self.bundle.action().momentum_matrix(&w),
            self.bundle.pair().compact_tag(),
        );
        kappa_a(self.bundle.pair(), &j, &self.direction)
    }

    /// `dΨ/dt = κ_𝔞(J(χ(γ(t))), ξ)`.
    pub fn dpsi(&self, t: f64) -> Result<f64> {
        self.dpsi_at(&self.generator()?, t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnProfile {
    pub ts: Vec<f64>,
    /// Line integral of `dΨ/dt` from the start of the ray.
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub d2psi: Vec<f64>,
    /// Closed-form `½ log‖γ(t)·v‖²` relative to the start.
    pub psi_closed: Vec<f64>,
    /// `g(ρ(ξ, γ(t)), ρ(ξ, γ(t)))`, the predicted second derivative for `ξ ∈ i𝔪`.
    pub velocity_norm2: Vec<f64>,
}

impl KnProfile {
    pub fn closed_form_gap(&self) -> f64 {
        self.psi
            .iter()
            .zip(&self.psi_closed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn convexity_gap(&self) -> f64 {
        self.d2psi
            .iter()
            .zip(&self.velocity_norm2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_d2psi(&self) -> f64 {
        self.d2psi.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Integrates the Kempf-Ness one-form along a ray.
pub fn kn_profile(ray: &GeodesicRay) -> Result<KnProfile> {
    ray.bundle.require_certified()?;
    let gen = ray.generator()?;
    let delta = PROFILE_FD_STEP;
    let n = ray.grid.len();
    let mut out = KnProfile {
        ts: ray.grid.clone(),
        psi: Vec::with_capacity(n),
        dpsi: Vec::with_capacity(n),
        d2psi: Vec::with_capacity(n),
        psi_closed: Vec::with_capacity(n),
        velocity_norm2: Vec::with_capacity(n),
    };
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in &ray.grid {
        if t > prev {
            acc += adaptive(|s| ray.dpsi_at(&gen, s), prev, t, 1e-13)?;
        }
        prev = t;
        out.psi.push(acc);
        out.dpsi.push(ray.dpsi_at(&gen, t)?);
        let d2 = (ray.dpsi_at(&gen, t + delta)? - ray.dpsi_at(&gen, t - delta)?) / (2.0 * delta);
        out.d2psi.push(d2);
        out.psi_closed.push(ray.propagate(&gen, t)?.1);
        let p = ray.bundle.geodesic(&ray.start, &ray.direction, t)?;
        let v = ray.bundle.rho(&ray.direction, &p)?;
        out.velocity_norm2.push(metric(&v, &v)?);
    }
    Ok(out)
}

/// A closed piecewise-geodesic path: each leg flows `θ⁻¹(ξ_k)` for unit time.
#[derive(Clone, Debug)]
pub struct GeodesicLoop {
    pub start: BundlePoint,
    pub legs: Vec<AlgebraElement>,
}

impl GeodesicLoop {
    /// Two given legs closed up by the polar part of the composite.
    pub fn triangle(
        bundle: &CartanBundle,
        start: BundlePoint,
        xi_a: AlgebraElement,
        xi_b: AlgebraElement,
    ) -> Result<Self> {
        let p1 = bundle.geodesic(&start, &xi_a, 1.0)?;
        let p2 = bundle.geodesic(&p1, &xi_b, 1.0)?;
        let q = GroupElement::new(
            p2.matrix() * crate::linalg::inverse(start.matrix())?,
            crate::lie::GroupTag::GeneralLinear(start.element().size()),
        )?;
        let (_, h) = polar_decompose(&q)?;
        let gen = h.scale(-1.0);
        let xi_c = bundle.twist().apply(bundle.pair(), &gen)?;
        let xi_c = AlgebraElement::raw(xi_c, bundle.pair().ambient_tag());
        if !bundle.pair().contains_a(&xi_c) {
            return Err(Error::Domain("closing leg leaves 𝔞".into()));
        }
        Ok(GeodesicLoop { start, legs: vec![xi_a, xi_b, xi_c] })
    }
}

fn gram(a: &CMat) -> CMat {
    a.adjoint() * a
}

/// Maximum of `|∮ α|` over the loops.
pub fn path_independence_defect(bundle: &CartanBundle, loops: &[GeodesicLoop]) -> Result<f64> {
    bundle.require_certified()?;
    let mut worst: f64 = 0.0;
    for lp in loops {
        let mut p = lp.start.clone();
        let mut total = 0.0;
        for leg in &lp.legs {
            let ray = GeodesicRay::new(bundle, p.clone(), leg.clone(), vec![0.0])?;
            let gen = ray.generator()?;
            total += adaptive(|s| ray.dpsi_at(&gen, s), 0.0, 1.0, 1e-13)?;
            p = bundle.geodesic(&p, leg, 1.0)?;
        }
        let gap = fro_norm(&(gram(p.matrix()) - gram(lp.start.matrix())));
        if gap > 1e-8 * fro_norm(&gram(lp.start.matrix())).max(1.0) {
            return Err(Error::Domain(format!("loop does not close in G\\Gᶜ (gap {:e})", gap)));
        }
        worst = worst.max(total.abs());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub horizon: f64,
    pub converged: bool,
}

/// `lim dΨ/dt` by a doubling horizon until the derivative plateaus.
pub fn slope(ray: &GeodesicRay, horizon: f64) -> Result<SlopeEstimate> {
    if !(horizon >= 1.0) {
        return Err(Error::Config("slope horizon must be at least 1".into()));
    }
    let gen = ray.generator()?;
    let mut t = 1.0;
    let mut prev = ray.dpsi_at(&gen, t)?;
    while 2.0 * t <= horizon {
        t *= 2.0;
        let d = ray.dpsi_at(&gen, t)?;
        if (d - prev).abs() <= PLATEAU_FLATNESS * d.abs().max(1.0) {
            return Ok(SlopeEstimate { slope: d, horizon: t, converged: true });
        }
        prev = d;
    }
    Ok(SlopeEstimate { slope: prev, horizon: t, converged: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityLabel {
    Stable,
    Semistable,
    Unstable,
}

impl StabilityLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityLabel::Stable => "stable",
            StabilityLabel::Semistable => "semistable",
            StabilityLabel::Unstable => "unstable",
        }
    }

    pub fn from_slope(s: f64, tol: f64) -> Self {
        if s > tol {
            StabilityLabel::Stable
        } else if s < -tol {
            StabilityLabel::Unstable
        } else {
            StabilityLabel::Semistable
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub label: StabilityLabel,
    /// Smallest slope found.
    pub slope: f64,
    /// Direction attaining it, in coordinates of the sampled Cartan subalgebra.
    pub witness: Vec<f64>,
}

fn support(v: &ProjectivePoint) -> Vec<usize> {
    let big = v.vector().iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..v.dim()).filter(|&k| v.vector()[k].norm() > 1e-12 * big).collect()
}

/// Hilbert-Mumford verdict from the support weights by linear programming.
///
/// Minimizes `max_k ⟨λ_k, ξ⟩` over each face of the unit sup-norm cube; the
/// minimum is positive iff `0` is interior to the weight hull and zero iff
/// `0` lies on its boundary.
pub fn hm_oracle_torus(weights: &WeightMatrix, v: &ProjectivePoint) -> Result<StabilityVerdict> {
    if weights.rows() != v.dim() {
        return Err(Error::Shape("weights and point dimensions differ".into()));
    }
    let supp = support(v);
    let r = weights.rank();
    // variables: ξ⁺, ξ⁻ (interleaved), t⁺, t⁻
    let nv = 2 * r + 2;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for face in 0..r {
        for sign in [1.0, -1.0] {
            let mut cons = Vec::new();
            for &k in &supp {
                let w: Vec<f64> = weights.weight(k).iter().map(|&x| x as f64).collect();
                let mut row = lp::split_free(&w);
                row.extend([-1.0, 1.0]);
                cons.push(Constraint { coeffs: row, relation: Relation::Le, rhs: 0.0 });
            }
            for i in 0..r {
                let mut e = vec![0.0; r];
                e[i] = 1.0;
                let mut row = lp::split_free(&e);
                row.extend([0.0, 0.0]);
                if i == face {
                    cons.push(Constraint { coeffs: row, relation: Relation::Eq, rhs: sign });
                } else {
                    cons.push(Constraint { coeffs: row.clone(), relation: Relation::Le, rhs: 1.0 });
                    cons.push(Constraint { coeffs: row, relation: Relation::Ge, rhs: -1.0 });
                }
            }
            let mut obj = vec![0.0; nv];
            obj[2 * r] = -1.0;
            obj[2 * r + 1] = 1.0;
            match lp::maximize(&obj, &cons)? {
                LpOutcome::Optimal { value, x } => {
                    let t = -value;
                    let xi: Vec<f64> = (0..r).map(|i| x[2 * i] - x[2 * i + 1]).collect();
                    if best.as_ref().is_none_or(|(b, _)| t < *b - 1e-12) {
                        best = Some((t, xi));
                    }
                }
                other => {
                    return Err(Error::Numeric(format!("weight LP ended as {:?}", other)));
                }
            }
        }
    }
    let (s, witness) = best.ok_or_else(|| Error::Config("torus of rank zero".into()))?;
    Ok(StabilityVerdict { label: StabilityLabel::from_slope(s, 1e-9), slope: s, witness })
}

/// Rational directions used by [`classify_stability`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingPlan {
    /// Sup-norm bound `R` on primitive integer vectors.
    pub radius: i32,
    /// Additional random unitary conjugates of every direction (non-abelian groups).
    pub conjugations: usize,
    pub seed: u64,
    pub horizon: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { radius: 5, conjugations: 0, seed: 0, horizon: 4096.0 }
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// All primitive vectors of `ℤ^r` with sup-norm at most `radius`.
pub fn primitive_vectors(r: usize, radius: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(r as u32);
    for idx in 0..total {
        let mut k = idx;
        let mut v = Vec::with_capacity(r);
        for _ in 0..r {
            v.push((k % side) as i32 - radius);
            k /= side;
        }
        let g = v.iter().fold(0, |acc, &x| gcd(acc, x));
        if g == 1 {
            out.push(v);
        }
    }
    out
}

/// Real diagonal basis of a Cartan subalgebra of `i𝔪`.
fn cartan_directions(pair: &KleinPair) -> Result<Vec<CMat>> {
    let n = pair.size();
    match pair.compact_tag() {
        crate::lie::AlgebraTag::Torus(_) => Ok((0..n)
            .map(|k| CMat::from_fn(n, n, |i, j| if i == k && j == k { I * I * -1.0 } else { I * 0.0 }))
            .collect()),
        crate::lie::AlgebraTag::SpecialUnitary(_) if pair.dim_a() == 2 * pair.dim_g() => Ok((0..n - 1)
            .map(|k| {
                CMat::from_fn(n, n, |i, j| {
                    if i == j && i == k {
                        I * -I
                    } else if i == j && i == k + 1 {
                        I * I
                    } else {
                        I * 0.0
                    }
                })
            })
            .collect()),
        crate::lie::AlgebraTag::Unitary(_) if pair.dim_a() == 2 * pair.dim_g() => Ok((0..n)
            .map(|k| CMat::from_fn(n, n, |i, j| if i == k && j == k { I * -I } else { I * 0.0 }))
            .collect()),
        _ => Err(Error::Unsupported("no standard Cartan subalgebra for this Klein pair".into())),
    }
}

/// Minimum slope over sampled rational rays through `v`.
pub fn classify_stability(
    bundle: &CartanBundle,
    v: &ProjectivePoint,
    plan: &SamplingPlan,
) -> Result<StabilityVerdict> {
    bundle.require_certified()?;
    if plan.radius < 1 {
        return Err(Error::Config("sampling plan has no directions".into()));
    }
    let local = CartanBundle::new(bundle.action().clone(), v.clone())?.with_twist(bundle.twist());
    let pair = bundle.pair();
    let basis = cartan_directions(pair)?;
    let dirs = primitive_vectors(basis.len(), plan.radius);
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut conj: Vec<CMat> = vec![crate::linalg::identity(pair.size())];
    if !pair.is_torus() {
        // the eigenframe of J(v) carries the steepest destabilizing directions
        let j = local.momentum_at(&local.identity_point())?;
        conj.push((j.matrix() * I).symmetric_eigen().eigenvectors);
        for _ in 0..plan.conjugations {
            conj.push(sample::compact_group_element(pair, &mut rng)?.matrix().clone());
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for d in &dirs {
        let mut x = CMat::zeros(pair.size(), pair.size());
        for (b, &c) in basis.iter().zip(d) {
            x += b.scale(c as f64);
        }
        for u in &conj {
            let xi = AlgebraElement::raw(u * &x * u.adjoint(), pair.ambient_tag());
            let ray = GeodesicRay::new(&local, local.identity_point(), xi, vec![0.0])?;
            let est = slope(&ray, plan.horizon)?;
            if !est.converged {
                return Err(Error::NonConvergence {
                    iterations: est.horizon as usize,
                    detail: format!("slope plateau not reached, partial value {}", est.slope),
                });
            }
            if best.as_ref().is_none_or(|(b, _)| est.slope < *b) {
                best = Some((est.slope, d.iter().map(|&c| c as f64).collect()));
            }
        }
    }
    let (s, witness) = best.ok_or_else(|| Error::Config("sampling plan has no directions".into()))?;
    Ok(StabilityVerdict { label: StabilityLabel::from_slope(s, SLOPE_TOL), slope: s, witness })
}

/// Largest `|κ_𝔞(J(χ(p)), b)|` over the basis of `𝔞`.
pub fn momentum_residual(bundle: &CartanBundle, p: &BundlePoint) -> Result<f64> {
    let j = bundle.momentum_at(p)?;
    let mut worst: f64 = 0.0;
    for b in bundle.pair().a_basis() {
        worst = worst.max(kappa_a(bundle.pair(), &j, &b)?.abs());
    }
    Ok(worst)
}

fn psi_closed(bundle: &CartanBundle, p: &BundlePoint) -> Result<f64> {
    let n = vec_norm(&bundle.chi_vector(p));
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Numeric("orbit representative degenerated".into()));
    }
    Ok(n.ln())
}

/// Steepest descent of Ψ along `i𝔪` with Armijo backtracking.
pub fn find_momentum_zero(
    bundle: &CartanBundle,
    start: BundlePoint,
    tol: f64,
    max_iter: usize,
) -> Result<BundlePoint> {
    if !(tol > 0.0) {
        return Err(Error::Config("descent tolerance must be positive".into()));
    }
    let pair = bundle.pair();
    let im = pair.im_basis();
    let mut p = start;
    let mut prev: Option<(Vec<f64>, f64)> = None;
    for iter in 0..max_iter {
        let j = bundle.momentum_at(&p)?;
        let g: Vec<f64> = im.iter().map(|b| kappa_a(pair, &j, b)).collect::<Result<_>>()?;
        let gmax = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if gmax < tol {
            return Ok(p);
        }
        let g2: f64 = g.iter().map(|x| x * x).sum();
        let mut dir = CMat::zeros(pair.size(), pair.size());
        for (b, &x) in im.iter().zip(&g) {
            dir += b.matrix().scale(x);
        }
        let dir = AlgebraElement::raw(dir, pair.ambient_tag());
        let psi0 = psi_closed(bundle, &p)?;
        // Barzilai-Borwein trial step from the last accepted move
        let mut tau = match &prev {
            Some((gp, tp)) => {
                let sy: f64 = gp.iter().zip(&g).map(|(a, b)| a * (a - b)).sum::<f64>() * tp;
                let ss: f64 = gp.iter().map(|a| a * a).sum::<f64>() * tp * tp;
                if sy > 0.0 { (ss / sy).clamp(1e-6, 1e6) } else { 1.0 }
            }
            None => 1.0,
        };
        loop {
            // an overflowing trial step counts as a rejected one
            let trial = bundle.geodesic(&p, &dir, -tau).and_then(|q| Ok((psi_closed(bundle, &q)?, q)));
            match trial {
                Ok((psi1, q)) if psi1 <= psi0 - 1e-4 * tau * g2 => {
                    p = q;
                    prev = Some((g.clone(), tau));
                    break;
                }
                Ok(_) | Err(Error::Numeric(_)) => {}
                Err(e) => return Err(e),
            }
            tau *= 0.5;
            if tau < 1e-14 {
                // no further decrease is resolvable in floating point
                if gmax < 1e3 * tol {
                    return Ok(p);
                }
                return Err(Error::LineSearch(format!("Armijo step underflow at iteration {}", iter)));
            }
        }
        let radius = fro_norm(&hermitian_function(&(p.matrix() * p.matrix().adjoint()), |l| 0.5 * l.ln()));
        if !(radius < DIVERGENCE_RADIUS) {
            return Err(Error::NonConvergence {
                iterations: iter + 1,
                detail: if radius.is_finite() {
                    format!("iterate left every compact set (polar radius {:.1})", radius)
                } else {
                    "iterate left every compact set (polar radius overflowed)".into()
                },
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        detail: "momentum residual still above tolerance".into(),
    })
}

/// `min_z ‖a₀†a₀ − z†a₁†a₁z‖` over `z = exp(Σ c_k ζ_k)` in the stabilizer of `m`.
pub fn unique_mod_stabilizer_defect(
    bundle: &CartanBundle,
    p0: &BundlePoint,
    p1: &BundlePoint,
) -> Result<f64> {
    for p in [p0, p1] {
        if momentum_residual(bundle, p)? > ZERO_PRECONDITION_TOL {
            return Err(Error::Precondition("point is not a momentum zero".into()));
        }
    }
    let stab = bundle.stabilizer_basis(&bundle.identity_point(), STABILIZER_CUTOFF)?;
    let h0 = gram(p0.matrix());
    let h1 = gram(p1.matrix());
    let zs: Vec<CMat> = stab.elements.iter().map(|z| z.matrix().clone()).collect();
    let eval = |c: &[f64]| -> Result<f64> {
        let mut x = CMat::zeros(h0.nrows(), h0.ncols());
        for (z, &ck) in zs.iter().zip(c) {
            x += z.scale(ck);
        }
        let z = expm(&x)?;
        Ok(fro_norm(&(&h0 - z.adjoint() * &h1 * &z)))
    };
    if zs.is_empty() {
        return eval(&[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best = f64::INFINITY;
    for restart in 0..50 {
        let mut c: Vec<f64> = if restart == 0 {
            vec![0.0; zs.len()]
        } else {
            (0..zs.len()).map(|_| sample::normal(&mut rng)).collect()
        };
        let mut f = eval(&c)?;
        let mut step = 1.0;
        while step > 1e-12 {
            let mut improved = false;
            for k in 0..c.len() {
                for s in [step, -step] {
                    let mut trial = c.clone();
                    trial[k] += s;
                    let ft = eval(&trial)?;
                    if ft < f {
                        f = ft;
                        c = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(f);
        if best < 1e-12 {
            break;
        }
    }
    Ok(best)
}
