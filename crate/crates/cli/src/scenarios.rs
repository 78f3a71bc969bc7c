//! One pipeline per subcommand: validate, certify, compute, check.

use cartan_git::cartan::CartanBundle;
use cartan_git::futaki::{self, MForm};
use cartan_git::kahler_cp1::{
    futaki_cp1, geodesic_residual, k_energy_chentian, k_energy_descent, k_energy_kempf1, scalar_curvature,
    toric_geodesic, KahlerPotential1D, PotentialPath, SymplecticPotential1D,
};
use cartan_git::kempf_ness::{self as kn, GeodesicRay, SamplingPlan, StabilityLabel};
use cartan_git::lie::AlgebraElement;
use cartan_git::linalg::vec_norm;
use cartan_git::sample;
use cartan_git::tolerances::*;
use cartan_git::wasserstein::{
    cartan_geodesic_trajectory, continuity_residual, DensityOnCircle, DensityTrajectory, PotentialFunction,
};
use cartan_git::Error;
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{write_csv, Report};
use crate::target::{in_im, parse_reals, Group, Target, TargetArgs};
use crate::{Ctx, Failure};

/// Constructor errors are the caller's fault; everything else is a failed run.
fn input<T>(r: cartan_git::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Config(_) | Error::Shape(_) | Error::Domain(_) => Failure::usage(e),
        other => other.into(),
    })
}

fn certified(t: &Target, seed: u64, rep: &mut Report) -> Result<CartanBundle, Failure> {
    let mut b = t.bundle()?;
    let cert = b.certify(8, seed)?;
    if !cert.passed {
        rep.holds("equivariance certificate", "momentum map equivariance", false);
        return Err(Failure::Run("bundle failed its equivariance certificate".into()));
    }
    Ok(b)
}

/// `diag(1, −1, 0, …)` written as a direction string for `t`.
fn default_direction(t: &Target) -> String {
    let n = t.size();
    let entries: Vec<f64> = match &t.group {
        Group::Torus(_) => (0..n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect(),
        Group::SpecialLinear(_) => (0..n * n)
            .map(|k| match k {
                0 => 1.0,
                k if k == n + 1 => -1.0,
                _ => 0.0,
            })
            .collect(),
    };
    entries.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn direction(t: &Target, given: &Option<String>, b: &CartanBundle) -> Result<AlgebraElement, Failure> {
    let s = given.clone().unwrap_or_else(|| default_direction(t));
    t.direction(&s, b.pair())
}

fn a_coords(b: &CartanBundle, x: &AlgebraElement) -> Value {
    b.pair().a_coords(x.matrix()).map(Value::from).unwrap_or(Value::Null)
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--{} must be positive", name)))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    /// Random samples per invariant
    #[arg(long, default_value_t = 8)]
    samples: usize,
}

pub fn certify(ctx: &Ctx, a: &CertifyArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("sl2", "1,-1", "0.6,0.8")?;
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let mut b = t.bundle()?;
    let cert = b.certify(a.samples, ctx.seed)?;
    rep.below(
        "momentum defining relation",
        "momentum map: d<J, xi> = omega(rho(xi), .)",
        cert.max_momentum_defect,
        ctx.tol_or(MOMENTUM_DEFECT_TOL),
    );
    rep.below("equivariance cocycle", "non-equivariance 2-cocycle", cert.max_sigma, SIGMA_TOL);
    rep.below(
        "a-equivariance of the Calabi operator",
        "a-equivariant momentum map",
        cert.max_equivariance_defect,
        EQUIVARIANCE_TOL,
    );
    let stab = b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF)?;
    rep.result("group", json!(t.label()));
    rep.result("stabilizer_real_dim", json!(stab.dim()));
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FutakiConstancyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    /// Stabilizer element: torus diagonal or row-major matrix
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Norm bound of the sampled exponentials
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

fn stabilizing(b: &CartanBundle, z: &AlgebraElement) -> Result<(), Failure> {
    let moved = b.action().inf_action(z, b.base())?;
    if vec_norm(moved.vector()) > 1e-8 * z.norm().max(1.0) {
        return Err(Failure::Usage("zeta does not stabilize the base point".into()));
    }
    Ok(())
}

pub fn futaki_constancy(ctx: &Ctx, a: &FutakiConstancyArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("sl2", "1,-1", "1,0")?;
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    if !(a.radius >= 0.0 && a.radius.is_finite()) {
        return Err(Failure::Usage("--radius must be non-negative".into()));
    }
    let b = certified(&t, ctx.seed, rep)?;
    let zeta = direction(&t, &a.zeta, &b)?;
    stabilizing(&b, &zeta)?;
    let r = futaki::futaki_constancy(&b, &zeta, a.samples, a.radius, ctx.seed)?;
    // a vanishing invariant has no relative spread to speak of
    if r.mean.abs() > CHARACTER_TOL {
        rep.below(
            "relative spread of F",
            "constancy of the generalized Futaki invariant",
            r.spread / r.mean.abs(),
            ctx.tol_or(FUTAKI_SPREAD_TOL),
        );
    } else {
        let worst = r.samples.iter().map(|(_, f)| f.abs()).fold(0.0, f64::max);
        rep.below("max |F| of a vanishing invariant", "constancy of the generalized Futaki invariant", worst, ctx.tol_or(CHARACTER_TOL));
    }
    rep.result("zeta", a_coords(&b, &zeta));
    rep.result("mean", json!(r.mean));
    rep.result("spread", json!(r.spread));
    rep.result("samples", json!(r.samples.iter().map(|(_, f)| *f).collect::<Vec<_>>()));
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FutakiCharacterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
}

pub fn futaki_character(ctx: &Ctx, a: &FutakiCharacterArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("sl2", "1,-1", "1,0")?;
    let b = certified(&t, ctx.seed, rep)?;
    let basis = b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF)?;
    let mut worst: f64 = 0.0;
    for (i, zi) in basis.elements.iter().enumerate() {
        for zj in &basis.elements[i + 1..] {
            worst = worst.max(futaki::character_defect(&b, zi, zj)?);
        }
    }
    rep.below(
        "max |F| on stabilizer brackets",
        "the Futaki invariant is a character",
        worst,
        ctx.tol_or(CHARACTER_TOL),
    );
    rep.result("stabilizer_real_dim", json!(basis.dim()));
    rep.result("futaki_vector", json!(futaki::futaki_vector(&b, &basis)?));
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KnProfileArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    /// Ray direction: torus diagonal or row-major matrix
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

pub fn kn_profile(ctx: &Ctx, a: &KnProfileArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("sl2", "1,-1", "0.6,0.8")?;
    positive("t-max", a.t_max)?;
    let b = certified(&t, ctx.seed, rep)?;
    let xi = direction(&t, &a.direction, &b)?;
    let ray = input(GeodesicRay::uniform(&b, b.identity_point(), xi.clone(), a.t_max, a.steps))?;
    let prof = kn::kn_profile(&ray)?;
    rep.below(
        "max |Psi - log norm growth|",
        "Kempf-Ness function of a linear action",
        prof.closed_form_gap(),
        ctx.tol_or(KN_CLOSED_FORM_TOL),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = sample::complex_group_element(b.pair(), 1.0, &mut rng)?;
        let zeta = sample::a_element(b.pair(), 1.0, &mut rng);
        let v = sample::point(b.action().dim(), &mut rng);
        worst = worst.max(kn::kn_derivative_identity_defect(b.action(), &g, &zeta, &v)?);
    }
    rep.below("derivative identity defect", "derivative of the Kempf-Ness function", worst, KN_DERIVATIVE_TOL);

    if in_im(b.pair(), &xi) {
        let lowest = prof.psi.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::INFINITY, f64::min);
        rep.at_least("min second difference of Psi", "convexity along geodesics", lowest, CONVEXITY_FLOOR);
        rep.below("max |Psi'' - |xi.chi|^2|", "convexity along geodesics", prof.convexity_gap(), KN_CONVEXITY_TOL);
    }
    rep.result("direction", a_coords(&b, &xi));
    write_csv(
        rep,
        ctx.out,
        "profile",
        &["t", "psi", "dpsi", "d2psi"],
        (0..prof.ts.len()).map(|k| vec![prof.ts[k], prof.psi[k], prof.dpsi[k], prof.d2psi[k]]),
    )?;
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SlopeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    /// Largest time of the doubling search
    #[arg(long, default_value_t = 4096.0)]
    horizon: f64,
}

/// Largest eigenvalue of the represented `ξ` among eigenvectors meeting `v`.
fn growth_rate(b: &CartanBundle, xi: &AlgebraElement) -> f64 {
    let m = b.action().rep_algebra(xi.matrix());
    let eig = m.symmetric_eigen();
    let v = b.base().vector();
    let scale = vec_norm(v);
    (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvectors.column(k).dotc(v).norm() > 1e-12 * scale)
        .map(|k| eig.eigenvalues[k])
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn slope(ctx: &Ctx, a: &SlopeArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("torus", "1,-1", "1,1")?;
    let b = certified(&t, ctx.seed, rep)?;
    let xi = direction(&t, &a.direction, &b)?;
    let ray = input(GeodesicRay::uniform(&b, b.identity_point(), xi.clone(), 1.0, 1))?;
    let s = input(kn::slope(&ray, a.horizon))?;
    rep.holds("derivative plateau reached", "slope as a limit of dPsi/dt", s.converged);
    if in_im(b.pair(), &xi) {
        let oracle = growth_rate(&b, &xi);
        rep.below("|slope - top weight on the support|", "slope of a geodesic ray", (s.slope - oracle).abs(), ctx.tol_or(SLOPE_TOL));
        rep.result("oracle", json!(oracle));
    }
    rep.result("slope", json!(s.slope));
    rep.result("horizon", json!(s.horizon));
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct StabilityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    /// Sup-norm bound of the sampled integer directions
    #[arg(long, default_value_t = 3)]
    radius: i32,
    /// Random unitary conjugates per direction (non-abelian groups)
    #[arg(long, default_value_t = 0)]
    conjugations: usize,
}

pub fn stability(ctx: &Ctx, a: &StabilityArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("torus", "1,-1", "1,1")?;
    if a.radius < 1 {
        return Err(Failure::Usage("--radius must be at least 1".into()));
    }
    let b = certified(&t, ctx.seed, rep)?;
    let v = t.point()?;
    let plan = SamplingPlan { radius: a.radius, conjugations: a.conjugations, seed: ctx.seed, ..SamplingPlan::default() };
    let verdict = kn::classify_stability(&b, &v, &plan)?;
    match t.weights() {
        Some(w) => {
            let oracle = kn::hm_oracle_torus(w, &v)?;
            rep.holds("label matches Hilbert-Mumford", "stability via slopes", verdict.label == oracle.label);
            let vs = v.vector();
            let best = (0..w.rows())
                .filter(|&i| vs[i].norm() > 0.0)
                .map(|i| w.pair(i, &verdict.witness))
                .fold(f64::NEG_INFINITY, f64::max);
            rep.below(
                "|slope - max weight pairing at witness|",
                "slope of a geodesic ray",
                (verdict.slope - best).abs(),
                ctx.tol_or(SLOPE_TOL),
            );
            rep.result("oracle", json!({"label": oracle.label.as_str(), "slope": oracle.slope}));
        }
        None => {
            // the defining representation has no invariants: everything is in the null cone
            rep.holds(
                "defining action is unstable",
                "stability via slopes",
                verdict.label == StabilityLabel::Unstable,
            );
        }
    }
    rep.result(
        "verdict",
        json!({"label": verdict.label.as_str(), "slope": verdict.slope, "witness": verdict.witness}),
    );
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DescendArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
    /// Independent random starts
    #[arg(long, default_value_t = 2)]
    starts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Distance of each start from the identity along a random i𝔪 geodesic
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

pub fn descend(ctx: &Ctx, a: &DescendArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("torus", "1,1;-1,-1", "1,1")?;
    if a.starts == 0 || a.max_iter == 0 {
        return Err(Failure::Usage("--starts and --max-iter must be positive".into()));
    }
    if !(a.radius >= 0.0 && a.radius.is_finite()) {
        return Err(Failure::Usage("--radius must be non-negative".into()));
    }
    let b = certified(&t, ctx.seed, rep)?;
    let tol = ctx.tol_or(MOMENTUM_ZERO_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut zeros = Vec::new();
    for _ in 0..a.starts {
        let xi = sample::im_element(b.pair(), 1.0, &mut rng);
        let start = b.geodesic(&b.identity_point(), &xi, a.radius)?;
        zeros.push(kn::find_momentum_zero(&b, start, tol, a.max_iter)?);
    }
    let residual = zeros
        .iter()
        .map(|p| kn::momentum_residual(&b, p))
        .collect::<cartan_git::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    rep.below("max momentum residual at the zeros", "zeros of the momentum map", residual, tol);
    let mut worst: f64 = 0.0;
    for w in zeros.windows(2) {
        worst = worst.max(kn::unique_mod_stabilizer_defect(&b, &w[0], &w[1])?);
    }
    if zeros.len() > 1 {
        rep.below("uniqueness defect", "zeros are unique modulo the stabilizer", worst, UNIQUENESS_TOL);
    }
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExtremalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    target: TargetArgs,
}

pub fn extremal(ctx: &Ctx, a: &ExtremalArgs, rep: &mut Report) -> Result<(), Failure> {
    let t = a.target.resolve("torus", "1,-1", "1,0")?;
    let b = certified(&t, ctx.seed, rep)?;
    let basis = b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF)?;
    if basis.dim() == 0 {
        rep.holds("stabilizer is trivial", "extremal elements", true);
        rep.result("zeta_m", Value::Null);
        return Ok(());
    }
    let mform = MForm::trace(&b);
    let form = futaki::xi_form(&b, &b.identity_point(), &basis, &mform)?;
    let z = futaki::extremal_element(&b, &basis, &form)?;
    let residual = futaki::extremal_residual(&b, &basis, &mform, &z)?;
    rep.below("extremal equation residual", "extremal elements", residual, ctx.tol_or(EXTREMAL_TOL));
    let spread = futaki::xi_form_spread(&b, &basis, &mform, 10, ctx.seed)?;
    // constant over the whole bundle only when the stabilizer acts abelianly;
    // otherwise the form is merely unitarily invariant and the spread is informational
    if t.weights().is_some() {
        rep.below("stabilizer form spread over the bundle", "invariance of the stabilizer form", spread, XI_SPREAD_TOL);
    }
    rep.result("stabilizer_form_spread", json!(spread));
    rep.result("stabilizer_real_dim", json!(basis.dim()));
    rep.result("futaki_vector", json!(futaki::futaki_vector(&b, &basis)?));
    rep.result("zeta_m", a_coords(&b, &z));
    Ok(())
}

/// `(1 − x²)² · Σ cₖ xᵏ`, which keeps the boundary behaviour of the round metric.
fn perturbation(n: usize, coeffs: &[f64]) -> cartan_git::Result<SymplecticPotential1D> {
    SymplecticPotential1D::from_fn(n, |x| {
        let poly: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        (1.0 - x * x).powi(2) * poly
    })
}

fn potential_csv(rep: &mut Report, ctx: &Ctx, stem: &str, u: &SymplecticPotential1D) -> Result<(), Failure> {
    let sc = scalar_curvature(u)?;
    let (xs, s, upp) = (u.nodes(), u.correction().to_vec(), u.u_second());
    write_csv(
        rep,
        ctx.out,
        stem,
        &["x", "s", "u2", "S"],
        (0..xs.len()).map(|k| vec![xs[k], s[k], upp[k], sc.values[k]]),
    )?;
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Cp1FutakiArgs {
    /// Grid intervals (even)
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Coefficients c_k of the correction (1 - x^2)^2 sum c_k x^k
    #[arg(long, default_value = "0.05,0.02,-0.03", allow_hyphen_values = true)]
    coeffs: String,
}

pub fn cp1_futaki(ctx: &Ctx, a: &Cp1FutakiArgs, rep: &mut Report) -> Result<(), Failure> {
    let coeffs = parse_reals(&a.coeffs)?;
    let u = input(perturbation(a.n, &coeffs))?;
    let sc = scalar_curvature(&u)?;
    rep.below("|Futaki invariant|", "Futaki integral on CP1", futaki_cp1(&u)?.abs(), ctx.tol_or(CP1_FUTAKI_TOL));
    if coeffs.iter().all(|c| *c == 0.0) {
        let dev = sc.values.iter().map(|v| (v - 2.0).abs()).fold(0.0, f64::max);
        rep.below("round metric |S - 2|", "scalar curvature of the round sphere", dev, FS_CURVATURE_TOL);
    }
    rep.result("total_curvature", json!(sc.total()));
    rep.result("average_curvature", json!(sc.average));
    rep.result("sup_defect", json!(sc.sup_defect()));
    potential_csv(rep, ctx, "potential", &u)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Cp1KenergyArgs {
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value = "0.05,0.02,-0.03", allow_hyphen_values = true)]
    coeffs: String,
    /// Time steps of the sampled paths (even, at least 4)
    #[arg(long, default_value_t = 8)]
    path_steps: usize,
    /// Size of the detour used for the path-independence check
    #[arg(long, default_value_t = 0.03)]
    detour: f64,
}

pub fn cp1_kenergy(ctx: &Ctx, a: &Cp1KenergyArgs, rep: &mut Report) -> Result<(), Failure> {
    let coeffs = parse_reals(&a.coeffs)?;
    let u0 = input(SymplecticPotential1D::fubini_study(a.n))?;
    let u1 = input(perturbation(a.n, &coeffs))?;
    if !a.detour.is_finite() {
        return Err(Failure::Usage("--detour must be finite".into()));
    }
    let straight = input(PotentialPath::sample(a.path_steps, |t| toric_geodesic(&u0, &u1, t)))?;
    let d = a.detour;
    let bent = PotentialPath::sample(a.path_steps, |t| {
        let base = toric_geodesic(&u0, &u1, t)?;
        let extra = perturbation(a.n, &[d * t * (1.0 - t), -0.7 * d * t * (1.0 - t)])?;
        base.combine(&extra, 1.0, 1.0)
    })?;
    let e_straight = k_energy_kempf1(&straight)?;
    let e_bent = k_energy_kempf1(&bent)?;
    let ct = k_energy_chentian(&u1)?;
    let gap = (e_straight - ct.value).abs() / ct.value.abs().max(f64::MIN_POSITIVE);
    rep.below("Kempf-Ness/Chen-Tian relative gap", "K-energy via the Chen-Tian formula", gap, ctx.tol_or(KENERGY_AGREEMENT_TOL));
    rep.below("path dependence of the integral", "K-energy as a Kempf-Ness functional", (e_straight - e_bent).abs(), KENERGY_PATH_TOL);
    rep.at_least("K-energy relative to the round metric", "round metric minimizes the K-energy", ct.value, 0.0);
    rep.result("kempf_ness", json!(e_straight));
    rep.result("kempf_ness_detour", json!(e_bent));
    rep.result(
        "chen_tian",
        json!({"value": ct.value, "entropy": ct.entropy, "energy": ct.energy, "ricci": ct.ricci}),
    );
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Cp1GeodesicArgs {
    /// Coarse grid; the order check also runs at twice this size
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value = "0.1,0.05", allow_hyphen_values = true)]
    coeffs: String,
    /// Interior times where the geodesic equation is tested
    #[arg(long, default_value = "0.25,0.5,0.75")]
    times: String,
    /// Half-width of the tested window in the complex coordinate
    #[arg(long, default_value_t = 2.0)]
    y_max: f64,
    /// K-energy samples along the geodesic
    #[arg(long, default_value_t = 10)]
    samples: usize,
}

pub fn cp1_geodesic(ctx: &Ctx, a: &Cp1GeodesicArgs, rep: &mut Report) -> Result<(), Failure> {
    let coeffs = parse_reals(&a.coeffs)?;
    let times = parse_reals(&a.times)?;
    positive("y-max", a.y_max)?;
    if a.samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let line = |t: f64| (1.0 - t, t);
    let mut residuals = Vec::new();
    for n in [a.n, 2 * a.n] {
        let u0 = input(SymplecticPotential1D::fubini_study(n))?;
        let u1 = input(perturbation(n, &coeffs))?;
        residuals.push((n, input(geodesic_residual(&u0, &u1, &line, &times, a.y_max))?));
    }
    let ratio = residuals[0].1 / residuals[1].1;
    rep.within("geodesic residual halving ratio", "metric geodesic equation", ratio, ORDER_TWO_BAND);

    let u0 = input(SymplecticPotential1D::fubini_study(a.n))?;
    let u1 = input(perturbation(a.n, &coeffs))?;
    let mut energies = Vec::new();
    for k in 0..=a.samples {
        let t = k as f64 / a.samples as f64;
        energies.push((t, k_energy_chentian(&toric_geodesic(&u0, &u1, t)?)?.value));
    }
    let lowest = energies.windows(3).map(|w| w[0].1 - 2.0 * w[1].1 + w[2].1).fold(f64::INFINITY, f64::min);
    rep.at_least(
        "min K-energy second difference",
        "K-energy is convex along geodesics",
        lowest,
        ctx.tol_or(KENERGY_CONVEXITY_FLOOR),
    );
    let roundtrip = KahlerPotential1D::from_symplectic(&u1).roundtrip_residual(&u1);
    rep.below("Legendre round trip", "Legendre duality of potentials", roundtrip, LEGENDRE_ROUNDTRIP_TOL);
    rep.result("residuals", json!(residuals.iter().map(|(n, r)| json!({"n": n, "residual": r})).collect::<Vec<_>>()));
    write_csv(rep, ctx.out, "kenergy", &["t", "E"], energies.iter().map(|(t, e)| vec![*t, *e]))?;
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Cp1DescendArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value = "0.05,0.03", allow_hyphen_values = true)]
    coeffs: String,
    /// Largest Newton step
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = DESCENT_MAX_ITERS)]
    iters: usize,
}

pub fn cp1_descend(ctx: &Ctx, a: &Cp1DescendArgs, rep: &mut Report) -> Result<(), Failure> {
    let coeffs = parse_reals(&a.coeffs)?;
    positive("step", a.step)?;
    let u = input(perturbation(a.n, &coeffs))?;
    let tol = ctx.tol_or(CSCK_DEFECT_TOL);
    let tr = k_energy_descent(&u, a.step, a.iters, tol)?;
    let last = tr.records.last().ok_or_else(|| Failure::Run("descent recorded nothing".into()))?;
    rep.below("final sup |S - S0|", "K-energy descent to constant scalar curvature", last.sup_defect, tol);
    rep.holds("descent converged", "K-energy descent to constant scalar curvature", tr.converged);
    let rise = tr.records.windows(2).map(|w| w[1].energy - w[0].energy).fold(0.0, f64::max);
    // equal energies within round-off count as a decrease
    let slack = 1e-12 * tr.records[0].energy.abs().max(1.0);
    rep.below("largest energy rise per step", "K-energy decreases along descent", rise, slack);
    rep.result("iterations", json!(last.iter));
    rep.result("final_energy", json!(last.energy));
    write_csv(
        rep,
        ctx.out,
        "descent",
        &["iter", "E", "sup_defect"],
        tr.records.iter().map(|r| vec![r.iter as f64, r.energy, r.sup_defect]),
    )?;
    potential_csv(rep, ctx, "potential", &tr.potential)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DensityGeodesicArgs {
    /// Circle nodes
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// Initial density: uniform or bump (1 + 0.3 cos x, normalized)
    #[arg(long, default_value = "uniform")]
    rho0: String,
    /// Generating function: cos, cos2 or mix (cos x + 0.3 sin 2x)
    #[arg(long, default_value = "cos")]
    potential: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    amplitude: f64,
    /// Write every k-th time slice to the CSV
    #[arg(long, default_value_t = 10)]
    csv_every: usize,
    /// Skip the rerun at doubled resolution
    #[arg(long)]
    no_refine: bool,
}

fn density_inputs(a: &DensityGeodesicArgs, n: usize) -> Result<(DensityOnCircle, PotentialFunction), Failure> {
    let rho = match a.rho0.as_str() {
        "uniform" => input(DensityOnCircle::uniform(n))?,
        "bump" => input(DensityOnCircle::normalized_from_fn(n, |x| 1.0 + 0.3 * x.cos()))?,
        other => return Err(Failure::Usage(format!("unknown density '{}'", other))),
    };
    let amp = a.amplitude;
    let f = match a.potential.as_str() {
        "cos" => input(PotentialFunction::from_fn(n, |x| amp * x.cos()))?,
        "cos2" => input(PotentialFunction::from_fn(n, |x| amp * (2.0 * x).cos()))?,
        "mix" => input(PotentialFunction::from_fn(n, |x| amp * (x.cos() + 0.3 * (2.0 * x).sin())))?,
        other => return Err(Failure::Usage(format!("unknown potential '{}'", other))),
    };
    Ok((rho, f))
}

fn run_density(a: &DensityGeodesicArgs, n: usize, dt: f64, steps: usize) -> Result<(DensityTrajectory, f64), Failure> {
    let (rho, f) = density_inputs(a, n)?;
    let tr = cartan_geodesic_trajectory(&rho, &f, dt, steps)?;
    let res = continuity_residual(&tr, &f)?;
    Ok((tr, res))
}

pub fn density_geodesic(ctx: &Ctx, a: &DensityGeodesicArgs, rep: &mut Report) -> Result<(), Failure> {
    positive("dt", a.dt)?;
    positive("amplitude", a.amplitude.abs())?;
    if a.steps < 2 || a.csv_every == 0 {
        return Err(Failure::Usage("--steps must be at least 2 and --csv-every positive".into()));
    }
    density_inputs(a, a.n)?;
    let (tr, res) = run_density(a, a.n, a.dt, a.steps)?;
    let drift = tr.densities.iter().map(|d| (d.mass() - 1.0).abs()).fold(0.0, f64::max);
    rep.below("mass drift", "densities stay probability measures", drift, MASS_DRIFT_TOL);
    rep.below("continuity residual", "Cartan geodesics solve the continuity equation", res, ctx.tol_or(CONTINUITY_TOL));
    if !a.no_refine {
        let (_, fine) = run_density(a, 2 * a.n, 0.5 * a.dt, 2 * a.steps)?;
        rep.within("halving ratio", "second-order convergence of the residual", res / fine, ORDER_TWO_BAND);
        rep.result("fine_residual", json!(fine));
    }
    let grid = tr.densities[0].grid();
    let mut rows = Vec::new();
    for (k, (t, d)) in tr.times.iter().zip(&tr.densities).enumerate() {
        if k % a.csv_every == 0 || k + 1 == tr.times.len() {
            rows.extend(d.values().iter().enumerate().map(|(i, r)| vec![*t, i as f64, *r]));
        }
    }
    rep.result("nodes", json!(grid.len()));
    write_csv(rep, ctx.out, "trajectory", &["t", "node", "rho"], rows)?;
    Ok(())
}
