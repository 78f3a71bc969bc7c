//! Numerical thresholds shared by the library, the CLI and the test suites.

/// Relative residual allowed when checking membership in a subalgebra.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Relative slack when validating structural invariants of a matrix.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Step for central finite differences of the momentum map.
pub const FD_STEP: f64 = 1e-5;
/// Step for the second-derivative estimate in Kempf-Ness profiles.
pub const PROFILE_FD_STEP: f64 = 1e-4;

/// `|d⟨J, ξ⟩(X) − ω(Xξ, X)|` over sampled triples.
pub const MOMENTUM_DEFECT_TOL: f64 = 1e-6;
/// Nonequivariance cocycle must vanish to this level.
pub const SIGMA_TOL: f64 = 1e-10;
/// `𝔞`-equivariance defect of the bundle momentum map.
pub const EQUIVARIANCE_TOL: f64 = 1e-5;
/// `|dΨ/dt − κ_𝔞(J, ξ)|`.
pub const KN_DERIVATIVE_TOL: f64 = 1e-6;
/// Closed-form Kempf-Ness profiles, absolute.
pub const KN_CLOSED_FORM_TOL: f64 = 1e-8;
/// `Ψ″(0)` against its closed form.
pub const KN_SECOND_DERIVATIVE_TOL: f64 = 1e-6;
/// Second differences of `Ψ` may dip this far below zero.
pub const CONVEXITY_FLOOR: f64 = 1e-8;
/// `Ψ″` against `‖ξ·χ‖²`.
pub const KN_CONVEXITY_TOL: f64 = 1e-4;
/// `|∮α|` on closed loops.
pub const PATH_INDEPENDENCE_TOL: f64 = 1e-5;
pub const SLOPE_TOL: f64 = 1e-6;
pub const MOMENTUM_ZERO_TOL: f64 = 1e-8;
pub const UNIQUENESS_TOL: f64 = 1e-6;
/// Relative spread of the Futaki invariant over bundle points.
pub const FUTAKI_SPREAD_TOL: f64 = 1e-5;
/// `|F|` on commutators and nilpotents.
pub const CHARACTER_TOL: f64 = 1e-6;
pub const XI_SPREAD_TOL: f64 = 1e-10;
pub const EXTREMAL_TOL: f64 = 1e-10;
pub const CONDITION_LIMIT: f64 = 1e8;

/// Absolute singular-value cutoff for stabilizer computations.
pub const STABILIZER_CUTOFF: f64 = 1e-8;
/// Singular values closer than this ratio across the cutoff count as ambiguous.
pub const GAP_RATIO: f64 = 0.1;

/// Relative flatness of `dΨ/dt` between successive horizons for slope plateaus.
pub const PLATEAU_FLATNESS: f64 = 1e-9;

/// Round-sphere scalar curvature against 2.
pub const FS_CURVATURE_TOL: f64 = 1e-6;
pub const CP1_FUTAKI_TOL: f64 = 1e-4;
/// Relative gap between the two K-energy formulas.
pub const KENERGY_AGREEMENT_TOL: f64 = 1e-3;
/// Spread of the line-integral K-energy over paths with common endpoints.
pub const KENERGY_PATH_TOL: f64 = 1e-6;
/// Second differences of the K-energy along toric geodesics may dip this far below zero.
pub const KENERGY_CONVEXITY_FLOOR: f64 = 1e-6;
pub const LEGENDRE_ROUNDTRIP_TOL: f64 = 1e-8;
/// Observed error ratio on halving the step must lie in this band for order 2.
pub const ORDER_TWO_BAND: (f64, f64) = (3.0, 5.0);
pub const CSCK_DEFECT_TOL: f64 = 1e-3;
pub const DESCENT_MAX_ITERS: usize = 500;

pub const MASS_DRIFT_TOL: f64 = 1e-8;
pub const CONTINUITY_TOL: f64 = 1e-4;

/// Largest integration step allowed for characteristic ODEs on the circle.
pub const MAX_ODE_STEP: f64 = 1e-3;
