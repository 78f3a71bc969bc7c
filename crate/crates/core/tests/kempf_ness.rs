use cartan_git::cartan::{BundlePoint, CartanBundle};
use cartan_git::hamiltonian::{LinearAction, ProjectivePoint, WeightMatrix};
use cartan_git::kempf_ness::*;
use cartan_git::lie::{AlgebraElement, KleinPair};
use cartan_git::linalg::{c, expm, vec_norm};
use cartan_git::sample;
use cartan_git::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn certified(act: LinearAction, v: &[f64]) -> CartanBundle {
    let mut b = CartanBundle::new(act, ProjectivePoint::from_real(v).unwrap()).unwrap();
    b.certify(4, 3).unwrap();
    b
}

fn sl2(v: &[f64]) -> CartanBundle {
    certified(LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap(), v)
}

#[test]
fn profile_matches_direct_norm_growth() {
    let b = sl2(&[0.6, 0.8]);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let xi = sample::im_element(b.pair(), 1.0, &mut rng);
    let ray = GeodesicRay::uniform(&b, b.identity_point(), xi.clone(), 1.5, 6).unwrap();
    let prof = kn_profile(&ray).unwrap();
    let v = b.base().vector().clone();
    for (t, psi) in prof.ts.iter().zip(&prof.psi) {
        // ξ ∈ i𝔪 is Hermitian and the ray is exp(tξ)
        let want = vec_norm(&(expm(&xi.matrix().scale(*t)).unwrap() * &v)).ln();
        assert!((psi - want).abs() < 1e-9, "{} {} {}", t, psi, want);
    }
}

#[test]
fn loop_legs_are_nontrivial() {
    let b = sl2(&[1.0, 1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let start = BundlePoint::new(sample::complex_group_element(b.pair(), 0.5, &mut rng).unwrap());
    let xa = sample::a_element(b.pair(), 0.7, &mut rng);
    let xb = sample::a_element(b.pair(), 0.7, &mut rng);
    let lp = GeodesicLoop::triangle(&b, start, xa, xb).unwrap();
    let mut p = lp.start.clone();
    let mut legs = Vec::new();
    for leg in &lp.legs {
        let prof = kn_profile(&GeodesicRay::uniform(&b, p.clone(), leg.clone(), 1.0, 1).unwrap()).unwrap();
        legs.push(prof.psi[1]);
        p = b.geodesic(&p, leg, 1.0).unwrap();
    }
    assert!(legs.iter().map(|x| x.abs()).fold(0.0, f64::max) > 1e-2, "{:?}", legs);
    assert!(legs.iter().sum::<f64>().abs() < 1e-9);
}

#[test]
fn sl2_descent_diverges_on_the_nullcone() {
    let b = sl2(&[1.0, 0.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let start = BundlePoint::new(sample::complex_group_element(b.pair(), 0.5, &mut rng).unwrap());
    // a single vector is never polystable for SL(2) acting on C^2
    assert!(matches!(find_momentum_zero(&b, start, 1e-8, 400), Err(Error::NonConvergence { .. }) | Err(Error::LineSearch(_))));
}

#[test]
fn sl2_points_are_unstable() {
    let b = sl2(&[1.0, 0.0]);
    let plan = SamplingPlan { radius: 2, conjugations: 4, ..SamplingPlan::default() };
    let v = ProjectivePoint::from_real(&[0.6, 0.8]).unwrap();
    let verdict = classify_stability(&b, &v, &plan).unwrap();
    assert_eq!(verdict.label, StabilityLabel::Unstable);
    assert!(verdict.slope < 0.0);
}

#[test]
fn profile_needs_a_certificate() {
    let act = LinearAction::torus(WeightMatrix::scalar(&[1, -1]).unwrap()).unwrap();
    let b = CartanBundle::new(act, ProjectivePoint::from_real(&[1.0, 1.0]).unwrap()).unwrap();
    let ray = GeodesicRay::uniform(&b, b.identity_point(), AlgebraElement::complex_torus(&[c(1.0, 0.0)]), 1.0, 2).unwrap();
    assert!(matches!(kn_profile(&ray), Err(Error::Precondition(_))));
}

#[test]
fn ray_grids_start_at_zero() {
    let b = sl2(&[1.0, 0.0]);
    let xi = AlgebraElement::complex_torus(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    assert!(GeodesicRay::new(&b, b.identity_point(), xi, vec![0.5, 1.0]).is_err());
}

/// Rank-one hull test: zero is interior iff weights of both signs occur.
fn rank_one_label(ws: &[i32]) -> StabilityLabel {
    let (lo, hi) = (*ws.iter().min().unwrap(), *ws.iter().max().unwrap());
    if lo < 0 && hi > 0 {
        StabilityLabel::Stable
    } else if lo == 0 || hi == 0 {
        StabilityLabel::Semistable
    } else {
        StabilityLabel::Unstable
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn hull_oracle_matches_rank_one_rule(ws in prop::collection::vec(-3i32..=3, 1..5)) {
        let w = WeightMatrix::scalar(&ws).unwrap();
        let v = ProjectivePoint::from_real(&vec![1.0; ws.len()]).unwrap();
        let verdict = hm_oracle_torus(&w, &v).unwrap();
        prop_assert_eq!(verdict.label, rank_one_label(&ws));
    }

    #[test]
    fn classifier_matches_rank_one_rule(ws in prop::collection::vec(-3i32..=3, 2..5)) {
        let w = WeightMatrix::scalar(&ws).unwrap();
        let ones = vec![1.0; ws.len()];
        let b = certified(LinearAction::torus(w).unwrap(), &ones);
        let v = ProjectivePoint::from_real(&ones).unwrap();
        let verdict = classify_stability(&b, &v, &SamplingPlan::default()).unwrap();
        prop_assert_eq!(verdict.label, rank_one_label(&ws));
    }
}
