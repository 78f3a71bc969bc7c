use cartan_git::hamiltonian::*;
use cartan_git::lie::{AlgebraElement, GroupElement, KleinPair};
use cartan_git::linalg::{c, CVec};
use cartan_git::sample;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn torus_momentum_is_height_function() {
    // v = (cos a, sin a) under weights (1, -1): <J, i diag(x)> = x cos 2a
    let act = LinearAction::torus(WeightMatrix::scalar(&[1, -1]).unwrap()).unwrap();
    for a in [0.0, 0.3, 0.7, 1.2] {
        let m = ProjectivePoint::from_real(&[f64::cos(a), f64::sin(a)]).unwrap();
        let xi = AlgebraElement::torus(&[1.5]);
        let got = act.momentum_pairing(&m, xi.matrix());
        assert!((got - 1.5 * (2.0 * a).cos()).abs() < 1e-14, "{} {}", a, got);
    }
}

#[test]
fn su2_momentum_is_equivariant() {
    let act = LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let m = sample::point(2, &mut rng);
        let g = sample::compact_group_element(act.pair(), &mut rng).unwrap();
        assert!(act.cocycle_sigma(&g, &m).unwrap().norm() < 1e-12);
    }
}

#[test]
fn momentum_defect_on_larger_spaces() {
    let act = LinearAction::defining(KleinPair::sl_su(3).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let m = sample::point(3, &mut rng);
        let xi = sample::g_element(act.pair(), 1.0, &mut rng);
        let x = sample::tangent(&m, &mut rng);
        assert!(act.momentum_defect(&m, &xi, &x).unwrap() < 1e-6);
    }
}

#[test]
fn torus_actions_need_integer_weights_of_matching_rank() {
    assert!(WeightMatrix::new(vec![vec![1, 0], vec![1]]).is_err());
    let w = WeightMatrix::new(vec![vec![1, 2], vec![0, -1], vec![3, 3]]).unwrap();
    assert_eq!((w.rows(), w.rank()), (3, 2));
    assert_eq!(w.pair(0, &[1.0, -1.0]), -1.0);
}

#[test]
fn zero_vector_is_not_a_point() {
    assert!(ProjectivePoint::from_real(&[0.0, 0.0]).is_err());
}

#[test]
fn compact_group_acts_by_isometries() {
    let act = LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = sample::point(2, &mut rng);
    let g: GroupElement = sample::compact_group_element(act.pair(), &mut rng).unwrap();
    let gm = act.act(&g, &m).unwrap();
    assert!((gm.vector().norm() - 1.0).abs() < 1e-12);
}

fn arb_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3)
}

proptest! {
    #[test]
    fn points_forget_phase(zs in arb_vec(), phase in 0.0f64..std::f64::consts::TAU) {
        let v = CVec::from_iterator(3, zs.iter().map(|(a, b)| c(*a, *b)));
        prop_assume!(v.norm() > 1e-3);
        let p = ProjectivePoint::new(v.clone()).unwrap();
        let q = ProjectivePoint::new(v * c(phase.cos(), phase.sin())).unwrap();
        prop_assert!(p.distance_like(&q) < 1e-12);
    }

    #[test]
    fn metric_is_compatible(zs in arb_vec(), xs in arb_vec(), ys in arb_vec()) {
        let v = CVec::from_iterator(3, zs.iter().map(|(a, b)| c(*a, *b)));
        prop_assume!(v.norm() > 1e-3);
        let m = ProjectivePoint::new(v).unwrap();
        let x = TangentVector::new(&m, CVec::from_iterator(3, xs.iter().map(|(a, b)| c(*a, *b)))).unwrap();
        let y = TangentVector::new(&m, CVec::from_iterator(3, ys.iter().map(|(a, b)| c(*a, *b)))).unwrap();
        let w = symplectic_form(&x, &y).unwrap();
        prop_assert!((w + symplectic_form(&y, &x).unwrap()).abs() < 1e-12);
        let g = metric(&x, &y).unwrap();
        prop_assert!((g - symplectic_form(&x, &complex_structure(&y)).unwrap()).abs() < 1e-12);
    }
}
