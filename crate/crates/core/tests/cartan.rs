use cartan_git::cartan::*;
use cartan_git::hamiltonian::{LinearAction, ProjectivePoint, WeightMatrix};
use cartan_git::lie::KleinPair;
use cartan_git::linalg::fro_norm;
use cartan_git::sample;
use cartan_git::tolerances::STABILIZER_CUTOFF;
use cartan_git::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sl2(v: &[f64]) -> CartanBundle {
    let act = LinearAction::defining(KleinPair::sl_su(2).unwrap()).unwrap();
    CartanBundle::new(act, ProjectivePoint::from_real(v).unwrap()).unwrap()
}

fn torus(ws: &[i32], v: &[f64]) -> CartanBundle {
    let act = LinearAction::torus(WeightMatrix::scalar(ws).unwrap()).unwrap();
    CartanBundle::new(act, ProjectivePoint::from_real(v).unwrap()).unwrap()
}

#[test]
fn certificate_records_the_sampled_defects() {
    let mut b = sl2(&[0.6, 0.8]);
    let cert = b.certify(30, 4).unwrap();
    assert!(cert.passed);
    assert_eq!((cert.samples, cert.seed), (30, 4));
    assert!(cert.max_momentum_defect < 1e-6 && cert.max_equivariance_defect < 1e-5);
    assert_eq!(b.certificate(), Some(&cert));
    assert!(matches!(b.certify(0, 1), Err(Error::Config(_))));
}

#[test]
fn geodesics_form_a_one_parameter_family() {
    let b = sl2(&[1.0, 0.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = BundlePoint::new(sample::complex_group_element(b.pair(), 0.5, &mut rng).unwrap());
    let xi = sample::a_element(b.pair(), 1.0, &mut rng);
    let once = b.geodesic(&p, &xi, 0.7).unwrap();
    let twice = b.geodesic(&b.geodesic(&p, &xi, 0.3).unwrap(), &xi, 0.4).unwrap();
    assert!(fro_norm(&(once.matrix() - twice.matrix())) < 1e-12);
}

#[test]
fn theta_round_trips_under_a_twist() {
    let b = sl2(&[1.0, 1.0]).with_twist(Twist::new(0.5).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = BundlePoint::new(sample::complex_group_element(b.pair(), 0.5, &mut rng).unwrap());
    let xi = sample::a_element(b.pair(), 1.0, &mut rng);
    let back = b.theta(&p, &b.theta_inverse(&p, &xi).unwrap()).unwrap();
    assert!(fro_norm(&(back.matrix() - xi.matrix())) < 1e-12);
    assert!(Twist::new(0.0).is_err());
}

#[test]
fn stabilizer_dimensions() {
    // real dimensions: the Borel of sl(2), then complex lines
    let cases: [(CartanBundle, usize); 3] =
        [(sl2(&[1.0, 0.0]), 4), (torus(&[1, -1], &[1.0, 0.0]), 2), (torus(&[1, 1], &[1.0, 1.0]), 2)];
    for (b, dim) in cases {
        let s = b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF).unwrap();
        assert_eq!(s.dim(), dim);
        for z in &s.elements {
            let t = b.action().inf_action(z, b.base()).unwrap();
            assert!(t.vector().norm() < 1e-10);
        }
    }
    let b = torus(&[1, -1], &[1.0, 1.0]);
    assert_eq!(b.stabilizer_basis(&b.identity_point(), STABILIZER_CUTOFF).unwrap().dim(), 0);
}

#[test]
fn momentum_of_identity_point_is_base_momentum() {
    let b = sl2(&[0.6, 0.8]);
    let j = b.momentum_at(&b.identity_point()).unwrap();
    let direct = b.action().momentum(b.base()).unwrap();
    assert!(fro_norm(&(j.matrix() - direct.value().matrix())) < 1e-14);
}
