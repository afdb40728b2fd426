use proptest::prelude::*;

use ttolab::crofoot_clark::crofoot;
use ttolab::linalg::fro;
use ttolab::sample::Sampler;
use ttolab::tto::{build_tto, c_symmetry_residual, extract_symbol, is_tto};
use ttolab::type_algebra::{classify_type, TypeTag};
use ttolab::{BlaschkeProduct, CMatrix, Complex64, ModelSpace};

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.9f64, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn blaschke() -> impl Strategy<Value = BlaschkeProduct> {
    prop::collection::vec(disc_point(), 1..5).prop_map(|z| BlaschkeProduct::from_zeros(z).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unimodular_on_circle(u in blaschke(), t in -3.2..3.2f64) {
        let v = u.evaluate(Complex64::from_polar(1.0, t)).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugation_is_involutive_isometry(u in blaschke(), seed in any::<u64>()) {
        let space = ModelSpace::new(u).unwrap();
        let f = Sampler::new(seed).vector(space.dim());
        let cf = space.conjugate(&f);
        prop_assert!((cf.norm() - f.norm()).abs() < 1e-10 * f.norm());
        prop_assert!(space.conjugate(&cf).sub(&f).norm() < 1e-10 * f.norm());
    }

    #[test]
    fn built_operators_are_complex_symmetric(u in blaschke(), seed in any::<u64>()) {
        let space = ModelSpace::new(u).unwrap();
        let mut rng = Sampler::new(seed);
        let a = build_tto(&space, &rng.generic_symbol(&space)).unwrap();
        prop_assert!(is_tto(&space, &a).unwrap().is_tto);
        prop_assert!(c_symmetry_residual(&space, &a) <= 1e-9 * fro(&a).max(1.0));
    }

    #[test]
    fn extract_then_build_round_trips(u in blaschke(), seed in any::<u64>()) {
        let space = ModelSpace::new(u).unwrap();
        let mut rng = Sampler::new(seed);
        let a = build_tto(&space, &rng.generic_symbol(&space)).unwrap();
        let back = build_tto(&space, &extract_symbol(&space, &a).unwrap()).unwrap();
        prop_assert!(fro(&(&back - &a)) <= 1e-9 * fro(&a).max(1.0));
    }

    #[test]
    fn adjoint_has_dual_type(u in blaschke(), seed in any::<u64>()) {
        let space = ModelSpace::new(u).unwrap();
        let mut rng = Sampler::new(seed);
        let alpha = rng.type_value(0.2);
        let a = rng.typed_tto(&space, alpha).unwrap();
        let tag = classify_type(&space, &a).unwrap();
        prop_assert!(tag.admits(&alpha));
        let adj: CMatrix = a.adjoint();
        let adj_tag = classify_type(&space, &adj).unwrap();
        prop_assert!(adj_tag.admits(&alpha.adjoint()) || matches!(adj_tag, TypeTag::Scalar));
    }

    #[test]
    fn crofoot_is_unitary(u in blaschke(), alpha in disc_point()) {
        let space = ModelSpace::new(u).unwrap();
        let ct = crofoot(&space, alpha).unwrap();
        prop_assert!(ct.unitarity_residual() < 1e-9);
    }
}
