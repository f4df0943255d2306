use proptest::prelude::*;
use rand::Rng;

use opclass::classes;
use opclass::extensions::{self, compress_to_subspace, minimal_extension, positivity_forms};
use opclass::linalg::{self, norm_inf, ComplexVector, DEFAULT_TOL};
use opclass::sample;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn minimal_extension_is_idempotent(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let spec = sample::rr_extension_spec(&mut sample::rng(seed), rr_dim, a_dim);
        let ext = minimal_extension(&spec, DEFAULT_TOL).unwrap();
        prop_assert!(ext.contains_h);
        prop_assert!(ext.dim() >= spec.subspace_dim());
        let again = minimal_extension(&ext.to_spec(spec.n()).unwrap(), DEFAULT_TOL).unwrap();
        prop_assert_eq!(again.dim(), ext.dim());
        let restricted = ext.to_spec(spec.n()).unwrap().restriction();
        prop_assert!(classes::is_n_normal(&restricted, spec.n(), DEFAULT_TOL).unwrap().verdict.holds);
    }

    #[test]
    fn compression_is_multiplicative(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let spec = sample::rr_extension_spec(&mut sample::rng(seed), rr_dim, a_dim);
        let s = spec.ambient();
        let q = spec.subspace_basis();
        for k in 1..=3 {
            let lhs = linalg::power(&compress_to_subspace(s, q).unwrap(), k);
            let rhs = compress_to_subspace(&linalg::power(s, k), q).unwrap();
            let scale = 1.0 + norm_inf(s).powi(k as i32);
            prop_assert!(norm_inf(&(lhs - rhs)) <= 1e-10 * scale);
        }
    }

    #[test]
    fn sub_n_normal_gives_bram_halmos_positivity(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let spec = sample::rr_extension_spec(&mut sample::rng(seed), rr_dim, a_dim);
        let t = spec.restriction();
        for k in 1..=4 {
            let v = classes::bram_halmos_block_psd(&t, spec.n(), k, DEFAULT_TOL).unwrap();
            prop_assert!(v.holds, "k = {}: {:?}", k, v.certificate);
        }
    }

    #[test]
    fn positivity_forms_bounded_by_norm(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let mut rng = sample::rng(seed);
        let spec = sample::rr_extension_spec(&mut rng, rr_dim, a_dim);
        let t = spec.restriction();
        let a = linalg::power(&t, spec.n());
        let cst = linalg::spectral_norm(&a).powi(2);
        for _ in 0..20 {
            let size = rng.gen_range(1..=4);
            let xs: Vec<ComplexVector> = (0..size).map(|_| sample::vector(&mut rng, spec.subspace_dim())).collect();
            let (shifted, base) = positivity_forms(&t, spec.n(), &xs);
            let scale = 1.0 + cst.powi(size as i32 + 1) * xs.iter().map(|x| x.norm_squared()).sum::<f64>();
            prop_assert!(base >= -1e-9 * scale);
            prop_assert!(shifted <= cst * base + 1e-9 * scale);
        }
    }

    #[test]
    fn power_is_hyponormal_on_vectors(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let mut rng = sample::rng(seed);
        let spec = sample::rr_extension_spec(&mut rng, rr_dim, a_dim);
        let a = linalg::power(&spec.restriction(), spec.n());
        let adj = a.adjoint();
        for _ in 0..100 {
            let x = sample::vector(&mut rng, spec.subspace_dim());
            let slack = 1e-10 * (1.0 + norm_inf(&a)) * x.norm();
            prop_assert!((&adj * &x).norm() <= (&a * &x).norm() + slack);
        }
    }

    #[test]
    fn povm_moments_and_harness(seed in any::<u64>(), rr_dim in 1usize..4, a_dim in 0usize..3) {
        let spec = sample::rr_extension_spec(&mut sample::rng(seed), rr_dim, a_dim);
        let povm = extensions::povm_moment_check(&spec, 4, 1e-9).unwrap();
        prop_assert!(povm.within_tolerance, "{:?}", povm.residuals);
        let report = extensions::subn_power_quasinormal_theorem_harness(&spec, 2, 3, DEFAULT_TOL).unwrap();
        prop_assert!(!report.flagged);
    }
}
