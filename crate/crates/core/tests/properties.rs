use chebosc::algebra::{hermitian_eigenvalues, CMatrix};
use chebosc::basis::{Kind, RecurrenceSystem};
use chebosc::coefficients::CoefficientSource;
use chebosc::coherent::{
    bg_state, norm_squared_closed, overlap_kernel, overlap_series, wavefunction_closed, wavefunction_series,
};
use chebosc::exec::Execution;
use chebosc::quadrature::{gauss_chebyshev_rule, gram_matrix_with};
use num_complex::Complex64;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::First), Just(Kind::Second)]
}

fn source() -> impl Strategy<Value = CoefficientSource> {
    prop_oneof![Just(CoefficientSource::Paper), Just(CoefficientSource::Derived)]
}

fn disk_point(max_r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_r, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_gram_is_positive_semidefinite(
        kind in kind(),
        zs in prop::collection::vec(disk_point(0.6), 2..6),
    ) {
        let states: Vec<_> = zs
            .iter()
            .map(|&z| bg_state(kind, z, 96, CoefficientSource::Derived).unwrap())
            .collect();
        let n = states.len();
        let g = CMatrix::from_fn(n, n, |i, j| overlap_series(&states[i], &states[j]));
        let eig = hermitian_eigenvalues(&g).unwrap();
        prop_assert!(eig.iter().all(|&l| l > -1e-12), "{eig:?}");
    }

    #[test]
    fn conjugate_parameter_conjugates_coefficients(kind in kind(), source in source(), z in disk_point(0.7)) {
        let a = bg_state(kind, z, 48, source).unwrap();
        let b = bg_state(kind, z.conj(), 48, source).unwrap();
        for (p, q) in a.coeffs.iter().zip(&b.coeffs) {
            prop_assert_eq!(*p, q.conj());
        }
    }

    #[test]
    fn eigen_recursion_holds(kind in kind(), source in source(), z in disk_point(0.7)) {
        let s = bg_state(kind, z, 64, source).unwrap();
        prop_assert!(s.eigen_recursion_residual() < 1e-15);
    }

    #[test]
    fn series_matches_closed_wavefunction(kind in kind(), z in disk_point(0.45), x in -1.0f64..=1.0) {
        let s = bg_state(kind, z, 160, CoefficientSource::Derived).unwrap();
        let a = wavefunction_series(&s, x).unwrap();
        let b = wavefunction_closed(kind, z, x, CoefficientSource::Derived).unwrap();
        prop_assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn norm_is_consistent(kind in kind(), source in source(), z in disk_point(0.55)) {
        let s = bg_state(kind, z, 160, source).unwrap();
        let closed = norm_squared_closed(kind, z, source).unwrap().closed;
        prop_assert!((s.norm_sq_series - closed).abs() <= 1e-12 * closed + s.tail_bound);
        let kernel = overlap_kernel(kind, z, z, source).unwrap();
        prop_assert!((kernel.re - closed).abs() < 1e-12 * closed);
        prop_assert!(kernel.im.abs() < 1e-14);
        prop_assert!((s.norm() * s.norm() - s.norm_sq_series).abs() < 1e-12 * closed);
    }

    #[test]
    fn overlap_kernel_matches_series(
        kind in kind(),
        z1 in disk_point(0.5),
        z2 in disk_point(0.5),
    ) {
        let a = bg_state(kind, z1, 128, CoefficientSource::Derived).unwrap();
        let b = bg_state(kind, z2, 128, CoefficientSource::Derived).unwrap();
        let k = overlap_kernel(kind, z1, z2, CoefficientSource::Derived).unwrap();
        prop_assert!((overlap_series(&a, &b) - k).norm() < 1e-12);
    }

    #[test]
    fn basis_parity(kind in kind(), n in 0usize..80, x in -1.0f64..=1.0) {
        let s = RecurrenceSystem::new(kind);
        let p = s.eval_basis(n, x).unwrap();
        let q = s.eval_basis(n, -x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((p - sign * q).abs() <= 1e-12 * (1.0 + p.abs()));
    }

    #[test]
    fn gram_independent_of_execution(kind in kind(), count in 1usize..24, extra in 0usize..40) {
        let rule = gauss_chebyshev_rule(kind, count + extra).unwrap();
        let seq = gram_matrix_with(kind, count, &rule, Execution::Sequential).unwrap();
        let par = gram_matrix_with(kind, count, &rule, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}
