mod common;

use proptest::prelude::*;

use common::{hermitian, raw_partial_trace_a, shape_up_to_3x3};
use sepscope::bipartite::{
    partial_trace, partial_transpose, permute_to_bipartition, tensor, FourFactorDims,
};
use sepscope::linalg::max_abs_diff;
use sepscope::states::random_density;
use sepscope::{BipartiteShape, HermitianOperator, Subsystem};

fn shape_and_pair() -> impl Strategy<Value = (BipartiteShape, HermitianOperator, HermitianOperator)>
{
    shape_up_to_3x3().prop_flat_map(|s| (Just(s), hermitian(s.d_b, 1.0), hermitian(s.dim(), 1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_factor_pulls_out_of_partial_trace((shape, lam_b, mu) in shape_and_pair()) {
        let lifted = tensor(&HermitianOperator::identity(shape.d_a), &lam_b);
        let lhs = raw_partial_trace_a(&(lifted.matrix() * mu.matrix()), shape);
        let rhs = lam_b.matrix() * partial_trace(&mu, shape, Subsystem::A).unwrap().matrix();
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn partial_trace_of_tensor_recovers_factor(
        (x, y) in (1usize..=3, 1usize..=3).prop_flat_map(|(a, b)| (hermitian(a, 1.0), hermitian(b, 1.0)))
    ) {
        let shape = BipartiteShape::new(x.dim(), y.dim()).unwrap();
        let xy = tensor(&x, &y);
        let tb = partial_trace(&xy, shape, Subsystem::B).unwrap();
        prop_assert!(tb.max_abs_diff(&x.scale(y.trace())) <= 1e-12);
        let ta = partial_trace(&xy, shape, Subsystem::A).unwrap();
        prop_assert!(ta.max_abs_diff(&y.scale(x.trace())) <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace((shape, _, m) in shape_and_pair()) {
        for side in [Subsystem::A, Subsystem::B] {
            let t = partial_trace(&m, shape, side).unwrap();
            prop_assert!((t.trace() - m.trace()).abs() <= 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_hermitian_involution((shape, _, m) in shape_and_pair()) {
        for side in [Subsystem::A, Subsystem::B] {
            let t = partial_transpose(&m, shape, side).unwrap();
            let defect = max_abs_diff(t.matrix(), &t.matrix().adjoint());
            prop_assert!(defect <= 1e-12);
            let back = partial_transpose(&t, shape, side).unwrap();
            prop_assert_eq!(back, m.clone());
        }
    }

    #[test]
    fn regrouping_preserves_spectrum_and_marginals(s1 in any::<u64>(), s2 in any::<u64>()) {
        let r1 = random_density(2, 2, 4, s1).unwrap();
        let r2 = random_density(2, 2, 3, s2).unwrap();
        let raw = tensor(r1.op(), r2.op());
        let (op, shape) = permute_to_bipartition(&raw, FourFactorDims::new(2, 2, 2, 2)).unwrap();
        prop_assert_eq!(shape, BipartiteShape::new(4, 4).unwrap());
        prop_assert!(op.spectrum().max_abs_diff(&raw.spectrum()) < 1e-12);
        let left = partial_trace(&op, shape, Subsystem::B).unwrap();
        let expected = tensor(&r1.marginal(Subsystem::A), &r2.marginal(Subsystem::A));
        prop_assert!(left.max_abs_diff(&expected) < 1e-14);
    }
}
