mod common;

use proptest::prelude::*;

use sepscope::linalg::max_abs_diff;
use sepscope::maps::{gamma, lambda_map, symmetric_map};
use sepscope::qubit_geometry::{
    bloch_vector, hs_compose, hs_decompose, magic_basis, magic_conjugation, map_action_on_hs,
    t_state_region, time_reversal, HsDecomposition, TDiagonalVector, TStateRegion,
};
use sepscope::states::random_density;
use sepscope::{BipartiteShape, DensityOperator, PositiveMap};

fn qubit_pair() -> impl Strategy<Value = DensityOperator> {
    (1usize..=4, any::<u64>()).prop_map(|(rank, seed)| random_density(2, 2, rank, seed).unwrap())
}

fn qubit(seed: u64, rank: usize) -> sepscope::HermitianOperator {
    random_density(1, 2, rank, seed).unwrap().op().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_round_trips(rho in qubit_pair()) {
        let d = hs_decompose(&rho).unwrap();
        prop_assert!(hs_compose(&d).max_abs_diff(rho.op()) <= 1e-12);
        let entries = d.r.iter().chain(&d.s).chain(d.t.iter().flatten());
        for &v in entries {
            prop_assert!(v.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn sign_flips_match_matrix_maps(rho in qubit_pair()) {
        let d = hs_decompose(&rho).unwrap();
        for map in PositiveMap::ALL {
            let via_hs = hs_compose(&map_action_on_hs(&d, map));
            let direct = map.apply(rho.op(), rho.shape()).unwrap();
            prop_assert!(via_hs.max_abs_diff(&direct) <= 1e-10);
        }
    }

    #[test]
    fn magic_conjugation_is_symmetric_map(rho in qubit_pair()) {
        let m = magic_conjugation(&rho).unwrap();
        prop_assert!(m.max_abs_diff(&symmetric_map(&rho)) <= 1e-10);
    }

    #[test]
    fn gamma_is_time_reversal_and_flips_bloch_vector(seed in any::<u64>(), rank in 1usize..=2) {
        let q = qubit(seed, rank);
        prop_assert!(gamma(&q).max_abs_diff(&time_reversal(&q).unwrap()) <= 1e-12);
        let (r, flipped) = (bloch_vector(&q).unwrap(), bloch_vector(&gamma(&q)).unwrap());
        for k in 0..3 {
            prop_assert!((r.0[k] + flipped.0[k]).abs() <= 1e-12);
        }
        prop_assert!(r.norm() <= 1.0 + 1e-9);
    }
}

#[test]
fn magic_basis_squares_to_antidiagonal() {
    let v = magic_basis();
    let vvt = &v * v.transpose();
    let mut expected = sepscope::ComplexMatrix::zeros(4, 4);
    for (i, s) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
        expected[(i, 3 - i)] = sepscope::linalg::ONE * s;
    }
    assert!(max_abs_diff(&vvt, &expected) <= 1e-12);
}

/// Theorem-level check on the full 21³ grid over [-1, 1]³.
#[test]
fn octahedron_is_valid_and_lambda_positive() {
    let tol = 1e-9;
    let mut disagreements = Vec::new();
    for i in 0..21 {
        for j in 0..21 {
            for k in 0..21 {
                let t = TDiagonalVector([i, j, k].map(|n| -1.0 + 0.1 * n as f64));
                let op = hs_compose(&HsDecomposition::t_state(t));
                let valid = op.spectrum().min() >= -tol;
                let lambda_ok = valid && {
                    let rho =
                        DensityOperator::with_tolerance(op, BipartiteShape::qubits(), tol).unwrap();
                    lambda_map(&rho).spectrum().min() >= -tol
                };
                let region = t_state_region(t, tol);
                if (region == TStateRegion::SeparableOctahedron) != lambda_ok {
                    disagreements.push(t);
                }
                if valid != t.in_tetrahedron(tol) {
                    disagreements.push(t);
                }
                let shell = region == TStateRegion::EntangledShell;
                if shell != (valid && !t.negated().in_tetrahedron(tol)) {
                    disagreements.push(t);
                }
            }
        }
    }
    assert!(
        disagreements.is_empty(),
        "{} disagreements, first {:?}",
        disagreements.len(),
        disagreements.first()
    );
}
