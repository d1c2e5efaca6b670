#![allow(dead_code)]

use proptest::prelude::*;

use sepscope::linalg::{I, ONE, ZERO};
use sepscope::{BipartiteShape, ComplexMatrix, HermitianOperator, Spectrum};

/// Hermitian matrix built from `dim²` reals: diagonal, then real and imaginary parts above it.
pub fn hermitian_from(dim: usize, entries: &[f64]) -> HermitianOperator {
    let mut k = dim;
    let mut m = ComplexMatrix::from_element(dim, dim, ZERO);
    for i in 0..dim {
        m[(i, i)] = ONE * entries[i];
        for j in i + 1..dim {
            let z = ONE * entries[k] + I * entries[k + 1];
            k += 2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("constructed Hermitian")
}

pub fn hermitian(dim: usize, bound: f64) -> impl Strategy<Value = HermitianOperator> {
    prop::collection::vec(-bound..bound, dim * dim).prop_map(move |v| hermitian_from(dim, &v))
}

pub fn hermitian_any_dim(max_dim: usize, bound: f64) -> impl Strategy<Value = HermitianOperator> {
    (1..=max_dim).prop_flat_map(move |d| hermitian(d, bound))
}

pub fn shape_up_to_3x3() -> impl Strategy<Value = BipartiteShape> {
    (2usize..=3, 2usize..=3).prop_map(|(a, b)| BipartiteShape::new(a, b).unwrap())
}

/// Partial trace of an arbitrary (not necessarily Hermitian) operator.
pub fn raw_partial_trace_a(m: &ComplexMatrix, shape: BipartiteShape) -> ComplexMatrix {
    let (da, db) = (shape.d_a, shape.d_b);
    ComplexMatrix::from_fn(db, db, |b, b2| {
        (0..da).fold(ZERO, |acc, a| acc + m[(a * db + b, a * db + b2)])
    })
}

pub fn spectra_close(a: &Spectrum, b: &Spectrum, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}

pub fn determinant(op: &HermitianOperator) -> f64 {
    op.spectrum().product()
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}

/// Bisection for the sign change of `f` on `[lo, hi]`, assuming `f(lo) >= 0 > f(hi)`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    assert!(
        f(lo) >= 0.0 && f(hi) < 0.0,
        "no sign change on [{lo}, {hi}]"
    );
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
