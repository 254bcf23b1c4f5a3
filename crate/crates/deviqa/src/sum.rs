//! Pairwise (cascade) summation.
//!
//! Splitting the reduction tree keeps the rounding error at O(log n) instead of
//! the O(n) of a running sum, which matters for the large similarity maps and
//! benchmark buffers this crate reduces.

const BLOCK: usize = 128;

/// Pairwise sum of `values`.
pub(crate) fn pairwise(values: &[f64]) -> f64 {
    pairwise_by(values, |v| v)
}

/// Pairwise sum of `f(v)` over `values`.
pub(crate) fn pairwise_by<F>(values: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Copy,
{
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for &v in values {
            acc += f(v);
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_by(&values[..mid], f) + pairwise_by(&values[mid..], f)
    }
}

/// Pairwise sum of the two components of `f(v)` in a single sweep.
pub(crate) fn pairwise_by2<F>(values: &[f64], f: F) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64) + Copy,
{
    if values.len() <= BLOCK {
        let mut a = 0.0;
        let mut b = 0.0;
        for &v in values {
            let (x, y) = f(v);
            a += x;
            b += y;
        }
        (a, b)
    } else {
        let mid = values.len() / 2;
        let (a0, b0) = pairwise_by2(&values[..mid], f);
        let (a1, b1) = pairwise_by2(&values[mid..], f);
        (a0 + a1, b0 + b1)
    }
}

/// Pairwise sum of `f(a_i, b_i)` over two equally long slices.
pub(crate) fn pairwise_zip_by<F>(a: &[f64], b: &[f64], f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Copy,
{
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= BLOCK {
        let mut acc = 0.0;
        for (&x, &y) in a.iter().zip(b) {
            acc += f(x, y);
        }
        acc
    } else {
        let mid = a.len() / 2;
        pairwise_zip_by(&a[..mid], &b[..mid], f) + pairwise_zip_by(&a[mid..], &b[mid..], f)
    }
}
