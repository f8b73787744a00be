use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const PERMANENT_MAX_DIM: usize = 20;

/// Permanent by Ryser's inclusion-exclusion formula, visiting column
/// subsets in Gray-code order (`2^n n` operations).
pub fn permanent(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    if n > PERMANENT_MAX_DIM {
        return Err(Error::OversizeMatrix { size: n, limit: PERMANENT_MAX_DIM });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let added = gray & (1 << j) != 0;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            if added {
                *sum += m[(i, j)];
            } else {
                *sum -= m[(i, j)];
            }
        }
        let prod: f64 = row_sums.iter().product();
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}
