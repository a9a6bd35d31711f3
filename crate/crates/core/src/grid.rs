//! Index bookkeeping for the frequency cube `I_N = {-N/2, ..., N/2 - 1}^d`.
//!
//! Flat storage is row-major with the first axis slowest:
//! `flat = sum_t (k_t + N/2) * N^(d - 1 - t)`.

use crate::error::{invalid, Error, Result};

/// Number of entries of `I_N^d`.
pub fn grid_len(degree: usize, dim: usize) -> Result<usize> {
    degree
        .checked_pow(dim as u32)
        .ok_or_else(|| invalid("degree", format!("{degree}^{dim} overflows")))
}

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 || degree % 2 != 0 {
        return Err(Error::OddDegree(degree));
    }
    Ok(())
}

/// Writes the multi-index of `flat` into `out` (length `d`).
#[inline]
pub fn unflatten(mut flat: usize, degree: usize, out: &mut [i64]) {
    let half = (degree / 2) as i64;
    for k in out.iter_mut().rev() {
        *k = (flat % degree) as i64 - half;
        flat /= degree;
    }
}

/// Flat position of multi-index `k`, or `None` when `k` lies outside `I_N^d`.
#[inline]
pub fn flatten(k: &[i64], degree: usize) -> Option<usize> {
    let half = (degree / 2) as i64;
    let mut flat = 0usize;
    for &kt in k {
        let shifted = kt + half;
        if shifted < 0 || shifted >= degree as i64 {
            return None;
        }
        flat = flat * degree + shifted as usize;
    }
    Some(flat)
}

/// Iterator over all multi-indices of `I_N^d` in flat order.
pub fn indices(degree: usize, dim: usize) -> impl Iterator<Item = Vec<i64>> {
    let total = degree.pow(dim as u32);
    (0..total).map(move |flat| {
        let mut k = vec![0i64; dim];
        unflatten(flat, degree, &mut k);
        k
    })
}
