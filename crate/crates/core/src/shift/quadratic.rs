use serde::{Deserialize, Serialize};

use super::predicates::shift_matrix;
use super::weights::WeightSequence;
use crate::error::{Error, Result};
use crate::linalg;

/// Rows and columns at the far end of a truncation that a product of up to
/// four shift factors can corrupt.
pub const QUADRATIC_MARGIN: usize = 4;

/// `s = 0` followed by 64 points log-spaced over `[1e-3, 1e3]`.
pub fn default_s_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..64).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 63.0)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticProbe {
    /// Some `s` produced a negative interior eigenvalue below the threshold.
    pub refuted: bool,
    pub worst_s: f64,
    pub worst_min_eigenvalue: f64,
    /// Absolute threshold at `worst_s`.
    pub threshold: f64,
    pub witness: Option<Vec<num_complex::Complex64>>,
    pub truncation: usize,
}

fn check_probe_inputs(s_grid: &[f64], trunc_n: usize) -> Result<()> {
    if trunc_n < 8 {
        return Err(Error::TruncationTooSmall {
            size: trunc_n,
            required: 8,
        });
    }
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("s grid is empty".into()));
    }
    if let Some(bad) = s_grid.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid point {bad} is not a nonnegative real"
        )));
    }
    Ok(())
}

/// PSD verdict on the interior block of `[p(W)*, p(W)]` for each `s`.
fn interior_verdicts(
    w: &WeightSequence,
    s_grid: &[f64],
    trunc_n: usize,
    tol: f64,
) -> Result<Vec<(f64, linalg::PsdVerdict)>> {
    check_probe_inputs(s_grid, trunc_n)?;
    let shift = shift_matrix(w, trunc_n);
    let square = &shift * &shift;
    let interior = trunc_n - QUADRATIC_MARGIN;
    s_grid
        .iter()
        .map(|&s| {
            let p = &square + shift.scale(s);
            let block = linalg::leading_block(&linalg::self_commutator(&p), interior);
            linalg::is_psd(&block, tol).map(|v| (s, v))
        })
        .collect()
}

/// Searches for `s >= 0` such that `W^2 + sW` fails hyponormality on the
/// leading `N - 4` block of its truncated self-commutator, where the truncation
/// agrees with the infinite operator.
pub fn quadratic_hyponormality_probe(
    w: &WeightSequence,
    s_grid: &[f64],
    trunc_n: usize,
    tol: f64,
) -> Result<QuadraticProbe> {
    let (worst_s, verdict) = interior_verdicts(w, s_grid, trunc_n, tol)?
        .into_iter()
        .min_by(|(_, a), (_, b)| {
            (a.min_eigenvalue + a.tolerance_used).total_cmp(&(b.min_eigenvalue + b.tolerance_used))
        })
        .expect("grid is nonempty");
    Ok(QuadraticProbe {
        refuted: !verdict.is_psd,
        worst_s,
        worst_min_eigenvalue: verdict.min_eigenvalue,
        threshold: verdict.tolerance_used,
        witness: verdict.witness_vector,
        truncation: trunc_n,
    })
}

/// `(s, smallest interior eigenvalue)` over the grid.
pub fn quadratic_probe_curve(w: &WeightSequence, s_grid: &[f64], trunc_n: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
    Ok(interior_verdicts(w, s_grid, trunc_n, tol)?
        .into_iter()
        .map(|(s, v)| (s, v.min_eigenvalue))
        .collect())
}
