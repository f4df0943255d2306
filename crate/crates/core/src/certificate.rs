use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::PsdVerdict;
use crate::shift::WeightSequence;

/// Evidence attached to a verdict. Every variant can be re-checked from the
/// inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Smallest eigenvalue of a matrix judged PSD.
    PsdFloor { min_eigenvalue: f64, tolerance_used: f64 },
    /// Unit vector on which a Hermitian form is negative.
    Violation {
        witness: Vec<Complex64>,
        quadratic_form: f64,
        tolerance_used: f64,
    },
    /// Norm of a defining identity's defect.
    Residual { residual: f64, threshold: f64 },
    /// Weight sequence repeats with the given period.
    Periodicity {
        period: usize,
        horizon: usize,
        max_residual: f64,
    },
    /// Unitary equivalence of a shift power with a direct sum of shifts.
    Decomposition { n: usize, components: Vec<WeightSequence> },
    /// Exact rule that decided the verdict.
    Rule { reason: String },
}

impl Certificate {
    pub fn from_psd(verdict: &PsdVerdict) -> Self {
        match &verdict.witness_vector {
            None => Certificate::PsdFloor {
                min_eigenvalue: verdict.min_eigenvalue,
                tolerance_used: verdict.tolerance_used,
            },
            Some(w) => Certificate::Violation {
                witness: w.clone(),
                quadratic_form: verdict.min_eigenvalue,
                tolerance_used: verdict.tolerance_used,
            },
        }
    }
}
