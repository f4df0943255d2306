//! Exact class predicates for eventually periodic weighted shifts.

use serde::{Deserialize, Serialize};

use super::weights::{PowerDecomposition, Tail, WeightSequence};
use crate::certificate::Certificate;
use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, DEFAULT_TOL};
use crate::rational::{self, ExactRational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyponormalShiftVerdict {
    pub holds: bool,
    /// Smallest `j` with `alpha_j > alpha_{j+1}`.
    pub first_violation: Option<usize>,
}

/// Hyponormal iff the weights are non-decreasing.
pub fn is_hyponormal_shift(w: &WeightSequence) -> HyponormalShiftVerdict {
    let first_violation = (0..w.horizon()).find(|&j| w.weight_at(j) > w.weight_at(j + 1));
    HyponormalShiftVerdict {
        holds: first_violation.is_none(),
        first_violation,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KHyponormalShiftVerdict {
    pub k: usize,
    pub holds: bool,
    /// Largest Hankel offset `m` examined.
    pub checked_through: usize,
    pub failing_m: Option<usize>,
    /// Float eigenvalue evidence for the normalized Hankel matrix `H(m) / gamma_m`
    /// at `failing_m`, or the smallest eigenvalue over all checked `m`.
    pub certificate: Certificate,
}

/// Offset beyond which every Hankel matrix is a positive multiple of one
/// already checked.
pub fn hankel_stop(w: &WeightSequence, k: usize) -> usize {
    w.prefix().len() + 2 * w.period() + 2 * k
}

/// `(gamma_{m+i+j} / gamma_m)_{i,j=0..k}`, exactly.
pub fn normalized_hankel(w: &WeightSequence, k: usize, m: usize) -> Vec<Vec<ExactRational>> {
    let gammas = w.moments(m + 2 * k).gammas;
    let base = gammas[m].clone();
    (0..=k)
        .map(|i| (0..=k).map(|j| &gammas[m + i + j] / &base).collect())
        .collect()
}

fn to_complex(h: &[Vec<ExactRational>]) -> ComplexMatrix {
    let n = h.len();
    ComplexMatrix::from_fn(n, n, |i, j| linalg::c(rational::to_f64(&h[i][j]), 0.0))
}

/// k-hyponormality through the Hankel moment matrices `H(m)`, `m = 0..=M_stop`
/// (or through `window` when that is larger). The verdict is exact.
pub fn is_k_hyponormal_shift(w: &WeightSequence, k: usize, window: Option<usize>) -> Result<KHyponormalShiftVerdict> {
    if k == 0 {
        return Err(crate::Error::InvalidArgument("k must be at least 1".into()));
    }
    let stop = hankel_stop(w, k).max(window.unwrap_or(0));
    let gammas = w.moments(stop + 2 * k).gammas;
    let mut floor: Option<linalg::PsdVerdict> = None;
    for m in 0..=stop {
        let h: Vec<Vec<ExactRational>> = (0..=k)
            .map(|i| (0..=k).map(|j| &gammas[m + i + j] / &gammas[m]).collect())
            .collect();
        let exact = rational::is_psd_exact(&h);
        let numeric = linalg::is_psd(&to_complex(&h), DEFAULT_TOL)?;
        if !exact.is_psd {
            let certificate = match &numeric.witness_vector {
                Some(_) => Certificate::from_psd(&numeric),
                None => Certificate::Rule {
                    reason: format!(
                        "exact elimination of H({m}) fails at pivot {} (min eigenvalue {:e})",
                        exact.failing_pivot.unwrap_or(0),
                        numeric.min_eigenvalue
                    ),
                },
            };
            return Ok(KHyponormalShiftVerdict {
                k,
                holds: false,
                checked_through: stop,
                failing_m: Some(m),
                certificate,
            });
        }
        if floor.as_ref().is_none_or(|f| numeric.min_eigenvalue < f.min_eigenvalue) {
            floor = Some(numeric);
        }
    }
    let floor = floor.expect("at least one Hankel matrix is checked");
    Ok(KHyponormalShiftVerdict {
        k,
        holds: true,
        checked_through: stop,
        failing_m: None,
        certificate: Certificate::PsdFloor {
            min_eigenvalue: floor.min_eigenvalue,
            tolerance_used: floor.tolerance_used,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubnormalShiftVerdict {
    pub holds: bool,
    pub reason: String,
}

/// Exact subnormality for eventually periodic weights.
///
/// A non-monotone sequence is not even hyponormal; a non-decreasing sequence
/// with periodic tail has constant tail `c`; after scaling by `1/c` the moments
/// are eventually constant, so a representing measure lives on `{0, 1}`, which
/// forces `alpha_1 = alpha_2 = ... = c`.
pub fn is_subnormal_shift(w: &WeightSequence) -> SubnormalShiftVerdict {
    let hypo = is_hyponormal_shift(w);
    if let Some(j) = hypo.first_violation {
        return SubnormalShiftVerdict {
            holds: false,
            reason: format!("not hyponormal: alpha_{j} > alpha_{}", j + 1),
        };
    }
    let canon = w.canonical();
    let c = match canon.tail() {
        Tail::Constant(c) => c.clone(),
        Tail::Periodic(_) => unreachable!("non-decreasing periodic tails are constant"),
    };
    let c_text = rational::format_rational(&c);
    if canon.prefix().len() <= 1 {
        SubnormalShiftVerdict {
            holds: true,
            reason: format!("alpha_0 <= alpha_j = {c_text} for all j >= 1"),
        }
    } else {
        let j = canon.prefix().len() - 1;
        SubnormalShiftVerdict {
            holds: false,
            reason: format!(
                "eventually constant tail {c_text} but alpha_{j} = {} differs from it",
                rational::format_rational(&canon.prefix()[j])
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NSubnormalShiftVerdict {
    pub n: usize,
    pub holds: bool,
    pub decomposition: PowerDecomposition,
    pub components: Vec<SubnormalShiftVerdict>,
}

/// `W^n` is subnormal iff every summand of its power decomposition is.
pub fn is_n_subnormal_shift(w: &WeightSequence, n: usize) -> Result<NSubnormalShiftVerdict> {
    let decomposition = w.decompose_power(n)?;
    let components: Vec<_> = decomposition.components.iter().map(is_subnormal_shift).collect();
    Ok(NSubnormalShiftVerdict {
        n,
        holds: components.iter().all(|v| v.holds),
        decomposition,
        components,
    })
}

/// Quasinormal iff all weights are equal.
pub fn is_quasinormal_shift(w: &WeightSequence) -> bool {
    let canon = w.canonical();
    canon.prefix().is_empty() && matches!(canon.tail(), Tail::Constant(_))
}

/// The weights repeat with period `period` on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityWitness {
    pub period: usize,
    pub horizon: usize,
    pub max_residual: f64,
}

/// Smallest `p <= max_period` with `alpha_{j+p} = alpha_j` for every `j`.
pub fn minimal_period(w: &WeightSequence, max_period: usize) -> Option<PeriodicityWitness> {
    let horizon = w.horizon() + max_period;
    (1..=max_period)
        .find(|&p| (0..horizon).all(|j| w.weight_at(j + p) == w.weight_at(j)))
        .map(|period| PeriodicityWitness {
            period,
            horizon,
            max_residual: 0.0,
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NQuasinormalShiftVerdict {
    pub n: usize,
    pub holds: bool,
    pub decomposition: PowerDecomposition,
    /// First component of the decomposition that is not a constant shift.
    pub failing_component: Option<usize>,
    pub periodicity: Option<PeriodicityWitness>,
}

/// `W^n` quasinormal iff every component shift is constant, i.e. the window
/// products satisfy `P_j = P_{j+n}`.
pub fn is_n_quasinormal_shift(w: &WeightSequence, n: usize) -> Result<NQuasinormalShiftVerdict> {
    let decomposition = w.decompose_power(n)?;
    let failing_component = decomposition
        .components
        .iter()
        .position(|comp| !is_quasinormal_shift(comp));
    let holds = failing_component.is_none();
    Ok(NQuasinormalShiftVerdict {
        n,
        holds,
        periodicity: if holds { minimal_period(w, n) } else { None },
        decomposition,
        failing_component,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiNNormalShiftVerdict {
    pub n: usize,
    pub holds: bool,
    /// First `j` with `P_j != P_{j+1}`.
    pub first_violation: Option<usize>,
}

/// `W` commutes with the diagonal `W*^n W^n = diag(P_j^2)` iff `P_j` is constant.
pub fn is_quasi_n_normal_shift(w: &WeightSequence, n: usize) -> QuasiNNormalShiftVerdict {
    let horizon = w.horizon() + n;
    let first_violation = (0..horizon).find(|&j| w.window_product(j, n) != w.window_product(j + 1, n));
    QuasiNNormalShiftVerdict {
        n,
        holds: first_violation.is_none(),
        first_violation,
    }
}

/// Dense `size x size` section of `W` (column `j` carries `alpha_j` into row `j+1`).
pub fn shift_matrix(w: &WeightSequence, size: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(size, size, |i, j| {
        if i == j + 1 {
            linalg::c(w.weight_at_f64(j), 0.0)
        } else {
            linalg::c(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn w(prefix: &[ExactRational]) -> WeightSequence {
        WeightSequence::with_constant_tail(prefix.to_vec(), int(1)).unwrap()
    }

    fn ee() -> WeightSequence {
        w(&[ratio(1, 2), ratio(3, 4)])
    }

    fn ex313() -> WeightSequence {
        w(&[ratio(1, 2), ratio(3, 5), ratio(7, 10)])
    }

    #[test]
    fn hyponormality_is_monotonicity() {
        assert!(is_hyponormal_shift(&ee()).holds);
        let alt = WeightSequence::periodic(vec![], vec![int(1), ratio(4, 5)]).unwrap();
        assert_eq!(is_hyponormal_shift(&alt).first_violation, Some(0));
        assert!(is_hyponormal_shift(&WeightSequence::constant(int(2)).unwrap()).holds);
    }

    #[test]
    fn k_hyponormality_examples() {
        let v = is_k_hyponormal_shift(&w(&[ratio(1, 2)]), 2, None).unwrap();
        assert!(v.holds);
        let v = is_k_hyponormal_shift(&ee(), 2, None).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_m, Some(0));
        assert!(matches!(v.certificate, Certificate::Violation { quadratic_form, .. } if quadratic_form < 0.0));
        for k in 1..=4 {
            let c = WeightSequence::constant(ratio(3, 2)).unwrap();
            assert!(is_k_hyponormal_shift(&c, k, None).unwrap().holds);
        }
        // Hyponormal == 1-hyponormal.
        assert!(is_k_hyponormal_shift(&ee(), 1, None).unwrap().holds);
        assert!(is_k_hyponormal_shift(&ee(), 0, None).is_err());
    }

    #[test]
    fn subnormality_examples() {
        assert!(is_subnormal_shift(&w(&[ratio(1, 2)])).holds);
        assert!(!is_subnormal_shift(&ee()).holds);
        assert!(is_subnormal_shift(&WeightSequence::constant(ratio(7, 3)).unwrap()).holds);
        let alt = WeightSequence::periodic(vec![], vec![int(1), ratio(4, 5)]).unwrap();
        assert!(!is_subnormal_shift(&alt).holds);
    }

    #[test]
    fn n_subnormality_examples() {
        let v = is_n_subnormal_shift(&ee(), 2).unwrap();
        assert!(v.holds);
        assert!(is_n_subnormal_shift(&ex313(), 3).unwrap().holds);
        let v2 = is_n_subnormal_shift(&ex313(), 2).unwrap();
        assert!(!v2.holds);
        assert!(!v2.components[0].holds && v2.components[1].holds);
        for s in [ee(), ex313(), w(&[ratio(1, 3)])] {
            assert_eq!(is_n_subnormal_shift(&s, 1).unwrap().holds, is_subnormal_shift(&s).holds);
        }
    }

    #[test]
    fn quasinormality_examples() {
        assert!(is_quasinormal_shift(&WeightSequence::constant(int(2)).unwrap()));
        let alt = WeightSequence::periodic(vec![], vec![int(1), ratio(3, 7)]).unwrap();
        assert!(!is_quasinormal_shift(&alt));
        assert!(!is_quasinormal_shift(&ee()));
    }

    #[test]
    fn n_quasinormality_examples() {
        let r = ratio(3, 7);
        let alt = WeightSequence::periodic(vec![], vec![int(1), r.clone()]).unwrap();
        let v = is_n_quasinormal_shift(&alt, 2).unwrap();
        assert!(v.holds);
        assert!(v.periodicity.unwrap().period <= 2);

        let s = ratio(5, 2);
        let three = WeightSequence::periodic(vec![], vec![int(1), r, s]).unwrap();
        let v = is_n_quasinormal_shift(&three, 3).unwrap();
        assert!(v.holds);
        assert_eq!(v.periodicity.unwrap().period, 3);

        let v = is_n_quasinormal_shift(&ee(), 2).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_component, Some(0));
        assert!(!is_quasi_n_normal_shift(&ee(), 2).holds);
    }

    #[test]
    fn quasi_n_normal_requires_constant_window_products() {
        let alt = WeightSequence::periodic(vec![], vec![int(1), ratio(3, 7)]).unwrap();
        assert!(is_quasi_n_normal_shift(&alt, 2).holds);
        assert!(!is_quasi_n_normal_shift(&alt, 1).holds);
    }
}
