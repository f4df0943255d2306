//! Forced continuation of an n-quasinormal weight sequence.
//!
//! If `W^n` is quasinormal, every summand of the power decomposition is a
//! constant shift, so the window products satisfy `P_j = P_{j+n}` with
//! `P_j = alpha_j ... alpha_{j+n-1}`. Given `alpha_0 .. alpha_{2n-2}`, the
//! relation at `j` has exactly one unknown, `alpha_{j+2n-1}`.

use num_traits::{Num, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extends `seed` (length `2n - 1`, all positive) by `steps` forced weights.
pub fn derive_quasinormal_continuation<S>(n: usize, seed: &[S], steps: usize) -> Result<Vec<S>>
where
    S: Clone + Num + PartialOrd,
{
    validate_seed(n, seed)?;
    let mut weights = seed.to_vec();
    weights.reserve(steps);
    for j in 0..steps {
        weights.push(next_weight(n, &weights, j));
    }
    Ok(weights)
}

fn validate_seed<S: Clone + Num + PartialOrd>(n: usize, seed: &[S]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if seed.len() != 2 * n - 1 {
        return Err(Error::SeedLengthMismatch {
            expected: 2 * n - 1,
            got: seed.len(),
        });
    }
    if let Some(index) = seed.iter().position(|x| !(*x > S::zero())) {
        return Err(Error::NonPositiveWeight { index });
    }
    Ok(())
}

/// `alpha_{j+2n-1} = P_j / (alpha_{j+n} ... alpha_{j+2n-2})`.
fn next_weight<S: Clone + Num>(n: usize, weights: &[S], j: usize) -> S {
    let product = |range: std::ops::Range<usize>| range.fold(S::one(), |acc, i| acc * weights[i].clone());
    product(j..j + n) / product(j + n..j + 2 * n - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFit {
    pub period: usize,
    /// `max_j |alpha_{j+period} - alpha_j|` over the computed weights.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    /// First index whose weight leaves `[1/bound, bound]`.
    pub escaped_at: Option<usize>,
    /// Best period `<= n` when no weight escaped.
    pub periodic_within: Option<PeriodicFit>,
    pub weights_computed: usize,
}

/// Runs the forced continuation for `horizon` steps and reports either the
/// first escape from `[1/bound, bound]` or the best period `<= n`.
pub fn boundedness_forces_periodicity_probe<S>(n: usize, seed: &[S], bound: f64, horizon: usize) -> Result<ProbeResult>
where
    S: Clone + Num + PartialOrd + ToPrimitive,
{
    if !(bound > 1.0) {
        return Err(Error::InvalidArgument(format!("bound must exceed 1, got {bound}")));
    }
    validate_seed(n, seed)?;
    let (lo, hi) = (1.0 / bound, bound);
    let outside = |x: &S| {
        let v = x.to_f64().unwrap_or(f64::NAN);
        !(lo..=hi).contains(&v)
    };
    let mut weights = seed.to_vec();
    if let Some(index) = weights.iter().position(&outside) {
        return Ok(ProbeResult {
            escaped_at: Some(index),
            periodic_within: None,
            weights_computed: weights.len(),
        });
    }
    for j in 0..horizon {
        let next = next_weight(n, &weights, j);
        let escaped = outside(&next);
        weights.push(next);
        if escaped {
            return Ok(ProbeResult {
                escaped_at: Some(weights.len() - 1),
                periodic_within: None,
                weights_computed: weights.len(),
            });
        }
    }
    Ok(ProbeResult {
        escaped_at: None,
        periodic_within: best_period(&weights, n),
        weights_computed: weights.len(),
    })
}

/// Period `p <= max_period` with the smallest residual; ties go to the smaller `p`.
pub fn best_period<S>(weights: &[S], max_period: usize) -> Option<PeriodicFit>
where
    S: Clone + Num + PartialOrd + ToPrimitive,
{
    (1..=max_period.min(weights.len().saturating_sub(1)))
        .map(|period| {
            let worst = weights
                .iter()
                .zip(&weights[period..])
                .map(|(a, b)| {
                    if a > b {
                        a.clone() - b.clone()
                    } else {
                        b.clone() - a.clone()
                    }
                })
                .fold(S::zero(), |acc, d| if d > acc { d } else { acc });
            PeriodicFit {
                period,
                residual: worst.to_f64().unwrap_or(f64::INFINITY),
            }
        })
        .fold(None, |best: Option<PeriodicFit>, fit| match best {
            Some(b) if b.residual <= fit.residual => Some(b),
            _ => Some(fit),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, ExactRational};

    #[test]
    fn two_step_continuation_closed_form() {
        let (r, s) = (ratio(4, 5), ratio(9, 10));
        let out = derive_quasinormal_continuation(2, &[int(1), r.clone(), s.clone()], 5).unwrap();
        let expected = vec![
            int(1),
            r.clone(),
            s.clone(),
            &r / &s,
            &s * &s,
            &r / (&s * &s),
            &s * &s * &s,
            &r / (&s * &s * &s),
        ];
        assert_eq!(out, expected);
    }

    #[test]
    fn unit_third_seed_is_periodic() {
        let r = ratio(4, 5);
        let out = derive_quasinormal_continuation(2, &[int(1), r.clone(), int(1)], 6).unwrap();
        for (j, x) in out.iter().enumerate() {
            assert_eq!(*x, if j % 2 == 0 { int(1) } else { r.clone() });
        }
    }

    #[test]
    fn seed_validation() {
        let seed = [1.0, 2.0];
        assert_eq!(
            derive_quasinormal_continuation(2, &seed, 3).unwrap_err(),
            Error::SeedLengthMismatch { expected: 3, got: 2 }
        );
        assert_eq!(
            derive_quasinormal_continuation(2, &[1.0, 0.0, 1.0], 3).unwrap_err(),
            Error::NonPositiveWeight { index: 1 }
        );
        let empty: [ExactRational; 0] = [];
        assert!(derive_quasinormal_continuation(0, &empty, 1).is_err());
    }

    #[test]
    fn probe_escape_and_periodicity() {
        // alpha_{2k} = 0.9^k first drops below 0.1 at k = 22.
        let probe = boundedness_forces_periodicity_probe(2, &[1.0, 1.0, 0.9], 10.0, 200).unwrap();
        assert_eq!(probe.escaped_at, Some(44));

        let probe = boundedness_forces_periodicity_probe(2, &[1.0, 0.8, 1.0], 10.0, 200).unwrap();
        assert_eq!(probe.escaped_at, None);
        assert_eq!(
            probe.periodic_within,
            Some(PeriodicFit {
                period: 2,
                residual: 0.0
            })
        );

        let seed: Vec<ExactRational> = vec![int(1), ratio(7, 10), ratio(1, 2), int(1), ratio(7, 10)];
        let probe = boundedness_forces_periodicity_probe(3, &seed, 10.0, 200).unwrap();
        assert_eq!(
            probe.periodic_within,
            Some(PeriodicFit {
                period: 3,
                residual: 0.0
            })
        );

        assert!(boundedness_forces_periodicity_probe(2, &[1.0, 1.0, 1.0], 1.0, 5).is_err());
    }
}
