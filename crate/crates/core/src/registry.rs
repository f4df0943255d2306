//! Registry of concrete witnesses for the inclusions and non-inclusions
//! between the operator classes.
//!
//! Each entry fixes an operator and a list of expected verdicts. The expected
//! values are written down by hand and never computed, so the registry guards
//! the code against the known examples rather than against itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classes;
use crate::error::{Error, Result};
use crate::io::matrix_serde;
use crate::linalg::{self, c, power, real_matrix, ComplexMatrix};
use crate::rational::{int, ratio};
use crate::shift::{self, WeightSequence};
use crate::toeplitz::{self, MatrixSymbol, ToeplitzClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Matrix {
        #[serde(with = "matrix_serde")]
        matrix: ComplexMatrix,
    },
    Shift {
        weights: WeightSequence,
    },
    /// Section checked on the interior chosen by [`toeplitz::truncated_class_probe`].
    Toeplitz {
        symbol: MatrixSymbol,
        order: usize,
    },
    /// Section of a Toeplitz operator on the half-line checked on the leading
    /// block that drops the last `margin` block rows and columns. The section
    /// starts at index 0 exactly, so only the far end is affected.
    Truncated {
        symbol: MatrixSymbol,
        order: usize,
        margin: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Claim {
    Normal,
    NNormal {
        n: usize,
    },
    Hyponormal,
    /// `T*` hyponormal.
    CoHyponormal,
    /// `T^n` hyponormal.
    PowerHyponormal {
        n: usize,
    },
    Quasinormal,
    NQuasinormal {
        n: usize,
    },
    QuasiNNormal {
        n: usize,
    },
    /// Block positivity of powers of `T^n` for every `k <= k_max`.
    NSubnormalCertificate {
        n: usize,
        k_max: usize,
    },
    KHyponormal {
        k: usize,
    },
    Subnormal,
    NSubnormal {
        n: usize,
    },
    /// Summand `index` of the decomposition of `W^n` is subnormal.
    ComponentSubnormal {
        n: usize,
        index: usize,
    },
    QuadraticallyHyponormal,
    SymbolNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Holds,
    Fails,
}

impl Expected {
    fn as_bool(self) -> bool {
        self == Expected::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSpec {
    #[serde(flatten)]
    pub claim: Claim,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub witness: OperatorSpec,
    pub claims: Vec<ClaimSpec>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    #[serde(flatten)]
    pub claim: Claim,
    pub expected: Expected,
    /// `None` when the check could not run.
    pub observed: Option<bool>,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryResult {
    pub name: String,
    pub provenance: String,
    pub claims: Vec<ClaimResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryReport {
    pub entries: Vec<EntryResult>,
    pub all_pass: bool,
}

fn holds_with<T: Serialize>(holds: bool, detail: &T) -> (bool, Value) {
    (holds, serde_json::to_value(detail).expect("details serialize"))
}

fn unsupported(claim: Claim, kind: &str) -> Error {
    Error::InvalidArgument(format!("claim {claim:?} does not apply to a {kind} witness"))
}

fn evaluate_matrix(t: &ComplexMatrix, claim: Claim, tol: f64) -> Result<(bool, Value)> {
    let verdict = match claim {
        Claim::Normal => classes::is_normal(t, tol)?,
        Claim::NNormal { n } => classes::is_n_normal(t, n, tol)?.verdict,
        Claim::Hyponormal => classes::is_hyponormal(t, tol)?,
        Claim::CoHyponormal => classes::is_hyponormal(&t.adjoint(), tol)?,
        Claim::PowerHyponormal { n } => classes::is_hyponormal(&power(t, n), tol)?,
        Claim::Quasinormal => classes::is_quasinormal(t, tol)?,
        Claim::NQuasinormal { n } => classes::is_n_quasinormal(t, n, tol)?,
        Claim::QuasiNNormal { n } => classes::is_quasi_n_normal(t, n, tol)?,
        Claim::NSubnormalCertificate { n, k_max } => {
            let blocks = (1..=k_max)
                .map(|k| classes::bram_halmos_block_psd(t, n, k, tol))
                .collect::<Result<Vec<_>>>()?;
            return Ok(holds_with(blocks.iter().all(|v| v.holds), &blocks));
        }
        _ => return Err(unsupported(claim, "matrix")),
    };
    Ok(holds_with(verdict.holds, &verdict))
}

fn evaluate_shift(w: &WeightSequence, claim: Claim, tol: f64) -> Result<(bool, Value)> {
    Ok(match claim {
        Claim::Normal => {
            // [W*, W] has (0, 0) entry alpha_0^2 > 0.
            let a0 = w.weight_at_f64(0);
            holds_with(false, &json!({"self_commutator_00": a0 * a0}))
        }
        Claim::Hyponormal => {
            let v = shift::is_hyponormal_shift(w);
            holds_with(v.holds, &v)
        }
        Claim::KHyponormal { k } => {
            let v = shift::is_k_hyponormal_shift(w, k, None)?;
            holds_with(v.holds, &v)
        }
        Claim::Subnormal => {
            let v = shift::is_subnormal_shift(w);
            holds_with(v.holds, &v)
        }
        Claim::NSubnormal { n } => {
            let v = shift::is_n_subnormal_shift(w, n)?;
            holds_with(v.holds, &v)
        }
        Claim::ComponentSubnormal { n, index } => {
            let decomposition = w.decompose_power(n)?;
            let component = decomposition
                .components
                .get(index)
                .ok_or_else(|| Error::InvalidArgument(format!("W^{n} has no component {index}")))?;
            let v = shift::is_subnormal_shift(component);
            let k2 = shift::is_k_hyponormal_shift(component, 2, None)?;
            holds_with(
                v.holds,
                &json!({"component": component, "subnormal": v, "two_hyponormal": k2}),
            )
        }
        Claim::Quasinormal => holds_with(shift::is_quasinormal_shift(w), &Value::Null),
        Claim::NQuasinormal { n } => {
            let v = shift::is_n_quasinormal_shift(w, n)?;
            holds_with(v.holds, &v)
        }
        Claim::QuasiNNormal { n } => {
            let v = shift::is_quasi_n_normal_shift(w, n);
            holds_with(v.holds, &v)
        }
        Claim::QuadraticallyHyponormal => {
            let probe = shift::quadratic_hyponormality_probe(w, &shift::default_s_grid(), 40, tol)?;
            holds_with(!probe.refuted, &probe)
        }
        _ => return Err(unsupported(claim, "shift")),
    })
}

fn evaluate_toeplitz(symbol: &MatrixSymbol, order: usize, claim: Claim, tol: f64) -> Result<(bool, Value)> {
    let class = match claim {
        Claim::SymbolNormal => {
            let v = toeplitz::symbol_is_normal_ae(symbol, toeplitz::DEFAULT_GRID_POINTS, tol)?;
            return Ok(holds_with(v.normal, &v));
        }
        Claim::Hyponormal => ToeplitzClass::Hyponormal,
        Claim::NNormal { n } => ToeplitzClass::NNormal { n },
        Claim::NQuasinormal { n } => ToeplitzClass::NQuasinormal { n },
        _ => return Err(unsupported(claim, "toeplitz")),
    };
    let probe = toeplitz::truncated_class_probe(&toeplitz::assemble(symbol, order)?, class, tol)?;
    Ok(holds_with(probe.verdict.holds, &probe))
}

fn evaluate_truncated(
    symbol: &MatrixSymbol,
    order: usize,
    margin: usize,
    claim: Claim,
    tol: f64,
) -> Result<(bool, Value)> {
    if margin >= order {
        return Err(Error::OrderTooSmall {
            order,
            required: margin + 1,
        });
    }
    let t = toeplitz::assemble(symbol, order)?.matrix;
    let size = (order - margin) * symbol.block_size();
    let interior = |m: &ComplexMatrix| linalg::leading_block(m, size);
    let verdict = match claim {
        Claim::Hyponormal => classes::psd_verdict(
            classes::ClassName::Hyponormal,
            &interior(&linalg::self_commutator(&t)),
            tol,
        )?,
        Claim::PowerHyponormal { n } => classes::psd_verdict(
            classes::ClassName::Hyponormal,
            &interior(&linalg::self_commutator(&power(&t, n))),
            tol,
        )?,
        _ => return Err(unsupported(claim, "truncated")),
    };
    Ok(holds_with(
        verdict.holds,
        &json!({"interior_size": size, "verdict": verdict}),
    ))
}

pub fn evaluate_claim(witness: &OperatorSpec, claim: Claim, tol: f64) -> Result<(bool, Value)> {
    match witness {
        OperatorSpec::Matrix { matrix } => evaluate_matrix(matrix, claim, tol),
        OperatorSpec::Shift { weights } => evaluate_shift(weights, claim, tol),
        OperatorSpec::Toeplitz { symbol, order } => evaluate_toeplitz(symbol, *order, claim, tol),
        OperatorSpec::Truncated { symbol, order, margin } => evaluate_truncated(symbol, *order, *margin, claim, tol),
    }
}

pub fn evaluate_entry(entry: &RegistryEntry, tol: f64) -> EntryResult {
    let claims: Vec<ClaimResult> = entry
        .claims
        .iter()
        .map(|spec| match evaluate_claim(&entry.witness, spec.claim, tol) {
            Ok((observed, detail)) => ClaimResult {
                claim: spec.claim,
                expected: spec.expected,
                observed: Some(observed),
                pass: observed == spec.expected.as_bool(),
                detail,
            },
            Err(err) => ClaimResult {
                claim: spec.claim,
                expected: spec.expected,
                observed: None,
                pass: false,
                detail: json!({"error": err.to_string()}),
            },
        })
        .collect();
    EntryResult {
        name: entry.name.clone(),
        provenance: entry.provenance.clone(),
        pass: claims.iter().all(|c| c.pass),
        claims,
    }
}

/// Runs every entry whose name contains `filter` (all when `None`).
pub fn run(entries: &[RegistryEntry], filter: Option<&str>, tol: f64) -> RegistryReport {
    let selected: Vec<&RegistryEntry> = entries
        .iter()
        .filter(|e| filter.is_none_or(|f| e.name.contains(f)))
        .collect();
    #[cfg(feature = "parallel")]
    let results: Vec<EntryResult> = {
        use rayon::prelude::*;
        selected.par_iter().map(|e| evaluate_entry(e, tol)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<EntryResult> = selected.iter().map(|e| evaluate_entry(e, tol)).collect();
    RegistryReport {
        all_pass: results.iter().all(|r| r.pass),
        entries: results,
    }
}

fn claim(claim: Claim, expected: Expected) -> ClaimSpec {
    ClaimSpec { claim, expected }
}

fn shift_witness(prefix: Vec<crate::rational::ExactRational>) -> OperatorSpec {
    OperatorSpec::Shift {
        weights: WeightSequence::with_constant_tail(prefix, int(1)).expect("positive weights"),
    }
}

fn nilpotent() -> ComplexMatrix {
    real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]])
}

/// `e_0 -> e_0`, `e_{2k-1} -> e_{2k}`, `e_{2k} -> 0` on `span(e_0 .. e_{2 pairs})`,
/// an invariant subspace on which the operator is exactly represented.
pub fn patel_operator(pairs: usize) -> ComplexMatrix {
    let d = 2 * pairs + 1;
    let mut t = linalg::zeros(d, d);
    t[(0, 0)] = c(1.0, 0.0);
    for k in 1..=pairs {
        t[(2 * k, 2 * k - 1)] = c(1.0, 0.0);
    }
    t
}

/// The built-in entries.
pub fn builtin_entries() -> Vec<RegistryEntry> {
    use Expected::{Fails, Holds};

    let mut block_involution = linalg::zeros(4, 4);
    block_involution.view_mut((0, 0), (2, 2)).copy_from(&linalg::identity(2));
    block_involution[(0, 2)] = c(1.0, 0.0);
    block_involution.view_mut((2, 2), (2, 2)).copy_from(&(-linalg::identity(2)));

    let scalar = |x: f64| ComplexMatrix::from_element(1, 1, c(x, 0.0));
    let two_u_plus_adjoint =
        MatrixSymbol::new(1, BTreeMap::from([(1, scalar(2.0)), (-1, scalar(1.0))])).expect("1x1 coefficients");

    vec![
        RegistryEntry {
            name: "nilpotent-2x2".into(),
            witness: OperatorSpec::Matrix { matrix: nilpotent() },
            claims: vec![
                claim(Claim::NSubnormalCertificate { n: 2, k_max: 5 }, Holds),
                claim(Claim::NNormal { n: 2 }, Holds),
                claim(Claim::Hyponormal, Fails),
            ],
            provenance: "[[0,1],[0,0]]: square zero, so 2-subnormal, yet not hyponormal".into(),
        },
        RegistryEntry {
            name: "2U+U*".into(),
            witness: OperatorSpec::Truncated {
                symbol: two_u_plus_adjoint,
                order: 40,
                margin: 4,
            },
            claims: vec![
                claim(Claim::Hyponormal, Holds),
                claim(Claim::PowerHyponormal { n: 2 }, Fails),
            ],
            provenance: "2U + U* is hyponormal but its square is not, so it is not 2-subnormal".into(),
        },
        RegistryEntry {
            name: "involution-2x2".into(),
            witness: OperatorSpec::Matrix {
                matrix: real_matrix(&[&[1.0, 2.0], &[0.0, -1.0]]),
            },
            claims: vec![
                claim(Claim::NNormal { n: 2 }, Holds),
                claim(Claim::Normal, Fails),
                claim(Claim::Hyponormal, Fails),
            ],
            provenance: "[[a,b],[c,-a]] with |b| != |c| squares to a scalar but is not normal".into(),
        },
        RegistryEntry {
            name: "block-involution-4x4".into(),
            witness: OperatorSpec::Matrix { matrix: block_involution },
            claims: vec![claim(Claim::NNormal { n: 2 }, Holds), claim(Claim::Hyponormal, Fails)],
            provenance: "[[I,P],[0,-I]] with P a nonzero projection: 2-normal, not hyponormal".into(),
        },
        RegistryEntry {
            name: "shift-1/2-3/4".into(),
            witness: shift_witness(vec![ratio(1, 2), ratio(3, 4)]),
            claims: vec![
                claim(Claim::Hyponormal, Holds),
                claim(Claim::Subnormal, Fails),
                claim(Claim::NSubnormal { n: 2 }, Holds),
                claim(Claim::ComponentSubnormal { n: 2, index: 0 }, Holds),
                claim(Claim::ComponentSubnormal { n: 2, index: 1 }, Holds),
                claim(Claim::QuadraticallyHyponormal, Fails),
            ],
            provenance: "shift (1/2, 3/4, 1, 1, ...): 2-subnormal but not quadratically hyponormal".into(),
        },
        RegistryEntry {
            name: "shift-1/2-3/5-7/10".into(),
            witness: shift_witness(vec![ratio(1, 2), ratio(3, 5), ratio(7, 10)]),
            claims: vec![
                claim(Claim::Hyponormal, Holds),
                claim(Claim::Subnormal, Fails),
                claim(Claim::NSubnormal { n: 3 }, Holds),
                claim(Claim::NSubnormal { n: 2 }, Fails),
                claim(Claim::ComponentSubnormal { n: 2, index: 0 }, Fails),
            ],
            provenance: "shift (1/2, 3/5, 7/10, 1, ...): 3-subnormal, its square is not subnormal".into(),
        },
        RegistryEntry {
            name: "constant-shift".into(),
            witness: OperatorSpec::Shift {
                weights: WeightSequence::constant(int(1)).expect("positive weight"),
            },
            claims: vec![
                claim(Claim::Quasinormal, Holds),
                claim(Claim::Subnormal, Holds),
                claim(Claim::Normal, Fails),
            ],
            provenance: "a weighted shift is never normal; constant weights give a quasinormal shift".into(),
        },
        RegistryEntry {
            name: "patel".into(),
            witness: OperatorSpec::Matrix {
                matrix: patel_operator(4),
            },
            claims: vec![
                claim(Claim::NNormal { n: 2 }, Holds),
                claim(Claim::Hyponormal, Fails),
                claim(Claim::CoHyponormal, Fails),
            ],
            provenance: "T^2 is the projection onto span(e_0); T is neither hyponormal nor co-hyponormal".into(),
        },
        RegistryEntry {
            name: "symbol-constant-nilpotent".into(),
            witness: OperatorSpec::Toeplitz {
                symbol: MatrixSymbol::constant(nilpotent()).expect("square coefficient"),
                order: 16,
            },
            claims: vec![
                claim(Claim::SymbolNormal, Fails),
                claim(Claim::Hyponormal, Fails),
                claim(Claim::NNormal { n: 2 }, Holds),
            ],
            provenance: "symbol [[0,1],[0,0]] is not normal, so T is not hyponormal; T is 2-normal".into(),
        },
        RegistryEntry {
            name: "symbol-z-nilpotent".into(),
            witness: OperatorSpec::Toeplitz {
                symbol: MatrixSymbol::monomial(1, nilpotent()).expect("square coefficient"),
                order: 16,
            },
            claims: vec![
                claim(Claim::SymbolNormal, Fails),
                claim(Claim::Hyponormal, Fails),
                claim(Claim::NNormal { n: 2 }, Holds),
                claim(Claim::NQuasinormal { n: 2 }, Holds),
            ],
            provenance: "symbol [[0,z],[0,0]]: T^2 = 0, so sub-2-normal and 2-subnormal, not hyponormal".into(),
        },
    ]
}
