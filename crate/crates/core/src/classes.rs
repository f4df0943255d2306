//! Operator-class predicates for dense matrices.
//!
//! Identity-type classes (normal, n-normal, quasinormal, ...) are decided by a
//! residual `||lhs - rhs||_inf` against `tol * (1 + ||T||_inf^d)`, where `d` is
//! the total degree of the defining expression. Order-type classes
//! (hyponormal, block positivity) go through [`linalg::is_psd`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::linalg::{self, norm_inf, power, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassName {
    Normal,
    NNormal { n: usize },
    Hyponormal,
    Quasinormal,
    QuasiNNormal { n: usize },
    NQuasinormal { n: usize },
    NSubnormalCertificate { n: usize, k: usize },
    TwoNormalRrForm,
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassName::Normal => write!(f, "normal"),
            ClassName::NNormal { n } => write!(f, "{n}-normal"),
            ClassName::Hyponormal => write!(f, "hyponormal"),
            ClassName::Quasinormal => write!(f, "quasinormal"),
            ClassName::QuasiNNormal { n } => write!(f, "quasi-{n}-normal"),
            ClassName::NQuasinormal { n } => write!(f, "{n}-quasinormal"),
            ClassName::NSubnormalCertificate { n, k } => {
                write!(f, "{n}-subnormal (block positivity up to k={k})")
            }
            ClassName::TwoNormalRrForm => write!(f, "2-normal (Radjavi-Rosenthal form)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class_name: ClassName,
    pub holds: bool,
    pub residual: f64,
    pub certificate: Certificate,
}

pub(crate) fn scale_of(t: &ComplexMatrix, degree: i32) -> f64 {
    1.0 + norm_inf(t).powi(degree)
}

pub(crate) fn residual_verdict(class_name: ClassName, defect: &ComplexMatrix, threshold: f64) -> ClassVerdict {
    let residual = norm_inf(defect);
    ClassVerdict {
        class_name,
        holds: residual <= threshold,
        residual,
        certificate: Certificate::Residual { residual, threshold },
    }
}

pub(crate) fn psd_verdict(class_name: ClassName, m: &ComplexMatrix, tol: f64) -> Result<ClassVerdict> {
    let v = linalg::is_psd(m, tol)?;
    Ok(ClassVerdict {
        class_name,
        holds: v.is_psd,
        residual: (-v.min_eigenvalue).max(0.0),
        certificate: Certificate::from_psd(&v),
    })
}

fn check_power(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// `T*T = TT*`.
pub fn is_normal(t: &ComplexMatrix, tol: f64) -> Result<ClassVerdict> {
    linalg::ensure_square(t)?;
    Ok(residual_verdict(
        ClassName::Normal,
        &linalg::self_commutator(t),
        tol * scale_of(t, 2),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NNormalVerdict {
    pub verdict: ClassVerdict,
    /// `||T* T^n - T^n T*||_inf`, the equivalent defining relation.
    pub commutation_residual: f64,
    pub commutation_holds: bool,
}

/// `T^n` normal; also reports `T* T^n = T^n T*`.
pub fn is_n_normal(t: &ComplexMatrix, n: usize, tol: f64) -> Result<NNormalVerdict> {
    linalg::ensure_square(t)?;
    check_power(n)?;
    let tn = power(t, n);
    let verdict = residual_verdict(
        ClassName::NNormal { n },
        &linalg::self_commutator(&tn),
        tol * scale_of(t, 2 * n as i32),
    );
    let adj = t.adjoint();
    let commutation_residual = norm_inf(&(&adj * &tn - &tn * &adj));
    Ok(NNormalVerdict {
        commutation_holds: commutation_residual <= tol * scale_of(t, n as i32 + 1),
        commutation_residual,
        verdict,
    })
}

/// `T*T - TT* >= 0`. On a finite-dimensional space this holds only for normal
/// `T` (the self-commutator has trace zero); the test is still meaningful on
/// interior blocks of truncations.
pub fn is_hyponormal(t: &ComplexMatrix, tol: f64) -> Result<ClassVerdict> {
    linalg::ensure_square(t)?;
    psd_verdict(ClassName::Hyponormal, &linalg::self_commutator(t), tol)
}

/// `T` commutes with `T*T`.
pub fn is_quasinormal(t: &ComplexMatrix, tol: f64) -> Result<ClassVerdict> {
    linalg::ensure_square(t)?;
    let tt = t.adjoint() * t;
    Ok(residual_verdict(
        ClassName::Quasinormal,
        &(t * &tt - &tt * t),
        tol * scale_of(t, 3),
    ))
}

/// `T` commutes with `T*^n T^n`.
pub fn is_quasi_n_normal(t: &ComplexMatrix, n: usize, tol: f64) -> Result<ClassVerdict> {
    linalg::ensure_square(t)?;
    check_power(n)?;
    let tn = power(t, n);
    let m = tn.adjoint() * &tn;
    Ok(residual_verdict(
        ClassName::QuasiNNormal { n },
        &(t * &m - &m * t),
        tol * scale_of(t, 2 * n as i32 + 1),
    ))
}

/// `T^n` quasinormal.
pub fn is_n_quasinormal(t: &ComplexMatrix, n: usize, tol: f64) -> Result<ClassVerdict> {
    linalg::ensure_square(t)?;
    check_power(n)?;
    let tn = power(t, n);
    let m = tn.adjoint() * &tn;
    Ok(residual_verdict(
        ClassName::NQuasinormal { n },
        &(&tn * &m - &m * &tn),
        tol * scale_of(t, 3 * n as i32),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerIdentityReport {
    pub n: usize,
    /// `residuals[k-1] = ||T*^{nk} T^{nk} - (T*^n T^n)^k|| / (1 + ||T||^{2nk})`.
    pub residuals: Vec<f64>,
    /// All residuals within tolerance for `k <= k_max`; this is consistency up
    /// to `k_max`, not a proof for every `k`.
    pub consistent_up_to_k_max: bool,
}

pub fn power_identity_check(t: &ComplexMatrix, n: usize, k_max: usize, tol: f64) -> Result<PowerIdentityReport> {
    linalg::ensure_square(t)?;
    check_power(n)?;
    let tn = power(t, n);
    let base = tn.adjoint() * &tn;
    let norm = norm_inf(t);
    let mut lhs_power = linalg::identity(t.nrows());
    let mut rhs = linalg::identity(t.nrows());
    let mut residuals = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        lhs_power = &lhs_power * &tn;
        rhs = &rhs * &base;
        let lhs = lhs_power.adjoint() * &lhs_power;
        let scale = 1.0 + norm.powi((2 * n * k) as i32);
        residuals.push(norm_inf(&(lhs - &rhs)) / scale);
    }
    Ok(PowerIdentityReport {
        n,
        consistent_up_to_k_max: residuals.iter().all(|r| *r <= tol),
        residuals,
    })
}

/// Block matrix with `(i, j)` block `A*^j A^i`, `A = T^n`, `0 <= i, j <= k`:
/// the positivity condition whose validity for all `k` characterizes
/// subnormality of `A`.
pub fn bram_halmos_matrix(t: &ComplexMatrix, n: usize, k: usize) -> Result<ComplexMatrix> {
    let d = linalg::ensure_square(t)?;
    check_power(n)?;
    let a = power(t, n);
    let a_adj = a.adjoint();
    let mut powers = vec![linalg::identity(d)];
    let mut adj_powers = vec![linalg::identity(d)];
    for i in 1..=k {
        powers.push(&powers[i - 1] * &a);
        adj_powers.push(&adj_powers[i - 1] * &a_adj);
    }
    let mut out = linalg::zeros(d * (k + 1), d * (k + 1));
    for i in 0..=k {
        for j in 0..=k {
            let block = &adj_powers[j] * &powers[i];
            out.view_mut((i * d, j * d), (d, d)).copy_from(&block);
        }
    }
    Ok(out)
}

/// PSD test of [`bram_halmos_matrix`]; certifies k-hyponormality of `T^n`.
pub fn bram_halmos_block_psd(t: &ComplexMatrix, n: usize, k: usize, tol: f64) -> Result<ClassVerdict> {
    let m = bram_halmos_matrix(t, n, k)?;
    psd_verdict(ClassName::NSubnormalCertificate { n, k }, &m, tol)
}

/// Blocks of a Radjavi-Rosenthal square root of a normal operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RrForm {
    pub a_block: Option<ComplexMatrix>,
    pub b_block: ComplexMatrix,
    pub c_block: ComplexMatrix,
}

/// Relative definiteness floor for `C`.
pub const POSITIVE_DEFINITE_TOL: f64 = 1e-10;

fn require_normal(m: &ComplexMatrix, which: &'static str, tol: f64) -> Result<()> {
    let v = is_normal(m, tol)?;
    if !v.holds {
        return Err(Error::NotNormal {
            which,
            residual: v.residual,
        });
    }
    Ok(())
}

fn validate_b_c(b: &ComplexMatrix, c: &ComplexMatrix, tol: f64, definite: bool) -> Result<()> {
    linalg::ensure_square(b)?;
    if b.shape() != c.shape() {
        return Err(Error::DimensionMismatch {
            left: b.shape(),
            right: c.shape(),
        });
    }
    require_normal(b, "B", tol)?;
    let herm_defect = norm_inf(&(c - c.adjoint()));
    let ev = linalg::hermitian_eigenvalues(c)?;
    let min_eigenvalue = ev.first().copied().unwrap_or(0.0);
    let scale = 1.0 + norm_inf(c);
    let floor = if definite {
        POSITIVE_DEFINITE_TOL * scale
    } else {
        -tol * scale
    };
    if herm_defect > tol * scale || min_eigenvalue < floor {
        return Err(Error::NotPositive {
            which: "C",
            min_eigenvalue,
        });
    }
    let residual = norm_inf(&linalg::commutator(b, c)?);
    if residual > tol * (1.0 + norm_inf(b) * norm_inf(c)) {
        return Err(Error::NotCommuting { residual });
    }
    Ok(())
}

/// `[[B, C], [0, -B]]` without validation.
pub fn rr_block(b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    let d = b.nrows();
    let mut z = linalg::zeros(2 * d, 2 * d);
    z.view_mut((0, 0), (d, d)).copy_from(b);
    z.view_mut((0, d), (d, d)).copy_from(c);
    z.view_mut((d, d), (d, d)).copy_from(&(-b));
    z
}

/// `A (+) [[B, C], [0, -B]]` for normal `A`, `B` and positive definite `C`
/// commuting with `B`. The result squares to `A^2 (+) B^2 (+) B^2`.
pub fn rr_construct(
    a: Option<&ComplexMatrix>,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: f64,
) -> Result<ComplexMatrix> {
    if let Some(a) = a {
        linalg::ensure_square(a)?;
        require_normal(a, "A", tol)?;
    }
    validate_b_c(b, c, tol, true)?;
    let z = rr_block(b, c);
    Ok(match a {
        Some(a) => linalg::direct_sum(a, &z),
        None => z,
    })
}

impl RrForm {
    pub fn build(&self, tol: f64) -> Result<ComplexMatrix> {
        rr_construct(self.a_block.as_ref(), &self.b_block, &self.c_block, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrHyponormalityReport {
    /// `||(Z*Z - ZZ*)_{11} + CC*||_inf`.
    pub block_defect: f64,
    pub block_matches: bool,
    pub z_hyponormal: bool,
    pub c_is_zero: bool,
    /// `Z` hyponormal exactly when `C = 0`.
    pub consistent: bool,
}

/// Upper-left block of the self-commutator of `[[B, C], [0, -B]]` equals `-CC*`;
/// hence hyponormality of that operator forces `C = 0`.
pub fn hyponormal_2normal_forces_normal_check(
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: f64,
) -> Result<RrHyponormalityReport> {
    validate_b_c(b, c, tol, false)?;
    let d = b.nrows();
    let z = rr_block(b, c);
    let sc = linalg::self_commutator(&z);
    let block = sc.view((0, 0), (d, d)).into_owned();
    let expected = -(c * c.adjoint());
    let block_defect = norm_inf(&(block - expected));
    let z_hyponormal = is_hyponormal(&z, tol)?.holds;
    let c_is_zero = norm_inf(c) <= tol * (1.0 + norm_inf(b));
    Ok(RrHyponormalityReport {
        block_defect,
        block_matches: block_defect <= tol * scale_of(&z, 2),
        z_hyponormal,
        c_is_zero,
        consistent: z_hyponormal == c_is_zero,
    })
}
