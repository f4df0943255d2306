//! Sub-n-normal operators at finite dimension.
//!
//! An [`ExtensionSpec`] pairs an n-normal ambient operator `S` on `K` with an
//! orthonormal basis `Q` of an `S`-invariant subspace `H`; the operator under
//! study is `T = Q* S Q`.
//!
//! In finite dimension an invariant subspace of the normal operator `S^n`
//! reduces it, so `S*^n H` already lies in `H` and the minimal extension is
//! `S` restricted to `H` itself. The span formula is still evaluated as
//! stated and the result checked, which is what the checks below exercise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::{self, PowerIdentityReport};
use crate::error::{Error, Result};
use crate::io::matrix_serde;
use crate::linalg::{self, c, norm_inf, power, ComplexMatrix, ComplexVector};

/// Largest `||Q*Q - I||_inf` accepted for a subspace basis.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Tolerance on Hausdorff defects between spectra.
pub const SPECTRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtensionSpecJson", into = "ExtensionSpecJson")]
pub struct ExtensionSpec {
    ambient: ComplexMatrix,
    subspace_basis: ComplexMatrix,
    n: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpecJson {
    #[serde(with = "matrix_serde")]
    ambient: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    subspace_basis: ComplexMatrix,
    n: usize,
}

impl TryFrom<ExtensionSpecJson> for ExtensionSpec {
    type Error = Error;

    fn try_from(j: ExtensionSpecJson) -> Result<Self> {
        ExtensionSpec::new(j.ambient, j.subspace_basis, j.n)
    }
}

impl From<ExtensionSpec> for ExtensionSpecJson {
    fn from(s: ExtensionSpec) -> Self {
        ExtensionSpecJson {
            ambient: s.ambient,
            subspace_basis: s.subspace_basis,
            n: s.n,
        }
    }
}

impl ExtensionSpec {
    /// Checks shapes, `n >= 1` and orthonormality of the basis. Invariance and
    /// n-normality are tolerance-dependent and checked by [`Self::validate`].
    pub fn new(ambient: ComplexMatrix, subspace_basis: ComplexMatrix, n: usize) -> Result<Self> {
        let d = linalg::ensure_square(&ambient)?;
        if subspace_basis.nrows() != d {
            return Err(Error::DimensionMismatch {
                left: ambient.shape(),
                right: subspace_basis.shape(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let deviation = linalg::orthonormality_defect(&subspace_basis);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(ExtensionSpec {
            ambient,
            subspace_basis,
            n,
        })
    }

    pub fn ambient(&self) -> &ComplexMatrix {
        &self.ambient
    }

    pub fn subspace_basis(&self) -> &ComplexMatrix {
        &self.subspace_basis
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.nrows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspace_basis.ncols()
    }

    /// `T = Q* S Q`.
    pub fn restriction(&self) -> ComplexMatrix {
        self.subspace_basis.adjoint() * &self.ambient * &self.subspace_basis
    }

    /// `||(I - QQ*) S Q||_inf`.
    pub fn invariance_residual(&self) -> f64 {
        leakage(&self.ambient, &self.subspace_basis)
    }

    /// `S H ⊆ H` and `S` n-normal, both within `tol` relative to `||S||`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let residual = self.invariance_residual();
        if residual > tol * (1.0 + norm_inf(&self.ambient)) {
            return Err(Error::InvarianceViolated { residual });
        }
        let v = classes::is_n_normal(&self.ambient, self.n, tol)?;
        if !v.verdict.holds {
            return Err(Error::AmbientNotNNormal {
                n: self.n,
                residual: v.verdict.residual,
            });
        }
        Ok(())
    }
}

fn leakage(s: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    if q.ncols() == 0 {
        return 0.0;
    }
    let sq = s * q;
    norm_inf(&(&sq - q * (q.adjoint() * &sq)))
}

/// `Q* S Q` for an orthonormal `Q`.
pub fn compress_to_subspace(s: &ComplexMatrix, basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = linalg::ensure_square(s)?;
    if basis.nrows() != d {
        return Err(Error::DimensionMismatch {
            left: s.shape(),
            right: basis.shape(),
        });
    }
    let deviation = linalg::orthonormality_defect(basis);
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(basis.adjoint() * s * basis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalExtension {
    /// `S` compressed to `L`.
    #[serde(with = "matrix_serde")]
    pub reduced_ambient: ComplexMatrix,
    /// Orthonormal basis of `L` in the coordinates of `K`.
    #[serde(with = "matrix_serde")]
    pub reduced_basis: ComplexMatrix,
    /// Basis of `H` in the coordinates of `L`.
    #[serde(with = "matrix_serde")]
    pub embedded_subspace: ComplexMatrix,
    #[serde(rename = "contains_H")]
    pub contains_h: bool,
    pub invariance_residual: f64,
    /// `dim span{S*^{nk} h : k <= 3} - dim L`, when requested.
    pub extended_span_growth: Option<usize>,
}

impl MinimalExtension {
    pub fn dim(&self) -> usize {
        self.reduced_basis.ncols()
    }

    /// The extension as a spec of its own.
    pub fn to_spec(&self, n: usize) -> Result<ExtensionSpec> {
        ExtensionSpec::new(self.reduced_ambient.clone(), self.embedded_subspace.clone(), n)
    }
}

/// Which powers `S*^{nk}` enter the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpanMode {
    /// `k = 0, 1`.
    #[default]
    Standard,
    /// Also computes the span for `k <= 3` and reports its growth.
    Extended,
}

fn span_of_powers(spec: &ExtensionSpec, k_max: usize, tol: f64) -> Result<ComplexMatrix> {
    let q = &spec.subspace_basis;
    let step = power(&spec.ambient.adjoint(), spec.n);
    let mut vectors = linalg::matrix_columns(q);
    let mut block = q.clone();
    for _ in 0..k_max {
        block = &step * &block;
        vectors.extend(linalg::matrix_columns(&block));
    }
    linalg::orthonormal_span(&vectors, tol)
}

/// `L = span(H ∪ S*^n H)`, with `S L ⊆ L` and `S|_L` n-normal verified.
pub fn minimal_extension(spec: &ExtensionSpec, tol: f64) -> Result<MinimalExtension> {
    minimal_extension_with(spec, tol, SpanMode::Standard)
}

pub fn minimal_extension_with(spec: &ExtensionSpec, tol: f64, mode: SpanMode) -> Result<MinimalExtension> {
    spec.validate(tol)?;
    let d = spec.ambient_dim();
    if spec.subspace_dim() == 0 {
        return Ok(MinimalExtension {
            reduced_ambient: linalg::zeros(0, 0),
            reduced_basis: linalg::zeros(d, 0),
            embedded_subspace: linalg::zeros(0, 0),
            contains_h: true,
            invariance_residual: 0.0,
            extended_span_growth: (mode == SpanMode::Extended).then_some(0),
        });
    }
    let basis = span_of_powers(spec, 1, tol)?;
    let invariance_residual = leakage(&spec.ambient, &basis);
    if invariance_residual > tol * (1.0 + norm_inf(&spec.ambient)) {
        return Err(Error::InvarianceViolated {
            residual: invariance_residual,
        });
    }
    let reduced_ambient = basis.adjoint() * &spec.ambient * &basis;
    let v = classes::is_n_normal(&reduced_ambient, spec.n, tol)?;
    if !v.verdict.holds {
        return Err(Error::NotNNormalOnL {
            n: spec.n,
            residual: v.verdict.residual,
        });
    }
    let embedded_subspace = basis.adjoint() * &spec.subspace_basis;
    let outside = &spec.subspace_basis - &basis * &embedded_subspace;
    let contains_h = norm_inf(&outside) <= tol * (1.0 + norm_inf(&spec.subspace_basis));
    let extended_span_growth = match mode {
        SpanMode::Standard => None,
        SpanMode::Extended => Some(span_of_powers(spec, 3, tol)?.ncols() - basis.ncols()),
    };
    Ok(MinimalExtension {
        reduced_ambient,
        reduced_basis: basis,
        embedded_subspace,
        contains_h,
        invariance_residual,
        extended_span_growth,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub holds: bool,
    pub gram_defect: f64,
    pub isometry_defect: f64,
    pub intertwining_defect: f64,
    /// `K_1 -> K_2`, unitary when the ambient dimensions agree.
    #[serde(with = "matrix_serde")]
    pub intertwiner: ComplexMatrix,
}

/// Builds `V(S_1*^{nk} h) = S_2*^{nk} U h` for `k = 0, 1` and checks that it is
/// a well-defined isometry intertwining the ambients.
pub fn minimal_extensions_unitarily_equivalent(
    spec1: &ExtensionSpec,
    spec2: &ExtensionSpec,
    u: &ComplexMatrix,
    tol: f64,
) -> Result<EquivalenceReport> {
    if spec1.n != spec2.n {
        return Err(Error::InvalidArgument(format!(
            "specs have different n ({} and {})",
            spec1.n, spec2.n
        )));
    }
    let (h1, h2) = (spec1.subspace_dim(), spec2.subspace_dim());
    if u.shape() != (h2, h1) {
        return Err(Error::DimensionMismatch {
            left: (h2, h1),
            right: u.shape(),
        });
    }
    let t1 = spec1.restriction();
    let t2 = spec2.restriction();
    let unitary_defect = norm_inf(&(u.adjoint() * u - linalg::identity(h1)));
    let residual = norm_inf(&(u * &t1 - &t2 * u)).max(unitary_defect);
    if residual > tol * (1.0 + norm_inf(&t1).max(norm_inf(&t2))) {
        return Err(Error::NotIntertwining { residual });
    }

    let spanning = |spec: &ExtensionSpec, q: ComplexMatrix| {
        let back = power(&spec.ambient.adjoint(), spec.n) * &q;
        let mut x = linalg::zeros(q.nrows(), 2 * q.ncols());
        x.view_mut((0, 0), q.shape()).copy_from(&q);
        x.view_mut((0, q.ncols()), back.shape()).copy_from(&back);
        x
    };
    let x1 = spanning(spec1, spec1.subspace_basis.clone());
    let x2 = spanning(spec2, &spec2.subspace_basis * u);
    let g1 = x1.adjoint() * &x1;
    let g2 = x2.adjoint() * &x2;
    let gram_defect = norm_inf(&(&g1 - &g2));
    if gram_defect > tol * (1.0 + norm_inf(&g1)) {
        return Err(Error::GramMismatch { residual: gram_defect });
    }

    let pinv = x1
        .clone()
        .pseudo_inverse(tol * (1.0 + linalg::spectral_norm(&x1)))
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut v = &x2 * pinv;
    // V so far maps span(X_1) onto span(X_2); when the complements have equal
    // dimension, send one onto the other to get a unitary.
    let c1 = complement(&x1, tol)?;
    let c2 = complement(&x2, tol)?;
    let isometry_defect = if spec1.ambient_dim() == spec2.ambient_dim() && c1.ncols() == c2.ncols() {
        v += c2 * c1.adjoint();
        norm_inf(&(v.adjoint() * &v - linalg::identity(spec1.ambient_dim())))
    } else {
        f64::INFINITY
    };
    let intertwining_defect = norm_inf(&(&v * &spec1.ambient - &spec2.ambient * &v));
    let scale = 1.0 + norm_inf(&spec1.ambient).max(norm_inf(&spec2.ambient));
    Ok(EquivalenceReport {
        holds: isometry_defect <= tol * scale && intertwining_defect <= tol * scale,
        gram_defect,
        isometry_defect,
        intertwining_defect,
        intertwiner: v,
    })
}

/// Orthonormal basis of the orthogonal complement of the column space of `x`.
fn complement(x: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let d = x.nrows();
    let span = if x.ncols() == 0 {
        linalg::zeros(d, 0)
    } else {
        linalg::orthonormal_span(&linalg::matrix_columns(x), tol)?
    };
    let rank = span.ncols();
    let mut vectors = linalg::matrix_columns(&span);
    vectors.extend(linalg::matrix_columns(&linalg::identity(d)));
    if vectors.is_empty() {
        return Ok(linalg::zeros(0, 0));
    }
    let full = linalg::orthonormal_span(&vectors, tol)?;
    Ok(full.columns(rank, full.ncols() - rank).into_owned())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralInclusionReport {
    pub sigma_t: Vec<Complex64>,
    pub sigma_s: Vec<Complex64>,
    /// `max_{mu in σ(S)} dist(mu, σ(T))`; `None` when a spectrum is empty.
    pub s_to_t_defect: Option<f64>,
    /// `max_{lambda in σ(T)} dist(lambda, σ(S))`.
    pub t_to_s_defect: Option<f64>,
    pub within_tolerance: bool,
}

fn directed_defect(from: &[Complex64], to: &[Complex64]) -> Option<f64> {
    if from.is_empty() {
        return Some(0.0);
    }
    if to.is_empty() {
        return None;
    }
    Some(
        from.iter()
            .map(|a| to.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max),
    )
}

/// Compares `σ(T)` with `σ(S)`. Defects are reported, not asserted.
pub fn spectral_inclusions_check(spec: &ExtensionSpec) -> Result<SpectralInclusionReport> {
    let sigma_t = linalg::general_eigenvalues(&spec.restriction())?;
    let sigma_s = linalg::general_eigenvalues(&spec.ambient)?;
    let s_to_t_defect = directed_defect(&sigma_s, &sigma_t);
    let t_to_s_defect = directed_defect(&sigma_t, &sigma_s);
    let within_tolerance = [s_to_t_defect, t_to_s_defect]
        .iter()
        .all(|d| d.is_some_and(|d| d <= SPECTRAL_TOL));
    Ok(SpectralInclusionReport {
        sigma_t,
        sigma_s,
        s_to_t_defect,
        t_to_s_defect,
        within_tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSetReport {
    /// `||f(T)||_2`.
    pub lhs_norm: f64,
    /// `max_{lambda in σ(T)} |f(lambda)|`.
    pub rhs_sup: f64,
    pub satisfied: bool,
}

/// `coeffs[i]` is the coefficient of `z^i`.
pub fn polynomial_of(t: &ComplexMatrix, coeffs: &[Complex64]) -> ComplexMatrix {
    let d = t.nrows();
    coeffs
        .iter()
        .rev()
        .fold(linalg::zeros(d, d), |acc, a| acc * t + linalg::identity(d) * *a)
}

fn polynomial_value(z: Complex64, coeffs: &[Complex64]) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

/// Reports whether `||f(T)|| <= sup |f|` over `σ(T)`.
pub fn spectral_set_check(spec: &ExtensionSpec, coeffs: &[Complex64], tol: f64) -> Result<SpectralSetReport> {
    let t = spec.restriction();
    let lhs_norm = linalg::spectral_norm(&polynomial_of(&t, coeffs));
    let rhs_sup = linalg::general_eigenvalues(&t)?
        .into_iter()
        .map(|z| polynomial_value(z, coeffs).norm())
        .fold(0.0, f64::max);
    Ok(SpectralSetReport {
        lhs_norm,
        rhs_sup,
        satisfied: lhs_norm <= rhs_sup * (1.0 + tol),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmReport {
    /// `residuals[i] = ||T*^{ni} T^{ni} - sum_j |lambda_j|^{2i} P_H E_j P_H|| / (1 + max|lambda|^{2i})`.
    pub residuals: Vec<f64>,
    pub within_tolerance: bool,
}

/// Moment identity for the spectral measure of `S^n` compressed to `H`, for
/// `i = 0..=i_max`.
pub fn povm_moment_check(spec: &ExtensionSpec, i_max: usize, tol: f64) -> Result<PovmReport> {
    let sn = power(&spec.ambient, spec.n);
    let normal = classes::is_normal(&sn, tol)?;
    if !normal.holds {
        return Err(Error::AmbientNotNNormal {
            n: spec.n,
            residual: normal.residual,
        });
    }
    let (q, eig) = linalg::normal_eigendecomposition(&sn)?;
    let b = q.adjoint() * &spec.subspace_basis;
    let moduli: Vec<f64> = eig.iter().map(|z| z.norm_sqr()).collect();
    let radius = moduli.iter().copied().fold(0.0, f64::max);
    let tn = power(&spec.restriction(), spec.n);
    let h = spec.subspace_dim();
    let mut tni = linalg::identity(h);
    let mut residuals = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        if i > 0 {
            tni = &tni * &tn;
        }
        let lhs = tni.adjoint() * &tni;
        let weights: Vec<f64> = moduli.iter().map(|m| m.powi(i as i32)).collect();
        let rhs = b.adjoint() * linalg::real_diag(&weights) * &b;
        residuals.push(norm_inf(&(lhs - rhs)) / (1.0 + radius.powi(i as i32)));
    }
    Ok(PovmReport {
        within_tolerance: residuals.iter().all(|r| *r <= tol),
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub m: usize,
    pub n: usize,
    /// `T^m` n-quasinormal within `tol`.
    pub power_n_quasinormal: bool,
    pub power_residual: f64,
    /// `T` n-quasinormal within `10 tol`.
    pub t_n_quasinormal: bool,
    pub t_residual: f64,
    pub power_identity: PowerIdentityReport,
    /// Premise held and conclusion failed.
    pub flagged: bool,
}

/// If `T^m` is n-quasinormal then so is `T`.
pub fn subn_power_quasinormal_theorem_harness(
    spec: &ExtensionSpec,
    m: usize,
    k_max: usize,
    tol: f64,
) -> Result<HarnessReport> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must exceed 1, got {m}")));
    }
    let n = spec.n;
    let t = spec.restriction();
    let premise = classes::is_n_quasinormal(&power(&t, m), n, tol)?;
    let conclusion = classes::is_n_quasinormal(&t, n, 10.0 * tol)?;
    let power_identity = classes::power_identity_check(&t, n, k_max, tol)?;
    Ok(HarnessReport {
        m,
        n,
        power_n_quasinormal: premise.holds,
        power_residual: premise.residual,
        t_n_quasinormal: conclusion.holds,
        t_residual: conclusion.residual,
        power_identity,
        flagged: premise.holds && !conclusion.holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessSummary {
    pub cases: usize,
    pub premise_held: usize,
    pub flags: usize,
}

pub fn harness_summary(reports: &[HarnessReport]) -> HarnessSummary {
    HarnessSummary {
        cases: reports.len(),
        premise_held: reports.iter().filter(|r| r.power_n_quasinormal).count(),
        flags: reports.iter().filter(|r| r.flagged).count(),
    }
}

/// `(sum <A^{j+1} x_i, A^{i+1} x_j>, sum <A^j x_i, A^i x_j>)` with `A = T^n`,
/// over `0 <= i, j < xs.len()`. Both are real for any family.
pub fn positivity_forms(t: &ComplexMatrix, n: usize, xs: &[ComplexVector]) -> (f64, f64) {
    let a = power(t, n);
    let k = xs.len();
    // images[p][i] = A^p x_i
    let mut images: Vec<Vec<ComplexVector>> = vec![xs.to_vec()];
    for p in 1..=k {
        let next = images[p - 1].iter().map(|x| &a * x).collect();
        images.push(next);
    }
    let mut shifted = c(0.0, 0.0);
    let mut base = c(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            shifted += images[i + 1][j].dotc(&images[j + 1][i]);
            base += images[i][j].dotc(&images[j][i]);
        }
    }
    (shifted.re, base.re)
}
