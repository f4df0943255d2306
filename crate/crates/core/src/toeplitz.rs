//! Finite sections of block Toeplitz operators with matrix trigonometric
//! polynomial symbols `Phi(z) = sum_d Phi_d z^d`.
//!
//! The order-`N` section has block `(p, q)` equal to `Phi_{p-q}`. For an
//! analytic symbol (no negative indices) it is block lower triangular, so
//! powers of the section are sections of powers and only products involving
//! the adjoint pick up errors, in the last `d_max` block rows per factor.
//! Negative indices also bring Hankel terms into the first block rows.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::{psd_verdict, residual_verdict, scale_of, ClassName, ClassVerdict};
use crate::error::{Error, Result};
use crate::io::{matrix_serde, MatrixJson};
use crate::linalg::{self, c, norm_inf, power, ComplexMatrix};

pub const DEFAULT_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolJson", into = "SymbolJson")]
pub struct MatrixSymbol {
    block_size: usize,
    coeffs: BTreeMap<i64, ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    block_size: usize,
    /// Fourier index (decimal string) to coefficient.
    coeffs: BTreeMap<String, MatrixJson>,
}

impl TryFrom<SymbolJson> for MatrixSymbol {
    type Error = Error;

    fn try_from(j: SymbolJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .into_iter()
            .map(|(key, m)| {
                let schema = |message: String| Error::Schema {
                    pointer: format!("/coeffs/{key}"),
                    message,
                };
                let d = key
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| schema(format!("Fourier index is not an integer: {e}")))?;
                ComplexMatrix::try_from(m).map(|m| (d, m)).map_err(schema)
            })
            .collect::<Result<_>>()?;
        MatrixSymbol::new(j.block_size, coeffs)
    }
}

impl From<MatrixSymbol> for SymbolJson {
    fn from(s: MatrixSymbol) -> Self {
        SymbolJson {
            block_size: s.block_size,
            coeffs: s
                .coeffs
                .iter()
                .map(|(d, m)| (d.to_string(), MatrixJson::from(m)))
                .collect(),
        }
    }
}

impl MatrixSymbol {
    /// Coefficients must all be `block_size x block_size`. Zero coefficients
    /// are dropped.
    pub fn new(block_size: usize, coeffs: BTreeMap<i64, ComplexMatrix>) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidArgument("block_size must be at least 1".into()));
        }
        for m in coeffs.values() {
            if m.shape() != (block_size, block_size) {
                return Err(Error::DimensionMismatch {
                    left: (block_size, block_size),
                    right: m.shape(),
                });
            }
        }
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, m)| m.iter().any(|z| *z != c(0.0, 0.0)))
            .collect();
        Ok(MatrixSymbol { block_size, coeffs })
    }

    pub fn constant(m: ComplexMatrix) -> Result<Self> {
        Self::monomial(0, m)
    }

    /// `m z^d`.
    pub fn monomial(d: i64, m: ComplexMatrix) -> Result<Self> {
        linalg::ensure_square(&m)?;
        MatrixSymbol::new(m.nrows(), BTreeMap::from([(d, m)]))
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, ComplexMatrix> {
        &self.coeffs
    }

    pub fn coefficient(&self, d: i64) -> ComplexMatrix {
        self.coeffs
            .get(&d)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.block_size, self.block_size))
    }

    /// Largest `|d|` with a nonzero coefficient; 0 for the zero symbol.
    pub fn d_max(&self) -> usize {
        self.coeffs.keys().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|d| *d >= 0)
    }

    pub fn eval(&self, z: Complex64) -> ComplexMatrix {
        self.coeffs
            .iter()
            .fold(linalg::zeros(self.block_size, self.block_size), |acc, (d, m)| {
                acc + m * z.powi(*d as i32)
            })
    }

    /// `Phi~(z) = Phi(z)*` on the circle: `d -> Phi_{-d}*`.
    pub fn adjoint(&self) -> MatrixSymbol {
        MatrixSymbol {
            block_size: self.block_size,
            coeffs: self.coeffs.iter().map(|(d, m)| (-d, m.adjoint())).collect(),
        }
    }

    /// `a Phi + b Psi`.
    pub fn linear_combination(a: Complex64, phi: &MatrixSymbol, b: Complex64, psi: &MatrixSymbol) -> Result<Self> {
        if phi.block_size != psi.block_size {
            return Err(Error::DimensionMismatch {
                left: (phi.block_size, phi.block_size),
                right: (psi.block_size, psi.block_size),
            });
        }
        let keys: std::collections::BTreeSet<i64> = phi.coeffs.keys().chain(psi.coeffs.keys()).copied().collect();
        let coeffs = keys
            .into_iter()
            .map(|d| (d, phi.coefficient(d) * a + psi.coefficient(d) * b))
            .collect();
        MatrixSymbol::new(phi.block_size, coeffs)
    }

    /// Pointwise product `Phi(z) Psi(z)`.
    pub fn product(&self, other: &MatrixSymbol) -> Result<Self> {
        if self.block_size != other.block_size {
            return Err(Error::DimensionMismatch {
                left: (self.block_size, self.block_size),
                right: (other.block_size, other.block_size),
            });
        }
        let mut coeffs: BTreeMap<i64, ComplexMatrix> = BTreeMap::new();
        for (d, a) in &self.coeffs {
            for (e, b) in &other.coeffs {
                let term = a * b;
                coeffs.entry(d + e).and_modify(|m| *m += &term).or_insert(term);
            }
        }
        MatrixSymbol::new(self.block_size, coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzTruncation {
    pub symbol: MatrixSymbol,
    pub order: usize,
    #[serde(with = "matrix_serde")]
    pub matrix: ComplexMatrix,
}

/// Order-`order` section; requires `order > 2 d_max`.
pub fn assemble(symbol: &MatrixSymbol, order: usize) -> Result<ToeplitzTruncation> {
    let required = 2 * symbol.d_max() + 1;
    if order < required {
        return Err(Error::OrderTooSmall { order, required });
    }
    let k = symbol.block_size;
    let mut matrix = linalg::zeros(k * order, k * order);
    for p in 0..order {
        for q in 0..order {
            if let Some(block) = symbol.coeffs.get(&(p as i64 - q as i64)) {
                matrix.view_mut((p * k, q * k), (k, k)).copy_from(block);
            }
        }
    }
    Ok(ToeplitzTruncation {
        symbol: symbol.clone(),
        order,
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolNormality {
    pub normal: bool,
    /// Largest `||Phi(z)* Phi(z) - Phi(z) Phi(z)*||_inf` over the grid.
    pub max_residual: f64,
    pub worst_z: Complex64,
    pub threshold: f64,
}

/// Normality of `Phi(z)` on `grid_points` equispaced points of the circle. A
/// failure certifies that the Toeplitz operator is not hyponormal.
pub fn symbol_is_normal_ae(symbol: &MatrixSymbol, grid_points: usize, tol: f64) -> Result<SymbolNormality> {
    if grid_points < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 grid points, got {grid_points}"
        )));
    }
    let mut worst = (f64::NEG_INFINITY, c(1.0, 0.0));
    let mut largest = 0.0f64;
    for j in 0..grid_points {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / grid_points as f64);
        let value = symbol.eval(z);
        largest = largest.max(norm_inf(&value));
        let residual = norm_inf(&linalg::self_commutator(&value));
        if residual > worst.0 {
            worst = (residual, z);
        }
    }
    let threshold = tol * (1.0 + largest * largest);
    Ok(SymbolNormality {
        normal: worst.0 <= threshold,
        max_residual: worst.0,
        worst_z: worst.1,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ToeplitzClass {
    Hyponormal,
    NNormal { n: usize },
    NQuasinormal { n: usize },
}

impl ToeplitzClass {
    /// Number of operator factors in the defining expression.
    pub fn degree(self) -> usize {
        match self {
            ToeplitzClass::Hyponormal => 2,
            ToeplitzClass::NNormal { n } => 2 * n,
            ToeplitzClass::NQuasinormal { n } => n + 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzProbe {
    pub verdict: ClassVerdict,
    /// Margin in block rows.
    pub margin: usize,
    /// Scalar index range `[start, start + size)` of the interior block.
    pub interior_start: usize,
    pub interior_size: usize,
}

/// Evaluates `class` on the interior principal block of the section.
pub fn truncated_class_probe(trunc: &ToeplitzTruncation, class: ToeplitzClass, tol: f64) -> Result<ToeplitzProbe> {
    if let ToeplitzClass::NNormal { n: 0 } | ToeplitzClass::NQuasinormal { n: 0 } = class {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let d_max = trunc.symbol.d_max();
    let margin = d_max * class.degree();
    let required = 2 * margin + 1;
    if trunc.order < required {
        return Err(Error::OrderTooSmall {
            order: trunc.order,
            required,
        });
    }
    let k = trunc.symbol.block_size;
    let lead = if trunc.symbol.is_analytic() { 0 } else { margin };
    let interior_start = lead * k;
    let interior_size = (trunc.order - lead - margin) * k;
    let interior = |m: &ComplexMatrix| linalg::principal_block(m, interior_start, interior_size);

    let t = &trunc.matrix;
    let verdict = match class {
        ToeplitzClass::Hyponormal => psd_verdict(ClassName::Hyponormal, &interior(&linalg::self_commutator(t)), tol)?,
        ToeplitzClass::NNormal { n } => residual_verdict(
            ClassName::NNormal { n },
            &interior(&linalg::self_commutator(&power(t, n))),
            tol * scale_of(t, 2 * n as i32),
        ),
        ToeplitzClass::NQuasinormal { n } => {
            let tn = power(t, n);
            let m = t.adjoint() * t;
            residual_verdict(
                ClassName::NQuasinormal { n },
                &interior(&(&tn * &m - &m * &tn)),
                tol * scale_of(t, n as i32 + 2),
            )
        }
    };
    Ok(ToeplitzProbe {
        verdict,
        margin,
        interior_start,
        interior_size,
    })
}
