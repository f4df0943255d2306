//! Seeded random generators for the randomized checks.
//!
//! Every generator takes an explicit RNG so a run is reproducible from a
//! single `u64` seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::RrForm;
use crate::extensions::ExtensionSpec;
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the square `[-scale, scale]^2`.
pub fn complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// Uniform on the annulus sector `min_modulus <= |z| <= max_modulus`.
pub fn complex_with_modulus<R: Rng>(rng: &mut R, min_modulus: f64, max_modulus: f64) -> Complex64 {
    let r = rng.gen_range(min_modulus..=max_modulus);
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::from_fn(dim, |_, _| complex(rng, 1.0))
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex(rng, 1.0))
}

pub fn real_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..=1.0), 0.0))
}

pub fn hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    linalg::hermitian_part(&matrix(rng, dim, dim))
}

/// Q factor of a random square matrix.
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    matrix(rng, dim, dim).qr().q()
}

/// `U diag(lambda) U*` with eigenvalues in the unit square scaled by `scale`.
pub fn normal<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    let u = unitary(rng, dim);
    let eig: Vec<Complex64> = (0..dim).map(|_| complex(rng, scale)).collect();
    &u * linalg::diag(&eig) * u.adjoint()
}

/// Upper triangular with random entries.
pub fn upper_triangular<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = matrix(rng, dim, dim);
    for j in 0..dim {
        for i in j + 1..dim {
            m[(i, j)] = c(0.0, 0.0);
        }
    }
    m
}

/// `B = U diag(b) U*` and `C = U diag(c) U*` with `|b_i| in [0.3, 1.5]`,
/// `c_i in [0.2, 2]`, plus an optional normal `A` of size `a_dim`.
pub fn rr_form<R: Rng>(rng: &mut R, dim: usize, a_dim: usize) -> RrForm {
    let u = unitary(rng, dim);
    let b: Vec<Complex64> = (0..dim).map(|_| complex_with_modulus(rng, 0.3, 1.5)).collect();
    let cs: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..=2.0)).collect();
    RrForm {
        a_block: (a_dim > 0).then(|| normal(rng, a_dim, 1.5)),
        b_block: &u * linalg::diag(&b) * u.adjoint(),
        c_block: &u * linalg::real_diag(&cs) * u.adjoint(),
    }
}

/// Sub-2-normal spec built from a diagonal Radjavi-Rosenthal operator
/// `A (+) [[B, C], [0, -B]]` rotated by a global unitary.
///
/// For each 2-dimensional summand `[[b, c], [0, -b]]` the subspace takes one
/// of: nothing, the top vector, the `-b` eigenvector `(-c, 2b)`, or both. Each
/// coordinate of `A` is included at random. The subspace is never `{0}`.
pub fn rr_extension_spec<R: Rng>(rng: &mut R, rr_dim: usize, a_dim: usize) -> ExtensionSpec {
    let b: Vec<Complex64> = (0..rr_dim).map(|_| complex_with_modulus(rng, 0.3, 1.5)).collect();
    let cs: Vec<f64> = (0..rr_dim).map(|_| rng.gen_range(0.2..=2.0)).collect();
    let a: Vec<Complex64> = (0..a_dim).map(|_| complex(rng, 1.5)).collect();
    let mut s0 = linalg::direct_sum(
        &linalg::diag(&a),
        &crate::classes::rr_block(&linalg::diag(&b), &linalg::real_diag(&cs)),
    );
    let d = a_dim + 2 * rr_dim;
    let unit = |i: usize| ComplexVector::from_fn(d, |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) });

    let mut vectors = Vec::new();
    loop {
        for k in 0..a_dim {
            if rng.gen_bool(0.5) {
                vectors.push(unit(k));
            }
        }
        for i in 0..rr_dim {
            let (top, bottom) = (a_dim + i, a_dim + rr_dim + i);
            let eigvec = unit(top) * c(-cs[i], 0.0) + unit(bottom) * (b[i] * 2.0);
            match rng.gen_range(0..4) {
                0 => {}
                1 => vectors.push(unit(top)),
                2 => vectors.push(eigvec),
                _ => {
                    vectors.push(unit(top));
                    vectors.push(unit(bottom));
                }
            }
        }
        if !vectors.is_empty() {
            break;
        }
    }
    let q0 = linalg::orthonormal_span(&vectors, 1e-12).expect("nonempty family");
    let w = unitary(rng, d);
    s0 = &w * s0 * w.adjoint();
    ExtensionSpec::new(s0, &w * q0, 2).expect("orthonormal basis of matching size")
}

/// A non-normal `T` with `T^n` normal: a sum of blocks `[[b, c], [0, w b]]`
/// with `w` a nontrivial n-th root of unity (so each block's n-th power is
/// `b^n I`), plus `extra` scalar entries, rotated by a random unitary.
pub fn n_normal<R: Rng>(rng: &mut R, n: usize, blocks: usize, extra: usize) -> ComplexMatrix {
    assert!(n >= 2, "a non-normal n-normal matrix needs n >= 2");
    let d = 2 * blocks + extra;
    let mut t = linalg::zeros(d, d);
    for i in 0..blocks {
        let b = complex_with_modulus(rng, 0.3, 1.2);
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * rng.gen_range(1..n) as f64 / n as f64);
        let o = 2 * i;
        t[(o, o)] = b;
        t[(o, o + 1)] = complex(rng, 1.0);
        t[(o + 1, o + 1)] = w * b;
    }
    for k in 2 * blocks..d {
        t[(k, k)] = complex(rng, 1.2);
    }
    let u = unitary(rng, d);
    &u * t * u.adjoint()
}

/// Commuting n-normal pair `X (+) beta I` and `alpha I (+) Y` in a common
/// rotated basis.
pub fn commuting_n_normal_pair<R: Rng>(rng: &mut R, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let x = n_normal(rng, n, 1, 0);
    let y = n_normal(rng, n, 1, 0);
    let alpha = complex(rng, 1.0);
    let beta = complex(rng, 1.0);
    let t1 = linalg::direct_sum(&x, &(linalg::identity(2) * beta));
    let t2 = linalg::direct_sum(&(linalg::identity(2) * alpha), &y);
    let u = unitary(rng, 4);
    (&u * t1 * u.adjoint(), &u * t2 * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::is_n_normal;
    use crate::linalg::{norm_inf, orthonormality_defect, DEFAULT_TOL};

    #[test]
    fn generators_are_reproducible() {
        assert_eq!(matrix(&mut rng(7), 3, 3), matrix(&mut rng(7), 3, 3));
        assert!(orthonormality_defect(&unitary(&mut rng(1), 5)) < 1e-12);
    }

    #[test]
    fn rr_specs_are_valid() {
        let mut r = rng(11);
        for _ in 0..20 {
            let a_dim = r.gen_range(0..3);
            let spec = rr_extension_spec(&mut r, 2, a_dim);
            spec.validate(DEFAULT_TOL).unwrap();
            assert!(spec.subspace_dim() > 0);
        }
    }

    #[test]
    fn n_normal_samples() {
        let mut r = rng(3);
        for n in 2..5 {
            let t = n_normal(&mut r, n, 2, 1);
            assert!(is_n_normal(&t, n, DEFAULT_TOL).unwrap().verdict.holds);
            assert!(norm_inf(&linalg::self_commutator(&t)) > 1e-3);
        }
        let (a, b) = commuting_n_normal_pair(&mut r, 3);
        assert!(norm_inf(&(&a * &b - &b * &a)) < 1e-12);
    }
}
