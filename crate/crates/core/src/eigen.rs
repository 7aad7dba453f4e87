//! Two independent eigen-oracles for Hermitian matrices: a cyclic complex
//! Jacobi solver for any Hermitian input, and the analytic discrete-Fourier
//! diagonalization of circulant matrices.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with unit eigenvectors at matching indices.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigensystem {
    fn sorted(mut pairs: Vec<(f64, Vec<Complex64>)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (values, vectors) = pairs.into_iter().unzip();
        Self { values, vectors }
    }

    /// `max_k ‖H v_k − λ_k v_k‖₂`.
    pub fn max_residual(&self, h: &ComplexMatrix) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            let hv = h.apply(v)?;
            let r = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

fn require_hermitian(h: &ComplexMatrix) -> Result<()> {
    let residual = h.hermiticity_residual();
    let tol = 1e-12 * h.max_abs().max(1.0);
    if residual > tol {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian: max |H − H†| = {residual:e} exceeds {tol:e}"
        )));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation that annihilates it.
pub fn jacobi_eigh(h: &ComplexMatrix) -> Result<Eigensystem> {
    require_hermitian(h)?;
    let n = h.dim();
    let mut a: Vec<Complex64> = h.entries().to_vec();
    // symmetrize so the iteration starts exactly Hermitian
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in i + 1..n {
            let avg = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let scale = h.frobenius_norm();
    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[p * n + q];
                let mag = b.norm();
                if mag == 0.0 || mag <= f64::EPSILON * 1e-3 * scale {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = b / mag; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph_conj = phase.conj(); // e^{−iφ}

                // columns: A ← A G with G = [[c, s], [−s e^{−iφ}, c e^{−iφ}]]
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ph_conj * s;
                    a[k * n + q] = akp * s + akq * ph_conj * c;
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * ph_conj * s;
                    v[k * n + q] = vkp * s + vkq * ph_conj * c;
                }
                // rows: A ← G† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        // the final sweep may have finished the job
        if off > 1e-12 * scale {
            return Err(Error::Range(format!(
                "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {off:e})"
            )));
        }
    }

    let pairs = (0..n)
        .map(|j| {
            let col = (0..n).map(|i| v[i * n + j]).collect();
            (a[j * n + j].re, col)
        })
        .collect();
    Ok(Eigensystem::sorted(pairs))
}

/// Generating column `c_m = H[m][0]` if `H[i][j] = c_{(i−j) mod d}`.
pub fn circulant_column(h: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let d = h.dim();
    let col = h.column(0);
    let tol = 1e-14 * h.max_abs().max(1.0);
    for i in 0..d {
        for j in 0..d {
            if (h[(i, j)] - col[(i + d - j) % d]).norm() > tol {
                return Err(Error::Precondition(format!(
                    "matrix is not circulant at entry ({i}, {j})"
                )));
            }
        }
    }
    Ok(col)
}

/// Analytic eigensystem of a Hermitian circulant matrix.
///
/// The Fourier vectors `v_k[j] = e^{2πijk/d}/√d` diagonalize every circulant,
/// with eigenvalue `λ_k = Σ_m c_m e^{−2πimk/d}`.
pub fn circulant_eigh(h: &ComplexMatrix) -> Result<Eigensystem> {
    require_hermitian(h)?;
    let d = h.dim();
    let col = circulant_column(h)?;
    let norm = 1.0 / (d as f64).sqrt();
    let pairs = (0..d)
        .map(|k| {
            let lambda: Complex64 = col
                .iter()
                .enumerate()
                .map(|(m, &c)| {
                    c * Complex64::from_polar(1.0, -TAU * ((m * k) % d) as f64 / d as f64)
                })
                .sum();
            let vector = (0..d)
                .map(|j| Complex64::from_polar(norm, TAU * ((j * k) % d) as f64 / d as f64))
                .collect();
            (lambda.re, vector)
        })
        .collect();
    Ok(Eigensystem::sorted(pairs))
}
