//! Dense complex matrices in the angle eigenbasis.

use std::fmt;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Which operator a matrix represents; carried along for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorRole {
    Identity,
    Angle,
    Translation,
    PhaseV,
    LPlus,
    LMinus,
    Hamiltonian,
    Derived,
}

impl fmt::Display for OperatorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OperatorRole::Identity => "identity",
            OperatorRole::Angle => "angle",
            OperatorRole::Translation => "translation",
            OperatorRole::PhaseV => "phase_v",
            OperatorRole::LPlus => "l_plus",
            OperatorRole::LMinus => "l_minus",
            OperatorRole::Hamiltonian => "hamiltonian",
            OperatorRole::Derived => "derived",
        };
        f.write_str(name)
    }
}

/// Row-major dense `dim×dim` complex matrix. Column `n` is the image of `|n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    role: OperatorRole,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize, role: OperatorRole) -> Self {
        Self {
            dim,
            role,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, OperatorRole::Identity);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64], role: OperatorRole) -> Self {
        let mut m = Self::zeros(diag.len(), role);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds from row-major entries.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>, role: OperatorRole) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, role, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn role(&self) -> OperatorRole {
        self.role
    }

    pub fn with_role(mut self, role: OperatorRole) -> Self {
        self.role = role;
        self
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim == other_dim {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: self.dim,
                actual: other_dim,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n, self.role);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Plain transpose without conjugation.
    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n, self.role);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n, OperatorRole::Derived);
        for i in 0..n {
            let row = self.row(i);
            for (k, &a) in row.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.entries[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            dim: self.dim,
            role: OperatorRole::Derived,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            role: OperatorRole::Derived,
            entries: self.entries.iter().map(|&z| factor * z).collect(),
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut exponent: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = result.matmul(&base).expect("square operands");
            }
            exponent >>= 1;
            if exponent > 0 {
                base = base.matmul(&base).expect("square operands");
            }
        }
        result.with_role(OperatorRole::Derived)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

struct Rows<'a>(&'a ComplexMatrix);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.0;
        let mut seq = serializer.serialize_seq(Some(m.dim))?;
        for i in 0..m.dim {
            let row: Vec<[f64; 2]> = m.row(i).iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// `{role, dim, entries}` with `entries` as rows of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComplexMatrix", 3)?;
        s.serialize_field("role", &self.role)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("entries", &Rows(self))?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::from_rows(
            2,
            vec![c(1.0, 1.0), c(0.0, 2.0), c(3.0, 0.0), c(-1.0, 0.5)],
            OperatorRole::Derived,
        )
        .unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(a.matmul(&id).unwrap().entries(), a.entries());
        let ah = a.adjoint();
        assert_eq!(ah[(0, 1)], c(3.0, 0.0));
        assert_eq!(ah[(1, 0)], c(0.0, -2.0));
        let g = ah.matmul(&a).unwrap();
        assert!(g.hermiticity_residual() < 1e-15);
        assert!(a.hermiticity_residual() > 1.0);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = ComplexMatrix::from_rows(
            2,
            vec![c(0.5, 0.1), c(0.2, 0.0), c(0.0, -0.3), c(0.7, 0.0)],
            OperatorRole::Derived,
        )
        .unwrap();
        let mut naive = ComplexMatrix::identity(2);
        for _ in 0..7 {
            naive = naive.matmul(&a).unwrap();
        }
        assert!(a.pow(7).max_abs_diff(&naive).unwrap() < 1e-15);
        assert_eq!(
            a.pow(0),
            ComplexMatrix::identity(2).with_role(OperatorRole::Derived)
        );
    }

    #[test]
    fn shape_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            a.matmul(&b),
            Err(Error::Shape {
                expected: 2,
                actual: 3
            })
        ));
        assert!(a.apply(&[c(1.0, 0.0)]).is_err());
        assert!(ComplexMatrix::from_rows(2, vec![c(0.0, 0.0); 3], OperatorRole::Derived).is_err());
    }

    #[test]
    fn json_uses_re_im_pairs() {
        let m = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, -1.0)], OperatorRole::PhaseV);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["role"], "phase_v");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["entries"][1][1], serde_json::json!([0.0, -1.0]));
        assert_eq!(v["entries"][0][1], serde_json::json!([0.0, 0.0]));
    }
}
