//! The d-point α-uniform angle lattice `θ_n = 2π(n/d)^{1/α}`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::deformed::DeformationParameter;
use crate::error::{Error, Result};

/// Smallest supported number of lattice points.
pub const MIN_POINTS: usize = 2;
/// Largest supported number of lattice points; operators are dense `d×d`.
pub const MAX_POINTS: usize = 4096;

/// Immutable description of an α-uniform lattice on the circle.
///
/// Consecutive angles have constant α-difference `σ = 2π/d^{1/α}`, and the
/// virtual point `θ_d = 2π` closes the circle onto `θ_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSpec {
    d: usize,
    alpha: DeformationParameter,
    sigma: f64,
    angles: Vec<f64>,
    #[serde(skip)]
    sigma_alpha: f64,
}

impl LatticeSpec {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> DeformationParameter {
        self.alpha
    }

    /// Deformed spacing σ.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `σ^α = (2π)^α / d`, the denominator of the angular momentum operators.
    pub fn sigma_alpha(&self) -> f64 {
        self.sigma_alpha
    }

    /// `σ^{2α}`, computed as the square of [`Self::sigma_alpha`].
    pub fn sigma_two_alpha(&self) -> f64 {
        self.sigma_alpha * self.sigma_alpha
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Angle at a cyclic index.
    pub fn angle(&self, n: i64) -> f64 {
        self.angles[wrap_index(n, self.d)]
    }
}

/// Builds the lattice `θ_n = 2π(n/d)^{1/α}`, `n = 0..d`.
pub fn build_lattice(d: usize, alpha: DeformationParameter) -> Result<LatticeSpec> {
    if !(MIN_POINTS..=MAX_POINTS).contains(&d) {
        return Err(Error::Config(format!(
            "lattice size d must lie in [{MIN_POINTS}, {MAX_POINTS}], got {d}"
        )));
    }
    let inv_alpha = 1.0 / alpha.value();
    let sigma = TAU / (d as f64).powf(inv_alpha);
    let angles = (0..d)
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                TAU * (n as f64 / d as f64).powf(inv_alpha)
            }
        })
        .collect();
    Ok(LatticeSpec {
        d,
        alpha,
        sigma,
        angles,
        sigma_alpha: sigma.powf(alpha.value()),
    })
}

/// Cyclic index `n mod d` in `[0, d)`, valid for negative `n`.
#[inline]
pub fn wrap_index(n: i64, d: usize) -> usize {
    n.rem_euclid(d as i64) as usize
}
