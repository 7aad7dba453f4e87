//! α-deformed arithmetic.
//!
//! Every deformed operation is ordinary arithmetic conjugated by the signed
//! power map `x ↦ x|x|^{α−1}`: the α-sum of `a` and `b` is the preimage of
//! `spow(a, α) + spow(b, α)`. At `α = 1` the map is the identity and every
//! operation here reduces to its classical counterpart.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive real deformation parameter α.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DeformationParameter(f64);

impl DeformationParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain(format!(
                "deformation parameter must be a positive finite real, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `true` when α = 1 and the arithmetic is ordinary.
    #[inline]
    pub fn is_undeformed(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for DeformationParameter {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<DeformationParameter> for f64 {
    fn from(alpha: DeformationParameter) -> f64 {
        alpha.0
    }
}

impl std::fmt::Display for DeformationParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Signed power `sign(x)·|x|^p`, with `spow(0, p) = 0`.
#[inline]
pub fn spow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

/// Maps `x` to the coordinate in which α-addition is ordinary addition.
#[inline]
pub fn to_additive(x: f64, alpha: DeformationParameter) -> f64 {
    spow(x, alpha.value())
}

/// Inverse of [`to_additive`].
#[inline]
pub fn from_additive(s: f64, alpha: DeformationParameter) -> f64 {
    spow(s, 1.0 / alpha.value())
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}

fn check_result(op: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Range(format!("{op} overflowed 64-bit range")))
    }
}

/// α-addition `a ⊕ b = |a|a|^{α−1} + b|b|^{α−1}|^{1/α−1}(a|a|^{α−1} + b|b|^{α−1})`.
///
/// Zero is an exact identity. When the inner sum cancels to zero the
/// result is zero, including the case where cancellation is only a
/// rounding artefact of nonzero operands.
pub fn alpha_add(a: f64, b: f64, alpha: DeformationParameter) -> Result<f64> {
    check_finite("a", a)?;
    check_finite("b", b)?;
    if b == 0.0 {
        return Ok(a);
    }
    if a == 0.0 {
        return Ok(b);
    }
    let inner = to_additive(a, alpha) + to_additive(b, alpha);
    check_result("alpha_add", from_additive(inner, alpha))
}

/// α-subtraction `a ⊖ b`, the inverse of [`alpha_add`] in its first argument.
pub fn alpha_sub(a: f64, b: f64, alpha: DeformationParameter) -> Result<f64> {
    check_finite("a", a)?;
    check_finite("b", b)?;
    if b == 0.0 {
        return Ok(a);
    }
    if a == b {
        return Ok(0.0);
    }
    let inner = to_additive(a, alpha) - to_additive(b, alpha);
    check_result("alpha_sub", from_additive(inner, alpha))
}

/// α-product; the deformation leaves multiplication unchanged.
#[inline]
pub fn alpha_mul(a: f64, b: f64) -> f64 {
    a * b
}

/// α-division; ordinary division with a zero-divisor check.
pub fn alpha_div(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::Domain("α-division by zero".into()));
    }
    Ok(a / b)
}

/// α-exponential `e_α(z) = exp(|z|^{α−1} z)` for real `z`.
///
/// Fails with a range error when the result saturates to `+∞` or to zero.
pub fn alpha_exp(z: f64, alpha: DeformationParameter) -> Result<f64> {
    check_finite("z", z)?;
    let exponent = to_additive(z, alpha);
    let value = exponent.exp();
    if value.is_infinite() {
        Err(Error::Range(format!(
            "e_α({z}) = exp({exponent:e}) exceeds f64::MAX ({:e})",
            f64::MAX
        )))
    } else if value == 0.0 {
        Err(Error::Range(format!(
            "e_α({z}) = exp({exponent:e}) underflows below f64::MIN_POSITIVE ({:e})",
            f64::MIN_POSITIVE
        )))
    } else {
        Ok(value)
    }
}

/// α-exponential of a pure imaginary argument, `e_α(iy) = exp(i·y|y|^{α−1})`.
pub fn alpha_exp_imag(y: f64, alpha: DeformationParameter) -> Result<Complex64> {
    check_finite("y", y)?;
    Ok(Complex64::from_polar(1.0, to_additive(y, alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn alpha(a: f64) -> DeformationParameter {
        DeformationParameter::new(a).unwrap()
    }

    #[test]
    fn rejects_non_positive_alpha() {
        assert!(DeformationParameter::new(0.0).is_err());
        assert!(DeformationParameter::new(-1.5).is_err());
        assert!(DeformationParameter::new(f64::NAN).is_err());
        assert!(DeformationParameter::new(f64::INFINITY).is_err());
    }

    #[test]
    fn zero_is_exact_identity() {
        for &a in &[-7.25, -1e-3, 0.0, 0.3, 12.0, 999.0] {
            for &al in &[0.5, 1.0, 2.0, 3.0, 1.7] {
                assert_eq!(alpha_add(a, 0.0, alpha(al)).unwrap(), a);
                assert_eq!(alpha_add(0.0, a, alpha(al)).unwrap(), a);
            }
        }
    }

    #[test]
    fn worked_values() {
        assert!((alpha_add(3.0, 4.0, alpha(2.0)).unwrap() - 5.0).abs() < 1e-15);
        assert!((alpha_sub(5.0, 4.0, alpha(2.0)).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(alpha_mul(2.0, 3.0), 6.0);
        assert_eq!(alpha_div(6.0, 3.0).unwrap(), 2.0);
        assert_eq!(alpha_mul(-4.5, 1.0), -4.5);
    }

    #[test]
    fn undeformed_limit_is_classical() {
        let one = alpha(1.0);
        for &(a, b) in &[(1.5, 2.25), (-3.0, 0.125), (1e3, -7e2), (0.1, 0.2)] {
            assert_eq!(alpha_add(a, b, one).unwrap(), a + b);
            assert_eq!(alpha_sub(a, b, one).unwrap(), a - b);
            assert_eq!(alpha_exp(a / 1e3, one).unwrap(), (a / 1e3).exp());
            assert_eq!(
                alpha_exp_imag(b, one).unwrap(),
                Complex64::from_polar(1.0, b)
            );
        }
    }

    #[test]
    fn self_cancellation_and_sign() {
        for &al in &[0.5, 2.0, 3.0] {
            assert_eq!(alpha_sub(4.2, 4.2, alpha(al)).unwrap(), 0.0);
            // antisymmetry in the operands
            let x = alpha_sub(2.0, 5.0, alpha(al)).unwrap();
            let y = alpha_sub(5.0, 2.0, alpha(al)).unwrap();
            assert!((x + y).abs() < 1e-14);
            assert!(x < 0.0);
        }
    }

    #[test]
    fn inner_cancellation_returns_zero() {
        assert_eq!(alpha_add(2.0, -2.0, alpha(3.0)).unwrap(), 0.0);
        assert_eq!(alpha_add(-0.5, 0.5, alpha(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_inputs_are_domain_errors() {
        let a = alpha(2.0);
        assert!(matches!(alpha_add(f64::NAN, 1.0, a), Err(Error::Domain(_))));
        assert!(matches!(
            alpha_sub(1.0, f64::INFINITY, a),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            alpha_exp(f64::NEG_INFINITY, a),
            Err(Error::Domain(_))
        ));
        assert!(matches!(alpha_exp_imag(f64::NAN, a), Err(Error::Domain(_))));
        assert!(matches!(alpha_div(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn exponential_values() {
        for &al in &[0.5, 1.0, 2.0, 3.0, 4.5] {
            assert_eq!(alpha_exp(0.0, alpha(al)).unwrap(), 1.0);
            assert!((alpha_exp(1.0, alpha(al)).unwrap() - E).abs() < 1e-15);
            assert!((alpha_exp(-1.0, alpha(al)).unwrap() - 1.0 / E).abs() < 1e-16);
        }
        assert!(matches!(alpha_exp(30.0, alpha(3.0)), Err(Error::Range(_))));
        assert!(matches!(alpha_exp(-30.0, alpha(3.0)), Err(Error::Range(_))));
    }

    #[test]
    fn exponential_is_monotone() {
        let a = alpha(2.5);
        let mut prev = 0.0;
        for k in -40..=40 {
            let v = alpha_exp(k as f64 / 10.0, a).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn imaginary_exponential_is_a_phase() {
        assert_eq!(
            alpha_exp_imag(0.0, alpha(2.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        for &al in &[0.5, 1.0, 2.0, 3.0] {
            for k in -20..20 {
                let z = alpha_exp_imag(k as f64 * 0.37, alpha(al)).unwrap();
                assert!((z.norm() - 1.0).abs() < 1e-15);
            }
        }
        // (ξθ)^α for non-negative arguments
        let z = alpha_exp_imag(1.5, alpha(2.0)).unwrap();
        assert!((z - Complex64::from_polar(1.0, 2.25)).norm() < 1e-15);
    }
}
