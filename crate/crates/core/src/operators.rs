//! Operators on the d-dimensional angle eigenbasis: angle θ̂, translation U,
//! the phase operator V, the discrete angular momenta L±, and the Hamiltonian.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::deformed::{alpha_add, alpha_exp_imag, alpha_sub, to_additive, DeformationParameter};
use crate::error::{Error, Result};
use crate::lattice::{wrap_index, LatticeSpec, MIN_POINTS};
use crate::matrix::{ComplexMatrix, OperatorRole};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physical constants: ħ, particle mass m, circle radius R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub radius: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, radius: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("radius", radius)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be a positive finite real, got {v}"
                )));
            }
        }
        Ok(Self { hbar, mass, radius })
    }

    /// ħ = m = R = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            radius: 1.0,
        }
    }

    /// Moment of inertia mR².
    pub fn inertia(&self) -> f64 {
        self.mass * self.radius * self.radius
    }

    /// Energy unit ħ²/(mR²).
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / self.inertia()
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}

/// Diagonal angle operator `θ̂|n⟩ = θ_n|n⟩`.
pub fn angle_operator(lattice: &LatticeSpec) -> ComplexMatrix {
    let diag: Vec<_> = lattice
        .angles()
        .iter()
        .map(|&th| Complex64::new(th, 0.0))
        .collect();
    ComplexMatrix::from_diagonal(&diag, OperatorRole::Angle)
}

/// Cyclic translation `U|n⟩ = |n−1⟩` with `|n+d⟩ ≡ |n⟩`.
pub fn translation_u(d: usize) -> Result<ComplexMatrix> {
    if d < MIN_POINTS {
        return Err(Error::Config(format!(
            "translation needs d ≥ {MIN_POINTS}, got {d}"
        )));
    }
    let mut u = ComplexMatrix::zeros(d, OperatorRole::Translation);
    for n in 0..d {
        u[(wrap_index(n as i64 - 1, d), n)] = ONE;
    }
    Ok(u)
}

/// Phase scale `(2π)^{1/α−1}` that makes `V|0⟩ = |0⟩` close the circle.
pub fn phase_xi(alpha: DeformationParameter) -> f64 {
    TAU.powf(1.0 / alpha.value() - 1.0)
}

/// `V = e_α(i·(2π)^{1/α−1}·θ̂)`, diagonal with entries `exp(2πin/d)`.
pub fn v_operator(lattice: &LatticeSpec) -> ComplexMatrix {
    let alpha = lattice.alpha();
    let xi = phase_xi(alpha);
    let diag: Vec<_> = lattice
        .angles()
        .iter()
        .map(|&th| alpha_exp_imag(xi * th, alpha).expect("lattice angles are finite"))
        .collect();
    ComplexMatrix::from_diagonal(&diag, OperatorRole::PhaseV)
}

/// Weyl factor `q = e^{2πi/d}`.
pub fn q_factor(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU / d as f64)
}

/// `q` evaluated through the deformed exponential `e_α(i(2π)^{1/α−1}σ)`.
pub fn q_factor_deformed(lattice: &LatticeSpec) -> Complex64 {
    let alpha = lattice.alpha();
    alpha_exp_imag(phase_xi(alpha) * lattice.sigma(), alpha).expect("σ is finite")
}

/// Residuals of `VU† = qU†V` and `VU = q^{−1}UV` as (adjoint, forward).
pub fn weyl_residuals(v: &ComplexMatrix, u: &ComplexMatrix, q: Complex64) -> Result<(f64, f64)> {
    let ud = u.adjoint();
    let lhs = v.matmul(&ud)?;
    let rhs = ud.matmul(v)?.scale(q);
    let adjoint = lhs.max_abs_diff(&rhs)?;

    let lhs = v.matmul(u)?;
    let rhs = u.matmul(v)?.scale(q.inv());
    let forward = lhs.max_abs_diff(&rhs)?;
    Ok((adjoint, forward))
}

/// Larger of the two Weyl-pair residuals.
pub fn weyl_relation_residual(v: &ComplexMatrix, u: &ComplexMatrix, q: Complex64) -> Result<f64> {
    let (a, f) = weyl_residuals(v, u, q)?;
    Ok(a.max(f))
}

/// Worst-case residual over a set of basis vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ResidualStat {
    pub max_residual: f64,
    pub count: usize,
}

impl ResidualStat {
    fn record(&mut self, r: f64) {
        self.max_residual = self.max_residual.max(r);
        self.count += 1;
    }
}

/// Interior and seam residuals for one deformed relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RelationResidual {
    /// Basis vectors whose image does not cross `θ_d ≡ θ_0`.
    pub interior: ResidualStat,
    /// Basis vectors whose image wraps around the seam.
    pub seam: ResidualStat,
}

/// Coefficient-level check of the deformed commutators and power laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub r: usize,
    /// `r^{1/α}σ`.
    pub shift: f64,
    /// `θ̂U ⊖ Uθ̂ = −σU`.
    pub backward: RelationResidual,
    /// `θ̂U† ⊖ U†θ̂ = σU†`.
    pub forward: RelationResidual,
    /// `θ̂(U†)^r = (U†)^r(θ̂ ⊕ r^{1/α}σ)`.
    pub power_forward: RelationResidual,
    /// `θ̂U^r = U^r(θ̂ ⊖ r^{1/α}σ)`.
    pub power_backward: RelationResidual,
}

/// `|x|x|^{α−1} − y|y|^{α−1}|`: distance in the chart where ⊕ is ordinary
/// addition. The ordinary distance is unusable near zero for α > 1, where
/// `⊖` amplifies a rounding residue `ε` to `ε^{1/α}`.
fn chart_distance(x: f64, y: f64, alpha: DeformationParameter) -> f64 {
    (to_additive(x, alpha) - to_additive(y, alpha)).abs()
}

/// Row index of the single nonzero entry of a permutation column.
fn support(perm: &ComplexMatrix, n: usize) -> usize {
    (0..perm.dim())
        .max_by(|&a, &b| perm[(a, n)].norm().total_cmp(&perm[(b, n)].norm()))
        .expect("non-empty matrix")
}

/// α-commutator `θ̂P ⊖ Pθ̂` compared, column by column, against `step·P`.
fn commutator_residual(
    theta: &ComplexMatrix,
    perm: &ComplexMatrix,
    step: f64,
    alpha: DeformationParameter,
    crosses_seam: impl Fn(usize) -> bool,
) -> Result<RelationResidual> {
    let left = theta.matmul(perm)?;
    let right = perm.matmul(theta)?;
    let mut out = RelationResidual::default();
    for n in 0..perm.dim() {
        let m = support(perm, n);
        let diff = alpha_sub(left[(m, n)].re, right[(m, n)].re, alpha)?;
        let r = chart_distance(diff, step * perm[(m, n)].re, alpha)
            + left[(m, n)].im.abs()
            + right[(m, n)].im.abs();
        if crosses_seam(n) {
            out.seam.record(r);
        } else {
            out.interior.record(r);
        }
    }
    Ok(out)
}

/// `θ̂P = P·g(θ̂)` compared column by column, where `g` acts on eigenvalues.
fn power_law_residual(
    theta: &ComplexMatrix,
    perm: &ComplexMatrix,
    shifted: impl Fn(f64) -> Result<f64>,
    alpha: DeformationParameter,
    crosses_seam: impl Fn(usize) -> bool,
) -> Result<RelationResidual> {
    let left = theta.matmul(perm)?;
    let mut out = RelationResidual::default();
    for n in 0..perm.dim() {
        let m = support(perm, n);
        let expected = shifted(theta[(n, n)].re)? * perm[(m, n)].re;
        let r = chart_distance(left[(m, n)].re, expected, alpha) + left[(m, n)].im.abs();
        if crosses_seam(n) {
            out.seam.record(r);
        } else {
            out.interior.record(r);
        }
    }
    Ok(out)
}

/// Verifies the deformed commutation relations between θ̂ and U on each
/// basis vector, treating ⊕/⊖ as acting on the scalar eigenvalue
/// coefficients. Columns whose image crosses the seam are reported apart.
/// Residuals are measured in the additive chart (see [`chart_distance`]).
pub fn deformed_commutator_check(
    theta: &ComplexMatrix,
    u: &ComplexMatrix,
    lattice: &LatticeSpec,
    r: usize,
) -> Result<CommutatorReport> {
    let d = lattice.d();
    if theta.dim() != d {
        return Err(Error::Shape {
            expected: d,
            actual: theta.dim(),
        });
    }
    if u.dim() != d {
        return Err(Error::Shape {
            expected: d,
            actual: u.dim(),
        });
    }
    if r == 0 {
        return Err(Error::Config("power r must be at least 1".into()));
    }
    let alpha = lattice.alpha();
    let sigma = lattice.sigma();
    let ud = u.adjoint();
    let shift = (r as f64).powf(1.0 / alpha.value()) * sigma;
    let exponent =
        u32::try_from(r).map_err(|_| Error::Config(format!("power r = {r} too large")))?;

    let backward = commutator_residual(theta, u, -sigma, alpha, |n| n == 0)?;
    let forward = commutator_residual(theta, &ud, sigma, alpha, |n| n == d - 1)?;
    let power_forward = power_law_residual(
        theta,
        &ud.pow(exponent),
        |th| alpha_add(th, shift, alpha),
        alpha,
        |n| n + r >= d,
    )?;
    let power_backward = power_law_residual(
        theta,
        &u.pow(exponent),
        |th| alpha_sub(th, shift, alpha),
        alpha,
        |n| n < r,
    )?;
    Ok(CommutatorReport {
        r,
        shift,
        backward,
        forward,
        power_forward,
        power_backward,
    })
}

/// Forward angular momentum `L₊ = (ħ/i)(U − I)/σ^α`.
pub fn l_plus(lattice: &LatticeSpec, params: &PhysicalParams) -> ComplexMatrix {
    let d = lattice.d();
    let factor = -I * (params.hbar / lattice.sigma_alpha());
    let mut m = ComplexMatrix::zeros(d, OperatorRole::LPlus);
    for n in 0..d {
        m[(n, n)] -= factor;
        m[(wrap_index(n as i64 - 1, d), n)] += factor;
    }
    m
}

/// Backward angular momentum `L₋ = (ħ/i)(I − U^{−1})/σ^α`.
pub fn l_minus(lattice: &LatticeSpec, params: &PhysicalParams) -> ComplexMatrix {
    let d = lattice.d();
    let factor = -I * (params.hbar / lattice.sigma_alpha());
    let mut m = ComplexMatrix::zeros(d, OperatorRole::LMinus);
    for n in 0..d {
        m[(n, n)] += factor;
        m[(wrap_index(n as i64 + 1, d), n)] -= factor;
    }
    m
}

/// Nearest-neighbour coupling `ħ²/(2mR²σ^{2α})` of the free Hamiltonian.
pub fn hopping(lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    params.hbar * params.hbar / (2.0 * params.inertia() * lattice.sigma_two_alpha())
}

/// Free Hamiltonian `H = −ħ²/(2mR²σ^{2α})(U + U^{−1} − 2I)`, a real circulant.
pub fn hamiltonian_free(lattice: &LatticeSpec, params: &PhysicalParams) -> ComplexMatrix {
    let d = lattice.d();
    let c = hopping(lattice, params);
    let mut h = ComplexMatrix::zeros(d, OperatorRole::Hamiltonian);
    for n in 0..d {
        // accumulate: at d = 2 both neighbours are the same site
        h[(n, n)] += 2.0 * c;
        h[(wrap_index(n as i64 - 1, d), n)] -= c;
        h[(wrap_index(n as i64 + 1, d), n)] -= c;
    }
    h
}

/// `H_free + V(θ̂)` with the potential sampled at the lattice angles.
pub fn hamiltonian_with_potential(
    lattice: &LatticeSpec,
    params: &PhysicalParams,
    potential: &[f64],
) -> Result<ComplexMatrix> {
    if potential.len() != lattice.d() {
        return Err(Error::Shape {
            expected: lattice.d(),
            actual: potential.len(),
        });
    }
    let mut h = hamiltonian_free(lattice, params);
    for (n, &v) in potential.iter().enumerate() {
        h[(n, n)] += v;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use std::f64::consts::PI;

    fn lattice(d: usize, a: f64) -> LatticeSpec {
        build_lattice(d, DeformationParameter::new(a).unwrap()).unwrap()
    }

    #[test]
    fn angle_operator_is_diagonal() {
        let th = angle_operator(&lattice(4, 1.0));
        let want = [0.0, PI / 2.0, PI, 1.5 * PI];
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    assert!((th[(i, i)].re - want[i]).abs() < 1e-15);
                } else {
                    assert_eq!(th[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert!((angle_operator(&lattice(8, 2.0))[(2, 2)].re - PI).abs() < 1e-15);
        assert_eq!(th.role(), OperatorRole::Angle);
    }

    #[test]
    fn translation_is_cyclic_permutation() {
        let u = translation_u(3).unwrap();
        assert_eq!(u[(2, 0)], ONE);
        assert_eq!(u[(0, 1)], ONE);
        assert_eq!(u[(1, 2)], ONE);
        assert!(translation_u(1).is_err());
        for d in 2..=16 {
            let u = translation_u(d).unwrap();
            let id = ComplexMatrix::identity(d);
            assert_eq!(
                u.matmul(&u.adjoint()).unwrap().max_abs_diff(&id).unwrap(),
                0.0
            );
            assert_eq!(u.pow(d as u32).max_abs_diff(&id).unwrap(), 0.0);
            assert!(u.pow(d as u32 - 1).max_abs_diff(&id).unwrap() > 0.5);
        }
    }

    #[test]
    fn translation_shifts_samples() {
        // (U^r ψ)_n = ψ_{n+r}
        let d = 7;
        let u = translation_u(d).unwrap();
        let psi: Vec<_> = (0..d)
            .map(|n| Complex64::new(n as f64, -(n as f64)))
            .collect();
        for r in 0..10 {
            let out = u.pow(r as u32).apply(&psi).unwrap();
            for n in 0..d {
                assert_eq!(out[n], psi[wrap_index((n + r) as i64, d)]);
            }
        }
    }

    #[test]
    fn v_has_roots_of_unity() {
        for &a in &[0.5, 1.0, 2.0, 3.0] {
            let lat = lattice(9, a);
            let v = v_operator(&lat);
            assert_eq!(v[(0, 0)], ONE);
            for n in 0..9 {
                let want = Complex64::from_polar(1.0, TAU * n as f64 / 9.0);
                assert!((v[(n, n)] - want).norm() < 1e-13, "α={a} n={n}");
            }
            let id = ComplexMatrix::identity(9);
            assert!(v.pow(9).max_abs_diff(&id).unwrap() < 1e-12);
            assert!(v.adjoint().matmul(&v).unwrap().max_abs_diff(&id).unwrap() < 1e-14);
        }
    }

    #[test]
    fn q_values() {
        assert!((q_factor(4) - I).norm() < 1e-15);
        assert!((q_factor(2) + ONE).norm() < 1e-15);
        for d in 2..20 {
            assert!((q_factor(d).norm() - 1.0).abs() < 1e-15);
            for &a in &[0.5, 2.0, 3.0] {
                assert!((q_factor_deformed(&lattice(d, a)) - q_factor(d)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn weyl_pair_and_negative_control() {
        for d in 2..=16 {
            for &a in &[0.5, 1.0, 2.0] {
                let lat = lattice(d, a);
                let v = v_operator(&lat);
                let u = translation_u(d).unwrap();
                let q = q_factor(d);
                assert!(weyl_relation_residual(&v, &u, q).unwrap() < 1e-12);
                if d > 2 {
                    assert!(weyl_relation_residual(&v, &u, q * q).unwrap() > 0.1);
                }
            }
        }
        // d = 2: VU† = −U†V
        let lat = lattice(2, 1.0);
        let (v, u) = (v_operator(&lat), translation_u(2).unwrap());
        let lhs = v.matmul(&u.adjoint()).unwrap();
        let rhs = u.adjoint().matmul(&v).unwrap().scale(-ONE);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
    }

    #[test]
    fn weyl_rejects_mismatched_shapes() {
        let v = v_operator(&lattice(3, 1.0));
        let u = translation_u(4).unwrap();
        assert!(matches!(
            weyl_relation_residual(&v, &u, q_factor(3)),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn deformed_commutators_hold_off_seam() {
        for &a in &[0.5, 1.0, 2.0, 3.0] {
            for d in [3, 5, 8, 16] {
                let lat = lattice(d, a);
                let rep = deformed_commutator_check(
                    &angle_operator(&lat),
                    &translation_u(d).unwrap(),
                    &lat,
                    2,
                )
                .unwrap();
                assert!(rep.backward.interior.max_residual < 1e-10);
                assert!(rep.forward.interior.max_residual < 1e-10);
                assert!(rep.power_forward.interior.max_residual < 1e-10);
                assert!(rep.power_backward.interior.max_residual < 1e-10);
                assert_eq!(rep.backward.interior.count, d - 1);
                assert_eq!(rep.backward.seam.count, 1);
                assert_eq!(rep.power_forward.seam.count, 2);
                // θ_{d−1} ⊖ θ_0 is far from −σ
                assert!(rep.backward.seam.max_residual > lat.sigma_alpha());
            }
        }
    }

    #[test]
    fn power_law_shift_for_quadratic_alpha() {
        let lat = lattice(8, 2.0);
        let rep =
            deformed_commutator_check(&angle_operator(&lat), &translation_u(8).unwrap(), &lat, 2)
                .unwrap();
        assert!((rep.shift - 2f64.sqrt() * lat.sigma()).abs() < 1e-15);
        assert!(deformed_commutator_check(
            &angle_operator(&lat),
            &translation_u(8).unwrap(),
            &lat,
            0
        )
        .is_err());
    }

    #[test]
    fn undeformed_commutator_is_ordinary() {
        let d = 10;
        let lat = lattice(d, 1.0);
        let th = angle_operator(&lat);
        let u = translation_u(d).unwrap();
        let comm = th.matmul(&u).unwrap().sub(&u.matmul(&th).unwrap()).unwrap();
        let want = u.scale(Complex64::new(-lat.sigma(), 0.0));
        for n in 1..d {
            for m in 0..d {
                assert!((comm[(m, n)] - want[(m, n)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn angular_momentum_pair() {
        let params = PhysicalParams::new(1.3, 0.7, 2.1).unwrap();
        for d in [2, 3, 6, 11] {
            let lat = lattice(d, 1.7);
            let lp = l_plus(&lat, &params);
            let lm = l_minus(&lat, &params);
            assert_eq!(lp.adjoint().entries(), lm.entries());
            if d >= 3 {
                assert!(lp.hermiticity_residual() > 0.1);
            }
            // (L₊ψ)_n = ħ/(iσ^α)(ψ_{n+1} − ψ_n)
            let psi: Vec<_> = (0..d)
                .map(|n| Complex64::new((n * n) as f64, 1.0 / (n + 1) as f64))
                .collect();
            let out = lp.apply(&psi).unwrap();
            let pref = params.hbar / lat.sigma_alpha() / I;
            for n in 0..d {
                let want = pref * (psi[wrap_index(n as i64 + 1, d)] - psi[n]);
                assert!((out[n] - want).norm() < 1e-12 * want.norm().max(1.0));
            }
        }
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn l_plus_approximates_derivative() {
        // L₊ e^{ikθ} ≈ ħk e^{ikθ} with O(σ) error on the uniform lattice
        let params = PhysicalParams::natural();
        let k = 3.0;
        let mut prev_err = f64::INFINITY;
        for d in [64, 128, 256, 512] {
            let lat = lattice(d, 1.0);
            let psi: Vec<_> = lat
                .angles()
                .iter()
                .map(|&t| Complex64::from_polar(1.0, k * t))
                .collect();
            let out = l_plus(&lat, &params).apply(&psi).unwrap();
            let err = out
                .iter()
                .zip(&psi)
                .map(|(o, p)| (o - p * k).norm())
                .fold(0.0, f64::max);
            assert!(err < 0.6 * k * k * lat.sigma());
            assert!(err < prev_err * 0.55);
            prev_err = err;
        }
    }

    #[test]
    fn hamiltonian_structure() {
        let params = PhysicalParams::new(1.1, 0.9, 1.4).unwrap();
        for d in [2, 3, 4, 9] {
            for &a in &[0.5, 1.0, 3.0] {
                let lat = lattice(d, a);
                let h = hamiltonian_free(&lat, &params);
                assert_eq!(h.hermiticity_residual(), 0.0);
                let unit = params.hbar.powi(2) / (params.inertia() * lat.sigma_two_alpha());
                assert!((h[(0, 0)].re - unit).abs() < 1e-12 * unit);
                for i in 0..d {
                    let sum: Complex64 = h.row(i).iter().sum();
                    assert!(sum.norm() < 1e-12 * unit);
                }
                let lpm = l_plus(&lat, &params)
                    .matmul(&l_minus(&lat, &params))
                    .unwrap();
                let scaled = h.scale(Complex64::new(2.0 * params.inertia(), 0.0));
                assert!(scaled.max_abs_diff(&lpm).unwrap() <= 1e-12 * lpm.max_abs().max(1.0));
                if d > 2 {
                    assert!((h[(1, 0)].re + unit / 2.0).abs() < 1e-12 * unit);
                }
            }
        }
    }

    #[test]
    fn potential_is_diagonal_shift() {
        let lat = lattice(6, 1.0);
        let p = PhysicalParams::natural();
        let free = hamiltonian_free(&lat, &p);
        assert_eq!(
            hamiltonian_with_potential(&lat, &p, &[0.0; 6]).unwrap(),
            free
        );
        let shifted = hamiltonian_with_potential(&lat, &p, &[2.5; 6]).unwrap();
        let diff = shifted.sub(&free).unwrap();
        assert!(
            diff.max_abs_diff(&ComplexMatrix::identity(6).scale(Complex64::new(2.5, 0.0)))
                .unwrap()
                < 1e-15
        );
        assert!(matches!(
            hamiltonian_with_potential(&lat, &p, &[0.0; 5]),
            Err(Error::Shape {
                expected: 6,
                actual: 5
            })
        ));
    }
}
