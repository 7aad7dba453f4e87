//! Free-particle spectrum on the α-uniform ring.
//!
//! The Schrödinger equation for the free Hamiltonian is the three-term
//! recurrence `ψ_{n+1} = 2cos ξ·ψ_n − ψ_{n−1}` with
//! `cos ξ = 1 − mR²σ^{2α}E/ħ²`. Its solutions are Chebyshev-like closed
//! forms in `nξ`, and the cyclic matching condition `ψ_d = ψ_0` splits the
//! admissible `dξ` into four families (full, quarter, half and
//! three-quarter period offsets).
//!
//! Cases are parameterised by the integer `m = 4N + k` (k = 0..3 for the
//! four offsets) so that the raw phase `φ = (kπ/2 + 2Nπ)/d = πm/(2d)` can
//! be reduced modulo 2π exactly in integer arithmetic.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{circulant_eigh, jacobi_eigh, Eigensystem};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::matrix::ComplexMatrix;
use crate::operators::PhysicalParams;

/// Spectral angle ξ on the principal branch `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SpectralAngle(f64);

impl SpectralAngle {
    pub fn new(xi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&xi) {
            return Err(Error::Domain(format!(
                "spectral angle ξ = {xi} outside [0, π]"
            )));
        }
        Ok(Self(xi))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `ξ ∈ {0, π}`, where `sin ξ` vanishes.
    pub fn is_degenerate(self) -> bool {
        self.0 == 0.0 || self.0 == PI
    }
}

/// Initial data `(ψ(θ_0), ψ(θ_1))` of the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrenceInit {
    pub psi0: Complex64,
    pub psi1: Complex64,
}

impl RecurrenceInit {
    pub fn new(psi0: Complex64, psi1: Complex64) -> Result<Self> {
        if psi0 == Complex64::new(0.0, 0.0) && psi1 == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "initial conditions ψ(θ_0) = ψ(θ_1) = 0 give only the trivial solution".into(),
            ));
        }
        if !(psi0.re.is_finite()
            && psi0.im.is_finite()
            && psi1.re.is_finite()
            && psi1.im.is_finite())
        {
            return Err(Error::Domain("initial conditions must be finite".into()));
        }
        Ok(Self { psi0, psi1 })
    }

    pub fn real(psi0: f64, psi1: f64) -> Result<Self> {
        Self::new(Complex64::new(psi0, 0.0), Complex64::new(psi1, 0.0))
    }
}

/// The four families of quantized `dξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `dξ = 2Nπ`
    FullPeriod,
    /// `dξ = 2Nπ + π/2`
    QuarterPeriod,
    /// `dξ = 2Nπ + π`
    HalfPeriod,
    /// `dξ = 2Nπ + 3π/2`
    ThreeQuarterPeriod,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [
        CaseKind::FullPeriod,
        CaseKind::QuarterPeriod,
        CaseKind::HalfPeriod,
        CaseKind::ThreeQuarterPeriod,
    ];

    /// Offset of `dξ` in quarter turns.
    pub fn quarter_turns(self) -> i64 {
        match self {
            CaseKind::FullPeriod => 0,
            CaseKind::QuarterPeriod => 1,
            CaseKind::HalfPeriod => 2,
            CaseKind::ThreeQuarterPeriod => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::FullPeriod => "full",
            CaseKind::QuarterPeriod => "quarter",
            CaseKind::HalfPeriod => "half",
            CaseKind::ThreeQuarterPeriod => "threequarter",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown quantization case '{s}'")))
    }
}

/// A quantization case together with its integer label N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantizationCase {
    pub kind: CaseKind,
    #[serde(rename = "N")]
    pub n: i64,
}

impl QuantizationCase {
    pub fn new(kind: CaseKind, n: i64) -> Self {
        Self { kind, n }
    }

    /// `4N + k` reduced into `[0, 4d)`; the raw phase is `π·m/(2d)`.
    pub fn phase_numerator(&self, d: usize) -> i64 {
        (4 * self.n + self.kind.quarter_turns()).rem_euclid(4 * d as i64)
    }

    /// Raw phase `φ = (kπ/2 + 2Nπ)/d` reduced into `[0, 2π)`.
    pub fn phase(&self, d: usize) -> f64 {
        PI * self.phase_numerator(d) as f64 / (2 * d) as f64
    }

    /// Principal spectral angle: the raw phase folded into `[0, π]`.
    pub fn xi(&self, d: usize) -> SpectralAngle {
        let m = self.phase_numerator(d);
        let two_d = 2 * d as i64;
        let folded = if m <= two_d { m } else { 2 * two_d - m };
        SpectralAngle(PI * folded as f64 / two_d as f64)
    }

    /// Whether the raw phase `(kπ/2 + 2Nπ)/d` lies outside `[0, π]`.
    pub fn is_folded(&self, d: usize) -> bool {
        let raw = 4 * self.n + self.kind.quarter_turns();
        !(0..=2 * d as i64).contains(&raw)
    }
}

impl fmt::Display for QuantizationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(N={})", self.kind, self.n)
    }
}

/// Where an eigenpair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

/// Energy with its wavefunction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSolution {
    pub energy: f64,
    pub wavefunction: Vec<Complex64>,
    pub provenance: Provenance,
    pub case: Option<QuantizationCase>,
}

/// `mR²σ^{2α}/ħ²`, the factor converting energy to `1 − cos ξ`.
fn energy_to_cos_shift(lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    params.inertia() * lattice.sigma_two_alpha() / (params.hbar * params.hbar)
}

/// `(ħd)²/(mR²(2π)^{2α})`, the energy scale multiplying `1 − cos ξ`.
pub fn energy_prefactor(lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    let hd = params.hbar * lattice.d() as f64;
    hd * hd / (params.inertia() * TAU.powf(2.0 * lattice.alpha().value()))
}

/// Spectral ceiling `2ħ²/(mR²σ^{2α})`.
pub fn energy_bound(lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    2.0 * params.hbar * params.hbar / (params.inertia() * lattice.sigma_two_alpha())
}

/// Values `ψ(θ_0), …, ψ(θ_d)` from the three-term recurrence at energy `E`.
///
/// The final entry extends the recurrence one step past `n = d − 1`, which is
/// what the cyclic condition `ψ(θ_d) = ψ(θ_0)` is imposed on.
pub fn propagate_recurrence(
    init: RecurrenceInit,
    energy: f64,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Vec<Complex64> {
    let coeff = 2.0 - 2.0 * energy_to_cos_shift(lattice, params) * energy;
    let d = lattice.d();
    let mut psi = Vec::with_capacity(d + 1);
    psi.push(init.psi0);
    psi.push(init.psi1);
    for n in 1..d {
        let next = psi[n] * coeff - psi[n - 1];
        psi.push(next);
    }
    psi
}

/// Principal `ξ = arccos(1 − mR²σ^{2α}E/ħ²)`.
pub fn xi_from_energy(
    energy: f64,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Result<SpectralAngle> {
    let bound = energy_bound(lattice, params);
    // rounding slack at the two endpoints only
    let slack = 1e-14 * bound;
    if !energy.is_finite() || energy < -slack || energy > bound + slack {
        return Err(Error::Domain(format!(
            "energy {energy} outside the spectral band [0, {bound}] = [0, 2ħ²/(mR²σ^{{2α}})]"
        )));
    }
    let mut cos_xi = (1.0 - energy_to_cos_shift(lattice, params) * energy).clamp(-1.0, 1.0);
    // acos has infinite slope at ±1: a few ulps of rounding in cos ξ would
    // otherwise move ξ off the band edge by ~1e-8
    if 1.0 - cos_xi.abs() <= 4.0 * f64::EPSILON {
        cos_xi = cos_xi.signum();
    }
    Ok(SpectralAngle(cos_xi.acos()))
}

/// `E = (ħd)²/(mR²(2π)^{2α})·(1 − cos ξ)`.
pub fn energy_from_xi(xi: SpectralAngle, lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    energy_prefactor(lattice, params) * (1.0 - xi.value().cos())
}

/// `[ψ_1 sin(nφ) − ψ_0 sin((n−1)φ)] / sin φ` for any phase with `sin φ ≠ 0`.
pub fn closed_form_at_phase(init: RecurrenceInit, phase: f64, n: usize) -> Complex64 {
    let nf = n as f64;
    (init.psi1 * (nf * phase).sin() - init.psi0 * ((nf - 1.0) * phase).sin()) / phase.sin()
}

/// Closed-form solution of the recurrence at index `n`.
pub fn closed_form_wavefunction(
    init: RecurrenceInit,
    xi: SpectralAngle,
    n: usize,
) -> Result<Complex64> {
    if xi.is_degenerate() {
        return Err(Error::Degenerate { xi: xi.value() });
    }
    Ok(closed_form_at_phase(init, xi.value(), n))
}

/// Equivalent form `((ψ_1 − ψ_0 cos ξ)/sin ξ)·sin(nξ) + ψ_0 cos(nξ)`.
pub fn closed_form_wavefunction_alt(
    init: RecurrenceInit,
    xi: SpectralAngle,
    n: usize,
) -> Result<Complex64> {
    if xi.is_degenerate() {
        return Err(Error::Degenerate { xi: xi.value() });
    }
    let x = xi.value();
    let nx = n as f64 * x;
    Ok((init.psi1 - init.psi0 * x.cos()) / x.sin() * nx.sin() + init.psi0 * nx.cos())
}

/// Analytic limits of the closed form at `ξ = 0` and `ξ = π`.
pub fn degenerate_limit(init: RecurrenceInit, xi: SpectralAngle, n: usize) -> Result<Complex64> {
    let nf = n as f64;
    if xi.value() == 0.0 {
        Ok(init.psi0 + (init.psi1 - init.psi0) * nf)
    } else if xi.value() == PI {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok((init.psi0 - (init.psi1 + init.psi0) * nf) * sign)
    } else {
        Err(Error::Domain(format!(
            "ξ = {} is not a degenerate angle",
            xi.value()
        )))
    }
}

/// Closed form, or its limit when `sin ξ = 0`, for `n = 0..len`.
pub fn closed_form_samples(init: RecurrenceInit, xi: SpectralAngle, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|n| {
            if xi.is_degenerate() {
                degenerate_limit(init, xi, n).expect("degenerate angle")
            } else {
                closed_form_at_phase(init, xi.value(), n)
            }
        })
        .collect()
}

/// Residual of the cyclic condition at an arbitrary phase:
/// `(ψ_1 − ψ_0 cos φ) sin(dφ) + ψ_0 sin φ cos(dφ) − ψ_0 sin φ`.
pub fn cyclic_residual_at_phase(init: RecurrenceInit, phase: f64, d: usize) -> Complex64 {
    let dphi = d as f64 * phase;
    let (s, c) = phase.sin_cos();
    (init.psi1 - init.psi0 * c) * dphi.sin() + init.psi0 * s * dphi.cos() - init.psi0 * s
}

/// Cyclic-condition residual on the principal branch.
pub fn cyclic_residual(init: RecurrenceInit, xi: SpectralAngle, d: usize) -> Complex64 {
    cyclic_residual_at_phase(init, xi.value(), d)
}

/// Closed-form energy of a quantization case.
pub fn case_energy(case: QuantizationCase, lattice: &LatticeSpec, params: &PhysicalParams) -> f64 {
    energy_prefactor(lattice, params) * (1.0 - case.phase(lattice.d()).cos())
}

/// `ψ(θ_1)` forced by the case's matching condition, when it forces one.
pub fn case_required_psi1(case: QuantizationCase, d: usize, psi0: Complex64) -> Option<Complex64> {
    let (s, c) = case.phase(d).sin_cos();
    match case.kind {
        CaseKind::QuarterPeriod => Some(psi0 * (c + s)),
        CaseKind::ThreeQuarterPeriod => Some(psi0 * (c - s)),
        CaseKind::FullPeriod if sin_vanishes(case, d) => Some(psi0 * c.round()),
        CaseKind::FullPeriod | CaseKind::HalfPeriod => None,
    }
}

/// Raw phase is exactly 0 or π.
fn sin_vanishes(case: QuantizationCase, d: usize) -> bool {
    let m = case.phase_numerator(d);
    m == 0 || m == 2 * d as i64
}

fn close_enough(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-9 * scale.max(1.0)
}

/// Samples `n = 0..d` of the closed-form wavefunction of a quantization case.
///
/// The half-period family forces `ψ(θ_0) = 0`, so its amplitude is taken
/// from `ψ(θ_1)`: `ψ_n = ψ(θ_1) sin(nφ)/sin φ`.
pub fn case_wavefunction(
    case: QuantizationCase,
    lattice: &LatticeSpec,
    init: RecurrenceInit,
) -> Result<Vec<Complex64>> {
    let d = lattice.d();
    let phase = case.phase(d);
    let scale = init.psi0.norm().max(init.psi1.norm());
    if let Some(required) = case_required_psi1(case, d, init.psi0) {
        if !close_enough(init.psi1, required, scale) {
            let rule = match case.kind {
                CaseKind::QuarterPeriod => "ψ(θ_1) = ψ(θ_0)(cos ξ + sin ξ)",
                CaseKind::ThreeQuarterPeriod => "ψ(θ_1) = ψ(θ_0)(cos ξ − sin ξ)",
                _ => "ψ(θ_1) = ψ(θ_0) cos ξ (sin ξ = 0, so the wave must be periodic)",
            };
            return Err(Error::Consistency(format!(
                "{case} with d = {d} requires {rule} = {required}, got ψ(θ_1) = {}",
                init.psi1
            )));
        }
    }
    let samples = (0..d).map(|n| {
        let nf = n as f64;
        match case.kind {
            CaseKind::FullPeriod if sin_vanishes(case, d) => init.psi0 * (nf * phase).cos().round(),
            CaseKind::FullPeriod => {
                (init.psi1 - init.psi0 * phase.cos()) / phase.sin() * (nf * phase).sin()
                    + init.psi0 * (nf * phase).cos()
            }
            CaseKind::QuarterPeriod => init.psi0 * SQRT_2 * (nf * phase + FRAC_PI_4).sin(),
            CaseKind::HalfPeriod => init.psi1 * ((nf * phase).sin() / phase.sin()),
            CaseKind::ThreeQuarterPeriod => init.psi0 * SQRT_2 * (nf * phase + FRAC_PI_4).cos(),
        }
    });
    if case.kind == CaseKind::HalfPeriod {
        if !close_enough(init.psi0, Complex64::new(0.0, 0.0), scale) {
            return Err(Error::Consistency(format!(
                "{case} requires ψ(θ_0) = 0, got {}",
                init.psi0
            )));
        }
        if sin_vanishes(case, d) {
            return Err(Error::Consistency(format!(
                "{case} with odd d = {d} puts ξ at π, where ψ(θ_0) = 0 admits only the trivial solution"
            )));
        }
    }
    Ok(samples.collect())
}

/// Case energy together with its wavefunction as a closed-form eigenpair.
pub fn case_solution(
    case: QuantizationCase,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
    init: RecurrenceInit,
) -> Result<EigenSolution> {
    Ok(EigenSolution {
        energy: case_energy(case, lattice, params),
        wavefunction: case_wavefunction(case, lattice, init)?,
        provenance: Provenance::ClosedForm,
        case: Some(case),
    })
}

/// `|(Hψ)_n − Eψ_n|` split into interior rows `1..d−1` and the two wrap rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowResiduals {
    pub interior: f64,
    pub wrap: f64,
}

pub fn schrodinger_residuals(
    h: &ComplexMatrix,
    psi: &[Complex64],
    energy: f64,
) -> Result<RowResiduals> {
    let hpsi = h.apply(psi)?;
    let d = psi.len();
    let mut out = RowResiduals {
        interior: 0.0,
        wrap: 0.0,
    };
    for (n, (a, b)) in hpsi.iter().zip(psi).enumerate() {
        let r = (a - b * energy).norm();
        if n == 0 || n + 1 == d {
            out.wrap = out.wrap.max(r);
        } else {
            out.interior = out.interior.max(r);
        }
    }
    Ok(out)
}

/// One level of a case ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseLevel {
    pub case: QuantizationCase,
    pub xi: SpectralAngle,
    pub energy: f64,
    /// The raw phase was outside `[0, π]` and has been folded.
    pub folded: bool,
}

pub fn case_level(
    case: QuantizationCase,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> CaseLevel {
    let d = lattice.d();
    CaseLevel {
        case,
        xi: case.xi(d),
        energy: case_energy(case, lattice, params),
        folded: case.is_folded(d),
    }
}

/// Levels for `N = 0..d`, one per N; for the full-period family this is
/// the complete spectrum with multiplicity.
pub fn case_ladder(
    kind: CaseKind,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Vec<CaseLevel> {
    (0..lattice.d() as i64)
        .map(|n| case_level(QuantizationCase::new(kind, n), lattice, params))
        .collect()
}

/// A distinct energy of a case family with the N labels that produce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinctLevel {
    pub xi: SpectralAngle,
    pub energy: f64,
    pub multiplicity: usize,
    #[serde(rename = "N")]
    pub ns: Vec<i64>,
}

/// Distinct energies of a family over `N = 0..d`, ascending, merging the
/// ±N pairs that fold onto the same principal ξ.
pub fn distinct_levels(
    kind: CaseKind,
    lattice: &LatticeSpec,
    params: &PhysicalParams,
) -> Vec<DistinctLevel> {
    let d = lattice.d();
    let two_d = 2 * d as i64;
    let mut by_folded: std::collections::BTreeMap<i64, DistinctLevel> = Default::default();
    for n in 0..d as i64 {
        let case = QuantizationCase::new(kind, n);
        let m = case.phase_numerator(d);
        let key = if m <= two_d { m } else { 2 * two_d - m };
        by_folded
            .entry(key)
            .and_modify(|lvl| {
                lvl.multiplicity += 1;
                lvl.ns.push(n);
            })
            .or_insert_with(|| DistinctLevel {
                xi: case.xi(d),
                energy: case_energy(case, lattice, params),
                multiplicity: 1,
                ns: vec![n],
            });
    }
    by_folded.into_values().collect()
}

/// Full-period energies for `N = 0..d`, ascending.
pub fn closed_form_spectrum(lattice: &LatticeSpec, params: &PhysicalParams) -> Vec<f64> {
    let mut e: Vec<f64> = case_ladder(CaseKind::FullPeriod, lattice, params)
        .into_iter()
        .map(|l| l.energy)
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

fn to_solutions(es: Eigensystem) -> Vec<EigenSolution> {
    es.values
        .into_iter()
        .zip(es.vectors)
        .map(|(energy, wavefunction)| EigenSolution {
            energy,
            wavefunction,
            provenance: Provenance::Oracle,
            case: None,
        })
        .collect()
}

/// Numerical eigendecomposition of a Hermitian matrix, ascending.
pub fn diagonalize(h: &ComplexMatrix) -> Result<Vec<EigenSolution>> {
    Ok(to_solutions(jacobi_eigh(h)?))
}

/// Analytic discrete-Fourier eigendecomposition of a Hermitian circulant.
pub fn diagonalize_circulant(h: &ComplexMatrix) -> Result<Vec<EigenSolution>> {
    Ok(to_solutions(circulant_eigh(h)?))
}

/// Largest deviation between two multisets of reals after sorting both;
/// `None` when their sizes differ.
pub fn multiset_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}
