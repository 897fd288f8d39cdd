//! One path-encoded qubit: pure and mixed states, diagonal maps, and the
//! four oracle unitaries of the one-bit Deutsch problem.
//!
//! Basis convention: `|0⟩` is the photon through the inferior slit, `|1⟩`
//! through the superior slit. Global phases carry no meaning; compare states
//! with [`overlap`], never componentwise.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type ComplexAmplitude = Complex64;

/// Absolute tolerance for closed-form algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    alpha: Complex64,
    beta: Complex64,
}

impl QubitState {
    /// Builds a state from amplitudes that are already normalized.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if !finite(alpha) || !finite(beta) {
            return Err(invalid("amplitude", "non-finite"));
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(invalid("amplitude", format!("norm² = {norm}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::StateAnnihilated);
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn zero() -> Self {
        Self {
            alpha: ONE,
            beta: ZERO,
        }
    }

    pub fn one() -> Self {
        Self {
            alpha: ZERO,
            beta: ONE,
        }
    }

    pub fn plus() -> Self {
        Self::with_relative_phase(0.0)
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: Complex64::new(h, 0.0),
            beta: Complex64::new(-h, 0.0),
        }
    }

    /// `(|0⟩ + e^{iφ}|1⟩)/√2`
    pub fn with_relative_phase(phi: f64) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: Complex64::new(h, 0.0),
            beta: Complex64::from_polar(h, phi),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn density(&self) -> MixedState {
        MixedState {
            rho: [
                [self.alpha.norm_sqr().into(), self.alpha * self.beta.conj()],
                [self.beta * self.alpha.conj(), self.beta.norm_sqr().into()],
            ],
        }
    }

    /// True when the two states differ at most by a global phase.
    pub fn same_ray(&self, other: &QubitState, tol: f64) -> bool {
        (overlap(self, other).norm() - 1.0).abs() <= tol
    }
}

/// 2×2 density matrix, indexed `rho[row][col]` in the `{|0⟩, |1⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedState {
    rho: [[Complex64; 2]; 2],
}

impl MixedState {
    /// Validates hermiticity, unit trace, and positivity (all within 1e-12).
    pub fn new(rho00: f64, rho01: Complex64, rho11: f64) -> Result<Self> {
        let s = Self {
            rho: [[rho00.into(), rho01], [rho01.conj(), rho11.into()]],
        };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_entries_unchecked(rho: [[Complex64; 2]; 2]) -> Self {
        Self { rho }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rho.iter().flatten().all(|c| finite(*c)) {
            return Err(invalid("density", "non-finite entry"));
        }
        if (self.rho[1][0] - self.rho[0][1].conj()).norm() > ALGEBRA_TOL
            || self.rho[0][0].im.abs() > ALGEBRA_TOL
            || self.rho[1][1].im.abs() > ALGEBRA_TOL
        {
            return Err(invalid("density", "not Hermitian"));
        }
        if (self.trace() - 1.0).abs() > ALGEBRA_TOL {
            return Err(invalid("density", format!("trace {}", self.trace())));
        }
        let (lo, _) = self.eigenvalues();
        if lo < -ALGEBRA_TOL {
            return Err(invalid("density", format!("negative eigenvalue {lo}")));
        }
        Ok(())
    }

    pub fn rho00(&self) -> f64 {
        self.rho[0][0].re
    }

    pub fn rho11(&self) -> f64 {
        self.rho[1][1].re
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho[0][1]
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho[1][0]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re
    }

    /// Tr(ρ²)
    pub fn purity(&self) -> f64 {
        self.rho00().powi(2) + self.rho11().powi(2) + 2.0 * self.rho01().norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(self.rho00(), self.rho01(), self.rho11())
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, psi: &QubitState) -> f64 {
        let (a, b) = (psi.alpha, psi.beta);
        let v = a.conj() * (self.rho[0][0] * a + self.rho[0][1] * b)
            + b.conj() * (self.rho[1][0] * a + self.rho[1][1] * b);
        v.re
    }

    /// `m ρ m†`, unnormalized.
    pub fn conjugate_by(&self, m: &DiagonalMap) -> [[Complex64; 2]; 2] {
        let d = [m.m0, m.m1];
        std::array::from_fn(|i| std::array::from_fn(|j| d[i] * self.rho[i][j] * d[j].conj()))
    }

    pub fn max_entry_distance(&self, other: &MixedState) -> f64 {
        self.rho
            .iter()
            .flatten()
            .zip(other.rho.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn hermitian_eigenvalues(a: f64, off: Complex64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d).powi(2) + off.norm_sqr()).sqrt();
    (mean - r, mean + r)
}

/// A one-bit function `f: {0,1} → {0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OracleFunction {
    pub f0: bool,
    pub f1: bool,
}

impl OracleFunction {
    pub const ALL: [OracleFunction; 4] = [
        OracleFunction::new(false, false),
        OracleFunction::new(false, true),
        OracleFunction::new(true, false),
        OracleFunction::new(true, true),
    ];

    pub const fn new(f0: bool, f1: bool) -> Self {
        Self { f0, f1 }
    }

    pub fn from_bits(f0: u8, f1: u8) -> Result<Self> {
        match (f0, f1) {
            (0 | 1, 0 | 1) => Ok(Self::new(f0 == 1, f1 == 1)),
            _ => Err(invalid(
                "oracle",
                format!("bits must be 0 or 1, got ({f0}, {f1})"),
            )),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.f0 == self.f1
    }

    pub fn is_balanced(&self) -> bool {
        !self.is_constant()
    }

    pub fn eval(&self, x: bool) -> bool {
        if x {
            self.f1
        } else {
            self.f0
        }
    }
}

impl fmt::Display for OracleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.f0 as u8, self.f1 as u8)
    }
}

impl FromStr for OracleFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(Self::new(false, false)),
            "01" => Ok(Self::new(false, true)),
            "10" => Ok(Self::new(true, false)),
            "11" => Ok(Self::new(true, true)),
            _ => Err(invalid(
                "oracle",
                format!("expected one of 00, 01, 10, 11; got `{s}`"),
            )),
        }
    }
}

impl Serialize for OracleFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OracleFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Diagonal operator `diag(m0, m1)`; the only kind of map a phase/attenuation
/// mask behind the slits can realize, since it never moves population
/// between slits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalMap {
    m0: Complex64,
    m1: Complex64,
}

impl DiagonalMap {
    pub fn new(m0: Complex64, m1: Complex64) -> Result<Self> {
        for (name, m) in [("m0", m0), ("m1", m1)] {
            if !finite(m) {
                return Err(invalid(name, "non-finite"));
            }
            if m.norm() > 1.0 + ALGEBRA_TOL {
                return Err(invalid(
                    name,
                    format!("|m| = {} exceeds 1 (gain)", m.norm()),
                ));
            }
        }
        Ok(Self { m0, m1 })
    }

    pub fn identity() -> Self {
        Self { m0: ONE, m1: ONE }
    }

    pub fn m0(&self) -> Complex64 {
        self.m0
    }

    pub fn m1(&self) -> Complex64 {
        self.m1
    }

    pub fn is_unitary(&self) -> bool {
        (self.m0.norm() - 1.0).abs() <= ALGEBRA_TOL && (self.m1.norm() - 1.0).abs() <= ALGEBRA_TOL
    }

    pub fn compose(&self, other: &DiagonalMap) -> DiagonalMap {
        DiagonalMap {
            m0: self.m0 * other.m0,
            m1: self.m1 * other.m1,
        }
    }

    /// Applies the map to a density matrix and renormalizes; returns the
    /// post-selected state and the survival probability `Tr(m ρ m†)`.
    pub fn apply_mixed(&self, rho: &MixedState) -> Result<(MixedState, f64)> {
        let out = rho.conjugate_by(self);
        let survival = out[0][0].re + out[1][1].re;
        if survival <= 0.0 {
            return Err(Error::StateAnnihilated);
        }
        let scaled = out.map(|row| row.map(|c| c / survival));
        Ok((MixedState::from_entries_unchecked(scaled), survival))
    }
}

/// `U_f = diag((−1)^f(0), (−1)^f(1))`
pub fn oracle_unitary(f: OracleFunction) -> DiagonalMap {
    let sign = |b: bool| if b { -ONE } else { ONE };
    DiagonalMap {
        m0: sign(f.f0),
        m1: sign(f.f1),
    }
}

/// Mask with attenuation `A_k ∈ [0, 1]` and phase `φ_k` on each slit.
pub fn slm_map(a0: f64, phi0: f64, a1: f64, phi1: f64) -> Result<DiagonalMap> {
    for (name, a) in [("A0", a0), ("A1", a1)] {
        if !(0.0..=1.0).contains(&a) {
            return Err(invalid(name, format!("attenuation {a} outside [0, 1]")));
        }
    }
    if !phi0.is_finite() || !phi1.is_finite() {
        return Err(invalid("phi", "non-finite phase"));
    }
    DiagonalMap::new(
        Complex64::from_polar(a0, phi0),
        Complex64::from_polar(a1, phi1),
    )
}

/// Returns the post-selected output state and the survival probability
/// `‖m ψ‖²`. Unitary maps return the image unchanged with survival 1.
pub fn apply_map(m: &DiagonalMap, psi: &QubitState) -> Result<(QubitState, f64)> {
    let alpha = m.m0 * psi.alpha;
    let beta = m.m1 * psi.beta;
    let survival = alpha.norm_sqr() + beta.norm_sqr();
    if survival <= 0.0 {
        return Err(Error::StateAnnihilated);
    }
    if m.is_unitary() {
        return Ok((QubitState { alpha, beta }, survival));
    }
    let n = survival.sqrt();
    Ok((
        QubitState {
            alpha: alpha / n,
            beta: beta / n,
        },
        survival,
    ))
}

/// Output of the one-query circuit: the oracle applied to `|+⟩`.
pub fn deutsch_output(f: OracleFunction) -> QubitState {
    let u = oracle_unitary(f);
    QubitState {
        alpha: u.m0 * QubitState::plus().alpha,
        beta: u.m1 * QubitState::plus().beta,
    }
}

/// `⟨a|b⟩`
pub fn overlap(a: &QubitState, b: &QubitState) -> Complex64 {
    a.alpha.conj() * b.alpha + a.beta.conj() * b.beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= ALGEBRA_TOL
    }

    fn f(s: &str) -> OracleFunction {
        s.parse().unwrap()
    }

    #[test]
    fn oracle_unitaries_match_the_four_maps() {
        let cases = [
            ("00", 1.0, 1.0),
            ("01", 1.0, -1.0),
            ("10", -1.0, 1.0),
            ("11", -1.0, -1.0),
        ];
        for (s, a, b) in cases {
            let u = oracle_unitary(f(s));
            assert!(close(u.m0(), a.into()) && close(u.m1(), b.into()), "{s}");
            assert!(u.is_unitary());
            let sq = u.compose(&u);
            assert!(close(sq.m0(), ONE) && close(sq.m1(), ONE));
        }
    }

    #[test]
    fn slm_map_cases() {
        let id = slm_map(1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(close(id.m0(), ONE) && close(id.m1(), ONE));
        let u01 = slm_map(1.0, 0.0, 1.0, PI).unwrap();
        assert!(close(u01.m0(), ONE) && close(u01.m1(), -ONE));
        let att = slm_map(1.0, 0.0, 0.5, 0.0).unwrap();
        assert!(close(att.m1(), Complex64::new(0.5, 0.0)));
        assert!(!att.is_unitary());
        assert!(slm_map(1.2, 0.0, 1.0, 0.0).is_err());
        assert!(slm_map(1.0, 0.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn apply_map_cases() {
        let (out, s) = apply_map(&oracle_unitary(f("01")), &QubitState::plus()).unwrap();
        assert!(out.same_ray(&QubitState::minus(), ALGEBRA_TOL));
        assert!((s - 1.0).abs() <= ALGEBRA_TOL);

        let (out, s) = apply_map(&oracle_unitary(f("00")), &QubitState::plus()).unwrap();
        assert!(close(out.alpha(), QubitState::plus().alpha()));
        assert!(close(out.beta(), QubitState::plus().beta()));
        assert!((s - 1.0).abs() <= ALGEBRA_TOL);

        let absorb = slm_map(1.0, 0.0, 0.0, 0.0).unwrap();
        let (out, s) = apply_map(&absorb, &QubitState::plus()).unwrap();
        assert!(out.same_ray(&QubitState::zero(), ALGEBRA_TOL));
        assert!((s - 0.5).abs() <= ALGEBRA_TOL);

        let kill = slm_map(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            apply_map(&kill, &QubitState::plus()),
            Err(Error::StateAnnihilated)
        );
        assert_eq!(
            apply_map(&slm_map(1.0, 0.0, 0.0, 0.0).unwrap(), &QubitState::one()),
            Err(Error::StateAnnihilated)
        );
    }

    #[test]
    fn deutsch_outputs() {
        assert!(deutsch_output(f("00")).same_ray(&QubitState::plus(), ALGEBRA_TOL));
        assert!(deutsch_output(f("11")).same_ray(&QubitState::plus(), ALGEBRA_TOL));
        assert!(deutsch_output(f("01")).same_ray(&QubitState::minus(), ALGEBRA_TOL));
        let out10 = deutsch_output(f("10"));
        assert!(close(overlap(&QubitState::minus(), &out10), -ONE));
        assert!(out10.same_ray(&deutsch_output(f("01")), ALGEBRA_TOL));
    }

    #[test]
    fn overlaps() {
        assert!(close(
            overlap(&QubitState::plus(), &QubitState::minus()),
            ZERO
        ));
        assert!(close(
            overlap(&QubitState::plus(), &QubitState::plus()),
            ONE
        ));
        assert!(close(
            overlap(&QubitState::zero(), &QubitState::plus()),
            FRAC_1_SQRT_2.into()
        ));
    }

    #[test]
    fn discrimination_is_exact() {
        for f in OracleFunction::ALL {
            let p = overlap(&QubitState::minus(), &deutsch_output(f)).norm_sqr();
            let want = if f.is_balanced() { 1.0 } else { 0.0 };
            assert!((p - want).abs() <= ALGEBRA_TOL, "{f}: {p}");
        }
    }

    #[test]
    fn state_validation() {
        assert!(QubitState::new(ONE, ONE).is_err());
        assert!(QubitState::new(Complex64::new(f64::NAN, 0.0), ZERO).is_err());
        assert!(MixedState::new(0.5, Complex64::new(0.6, 0.0), 0.5).is_err());
        assert!(MixedState::new(0.7, ZERO, 0.4).is_err());
        let m = MixedState::new(0.5, Complex64::new(0.25, 0.0), 0.5).unwrap();
        assert!((m.purity() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn oracle_parsing() {
        assert_eq!(f("10"), OracleFunction::new(true, false));
        assert!("2".parse::<OracleFunction>().is_err());
        assert!(OracleFunction::from_bits(0, 2).is_err());
        assert_eq!(OracleFunction::from_bits(1, 1).unwrap().to_string(), "11");
        assert!(f("11").eval(true) && !f("01").eval(false));
    }
}
