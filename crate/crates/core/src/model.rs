//! Domain types: potentials, flux quantum numbers, display unit scales,
//! WKB matching constants, and the map between positive and negative
//! power-law exponents.
//!
//! Reduced units are used everywhere: `ħ = 1`, `2m = 1`. The flux enters only
//! through the dimensionless parameter `μ₀ = -2eg/ħc` (with flux `Φ = 4πg`),
//! which is taken as a plain input.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponents closer than this to the excluded endpoints `ν = 0` and `ν = -2` are rejected.
pub const EXPONENT_EXCLUSION: f64 = 1e-6;

/// A central potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `V(r) = λ r^ν`, with either `λ < 0, -2 < ν < 0` or `λ > 0, ν > 0`.
    PowerLaw { lambda: f64, nu: f64 },
    /// `V = 0` for `r < a`, infinite outside.
    InfiniteWell { a: f64 },
}

impl PotentialSpec {
    pub fn power_law(lambda: f64, nu: f64) -> Result<Self> {
        let p = PotentialSpec::PowerLaw { lambda, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn infinite_well(a: f64) -> Result<Self> {
        let p = PotentialSpec::InfiniteWell { a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::PowerLaw { lambda, nu } => {
                if !lambda.is_finite() || !nu.is_finite() {
                    return Err(Error::domain("lambda and nu must be finite"));
                }
                if nu.abs() < EXPONENT_EXCLUSION || (nu + 2.0).abs() < EXPONENT_EXCLUSION {
                    return Err(Error::domain(format!(
                        "nu = {nu} is an excluded endpoint; need -2 < nu < 0 (lambda < 0) or nu > 0 (lambda > 0)"
                    )));
                }
                let attractive = lambda < 0.0 && nu > -2.0 && nu < 0.0;
                let confining = lambda > 0.0 && nu > 0.0;
                if !(attractive || confining) {
                    return Err(Error::domain(format!(
                        "(lambda, nu) = ({lambda}, {nu}) outside the valid ranges: -2 < nu < 0 with lambda < 0, or nu > 0 with lambda > 0"
                    )));
                }
                Ok(())
            }
            PotentialSpec::InfiniteWell { a } => {
                if a > 0.0 && a.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "well radius must be positive, got {a}"
                    )))
                }
            }
        }
    }

    /// Power-law exponent; `+∞` for the infinite well.
    pub fn exponent(&self) -> f64 {
        match *self {
            PotentialSpec::PowerLaw { nu, .. } => nu,
            PotentialSpec::InfiniteWell { .. } => f64::INFINITY,
        }
    }

    /// `V(r)` inside the region where it is finite.
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::PowerLaw { lambda, nu } => lambda * r.powf(nu),
            PotentialSpec::InfiniteWell { a } => {
                if r < a {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Bound states have `E < 0` for the attractive branch and `E > 0` otherwise.
    pub fn bound_energies_negative(&self) -> bool {
        matches!(*self, PotentialSpec::PowerLaw { nu, .. } if nu < 0.0)
    }

    /// Check that `energy` lies in the bound-state range of this potential.
    pub fn check_bound_energy(&self, energy: f64) -> Result<()> {
        let ok = if self.bound_energies_negative() {
            energy < 0.0 && energy.is_finite()
        } else {
            energy > 0.0 && energy.is_finite()
        };
        if ok {
            Ok(())
        } else {
            let range = if self.bound_energies_negative() {
                "E < 0"
            } else {
                "E > 0"
            };
            Err(Error::domain(format!(
                "energy {energy} outside the bound range ({range}) for {self}"
            )))
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::PowerLaw { lambda, nu } => write!(f, "V(r) = {lambda} r^{nu}"),
            PotentialSpec::InfiniteWell { a } => write!(f, "infinite well of radius {a}"),
        }
    }
}

/// Radial quantum number `n`, quantum numbers `q`, `k`, and flux parameter `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxQuantumNumbers {
    pub n: u32,
    pub q: u32,
    pub k: i32,
    pub mu0: f64,
}

impl FluxQuantumNumbers {
    pub fn new(n: u32, q: u32, k: i32, mu0: f64) -> Result<Self> {
        if !mu0.is_finite() {
            return Err(Error::domain(format!("mu0 must be finite, got {mu0}")));
        }
        Ok(FluxQuantumNumbers { n, q, k, mu0 })
    }

    pub fn gamma(&self) -> EffectiveAngularMomentum {
        effective_gamma(self.q, self.k, self.mu0)
    }
}

/// `γ = q + |k + μ₀|`, the fractional angular momentum that replaces `l`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EffectiveAngularMomentum(f64);

impl EffectiveAngularMomentum {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma >= 0.0 && gamma.is_finite() {
            Ok(EffectiveAngularMomentum(gamma))
        } else {
            Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn effective_gamma(q: u32, k: i32, mu0: f64) -> EffectiveAngularMomentum {
    EffectiveAngularMomentum(q as f64 + flux_shifted_k(k, mu0).abs())
}

/// `k + μ₀`, summed as `(k + ⌊μ₀⌋) + frac(μ₀)` so that shifting an integer
/// between `k` and `μ₀` gives a bitwise identical result.
pub fn flux_shifted_k(k: i32, mu0: f64) -> f64 {
    let whole = mu0.floor();
    (k as f64 + whole) + (mu0 - whole)
}

/// Behaviour of the wave function at one end of the classically allowed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Linear turning point of a smooth potential.
    Smooth,
    /// Infinite wall.
    Wall,
}

/// Additive constant `c` in `∮ p dx = (n + c) h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaslovConstant {
    SmoothSmooth,
    SmoothWall,
    WallWall,
}

impl MaslovConstant {
    pub fn value(self) -> f64 {
        match self {
            MaslovConstant::SmoothSmooth => 0.5,
            MaslovConstant::SmoothWall => 0.75,
            MaslovConstant::WallWall => 1.0,
        }
    }
}

pub fn maslov_constant(left: Boundary, right: Boundary) -> MaslovConstant {
    match (left, right) {
        (Boundary::Smooth, Boundary::Smooth) => MaslovConstant::SmoothSmooth,
        (Boundary::Wall, Boundary::Wall) => MaslovConstant::WallWall,
        _ => MaslovConstant::SmoothWall,
    }
}

/// Display unit: `display = reduced * factor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitScale {
    pub label: String,
    pub factor: f64,
}

impl UnitScale {
    pub fn new(label: impl Into<String>, factor: f64) -> Result<Self> {
        if factor > 0.0 && factor.is_finite() {
            Ok(UnitScale {
                label: label.into(),
                factor,
            })
        } else {
            Err(Error::domain(format!(
                "unit factor must be positive, got {factor}"
            )))
        }
    }

    pub fn reduced() -> Self {
        UnitScale {
            label: "reduced".to_string(),
            factor: 1.0,
        }
    }

    pub fn to_display(&self, reduced: f64) -> f64 {
        reduced * self.factor
    }

    pub fn to_reduced(&self, display: f64) -> f64 {
        display / self.factor
    }
}

/// Named energy-unit presets for plots and tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitPreset {
    /// `ħ = 1, 2m = 1`.
    Reduced,
    /// `ħ²π²/2ma²` (well comparison).
    Fig1,
    /// `mc²α²/2` with `λ = -e²` (Coulomb).
    Fig2a,
    /// `(9π²λ²ħ²/8m)^{1/3}` (linear potential).
    Fig2b,
    /// `ħω` with `λ = mω²/2` (oscillator).
    Fig2c,
    /// `ħ²π²/2ma²` (well).
    Fig2d,
}

impl UnitPreset {
    pub const ALL: [UnitPreset; 6] = [
        UnitPreset::Reduced,
        UnitPreset::Fig1,
        UnitPreset::Fig2a,
        UnitPreset::Fig2b,
        UnitPreset::Fig2c,
        UnitPreset::Fig2d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnitPreset::Reduced => "reduced",
            UnitPreset::Fig1 => "fig1",
            UnitPreset::Fig2a => "fig2a",
            UnitPreset::Fig2b => "fig2b",
            UnitPreset::Fig2c => "fig2c",
            UnitPreset::Fig2d => "fig2d",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        UnitPreset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::domain(format!("unknown unit preset '{name}'")))
    }

    /// The natural preset for a potential, or `Reduced` when none applies.
    pub fn figure_default(potential: &PotentialSpec) -> Self {
        match potential.exponent() {
            f64::INFINITY => UnitPreset::Fig2d,
            -1.0 => UnitPreset::Fig2a,
            1.0 => UnitPreset::Fig2b,
            2.0 => UnitPreset::Fig2c,
            _ => UnitPreset::Reduced,
        }
    }

    /// Resolve the preset into a concrete scale for `potential`.
    pub fn scale(self, potential: &PotentialSpec) -> Result<UnitScale> {
        let lambda = match *potential {
            PotentialSpec::PowerLaw { lambda, .. } => Some(lambda),
            PotentialSpec::InfiniteWell { .. } => None,
        };
        let need_lambda = || {
            lambda.ok_or_else(|| {
                Error::domain(format!(
                    "unit preset {} needs a power-law coupling",
                    self.name()
                ))
            })
        };
        match self {
            UnitPreset::Reduced => Ok(UnitScale::reduced()),
            UnitPreset::Fig1 | UnitPreset::Fig2d => match *potential {
                PotentialSpec::InfiniteWell { a } => {
                    UnitScale::new("hbar^2 pi^2/2ma^2", a * a / (PI * PI))
                }
                _ => Err(Error::domain(format!(
                    "unit preset {} applies to the infinite well only",
                    self.name()
                ))),
            },
            // mc²α²/2 = m e⁴/2ħ² = λ²/4 with m = 1/2, ħ = 1, e² = -λ
            UnitPreset::Fig2a => UnitScale::new("mc^2 alpha^2/2", 4.0 / need_lambda()?.powi(2)),
            UnitPreset::Fig2b => {
                let l = need_lambda()?;
                UnitScale::new(
                    "(9 pi^2 lambda^2 hbar^2/8m)^(1/3)",
                    1.0 / (9.0 * PI * PI * l * l / 4.0).cbrt(),
                )
            }
            // λ = mω²/2 = ω²/4
            UnitPreset::Fig2c => {
                let l = need_lambda()?;
                if l <= 0.0 {
                    return Err(Error::domain("hbar omega units need lambda > 0"));
                }
                UnitScale::new("hbar omega", 1.0 / (2.0 * l.sqrt()))
            }
        }
    }
}

/// Parameters of the negative-power problem dual to a positive-power one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualParameters {
    pub nu: f64,
    pub energy: f64,
    pub lambda: f64,
    /// May be negative; it is an algebraic intermediate, not a physical `γ`.
    pub gamma: f64,
}

/// Map `(ν > 0, E, λ, γ)` to the dual negative-power parameters `(ν', E', λ', γ')`.
pub fn duality_map(nu: f64, energy: f64, lambda: f64, gamma: f64) -> Result<DualParameters> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!(
            "duality map needs finite nu > 0, got {nu}"
        )));
    }
    let nu_p = -2.0 * nu / (2.0 + nu);
    let ratio_sq = (nu_p / nu).powi(2);
    Ok(DualParameters {
        nu: nu_p,
        energy: -lambda * ratio_sq,
        lambda: -energy * ratio_sq,
        gamma: (2.0 * gamma + 1.0) / (nu + 2.0) - 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn potential_validation() {
        assert!(PotentialSpec::power_law(-1.0, -1.0).is_ok());
        assert!(PotentialSpec::power_law(1.0, 2.0).is_ok());
        assert!(PotentialSpec::power_law(1.0, -1.0).is_err());
        assert!(PotentialSpec::power_law(-1.0, 1.0).is_err());
        assert!(PotentialSpec::power_law(-1.0, -2.5).is_err());
        assert!(PotentialSpec::power_law(1.0, 0.0).is_err());
        assert!(PotentialSpec::power_law(1.0, 5e-7).is_err());
        assert!(PotentialSpec::power_law(-1.0, -2.0 + 5e-7).is_err());
        assert!(PotentialSpec::power_law(0.0, 2.0).is_err());
        assert!(PotentialSpec::infinite_well(0.0).is_err());
        assert!(PotentialSpec::infinite_well(2.0).is_ok());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(effective_gamma(0, 0, 0.0).value(), 0.0);
        assert_eq!(effective_gamma(1, 2, 0.5).value(), 3.5);
        assert_eq!(effective_gamma(0, -1, 0.5).value(), 0.5);
    }

    #[test]
    fn maslov_values() {
        use Boundary::*;
        assert_eq!(maslov_constant(Smooth, Smooth).value(), 0.5);
        assert_eq!(maslov_constant(Wall, Smooth).value(), 0.75);
        assert_eq!(maslov_constant(Smooth, Wall).value(), 0.75);
        assert_eq!(maslov_constant(Wall, Wall).value(), 1.0);
    }

    #[test]
    fn duality_examples() {
        assert_eq!(duality_map(2.0, 3.0, 1.0, 0.0).unwrap().nu, -1.0);
        assert!((duality_map(1.0, 1.0, 1.0, 0.0).unwrap().nu + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(duality_map(2.0, 3.0, 1.0, 0.0).unwrap().gamma, -0.25);
        assert!(duality_map(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(duality_map(-1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn unit_presets() {
        let coulomb = PotentialSpec::power_law(-1.0, -1.0).unwrap();
        // hydrogen ground state -1/4 reduced is -1 in units mc²α²/2
        let s = UnitPreset::Fig2a.scale(&coulomb).unwrap();
        assert_eq!(s.to_display(-0.25), -1.0);
        let osc = PotentialSpec::power_law(1.0, 2.0).unwrap();
        assert_eq!(UnitPreset::Fig2c.scale(&osc).unwrap().to_display(3.0), 1.5);
        let well = PotentialSpec::infinite_well(1.0).unwrap();
        assert!((UnitPreset::Fig1.scale(&well).unwrap().to_display(PI * PI) - 1.0).abs() < 1e-15);
        assert!(UnitPreset::Fig1.scale(&osc).is_err());
        assert!(UnitPreset::Fig2a.scale(&well).is_err());
        assert_eq!(UnitPreset::from_name("fig2b").unwrap(), UnitPreset::Fig2b);
        assert!(UnitPreset::from_name("fig9").is_err());
        assert!(UnitScale::new("x", 0.0).is_err());
    }

    proptest! {
        #[test]
        fn gamma_is_flux_periodic(q in 0u32..20, k in -50i32..50, sixtyfourths in -640i32..640) {
            let mu0 = sixtyfourths as f64 / 64.0;
            prop_assert_eq!(effective_gamma(q, k, mu0), effective_gamma(q, k - 1, mu0 + 1.0));
        }

        #[test]
        fn gamma_flux_shift_is_exact_up_to_input_rounding(q in 0u32..20, k in -50i32..50, mu0 in -10.0f64..10.0) {
            let a = effective_gamma(q, k, mu0).value();
            let b = effective_gamma(q, k - 1, mu0 + 1.0).value();
            prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * (1.0 + (k as f64).abs() + mu0.abs()));
        }

        #[test]
        fn dual_exponent_is_negative_and_invertible(nu in 1e-3f64..1e3) {
            let nu_p = duality_map(nu, 1.0, 1.0, 0.0).unwrap().nu;
            prop_assert!(nu_p > -2.0 && nu_p < 0.0);
            let back = -2.0 * nu_p / (2.0 + nu_p);
            prop_assert!((back - nu).abs() <= 1e-12 * nu.max(1.0));
        }
    }
}
