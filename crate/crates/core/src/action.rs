//! The radial action `∫₀^{r_c} sqrt(E - V(r)) dr` (reduced units), its
//! analytic value, and energy quantization by solving
//! `action(E) = (n + c) π` for `E`.
//!
//! The centrifugal term is not part of the integrand; `γ` enters only
//! through the constant `c`, which is the sum of an angular part and a WKB
//! matching constant:
//!
//! | potential     | angular part              | default matching |
//! |---------------|---------------------------|------------------|
//! | `-2 < ν < 0`  | `(2γ+1)/(2(ν+2)) - 1/4`   | `3/4`            |
//! | `ν > 0`       | `γ/2`                     | `3/4`            |
//! | infinite well | `γ/2`                     | `1`              |
//!
//! With the defaults this gives `(2γ+ν+3)/(2ν+4)`, `γ/2 + 3/4` and
//! `γ/2 + 1`, the constants behind the closed-form spectra.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::closed_form::{gamma_ratio, semiclassical_energy};
use crate::model::{MaslovConstant, PotentialSpec};
use crate::quadrature::TanhSinh;
use crate::roots::brent;
use crate::{Error, Result};

const MAX_BRACKET_STEPS: usize = 200;
const MAX_ROOT_ITER: usize = 200;

/// Matching constant used by [`quantize_energy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantizationConstant {
    /// `3/4` for power laws, `1` for the infinite well.
    Standard,
    Maslov(MaslovConstant),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationSetup {
    pub potential: PotentialSpec,
    pub gamma: f64,
    pub constant: QuantizationConstant,
    pub quad_tolerance: f64,
    pub root_tolerance: f64,
}

impl QuantizationSetup {
    pub fn new(potential: PotentialSpec, gamma: f64) -> Result<Self> {
        let setup = QuantizationSetup {
            potential,
            gamma,
            constant: QuantizationConstant::Standard,
            quad_tolerance: 1e-12,
            root_tolerance: 1e-12,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn with_maslov(mut self, maslov: MaslovConstant) -> Self {
        self.constant = QuantizationConstant::Maslov(maslov);
        self
    }

    pub fn with_tolerances(mut self, quad_tolerance: f64, root_tolerance: f64) -> Result<Self> {
        self.quad_tolerance = quad_tolerance;
        self.root_tolerance = root_tolerance;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        if !(self.quad_tolerance > 0.0) || !(self.root_tolerance > 0.0) {
            return Err(Error::domain("quantization tolerances must be > 0"));
        }
        Ok(())
    }

    fn matching(&self) -> f64 {
        match self.constant {
            QuantizationConstant::Maslov(m) => m.value(),
            QuantizationConstant::Standard => match self.potential {
                PotentialSpec::InfiniteWell { .. } => MaslovConstant::WallWall.value(),
                PotentialSpec::PowerLaw { .. } => MaslovConstant::SmoothWall.value(),
            },
        }
    }

    fn angular(&self) -> f64 {
        match self.potential {
            PotentialSpec::PowerLaw { nu, .. } if nu < 0.0 => {
                (2.0 * self.gamma + 1.0) / (2.0 * (nu + 2.0)) - 0.25
            }
            _ => 0.5 * self.gamma,
        }
    }

    /// The constant `c` in `action = (n + c) π`.
    pub fn offset(&self) -> f64 {
        self.angular() + self.matching()
    }

    /// The constant with the default matching term, i.e. the one the closed forms use.
    pub fn standard_offset(&self) -> f64 {
        QuantizationSetup {
            constant: QuantizationConstant::Standard,
            ..*self
        }
        .offset()
    }
}

/// Outer classical turning point, `V(r_c) = E`; the wall radius for the well.
pub fn turning_point(energy: f64, potential: &PotentialSpec) -> Result<f64> {
    potential.validate()?;
    potential.check_bound_energy(energy)?;
    Ok(match *potential {
        PotentialSpec::PowerLaw { lambda, nu } => (energy / lambda).powf(1.0 / nu),
        PotentialSpec::InfiniteWell { a } => a,
    })
}

/// `∫₀^{r_c} sqrt(E - V(r)) dr` by tanh-sinh quadrature with relative tolerance `1e-12`.
pub fn action_integral_numeric(energy: f64, potential: &PotentialSpec) -> Result<f64> {
    action_integral_numeric_with(energy, potential, &TanhSinh::default())
}

pub fn action_integral_numeric_with(
    energy: f64,
    potential: &PotentialSpec,
    quad: &TanhSinh,
) -> Result<f64> {
    let r_c = turning_point(energy, potential)?;
    match *potential {
        PotentialSpec::PowerLaw { nu, .. } if nu < 0.0 => {
            // r = r_c s^κ with κ = 2/(ν+2) turns the r^{ν/2} blow-up at the origin
            // into a bounded integrand; s^{κ-1} (E - V)^{1/2} -> sqrt(|E|) as s -> 0.
            let kappa = 2.0 / (nu + 2.0);
            let limit = r_c * kappa * energy.abs().sqrt();
            let integrand = |s: f64| {
                let r = r_c * s.powf(kappa);
                let jac = s.powf(kappa - 1.0);
                let kinetic = energy - potential.value(r);
                let v = r_c * kappa * jac * kinetic.max(0.0).sqrt();
                if r > 0.0 && jac > 0.0 && v.is_finite() {
                    v
                } else {
                    limit
                }
            };
            Ok(quad.integrate(integrand, 0.0, 1.0)?.value)
        }
        _ => {
            let integrand = |r: f64| (energy - potential.value(r)).max(0.0).sqrt();
            Ok(quad.integrate(integrand, 0.0, r_c)?.value)
        }
    }
}

/// Analytic action for `-2 < ν < 0`, `λ < 0`, `E < 0`:
/// `-(2/ν)(E/λ)^{1/ν} sqrt|E| (√π/4) Γ(-1/ν - 1/2)/Γ(1 - 1/ν)`.
pub fn action_integral_closed(energy: f64, lambda: f64, nu: f64) -> Result<f64> {
    let p = PotentialSpec::power_law(lambda, nu)?;
    if nu > 0.0 {
        return Err(Error::domain(format!(
            "closed action form needs -2 < nu < 0, got {nu}"
        )));
    }
    p.check_bound_energy(energy)?;
    let ratio = gamma_ratio(-1.0 / nu - 0.5, 1.0 - 1.0 / nu)?;
    Ok(
        -(2.0 / nu) * (energy / lambda).powf(1.0 / nu) * energy.abs().sqrt() * PI.sqrt() / 4.0
            * ratio,
    )
}

/// Analytic action for any supported potential: the negative-power form above,
/// `r_c sqrt(E) Γ(1/ν)Γ(3/2)/(ν Γ(1/ν + 3/2))` for `ν > 0`, `a sqrt(E)` for the well.
pub fn action_integral_analytic(energy: f64, potential: &PotentialSpec) -> Result<f64> {
    match *potential {
        PotentialSpec::PowerLaw { lambda, nu } if nu < 0.0 => {
            action_integral_closed(energy, lambda, nu)
        }
        PotentialSpec::PowerLaw { nu, .. } => {
            let r_c = turning_point(energy, potential)?;
            let beta = gamma_ratio(1.0 / nu, 1.0 / nu + 1.5)? * 0.5 * PI.sqrt() / nu;
            Ok(r_c * energy.sqrt() * beta)
        }
        PotentialSpec::InfiniteWell { a } => {
            potential.check_bound_energy(energy)?;
            Ok(a * energy.sqrt())
        }
    }
}

/// Solve `action(E) = (n + c) π` for `E`, reduced units.
///
/// The root is bracketed by geometric expansion around the closed-form
/// estimate and refined with Brent's method on the numerical action.
pub fn quantize_energy(setup: &QuantizationSetup, n: u32) -> Result<f64> {
    setup.validate()?;
    let potential = setup.potential;
    let target = (n as f64 + setup.offset()) * PI;
    if !(target > 0.0) {
        return Err(Error::domain(format!(
            "quantization target {target} must be positive"
        )));
    }
    let quad = TanhSinh::new(setup.quad_tolerance, 14)?;
    let residual = |e: f64| -> Result<f64> {
        Ok(action_integral_numeric_with(e, &potential, &quad)? - target)
    };

    let shift = setup.offset() - setup.standard_offset();
    let mut guess = semiclassical_energy(&potential, n as f64 + shift, setup.gamma).unwrap_or(
        if potential.bound_energies_negative() {
            -1.0
        } else {
            1.0
        },
    );
    if guess == 0.0 || !guess.is_finite() {
        guess = if potential.bound_energies_negative() {
            -1.0
        } else {
            1.0
        };
    }

    // action grows with E: deeper (more negative or smaller positive) energies give less action
    let (mut lo, mut hi) = (guess, guess);
    let deeper = |e: f64| if e < 0.0 { e * 2.0 } else { e * 0.5 };
    let shallower = |e: f64| if e < 0.0 { e * 0.5 } else { e * 2.0 };
    let mut f_lo = residual(lo)?;
    let mut steps = 0;
    while f_lo > 0.0 {
        lo = deeper(lo);
        f_lo = residual(lo)?;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(Error::Bracket(format!(
                "no energy with action below {target}"
            )));
        }
    }
    let mut f_hi = if hi == lo { f_lo } else { residual(hi)? };
    steps = 0;
    while f_hi < 0.0 {
        hi = shallower(hi);
        f_hi = residual(hi)?;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(Error::Bracket(format!(
                "no energy with action above {target}"
            )));
        }
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    brent(residual, lo, hi, setup.root_tolerance, 0.0, MAX_ROOT_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{energy_negative_power, energy_positive_power};
    use crate::model::PotentialSpec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn turning_point_examples() {
        let coulomb = PotentialSpec::power_law(-1.0, -1.0).unwrap();
        assert!((turning_point(-0.25, &coulomb).unwrap() - 4.0).abs() < 1e-15);
        let osc = PotentialSpec::power_law(1.0, 2.0).unwrap();
        assert!((turning_point(9.0, &osc).unwrap() - 3.0).abs() < 1e-15);
        let lin = PotentialSpec::power_law(1.0, 1.0).unwrap();
        assert!((turning_point(2.32, &lin).unwrap() - 2.32).abs() < 1e-15);
        let well = PotentialSpec::infinite_well(1.5).unwrap();
        assert_eq!(turning_point(10.0, &well).unwrap(), 1.5);
        assert!(turning_point(0.25, &coulomb).is_err());
        assert!(turning_point(0.0, &osc).is_err());
        assert!(turning_point(-1.0, &osc).is_err());
    }

    #[test]
    fn turning_point_satisfies_v_equals_e() {
        for &(lambda, nu, e) in &[
            (-1.0, -1.0, -0.3),
            (-2.0, -0.5, -1.7),
            (0.7, 3.0, 5.0),
            (1.0, 1.0, 2.0),
        ] {
            let p = PotentialSpec::power_law(lambda, nu).unwrap();
            let r = turning_point(e, &p).unwrap();
            assert!(rel(p.value(r), e) < 1e-14);
        }
    }

    #[test]
    fn numeric_action_examples() {
        let coulomb = PotentialSpec::power_law(-1.0, -1.0).unwrap();
        assert!(rel(action_integral_numeric(-0.25, &coulomb).unwrap(), PI) < 1e-10);
        let osc = PotentialSpec::power_law(1.0, 2.0).unwrap();
        assert!(rel(action_integral_numeric(3.0, &osc).unwrap(), 0.75 * PI) < 1e-10);
        let lin = PotentialSpec::power_law(1.0, 1.0).unwrap();
        let e: f64 = 2.320_251;
        assert!(
            rel(
                action_integral_numeric(e, &lin).unwrap(),
                2.0 / 3.0 * e.powf(1.5)
            ) < 1e-10
        );
        let well = PotentialSpec::infinite_well(2.0).unwrap();
        assert!(rel(action_integral_numeric(9.0, &well).unwrap(), 6.0) < 1e-12);
    }

    #[test]
    fn closed_action_examples() {
        assert!(rel(action_integral_closed(-0.25, -1.0, -1.0).unwrap(), PI) < 1e-14);
        assert!(rel(action_integral_closed(-0.04, -1.0, -1.0).unwrap(), 2.5 * PI) < 1e-14);
        assert!(action_integral_closed(-0.25, -1.0, 1.0).is_err());
        assert!(action_integral_closed(0.25, -1.0, -1.0).is_err());
    }

    #[test]
    fn positive_power_analytic_action_matches_quadrature() {
        for &nu in &[0.5, 1.0, 2.0, 3.0, 6.0] {
            let p = PotentialSpec::power_law(1.3, nu).unwrap();
            for &e in &[0.1, 1.0, 7.5] {
                let num = action_integral_numeric(e, &p).unwrap();
                let ana = action_integral_analytic(e, &p).unwrap();
                assert!(rel(num, ana) < 1e-10, "nu={nu} e={e}: {num} vs {ana}");
            }
        }
    }

    #[test]
    fn action_is_strictly_increasing() {
        for &(lambda, nu) in &[(-1.0, -1.5), (-1.0, -0.5), (2.0, 1.0), (1.0, 4.0)] {
            let p = PotentialSpec::power_law(lambda, nu).unwrap();
            let sign = if nu < 0.0 { -1.0 } else { 1.0 };
            let energies: Vec<f64> = (1..=15)
                .map(|i| sign * 10f64.powf(-2.0 + 0.25 * i as f64))
                .collect();
            let mut sorted = energies.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let actions: Vec<f64> = sorted
                .iter()
                .map(|&e| action_integral_numeric(e, &p).unwrap())
                .collect();
            assert!(actions.windows(2).all(|w| w[1] > w[0]), "nu={nu}");
        }
    }

    #[test]
    fn quantize_examples() {
        let osc = PotentialSpec::power_law(1.0, 2.0).unwrap();
        let e = quantize_energy(&QuantizationSetup::new(osc, 0.0).unwrap(), 0).unwrap();
        assert!((e - 3.0).abs() < 1e-8);
        let coulomb = PotentialSpec::power_law(-1.0, -1.0).unwrap();
        let e = quantize_energy(&QuantizationSetup::new(coulomb, 1.5).unwrap(), 0).unwrap();
        assert!((e + 0.04).abs() < 1e-8);
        let lin = PotentialSpec::power_law(1.0, 1.0).unwrap();
        let e = quantize_energy(&QuantizationSetup::new(lin, 0.0).unwrap(), 0).unwrap();
        assert!((e - 2.320_251).abs() < 1e-6);
    }

    #[test]
    fn standard_offsets() {
        let neg =
            QuantizationSetup::new(PotentialSpec::power_law(-1.0, -0.5).unwrap(), 2.5).unwrap();
        assert!((neg.offset() - (2.0 * 2.5 - 0.5 + 3.0) / (2.0 * 1.5)).abs() < 1e-15);
        let pos = QuantizationSetup::new(PotentialSpec::power_law(1.0, 3.0).unwrap(), 2.5).unwrap();
        assert_eq!(pos.offset(), 2.0);
        let well = QuantizationSetup::new(PotentialSpec::infinite_well(1.0).unwrap(), 2.5).unwrap();
        assert_eq!(well.offset(), 2.25);
        assert_eq!(well.with_maslov(MaslovConstant::SmoothWall).offset(), 2.0);
        assert_eq!(pos.with_maslov(MaslovConstant::SmoothSmooth).offset(), 1.75);
    }

    #[test]
    fn well_quantization_is_exact() {
        for &a in &[0.5, 1.0, 3.0] {
            let well = PotentialSpec::infinite_well(a).unwrap();
            for &g in &[0.0, 0.5, 2.5] {
                let setup = QuantizationSetup::new(well, g).unwrap();
                for n in 0..4 {
                    let e = quantize_energy(&setup, n).unwrap();
                    let level = n as f64 + g / 2.0 + 1.0;
                    assert!(rel(e, level * level * PI * PI / (a * a)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn maslov_override_shifts_the_level() {
        let well = PotentialSpec::infinite_well(1.0).unwrap();
        let setup = QuantizationSetup::new(well, 0.0)
            .unwrap()
            .with_maslov(MaslovConstant::SmoothWall);
        let e = quantize_energy(&setup, 0).unwrap();
        assert!(rel(e, 0.75 * 0.75 * PI * PI) < 1e-10);
    }

    #[test]
    fn quantization_matches_closed_forms_sample() {
        for &(lambda, nu) in &[(-1.0, -1.5), (-2.0, -0.5), (1.0, 1.0), (0.5, 4.0)] {
            let p = PotentialSpec::power_law(lambda, nu).unwrap();
            for n in [0u32, 3] {
                let setup = QuantizationSetup::new(p, 0.5).unwrap();
                let e = quantize_energy(&setup, n).unwrap();
                let want = if nu < 0.0 {
                    energy_negative_power(n, 0.5, lambda, nu).unwrap()
                } else {
                    energy_positive_power(n, 0.5, lambda, nu).unwrap()
                };
                assert!(rel(e, want) < 1e-8, "nu={nu} n={n}: {e} vs {want}");
            }
        }
    }

    #[test]
    fn seed_free_root_agrees_with_quantize() {
        for &(lambda, nu, g, n) in &[
            (-1.0, -1.0, 0.5, 2u32),
            (1.0, 1.0, 0.0, 1),
            (1.0, 4.0, 2.5, 3),
        ] {
            let p = PotentialSpec::power_law(lambda, nu).unwrap();
            let setup = QuantizationSetup::new(p, g).unwrap();
            let e = quantize_energy(&setup, n).unwrap();
            let target = (n as f64 + setup.offset()) * PI;
            let (lo, hi) = if nu < 0.0 {
                (10.0 * e, 0.1 * e)
            } else {
                (0.1 * e, 10.0 * e)
            };
            let free = brent(
                |x| Ok(action_integral_numeric(x, &p)? - target),
                lo,
                hi,
                1e-13,
                0.0,
                200,
            )
            .unwrap();
            assert!(rel(e, free) < 1e-10, "nu={nu}: {e} vs {free}");
        }
    }

    #[test]
    fn rejects_bad_setup() {
        let p = PotentialSpec::power_law(1.0, 2.0).unwrap();
        assert!(QuantizationSetup::new(p, -1.0).is_err());
        assert!(QuantizationSetup::new(p, 0.0)
            .unwrap()
            .with_tolerances(0.0, 1e-10)
            .is_err());
    }
}
