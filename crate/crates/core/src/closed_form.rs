//! Closed-form semiclassical spectra.
//!
//! For `-2 < ν < 0` (with `λ < 0`) the quantization rule integrates to
//!
//! ```text
//! E = -|λ|^{2/(ν+2)} [2|ν|√π (n + (2γ+ν+3)/(2ν+4)) Γ(1-1/ν)/Γ(-1/ν-1/2)]^{2ν/(ν+2)}
//! ```
//!
//! and for `ν > 0` (with `λ > 0`) the dual problem gives
//!
//! ```text
//! E = λ^{2/(ν+2)} [2ν√π (n + γ/2 + 3/4) Γ(1/ν+3/2)/Γ(1/ν)]^{2ν/(ν+2)}
//! ```
//!
//! both in reduced units. The infinite well is handled separately with the
//! wall-wall matching constant: `E = (n + γ/2 + 1)² π²/a²`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{effective_gamma, flux_shifted_k, PotentialSpec, UnitScale};
use crate::special::{gamma, ln_gamma};
use crate::table::{SpectrumRow, SpectrumTable};
use crate::{Error, Result};

/// How an energy was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    ActionRoot,
    ExactOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::ActionRoot => "action_root",
            Method::ExactOracle => "exact_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n: u32,
    pub q: u32,
    pub k: i32,
    pub gamma: f64,
    /// Reduced units.
    pub energy: f64,
    pub method: Method,
    pub unit: UnitScale,
}

impl EnergyLevel {
    pub fn display_energy(&self) -> f64 {
        self.unit.to_display(self.energy)
    }
}

/// `Γ(a)/Γ(b)` for positive arguments, through logarithms once either factor would overflow.
pub(crate) fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a < 160.0 && b < 160.0 {
        Ok(gamma(a)? / gamma(b)?)
    } else {
        Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
    }
}

fn check_attractive(lambda: f64, nu: f64) -> Result<()> {
    let p = PotentialSpec::PowerLaw { lambda, nu };
    p.validate()?;
    if nu > 0.0 {
        return Err(Error::domain(format!(
            "negative-power spectrum needs -2 < nu < 0, got {nu}"
        )));
    }
    Ok(())
}

fn check_confining(lambda: f64, nu: f64) -> Result<()> {
    let p = PotentialSpec::PowerLaw { lambda, nu };
    p.validate()?;
    if nu < 0.0 {
        return Err(Error::domain(format!(
            "positive-power spectrum needs nu > 0, got {nu}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma >= 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )))
    }
}

/// Quantization constant of the negative-power rule, `(2γ+ν+3)/(2ν+4)`.
pub fn negative_power_offset(gamma: f64, nu: f64) -> f64 {
    (2.0 * gamma + nu + 3.0) / (2.0 * nu + 4.0)
}

/// Quantization constant of the positive-power rule, `γ/2 + 3/4`.
pub fn positive_power_offset(gamma: f64) -> f64 {
    0.5 * gamma + 0.75
}

/// Negative-power energy as a function of the combined level index `n + (2γ+ν+3)/(2ν+4)`.
///
/// Accepts any real `n` and `γ` as long as the combination is positive;
/// used for derivatives and for the dual problem, where `γ'` can be negative.
pub fn negative_power_energy_continuous(n: f64, gamma: f64, lambda: f64, nu: f64) -> Result<f64> {
    check_attractive(lambda, nu)?;
    let level = n + negative_power_offset(gamma, nu);
    if !(level > 0.0) {
        return Err(Error::domain(format!(
            "level index n + offset = {level} must be positive"
        )));
    }
    let ratio = gamma_ratio(1.0 - 1.0 / nu, -1.0 / nu - 0.5)?;
    let base = 2.0 * nu.abs() * PI.sqrt() * level * ratio;
    Ok(-lambda.abs().powf(2.0 / (nu + 2.0)) * base.powf(2.0 * nu / (nu + 2.0)))
}

/// Positive-power energy as a function of the combined level index `n + γ/2 + 3/4`.
pub fn positive_power_energy_continuous(n: f64, gamma: f64, lambda: f64, nu: f64) -> Result<f64> {
    check_confining(lambda, nu)?;
    let level = n + positive_power_offset(gamma);
    if !(level > 0.0) {
        return Err(Error::domain(format!(
            "level index n + offset = {level} must be positive"
        )));
    }
    let ratio = gamma_ratio(1.0 / nu + 1.5, 1.0 / nu)?;
    let base = 2.0 * nu * PI.sqrt() * level * ratio;
    Ok(lambda.powf(2.0 / (nu + 2.0)) * base.powf(2.0 * nu / (nu + 2.0)))
}

/// Semiclassical energy for `-2 < ν < 0`, `λ < 0`; reduced units, always negative.
pub fn energy_negative_power(n: u32, gamma: f64, lambda: f64, nu: f64) -> Result<f64> {
    check_gamma(gamma)?;
    negative_power_energy_continuous(n as f64, gamma, lambda, nu)
}

/// Semiclassical energy for `ν > 0`, `λ > 0`; reduced units, always positive.
pub fn energy_positive_power(n: u32, gamma: f64, lambda: f64, nu: f64) -> Result<f64> {
    check_gamma(gamma)?;
    positive_power_energy_continuous(n as f64, gamma, lambda, nu)
}

/// Coulomb levels `-1/(4(n + q + |k+μ₀| + 1)²)` for `V = -1/r`, reduced units.
pub fn energy_coulomb(n: u32, q: u32, k: i32, mu0: f64) -> f64 {
    let principal = n as f64 + q as f64 + flux_shifted_k(k, mu0).abs() + 1.0;
    -0.25 / (principal * principal)
}

/// Oscillator levels `2n + γ + 3/2` in units of `ħω`.
pub fn energy_oscillator(n: u32, gamma: f64) -> f64 {
    2.0 * n as f64 + gamma + 1.5
}

/// Semiclassical well levels `(n + γ/2 + 1)²` in units of `ħ²π²/2ma²`.
///
/// The result is independent of `a` in these units; `a` is validated only.
pub fn energy_well_semiclassical(n: u32, gamma: f64, a: f64) -> Result<f64> {
    check_gamma(gamma)?;
    PotentialSpec::infinite_well(a)?;
    Ok(well_level_units(n as f64, gamma))
}

pub(crate) fn well_level_units(n: f64, gamma: f64) -> f64 {
    let level = n + 0.5 * gamma + 1.0;
    level * level
}

/// Closed-form energy in reduced units for any supported potential, with
/// `n` and `γ` continuous.
pub fn semiclassical_energy(potential: &PotentialSpec, n: f64, gamma: f64) -> Result<f64> {
    match *potential {
        PotentialSpec::PowerLaw { lambda, nu } if nu < 0.0 => {
            negative_power_energy_continuous(n, gamma, lambda, nu)
        }
        PotentialSpec::PowerLaw { lambda, nu } => {
            positive_power_energy_continuous(n, gamma, lambda, nu)
        }
        PotentialSpec::InfiniteWell { a } => {
            potential.validate()?;
            if !(n + 0.5 * gamma + 1.0 > 0.0) {
                return Err(Error::domain("well level index must be positive"));
            }
            Ok(well_level_units(n, gamma) * PI * PI / (a * a))
        }
    }
}

/// Closed-form energy of one level, reduced units.
pub fn level_energy(potential: &PotentialSpec, n: u32, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    semiclassical_energy(potential, n as f64, gamma)
}

/// Closed-form spectrum over `n ∈ [0, n_max]`, `q ∈ [0, q_max]`, `k ∈ k_range`,
/// sorted by `(n, q, k)`.
pub fn spectrum_table(
    potential: &PotentialSpec,
    mu0: f64,
    n_max: u32,
    q_max: u32,
    k_range: RangeInclusive<i32>,
    unit: UnitScale,
) -> Result<SpectrumTable> {
    potential.validate()?;
    if !mu0.is_finite() {
        return Err(Error::domain(format!("mu0 must be finite, got {mu0}")));
    }
    if k_range.is_empty() {
        return Err(Error::domain(format!(
            "empty k range {}..{}",
            k_range.start(),
            k_range.end()
        )));
    }
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    let keys: Vec<(u32, u32, i32)> = (0..=n_max)
        .flat_map(|n| (0..=q_max).flat_map(move |q| (k_lo..=k_hi).map(move |k| (n, q, k))))
        .collect();
    let rows = keys
        .par_iter()
        .map(|&(n, q, k)| {
            let gamma = effective_gamma(q, k, mu0).value();
            let energy = level_energy(potential, n, gamma)?;
            Ok(SpectrumRow {
                n,
                q,
                k,
                gamma,
                energy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SpectrumTable::new(*potential, mu0, unit, Method::ClosedForm, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn negative_power_examples() {
        assert!(rel(energy_negative_power(0, 0.0, -1.0, -1.0).unwrap(), -0.25) < 1e-14);
        assert!(rel(energy_negative_power(0, 1.5, -1.0, -1.0).unwrap(), -0.04) < 1e-14);
        // mpmath evaluation of the same expression
        let e = energy_negative_power(0, 0.0, -1.0, -0.5).unwrap();
        assert!(rel(e, -0.448_140_474_655_716_47) < 1e-12);
        assert!((e + 0.4481).abs() < 1e-3);
    }

    #[test]
    fn positive_power_examples() {
        assert!(rel(energy_positive_power(0, 0.0, 1.0, 2.0).unwrap(), 3.0) < 1e-14);
        // 2n + γ + 3/2 = 7 in units ħω = 2
        assert!(rel(energy_positive_power(1, 3.5, 1.0, 2.0).unwrap(), 14.0) < 1e-14);
        let linear = energy_positive_power(0, 0.0, 1.0, 1.0).unwrap();
        let want = (1.5 * PI * 0.75).powf(2.0 / 3.0);
        assert!(rel(linear, want) < 1e-13);
        assert!((linear - 2.320_251).abs() < 1e-6);
    }

    #[test]
    fn range_errors() {
        assert!(energy_negative_power(0, 0.0, 1.0, -1.0).is_err());
        assert!(energy_negative_power(0, 0.0, -1.0, 1.0).is_err());
        assert!(energy_negative_power(0, -0.1, -1.0, -1.0).is_err());
        assert!(energy_positive_power(0, 0.0, -1.0, 2.0).is_err());
        assert!(energy_positive_power(0, 0.0, 1.0, -1.0).is_err());
        assert!(energy_well_semiclassical(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn coulomb_examples() {
        // -1 and -4/9 in units mc²α²/2 (= 1/4 reduced)
        assert_eq!(energy_coulomb(0, 0, 0, 0.0) * 4.0, -1.0);
        assert!(rel(energy_coulomb(0, 0, 0, 0.5) * 4.0, -4.0 / 9.0) < 1e-15);
    }

    #[test]
    fn oscillator_examples() {
        assert_eq!(energy_oscillator(0, 0.0), 1.5);
        assert_eq!(energy_oscillator(2, 0.5), 6.0);
        for n in 0..5 {
            for &g in &[0.0, 0.5, 2.5, 7.25] {
                for &omega in &[0.5, 2.0, 3.0] {
                    let e = energy_positive_power(n, g, omega * omega / 4.0, 2.0).unwrap();
                    assert!(rel(e, energy_oscillator(n, g) * omega) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn well_examples() {
        assert_eq!(energy_well_semiclassical(0, 2.5, 1.0).unwrap(), 5.0625);
        assert_eq!(energy_well_semiclassical(0, 0.0, 3.0).unwrap(), 1.0);
        assert_eq!(energy_well_semiclassical(3, 0.0, 0.5).unwrap(), 16.0);
        let well = PotentialSpec::infinite_well(2.0).unwrap();
        let e = level_energy(&well, 1, 1.0).unwrap();
        assert!(rel(e, 2.5 * 2.5 * PI * PI / 4.0) < 1e-15);
    }

    #[test]
    fn table_grid_and_ordering() {
        let coulomb = PotentialSpec::power_law(-1.0, -1.0).unwrap();
        let t = spectrum_table(&coulomb, 0.0, 1, 1, 0..=0, UnitScale::reduced()).unwrap();
        assert_eq!(t.rows.len(), 4);
        for row in &t.rows {
            let p = (row.n + row.q + 1) as f64;
            assert!(rel(row.energy, -0.25 / (p * p)) < 1e-13);
        }
        let keys: Vec<_> = t.rows.iter().map(|r| (r.n, r.q, r.k)).collect();
        assert_eq!(keys, vec![(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)]);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = spectrum_table(&coulomb, 0.0, 1, 1, 1..=0, UnitScale::reduced());
        assert!(empty.is_err());
    }

    #[test]
    fn oscillator_table_is_positive_and_increasing_in_n() {
        let osc = PotentialSpec::power_law(1.0, 2.0).unwrap();
        let t = spectrum_table(&osc, 0.5, 4, 2, -2..=2, UnitScale::reduced()).unwrap();
        for row in &t.rows {
            assert!(row.energy > 0.0);
            if let Some(next) = t
                .rows
                .iter()
                .find(|r| r.n == row.n + 1 && r.q == row.q && r.k == row.k)
            {
                assert!(next.energy > row.energy);
            }
        }
    }
}
