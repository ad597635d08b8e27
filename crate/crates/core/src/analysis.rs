//! Derivatives of the closed-form spectra with respect to the quantum numbers
//! and the tendency rules they obey.
//!
//! Every closed form depends on the quantum numbers only through one level
//! index `L = n + c·γ` (`c = 1/2` for `ν > 0` and the well, `c = 1/(ν+2)` for
//! `ν < 0`), with `E ∝ L^{2ν/(ν+2)}` (`L²` for the well). Hence:
//!
//! - all first derivatives are positive,
//! - `∂E/∂n : ∂E/∂q = 1/c`, and `∂E/∂q = ∂E/∂|k+μ₀|`,
//! - the curvature in `n` and the mixed derivative `∂²E/∂n∂|k+μ₀|` share the
//!   sign of `2ν/(ν+2) - 1`, which is negative for `ν < 2`, zero at `ν = 2`
//!   and positive above.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closed_form::semiclassical_energy;
use crate::model::{PotentialSpec, EXPONENT_EXCLUSION};
use crate::{Error, Result};

/// Central-difference step in each quantum number.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Smallest `|k+μ₀|` at which derivatives with respect to it are taken.
pub const MIN_FLUX_SHIFTED_K: f64 = 1e-3;

/// Second differences below this multiple of `ε|E|/h²` are roundoff.
const NOISE_FACTOR: f64 = 256.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    N,
    Q,
    /// `|k + μ₀|`, differentiated as a single variable.
    KMu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    First,
    Second,
}

/// Quantum numbers promoted to reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub n: f64,
    pub q: f64,
    pub k: f64,
}

impl SpectralPoint {
    pub fn new(n: f64, q: f64, k: f64) -> Self {
        SpectralPoint { n, q, k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    BendsDown,
    Linear,
    BendsUp,
}

impl Curvature {
    pub fn sign(self) -> Sign {
        match self {
            Curvature::BendsDown => Sign::Negative,
            Curvature::Linear => Sign::Zero,
            Curvature::BendsUp => Sign::Positive,
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Curvature::BendsDown => "bends down",
            Curvature::Linear => "linear",
            Curvature::BendsUp => "bends up",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    /// Sign of `value`, with `|value| <= noise` counted as zero.
    pub fn of(value: f64, noise: f64) -> Sign {
        if value > noise {
            Sign::Positive
        } else if value < -noise {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

fn check_exponent(nu: f64) -> Result<()> {
    let ok = nu == f64::INFINITY
        || (nu.is_finite() && nu > -2.0 + EXPONENT_EXCLUSION && nu.abs() >= EXPONENT_EXCLUSION);
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("nu = {nu} outside (-2, 0) ∪ (0, ∞]")))
    }
}

/// Curvature of `E` in `n` predicted from the exponent alone.
pub fn tendency_classify(nu: f64) -> Result<Curvature> {
    check_exponent(nu)?;
    Ok(if nu == 2.0 {
        Curvature::Linear
    } else if nu > 2.0 {
        Curvature::BendsUp
    } else {
        Curvature::BendsDown
    })
}

/// `(∂E/∂n : ∂E/∂q, ∂E/∂n : ∂E/∂|k+μ₀|, ∂E/∂q : ∂E/∂|k+μ₀|)`.
pub fn derivative_ratios(nu: f64) -> Result<(f64, f64, f64)> {
    check_exponent(nu)?;
    let r = if nu > 0.0 { 2.0 } else { nu + 2.0 };
    Ok((r, r, 1.0))
}

/// Sign of `∂²E/∂n∂|k+μ₀|`: whether a stronger flux steepens the spectrum in `n`.
pub fn flux_slope_effect(nu: f64) -> Result<Sign> {
    Ok(tendency_classify(nu)?.sign())
}

struct Evaluator<'a> {
    potential: &'a PotentialSpec,
    n: f64,
    q: f64,
    kmu: f64,
}

impl Evaluator<'_> {
    fn energy(&self, dn: f64, dq: f64, dkmu: f64) -> Result<f64> {
        let gamma = (self.q + dq) + (self.kmu + dkmu);
        semiclassical_energy(self.potential, self.n + dn, gamma)
    }

    fn shifted(&self, which: Variable, d: f64) -> Result<f64> {
        match which {
            Variable::N => self.energy(d, 0.0, 0.0),
            Variable::Q => self.energy(0.0, d, 0.0),
            Variable::KMu => self.energy(0.0, 0.0, d),
        }
    }
}

fn evaluator<'a>(
    potential: &'a PotentialSpec,
    mu0: f64,
    point: SpectralPoint,
    uses_kmu: bool,
) -> Result<Evaluator<'a>> {
    potential.validate()?;
    if ![mu0, point.n, point.q, point.k]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::domain("derivative point and mu0 must be finite"));
    }
    if point.n < 0.0 || point.q < 0.0 {
        return Err(Error::domain("n and q must be >= 0"));
    }
    let kmu = (point.k + mu0).abs();
    if uses_kmu && kmu < MIN_FLUX_SHIFTED_K {
        return Err(Error::domain(format!(
            "|k+mu0| = {kmu} is below {MIN_FLUX_SHIFTED_K}; the derivative in |k+mu0| is taken away from its kink"
        )));
    }
    Ok(Evaluator {
        potential,
        n: point.n,
        q: point.q,
        kmu,
    })
}

/// Central-difference derivative of the closed-form energy (reduced units).
pub fn spectral_derivative(
    potential: &PotentialSpec,
    mu0: f64,
    point: SpectralPoint,
    which: Variable,
    order: Order,
) -> Result<f64> {
    let ev = evaluator(potential, mu0, point, which == Variable::KMu)?;
    let h = DERIVATIVE_STEP;
    let plus = ev.shifted(which, h)?;
    let minus = ev.shifted(which, -h)?;
    Ok(match order {
        Order::First => (plus - minus) / (2.0 * h),
        Order::Second => (plus - 2.0 * ev.shifted(which, 0.0)? + minus) / (h * h),
    })
}

/// Central-difference `∂²E/∂n∂|k+μ₀|` (reduced units).
pub fn mixed_derivative(potential: &PotentialSpec, mu0: f64, point: SpectralPoint) -> Result<f64> {
    let ev = evaluator(potential, mu0, point, true)?;
    let h = DERIVATIVE_STEP;
    let pp = ev.energy(h, 0.0, h)?;
    let pm = ev.energy(h, 0.0, -h)?;
    let mp = ev.energy(-h, 0.0, h)?;
    let mm = ev.energy(-h, 0.0, -h)?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

/// Roundoff level of a second difference of `E` at `point`.
fn second_difference_noise(
    potential: &PotentialSpec,
    mu0: f64,
    point: SpectralPoint,
) -> Result<f64> {
    let ev = evaluator(potential, mu0, point, false)?;
    let e = ev.energy(0.0, 0.0, 0.0)?;
    Ok(NOISE_FACTOR * f64::EPSILON * e.abs() / (DERIVATIVE_STEP * DERIVATIVE_STEP))
}

/// Curvature in `n` read off the measured second difference.
pub fn measured_curvature(
    potential: &PotentialSpec,
    mu0: f64,
    point: SpectralPoint,
) -> Result<Curvature> {
    let d2 = spectral_derivative(potential, mu0, point, Variable::N, Order::Second)?;
    let noise = second_difference_noise(potential, mu0, point)?;
    Ok(match Sign::of(d2, noise) {
        Sign::Negative => Curvature::BendsDown,
        Sign::Zero => Curvature::Linear,
        Sign::Positive => Curvature::BendsUp,
    })
}

/// Tendency summary at one point, from measured derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TendencyReport {
    pub nu: f64,
    pub curvature: Curvature,
    /// Signs of `∂E/∂n`, `∂E/∂q`, `∂E/∂|k+μ₀|`.
    pub first_derivative_signs: [Sign; 3],
    /// `(∂E/∂n : ∂E/∂q, ∂E/∂n : ∂E/∂|k+μ₀|, ∂E/∂q : ∂E/∂|k+μ₀|)`.
    pub ratios: (f64, f64, f64),
    pub flux_slope: Sign,
}

/// Measure the tendencies at `point` and check them against the predictions.
///
/// Fails with a numerical error if the measured curvature or flux-slope sign
/// disagrees with [`tendency_classify`].
pub fn tendency_report(
    potential: &PotentialSpec,
    mu0: f64,
    point: SpectralPoint,
) -> Result<TendencyReport> {
    let nu = potential.exponent();
    let predicted = tendency_classify(nu)?;
    let d = |v| spectral_derivative(potential, mu0, point, v, Order::First);
    let (dn, dq, dk) = (d(Variable::N)?, d(Variable::Q)?, d(Variable::KMu)?);
    let curvature = measured_curvature(potential, mu0, point)?;
    let noise = second_difference_noise(potential, mu0, point)?;
    let flux_slope = Sign::of(mixed_derivative(potential, mu0, point)?, noise);
    if curvature != predicted || flux_slope != predicted.sign() {
        return Err(Error::Convergence(format!(
            "measured curvature {curvature} / flux slope {flux_slope} disagree with the predicted {predicted} at nu = {nu}"
        )));
    }
    Ok(TendencyReport {
        nu,
        curvature,
        first_derivative_signs: [Sign::of(dn, 0.0), Sign::of(dq, 0.0), Sign::of(dk, 0.0)],
        ratios: (dn / dq, dn / dk, dq / dk),
        flux_slope,
    })
}
