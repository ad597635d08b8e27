//! Independent reference spectra.
//!
//! - [`well_exact_spectrum`]: the spherical infinite well is exactly solvable;
//!   its levels are `(j_{γ+1/2, n+1}/a)²` in reduced units.
//! - [`shoot_eigenvalue`]: a Numerov shooting solver for the radial equation
//!   `u'' = (V(r) + γ(γ+1)/r² - E) u` with a general power law.
//!
//! The shooting solver works on a logarithmic grid `x = ln r` with
//! `u = r^{1/2} w(x)`, which turns the radial equation into
//! `w'' = [(γ+1/2)² + r²(V - E)] w`. The regular solution then starts as
//! `w ∝ e^{(γ+1/2)x}` (i.e. `u ∝ r^{γ+1}`) and the centrifugal singularity
//! becomes a constant, so Numerov keeps its fourth order down to `r → 0`.

use serde::{Deserialize, Serialize};

use crate::model::PotentialSpec;
use crate::special::{bessel_j_zeros, BesselOrder};
use crate::{Error, Result};

/// Exact well levels `E_n = (j_{γ+1/2, n+1})² / π²` in units of `ħ²π²/2ma²`,
/// for `n = 0..count`.
pub fn well_exact_spectrum(gamma: f64, a: f64, count: usize) -> Result<Vec<f64>> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    PotentialSpec::infinite_well(a)?;
    if count == 0 {
        return Err(Error::domain("count must be >= 1"));
    }
    if gamma == 0.0 {
        // J_{1/2}(x) ∝ sin x / √x, so j_{1/2,m} = mπ
        return Ok((1..=count).map(|m| (m * m) as f64).collect());
    }
    let order = BesselOrder::new(gamma + 0.5)?;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(bessel_j_zeros(order, count)?
        .into_iter()
        .map(|j| j * j / pi2)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Step in `x = ln r`.
    pub step: f64,
    /// Innermost radius in units of the natural length `|λ|^{-1/(ν+2)}`.
    pub r_min: f64,
    /// `r_max = r_max_multiplier · r_c + decay_lengths / sqrt(V(r_max_multiplier · r_c) - E)`.
    pub r_max_multiplier: f64,
    pub decay_lengths: f64,
    /// Absolute tolerance on the eigenvalue, reduced units.
    pub energy_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            step: 1e-3,
            r_min: 1e-6,
            r_max_multiplier: 2.0,
            decay_lengths: 10.0,
            energy_tolerance: 1e-11,
            max_iterations: 200,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.step,
            self.r_min,
            self.decay_lengths,
            self.energy_tolerance,
        ];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::domain(
                "shooting step, r_min, decay_lengths and tolerance must be > 0",
            ));
        }
        if !(self.r_max_multiplier >= 1.0) {
            return Err(Error::domain(
                "r_max_multiplier must be >= 1 so that r_max exceeds the turning point",
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub energy: f64,
    /// Sign changes of the matched eigenfunction on `(r_min, r_max)`.
    pub nodes: usize,
    pub r_max: f64,
    pub iterations: usize,
}

const RESCALE_ABOVE: f64 = 1e200;
const TAIL_DECAY: f64 = 1e8;
const MAX_TAIL_ENLARGEMENTS: usize = 8;
const MAX_WINDOW_STEPS: usize = 80;

struct Radial {
    lambda: f64,
    nu: f64,
    centrifugal: f64,
    length: f64,
    cfg: ShootingConfig,
}

struct Grid {
    /// Numerov coefficients `1 - dx² f_i / 12` and `f_i` itself.
    f: Vec<f64>,
    r_max: f64,
}

struct Trial {
    /// Sign changes of the outward solution up to the matching point.
    inner_nodes: usize,
    /// Outward minus inward log-derivative at the matching point; decreasing in `E`.
    mismatch: f64,
    /// The matched solution, for node counting.
    joined: Vec<f64>,
    r_max: f64,
}

impl Radial {
    fn potential(&self, r: f64) -> f64 {
        self.lambda * r.powf(self.nu)
    }

    fn grid(&self, energy: f64, extra_decay: f64) -> Grid {
        let r_c = (energy / self.lambda).powf(1.0 / self.nu);
        let r_out = self.cfg.r_max_multiplier * r_c;
        let kappa = (self.potential(r_out) - energy)
            .max(f64::MIN_POSITIVE)
            .sqrt();
        let r_max = r_out + self.cfg.decay_lengths * extra_decay / kappa;
        let x0 = (self.cfg.r_min * self.length).ln();
        let dx = self.cfg.step;
        let points = (((r_max.ln() - x0) / dx).ceil() as usize).max(8) + 1;
        let f = (0..points)
            .map(|i| {
                let r = (x0 + i as f64 * dx).exp();
                self.centrifugal + r * r * (self.potential(r) - energy)
            })
            .collect();
        Grid { f, r_max }
    }

    fn numerov_step(
        &self,
        f: &[f64],
        w_prev: f64,
        w_cur: f64,
        i_prev: usize,
        i_cur: usize,
        i_next: usize,
    ) -> f64 {
        let h = self.cfg.step * self.cfg.step / 12.0;
        (2.0 * (1.0 + 5.0 * h * f[i_cur]) * w_cur - (1.0 - h * f[i_prev]) * w_prev)
            / (1.0 - h * f[i_next])
    }

    fn outward(&self, f: &[f64], upto: usize) -> Vec<f64> {
        let mut w = Vec::with_capacity(upto + 1);
        w.push(1.0);
        w.push((self.centrifugal.sqrt() * self.cfg.step).exp());
        for i in 1..upto {
            let next = self.numerov_step(f, w[i - 1], w[i], i - 1, i, i + 1);
            w.push(next);
            if next.abs() > RESCALE_ABOVE {
                w.iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
            }
        }
        w.truncate(upto + 1);
        w
    }

    /// Sign changes of the regular solution over the whole grid; by the
    /// oscillation theorem, the number of levels below `energy`.
    fn count_levels_below(&self, energy: f64) -> usize {
        let grid = self.grid(energy, 1.0);
        sign_changes(&self.outward(&grid.f, grid.f.len() - 1))
    }

    fn trial(&self, energy: f64) -> Result<Trial> {
        let mut extra = 1.0;
        for _ in 0..=MAX_TAIL_ENLARGEMENTS {
            let grid = self.grid(energy, extra);
            let last = grid.f.len() - 1;
            let Some(m) = grid.f.iter().rposition(|&v| v < 0.0) else {
                // E below the bottom of the effective potential
                return Ok(Trial {
                    inner_nodes: 0,
                    mismatch: 1.0,
                    joined: Vec::new(),
                    r_max: grid.r_max,
                });
            };
            let m = m.clamp(2, last - 2);

            let w_out = self.outward(&grid.f, m + 1);

            let mut w_in = vec![0.0; last + 1];
            w_in[last - 1] = 1.0;
            let mut peak: f64 = 1.0;
            for i in (m..last).rev() {
                let next = self.numerov_step(&grid.f, w_in[i + 1], w_in[i], i + 1, i, i - 1);
                w_in[i - 1] = next;
                peak = peak.max(next.abs());
                if next.abs() > RESCALE_ABOVE {
                    w_in[i - 1..].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
                    peak /= RESCALE_ABOVE;
                }
            }
            if peak / w_in[last - 1].abs().max(f64::MIN_POSITIVE) < TAIL_DECAY
                && w_in[last - 1] != 0.0
            {
                extra *= 1.5;
                continue;
            }

            let inner_nodes = sign_changes(&w_out[..=m]);
            let lout = (w_out[m + 1] - w_out[m - 1]) / w_out[m];
            let lin = (w_in[m + 1] - w_in[m - 1]) / w_in[m];
            let scale = w_out[m] / w_in[m];
            let mut joined = w_out[..m].to_vec();
            joined.extend(w_in[m..last].iter().map(|v| v * scale));
            return Ok(Trial {
                inner_nodes,
                mismatch: lout - lin,
                joined,
                r_max: grid.r_max,
            });
        }
        Err(Error::Convergence(format!(
            "wave-function tail not decayed at E = {energy} after enlarging r_max"
        )))
    }
}

fn sign_changes(w: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in w {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// The `n`-th bound-state energy (`n` interior nodes) of a power-law potential.
pub fn shoot_eigenvalue(
    potential: &PotentialSpec,
    gamma: f64,
    n: u32,
    cfg: &ShootingConfig,
) -> Result<f64> {
    Ok(shoot(potential, gamma, n, cfg)?.energy)
}

/// Shooting solve with diagnostics.
///
/// The energy window is found from the node count of the outward solution
/// over the full grid, then narrowed by bisection: too many nodes before the
/// matching point (the outer turning point) means `E` is too high, too few
/// means too low, and at the right count the sign of the log-derivative
/// mismatch decides.
pub fn shoot(
    potential: &PotentialSpec,
    gamma: f64,
    n: u32,
    cfg: &ShootingConfig,
) -> Result<ShootingResult> {
    cfg.validate()?;
    let PotentialSpec::PowerLaw { lambda, nu } = *potential else {
        return Err(Error::domain(
            "the shooting oracle handles power-law potentials only",
        ));
    };
    potential.validate()?;
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    let solver = Radial {
        lambda,
        nu,
        centrifugal: (gamma + 0.5) * (gamma + 0.5),
        length: lambda.abs().powf(-1.0 / (nu + 2.0)),
        cfg: *cfg,
    };
    let scale = lambda.abs().powf(2.0 / (nu + 2.0));
    let n = n as usize;

    let mut steps = 0;
    let mut expand = |start: f64, grow: f64, want_above: bool| -> Result<f64> {
        let mut e = start;
        loop {
            let above = solver.count_levels_below(e) > n;
            if above == want_above {
                return Ok(e);
            }
            e *= grow;
            steps += 1;
            if steps > MAX_WINDOW_STEPS {
                return Err(Error::Bracket(format!("could not bracket level n = {n}")));
            }
        }
    };
    let (mut lo, mut hi) = if nu < 0.0 {
        (expand(-scale, 4.0, false)?, expand(-scale, 0.25, true)?)
    } else {
        (expand(scale, 0.25, false)?, expand(scale, 4.0, true)?)
    };

    let mut iterations = 0;
    while hi - lo > cfg.energy_tolerance {
        if iterations >= cfg.max_iterations {
            return Err(Error::Convergence(format!(
                "bisection for level n = {n} still {} wide after {iterations} iterations",
                hi - lo
            )));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let t = solver.trial(mid)?;
        let too_high = match t.inner_nodes.cmp(&n) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => t.mismatch < 0.0,
        };
        if too_high {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let energy = 0.5 * (lo + hi);
    let t = solver.trial(energy)?;
    let nodes = sign_changes(&t.joined);
    if nodes != n {
        return Err(Error::Convergence(format!(
            "converged solution at E = {energy} has {nodes} nodes, expected {n}"
        )));
    }
    Ok(ShootingResult {
        energy,
        nodes,
        r_max: t.r_max,
        iterations,
    })
}
