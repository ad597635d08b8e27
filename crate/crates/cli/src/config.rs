//! `key = value` settings file for tolerances and shooting parameters.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are errors.

use std::path::Path;

use abflux::oracles::ShootingConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub quad_tolerance: f64,
    pub root_tolerance: f64,
    pub shooting: ShootingConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            quad_tolerance: 1e-12,
            root_tolerance: 1e-12,
            shooting: ShootingConfig::default(),
        }
    }
}

pub const KEYS: [&str; 8] = [
    "quad_tolerance",
    "root_tolerance",
    "shoot_step",
    "shoot_r_min",
    "shoot_r_max_multiplier",
    "shoot_decay_lengths",
    "shoot_energy_tolerance",
    "shoot_max_iterations",
];

impl Settings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", i + 1))
            })?;
            s.set(key.trim(), value.trim())
                .map_err(|msg| CliError::Usage(format!("config line {}: {msg}", i + 1)))?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| format!("{key}: '{value}' is not a number"))
        };
        match key {
            "quad_tolerance" => self.quad_tolerance = real()?,
            "root_tolerance" => self.root_tolerance = real()?,
            "shoot_step" => self.shooting.step = real()?,
            "shoot_r_min" => self.shooting.r_min = real()?,
            "shoot_r_max_multiplier" => self.shooting.r_max_multiplier = real()?,
            "shoot_decay_lengths" => self.shooting.decay_lengths = real()?,
            "shoot_energy_tolerance" => self.shooting.energy_tolerance = real()?,
            "shoot_max_iterations" => {
                self.shooting.max_iterations = value
                    .parse()
                    .map_err(|_| format!("{key}: '{value}' is not a count"))?
            }
            _ => return Err(format!("unknown key '{key}' (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }
}
