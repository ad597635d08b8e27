//! Tabulated spectra over quantum-number grids.

use serde::{Deserialize, Serialize};

use crate::closed_form::{EnergyLevel, Method};
use crate::model::{PotentialSpec, UnitScale};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub q: u32,
    pub k: i32,
    pub gamma: f64,
    /// Reduced units.
    pub energy: f64,
}

/// Rows are sorted by `(n, q, k)` with no duplicate keys and finite energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub potential: PotentialSpec,
    pub mu0: f64,
    pub unit: UnitScale,
    pub method: Method,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn new(
        potential: PotentialSpec,
        mu0: f64,
        unit: UnitScale,
        method: Method,
        rows: Vec<SpectrumRow>,
    ) -> Result<Self> {
        let table = SpectrumTable {
            potential,
            mu0,
            unit,
            method,
            rows,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        for pair in self.rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if (a.n, a.q, a.k) >= (b.n, b.q, b.k) {
                return Err(Error::domain(format!(
                    "rows not strictly sorted at (n, q, k) = ({}, {}, {})",
                    b.n, b.q, b.k
                )));
            }
        }
        if let Some(bad) = self
            .rows
            .iter()
            .find(|r| !r.energy.is_finite() || !r.gamma.is_finite())
        {
            return Err(Error::domain(format!(
                "non-finite entry at (n, q, k) = ({}, {}, {})",
                bad.n, bad.q, bad.k
            )));
        }
        Ok(())
    }

    pub fn display_energy(&self, row: &SpectrumRow) -> f64 {
        self.unit.to_display(row.energy)
    }

    pub fn levels(&self) -> impl Iterator<Item = EnergyLevel> + '_ {
        self.rows.iter().map(move |r| EnergyLevel {
            n: r.n,
            q: r.q,
            k: r.k,
            gamma: r.gamma,
            energy: r.energy,
            method: self.method,
            unit: self.unit.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u32, q: u32, k: i32, energy: f64) -> SpectrumRow {
        SpectrumRow {
            n,
            q,
            k,
            gamma: 0.0,
            energy,
        }
    }

    #[test]
    fn rejects_unsorted_duplicate_and_nonfinite_rows() {
        let p = PotentialSpec::power_law(1.0, 2.0).unwrap();
        let mk = |rows| SpectrumTable::new(p, 0.0, UnitScale::reduced(), Method::ClosedForm, rows);
        assert!(mk(vec![row(0, 0, 0, 1.0), row(0, 0, 1, 2.0)]).is_ok());
        assert!(mk(vec![row(0, 0, 1, 1.0), row(0, 0, 0, 2.0)]).is_err());
        assert!(mk(vec![row(0, 0, 0, 1.0), row(0, 0, 0, 2.0)]).is_err());
        assert!(mk(vec![row(0, 0, 0, f64::NAN)]).is_err());
    }

    #[test]
    fn levels_carry_method_and_unit() {
        let p = PotentialSpec::power_law(1.0, 2.0).unwrap();
        let unit = UnitScale::new("hbar omega", 0.5).unwrap();
        let t =
            SpectrumTable::new(p, 0.0, unit, Method::ClosedForm, vec![row(0, 0, 0, 3.0)]).unwrap();
        let level = t.levels().next().unwrap();
        assert_eq!(level.method, Method::ClosedForm);
        assert_eq!(level.display_energy(), 1.5);
    }
}
