use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Write, relax and read durations of one update cycle, s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub t_write: f64,
    pub t_relax: f64,
    pub t_read: f64,
}

impl Default for Timings {
    fn default() -> Self {
        Self {
            t_write: 3e-9,
            t_relax: 6e-9,
            t_read: 1e-9,
        }
    }
}

/// Energy spent by spin updates, J.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub write_j: f64,
    pub read_j: f64,
    pub relax_j: f64,
    pub overhead_j: f64,
    pub updates: u64,
}

impl EnergyLedger {
    pub fn total_j(&self) -> f64 {
        self.write_j + self.read_j + self.relax_j + self.overhead_j
    }

    pub fn total_pj(&self) -> f64 {
        self.total_j() * 1e12
    }
}

impl AddAssign for EnergyLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.write_j += rhs.write_j;
        self.read_j += rhs.read_j;
        self.relax_j += rhs.relax_j;
        self.overhead_j += rhs.overhead_j;
        self.updates += rhs.updates;
    }
}

impl Add for EnergyLedger {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

/// Energy of one read/write/relax cycle. The relax phase draws no current;
/// relax and CMOS switching are lumped into the constant `overhead_j`.
pub fn account_energy(i_write: f64, i_read: f64, timings: &Timings, vdd: f64, overhead_j: f64) -> EnergyLedger {
    EnergyLedger {
        write_j: vdd * i_write.abs() * timings.t_write,
        read_j: vdd * i_read.abs() * timings.t_read,
        relax_j: 0.0,
        overhead_j,
        updates: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn write_read_overhead_split() {
        let e = account_energy(90e-6, 38e-6, &Timings::default(), 1.0, 0.01e-12);
        assert_eq!(e.write_j, 1.0 * 90e-6 * 3e-9);
        assert_eq!(e.read_j, 1.0 * 38e-6 * 1e-9);
        assert!((e.total_pj() - 0.318).abs() < 1e-12);
    }

    #[test]
    fn ledger_sums_componentwise() {
        let a = account_energy(60e-6, 38e-6, &Timings::default(), 1.0, 1e-14);
        let b = account_energy(120e-6, 38e-6, &Timings::default(), 1.0, 1e-14);
        let s = a + b;
        assert_eq!(s.updates, 2);
        assert_eq!(s.write_j, a.write_j + b.write_j);
        assert!((s.total_j() - (a.total_j() + b.total_j())).abs() < 1e-27);
    }
}
