use std::io::{self, Write};

use super::{BalanceReport, EigenLevel, EigenSolution, Grid1D};
use crate::fmt::num;

pub const LEVELS_CSV_HEADER: &str = "level,energy";
pub const PSI_CSV_HEADER: &str = "x,re,im";

pub fn write_levels_csv<W: Write>(solution: &EigenSolution, mut out: W) -> io::Result<()> {
    writeln!(out, "{LEVELS_CSV_HEADER}")?;
    for (i, level) in solution.levels.iter().enumerate() {
        writeln!(out, "{},{}", i, num(level.energy))?;
    }
    Ok(())
}

/// Contents of `psi_<n>.csv`.
pub fn write_psi_csv<W: Write>(level: &EigenLevel, grid: &Grid1D, mut out: W) -> io::Result<()> {
    writeln!(out, "{PSI_CSV_HEADER}")?;
    for (x, z) in grid.nodes().zip(&level.psi) {
        writeln!(out, "{},{},{}", num(x), num(z.re), num(z.im))?;
    }
    Ok(())
}

pub fn write_balance_csv<W: Write>(report: &BalanceReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", BalanceReport::CSV_HEADER)?;
    for l in &report.levels {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            l.level,
            num(l.energy),
            num(l.q2),
            num(l.q2_kinetic),
            num(l.v_psi),
            num(l.kinetic),
            num(l.residual),
            num(l.relative_residual),
        )?;
    }
    Ok(())
}
