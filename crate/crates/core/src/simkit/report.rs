//! CSV persistence of sweep results.
//!
//! Columns are append-only: new columns go at the end and existing ones keep
//! their names and order. dB values carry four decimals; BER/FER use
//! scientific notation with seven significant digits.

use std::io::{self, Write};

use super::sweep::{GenieComparison, SweepPoint, SweepResult};

/// Bumped whenever a column is appended.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const SWEEP_COLUMNS: [&str; 13] = [
    "esn0_db",
    "ebn0_db",
    "ber_inner",
    "ber_outer",
    "ber_combined",
    "fer",
    "frames",
    "bits",
    "inner_bit_errors",
    "outer_bit_errors",
    "frame_errors",
    "mean_iter_inner",
    "mean_iter_outer",
];

pub const GENIE_COLUMNS: [&str; 7] = [
    "esn0_db",
    "ebn0_db",
    "ber_outer",
    "ber_inner_genie",
    "ber_inner_affected",
    "gap",
    "ci95_width_genie",
];

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn sweep_row(p: &SweepPoint) -> String {
    let t = &p.tally;
    [
        format!("{:.4}", p.esn0_db),
        format!("{:.4}", p.ebn0_db),
        sci(p.ber_inner()),
        p.ber_outer().map(sci).unwrap_or_default(),
        sci(p.ber_combined()),
        sci(p.fer()),
        t.frames.to_string(),
        p.bits().to_string(),
        t.inner_bit_errors.to_string(),
        t.outer_bit_errors.to_string(),
        t.frame_errors.to_string(),
        format!("{:.3}", p.mean_iterations_inner()),
        p.mean_iterations_outer()
            .map(|m| format!("{m:.3}"))
            .unwrap_or_default(),
    ]
    .join(",")
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, mut w: W) -> io::Result<()> {
    writeln!(w, "{}", SWEEP_COLUMNS.join(","))?;
    for p in &result.points {
        writeln!(w, "{}", sweep_row(p))?;
    }
    Ok(())
}

pub fn write_genie_csv<W: Write>(cmp: &GenieComparison, mut w: W) -> io::Result<()> {
    writeln!(w, "{}", GENIE_COLUMNS.join(","))?;
    for g in cmp.gaps() {
        writeln!(
            w,
            "{:.4},{:.4},{},{},{},{},{}",
            g.esn0_db,
            g.ebn0_db,
            sci(g.ber_outer),
            sci(g.ber_inner_genie),
            sci(g.ber_inner_affected),
            sci(g.gap),
            sci(g.ci95_width_genie)
        )?;
    }
    Ok(())
}
