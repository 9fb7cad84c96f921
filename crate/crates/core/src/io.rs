//! CSV snapshot writers. Physical snapshots carry `index,x,re,im` rows,
//! spectral snapshots `m,xi,re,im`, one row per node/bin, with 17
//! significant digits. Metadata is emitted as `# key = value` comment lines
//! so the files stay gnuplot-friendly.

use crate::grid::{PhysicalField, SpectralField};
use std::io::{self, Write};

fn write_meta<W: Write>(w: &mut W, meta: &[(String, String)]) -> io::Result<()> {
    for (key, value) in meta {
        writeln!(w, "# {key} = {value}")?;
    }
    Ok(())
}

pub fn write_physical_csv<W: Write>(
    w: &mut W,
    field: &PhysicalField,
    meta: &[(String, String)],
) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "index,x,re,im")?;
    let grid = field.grid();
    for (j, v) in field.values().iter().enumerate() {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e}",
            grid.origin_index() + j as i64,
            grid.node(j),
            v.re,
            v.im
        )?;
    }
    Ok(())
}

pub fn write_spectral_csv<W: Write>(
    w: &mut W,
    field: &SpectralField,
    meta: &[(String, String)],
) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "m,xi,re,im")?;
    let grid = field.grid();
    for (m, c) in field.coeffs().iter().enumerate() {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e}",
            m,
            grid.wavenumber(m),
            c.re,
            c.im
        )?;
    }
    Ok(())
}
