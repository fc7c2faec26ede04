//! The `(ε, δ)` plane: pretty strong converse below the line `ε + 2δ = 1`,
//! rates up to the classical capacity on and above the circle `ε² + δ² = 1`.

use std::fmt;
use std::io::Write;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Converse,
    NoGo,
    Gap,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Converse => "Converse",
            Region::NoGo => "NoGo",
            Region::Gap => "Gap",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionVerdict {
    pub region: Region,
    /// `ε + 2δ`.
    pub line: f64,
    /// `ε² + δ²`.
    pub circle: f64,
}

/// Points within this distance of a boundary count as lying on it.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Strict inequality puts a point in the converse region, so the line itself
/// is `Gap`; the circle belongs to `NoGo`. Both tests allow
/// [`BOUNDARY_TOL`] of rounding.
pub fn classify_region(eps: f64, delta: f64) -> Result<RegionVerdict, Error> {
    if !(0.0..=1.0).contains(&eps) || !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("(ε, δ) = ({eps}, {delta}) outside [0, 1]²")));
    }
    let line = eps + 2.0 * delta;
    let circle = eps * eps + delta * delta;
    let region = if line < 1.0 - BOUNDARY_TOL {
        Region::Converse
    } else if circle >= 1.0 - BOUNDARY_TOL {
        Region::NoGo
    } else {
        Region::Gap
    };
    Ok(RegionVerdict { region, line, circle })
}

/// Verdicts on the uniform grid `{0, 1/g, …, 1}²`, `ε` varying slowest.
pub fn region_grid(grid: usize) -> Result<Vec<(f64, f64, RegionVerdict)>, Error> {
    if grid == 0 {
        return Err(Error::Domain("grid resolution must be at least 1".into()));
    }
    let mut out = Vec::with_capacity((grid + 1) * (grid + 1));
    for i in 0..=grid {
        for j in 0..=grid {
            let (e, d) = (i as f64 / grid as f64, j as f64 / grid as f64);
            out.push((e, d, classify_region(e, d)?));
        }
    }
    Ok(out)
}

/// Writes `epsilon,delta,region` rows for [`region_grid`].
pub fn emit_region_csv<W: Write>(grid: usize, out: W) -> Result<(), Error> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epsilon", "delta", "region"]).map_err(io)?;
    for (e, d, v) in region_grid(grid)? {
        w.write_record([e.to_string(), d.to_string(), v.region.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}
