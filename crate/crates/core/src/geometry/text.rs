//! Plain-text persistence for [`StarSetApprox`].
//!
//! ```text
//! c_0,...,c_{d-1},d,L,side
//! l_0,...,l_{d-1},r
//! ...
//! ```
//!
//! The first line holds the center components followed by the dimension,
//! the Lipschitz constant and the side; each following line is one radial
//! sample.

use std::fmt::Write;

use nalgebra::DVector;

use super::star::{RadialSample, Side, StarSetApprox};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub(crate) fn fmt_scalar<T: Real>(x: T) -> String {
    format!("{}", x.as_f64())
}

pub(crate) fn parse_scalar<T: Real>(s: &str, line: usize) -> Result<T> {
    s.trim()
        .parse::<f64>()
        .map(T::lit)
        .map_err(|e| Error::parse(line, format!("invalid number {:?}: {e}", s.trim())))
}

pub fn write_star_set<T: Real>(set: &StarSetApprox<T>) -> String {
    let mut out = String::new();
    let center: Vec<String> = set.center().iter().map(|&x| fmt_scalar(x)).collect();
    let _ = writeln!(
        out,
        "{},{},{},{}",
        center.join(","),
        set.dim(),
        fmt_scalar(set.lipschitz()),
        set.side().as_str()
    );
    for s in set.samples() {
        let dir: Vec<String> = s.direction.iter().map(|&x| fmt_scalar(x)).collect();
        let _ = writeln!(out, "{},{}", dir.join(","), fmt_scalar(s.radius));
    }
    out
}

/// Parses a star set from `lines`, where `first_line` is the 1-based line
/// number of the header (used in error messages).
pub fn parse_star_set<T: Real>(lines: &[&str], first_line: usize) -> Result<StarSetApprox<T>> {
    let header = lines
        .first()
        .ok_or_else(|| Error::parse(first_line, "missing star-set header"))?;
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() < 4 {
        return Err(Error::parse(first_line, "star-set header needs center,dim,L,side"));
    }
    let n = fields.len();
    let side: Side = fields[n - 1]
        .parse()
        .map_err(|e: Error| Error::parse(first_line, e.to_string()))?;
    let lipschitz: T = parse_scalar(fields[n - 2], first_line)?;
    let dim: usize = fields[n - 3]
        .trim()
        .parse()
        .map_err(|_| Error::parse(first_line, "invalid star-set dimension"))?;
    if dim != n - 3 {
        return Err(Error::parse(
            first_line,
            format!("center has {} components but dimension is {dim}", n - 3),
        ));
    }
    let center = fields[..dim]
        .iter()
        .map(|f| parse_scalar::<T>(f, first_line))
        .collect::<Result<Vec<_>>>()?;
    let mut set = StarSetApprox::new(DVector::from_vec(center), lipschitz, side)
        .map_err(|e| Error::parse(first_line, e.to_string()))?;
    for (k, row) in lines[1..].iter().enumerate() {
        let line = first_line + 1 + k;
        let vals = row
            .split(',')
            .map(|f| parse_scalar::<T>(f, line))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != dim + 1 {
            return Err(Error::parse(line, format!("expected {} fields", dim + 1)));
        }
        let sample = RadialSample::new(DVector::from_row_slice(&vals[..dim]), vals[dim])
            .map_err(|e| Error::parse(line, e.to_string()))?;
        set.insert(sample).map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(set)
}
