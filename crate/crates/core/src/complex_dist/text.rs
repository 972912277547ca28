//! Plain-text distribution files: one atom per line as `re im prob`,
//! whitespace separated, with `#` starting a comment.

use std::fmt;
use std::str::FromStr;

use super::{ComplexValue, FiniteDistribution};
use crate::{Error, Result};

impl FromStr for FiniteDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected `re im prob`, found {} fields", fields.len()),
                });
            }
            let mut vals = [0.0; 3];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse().map_err(|e| Error::Parse { line: i + 1, msg: format!("{f:?}: {e}") })?;
            }
            atoms.push((ComplexValue::new(vals[0], vals[1]), vals[2]));
        }
        FiniteDistribution::new(atoms)
    }
}

impl fmt::Display for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# re im prob")?;
        for a in self.atoms() {
            writeln!(f, "{:?} {:?} {:?}", a.point.re, a.point.im, a.prob)?;
        }
        Ok(())
    }
}
