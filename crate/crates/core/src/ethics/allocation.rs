use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite, nonempty distribution of lifetime well-being.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    levels: Vec<f64>,
}

impl Allocation {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyAllocation);
        }
        if let Some(&bad) = levels.iter().find(|v| !v.is_finite()) {
            return Err(Error::param(
                "level",
                bad,
                "well-being levels must be finite",
            ));
        }
        Ok(Self { levels })
    }

    /// `n` people at the same `level`.
    pub fn egalitarian(level: f64, n: usize) -> Result<Self> {
        Self::new(vec![level; n])
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Non-decreasing reordering.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.levels.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min(&self) -> f64 {
        self.levels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.levels
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// This allocation with one more person at `level`.
    pub fn with(&self, level: f64) -> Self {
        let mut levels = self.levels.clone();
        levels.push(level);
        Self { levels }
    }

    /// Concatenation of two populations.
    pub fn join(&self, other: &Allocation) -> Self {
        let mut levels = self.levels.clone();
        levels.extend_from_slice(&other.levels);
        Self { levels }
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.levels.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Allocation {
    type Err = Error;

    /// Comma-separated levels, e.g. `0.6,1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: f64 = part.parse().map_err(|_| Error::Criterion {
                spec: s.to_string(),
                reason: format!("`{part}` is not a number"),
            })?;
            levels.push(v);
        }
        Self::new(levels)
    }
}
