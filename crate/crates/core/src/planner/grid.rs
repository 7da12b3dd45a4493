use std::io::Write;

use crate::error::{Error, Result};
use crate::output::decimal;

/// Rectangular grid on `[0, 1]^2` in `(S, I)` plus the control discretization.
///
/// The rectangle covers the simplex `S + I <= 1`; nodes outside the simplex
/// are solved too but never exported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub n_s: usize,
    pub n_i: usize,
    pub n_l: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_s: 300,
            n_i: 300,
            n_l: 51,
        }
    }
}

impl GridSpec {
    pub fn new(n_s: usize, n_i: usize, n_l: usize) -> Result<Self> {
        let grid = Self { n_s, n_i, n_l };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_s < 3 {
            return Err(Error::param("n_s", self.n_s as f64, "must be >= 3"));
        }
        if self.n_i < 3 {
            return Err(Error::param("n_i", self.n_i as f64, "must be >= 3"));
        }
        if self.n_l < 2 {
            return Err(Error::param("n_l", self.n_l as f64, "must be >= 2"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_s * self.n_i
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ds(&self) -> f64 {
        1.0 / (self.n_s - 1) as f64
    }

    pub fn di(&self) -> f64 {
        1.0 / (self.n_i - 1) as f64
    }

    #[inline]
    pub fn s_at(&self, is: usize) -> f64 {
        is as f64 / (self.n_s - 1) as f64
    }

    #[inline]
    pub fn i_at(&self, ii: usize) -> f64 {
        ii as f64 / (self.n_i - 1) as f64
    }

    /// Row-major index: rows are S values, I varies fastest.
    #[inline]
    pub fn index(&self, is: usize, ii: usize) -> usize {
        is * self.n_i + ii
    }

    pub fn in_simplex(&self, is: usize, ii: usize) -> bool {
        self.s_at(is) + self.i_at(ii) <= 1.0 + 1e-12
    }

    /// Evenly spaced control candidates on `[0, l_bar]`.
    pub fn controls(&self, l_bar: f64) -> Vec<f64> {
        let last = (self.n_l - 1) as f64;
        (0..self.n_l)
            .map(|k| {
                if k + 1 == self.n_l {
                    l_bar
                } else {
                    l_bar * k as f64 / last
                }
            })
            .collect()
    }

    /// Bilinear weights of `(s, i)` clamped to the unit square.
    fn locate(&self, s: f64, i: f64) -> (usize, usize, f64, f64) {
        let fs = (s.clamp(0.0, 1.0) * (self.n_s - 1) as f64).min((self.n_s - 1) as f64);
        let fi = (i.clamp(0.0, 1.0) * (self.n_i - 1) as f64).min((self.n_i - 1) as f64);
        let is = (fs.floor() as usize).min(self.n_s - 2);
        let ii = (fi.floor() as usize).min(self.n_i - 2);
        (is, ii, fs - is as f64, fi - ii as f64)
    }

    pub(crate) fn bilinear(&self, data: &[f64], s: f64, i: f64) -> f64 {
        let (is, ii, ws, wi) = self.locate(s, i);
        let v00 = data[self.index(is, ii)];
        let v01 = data[self.index(is, ii + 1)];
        let v10 = data[self.index(is + 1, ii)];
        let v11 = data[self.index(is + 1, ii + 1)];
        (1.0 - ws) * ((1.0 - wi) * v00 + wi * v01) + ws * ((1.0 - wi) * v10 + wi * v11)
    }
}

/// Planner value `V(S, I)` in output units on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValueField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ValueField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    #[inline]
    pub fn at(&self, is: usize, ii: usize) -> f64 {
        self.values[self.grid.index(is, ii)]
    }

    pub fn interpolate(&self, s: f64, i: f64) -> f64 {
        self.grid.bilinear(&self.values, s, i)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Lockdown fraction per grid node, each entry in `[0, l_bar]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyField {
    pub grid: GridSpec,
    pub l_bar: f64,
    pub lockdown: Vec<f64>,
}

impl PolicyField {
    pub fn constant(grid: GridSpec, l_bar: f64, level: f64) -> Result<Self> {
        if !(0.0..=l_bar).contains(&level) {
            return Err(Error::OutOfDomain {
                what: "lockdown",
                value: level,
                lo: 0.0,
                hi: l_bar,
            });
        }
        Ok(Self {
            grid,
            l_bar,
            lockdown: vec![level; grid.len()],
        })
    }

    #[inline]
    pub fn at(&self, is: usize, ii: usize) -> f64 {
        self.lockdown[self.grid.index(is, ii)]
    }

    /// Bilinear lookup clamped to `[0, l_bar]`.
    pub fn interpolate(&self, s: f64, i: f64) -> f64 {
        self.grid
            .bilinear(&self.lockdown, s, i)
            .clamp(0.0, self.l_bar)
    }

    /// Largest absolute node-wise difference; both fields must share a grid.
    pub fn sup_diff(&self, other: &PolicyField) -> Option<f64> {
        (self.grid == other.grid).then(|| {
            self.lockdown
                .iter()
                .zip(&other.lockdown)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
        })
    }

    pub fn max(&self) -> f64 {
        self.lockdown.iter().copied().fold(0.0, f64::max)
    }
}

/// `S,I,V,L` rows over the simplex nodes, row-major.
pub fn write_fields_csv<W: Write>(
    mut out: W,
    value: &ValueField,
    policy: &PolicyField,
) -> std::io::Result<()> {
    let grid = value.grid;
    writeln!(out, "S,I,V,L")?;
    for is in 0..grid.n_s {
        for ii in 0..grid.n_i {
            if !grid.in_simplex(is, ii) {
                continue;
            }
            writeln!(
                out,
                "{},{},{},{}",
                decimal(grid.s_at(is)),
                decimal(grid.i_at(ii)),
                decimal(value.at(is, ii)),
                decimal(policy.at(is, ii))
            )?;
        }
    }
    Ok(())
}

/// `S,I,L` rows over the simplex nodes, row-major.
pub fn write_policy_csv<W: Write>(mut out: W, policy: &PolicyField) -> std::io::Result<()> {
    let grid = policy.grid;
    writeln!(out, "S,I,L")?;
    for is in 0..grid.n_s {
        for ii in 0..grid.n_i {
            if grid.in_simplex(is, ii) {
                writeln!(
                    out,
                    "{},{},{}",
                    decimal(grid.s_at(is)),
                    decimal(grid.i_at(ii)),
                    decimal(policy.at(is, ii))
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(2, 3, 2).is_err());
        assert!(GridSpec::new(3, 2, 2).is_err());
        assert!(GridSpec::new(3, 3, 1).is_err());
        assert!(GridSpec::new(3, 3, 2).is_ok());
    }

    #[test]
    fn controls_span_cap_exactly() {
        let g = GridSpec::new(3, 3, 5).unwrap();
        let c = g.controls(0.7);
        assert_eq!(c.first(), Some(&0.0));
        assert_eq!(c.last(), Some(&0.7));
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn bilinear_reproduces_affine_functions() {
        let g = GridSpec::new(5, 7, 2).unwrap();
        let mut v = ValueField::zeros(g);
        for is in 0..g.n_s {
            for ii in 0..g.n_i {
                let idx = g.index(is, ii);
                v.values[idx] = 2.0 * g.s_at(is) - 3.0 * g.i_at(ii) + 1.0;
            }
        }
        for (s, i) in [(0.0, 0.0), (0.33, 0.71), (1.0, 1.0), (0.98, 0.02)] {
            let exact = 2.0 * s - 3.0 * i + 1.0;
            assert!((v.interpolate(s, i) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn policy_constant_rejects_out_of_cap() {
        let g = GridSpec::new(3, 3, 2).unwrap();
        assert!(PolicyField::constant(g, 0.7, 0.8).is_err());
        let p = PolicyField::constant(g, 0.7, 0.7).unwrap();
        assert_eq!(p.interpolate(0.5, 0.5), 0.7);
    }

    #[test]
    fn csv_exports_simplex_only() {
        let g = GridSpec::new(3, 3, 2).unwrap();
        let v = ValueField::zeros(g);
        let p = PolicyField::constant(g, 0.7, 0.0).unwrap();
        let mut buf = Vec::new();
        write_fields_csv(&mut buf, &v, &p).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("S,I,V,L\n"));
        // 6 of the 9 nodes satisfy S + I <= 1
        assert_eq!(text.lines().count(), 1 + 6);
    }
}
