//! Constructive searches for the Repugnant and Very Sadistic Conclusions.

use crate::error::{Error, Result};

use super::allocation::Allocation;
use super::criterion::{criterion_value, Ordering, WelfareCriterion};

/// `n` lives at `epsilon` ranked strictly above `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepugnantWitness {
    pub n: usize,
    pub epsilon: f64,
    pub base_value: f64,
    pub clones_value: f64,
}

/// Smallest `n <= n_max` such that `n` copies of `epsilon` beat `base`.
pub fn repugnant_witness(
    crit: &WelfareCriterion,
    base: &Allocation,
    epsilon: f64,
    n_max: usize,
) -> Result<Option<RepugnantWitness>> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param("epsilon", epsilon, "must be > 0"));
    }
    if base.min() <= epsilon {
        return Err(Error::param(
            "base",
            base.min(),
            "every base level must exceed epsilon",
        ));
    }
    let base_value = criterion_value(base, crit)?;
    for n in 1..=n_max {
        let clones_value = crit.egalitarian_value(epsilon, n);
        if Ordering::of_values(clones_value, base_value) == Ordering::StrictlyBetter {
            return Ok(Some(RepugnantWitness {
                n,
                epsilon,
                base_value,
                clones_value,
            }));
        }
    }
    Ok(None)
}

/// Positive egalitarian levels tried, in order.
pub const POSITIVE_LEVELS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
/// Negative levels tried for the all-negative allocation, in order.
pub const NEGATIVE_LEVELS: [f64; 4] = [-1.0, -2.0, -5.0, -10.0];

/// An all-positive egalitarian allocation ranked below an all-negative one.
#[derive(Debug, Clone, PartialEq)]
pub struct VerySadisticWitness {
    pub positive: Allocation,
    pub negative: Allocation,
    pub positive_value: f64,
    pub negative_value: f64,
}

/// Scans `(p)_n` for `n = 1..=n_max` over [`POSITIVE_LEVELS`] against
/// `(q)_m` for `m = 1..=n_max` over [`NEGATIVE_LEVELS`]; first hit wins.
pub fn very_sadistic_witness(
    crit: &WelfareCriterion,
    n_max: usize,
) -> Result<Option<VerySadisticWitness>> {
    if n_max == 0 {
        return Err(Error::param("n_max", 0.0, "must be >= 1"));
    }
    crit.validate()?;
    for n in 1..=n_max {
        for &p in &POSITIVE_LEVELS {
            let positive_value = crit.egalitarian_value(p, n);
            for m in 1..=n_max {
                for &q in &NEGATIVE_LEVELS {
                    let negative_value = crit.egalitarian_value(q, m);
                    if Ordering::of_values(positive_value, negative_value)
                        == Ordering::StrictlyWorse
                    {
                        let positive = Allocation::egalitarian(p, n)?;
                        let negative = Allocation::egalitarian(q, m)?;
                        return Ok(Some(VerySadisticWitness {
                            positive_value: criterion_value(&positive, crit)?,
                            negative_value: criterion_value(&negative, crit)?,
                            positive,
                            negative,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Allocation {
        Allocation::new(vec![100.0]).unwrap()
    }

    #[test]
    fn tu_repugnant_at_1001() {
        let w = repugnant_witness(&WelfareCriterion::tu(), &base(), 0.1, 100_000)
            .unwrap()
            .unwrap();
        assert_eq!(w.n, 1001);
        let clones = Allocation::egalitarian(0.1, 1001).unwrap();
        assert!((criterion_value(&clones, &WelfareCriterion::tu()).unwrap() - 100.1).abs() < 1e-9);
    }

    #[test]
    fn positive_critical_level_blocks_repugnance() {
        let clu = WelfareCriterion::clu(2.0).unwrap();
        assert!(repugnant_witness(&clu, &base(), 0.1, 10_000)
            .unwrap()
            .is_none());
        let rd = WelfareCriterion::rdclu(0.9, 1.0).unwrap();
        assert!(repugnant_witness(&rd, &base(), 0.5, 100_000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn invalid_epsilon_rejected() {
        let tu = WelfareCriterion::tu();
        assert!(repugnant_witness(&tu, &base(), 0.0, 10).is_err());
        assert!(repugnant_witness(&tu, &base(), -1.0, 10).is_err());
        assert!(repugnant_witness(&tu, &base(), 150.0, 10).is_err());
    }

    #[test]
    fn clu_very_sadistic_five_halves() {
        let w = very_sadistic_witness(&WelfareCriterion::clu(1.0).unwrap(), 50)
            .unwrap()
            .unwrap();
        assert_eq!(w.positive, Allocation::egalitarian(0.5, 5).unwrap());
        assert_eq!(w.negative, Allocation::new(vec![-1.0]).unwrap());
        assert_eq!((w.positive_value, w.negative_value), (-2.5, -2.0));
    }

    #[test]
    fn sum_and_average_avoid_very_sadistic() {
        assert!(very_sadistic_witness(&WelfareCriterion::tu(), 50)
            .unwrap()
            .is_none());
        assert!(very_sadistic_witness(&WelfareCriterion::au(), 50)
            .unwrap()
            .is_none());
        assert!(very_sadistic_witness(&WelfareCriterion::tu(), 0).is_err());
    }
}
