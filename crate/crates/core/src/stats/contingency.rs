use serde::{Deserialize, Serialize};

use super::{chi2_2x2, Correction};
use crate::{Error, Result};

/// Before/after counts against their complements, with the test result.
///
/// Rows are periods: `[[a, b], [c, d]]` where `a`/`c` are the counts of
/// interest and `b`/`d` the complements within each period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contingency2x2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub correction: Correction,
    pub statistic: f64,
    pub p_value: f64,
    pub share_before: f64,
    pub share_after: f64,
    /// `share_after / share_before`; `None` when the before count is zero.
    pub share_ratio: Option<f64>,
}

impl Contingency2x2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64, correction: Correction) -> Result<Self> {
        if a + b == 0 || c + d == 0 {
            return Err(Error::Invalid(format!(
                "contingency rows must be non-empty: [[{a}, {b}], [{c}, {d}]]"
            )));
        }
        let test = chi2_2x2(a, b, c, d, correction);
        let share_before = a as f64 / (a + b) as f64;
        let share_after = c as f64 / (c + d) as f64;
        Ok(Self {
            a,
            b,
            c,
            d,
            correction,
            statistic: test.statistic,
            p_value: test.p_value,
            share_before,
            share_after,
            share_ratio: (a > 0).then(|| share_after / share_before),
        })
    }

    /// From counts and their per-period totals.
    pub fn from_totals(
        count_before: u64,
        total_before: u64,
        count_after: u64,
        total_after: u64,
        correction: Correction,
    ) -> Result<Self> {
        if count_before > total_before || count_after > total_after {
            return Err(Error::Invalid(format!(
                "count exceeds total: {count_before}/{total_before}, {count_after}/{total_after}"
            )));
        }
        Self::new(
            count_before,
            total_before - count_before,
            count_after,
            total_after - count_after,
            correction,
        )
    }

    pub fn total_before(&self) -> u64 {
        self.a + self.b
    }

    pub fn total_after(&self) -> u64 {
        self.c + self.d
    }

    pub fn is_significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// A keyed row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison<K> {
    pub key: K,
    pub table: Contingency2x2,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warning_share_ratio() {
        let t = Contingency2x2::from_totals(37, 48_972, 845, 371_183, Correction::Yates).unwrap();
        assert!((t.share_ratio.unwrap() - 3.013).abs() < 0.001);
        assert_eq!((t.b, t.d), (48_935, 370_338));
    }

    #[test]
    fn zero_before_has_no_ratio() {
        let t = Contingency2x2::from_totals(0, 5730, 3, 43_390, Correction::Yates).unwrap();
        assert_eq!(t.share_ratio, None);
        assert_eq!(t.p_value, 1.0);
    }

    #[test]
    fn invalid_tables() {
        assert!(Contingency2x2::new(0, 0, 1, 1, Correction::Yates).is_err());
        assert!(Contingency2x2::from_totals(5, 4, 1, 1, Correction::Yates).is_err());
    }
}
