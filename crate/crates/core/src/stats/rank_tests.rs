//! Two-sample location tests for mention counts.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::erfc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sided Mann–Whitney U with tie correction and continuity correction
/// (normal approximation). The statistic is U for `x`.
///
/// Returns `None` when either sample is empty.
pub fn mann_whitney_u(x: &[f64], y: &[f64]) -> Option<TestResult> {
    let (n1, n2) = (x.len(), y.len());
    if n1 == 0 || n2 == 0 {
        return None;
    }
    let mut all: Vec<(f64, bool)> = x.iter().map(|&v| (v, true)).chain(y.iter().map(|&v| (v, false))).collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = all.len();
    let mut rank_sum_x = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && all[j].0 == all[i].0 {
            j += 1;
        }
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        rank_sum_x += avg_rank * all[i..j].iter().filter(|(_, from_x)| *from_x).count() as f64;
        i = j;
    }

    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let u = rank_sum_x - n1f * (n1f + 1.0) / 2.0;
    let mu = n1f * n2f / 2.0;
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    let p_value = if var <= 0.0 {
        1.0
    } else {
        let z = ((u - mu).abs() - 0.5).max(0.0) / var.sqrt();
        erfc(z / std::f64::consts::SQRT_2).min(1.0)
    };
    Some(TestResult { statistic: u, p_value })
}

/// Two-sided Welch's t-test.
///
/// Returns `None` with fewer than two observations per sample or when both
/// samples have zero variance.
pub fn welch_t(x: &[f64], y: &[f64]) -> Option<TestResult> {
    if x.len() < 2 || y.len() < 2 {
        return None;
    }
    let (m1, v1) = mean_var(x);
    let (m2, v2) = mean_var(y);
    let (a, b) = (v1 / x.len() as f64, v2 / y.len() as f64);
    let se2 = a + b;
    if se2 <= 0.0 {
        return None;
    }
    let t = (m1 - m2) / se2.sqrt();
    let df = se2 * se2 / (a * a / (x.len() - 1) as f64 + b * b / (y.len() - 1) as f64);
    let dist = StudentsT::new(0.0, 1.0, df).ok()?;
    let p_value = (2.0 * dist.sf(t.abs())).min(1.0);
    Some(TestResult { statistic: t, p_value })
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        ((a - b) / b).abs() < tol
    }

    const X: [f64; 8] = [1.0, 2.0, 2.0, 3.0, 5.0, 8.0, 8.0, 9.0];
    const Y: [f64; 10] = [2.0, 4.0, 4.0, 6.0, 7.0, 9.0, 11.0, 12.0, 12.0, 15.0];

    // References from scipy.stats (asymptotic Mann–Whitney with continuity
    // correction; ttest_ind with equal_var=False).
    #[test]
    fn mann_whitney_matches_reference() {
        let r = mann_whitney_u(&X, &Y).unwrap();
        assert_eq!(r.statistic, 20.5);
        assert!(close(r.p_value, 0.09003624262850646, 1e-10));

        let r = mann_whitney_u(&[1.0, 1.0, 1.0, 2.0], &[1.0, 1.0, 3.0, 3.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 5.0);
        assert!(close(r.p_value, 0.21780875354798301, 1e-10));
    }

    #[test]
    fn welch_matches_reference() {
        let r = welch_t(&X, &Y).unwrap();
        assert!(close(r.statistic, -1.961188763137398, 1e-12));
        assert!(close(r.p_value, 0.06754563968758472, 1e-8));

        let r = welch_t(&[1.0, 1.0, 1.0, 2.0], &[1.0, 1.0, 3.0, 3.0, 3.0]).unwrap();
        assert!(close(r.statistic, -1.7272727272727275, 1e-12));
        assert!(close(r.p_value, 0.1363252774193789, 1e-8));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(mann_whitney_u(&[], &[1.0]).is_none());
        assert!(welch_t(&[1.0], &[1.0, 2.0]).is_none());
        assert!(welch_t(&[2.0, 2.0], &[2.0, 2.0]).is_none());
        assert_eq!(mann_whitney_u(&[3.0, 3.0], &[3.0]).unwrap().p_value, 1.0);
    }
}
