/// Six significant digits in scientific notation.
pub fn fmt_p(p: f64) -> String {
    format!("{p:.5e}")
}

pub fn fmt_share(x: f64) -> String {
    format!("{x:.4}")
}

pub fn fmt_pct(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

pub fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".to_string(), |r| format!("{r:.4}"))
}

pub fn fmt_stat(x: f64) -> String {
    format!("{x:.4}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_p(3.422595364737251e-20), "3.42260e-20");
        assert_eq!(fmt_p(1.0), "1.00000e0");
        assert_eq!(fmt_share(0.0175815), "0.0176");
        assert_eq!(fmt_pct(0.0175815), "1.76%");
        assert_eq!(fmt_ratio(None), "n/a");
    }
}
