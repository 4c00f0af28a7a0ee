//! Value parsers for numeric flags.

use num_rational::Ratio;

/// A decimal or a simple fraction `a/b` of decimals.
pub fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if b == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            a / b
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// An exact ratio `p/q` of non-negative integers; decimals are refused.
pub fn ratio(s: &str) -> Result<Ratio<u64>, String> {
    let (p, q) = s
        .trim()
        .split_once('/')
        .ok_or_else(|| format!("expected p/q with integers, got {s:?}"))?;
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in {s:?}"))?;
    if q == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(p, q))
}
