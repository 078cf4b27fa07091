//! Textual serialization of series: one `(exponent, coefficient)` pair per
//! line, coefficients in the `a/b + c/d*w` wire syntax.

use super::{Domain, QuadDomain, TruncatedSeries};
use crate::exactnum::{ExactError, QuadField, QuadRat};

pub fn format_series(s: &TruncatedSeries<QuadDomain>) -> String {
    let mut out = String::new();
    for (e, c) in s.iter_nonzero() {
        out.push_str(&format!("({e}, {c})\n"));
    }
    out
}

/// Parse the output of [`format_series`] back into a series with the given
/// precision.
pub fn parse_series(
    input: &str,
    field: QuadField,
    prec: i64,
) -> Result<TruncatedSeries<QuadDomain>, ExactError> {
    let domain = QuadDomain::new(field);
    let mut pairs: Vec<(i64, QuadRat)> = Vec::new();
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let inner = line
            .strip_prefix('(')
            .and_then(|l| l.strip_suffix(')'))
            .ok_or_else(|| ExactError::Parse(format!("expected (exp, coeff), got `{line}`")))?;
        let (e, c) = inner
            .split_once(',')
            .ok_or_else(|| ExactError::Parse(format!("missing comma in `{line}`")))?;
        let e: i64 = e
            .trim()
            .parse()
            .map_err(|_| ExactError::Parse(format!("bad exponent `{e}`")))?;
        pairs.push((e, QuadRat::parse(c, field)?));
    }
    let val = pairs.iter().map(|(e, _)| *e).min().unwrap_or(prec);
    let len = ((prec - val).max(0)) as usize;
    let mut coeffs = vec![domain.zero(); len];
    for (e, c) in pairs {
        let idx = (e - val) as usize;
        if idx < coeffs.len() {
            coeffs[idx] = c;
        }
    }
    Ok(TruncatedSeries::from_coeffs(domain, val, coeffs, prec))
}
