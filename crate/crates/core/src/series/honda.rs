//! Quotient-integrality check: if A = B mod p (coefficient-wise, integral
//! series), then (A^n - B^n)/n must again be divisible by p for every n.

use super::{Domain, TruncatedSeries};

/// Outcome of the check proper (preconditions are reported separately).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HondaOutcome {
    Ok,
    /// `(A^n - B^n)/n` has a coefficient of valuation < 1.
    Violation {
        n: u64,
        exponent: i64,
        valuation: i64,
    },
}

/// Precondition violations, reported distinctly from a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HondaPrecondition {
    NotIntegral { which: &'static str, exponent: i64 },
    NotCongruentModP { exponent: i64 },
    ValuationUndetermined { exponent: i64 },
}

/// Check `(A^n - B^n)/n` is p-integral times p for all `1 <= n <= n_max`.
///
/// `vp` reports the valuation of a coefficient (`None` = +infinity); `vp_n`
/// the p-part of an integer. Both series must be integral and congruent mod p.
pub fn honda_quotient_check<D: Domain>(
    a: &TruncatedSeries<D>,
    b: &TruncatedSeries<D>,
    p: u64,
    vp: impl Fn(&D::Elem) -> Option<i64>,
    n_max: u64,
) -> Result<HondaOutcome, HondaPrecondition> {
    let check_integral = |s: &TruncatedSeries<D>, which: &'static str| {
        for (e, c) in s.iter_nonzero() {
            if vp(c).unwrap_or(i64::MAX) < 0 {
                return Err(HondaPrecondition::NotIntegral { which, exponent: e });
            }
        }
        Ok(())
    };
    check_integral(a, "A")?;
    check_integral(b, "B")?;
    let diff = a.sub(b);
    for (e, c) in diff.iter_nonzero() {
        if vp(c).unwrap_or(i64::MAX) < 1 {
            return Err(HondaPrecondition::NotCongruentModP { exponent: e });
        }
    }

    let vp_int = |mut n: u64| -> i64 {
        let mut v = 0;
        while n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        v
    };

    let mut an = a.clone();
    let mut bn = b.clone();
    for n in 1..=n_max {
        if n > 1 {
            an = an.mul(a);
            bn = bn.mul(b);
        }
        let d = an.sub(&bn);
        let vn = vp_int(n);
        for (e, c) in d.iter_nonzero() {
            if let Some(v) = vp(c) {
                if v - vn < 1 {
                    return Ok(HondaOutcome::Violation {
                        n,
                        exponent: e,
                        valuation: v - vn,
                    });
                }
            }
        }
    }
    Ok(HondaOutcome::Ok)
}
