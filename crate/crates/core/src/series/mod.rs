//! Truncated Laurent/power series over a pluggable coefficient domain, with
//! composition, reversion, differentiation, formal integration, and the
//! quotient-integrality check used by the verifier.

pub mod domain;
pub mod honda;
pub mod text;


pub use domain::{Domain, QuadDomain};
pub use honda::{honda_quotient_check, HondaOutcome};

use crate::exactnum::ExactError;

/// Sentinel precision for exactly-known (polynomial/constant) series.
pub const PREC_INF: i64 = i64::MAX / 4;

fn sat(x: i64) -> i64 {
    x.min(PREC_INF)
}

/// Shift a precision by k, preserving the infinite sentinel.
fn add_prec(p: i64, k: i64) -> i64 {
    if p >= PREC_INF {
        PREC_INF
    } else {
        sat(p.saturating_add(k))
    }
}

/// Errors from series operations.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesError {
    Exact(ExactError),
    /// Division/inversion requires an invertible leading coefficient.
    NonUnitLeading,
    /// compose(f, g) requires val(g) >= 1 and g nonzero.
    ComposeValuation(i64),
    /// Formal integration of a u^{-1} term.
    IntegrateU1,
    /// revert requires val(f) = 1 with unit leading coefficient.
    RevertShape,
}

impl From<ExactError> for SeriesError {
    fn from(e: ExactError) -> Self {
        SeriesError::Exact(e)
    }
}

impl std::fmt::Display for SeriesError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesError::Exact(e) => write!(f, "{e}"),
            SeriesError::NonUnitLeading => write!(f, "leading coefficient is not invertible"),
            SeriesError::ComposeValuation(v) => {
                write!(f, "composition argument must have valuation >= 1, got {v}")
            }
            SeriesError::IntegrateU1 => write!(f, "cannot integrate a u^-1 term"),
            SeriesError::RevertShape => {
                write!(
                    f,
                    "reversion requires valuation 1 and unit leading coefficient"
                )
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// A Laurent series with finite principal part: dense coefficients from `val`
/// upward, known modulo `O(u^prec)`. The stored polynomial *is* the series;
/// exponents between the stored range and `prec` are exact zeros.
#[derive(Clone)]
pub struct TruncatedSeries<D: Domain> {
    pub domain: D,
    val: i64,
    coeffs: Vec<D::Elem>,
    prec: i64,
}

impl<D: Domain> TruncatedSeries<D> {
    pub fn zero(domain: D, prec: i64) -> Self {
        TruncatedSeries {
            domain,
            val: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// Exact scalar as a series (infinite precision).
    pub fn constant(domain: D, c: D::Elem) -> Self {
        Self::from_coeffs(domain, 0, vec![c], PREC_INF)
    }

    pub fn monomial(domain: D, c: D::Elem, exp: i64, prec: i64) -> Self {
        Self::from_coeffs(domain, exp, vec![c], prec)
    }

    /// The identity series `u`.
    pub fn identity(domain: D, prec: i64) -> Self {
        let one = domain.one();
        Self::monomial(domain, one, 1, prec)
    }

    /// Build from dense coefficients starting at exponent `val`; trims leading
    /// zeros and anything at or beyond `prec`.
    pub fn from_coeffs(domain: D, val: i64, coeffs: Vec<D::Elem>, prec: i64) -> Self {
        let mut s = TruncatedSeries {
            domain,
            val,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.val + self.coeffs.len() as i64 > self.prec {
            let keep = (self.prec - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !self.domain.is_zero(c));
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
        }
        // drop trailing zeros (they are implicit)
        while let Some(last) = self.coeffs.last() {
            if self.domain.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest nonzero exponent (equals `prec` for the zero series).
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient at exponent `e`.
    ///
    /// Panics if `e >= prec` (the coefficient is not determined).
    pub fn coeff(&self, e: i64) -> D::Elem {
        assert!(
            e < self.prec,
            "coefficient u^{e} is beyond precision O(u^{})",
            self.prec
        );
        if e < self.val || e >= self.val + self.coeffs.len() as i64 {
            self.domain.zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    /// Iterate stored `(exponent, coefficient)` pairs, zeros skipped.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i64, &D::Elem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.domain.is_zero(c))
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Restrict to a lower precision.
    pub fn truncate(&self, new_prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(new_prec);
        s.normalize();
        s
    }

    /// Assert knowledge up to `prec` (used by Newton iterations where the
    /// candidate is made correct by the next step).
    pub(crate) fn with_prec_unchecked(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = prec;
        s.normalize();
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.truncate(prec);
        }
        if other.is_zero() {
            return self.truncate(prec);
        }
        let val = self.val.min(other.val);
        let top = (self.val + self.coeffs.len() as i64)
            .max(other.val + other.coeffs.len() as i64)
            .min(prec);
        let len = (top - val).max(0) as usize;
        let mut coeffs = Vec::with_capacity(len);
        for e in val..top {
            let a = if e >= self.val && e < self.val + self.coeffs.len() as i64 {
                Some(&self.coeffs[(e - self.val) as usize])
            } else {
                None
            };
            let b = if e >= other.val && e < other.val + other.coeffs.len() as i64 {
                Some(&other.coeffs[(e - other.val) as usize])
            } else {
                None
            };
            coeffs.push(match (a, b) {
                (Some(a), Some(b)) => self.domain.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => self.domain.zero(),
            });
        }
        Self::from_coeffs(self.domain.clone(), val, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.domain.neg(c)).collect();
        TruncatedSeries {
            domain: self.domain.clone(),
            val: self.val,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &D::Elem) -> Self {
        if self.domain.is_zero(c) {
            return Self::zero(self.domain.clone(), self.prec);
        }
        let coeffs = self.coeffs.iter().map(|x| self.domain.mul(x, c)).collect();
        Self::from_coeffs(self.domain.clone(), self.val, coeffs, self.prec)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero(self.domain.clone(), self.prec);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| self.domain.mul_int(x, n))
            .collect();
        Self::from_coeffs(self.domain.clone(), self.val, coeffs, self.prec)
    }

    pub fn div_int(&self, n: i64) -> Result<Self, SeriesError> {
        let coeffs: Result<Vec<_>, _> = self
            .coeffs
            .iter()
            .map(|x| self.domain.div_int(x, n))
            .collect();
        Ok(Self::from_coeffs(
            self.domain.clone(),
            self.val,
            coeffs?,
            self.prec,
        ))
    }

    /// Shift exponents by `k` (multiply by u^k); precision shifts with it.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.val = if s.val >= PREC_INF { s.val } else { s.val + k };
        s.prec = add_prec(s.prec, k);
        s.val = s.val.min(s.prec);
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        // error terms: O(u^{pa}) * b = O(u^{pa + vb}) and symmetrically
        let prec = add_prec(self.prec, other.val).min(add_prec(other.prec, self.val));
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.domain.clone(), prec);
        }
        let val = self.val + other.val;
        let out_len =
            ((prec - val).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let coeffs = self.domain.convolve(&self.coeffs, &other.coeffs, out_len);
        Self::from_coeffs(self.domain.clone(), val, coeffs, prec)
    }

    /// Multiplicative inverse; requires an invertible leading coefficient.
    /// Relative precision is preserved: prec(f^-1) = prec(f) - 2 val(f).
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::NonUnitLeading);
        }
        let lead_inv = self.domain.inv(&self.coeffs[0]).map_err(|e| match e {
            ExactError::PrecisionExhausted => SeriesError::Exact(e),
            _ => SeriesError::NonUnitLeading,
        })?;
        let rel = if self.prec >= PREC_INF {
            PREC_INF
        } else {
            self.prec - self.val
        };
        // h = f / (lead * u^val) = 1 + x, invert by Newton: y <- y(2 - h y)
        let h =
            Self::from_coeffs(self.domain.clone(), 0, self.coeffs.clone(), rel).scale(&lead_inv);
        let mut y = Self::constant(self.domain.clone(), self.domain.one()).truncate(1);
        let mut cur: i64 = 1;
        let two = Self::constant(self.domain.clone(), self.domain.from_int(2));
        while cur < rel {
            cur = sat(cur * 2).min(rel);
            let yc = y.with_prec_unchecked(cur);
            let hy = h.truncate(cur).mul(&yc);
            y = yc.mul(&two.sub(&hy)).truncate(cur);
        }
        // f^-1 = lead_inv * u^{-val} * y
        let out_prec = if self.prec >= PREC_INF {
            PREC_INF
        } else {
            self.prec - 2 * self.val
        };
        Ok(y.scale(&lead_inv).shift(-self.val).truncate(out_prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power (n >= 0) by repeated squaring.
    pub fn pow(&self, n: u64) -> Self {
        if n == 0 {
            return Self::constant(self.domain.clone(), self.domain.one());
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    /// Formal derivative.
    pub fn derive(&self) -> Self {
        let prec = add_prec(self.prec, -1);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| self.domain.mul_int(c, self.val + i as i64))
            .collect();
        Self::from_coeffs(self.domain.clone(), self.val - 1, coeffs, prec)
    }

    /// Formal integral with zero constant term; rejects a u^{-1} term.
    pub fn integrate(&self) -> Result<Self, SeriesError> {
        let prec = add_prec(self.prec, 1);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e == -1 {
                if self.domain.is_zero(c) {
                    coeffs.push(self.domain.zero());
                    continue;
                }
                return Err(SeriesError::IntegrateU1);
            }
            coeffs.push(self.domain.div_int(c, e + 1)?);
        }
        Ok(Self::from_coeffs(
            self.domain.clone(),
            self.val + 1,
            coeffs,
            prec,
        ))
    }

    /// Substitute `u -> u^m` (exponent dilation), m >= 1.
    pub fn substitute_power(&self, m: u64) -> Self {
        let m = m as i64;
        assert!(m >= 1);
        let prec = sat(self.prec.saturating_mul(m));
        if self.is_zero() {
            return Self::zero(self.domain.clone(), prec);
        }
        let len = (self.coeffs.len() - 1) * m as usize + 1;
        let mut coeffs = vec![self.domain.zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c.clone();
        }
        Self::from_coeffs(self.domain.clone(), self.val * m, coeffs, prec)
    }

    /// Coefficient-wise application of the domain's automorphism.
    pub fn conjugate(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.domain.conj(c)).collect();
        Self::from_coeffs(self.domain.clone(), self.val, coeffs, self.prec)
    }

    pub fn map_coeffs<F: Fn(&D::Elem) -> D::Elem>(&self, f: F) -> Self {
        let coeffs = self.coeffs.iter().map(&f).collect();
        Self::from_coeffs(self.domain.clone(), self.val, coeffs, self.prec)
    }

    /// Composition `f(g(u))`; requires `val(g) >= 1`. Principal-part terms of
    /// `f` are evaluated through the series inverse of `g`.
    ///
    /// Implemented as Horner over the coefficients of `f`, with the common
    /// exponent stride of `f` factored out so that parity-sparse series cost a
    /// fraction of the dense count.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        let f = self;
        if g.is_zero() || g.val < 1 {
            return Err(SeriesError::ComposeValuation(if g.is_zero() {
                g.prec
            } else {
                g.val
            }));
        }
        let vg = g.val;
        // precision: truncating f costs O(g^{prec_f}); perturbing g costs
        // O(u^{(val_f - 1) vg + prec_g}) through the lowest term of f.
        let prec_from_f = sat(f.prec.saturating_mul(vg));
        let prec_from_g = if g.prec >= PREC_INF {
            PREC_INF
        } else {
            sat((f.val - 1).saturating_mul(vg).saturating_add(g.prec))
        };
        let out_prec = prec_from_f.min(prec_from_g);
        if f.is_zero() {
            return Ok(Self::zero(f.domain.clone(), out_prec));
        }

        // exponent stride of f's support
        let mut stride: i64 = 0;
        let mut last: Option<i64> = None;
        for (e, _) in f.iter_nonzero() {
            if let Some(prev) = last {
                stride = num_integer::gcd(stride, e - prev);
            }
            last = Some(e);
        }
        let stride = if stride <= 0 { 1 } else { stride };

        let gs = if stride == 1 {
            g.clone()
        } else {
            g.pow(stride as u64)
        };

        // Horner over h_m = f_{val + m*stride}, highest first
        let m_count = (self.coeffs.len() as i64 + stride - 1) / stride;
        let mut acc = Self::zero(f.domain.clone(), PREC_INF);
        for m in (0..m_count).rev() {
            let c = f.coeffs[(m * stride) as usize].clone();
            acc = acc.mul(&gs);
            if !f.domain.is_zero(&c) {
                acc = acc.add(&Self::constant(f.domain.clone(), c));
            }
        }
        // multiply by g^{val}
        let result = if f.val == 0 {
            acc
        } else if f.val > 0 {
            acc.mul(&g.pow(f.val as u64))
        } else {
            acc.mul(&g.inverse()?.pow((-f.val) as u64))
        };
        Ok(result.truncate(out_prec))
    }

    /// Compositional inverse: `g` with `f(g(u)) = u + O(u^prec)`.
    /// Requires `val(f) = 1` with a unit leading coefficient.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        let f = self;
        if f.is_zero() || f.val != 1 {
            return Err(SeriesError::RevertShape);
        }
        let lead_inv = f
            .domain
            .inv(&f.coeffs[0])
            .map_err(|_| SeriesError::RevertShape)?;
        let target = f.prec;
        let mut g = Self::monomial(f.domain.clone(), lead_inv, 1, 2);
        let mut cur: i64 = 2;
        if target <= cur {
            return Ok(g.truncate(target));
        }
        loop {
            cur = sat(cur * 2).min(target);
            let gc = g.with_prec_unchecked(cur);
            // Newton: g <- g - (f(g) - u) / f'(g), with f'(g) recovered from
            // the chain rule (f'(g) = (f o g)' / g') to avoid a second
            // composition per step.
            let fg = f.truncate(cur).compose(&gc)?;
            let num = fg.sub(&Self::identity(f.domain.clone(), cur));
            if num.is_zero() {
                g = gc;
            } else {
                let den = fg.derive().div(&gc.derive())?;
                let delta = num.div(&den)?;
                g = gc.sub(&delta);
            }
            if cur >= target {
                break;
            }
        }
        Ok(g.truncate(target))
    }
}

impl<D: Domain> PartialEq for TruncatedSeries<D> {
    /// Semantic equality: same precision and identical coefficients on the
    /// whole determined range.
    fn eq(&self, other: &Self) -> bool {
        if self.prec != other.prec || self.val != other.val {
            return false;
        }
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        self.coeffs == other.coeffs
    }
}

impl<D: Domain> std::fmt::Debug for TruncatedSeries<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if self.domain.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})*u^{}", self.val + e as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec >= PREC_INF {
            Ok(())
        } else {
            write!(f, " + O(u^{})", self.prec)
        }
    }
}

/// Series-of-series coefficient domain: bivariate series at small precision,
/// as a series in the outer variable whose coefficients are series in the
/// inner one.
#[derive(Clone)]
pub struct SeriesDomain<D: Domain> {
    pub inner: D,
    pub prec: i64,
}

impl<D: Domain> SeriesDomain<D> {
    pub fn new(inner: D, prec: i64) -> Self {
        SeriesDomain { inner, prec }
    }
}

impl<D: Domain> Domain for SeriesDomain<D> {
    type Elem = TruncatedSeries<D>;

    fn zero(&self) -> Self::Elem {
        TruncatedSeries::zero(self.inner.clone(), self.prec)
    }
    fn one(&self) -> Self::Elem {
        TruncatedSeries::constant(self.inner.clone(), self.inner.one()).truncate(self.prec)
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        TruncatedSeries::constant(self.inner.clone(), self.inner.from_int(n)).truncate(self.prec)
    }
    fn inject(&self, x: &crate::exactnum::QuadRat) -> Result<Self::Elem, ExactError> {
        Ok(
            TruncatedSeries::constant(self.inner.clone(), self.inner.inject(x)?)
                .truncate(self.prec),
        )
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.sub(b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b)
    }
    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        a.scale_int(n)
    }
    fn div_int(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem, ExactError> {
        a.div_int(n).map_err(|_| ExactError::DivisionByZero)
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ExactError> {
        a.inverse()
            .map_err(|_| ExactError::NotAUnit("series".into()))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn conj(&self, a: &Self::Elem) -> Self::Elem {
        a.conjugate()
    }
}
