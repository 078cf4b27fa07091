//! Pluggable coefficient domains for truncated series: exact quadratic-field
//! rationals and the scaled p-adic fast domain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exactnum::{ExactError, PadicDomain, PadicScaled, QuadField, QuadRat};

/// Ring operations a coefficient domain must provide to the series engine.
///
/// Operations are methods of the domain object (not the element) so that the
/// residue/field context does not have to live inside every coefficient.
// `from_int` takes &self: elements only make sense relative to a domain
// object carrying the field/residue context.
#[allow(clippy::wrong_self_convention)]
pub trait Domain: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Embed an exact coefficient.
    fn inject(&self, x: &QuadRat) -> Result<Self::Elem, ExactError>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem;
    fn div_int(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem, ExactError>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ExactError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// The nontrivial automorphism of the coefficient field where it exists
    /// (identity for rational mode and for a split completion).
    fn conj(&self, a: &Self::Elem) -> Self::Elem;

    /// Truncated convolution: `out[k] = sum_{i+j=k} a[i] * b[j]` for
    /// `k < out_len`. Domains may override with a faster kernel.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], out_len: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); out_len];
        for (i, ai) in a.iter().enumerate() {
            if i >= out_len {
                break;
            }
            if self.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let k = i + j;
                if k >= out_len {
                    break;
                }
                if self.is_zero(bj) {
                    continue;
                }
                out[k] = self.add(&out[k], &self.mul(ai, bj));
            }
        }
        out
    }
}

/// The exact domain: `QuadRat` coefficients over a fixed quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadDomain {
    pub field: QuadField,
}

impl QuadDomain {
    pub fn new(field: QuadField) -> Self {
        QuadDomain { field }
    }
}

impl Domain for QuadDomain {
    type Elem = QuadRat;

    fn zero(&self) -> QuadRat {
        self.field.zero()
    }
    fn one(&self) -> QuadRat {
        self.field.one()
    }
    fn from_int(&self, n: i64) -> QuadRat {
        self.field.from_int(n)
    }
    fn inject(&self, x: &QuadRat) -> Result<QuadRat, ExactError> {
        if x.field != self.field {
            return Err(ExactError::BadField("coefficient field mismatch".into()));
        }
        Ok(x.clone())
    }
    fn add(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a + b
    }
    fn sub(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a - b
    }
    fn neg(&self, a: &QuadRat) -> QuadRat {
        -a
    }
    fn mul(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a * b
    }
    fn mul_int(&self, a: &QuadRat, n: i64) -> QuadRat {
        a.mul_int(n)
    }
    fn div_int(&self, a: &QuadRat, n: i64) -> Result<QuadRat, ExactError> {
        a.div_int(n)
    }
    fn inv(&self, a: &QuadRat) -> Result<QuadRat, ExactError> {
        a.inv()
    }
    fn is_zero(&self, a: &QuadRat) -> bool {
        a.is_zero()
    }
    fn conj(&self, a: &QuadRat) -> QuadRat {
        a.conj()
    }

    /// Cleared-denominator convolution: pull a common denominator out of each
    /// operand, convolve integer coordinate pairs (no gcd work in the inner
    /// loop), reduce once per output coefficient.
    fn convolve(&self, a: &[QuadRat], b: &[QuadRat], out_len: usize) -> Vec<QuadRat> {
        if out_len == 0 {
            return Vec::new();
        }
        let (ai, da) = clear_denominators(a);
        let (bi, db) = clear_denominators(b);
        let dd = &da * &db;
        let s = BigInt::from(self.field.s);
        let t = BigInt::from(self.field.t);

        let compute = |k: usize| -> QuadRat {
            let mut acc_a = BigInt::zero();
            let mut acc_b = BigInt::zero();
            let lo = k.saturating_sub(bi.len() - 1);
            let hi = k.min(ai.len() - 1);
            for i in lo..=hi {
                let (xa, xb) = &ai[i];
                if xa.is_zero() && xb.is_zero() {
                    continue;
                }
                let (ya, yb) = &bi[k - i];
                if ya.is_zero() && yb.is_zero() {
                    continue;
                }
                // (xa + xb w)(ya + yb w) = xa ya + t xb yb + (xa yb + xb ya + s xb yb) w
                let bb = xb * yb;
                acc_a += xa * ya + &t * &bb;
                acc_b += xa * yb + xb * ya + &s * &bb;
            }
            self.field.elem_rat(
                BigRational::new(acc_a, dd.clone()),
                BigRational::new(acc_b, dd.clone()),
            )
        };

        if out_len >= 64 {
            (0..out_len).into_par_iter().map(compute).collect()
        } else {
            (0..out_len).map(compute).collect()
        }
    }
}

fn clear_denominators(xs: &[QuadRat]) -> (Vec<(BigInt, BigInt)>, BigInt) {
    let mut den = BigInt::one();
    for x in xs {
        den = den.lcm(x.a.denom());
        den = den.lcm(x.b.denom());
    }
    let ints = xs
        .iter()
        .map(|x| {
            (
                x.a.numer() * (&den / x.a.denom()),
                x.b.numer() * (&den / x.b.denom()),
            )
        })
        .collect();
    (ints, den)
}

impl Domain for PadicDomain {
    type Elem = PadicScaled;

    fn zero(&self) -> PadicScaled {
        PadicDomain::zero(self)
    }
    fn one(&self) -> PadicScaled {
        PadicDomain::one(self)
    }
    fn from_int(&self, n: i64) -> PadicScaled {
        PadicDomain::from_int(self, n)
    }
    fn inject(&self, x: &QuadRat) -> Result<PadicScaled, ExactError> {
        PadicDomain::inject(self, x)
    }
    fn add(&self, a: &PadicScaled, b: &PadicScaled) -> PadicScaled {
        PadicDomain::add(self, a, b)
    }
    fn sub(&self, a: &PadicScaled, b: &PadicScaled) -> PadicScaled {
        PadicDomain::sub(self, a, b)
    }
    fn neg(&self, a: &PadicScaled) -> PadicScaled {
        PadicDomain::neg(self, a)
    }
    fn mul(&self, a: &PadicScaled, b: &PadicScaled) -> PadicScaled {
        PadicDomain::mul(self, a, b)
    }
    fn mul_int(&self, a: &PadicScaled, n: i64) -> PadicScaled {
        PadicDomain::mul_int(self, a, n)
    }
    fn div_int(&self, a: &PadicScaled, n: i64) -> Result<PadicScaled, ExactError> {
        PadicDomain::div_int(self, a, n)
    }
    fn inv(&self, a: &PadicScaled) -> Result<PadicScaled, ExactError> {
        PadicDomain::inv(self, a)
    }
    fn is_zero(&self, a: &PadicScaled) -> bool {
        a.is_zero()
    }
    fn conj(&self, a: &PadicScaled) -> PadicScaled {
        self.frobenius(a)
    }
}
