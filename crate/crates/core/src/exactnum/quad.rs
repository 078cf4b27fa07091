//! Elements `a + b*w` of a real quadratic field `Q(w)` with `w^2 = s*w + t`,
//! over arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Description of the coefficient field: the minimal polynomial `w^2 = s*w + t`.
///
/// `s = t = 0` is the degenerate "rational coefficients" mode, in which every
/// element is expected to have `b = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    pub s: i64,
    pub t: i64,
}

impl QuadField {
    pub fn new(s: i64, t: i64) -> Result<Self, ExactError> {
        let f = QuadField { s, t };
        if s == 0 && t == 0 {
            return Ok(f);
        }
        let disc = f.disc();
        if disc <= 0 {
            return Err(ExactError::BadField(format!(
                "discriminant s^2 + 4t = {disc} is not positive"
            )));
        }
        let r = (disc as f64).sqrt() as i64;
        for c in r.saturating_sub(2)..=r + 2 {
            if c * c == disc {
                return Err(ExactError::BadField(format!(
                    "discriminant {disc} is a perfect square; field is not quadratic"
                )));
            }
        }
        Ok(f)
    }

    /// The field `Q(w)` with `w^2 = w + 1`, i.e. `w = (1 + sqrt(5))/2`.
    pub fn golden() -> Self {
        QuadField { s: 1, t: 1 }
    }

    /// Degenerate mode: plain rational coefficients.
    pub fn rational() -> Self {
        QuadField { s: 0, t: 0 }
    }

    pub fn is_rational(&self) -> bool {
        self.s == 0 && self.t == 0
    }

    /// Discriminant of the minimal polynomial, `s^2 + 4t`.
    pub fn disc(&self) -> i64 {
        self.s * self.s + 4 * self.t
    }

    /// The two real roots of `x^2 - s*x - t`, index 0 the smaller one.
    pub fn real_roots(&self) -> (f64, f64) {
        let d = (self.disc() as f64).sqrt();
        let s = self.s as f64;
        ((s - d) / 2.0, (s + d) / 2.0)
    }

    pub fn zero(&self) -> QuadRat {
        QuadRat {
            a: BigRational::zero(),
            b: BigRational::zero(),
            field: *self,
        }
    }

    pub fn one(&self) -> QuadRat {
        QuadRat {
            a: BigRational::one(),
            b: BigRational::zero(),
            field: *self,
        }
    }

    pub fn from_int(&self, n: i64) -> QuadRat {
        QuadRat {
            a: BigRational::from_integer(BigInt::from(n)),
            b: BigRational::zero(),
            field: *self,
        }
    }

    pub fn from_rat(&self, num: i64, den: i64) -> QuadRat {
        QuadRat {
            a: BigRational::new(BigInt::from(num), BigInt::from(den)),
            b: BigRational::zero(),
            field: *self,
        }
    }

    /// `a + b*w` from integer coordinates.
    pub fn elem(&self, a: i64, b: i64) -> QuadRat {
        QuadRat {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
            field: *self,
        }
    }

    /// `a + b*w` from rational coordinates.
    pub fn elem_rat(&self, a: BigRational, b: BigRational) -> QuadRat {
        QuadRat { a, b, field: *self }
    }

    pub fn w(&self) -> QuadRat {
        QuadRat {
            a: BigRational::zero(),
            b: BigRational::one(),
            field: *self,
        }
    }
}

/// `a + b*w` with rational coordinates, stored reduced (num-rational keeps
/// lowest terms and positive denominators).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
    pub field: QuadField,
}

impl QuadRat {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Galois conjugate: `a + b*w  |->  (a + s*b) - b*w`.
    pub fn conj(&self) -> QuadRat {
        let s = BigRational::from_integer(BigInt::from(self.field.s));
        QuadRat {
            a: &self.a + &(&s * &self.b),
            b: -self.b.clone(),
            field: self.field,
        }
    }

    /// Field norm `x * conj(x) = a^2 + s*a*b - t*b^2`, a rational number.
    pub fn norm(&self) -> BigRational {
        let s = BigRational::from_integer(BigInt::from(self.field.s));
        let t = BigRational::from_integer(BigInt::from(self.field.t));
        &self.a * &self.a + &s * &self.a * &self.b - &t * &self.b * &self.b
    }

    /// Trace `x + conj(x) = 2a + s*b`.
    pub fn trace(&self) -> BigRational {
        let s = BigRational::from_integer(BigInt::from(self.field.s));
        BigRational::from_integer(BigInt::from(2)) * &self.a + s * &self.b
    }

    pub fn inv(&self) -> Result<QuadRat, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let c = self.conj();
        Ok(QuadRat {
            a: &c.a / &n,
            b: &c.b / &n,
            field: self.field,
        })
    }

    pub fn mul_rat(&self, r: &BigRational) -> QuadRat {
        QuadRat {
            a: &self.a * r,
            b: &self.b * r,
            field: self.field,
        }
    }

    pub fn mul_int(&self, n: i64) -> QuadRat {
        self.mul_rat(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn div_int(&self, n: i64) -> Result<QuadRat, ExactError> {
        if n == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.mul_rat(&BigRational::new(BigInt::one(), BigInt::from(n))))
    }

    /// Evaluate at a real embedding of `w`.
    pub fn embed_real(&self, w_real: f64) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * w_real
    }

    /// Parse the wire syntax used by the CLI and fixtures, e.g.
    /// `"13/2 + 21/2*w"`, `"-711 - 2301/2*w"`, `"w"`, `"0"`.
    pub fn parse(input: &str, field: QuadField) -> Result<QuadRat, ExactError> {
        parse_quadrat(input, field)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    // Good enough for the double-precision analytic module: exact when the
    // parts fit in i64/u64, falls back to a string round-trip otherwise.
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
        _ => f64::NAN,
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_rat(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
            if r.denom().is_one() {
                write!(f, "{}", r.numer())
            } else {
                write!(f, "{}/{}", r.numer(), r.denom())
            }
        }
        fn write_w_part(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
            if r.is_one() {
                write!(f, "w")
            } else {
                write_rat(f, r)?;
                write!(f, "*w")
            }
        }
        if self.b.is_zero() {
            return write_rat(f, &self.a);
        }
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-")?;
                return write_w_part(f, &-self.b.clone());
            }
            return write_w_part(f, &self.b);
        }
        write_rat(f, &self.a)?;
        if self.b.is_negative() {
            write!(f, " - ")?;
            write_w_part(f, &-self.b.clone())
        } else {
            write!(f, " + ")?;
            write_w_part(f, &self.b)
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(tok: &str) -> Result<BigRational, ExactError> {
    let tok = tok.trim();
    let bad = || ExactError::Parse(format!("bad rational `{tok}`"));
    if let Some((n, d)) = tok.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = tok.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

fn parse_quadrat(input: &str, field: QuadField) -> Result<QuadRat, ExactError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ExactError::Parse("empty element".into()));
    }
    // Split into signed terms.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, c) in compact.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 && !cur.ends_with('/') && !cur.ends_with('*') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);

    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for term in &terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        let is_w = body == "w";
        let (coeff, w_part) = if is_w {
            (BigRational::one(), true)
        } else if let Some(c) = body.strip_suffix("*w") {
            (parse_rational(c)?, true)
        } else if let Some(c) = body.strip_suffix('w') {
            // tolerate "21/2w"
            (parse_rational(c)?, true)
        } else {
            (parse_rational(body)?, false)
        };
        let coeff = if sign < 0 { -coeff } else { coeff };
        if w_part {
            b += coeff;
        } else {
            a += coeff;
        }
    }
    if field.is_rational() && !b.is_zero() {
        return Err(ExactError::Parse(
            "w-term not allowed with rational coefficient field".into(),
        ));
    }
    Ok(QuadRat { a, b, field })
}

macro_rules! check_same_field {
    ($x:expr, $y:expr) => {
        assert_eq!($x.field, $y.field, "quadratic field mismatch in arithmetic");
    };
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        check_same_field!(self, rhs);
        QuadRat {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            field: self.field,
        }
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        check_same_field!(self, rhs);
        QuadRat {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            field: self.field,
        }
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        check_same_field!(self, rhs);
        // (a1 + b1 w)(a2 + b2 w) = a1 a2 + t b1 b2 + (a1 b2 + a2 b1 + s b1 b2) w
        let bb = &self.b * &rhs.b;
        let s = BigRational::from_integer(BigInt::from(self.field.s));
        let t = BigRational::from_integer(BigInt::from(self.field.t));
        QuadRat {
            a: &self.a * &rhs.a + t * &bb,
            b: &self.a * &rhs.b + &self.b * &rhs.a + s * &bb,
            field: self.field,
        }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            a: -self.a.clone(),
            b: -self.b.clone(),
            field: self.field,
        }
    }
}

impl Div for &QuadRat {
    type Output = QuadRat;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is mul by inverse
    fn div(self, rhs: &QuadRat) -> QuadRat {
        let inv = rhs.inv().expect("division by zero QuadRat");
        self * &inv
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> QuadField {
        QuadField::golden()
    }

    #[test]
    fn field_validation() {
        assert!(QuadField::new(1, 1).is_ok());
        assert!(QuadField::new(0, 0).is_ok());
        // disc = 4: perfect square
        assert!(QuadField::new(0, 1).is_err());
        // disc = -4: imaginary
        assert!(QuadField::new(0, -1).is_err());
    }

    #[test]
    fn conj_and_norm() {
        let x = f().elem(7110, 11505);
        let c = x.conj();
        assert_eq!(c, f().elem(7110 + 11505, -11505));
        // norm(x * y) = norm(x) * norm(y)
        let y = f().elem_rat(
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
            BigRational::new(BigInt::from(5), BigInt::from(7)),
        );
        assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn golden_frobenius_coefficient() {
        // conj(-94485/4 - 38220 w) = -247365/4 + 38220 w
        let x = f().elem_rat(
            BigRational::new(BigInt::from(-94485), BigInt::from(4)),
            BigRational::from_integer(BigInt::from(-38220)),
        );
        let expect = f().elem_rat(
            BigRational::new(BigInt::from(-247365), BigInt::from(4)),
            BigRational::from_integer(BigInt::from(38220)),
        );
        assert_eq!(x.conj(), expect);
    }

    #[test]
    fn inverse() {
        let x = f().elem(3, -2);
        let i = x.inv().unwrap();
        assert!((&x * &i).is_one());
        assert!(f().zero().inv().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "13/2 + 21/2*w",
            "-711 - 2301/2*w",
            "-247365/4 + 38220*w",
            "47",
            "0",
            "w",
            "-w",
            "3 - w",
        ] {
            let x = QuadRat::parse(s, f()).unwrap();
            assert_eq!(x.to_string(), s, "canonical form differs");
            let y = QuadRat::parse(&x.to_string(), f()).unwrap();
            assert_eq!(x, y);
        }
        // non-canonical inputs normalize
        let x = QuadRat::parse("11505w + 7110", f()).unwrap();
        assert_eq!(x, f().elem(7110, 11505));
        assert_eq!(x.to_string(), "7110 + 11505*w");
    }
}
