//! Scaled-residue p-adic coefficients: `p^v * u` with `u` a unit residue and
//! a tracked number of valid digits. The fast coefficient domain for the
//! verifier; exactness lives in `QuadRat`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::modular::{vp_int, QuadModPk, QuadResidue, ZmodPk};
use super::place::{lift_root_bigint, CoeffSplitting, PlaceContext};
use super::quad::QuadRat;
use super::ExactError;

/// A p-adic number at finite precision.
///
/// `Exact { v, unit, digits }` represents a value congruent to `p^v * unit`
/// modulo `p^(v + digits)` with `unit` a unit of the residue ring; `Bounded`
/// records only a lower bound on the valuation (precision exhausted by
/// cancellation); `Zero` is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicScaled {
    Zero,
    Exact {
        v: i64,
        unit: QuadResidue,
        digits: u32,
    },
    Bounded {
        min_v: i64,
    },
}

impl PadicScaled {
    pub fn is_zero(&self) -> bool {
        matches!(self, PadicScaled::Zero)
    }

    /// Lower bound on the valuation; `None` = +infinity.
    pub fn vp_lower_bound(&self) -> Option<i64> {
        match self {
            PadicScaled::Zero => None,
            PadicScaled::Exact { v, .. } => Some(*v),
            PadicScaled::Bounded { min_v } => Some(*min_v),
        }
    }

    /// Whether the valuation is known exactly (not just bounded below).
    pub fn vp_exact(&self) -> Option<i64> {
        match self {
            PadicScaled::Exact { v, .. } => Some(*v),
            _ => None,
        }
    }
}

/// Coefficient domain `Q_p`-with-precision attached to a place.
///
/// Internally carries `work` digits (the reporting precision `k` plus slack so
/// that intermediate negative valuations do not eat the reported digits).
#[derive(Clone, Debug)]
pub struct PadicDomain {
    pub p: u64,
    /// Reporting precision: "full precision" means >= k valid digits.
    pub k: u32,
    /// Internal digit cap.
    pub work: u32,
    pub ring: QuadModPk,
    mode: CoeffSplitting,
    /// Split mode: the root lifted to p^work.
    root_work: Option<u64>,
    field_s: i64,
    field_t: i64,
}

/// Largest number of digits w such that p^w stays inside the u64 residue
/// budget.
pub fn max_work_digits(p: u64) -> u32 {
    let mut w = 0;
    let mut acc: u128 = 1;
    let budget: u128 = 1 << 62;
    while acc * (p as u128) < budget {
        acc *= p as u128;
        w += 1;
    }
    w
}

impl PadicDomain {
    pub fn from_context(ctx: &PlaceContext, extra_digits: u32) -> Self {
        let cap = max_work_digits(ctx.p);
        assert!(ctx.k <= cap, "p^k exceeds the u64 fast-path budget");
        let work = (ctx.k + extra_digits).min(cap);
        let zp = ZmodPk::new(ctx.p, work);
        let (ring, root_work) = match ctx.splitting {
            CoeffSplitting::Inert => (QuadModPk::new(zp, ctx.field.s, ctx.field.t), None),
            CoeffSplitting::Rational => (QuadModPk::new(zp, 0, 0), None),
            CoeffSplitting::Split { root, .. } => {
                let r = lift_root_bigint(ctx.field.s, ctx.field.t, ctx.p, root, work)
                    .to_u64()
                    .expect("lifted root fits u64");
                (QuadModPk::new(zp, 0, 0), Some(r))
            }
        };
        PadicDomain {
            p: ctx.p,
            k: ctx.k,
            work,
            ring,
            mode: ctx.splitting,
            root_work,
            field_s: ctx.field.s,
            field_t: ctx.field.t,
        }
    }

    fn vp_residue(&self, x: QuadResidue) -> Option<u32> {
        if x.a == 0 && x.b == 0 {
            return None;
        }
        let mut v = 0u32;
        let (mut a, mut b) = (x.a, x.b);
        while v < self.work && a % self.p == 0 && b % self.p == 0 {
            a /= self.p;
            b /= self.p;
            v += 1;
        }
        Some(v)
    }

    fn shift_down(&self, x: QuadResidue, c: u32) -> QuadResidue {
        let mut d = 1u64;
        for _ in 0..c {
            d *= self.p;
        }
        QuadResidue {
            a: x.a / d,
            b: x.b / d,
        }
    }

    pub fn zero(&self) -> PadicScaled {
        PadicScaled::Zero
    }

    pub fn one(&self) -> PadicScaled {
        PadicScaled::Exact {
            v: 0,
            unit: self.ring.one(),
            digits: self.work,
        }
    }

    pub fn from_int(&self, n: i64) -> PadicScaled {
        if n == 0 {
            return PadicScaled::Zero;
        }
        let v = vp_int(&BigInt::from(n), self.p).unwrap();
        let m = n.unsigned_abs() / self.p.pow(v as u32);
        let mut unit = QuadResidue {
            a: m % self.ring.zp.pk,
            b: 0,
        };
        if n < 0 {
            unit = self.ring.neg(unit);
        }
        PadicScaled::Exact {
            v,
            unit,
            digits: self.work,
        }
    }

    /// Embed an exact coefficient, tracking its valuation exactly.
    pub fn inject(&self, x: &QuadRat) -> Result<PadicScaled, ExactError> {
        if x.is_zero() {
            return Ok(PadicScaled::Zero);
        }
        // clear denominators: x = (A + B w)/D
        let da = x.a.denom();
        let db = x.b.denom();
        let d: BigInt = da.lcm(db);
        let big_a = x.a.numer() * (&d / da);
        let big_b = x.b.numer() * (&d / db);
        let vd = vp_int(&d, self.p).expect("nonzero denominator");
        let d_unit = &d / BigInt::from(self.p).pow(vd as u32);

        let (v_num, unit_a, unit_b) = match self.mode {
            CoeffSplitting::Inert => {
                let va = vp_int(&big_a, self.p);
                let vb = vp_int(&big_b, self.p);
                let m = match (va, vb) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!("x != 0"),
                };
                let pm = BigInt::from(self.p).pow(m as u32);
                (m, &big_a / &pm, &big_b / &pm)
            }
            CoeffSplitting::Rational => {
                debug_assert!(big_b.is_zero());
                let va = vp_int(&big_a, self.p).unwrap();
                let pm = BigInt::from(self.p).pow(va as u32);
                (va, &big_a / &pm, BigInt::zero())
            }
            CoeffSplitting::Split { .. } => {
                // valuation of A + B*root, bounded by vp(norm)
                let s = BigInt::from(self.field_s);
                let t = BigInt::from(self.field_t);
                let norm = &big_a * &big_a + &s * &big_a * &big_b - &t * &big_b * &big_b;
                let v_max = vp_int(&norm, self.p).expect("nonzero norm");
                let prec = v_max as u32 + self.work;
                let root = lift_root_bigint(
                    self.field_s,
                    self.field_t,
                    self.p,
                    self.root_work.unwrap(),
                    prec,
                );
                let modulus = BigInt::from(self.p).pow(prec);
                let val = (&big_a + &big_b * &root).mod_floor(&modulus);
                let v = vp_int(&val, self.p).expect("bounded by vp(norm)");
                debug_assert!(v <= v_max);
                let unit = &val / BigInt::from(self.p).pow(v as u32);
                (v, unit, BigInt::zero())
            }
        };

        let zp = &self.ring.zp;
        let mut unit = QuadResidue {
            a: zp.reduce_bigint(&unit_a),
            b: zp.reduce_bigint(&unit_b),
        };
        // divide by the prime-to-p part of the denominator
        let dinv = zp.inv(zp.reduce_bigint(&d_unit))?;
        unit = QuadResidue {
            a: zp.mul(unit.a, dinv),
            b: zp.mul(unit.b, dinv),
        };
        debug_assert!(self.ring.is_unit(unit));
        Ok(PadicScaled::Exact {
            v: v_num - vd,
            unit,
            digits: self.work,
        })
    }

    pub fn add(&self, x: &PadicScaled, y: &PadicScaled) -> PadicScaled {
        use PadicScaled::*;
        match (*x, *y) {
            (Zero, b) => b,
            (a, Zero) => a,
            (Bounded { min_v: m1 }, Bounded { min_v: m2 }) => Bounded { min_v: m1.min(m2) },
            (Bounded { min_v }, Exact { v, unit, digits })
            | (Exact { v, unit, digits }, Bounded { min_v }) => {
                if v < min_v {
                    let d = digits.min((min_v - v) as u32);
                    Exact { v, unit, digits: d }
                } else {
                    Bounded {
                        min_v: min_v.min(v),
                    }
                }
            }
            (
                Exact {
                    v: v1,
                    unit: u1,
                    digits: d1,
                },
                Exact {
                    v: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => {
                let (v1, u1, d1, v2, u2, d2) = if v1 <= v2 {
                    (v1, u1, d1, v2, u2, d2)
                } else {
                    (v2, u2, d2, v1, u1, d1)
                };
                let gap = (v2 - v1) as u32;
                // absolute knowledge: sum is determined mod p^M
                let m_abs = (v1 + d1 as i64).min(v2 + d2 as i64);
                let known = (m_abs - v1) as u32; // >= 1 unless gap >= d1
                if gap >= d1 {
                    return Exact {
                        v: v1,
                        unit: u1,
                        digits: d1,
                    };
                }
                let mut shifted = u2;
                for _ in 0..gap {
                    shifted = QuadResidue {
                        a: self.ring.zp.mul(shifted.a, self.p),
                        b: self.ring.zp.mul(shifted.b, self.p),
                    };
                }
                let sum = self.ring.add(u1, shifted);
                match self.vp_residue(sum) {
                    Some(c) if (c as i64) < known as i64 => {
                        let digits = (known - c).min(self.work - c);
                        Exact {
                            v: v1 + c as i64,
                            unit: self.shift_down(sum, c),
                            digits,
                        }
                    }
                    _ => Bounded { min_v: m_abs },
                }
            }
        }
    }

    pub fn neg(&self, x: &PadicScaled) -> PadicScaled {
        match *x {
            PadicScaled::Exact { v, unit, digits } => PadicScaled::Exact {
                v,
                unit: self.ring.neg(unit),
                digits,
            },
            other => other,
        }
    }

    pub fn sub(&self, x: &PadicScaled, y: &PadicScaled) -> PadicScaled {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &PadicScaled, y: &PadicScaled) -> PadicScaled {
        use PadicScaled::*;
        match (*x, *y) {
            (Zero, _) | (_, Zero) => Zero,
            (Bounded { min_v: m1 }, Bounded { min_v: m2 }) => Bounded { min_v: m1 + m2 },
            (Bounded { min_v }, Exact { v, .. }) | (Exact { v, .. }, Bounded { min_v }) => {
                Bounded { min_v: min_v + v }
            }
            (
                Exact {
                    v: v1,
                    unit: u1,
                    digits: d1,
                },
                Exact {
                    v: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => Exact {
                v: v1 + v2,
                unit: self.ring.mul(u1, u2),
                digits: d1.min(d2),
            },
        }
    }

    pub fn inv(&self, x: &PadicScaled) -> Result<PadicScaled, ExactError> {
        match *x {
            PadicScaled::Exact { v, unit, digits } => Ok(PadicScaled::Exact {
                v: -v,
                unit: self.ring.inv(unit)?,
                digits,
            }),
            PadicScaled::Zero => Err(ExactError::DivisionByZero),
            PadicScaled::Bounded { .. } => Err(ExactError::PrecisionExhausted),
        }
    }

    pub fn mul_int(&self, x: &PadicScaled, n: i64) -> PadicScaled {
        if n == 0 {
            return PadicScaled::Zero;
        }
        self.mul(x, &self.from_int(n))
    }

    /// Division by a nonzero integer is exact: the valuation shifts.
    pub fn div_int(&self, x: &PadicScaled, n: i64) -> Result<PadicScaled, ExactError> {
        if n == 0 {
            return Err(ExactError::DivisionByZero);
        }
        let inv = self.inv(&self.from_int(n))?;
        Ok(self.mul(x, &inv))
    }

    /// Coefficient-wise Frobenius: conjugation in the inert case, identity
    /// otherwise.
    pub fn frobenius(&self, x: &PadicScaled) -> PadicScaled {
        match (self.mode, *x) {
            (CoeffSplitting::Inert, PadicScaled::Exact { v, unit, digits }) => PadicScaled::Exact {
                v,
                unit: self.ring.conj(unit),
                digits,
            },
            (_, other) => other,
        }
    }

    /// True when the element carries at least the reporting precision.
    pub fn full_precision(&self, x: &PadicScaled) -> bool {
        match *x {
            PadicScaled::Zero => true,
            PadicScaled::Exact { digits, .. } => digits >= self.k,
            PadicScaled::Bounded { .. } => false,
        }
    }

    /// Residue of a p-integral element modulo p^j (j <= work, v + digits >= j).
    pub fn residue_mod(&self, x: &PadicScaled, j: u32) -> Result<QuadResidue, ExactError> {
        let pj = ZmodPk::new(self.p, j);
        match *x {
            PadicScaled::Zero => Ok(QuadResidue { a: 0, b: 0 }),
            PadicScaled::Bounded { min_v } if min_v >= j as i64 => Ok(QuadResidue { a: 0, b: 0 }),
            PadicScaled::Bounded { .. } => Err(ExactError::PrecisionExhausted),
            PadicScaled::Exact { v, unit, digits } => {
                if v < 0 {
                    return Err(ExactError::NotIntegral);
                }
                if v >= j as i64 {
                    return Ok(QuadResidue { a: 0, b: 0 });
                }
                if v + (digits as i64) < j as i64 {
                    return Err(ExactError::PrecisionExhausted);
                }
                let mut scale = 1u64;
                for _ in 0..v {
                    scale *= self.p;
                }
                Ok(QuadResidue {
                    a: pj.mul(unit.a % pj.pk, scale % pj.pk),
                    b: pj.mul(unit.b % pj.pk, scale % pj.pk),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::quad::QuadField;

    fn dom(p: u64, k: u32, extra: u32) -> PadicDomain {
        let ctx = PlaceContext::new(QuadField::golden(), -15, 1, p, k, 0).unwrap();
        PadicDomain::from_context(&ctx, extra)
    }

    #[test]
    fn inject_tracks_valuation() {
        let d = dom(7, 3, 2);
        let f = QuadField::golden();
        let x = f.from_rat(47, 7);
        match d.inject(&x).unwrap() {
            PadicScaled::Exact { v, digits, .. } => {
                assert_eq!(v, -1);
                assert_eq!(digits, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(d.inject(&f.zero()).unwrap(), PadicScaled::Zero);
        let y = f.elem(7, 14);
        assert_eq!(d.inject(&y).unwrap().vp_exact(), Some(1));
    }

    #[test]
    fn addition_cancellation_loses_digits() {
        let d = dom(7, 3, 0);
        let f = QuadField::golden();
        let x = d.inject(&f.from_int(1)).unwrap();
        let y = d.inject(&f.from_int(48)).unwrap(); // 1 + 48 = 49 = 7^2
        let s = d.add(&x, &y);
        match s {
            PadicScaled::Exact { v, digits, unit } => {
                assert_eq!(v, 2);
                assert_eq!(digits, 1);
                assert_eq!(unit.a % 7, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        // complete cancellation at working precision: only a bound remains
        let z = d.inject(&f.from_int(342)).unwrap(); // 343 = 7^3 = full work precision
        let s2 = d.add(&x, &z);
        assert_eq!(s2, PadicScaled::Bounded { min_v: 3 });
    }

    #[test]
    fn high_valuation_addend_is_invisible() {
        let d = dom(7, 3, 0);
        let f = QuadField::golden();
        let x = d.inject(&f.from_int(5)).unwrap();
        let y = d.inject(&f.from_int(7i64.pow(5))).unwrap();
        assert_eq!(d.add(&x, &y), x);
    }

    #[test]
    fn mul_and_div_are_exact_in_scale() {
        let d = dom(7, 3, 1);
        let f = QuadField::golden();
        let x = d.inject(&f.elem(3, 5)).unwrap();
        let y = d.div_int(&x, 49).unwrap();
        assert_eq!(y.vp_exact(), Some(-2));
        let z = d.mul_int(&y, 49);
        assert_eq!(z, x);
        // agreement with exact arithmetic mod 7^4
        let prod = d.mul(&x, &x);
        let exact = &f.elem(3, 5) * &f.elem(3, 5);
        let expect = d.inject(&exact).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn split_injection_uses_chosen_root() {
        let d = dom(11, 2, 1);
        let f = QuadField::golden();
        // w - 4 has valuation 1 at the place with root 4 mod 11
        let x = f.elem(-4, 1);
        let e = d.inject(&x).unwrap();
        assert_eq!(e.vp_exact(), Some(1));
        // and w itself is a unit there
        assert_eq!(d.inject(&f.w()).unwrap().vp_exact(), Some(0));
    }

    #[test]
    fn residue_extraction() {
        let d = dom(7, 2, 1);
        let f = QuadField::golden();
        let x = d.inject(&f.from_int(47)).unwrap();
        let r = d.residue_mod(&x, 2).unwrap();
        assert_eq!((r.a, r.b), (47, 0));
        let y = d.inject(&f.from_rat(1, 7)).unwrap();
        assert!(d.residue_mod(&y, 2).is_err());
    }
}
