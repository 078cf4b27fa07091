//! Local data at a rational prime p: splitting of the coefficient field,
//! the Frobenius action, exact p-adic valuations, and residue reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::kronecker::kronecker;
use super::modular::{hensel_lift_root, vp_int, QuadModPk, QuadResidue, ZmodPk};
use super::quad::{QuadField, QuadRat};
use super::ExactError;

/// How the coefficient field behaves at p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffSplitting {
    /// Degenerate rational coefficient field.
    Rational,
    /// chi_coeff = +1: two places; a chosen Hensel-lifted root of
    /// `x^2 - s x - t` identifies the completion with `Z_p`.
    Split { index: u8, root: u64, other: u64 },
    /// chi_coeff = -1: one place, completion `Z_p[w]`, nontrivial Frobenius.
    Inert,
}

/// All local context at a prime: splitting data in K (via chi_K) and in the
/// coefficient field, the chosen place, and the working precision.
#[derive(Clone, Debug)]
pub struct PlaceContext {
    pub p: u64,
    pub k: u32,
    pub field: QuadField,
    /// Kronecker(d_K * f^2, p) for the CM field K.
    pub chi_k: i32,
    /// Kronecker(disc(coefficient field), p); +1 in rational mode.
    pub chi_coeff: i32,
    pub splitting: CoeffSplitting,
    pub frobenius_nontrivial: bool,
}

impl PlaceContext {
    /// Build the context for a good odd prime. `place_index` selects the place
    /// when the coefficient field splits (0 = root with the smaller least
    /// nonnegative residue mod p); it is ignored otherwise.
    pub fn new(
        field: QuadField,
        d_k: i64,
        conductor: i64,
        p: u64,
        k: u32,
        place_index: u8,
    ) -> Result<Self, ExactError> {
        if p <= 3 || !super::modular::is_prime(p) {
            return Err(ExactError::BadPrime(format!("p = {p} must be a prime > 3")));
        }
        let chi_k = kronecker(d_k * conductor * conductor, p);
        if field.is_rational() {
            return Ok(PlaceContext {
                p,
                k,
                field,
                chi_k,
                chi_coeff: 1,
                splitting: CoeffSplitting::Rational,
                frobenius_nontrivial: false,
            });
        }
        let chi_coeff = kronecker(field.disc(), p);
        match chi_coeff {
            0 => Err(ExactError::Ramified(p)),
            -1 => Ok(PlaceContext {
                p,
                k,
                field,
                chi_k,
                chi_coeff,
                splitting: CoeffSplitting::Inert,
                frobenius_nontrivial: true,
            }),
            _ => {
                let (r1, r2) = hensel_lift_root(field.s, field.t, p, k)?;
                // index 0 = smaller least nonnegative residue mod p
                let (lo, hi) = if r1 % p < r2 % p { (r1, r2) } else { (r2, r1) };
                let (root, other) = if place_index == 0 { (lo, hi) } else { (hi, lo) };
                Ok(PlaceContext {
                    p,
                    k,
                    field,
                    chi_k,
                    chi_coeff,
                    splitting: CoeffSplitting::Split {
                        index: place_index,
                        root,
                        other,
                    },
                    frobenius_nontrivial: false,
                })
            }
        }
    }

    /// The Frobenius (Artin) action on coefficients: conjugation when the
    /// coefficient field is inert at p, identity otherwise.
    pub fn frobenius(&self, x: &QuadRat) -> QuadRat {
        if self.frobenius_nontrivial {
            x.conj()
        } else {
            x.clone()
        }
    }

    /// Exact valuation at the context's place; `None` means +infinity (x = 0).
    pub fn vp(&self, x: &QuadRat) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        match self.splitting {
            CoeffSplitting::Rational => {
                debug_assert!(x.b.is_zero());
                super::modular::vp_rat(&x.a, self.p)
            }
            CoeffSplitting::Inert => {
                let va = super::modular::vp_rat(&x.a, self.p);
                let vb = super::modular::vp_rat(&x.b, self.p);
                match (va, vb) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (Some(a), None) => Some(a),
                    (None, Some(b)) => Some(b),
                    (None, None) => None,
                }
            }
            CoeffSplitting::Split { root, .. } => Some(self.vp_split(x, root)),
        }
    }

    /// Minimum valuation over all places above p (coordinate-wise for the
    /// integral basis {1, w}); this is the integrality criterion.
    pub fn vp_min_all_places(&self, x: &QuadRat) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        if self.field.is_rational() {
            return super::modular::vp_rat(&x.a, self.p);
        }
        let va = super::modular::vp_rat(&x.a, self.p);
        let vb = super::modular::vp_rat(&x.b, self.p);
        match (va, vb) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    fn vp_split(&self, x: &QuadRat, root_mod_pk: u64) -> i64 {
        // clear denominators: x = (A + B w)/D
        let da = x.a.denom();
        let db = x.b.denom();
        let d: BigInt = da.lcm(db);
        let big_a = x.a.numer() * (&d / da);
        let big_b = x.b.numer() * (&d / db);
        let vd = vp_int(&d, self.p).expect("nonzero denominator");

        // valuation of A + B*r, bounded above by vp(norm)
        let s = BigInt::from(self.field.s);
        let t = BigInt::from(self.field.t);
        let norm = &big_a * &big_a + &s * &big_a * &big_b - &t * &big_b * &big_b;
        if norm.is_zero() {
            // can only happen for x = 0, handled above
            unreachable!("nonzero element with zero norm");
        }
        let v_max = vp_int(&norm, self.p).unwrap();
        let prec = (v_max + 1) as u32;
        let root = lift_root_bigint(self.field.s, self.field.t, self.p, root_mod_pk, prec);
        let modulus = BigInt::from(self.p).pow(prec);
        let val = (&big_a + &big_b * &root).mod_floor(&modulus);
        let v_num = vp_int(&val, self.p).expect("valuation bounded by vp(norm)");
        v_num - vd
    }

    /// Embed a coefficient into the completion at the chosen split place as a
    /// scaled residue. Requires chi_coeff = +1 (or rational mode).
    pub fn embed_place(
        &self,
        x: &QuadRat,
    ) -> Result<crate::exactnum::padic::PadicScaled, ExactError> {
        if matches!(self.splitting, CoeffSplitting::Inert) {
            return Err(ExactError::NoSplitRoot(format!(
                "embed_place needs a split place; {} is inert",
                self.p
            )));
        }
        let dom = crate::exactnum::padic::PadicDomain::from_context(self, 0);
        dom.inject(x)
    }

    /// Residue arithmetic mod p^j matching this place's completion.
    pub fn residue_ctx(&self, j: u32) -> ResidueCtx {
        let zp = ZmodPk::new(self.p, j);
        match self.splitting {
            CoeffSplitting::Rational => ResidueCtx {
                ring: QuadModPk::new(zp, 0, 0),
                root: None,
            },
            CoeffSplitting::Inert => ResidueCtx {
                ring: QuadModPk::new(zp, self.field.s, self.field.t),
                root: None,
            },
            CoeffSplitting::Split { root, .. } => {
                let r = if j <= self.k {
                    BigInt::from(root).mod_floor(&BigInt::from(zp.pk))
                } else {
                    lift_root_bigint(self.field.s, self.field.t, self.p, root, j)
                };
                use num_traits::ToPrimitive;
                ResidueCtx {
                    ring: QuadModPk::new(zp, 0, 0),
                    root: Some(r.to_u64().expect("root fits u64")),
                }
            }
        }
    }
}

/// Residue ring attached to a place: `(Z/p^j)[w]` in the inert case, `Z/p^j`
/// via the chosen root in the split/rational case (elements kept with b = 0).
#[derive(Clone, Copy, Debug)]
pub struct ResidueCtx {
    pub ring: QuadModPk,
    pub root: Option<u64>,
}

impl ResidueCtx {
    pub fn modulus_desc(&self) -> (u64, u32) {
        (self.ring.zp.p, self.ring.zp.k)
    }

    /// Reduce an element with p-integral coordinates (denominators coprime to
    /// p after accounting for the place valuation being >= 0).
    pub fn reduce(&self, x: &QuadRat) -> Result<QuadResidue, ExactError> {
        match self.root {
            None => self.ring.reduce_quadrat(x),
            Some(r) => {
                let zp = &self.ring.zp;
                let a = zp.reduce_rational(&x.a)?;
                let b = zp.reduce_rational(&x.b)?;
                Ok(QuadResidue {
                    a: zp.add(a, zp.mul(b, r)),
                    b: 0,
                })
            }
        }
    }

    pub fn is_zero(&self, x: QuadResidue) -> bool {
        x.a == 0 && x.b == 0
    }
}

/// Newton-lift the root `r0` (given mod p^k0 for some k0 >= 1) of
/// `x^2 - s x - t` to a root modulo `p^prec`, in big-integer arithmetic.
pub fn lift_root_bigint(s: i64, t: i64, p: u64, r0: u64, prec: u32) -> BigInt {
    let s = BigInt::from(s);
    let t = BigInt::from(t);
    let pb = BigInt::from(p);
    let mut r = BigInt::from(r0 % p);
    let mut cur: u32 = 1;
    while cur < prec {
        cur = (cur * 2).min(prec);
        let modulus = pb.pow(cur);
        let fr = (&r * &r - &s * &r - &t).mod_floor(&modulus);
        let fpr = (BigInt::from(2) * &r - &s).mod_floor(&modulus);
        let inv = modular_inverse_bigint(&fpr, &modulus);
        r = (&r - fr * inv).mod_floor(&modulus);
    }
    let modulus = pb.pow(prec);
    debug_assert!((&r * &r - &s * &r - &t).mod_floor(&modulus).is_zero());
    r
}

fn modular_inverse_bigint(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not a unit in modular_inverse_bigint");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn golden() -> QuadField {
        QuadField::golden()
    }

    fn ctx(p: u64, k: u32) -> PlaceContext {
        PlaceContext::new(golden(), -15, 1, p, k, 0).unwrap()
    }

    #[test]
    fn splitting_classification() {
        assert_eq!(ctx(7, 2).splitting, CoeffSplitting::Inert);
        assert!(matches!(ctx(11, 2).splitting, CoeffSplitting::Split { .. }));
        assert_eq!(ctx(13, 2).splitting, CoeffSplitting::Inert);
        assert_eq!(ctx(17, 2).splitting, CoeffSplitting::Inert);
        assert!(matches!(ctx(19, 2).splitting, CoeffSplitting::Split { .. }));
        // 5 ramifies in Q(sqrt 5)
        assert!(matches!(
            PlaceContext::new(golden(), -15, 1, 5, 2, 0),
            Err(ExactError::Ramified(5))
        ));
    }

    #[test]
    fn frobenius_is_conjugation_when_inert() {
        let c = ctx(7, 2);
        let w = golden().w();
        // w |-> 1 - w
        assert_eq!(c.frobenius(&w), golden().elem(1, -1));
        let x = golden().elem_rat(
            BigRational::new((-94485).into(), 4.into()),
            BigRational::from_integer((-38220).into()),
        );
        let expect = golden().elem_rat(
            BigRational::new((-247365).into(), 4.into()),
            BigRational::from_integer(38220.into()),
        );
        assert_eq!(c.frobenius(&x), expect);
        // involution
        assert_eq!(c.frobenius(&c.frobenius(&x)), x);
        // split: identity
        let c19 = ctx(19, 1);
        assert_eq!(c19.frobenius(&x), x);
    }

    #[test]
    fn vp_examples() {
        let c7 = ctx(7, 2);
        // 47/7 has valuation -1
        let x = golden().from_rat(47, 7);
        assert_eq!(c7.vp(&x), Some(-1));
        // 7 + 14w: both coordinates exactly divisible by 7
        assert_eq!(c7.vp(&golden().elem(7, 14)), Some(1));
        assert_eq!(c7.vp(&golden().zero()), None);
    }

    #[test]
    fn inert_vp_is_half_norm_valuation() {
        let c7 = ctx(7, 2);
        let c13 = ctx(13, 2);
        let mut st = 0x1234_5678u64;
        let mut next = move || {
            st = st
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((st >> 33) as i64 % 50) - 25
        };
        let mut checked = 0;
        while checked < 100 {
            let (a, b, d) = (next(), next(), next().abs() + 1);
            let x = golden().elem_rat(
                BigRational::new(a.into(), d.into()),
                BigRational::new(b.into(), d.into()),
            );
            if x.is_zero() {
                continue;
            }
            for c in [&c7, &c13] {
                let vn = super::super::modular::vp_rat(&x.norm(), c.p).unwrap();
                assert_eq!(vn % 2, 0, "norm valuation must be even when inert");
                assert_eq!(c.vp(&x), Some(vn / 2));
            }
            checked += 1;
        }
    }

    #[test]
    fn split_vp_and_places() {
        let c0 = PlaceContext::new(golden(), -15, 1, 11, 2, 0).unwrap();
        let c1 = PlaceContext::new(golden(), -15, 1, 11, 2, 1).unwrap();
        let (CoeffSplitting::Split { root: r0, .. }, CoeffSplitting::Split { root: r1, .. }) =
            (c0.splitting, c1.splitting)
        else {
            panic!("11 must split");
        };
        assert_ne!(r0 % 11, r1 % 11);
        assert!(r0 % 11 < r1 % 11);
        // x = w - 4: valuation 1 at the place with root = 4 mod 11, 0 at the other
        let x = golden().elem(-4, 1);
        let (v0, v1) = (c0.vp(&x).unwrap(), c1.vp(&x).unwrap());
        assert_eq!(v0.min(v1), 0);
        assert_eq!(v0 + v1, vp_int(&x.norm().numer().clone(), 11).unwrap());
        // min over places equals min coordinate valuation
        assert_eq!(v0.min(v1), c0.vp_min_all_places(&x).unwrap(),);
    }

    #[test]
    fn embed_place_basics() {
        use crate::exactnum::padic::PadicScaled;
        let c = PlaceContext::new(golden(), -15, 1, 11, 2, 0).unwrap();
        assert_eq!(c.embed_place(&golden().zero()).unwrap(), PadicScaled::Zero);
        // w embeds to the chosen Hensel root
        let CoeffSplitting::Split { root, .. } = c.splitting else {
            panic!()
        };
        match c.embed_place(&golden().w()).unwrap() {
            PadicScaled::Exact { v, unit, .. } => {
                assert_eq!(v, 0);
                assert_eq!(unit.a, root);
                assert_eq!(unit.b, 0);
            }
            other => panic!("{other:?}"),
        }
        // ring homomorphism up to precision: (w * w) = (w + 1) embedded
        let lhs = c.embed_place(&(&golden().w() * &golden().w())).unwrap();
        let rhs = c.embed_place(&golden().elem(1, 1)).unwrap();
        assert_eq!(lhs, rhs);
        // inert context rejected
        let c7 = PlaceContext::new(golden(), -15, 1, 7, 2, 0).unwrap();
        assert!(c7.embed_place(&golden().w()).is_err());
    }

    #[test]
    fn lift_root_bigint_matches_hensel() {
        let r = lift_root_bigint(1, 1, 11, 4, 2);
        assert_eq!(r, BigInt::from(37));
        let big = lift_root_bigint(1, 1, 11, 4, 40);
        let m = BigInt::from(11).pow(40);
        assert!((&big * &big - &big - BigInt::one()).mod_floor(&m).is_zero());
    }
}
