//! Modular machinery: Hensel lifting of quadratic roots, CRT, rational
//! reconstruction, and the small residue rings `Z/p^k` and `(Z/p^k)[w]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quad::QuadRat;
use super::ExactError;

/// Trial-division primality test for the small primes this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return Some(v);
        }
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp_rat(r: &BigRational, p: u64) -> Option<i64> {
    Some(vp_int(r.numer(), p)? - vp_int(r.denom(), p).expect("zero denominator"))
}

/// Inverse of `a` modulo `m` (both < 2^63), by extended Euclid.
pub fn inv_mod_u64(a: u64, m: u64) -> Result<u64, ExactError> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return Err(ExactError::NotAUnit(format!("{a} mod {m}")));
    }
    Ok(t.rem_euclid(m as i128) as u64)
}

/// The ring `Z/p^k` with `p^k < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZmodPk {
    pub p: u64,
    pub k: u32,
    pub pk: u64,
}

impl ZmodPk {
    pub fn new(p: u64, k: u32) -> Self {
        let mut pk: u64 = 1;
        for _ in 0..k {
            pk = pk.checked_mul(p).expect("p^k overflows u64");
        }
        assert!(pk < (1 << 62), "p^k too large for u64 residue arithmetic");
        ZmodPk { p, k, pk }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.pk
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.pk - b % self.pk) % self.pk
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.pk as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.pk - a % self.pk) % self.pk
    }

    pub fn inv(&self, a: u64) -> Result<u64, ExactError> {
        inv_mod_u64(a, self.pk)
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.pk;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.pk);
        let r = n.mod_floor(&m);
        r.to_u64().expect("mod_floor fits in u64")
    }

    /// Reduce a rational with denominator coprime to p.
    pub fn reduce_rational(&self, r: &BigRational) -> Result<u64, ExactError> {
        let den = self.reduce_bigint(r.denom());
        let num = self.reduce_bigint(r.numer());
        Ok(self.mul(num, self.inv(den)?))
    }
}

/// An element `a + b*w` of `(Z/p^k)[w]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadResidue {
    pub a: u64,
    pub b: u64,
}

/// The ring `(Z/p^k)[w]` with `w^2 = s*w + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadModPk {
    pub zp: ZmodPk,
    pub s: u64,
    pub t: u64,
}

impl QuadModPk {
    pub fn new(zp: ZmodPk, s: i64, t: i64) -> Self {
        let m = zp.pk as i128;
        QuadModPk {
            zp,
            s: (s as i128).rem_euclid(m) as u64,
            t: (t as i128).rem_euclid(m) as u64,
        }
    }

    pub fn zero(&self) -> QuadResidue {
        QuadResidue { a: 0, b: 0 }
    }

    pub fn one(&self) -> QuadResidue {
        QuadResidue { a: 1, b: 0 }
    }

    pub fn add(&self, x: QuadResidue, y: QuadResidue) -> QuadResidue {
        QuadResidue {
            a: self.zp.add(x.a, y.a),
            b: self.zp.add(x.b, y.b),
        }
    }

    pub fn sub(&self, x: QuadResidue, y: QuadResidue) -> QuadResidue {
        QuadResidue {
            a: self.zp.sub(x.a, y.a),
            b: self.zp.sub(x.b, y.b),
        }
    }

    pub fn neg(&self, x: QuadResidue) -> QuadResidue {
        QuadResidue {
            a: self.zp.neg(x.a),
            b: self.zp.neg(x.b),
        }
    }

    pub fn mul(&self, x: QuadResidue, y: QuadResidue) -> QuadResidue {
        let z = &self.zp;
        let bb = z.mul(x.b, y.b);
        QuadResidue {
            a: z.add(z.mul(x.a, y.a), z.mul(self.t, bb)),
            b: z.add(z.add(z.mul(x.a, y.b), z.mul(x.b, y.a)), z.mul(self.s, bb)),
        }
    }

    pub fn conj(&self, x: QuadResidue) -> QuadResidue {
        QuadResidue {
            a: self.zp.add(x.a, self.zp.mul(self.s, x.b)),
            b: self.zp.neg(x.b),
        }
    }

    pub fn norm(&self, x: QuadResidue) -> u64 {
        let z = &self.zp;
        // a^2 + s a b - t b^2
        z.sub(
            z.add(z.mul(x.a, x.a), z.mul(self.s, z.mul(x.a, x.b))),
            z.mul(self.t, z.mul(x.b, x.b)),
        )
    }

    pub fn is_unit(&self, x: QuadResidue) -> bool {
        !self.norm(x).is_multiple_of(self.zp.p)
    }

    /// Inverse of a unit, computed as `conj(x) / norm(x)`.
    pub fn inv(&self, x: QuadResidue) -> Result<QuadResidue, ExactError> {
        let n_inv = self.zp.inv(self.norm(x))?;
        let c = self.conj(x);
        Ok(QuadResidue {
            a: self.zp.mul(c.a, n_inv),
            b: self.zp.mul(c.b, n_inv),
        })
    }

    /// Reduce a `QuadRat` with p-free denominators coordinate-wise.
    pub fn reduce_quadrat(&self, x: &QuadRat) -> Result<QuadResidue, ExactError> {
        Ok(QuadResidue {
            a: self.zp.reduce_rational(&x.a)?,
            b: self.zp.reduce_rational(&x.b)?,
        })
    }
}

/// Both roots of `x^2 - s*x - t` modulo `p^k`, when the polynomial splits
/// modulo the odd prime `p`. Quadratic (Newton) lifting.
pub fn hensel_lift_root(s: i64, t: i64, p: u64, k: u32) -> Result<(u64, u64), ExactError> {
    assert!(p > 2, "odd prime required");
    let sp = (s as i128).rem_euclid(p as i128) as u64;
    let tp = (t as i128).rem_euclid(p as i128) as u64;
    let mut roots_mod_p = Vec::new();
    for r in 0..p {
        // r^2 - s r - t mod p
        let v = ((r as u128 * r as u128) % p as u128 + (p as u128 * p as u128)
            - (sp as u128 * r as u128) % (p as u128 * p as u128)
            - tp as u128)
            % p as u128;
        if v.is_multiple_of(p as u128) {
            roots_mod_p.push(r);
        }
    }
    if roots_mod_p.len() != 2 {
        return Err(ExactError::NoSplitRoot(format!(
            "x^2 - {s}x - {t} has {} simple roots mod {p}",
            roots_mod_p.len()
        )));
    }

    let ring = ZmodPk::new(p, k);
    let lift = |r0: u64| -> Result<u64, ExactError> {
        let mut prec = 1u32;
        let mut r = r0 % ring.pk;
        let sm = (s as i128).rem_euclid(ring.pk as i128) as u64;
        let tm = (t as i128).rem_euclid(ring.pk as i128) as u64;
        while prec < k {
            // f(r) = r^2 - s r - t ; f'(r) = 2r - s, a unit mod p
            let fr = ring.sub(ring.mul(r, r), ring.add(ring.mul(sm, r), tm));
            let fpr = ring.sub(ring.mul(2, r), sm);
            let corr = ring.mul(fr, ring.inv(fpr)?);
            r = ring.sub(r, corr);
            prec *= 2;
        }
        // final residue check
        let fr = ring.sub(ring.mul(r, r), ring.add(ring.mul(sm, r), tm));
        debug_assert_eq!(fr, 0, "Hensel lift failed to converge");
        Ok(r)
    };
    let r1 = lift(roots_mod_p[0])?;
    let r2 = lift(roots_mod_p[1])?;
    Ok((r1, r2))
}

/// Chinese remainder combination of `(value, modulus)` pairs with pairwise
/// coprime moduli. Returns `(value, combined modulus)`.
pub fn crt_combine(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), ExactError> {
    let mut acc = BigInt::zero();
    let mut m = BigInt::one();
    for (r, n) in residues {
        let g = m.gcd(n);
        if !g.is_one() {
            return Err(ExactError::NonCoprimeModuli(format!("gcd {g}")));
        }
        // solve x = acc (mod m), x = r (mod n)
        let e = m.extended_gcd(n);
        // e.x * m + e.y * n = 1
        let mn = &m * n;
        let diff = (r - &acc).mod_floor(n);
        let step = (&e.x * &m).mod_floor(&mn);
        acc = (&acc + (&diff * &step).mod_floor(&mn)).mod_floor(&mn);
        m = mn;
    }
    Ok((acc, m))
}

/// Coordinate-wise CRT for residues of quadratic-field integers.
pub fn crt_combine_pair(
    residues: &[((BigInt, BigInt), BigInt)],
) -> Result<((BigInt, BigInt), BigInt), ExactError> {
    let firsts: Vec<(BigInt, BigInt)> = residues
        .iter()
        .map(|((a, _), m)| (a.clone(), m.clone()))
        .collect();
    let seconds: Vec<(BigInt, BigInt)> = residues
        .iter()
        .map(|((_, b), m)| (b.clone(), m.clone()))
        .collect();
    let (a, m) = crt_combine(&firsts)?;
    let (b, m2) = crt_combine(&seconds)?;
    debug_assert_eq!(m, m2);
    Ok(((a, b), m))
}

/// Recover `n/d` from `residue` modulo `m` with `|n| <= bound`, `0 < d <= bound`,
/// `gcd(d, m) = 1`. Unique when `m > 2*bound^2`; returns `None` when no such
/// pair exists.
pub fn rational_reconstruction(
    residue: &BigInt,
    modulus: &BigInt,
    bound: &BigInt,
) -> Option<BigRational> {
    assert!(bound.is_positive() && modulus.is_positive());
    let r = residue.mod_floor(modulus);
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    // half extended Euclid on (m, r): stop when remainder <= bound
    let (mut r0, mut r1) = (modulus.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > *bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), r0 - &q * &r1);
        (t0, t1) = (t1.clone(), t0 - &q * &t1);
    }
    let n = if t1.is_negative() { -r1 } else { r1 };
    let d = t1.abs();
    if d.is_zero() || d > *bound || n.abs() > *bound {
        return None;
    }
    if !d.gcd(modulus).is_one() {
        return None;
    }
    // verify n = d * residue (mod m)
    if (&n - &d * &r).mod_floor(modulus).is_zero() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
