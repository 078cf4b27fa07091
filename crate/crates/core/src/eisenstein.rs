//! The theorem verifier: prime classification, ordinary integrality checks,
//! p-adic recovery of the Eisenstein value, and the supersingular mu-solver.

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactnum::{
    kronecker, vp_int, ExactError, PadicDomain, PadicScaled, PlaceContext, QuadRat, QuadResidue,
};
use crate::series::domain::Domain;
use crate::series::{QuadDomain, TruncatedSeries};
use crate::weierstrass::{CurveModel, WeierstrassExpansion};

/// Reduction type of a prime for the CM curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeClass {
    Bad,
    Ordinary,
    Supersingular,
}

impl std::fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimeClass::Bad => write!(f, "bad"),
            PrimeClass::Ordinary => write!(f, "ordinary"),
            PrimeClass::Supersingular => write!(f, "supersingular"),
        }
    }
}

/// bad: p <= 3, p | norm(disc), p ramified in the coefficient field, or
/// p | d_K * f. Otherwise supersingular iff p is inert in K.
pub fn classify_prime(curve: &CurveModel, p: u64) -> PrimeClass {
    if p <= 3 || !crate::exactnum::modular::is_prime(p) {
        return PrimeClass::Bad;
    }
    let nd = curve.norm_disc();
    if vp_int(nd.numer(), p).unwrap_or(0) != 0 || vp_int(nd.denom(), p).unwrap_or(0) != 0 {
        return PrimeClass::Bad;
    }
    if !curve.field.is_rational() && kronecker(curve.field.disc(), p) == 0 {
        return PrimeClass::Bad;
    }
    if (curve.d_k * curve.conductor)
        .unsigned_abs()
        .is_multiple_of(p)
    {
        return PrimeClass::Bad;
    }
    match kronecker(curve.d_k, p) {
        -1 => PrimeClass::Supersingular,
        1 => PrimeClass::Ordinary,
        _ => PrimeClass::Bad,
    }
}

/// Brute-force point count of `y^2 = 4x^3 - g2 x - g3` over the residue field
/// of the coefficient field at p (`F_p` if it splits or is rational, `F_p^2`
/// if inert). Returns `a = q + 1 - #E(F_q)`; supersingular iff `a = 0 mod p`.
pub fn count_points_ap(curve: &CurveModel, p: u64) -> Result<i64, ExactError> {
    if classify_prime(curve, p) == PrimeClass::Bad {
        return Err(ExactError::BadPrime(format!("bad reduction at {p}")));
    }
    let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, 1, 0)?;
    let rc = ctx.residue_ctx(1);
    let inert = rc.root.is_none() && !curve.field.is_rational();
    let q: u64 = if inert { p * p } else { p };
    if q > 1_000_000 {
        return Err(ExactError::BadPrime(format!(
            "residue field of size {q} too large for brute-force counting"
        )));
    }
    let ring = rc.ring;
    let g2 = rc.reduce(&curve.g2)?;
    let g3 = rc.reduce(&curve.g3)?;

    let pow = |mut base: QuadResidue, mut e: u64| -> QuadResidue {
        let mut acc = ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = ring.mul(acc, base);
            }
            base = ring.mul(base, base);
            e >>= 1;
        }
        acc
    };
    let chi = |c: QuadResidue| -> i64 {
        if c.a == 0 && c.b == 0 {
            return 0;
        }
        let r = pow(c, (q - 1) / 2);
        if r == ring.one() {
            1
        } else {
            debug_assert_eq!(r, ring.neg(ring.one()));
            -1
        }
    };

    let mut sum: i64 = 0;
    let xs: Box<dyn Iterator<Item = QuadResidue>> = if inert {
        Box::new((0..p).flat_map(move |a| (0..p).map(move |b| QuadResidue { a, b })))
    } else {
        Box::new((0..p).map(|a| QuadResidue { a, b: 0 }))
    };
    for x in xs {
        // f(x) = 4x^3 - g2 x - g3
        let x2 = ring.mul(x, x);
        let fx = ring.sub(
            ring.sub(
                ring.mul(
                    ring.mul(x2, x),
                    QuadResidue {
                        a: 4 % ring.zp.pk,
                        b: 0,
                    },
                ),
                ring.mul(g2, x),
            ),
            g3,
        );
        sum += chi(fx);
    }
    // #E = q + 1 + sum, so a = q + 1 - #E = -sum
    Ok(-sum)
}

/// `R(u) = zeta(l(u)) - 1/u - d0 - A*l(u)`: the series whose integrality at a
/// place defines the p-adic Eisenstein value.
pub fn residual_series(
    exp: &WeierstrassExpansion<QuadDomain>,
    a_value: &QuadRat,
) -> TruncatedSeries<QuadDomain> {
    let d = &exp.domain;
    let head = TruncatedSeries::monomial(d.clone(), d.one(), -1, crate::series::PREC_INF)
        .add(&TruncatedSeries::constant(d.clone(), exp.d0.clone()));
    exp.zeta_of_log.sub(&head).sub(&exp.log_e.scale(a_value))
}

/// A non-integral coefficient: the earliest index attaining the worst
/// (most negative) valuation found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: i64,
    pub valuation: i64,
}

/// Scan coefficients at indices `1..=n`; returns the deepest violation
/// (minimal valuation, earliest index among equals), if any.
pub fn scan_violations<D: Domain>(
    series: &TruncatedSeries<D>,
    n: i64,
    vp: impl Fn(&D::Elem) -> Option<i64>,
) -> Option<Violation> {
    let mut worst: Option<Violation> = None;
    for (e, c) in series.iter_nonzero() {
        if e < 1 || e > n {
            continue;
        }
        if let Some(v) = vp(c) {
            if v < 0 && worst.is_none_or(|w| v < w.valuation) {
                worst = Some(Violation {
                    index: e,
                    valuation: v,
                });
            }
        }
    }
    worst
}

/// A residue `a + b*w mod p^k` (b = 0 in the split/rational cases).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueVal {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub k: u32,
}

impl std::fmt::Display for ResidueVal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)?;
        } else if self.a == 0 {
            write!(f, "{}*w", self.b)?;
        } else {
            write!(f, "{} + {}*w", self.a, self.b)?;
        }
        if self.k == 1 {
            write!(f, " mod {}", self.p)
        } else {
            write!(f, " mod {}^{}", self.p, self.k)
        }
    }
}

impl Serialize for ResidueVal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Per-(p, place) verification outcome.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub p: u64,
    pub class: PrimeClass,
    pub place: u8,
    #[serde(rename = "N")]
    pub n: i64,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_recovered: Option<ResidueVal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<ResidueVal>,
    /// Worst violation of the uncorrected residual series (supersingular).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pre_violation: Option<Violation>,
    pub ok: bool,
    pub first_violation: Option<Violation>,
}

/// Ordinary case: `R(u)` itself must be integral at the place (mu = 0).
pub fn verify_lambda_ordinary(
    exp: &WeierstrassExpansion<QuadDomain>,
    ctx: &PlaceContext,
    a_value: &QuadRat,
    n: i64,
) -> VerificationReport {
    assert!(n <= exp.n_terms, "expansion carries too few terms");
    let residual = residual_series(exp, a_value);
    let violation = scan_violations(&residual, n, |c| ctx.vp(c));
    VerificationReport {
        p: ctx.p,
        class: PrimeClass::Ordinary,
        place: place_index(ctx),
        n,
        k: ctx.k,
        lambda_input: Some(a_value.to_string()),
        lambda_recovered: None,
        mu: None,
        pre_violation: None,
        ok: violation.is_none(),
        first_violation: violation,
    }
}

fn place_index(ctx: &PlaceContext) -> u8 {
    match ctx.splitting {
        crate::exactnum::CoeffSplitting::Split { index, .. } => index,
        _ => 0,
    }
}

/// Recover `lambda mod p^k` at an ordinary place from the congruences at
/// indices p^j: `z_{p^j} = lambda * b(p^j)/p^j + integral` with `b(p^j)` a
/// unit. Inconsistent congruences are a hard error.
pub fn recover_lambda(
    exp: &WeierstrassExpansion<QuadDomain>,
    ctx: &PlaceContext,
    k: u32,
) -> Result<ResidueVal, ExactError> {
    let p = ctx.p;
    let mut prev: Option<(QuadResidue, u32)> = None;
    let mut result = None;
    for j in 1..=k {
        let idx = (p as i64).checked_pow(j).expect("p^j overflows");
        assert!(
            idx <= exp.n_terms,
            "recover_lambda needs N >= p^k = {idx}, have {}",
            exp.n_terms
        );
        let z = exp.zeta_of_log.coeff(idx);
        let b = exp.b(idx);
        // ordinary unit-root property, asserted rather than assumed
        if ctx.vp(&b) != Some(0) {
            return Err(ExactError::NotAUnit(format!(
                "b({idx}) is not a unit at p = {p}: ordinary profile violated"
            )));
        }
        if ctx.vp(&z).unwrap_or(i64::MAX) < -(j as i64) {
            return Err(ExactError::NotIntegral);
        }
        let rc = ctx.residue_ctx(j);
        let pj = num_bigint::BigInt::from(p).pow(j);
        let scaled = z.mul_rat(&num_rational::BigRational::from_integer(pj));
        let zr = rc.reduce(&scaled)?;
        let br = rc.reduce(&b)?;
        let lam = rc.ring.mul(zr, rc.ring.inv(br)?);
        if let Some((lprev, jprev)) = prev {
            // consistency across levels: lam = lprev (mod p^jprev)
            let m = p.pow(jprev);
            if lam.a % m != lprev.a % m || lam.b % m != lprev.b % m {
                return Err(ExactError::NotAUnit(format!(
                    "inconsistent lambda congruences at p = {p}, level {j}"
                )));
            }
        }
        prev = Some((lam, j));
        result = Some(ResidueVal {
            a: lam.a,
            b: lam.b,
            p,
            k: j,
        });
    }
    Ok(result.expect("k >= 1"))
}

/// Solve for `mu mod p^k` such that `R(u) - mu * (1/p) l^phi(u^p)` is
/// integral at the supersingular place, then verify all indices through n.
pub fn solve_mu_supersingular(
    exp: &WeierstrassExpansion<QuadDomain>,
    ctx: &PlaceContext,
    a_value: &QuadRat,
    n: i64,
    k: u32,
) -> Result<VerificationReport, ExactError> {
    let p = ctx.p;
    let residual = residual_series(exp, a_value);
    let pre_violation = scan_violations(&residual, n, |c| ctx.vp(c));

    // correction series C = (1/p) l^phi(u^p)
    let l_phi = if ctx.frobenius_nontrivial {
        exp.log_e.conjugate()
    } else {
        exp.log_e.clone()
    };
    let correction = l_phi.substitute_power(p).div_int(p as i64).map_err(|_| {
        ExactError::BadPrime(format!("correction series division by p = {p} failed"))
    })?;

    // designated constraint indices p^(2j-1): vp(C at p^(2j-1)) = -j because
    // vp(b(p^(2j-2))) = j-1 in height 2; asserted, with a scan fallback.
    let mut constraints: Vec<(i64, u32)> = Vec::new(); // (index, level j)
    let mut profile_ok = true;
    for j in 1..=k {
        let idx = (p as i64)
            .checked_pow(2 * j - 1)
            .expect("p^(2j-1) overflows");
        if idx > n {
            return Err(ExactError::BadPrime(format!(
                "mu solve at level {j} needs N >= p^(2j-1) = {idx}, have {n}"
            )));
        }
        let c = correction.coeff(idx);
        if ctx.vp(&c) == Some(-(j as i64)) {
            constraints.push((idx, j));
        } else {
            profile_ok = false;
        }
    }
    if !profile_ok {
        // fall back to scanning all correction indices for the deepest ones
        constraints.clear();
        let mut best: Vec<(i64, u32)> = Vec::new();
        for (e, c) in correction.iter_nonzero() {
            if e > n {
                break;
            }
            if let Some(v) = ctx.vp(c) {
                if v < 0 {
                    best.push((e, (-v) as u32));
                }
            }
        }
        best.sort_by_key(|&(e, j)| (std::cmp::Reverse(j), e));
        for j in 1..=k {
            if let Some(&(e, _)) = best.iter().find(|&&(_, jj)| jj == j) {
                constraints.push((e, j));
            }
        }
        if constraints.is_empty() {
            return Err(ExactError::NoSplitRoot(format!(
                "no constraining index for mu at p = {p}"
            )));
        }
    }

    // solve mu from each constraint level; the deepest pins mu mod p^k
    let mut mu_at: Vec<(QuadResidue, u32)> = Vec::new();
    for &(idx, j) in &constraints {
        let r = residual.coeff(idx);
        let c = correction.coeff(idx);
        if ctx.vp(&r).unwrap_or(i64::MAX) < -(j as i64) {
            return Err(ExactError::NotIntegral);
        }
        let rc = ctx.residue_ctx(j);
        let pj = BigInt::from(p).pow(j);
        let pj_rat = num_rational::BigRational::from_integer(pj);
        let r_scaled = rc.reduce(&r.mul_rat(&pj_rat))?;
        let gamma = rc.reduce(&c.mul_rat(&pj_rat))?; // unit by the vp check
        let mu_j = rc.ring.mul(r_scaled, rc.ring.inv(gamma)?);
        mu_at.push((mu_j, j));
    }
    mu_at.sort_by_key(|&(_, j)| j);
    let &(mu_top, j_top) = mu_at.last().expect("nonempty constraints");

    // consistency of the lower congruences with the deepest one
    let mut consistent = true;
    for &(m, j) in &mu_at {
        let modulus = p.pow(j);
        if m.a % modulus != mu_top.a % modulus || m.b % modulus != mu_top.b % modulus {
            consistent = false;
        }
    }

    // verify globally with the least lift of mu
    let mu_lift = ctx_residue_to_quadrat(ctx, mu_top);
    let corrected = residual.sub(&correction.scale(&mu_lift));
    let violation = scan_violations(&corrected, n, |c| ctx.vp(c));
    let ok = consistent && violation.is_none();

    Ok(VerificationReport {
        p,
        class: PrimeClass::Supersingular,
        place: place_index(ctx),
        n,
        k: ctx.k,
        lambda_input: Some(a_value.to_string()),
        lambda_recovered: None,
        mu: Some(ResidueVal {
            a: mu_top.a,
            b: mu_top.b,
            p,
            k: j_top,
        }),
        pre_violation,
        ok,
        first_violation: violation,
    })
}

/// Least lift of a residue back into the coefficient field, matching the
/// completion the context works in (coordinates for inert, the chosen-root
/// scalar for split, plain integer for rational mode).
fn ctx_residue_to_quadrat(ctx: &PlaceContext, r: QuadResidue) -> QuadRat {
    ctx.field.elem(r.a as i64, r.b as i64)
}

/// Dispatch on the classification; ordinary primes additionally cross-check
/// the recovered lambda against the supplied value.
pub fn verify_theorem(
    exp: &WeierstrassExpansion<QuadDomain>,
    curve: &CurveModel,
    ctx: &PlaceContext,
    a_value: &QuadRat,
    n: i64,
    k: u32,
) -> Result<VerificationReport, ExactError> {
    match classify_prime(curve, ctx.p) {
        PrimeClass::Bad => Ok(VerificationReport {
            p: ctx.p,
            class: PrimeClass::Bad,
            place: 0,
            n,
            k,
            lambda_input: Some(a_value.to_string()),
            lambda_recovered: None,
            mu: None,
            pre_violation: None,
            ok: true,
            first_violation: None,
        }),
        PrimeClass::Ordinary => {
            let mut report = verify_lambda_ordinary(exp, ctx, a_value, n);
            // cross-check the recovered value only when the scan succeeded: a
            // failed scan is an ordinary verification failure, not an
            // internal inconsistency
            let k_feasible = if report.ok {
                feasible_lambda_level(ctx.p, k, exp.n_terms)
            } else {
                0
            };
            if k_feasible >= 1 {
                let rec = recover_lambda(exp, ctx, k_feasible)?;
                // cross-check: the recovered residue must match A mod p^k
                let rc = ctx.residue_ctx(k_feasible);
                let a_red = rc.reduce(a_value)?;
                if a_red.a != rec.a || a_red.b != rec.b {
                    return Err(ExactError::NotAUnit(format!(
                        "recovered lambda {rec} disagrees with the supplied value at p = {}",
                        ctx.p
                    )));
                }
                report.lambda_recovered = Some(rec);
            }
            Ok(report)
        }
        PrimeClass::Supersingular => solve_mu_supersingular(exp, ctx, a_value, n, k),
    }
}

/// Largest j <= k with p^j <= n_terms (lambda recovery needs index p^j).
pub fn feasible_lambda_level(p: u64, k: u32, n_terms: i64) -> u32 {
    let mut j = 0;
    let mut pj: i64 = 1;
    while j < k {
        match pj.checked_mul(p as i64) {
            Some(next) if next <= n_terms => {
                pj = next;
                j += 1;
            }
            _ => break,
        }
    }
    j
}

/// Fast-path verification over the scaled p-adic domain, starting from
/// `extra_digits` of working slack and doubling (up to the u64 budget) when
/// tracked precision runs out. Exhaustion at the cap is a hard error, never
/// a wrong verdict.
pub fn verify_fast(
    curve: &CurveModel,
    ctx: &PlaceContext,
    a_value: &QuadRat,
    n: i64,
    k: u32,
    extra_digits: u32,
) -> Result<VerificationReport, ExactError> {
    let cap = crate::exactnum::padic::max_work_digits(ctx.p).saturating_sub(ctx.k);
    let mut extra = extra_digits.min(cap);
    loop {
        match verify_fast_at(curve, ctx, a_value, n, k, extra) {
            Err(ExactError::PrecisionExhausted) if extra < cap => {
                extra = (extra * 2).clamp(extra + 1, cap);
            }
            other => return other,
        }
    }
}

fn verify_fast_at(
    curve: &CurveModel,
    ctx: &PlaceContext,
    a_value: &QuadRat,
    n: i64,
    k: u32,
    extra_digits: u32,
) -> Result<VerificationReport, ExactError> {
    let class = classify_prime(curve, ctx.p);
    if class == PrimeClass::Bad {
        return Err(ExactError::BadPrime(format!("bad reduction at {}", ctx.p)));
    }
    let dom = PadicDomain::from_context(ctx, extra_digits);
    // the u-side pipeline: the z-side Laurent coefficients have unbounded
    // denominators and would exhaust any fixed-digit domain at large N
    let exp = crate::weierstrass::u_side_expansion(&dom, curve, n).map_err(|e| match e {
        crate::series::SeriesError::Exact(e) => e,
        other => ExactError::BadPrime(format!("fast expansion failed: {other}")),
    })?;
    let a_fast = dom.inject(a_value)?;
    let head = TruncatedSeries::monomial(dom.clone(), dom.one(), -1, crate::series::PREC_INF)
        .add(&TruncatedSeries::constant(dom.clone(), exp.d0));
    let residual = exp.zeta_of_log.sub(&head).sub(&exp.log_e.scale(&a_fast));

    let vp_or_err = |c: &PadicScaled| -> Result<Option<i64>, ExactError> {
        match c {
            PadicScaled::Zero => Ok(None),
            PadicScaled::Exact { v, .. } => Ok(Some(*v)),
            PadicScaled::Bounded { min_v } if *min_v >= 0 => Ok(Some(*min_v)),
            PadicScaled::Bounded { .. } => Err(ExactError::PrecisionExhausted),
        }
    };

    let scan = |s: &TruncatedSeries<PadicDomain>| -> Result<Option<Violation>, ExactError> {
        let mut worst: Option<Violation> = None;
        for (e, c) in s.iter_nonzero() {
            if e < 1 || e > n {
                continue;
            }
            if let Some(v) = vp_or_err(c)? {
                if v < 0 && worst.is_none_or(|w| v < w.valuation) {
                    worst = Some(Violation {
                        index: e,
                        valuation: v,
                    });
                }
            }
        }
        Ok(worst)
    };

    match class {
        PrimeClass::Ordinary => {
            let violation = scan(&residual)?;
            Ok(VerificationReport {
                p: ctx.p,
                class,
                place: place_index(ctx),
                n,
                k,
                lambda_input: Some(a_value.to_string()),
                lambda_recovered: None,
                mu: None,
                pre_violation: None,
                ok: violation.is_none(),
                first_violation: violation,
            })
        }
        PrimeClass::Supersingular => {
            let p = ctx.p;
            let pre_violation = scan(&residual)?;
            let l_phi = exp.log_e.conjugate(); // identity unless inert
            let correction = l_phi
                .substitute_power(p)
                .div_int(p as i64)
                .map_err(|_| ExactError::PrecisionExhausted)?;
            // deepest designated constraint: index p^(2k-1)
            let idx = (p as i64).checked_pow(2 * k - 1).expect("overflow");
            if idx > n {
                return Err(ExactError::BadPrime(format!(
                    "mu solve needs N >= p^(2k-1) = {idx}, have {n}"
                )));
            }
            let c = correction.coeff(idx);
            let r = residual.coeff(idx);
            let pk = dom.from_int((p as i64).pow(k));
            let gamma = dom.mul(&c, &pk);
            let r_scaled = dom.mul(&r, &pk);
            let mu_res = dom.mul(&r_scaled, &dom.inv(&gamma)?);
            let mu = dom.residue_mod(&mu_res, k)?;
            let mu_lift = ctx.field.elem(mu.a as i64, mu.b as i64);
            let corrected = residual.sub(&correction.scale(&dom.inject(&mu_lift)?));
            let violation = scan(&corrected)?;
            Ok(VerificationReport {
                p,
                class,
                place: place_index(ctx),
                n,
                k,
                lambda_input: Some(a_value.to_string()),
                lambda_recovered: None,
                mu: Some(ResidueVal {
                    a: mu.a,
                    b: mu.b,
                    p,
                    k,
                }),
                pre_violation,
                ok: violation.is_none(),
                first_violation: violation,
            })
        }
        PrimeClass::Bad => unreachable!(),
    }
}

/// Map per-place lambda residues back to coordinates `(a, b) mod p^k`.
///
/// Inert: the residue already carries both coordinates. Split: solve
/// `a + b r_i = lambda_i` from the two places' residues.
pub fn lambda_coordinates(
    ctx0: &PlaceContext,
    rec0: &ResidueVal,
    split_other: Option<(&PlaceContext, &ResidueVal)>,
) -> Result<((BigInt, BigInt), BigInt), ExactError> {
    let p = rec0.p;
    let k = rec0.k;
    let modulus = BigInt::from(p).pow(k);
    match ctx0.splitting {
        crate::exactnum::CoeffSplitting::Inert | crate::exactnum::CoeffSplitting::Rational => {
            Ok(((BigInt::from(rec0.a), BigInt::from(rec0.b)), modulus))
        }
        crate::exactnum::CoeffSplitting::Split { .. } => {
            let (ctx1, rec1) = split_other.ok_or_else(|| {
                ExactError::NoSplitRoot(
                    "coordinate recovery at a split prime needs both places".into(),
                )
            })?;
            assert_eq!(rec1.p, p);
            assert_eq!(rec1.k, k);
            let rc0 = ctx0.residue_ctx(k);
            let rc1 = ctx1.residue_ctx(k);
            let (r0, r1) = (rc0.root.unwrap(), rc1.root.unwrap());
            let m = rc0.ring.zp;
            // b = (l0 - l1) / (r0 - r1), a = l0 - b r0
            let diff = m.sub(rec0.a, rec1.a);
            let denom = m.sub(r0, r1);
            let b = m.mul(diff, m.inv(denom)?);
            let a = m.sub(rec0.a, m.mul(b, r0));
            Ok(((BigInt::from(a), BigInt::from(b)), modulus))
        }
    }
}
