//! Curve-specific expansions: the Laurent coefficients of the Weierstrass
//! p-function, the zeta series, the parameter u = -2x/y, the formal-group
//! logarithm, the formal group law, and the integrality facts behind them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactnum::{ExactError, QuadField, QuadRat};
use crate::series::domain::Domain;
use crate::series::{QuadDomain, SeriesDomain, SeriesError, TruncatedSeries};

/// Weierstrass data `y^2 = 4x^3 - g2 x - g3` over the coefficient field, with
/// the CM discriminant and conductor of the order.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel {
    pub field: QuadField,
    pub g2: QuadRat,
    pub g3: QuadRat,
    /// Negative fundamental discriminant of the CM field K.
    pub d_k: i64,
    /// Conductor of the order.
    pub conductor: i64,
}

impl CurveModel {
    pub fn new(
        field: QuadField,
        g2: QuadRat,
        g3: QuadRat,
        d_k: i64,
        conductor: i64,
    ) -> Result<Self, ExactError> {
        if d_k >= 0 || conductor < 1 {
            return Err(ExactError::BadField(format!(
                "CM data requires d_K < 0 and conductor >= 1, got {d_k}, {conductor}"
            )));
        }
        let c = CurveModel {
            field,
            g2,
            g3,
            d_k,
            conductor,
        };
        if c.disc().is_zero() {
            return Err(ExactError::BadField(
                "discriminant g2^3 - 27 g3^2 is zero".into(),
            ));
        }
        Ok(c)
    }

    /// Discriminant `g2^3 - 27 g3^2`.
    pub fn disc(&self) -> QuadRat {
        let g2cubed = &(&self.g2 * &self.g2) * &self.g2;
        let g3sq = &self.g3 * &self.g3;
        &g2cubed - &g3sq.mul_int(27)
    }

    /// j-invariant `1728 g2^3 / (g2^3 - 27 g3^2)`.
    pub fn j(&self) -> QuadRat {
        let g2cubed = &(&self.g2 * &self.g2) * &self.g2;
        &g2cubed.mul_int(1728) / &self.disc()
    }

    /// Field norm of the discriminant (a rational).
    pub fn norm_disc(&self) -> BigRational {
        self.disc().norm()
    }

    /// Whether g2 and g3 have integral coordinates.
    pub fn has_integral_model(&self) -> bool {
        self.g2.a.denom().is_one()
            && self.g2.b.denom().is_one()
            && self.g3.a.denom().is_one()
            && self.g3.b.denom().is_one()
    }

    /// Rescale the lattice by a rational unit: `(g2, g3) -> (W^-4 g2, W^-6 g3)`.
    pub fn rescale(&self, omega_num: i64, omega_den: i64) -> Result<Self, ExactError> {
        let w4 = BigRational::new(
            BigInt::from(omega_den).pow(4),
            BigInt::from(omega_num).pow(4),
        );
        let w6 = BigRational::new(
            BigInt::from(omega_den).pow(6),
            BigInt::from(omega_num).pow(6),
        );
        CurveModel::new(
            self.field,
            self.g2.mul_rat(&w4),
            self.g3.mul_rat(&w6),
            self.d_k,
            self.conductor,
        )
    }

    /// The bundled sample: the curve over Q(w), w^2 = w + 1, with CM by the
    /// maximal order of discriminant -15 and j = -85995 w - 52515.
    pub fn cm15() -> Self {
        let field = QuadField::golden();
        CurveModel::new(
            field,
            field.elem(7110, 11505),
            field.elem(220465, 356720),
            -15,
            1,
        )
        .expect("fixture curve is valid")
    }
}

/// Laurent coefficients `c_n` of the Weierstrass p-function for
/// `2 <= n <= n_max`: `c_2 = g2/20`, `c_3 = g3/28`,
/// `c_n = 3/((n-3)(2n+1)) * sum_{m=2}^{n-2} c_m c_{n-m}`.
///
/// Returned with `cs[i]` holding `c_{i+2}`.
pub fn wp_coeffs<D: Domain>(
    domain: &D,
    g2: &D::Elem,
    g3: &D::Elem,
    n_max: usize,
) -> Result<Vec<D::Elem>, ExactError> {
    assert!(n_max >= 2);
    let mut cs: Vec<D::Elem> = Vec::with_capacity(n_max - 1);
    cs.push(domain.div_int(g2, 20)?);
    if n_max >= 3 {
        cs.push(domain.div_int(g3, 28)?);
    }
    for n in 4..=n_max {
        let mut acc = domain.zero();
        for m in 2..=(n - 2) {
            let a = &cs[m - 2];
            let b = &cs[n - m - 2];
            acc = domain.add(&acc, &domain.mul(a, b));
        }
        let num = domain.mul_int(&acc, 3);
        let den = ((n - 3) as i64) * ((2 * n + 1) as i64);
        cs.push(domain.div_int(&num, den)?);
    }
    Ok(cs)
}

/// `wp = 1/z^2 + sum c_n z^{2n-2}`, known modulo `O(z^prec)`.
pub fn wp_series<D: Domain>(domain: &D, cs: &[D::Elem], prec: i64) -> TruncatedSeries<D> {
    let len = (prec + 2).max(0) as usize;
    let mut coeffs = vec![domain.zero(); len];
    coeffs[0] = domain.one();
    for (i, c) in cs.iter().enumerate() {
        let e = 2 * (i as i64 + 2) - 2;
        if e + 2 < len as i64 {
            coeffs[(e + 2) as usize] = c.clone();
        }
    }
    TruncatedSeries::from_coeffs(domain.clone(), -2, coeffs, prec)
}

/// `zeta = 1/z - sum c_n/(2n-1) z^{2n-1}`, the odd antiderivative of `-wp`.
pub fn zeta_series<D: Domain>(
    domain: &D,
    cs: &[D::Elem],
    prec: i64,
) -> Result<TruncatedSeries<D>, ExactError> {
    let len = (prec + 1).max(0) as usize;
    let mut coeffs = vec![domain.zero(); len];
    coeffs[0] = domain.one();
    for (i, c) in cs.iter().enumerate() {
        let n = i as i64 + 2;
        let e = 2 * n - 1;
        if e + 1 < len as i64 {
            coeffs[(e + 1) as usize] = domain.neg(&domain.div_int(c, 2 * n - 1)?);
        }
    }
    Ok(TruncatedSeries::from_coeffs(
        domain.clone(),
        -1,
        coeffs,
        prec,
    ))
}

/// All curve expansions needed by the verifier, expanded once and shared.
///
/// `n_terms` is the highest u-exponent whose coefficient is usable in the
/// u-side series (`log_e`, `zeta_of_log`, `x_of_u`, `y_of_u`).
pub struct WeierstrassExpansion<D: Domain> {
    pub domain: D,
    pub n_terms: i64,
    /// `cs[i]` = c_{i+2}.
    pub cs: Vec<D::Elem>,
    pub wp: TruncatedSeries<D>,
    pub wp_prime: TruncatedSeries<D>,
    pub zeta: TruncatedSeries<D>,
    /// `u(l) = -2 wp(l) / wp'(l)` as a series in `l`.
    pub u_of_l: TruncatedSeries<D>,
    /// The formal-group logarithm `l(u)`, reversion of `u_of_l`.
    pub log_e: TruncatedSeries<D>,
    /// `zeta(l(u))`.
    pub zeta_of_log: TruncatedSeries<D>,
    /// Constant term of `zeta(l(u))` (zero for this odd model shape, but
    /// computed rather than assumed).
    pub d0: D::Elem,
    /// `x(u) = wp(l(u))`.
    pub x_of_u: TruncatedSeries<D>,
    /// `y(u) = wp'(l(u))`.
    pub y_of_u: TruncatedSeries<D>,
}

/// Solve `4X^3 - 4X^2 - g2 u^4 X - g3 u^6 = 0` for `X = 1 + O(u^4)` by
/// Newton; then `x = X/u^2` and `y = -2x/u` satisfy `y^2 = 4x^3 - g2 x - g3`
/// with `u = -2x/y`. This is the same pair `(wp(l(u)), wp'(l(u)))` reached by
/// composition (the unit tests pin the two routes against each other) at a
/// fraction of the cost.
fn xy_from_cubic<D: Domain>(
    domain: &D,
    g2: &D::Elem,
    g3: &D::Elem,
    x_prec: i64,
) -> Result<(TruncatedSeries<D>, TruncatedSeries<D>), SeriesError> {
    let prec = x_prec + 2; // precision of X = x * u^2
    let g2s = TruncatedSeries::monomial(domain.clone(), g2.clone(), 4, crate::series::PREC_INF);
    let g3s = TruncatedSeries::monomial(domain.clone(), g3.clone(), 6, crate::series::PREC_INF);
    let mut x = TruncatedSeries::constant(domain.clone(), domain.one()).truncate(4);
    let mut cur = 4i64;
    loop {
        cur = (cur * 2).min(prec);
        let xc = x.with_prec_unchecked(cur);
        let x2 = xc.mul(&xc);
        let f = x2
            .mul(&xc)
            .scale_int(4)
            .sub(&x2.scale_int(4))
            .sub(&g2s.mul(&xc))
            .sub(&g3s.truncate(cur));
        if f.is_zero() {
            x = xc;
        } else {
            let fp = x2
                .scale_int(12)
                .sub(&xc.scale_int(8))
                .sub(&g2s.truncate(cur));
            let delta = f.truncate(cur).div(&fp.truncate(cur))?;
            x = xc.sub(&delta).truncate(cur);
        }
        if cur >= prec {
            break;
        }
    }
    let x_series = x.shift(-2);
    let y_series = x_series.scale_int(-2).shift(-1);
    Ok((x_series, y_series))
}

pub fn expand<D: Domain>(
    domain: &D,
    curve: &CurveModel,
    n_terms: i64,
) -> Result<WeierstrassExpansion<D>, SeriesError> {
    assert!(n_terms >= 2);
    let z_prec = n_terms + 4;
    let n_max_c = ((z_prec + 1) / 2 + 1) as usize;
    let g2 = domain.inject(&curve.g2)?;
    let g3 = domain.inject(&curve.g3)?;
    let cs = wp_coeffs(domain, &g2, &g3, n_max_c)?;
    let wp = wp_series(domain, &cs, z_prec);
    let wp_prime = wp.derive();
    let zeta = zeta_series(domain, &cs, z_prec)?;
    let u_of_l = wp.scale_int(-2).div(&wp_prime)?;
    let log_e = u_of_l.revert()?;
    let (x_of_u, y_of_u) = xy_from_cubic(domain, &g2, &g3, z_prec)?;

    // zeta(l(u)) through its derivative: d/du zeta(l) = -wp(l) l' = -x l'.
    // Only the 1/z term of zeta can contribute to the constant, so d0 is the
    // u^0 coefficient of 1/l; everything else comes from the integral.
    let d0 = log_e.truncate(3).inverse()?.coeff(0);
    let deriv = x_of_u.mul(&log_e.derive()).neg();
    let zeta_of_log = deriv.integrate()?.add(&TruncatedSeries::monomial(
        domain.clone(),
        d0.clone(),
        0,
        crate::series::PREC_INF,
    ));

    assert!(log_e.prec() > n_terms, "log_e carries too few terms");
    assert!(
        zeta_of_log.prec() > n_terms,
        "zeta_of_log carries too few terms"
    );
    assert!(x_of_u.prec() > n_terms, "x_of_u carries too few terms");
    assert!(y_of_u.prec() > n_terms, "y_of_u carries too few terms");
    Ok(WeierstrassExpansion {
        domain: domain.clone(),
        n_terms,
        cs,
        wp,
        wp_prime,
        zeta,
        u_of_l,
        log_e,
        zeta_of_log,
        d0,
        x_of_u,
        y_of_u,
    })
}

impl<D: Domain> WeierstrassExpansion<D> {
    /// Formal-group logarithm coefficients: `l(u) = sum b(n)/n u^n`, so
    /// `b(n) = n * [u^n] l`.
    pub fn b(&self, n: i64) -> D::Elem {
        self.domain.mul_int(&self.log_e.coeff(n), n)
    }
}

/// Check `u^2 x(u) in 1 + integral * u[[u]]` and
/// `u^3 y(u) in -2 + integral * u[[u]]` through index `n`, where integrality
/// is decided by the supplied valuation.
pub fn xy_integrality_check<D: Domain>(
    exp: &WeierstrassExpansion<D>,
    n: i64,
    vp: impl Fn(&D::Elem) -> Option<i64>,
) -> bool {
    let u2x = exp.x_of_u.shift(2);
    let u3y = exp.y_of_u.shift(3);
    if u2x.coeff(0) != exp.domain.one() {
        return false;
    }
    if u3y.coeff(0) != exp.domain.from_int(-2) {
        return false;
    }
    for s in [&u2x, &u3y] {
        for (e, c) in s.iter_nonzero() {
            if e >= 1 && e <= n && vp(c).unwrap_or(i64::MAX) < 0 {
                return false;
            }
        }
    }
    true
}

/// Evaluate `sum_m f_m * arg^m` by Horner in an arbitrary target domain; `f`
/// must have nonnegative support, taken through `m_max`. Used for the
/// bivariate formal-group-law series, where `arg` has outer valuation 0 but
/// positive total grading.
fn horner_eval<D: Domain, E: Domain>(
    f: &TruncatedSeries<D>,
    lift: impl Fn(&D::Elem) -> E::Elem,
    target: &E,
    arg: &TruncatedSeries<E>,
    m_max: i64,
) -> TruncatedSeries<E> {
    assert!(f.val() >= 0, "horner_eval requires nonnegative support");
    let mut acc = TruncatedSeries::zero(target.clone(), crate::series::PREC_INF);
    let mut m = m_max;
    while m >= 0 {
        acc = acc.mul(arg);
        if m < f.prec() {
            let c = f.coeff(m);
            if !f.domain.is_zero(&c) {
                acc = acc.add(&TruncatedSeries::constant(target.clone(), lift(&c)));
            }
        }
        m -= 1;
    }
    acc
}

/// The formal group law `F(X, Y) = u(l(X) + l(Y))` as a series in Y whose
/// coefficients are series in X, both truncated at degree n.
pub fn formal_group_law<D: Domain>(
    domain: &D,
    curve: &CurveModel,
    n: i64,
) -> Result<TruncatedSeries<SeriesDomain<D>>, SeriesError> {
    let exp = expand(domain, curve, (2 * n + 2).max(8))?;
    formal_group_law_from(&exp, n)
}

/// As [`formal_group_law`], reusing an existing expansion (which must carry
/// at least 2n+2 usable terms).
pub fn formal_group_law_from<D: Domain>(
    exp: &WeierstrassExpansion<D>,
    n: i64,
) -> Result<TruncatedSeries<SeriesDomain<D>>, SeriesError> {
    let domain = &exp.domain;
    assert!(
        exp.n_terms >= 2 * n + 2,
        "expansion too short for the group law"
    );
    let prec = n + 1;
    let sd = SeriesDomain::new(domain.clone(), prec);
    let log_x: TruncatedSeries<D> = exp.log_e.truncate(prec);

    // S = l(X) + l(Y) as a series in Y over series in X
    let mut coeffs: Vec<TruncatedSeries<D>> = Vec::new();
    coeffs.push(log_x);
    for j in 1..prec {
        coeffs.push(TruncatedSeries::constant(domain.clone(), exp.log_e.coeff(j)).truncate(prec));
    }
    let s = TruncatedSeries::from_coeffs(sd.clone(), 0, coeffs, prec);

    // F = sum_m u_m S^m; S has total grading >= 1, so m <= 2n suffices
    let u_of_l = exp.u_of_l.truncate(2 * n + 1);
    let f = horner_eval(
        &u_of_l,
        |c| TruncatedSeries::constant(domain.clone(), c.clone()).truncate(prec),
        &sd,
        &s,
        2 * n,
    );
    Ok(f.truncate(prec))
}

/// `l(F(X,Y))` for the group-law additivity check.
pub fn log_of_group_law<D: Domain>(
    exp: &WeierstrassExpansion<D>,
    fgl: &TruncatedSeries<SeriesDomain<D>>,
    n: i64,
) -> TruncatedSeries<SeriesDomain<D>> {
    let domain = &exp.domain;
    let prec = n + 1;
    let sd = SeriesDomain::new(domain.clone(), prec);
    let log_trunc = exp.log_e.truncate(2 * n + 1);
    horner_eval(
        &log_trunc,
        |c| TruncatedSeries::constant(domain.clone(), c.clone()).truncate(prec),
        &sd,
        fgl,
        2 * n,
    )
    .truncate(prec)
}

/// Expansion over the exact domain of the curve's own field.
pub fn exact_expansion(
    curve: &CurveModel,
    n_terms: i64,
) -> Result<WeierstrassExpansion<QuadDomain>, SeriesError> {
    expand(&QuadDomain::new(curve.field), curve, n_terms)
}

/// The u-side series only, built without the z-side Laurent data.
///
/// The Laurent coefficients c_n accumulate denominators without bound, so a
/// fixed-digit coefficient domain cannot carry them to large N; everything
/// the verifier needs lives on the u-side, where good reduction keeps
/// valuations tame: x and y come from the curve equation, l = int(x'/y),
/// zeta(l) = int(-x l') + d0. Over the exact domain this agrees with
/// [`expand`] (unit-tested); the fast p-adic verifier runs on this path.
pub struct USideExpansion<D: Domain> {
    pub domain: D,
    pub n_terms: i64,
    pub log_e: TruncatedSeries<D>,
    pub zeta_of_log: TruncatedSeries<D>,
    pub d0: D::Elem,
    pub x_of_u: TruncatedSeries<D>,
    pub y_of_u: TruncatedSeries<D>,
}

pub fn u_side_expansion<D: Domain>(
    domain: &D,
    curve: &CurveModel,
    n_terms: i64,
) -> Result<USideExpansion<D>, SeriesError> {
    assert!(n_terms >= 2);
    let g2 = domain.inject(&curve.g2)?;
    let g3 = domain.inject(&curve.g3)?;
    let (x_of_u, y_of_u) = xy_from_cubic(domain, &g2, &g3, n_terms + 4)?;
    let log_prime = x_of_u.derive().div(&y_of_u)?;
    let log_e = log_prime.integrate()?;
    let d0 = log_e.truncate(3).inverse()?.coeff(0);
    let deriv = x_of_u.mul(&log_prime).neg();
    let zeta_of_log = deriv.integrate()?.add(&TruncatedSeries::monomial(
        domain.clone(),
        d0.clone(),
        0,
        crate::series::PREC_INF,
    ));
    assert!(log_e.prec() > n_terms, "log_e carries too few terms");
    assert!(
        zeta_of_log.prec() > n_terms,
        "zeta_of_log carries too few terms"
    );
    Ok(USideExpansion {
        domain: domain.clone(),
        n_terms,
        log_e,
        zeta_of_log,
        d0,
        x_of_u,
        y_of_u,
    })
}

impl<D: Domain> USideExpansion<D> {
    pub fn b(&self, n: i64) -> D::Elem {
        self.domain.mul_int(&self.log_e.coeff(n), n)
    }
}
