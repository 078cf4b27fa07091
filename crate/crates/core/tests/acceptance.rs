//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines;
//! the heavyweight N = 500 expansion is computed once and shared.

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use e2p_core::analytic;
use e2p_core::eisenstein::{
    classify_prime, count_points_ap, lambda_coordinates, recover_lambda, scan_violations,
    solve_mu_supersingular, verify_fast, verify_lambda_ordinary, PrimeClass, Violation,
};
use e2p_core::exactnum::{
    crt_combine_pair, kronecker, rational_reconstruction, vp_rat, PlaceContext, QuadField, QuadRat,
};
use e2p_core::series::domain::Domain;
use e2p_core::series::honda::{honda_quotient_check, HondaOutcome};
use e2p_core::series::{QuadDomain, TruncatedSeries};
use e2p_core::weierstrass::{
    exact_expansion, formal_group_law_from, log_of_group_law, WeierstrassExpansion,
};
use e2p_core::CurveModel;

const BIG_N: i64 = 500;

struct Shared {
    curve: CurveModel,
    a_value: QuadRat,
    exp: WeierstrassExpansion<QuadDomain>,
    expansion_secs: f64,
}

fn shared() -> &'static Shared {
    static SHARED: OnceLock<Shared> = OnceLock::new();
    SHARED.get_or_init(|| {
        let curve = CurveModel::cm15();
        let a_value = QuadRat::parse("13/2 + 21/2*w", curve.field).unwrap();
        let t0 = Instant::now();
        let exp = exact_expansion(&curve, BIG_N).expect("N = 500 expansion");
        Shared {
            curve,
            a_value,
            exp,
            expansion_secs: t0.elapsed().as_secs_f64(),
        }
    })
}

fn conclude(criterion: u32, desc: &str, errors: Vec<String>) {
    if errors.is_empty() {
        println!("[criterion {criterion}] PASS - {desc}");
    } else {
        println!("[criterion {criterion}] FAIL - {desc}");
        for e in &errors {
            println!("    {e}");
        }
        panic!("criterion {criterion} failed: {}", errors.join("; "));
    }
}

fn q(field: &QuadField, an: i64, ad: i64, bn: i64, bd: i64) -> QuadRat {
    field.elem_rat(
        BigRational::new(an.into(), ad.into()),
        BigRational::new(bn.into(), bd.into()),
    )
}

fn vp_min(c: &QuadRat, p: u64) -> Option<i64> {
    let va = vp_rat(&c.a, p);
    let vb = vp_rat(&c.b, p);
    match (va, vb) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    }
}

fn ordinary_primes_below(curve: &CurveModel, hi: u64) -> Vec<u64> {
    (5..hi)
        .filter(|&p| classify_prime(curve, p) == PrimeClass::Ordinary)
        .collect()
}

#[test]
fn criterion_1_golden_expansions() {
    let mut errors = Vec::new();
    let curve = CurveModel::cm15();
    let f = curve.field;
    let t0 = Instant::now();
    let exp = exact_expansion(&curve, 20).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();

    let mut check = |name: &str, got: QuadRat, want: QuadRat| {
        if got != want {
            errors.push(format!("{name}: got {got}, want {want}"));
        }
    };
    check("c2", exp.cs[0].clone(), q(&f, 711, 2, 2301, 4));
    check("c3", exp.cs[1].clone(), q(&f, 31495, 4, 12740, 1));
    check("zeta z^3", exp.zeta.coeff(3), q(&f, -237, 2, -767, 4));
    check("zeta z^5", exp.zeta.coeff(5), q(&f, -6299, 4, -2548, 1));
    check(
        "zeta z^7",
        exp.zeta.coeff(7),
        q(&f, -2438895, 112, -563745, 16),
    );
    check(
        "zeta z^9",
        exp.zeta.coeff(9),
        q(&f, -2455225, 8, -7945275, 16),
    );
    check(
        "zeta z^11",
        exp.zeta.coeff(11),
        q(&f, -1517389435, 352, -6974965, 1),
    );
    check(
        "zeta z^13",
        exp.zeta.coeff(13),
        q(&f, -25264737675, 416, -3144554175, 32),
    );
    check("log t^5", exp.log_e.coeff(5), q(&f, -711, 1, -2301, 2));
    check("log t^7", exp.log_e.coeff(7), q(&f, -94485, 4, -38220, 1));
    check(
        "log t^9",
        exp.log_e.coeff(9),
        q(&f, 60972375, 8, 98655375, 8),
    );
    check(
        "log t^11",
        exp.log_e.coeff(11),
        q(&f, 1288993125, 2, 4171269375, 4),
    );
    check(
        "log t^13",
        exp.log_e.coeff(13),
        q(&f, -200868706875, 2, -162506197500, 1),
    );
    if elapsed >= 1.0 {
        errors.push(format!("N = 20 expansion took {elapsed:.3}s, budget 1s"));
    }
    conclude(
        1,
        &format!("exact golden coefficients at N = 20 in {elapsed:.3}s"),
        errors,
    );
}

#[test]
fn criterion_2_fixture_sanity() {
    let mut errors = Vec::new();
    let curve = CurveModel::cm15();
    let want_j = curve.field.elem(-52515, -85995);
    if curve.j() != want_j {
        errors.push(format!("j: got {}, want {}", curve.j(), want_j));
    }
    let want_norm = BigRational::from_integer(
        BigInt::from(2).pow(12) * BigInt::from(3).pow(6) * BigInt::from(5).pow(6),
    );
    if curve.norm_disc() != want_norm {
        errors.push(format!("norm(disc): got {}", curve.norm_disc()));
    }
    conclude(
        2,
        "j = -85995w - 52515 and norm(disc) = 2^12 3^6 5^6",
        errors,
    );
}

#[test]
fn criterion_3_ordinary_integrality() {
    let mut errors = Vec::new();
    let sh = shared();
    let residual = e2p_core::eisenstein::residual_series(&sh.exp, &sh.a_value);
    let primes = ordinary_primes_below(&sh.curve, 200);
    assert!(primes.len() >= 20, "expected a rich ordinary set");
    for &p in &primes {
        if let Some(v) = scan_violations(&residual, BIG_N, |c| vp_min(c, p)) {
            errors.push(format!(
                "p = {p}: non-integral coefficient at index {} (valuation {})",
                v.index, v.valuation
            ));
        }
    }
    let budget = 900.0;
    if sh.expansion_secs >= budget {
        errors.push(format!(
            "exact N = 500 expansion took {:.1}s, budget {budget}s",
            sh.expansion_secs
        ));
    }

    // fast p-adic domain: per-prime budget of 10s
    let mut slowest = 0.0f64;
    for &p in &primes {
        let ctx =
            PlaceContext::new(sh.curve.field, sh.curve.d_k, sh.curve.conductor, p, 1, 0).unwrap();
        let t0 = Instant::now();
        match verify_fast(&sh.curve, &ctx, &sh.a_value, BIG_N, 1, 8) {
            Ok(rep) => {
                if !rep.ok {
                    errors.push(format!(
                        "fast domain rejects p = {p}: {:?}",
                        rep.first_violation
                    ));
                }
            }
            Err(e) => errors.push(format!("fast domain failed at p = {p}: {e}")),
        }
        let dt = t0.elapsed().as_secs_f64();
        slowest = slowest.max(dt);
        if dt >= 10.0 {
            errors.push(format!("fast domain at p = {p} took {dt:.2}s, budget 10s"));
        }
    }
    conclude(
        3,
        &format!(
            "all 500 coefficients p-integral at {} ordinary primes < 200 (exact expansion {:.1}s, slowest fast path {:.2}s)",
            primes.len(),
            sh.expansion_secs,
            slowest
        ),
        errors,
    );
}

#[test]
fn criterion_4_supersingular_mu() {
    let mut errors = Vec::new();
    let sh = shared();
    let ctx = PlaceContext::new(sh.curve.field, sh.curve.d_k, sh.curve.conductor, 7, 2, 0).unwrap();
    match solve_mu_supersingular(&sh.exp, &ctx, &sh.a_value, BIG_N, 2) {
        Ok(report) => {
            let pre = report.pre_violation;
            if pre
                != Some(Violation {
                    index: 343,
                    valuation: -2,
                })
            {
                errors.push(format!(
                    "pre-correction violation: got {pre:?}, want (343, -2)"
                ));
            }
            match report.mu {
                Some(mu) if mu.a == 47 && mu.b == 0 && mu.p == 7 && mu.k == 2 => {}
                other => errors.push(format!("mu: got {other:?}, want 47 mod 7^2")),
            }
            if !report.ok {
                errors.push(format!(
                    "post-correction violation remains: {:?}",
                    report.first_violation
                ));
            }
        }
        Err(e) => errors.push(format!("mu solve failed: {e}")),
    }
    conclude(
        4,
        "p = 7, N = 500, k = 2: pre-violation (343, -2), mu = 47 mod 49, corrected series integral",
        errors,
    );
}

#[test]
fn criterion_5_padic_recovery() {
    let mut errors = Vec::new();
    let sh = shared();
    let curve = &sh.curve;

    // p = 17 (inert), k = 2
    let ctx17 = PlaceContext::new(curve.field, curve.d_k, curve.conductor, 17, 2, 0).unwrap();
    let rec17 = recover_lambda(&sh.exp, &ctx17, 2).unwrap();
    let coord17 = lambda_coordinates(&ctx17, &rec17, None).unwrap();

    // p = 19 (split), k = 1: both places
    let ctx19a = PlaceContext::new(curve.field, curve.d_k, curve.conductor, 19, 1, 0).unwrap();
    let ctx19b = PlaceContext::new(curve.field, curve.d_k, curve.conductor, 19, 1, 1).unwrap();
    let rec19a = recover_lambda(&sh.exp, &ctx19a, 1).unwrap();
    let rec19b = recover_lambda(&sh.exp, &ctx19b, 1).unwrap();
    let coord19 = lambda_coordinates(&ctx19a, &rec19a, Some((&ctx19b, &rec19b))).unwrap();

    let ((ca, cb), modulus) = crt_combine_pair(&[coord17, coord19]).unwrap();
    if modulus != BigInt::from(289 * 19) {
        errors.push(format!("CRT modulus: got {modulus}, want 5491"));
    }
    let bound = BigInt::from(25);
    let ra = rational_reconstruction(&ca, &modulus, &bound);
    let rb = rational_reconstruction(&cb, &modulus, &bound);
    match (ra, rb) {
        (Some(a), Some(b)) => {
            let got = curve.field.elem_rat(a, b);
            if got != sh.a_value {
                errors.push(format!("recovered {got}, want {}", sh.a_value));
            }
        }
        other => errors.push(format!("reconstruction failed: {other:?}")),
    }
    conclude(
        5,
        "CRT of 17-adic (k=2) and 19-adic (k=1) residues + reconstruction at height 25 = 13/2 + 21/2*w",
        errors,
    );
}

#[test]
fn criterion_6_analytic_cross_check() {
    let mut errors = Vec::new();
    let curve = CurveModel::cm15();
    let a_value = QuadRat::parse("13/2 + 21/2*w", curve.field).unwrap();
    let golden_im = [0.968_245_836_551_854_3_f64, 1.9364916731037084];
    let mut floats = [0.0f64; 2];
    for idx in [0u8, 1] {
        match analytic::periods(&curve, idx) {
            Ok(ctx) => {
                let a = analytic::analytic_a(&ctx, 130);
                let target = analytic::embed_real(&a_value, &curve.field, idx);
                if (a.re - target).abs() >= 1e-8 || a.im.abs() >= 1e-8 {
                    errors.push(format!(
                        "embedding {idx}: analytic A = {a}, embedded value {target}"
                    ));
                }
                if (ctx.tau.im - golden_im[idx as usize]).abs() >= 1e-10 {
                    errors.push(format!(
                        "embedding {idx}: Im(tau) = {:.17}, want {:.17}",
                        ctx.tau.im, golden_im[idx as usize]
                    ));
                }
                floats[idx as usize] = a.re;
            }
            Err(e) => errors.push(format!("periods({idx}) failed: {e}")),
        }
    }
    match analytic::recognize_quad(floats[0], floats[1], curve.field, 25) {
        Some(got) if got == a_value => {}
        other => errors.push(format!("recognition: got {other:?}")),
    }
    conclude(
        6,
        "per-embedding analytic values within 1e-8, tau imaginary parts within 1e-10, recognition exact",
        errors,
    );
}

#[test]
fn criterion_7_classifier_triple_agreement() {
    let mut errors = Vec::new();
    let sh = shared();
    let mut good = 0;
    for p in 5..50u64 {
        let class = classify_prime(&sh.curve, p);
        if class == PrimeClass::Bad {
            continue;
        }
        good += 1;
        let by_kronecker = if kronecker(sh.curve.d_k, p) == -1 {
            PrimeClass::Supersingular
        } else {
            PrimeClass::Ordinary
        };
        let a = match count_points_ap(&sh.curve, p) {
            Ok(a) => a,
            Err(e) => {
                errors.push(format!("count at p = {p}: {e}"));
                continue;
            }
        };
        let by_count = if a.rem_euclid(p as i64) == 0 {
            PrimeClass::Supersingular
        } else {
            PrimeClass::Ordinary
        };
        let ctx =
            PlaceContext::new(sh.curve.field, sh.curve.d_k, sh.curve.conductor, p, 1, 0).unwrap();
        let vb = ctx.vp(&sh.exp.b(p as i64)).unwrap_or(i64::MAX);
        let by_valuation = if vb >= 1 {
            PrimeClass::Supersingular
        } else {
            PrimeClass::Ordinary
        };
        if by_kronecker != class || by_count != class || by_valuation != class {
            errors.push(format!(
                "p = {p}: class {class:?}, kronecker {by_kronecker:?}, count {by_count:?} (a = {a}), b(p) valuation {by_valuation:?} (v = {vb})"
            ));
        }
    }
    assert!(good >= 10);
    conclude(
        7,
        &format!(
            "Kronecker symbol, point counts, and vp(b(p)) agree at all {good} good primes < 50"
        ),
        errors,
    );
}

/// Nightly-scale target: the first thousand coefficients, ordinary and
/// supersingular. Run with
/// `cargo test --release -p e2p-core --test acceptance -- --ignored`.
#[test]
#[ignore = "nightly scale: ~10 minutes"]
fn nightly_thousand_coefficients() {
    let n = 1000;
    let curve = CurveModel::cm15();
    let a_value = QuadRat::parse("13/2 + 21/2*w", curve.field).unwrap();
    let exp = exact_expansion(&curve, n).unwrap();
    let residual = e2p_core::eisenstein::residual_series(&exp, &a_value);
    for p in ordinary_primes_below(&curve, 200) {
        assert!(
            scan_violations(&residual, n, |c| vp_min(c, p)).is_none(),
            "ordinary integrality fails at p = {p}"
        );
    }
    let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, 7, 2, 0).unwrap();
    let report = solve_mu_supersingular(&exp, &ctx, &a_value, n, 2).unwrap();
    assert_eq!(report.mu.unwrap().to_string(), "47 mod 7^2");
    assert!(report.ok, "{:?}", report.first_violation);
    println!("[nightly] PASS - first {n} coefficients, ordinary set and p = 7 corrected");
}

/// Naive power-accumulation composition oracle.
fn compose_oracle(
    f: &TruncatedSeries<QuadDomain>,
    g: &TruncatedSeries<QuadDomain>,
) -> TruncatedSeries<QuadDomain> {
    let d = QuadDomain::new(QuadField::golden());
    let mut acc = TruncatedSeries::zero(d, e2p_core::series::PREC_INF);
    let ginv = g.inverse().ok();
    for (e, c) in f.iter_nonzero() {
        let gp = if e >= 0 {
            g.pow(e as u64)
        } else {
            ginv.clone().unwrap().pow((-e) as u64)
        };
        acc = acc.add(&gp.scale(c));
    }
    acc
}

/// Lagrange inversion: [u^n] revert(f) = (1/n) [z^(n-1)] (z/f)^n.
fn lagrange_oracle(f: &TruncatedSeries<QuadDomain>, n_terms: i64) -> Vec<QuadRat> {
    let d = QuadDomain::new(QuadField::golden());
    let z_over_f = TruncatedSeries::identity(d.clone(), f.prec())
        .div(f)
        .unwrap();
    let mut out = vec![d.zero()];
    let mut pw = TruncatedSeries::constant(d.clone(), d.one()).truncate(f.prec());
    for n in 1..n_terms {
        pw = pw.mul(&z_over_f);
        out.push(d.div_int(&pw.coeff(n - 1), n).unwrap());
    }
    out
}

fn pseudo_series(seed: u64, val: i64, len: usize, prec: i64) -> TruncatedSeries<QuadDomain> {
    let d = QuadDomain::new(QuadField::golden());
    let mut st = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut next = move || {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        st
    };
    let coeffs = (0..len)
        .map(|_| {
            let a = (next() % 15) as i64 - 7;
            let b = (next() % 15) as i64 - 7;
            let den = (next() % 3 + 1) as i64;
            QuadField::golden().elem_rat(
                BigRational::new(a.into(), den.into()),
                BigRational::new(b.into(), den.into()),
            )
        })
        .collect();
    TruncatedSeries::from_coeffs(d, val, coeffs, prec)
}

#[test]
fn criterion_8_property_suites() {
    let mut errors = Vec::new();
    let d = QuadDomain::new(QuadField::golden());
    let curve = CurveModel::cm15();

    // composition vs naive accumulation, N = 12
    for seed in 0..4u64 {
        let f = pseudo_series(900 + seed, -1, 12, 12);
        let g = TruncatedSeries::identity(d.clone(), 12).add(&pseudo_series(950 + seed, 2, 10, 12));
        let fast = f.compose(&g).unwrap();
        let slow = compose_oracle(&f, &g);
        for e in fast.val()..fast.prec() {
            if fast.coeff(e) != slow.coeff(e) {
                errors.push(format!("compose oracle mismatch at seed {seed}, u^{e}"));
                break;
            }
        }
    }

    // reversion vs Lagrange inversion, N = 12 and 40
    for (seed, n) in [(5u64, 12i64), (17, 40)] {
        let f = TruncatedSeries::identity(d.clone(), n).add(&pseudo_series(
            seed,
            2,
            (n - 2) as usize,
            n,
        ));
        let got = f.revert().unwrap();
        let want = lagrange_oracle(&f, n);
        for e in 1..n {
            if got.coeff(e) != want[e as usize] {
                errors.push(format!("revert oracle mismatch at seed {seed}, u^{e}"));
                break;
            }
        }
    }

    // Honda quotient checks on 50 randomized (A, B, p) triples
    let mut honda_runs = 0;
    for p in [5u64, 7, 11, 13, 17] {
        for seed in 0..10u64 {
            let strip = |s: &TruncatedSeries<QuadDomain>| {
                s.map_coeffs(|c| {
                    let da = c.a.denom().clone();
                    let db = c.b.denom().clone();
                    c.mul_rat(&BigRational::from_integer(da * db))
                })
            };
            let a = strip(&pseudo_series(seed * 7 + p, 1, 12, 14));
            let c = strip(&pseudo_series(seed * 7 + p + 3, 1, 12, 14));
            let b = a.add(&c.scale_int(p as i64));
            let vp = |x: &QuadRat| vp_min(x, p);
            match honda_quotient_check(&a, &b, p, vp, 15) {
                Ok(HondaOutcome::Ok) => {}
                other => errors.push(format!("honda p = {p} seed {seed}: {other:?}")),
            }
            honda_runs += 1;
        }
    }
    assert!(honda_runs >= 50);

    // formal group law axioms + dyadic denominators at N = 10
    let n = 10;
    let exp22 = exact_expansion(&curve, 2 * n + 2).unwrap();
    let fgl = formal_group_law_from(&exp22, n).unwrap();
    let at_zero = fgl.coeff(0);
    if at_zero.coeff(1) != d.one() || (2..at_zero.prec()).any(|i| !at_zero.coeff(i).is_zero()) {
        errors.push("F(X, 0) != X".into());
    }
    'sym: for j in 0..=n {
        for i in 0..=n {
            if fgl.coeff(j).coeff(i) != fgl.coeff(i).coeff(j) {
                errors.push(format!("group law asymmetry at ({i},{j})"));
                break 'sym;
            }
        }
    }
    let lhs = log_of_group_law(&exp22, &fgl, n);
    'add: for j in 0..=n {
        for i in 0..=n {
            let want = if j == 0 {
                exp22.log_e.coeff(i)
            } else if i == 0 {
                exp22.log_e.coeff(j)
            } else {
                d.zero()
            };
            if lhs.coeff(j).coeff(i) != want {
                errors.push(format!("log additivity fails at ({i},{j})"));
                break 'add;
            }
        }
    }
    for j in 0..=n {
        for (i, c) in fgl.coeff(j).iter_nonzero() {
            for den in [c.a.denom(), c.b.denom()] {
                let mut odd = den.clone();
                while (&odd % BigInt::from(2)).is_zero() {
                    odd /= 2;
                }
                if !odd.is_one() {
                    errors.push(format!("non-dyadic denominator at ({i},{j}): {c}"));
                }
            }
        }
    }

    // weight-2 scaling equivariance with W = 2 at N = 50
    let scaled = curve.rescale(2, 1).unwrap();
    let e1 = exact_expansion(&curve, 50).unwrap();
    let e2 = exact_expansion(&scaled, 50).unwrap();
    for idx in 1..=50i64 {
        let factor = BigRational::new(BigInt::one(), BigInt::from(2).pow((idx - 1) as u32));
        if e2.b(idx) != e1.b(idx).mul_rat(&factor) {
            errors.push(format!("weight-2 scaling fails at b({idx})"));
        }
    }
    // and the decomposition transported by the scaling still verifies
    let a_scaled = QuadRat::parse("13/2 + 21/2*w", curve.field)
        .unwrap()
        .div_int(4)
        .unwrap();
    for p in [17u64, 19, 23] {
        let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, 1, 0).unwrap();
        let rep = verify_lambda_ordinary(&e2, &ctx, &a_scaled, 50);
        if !rep.ok {
            errors.push(format!(
                "scaled-curve verification fails at p = {p}: {:?}",
                rep.first_violation
            ));
        }
    }

    // frobenius / valuation / reconstruction round-trips
    let ctx7 = PlaceContext::new(curve.field, curve.d_k, curve.conductor, 7, 2, 0).unwrap();
    let x = q(&curve.field, -94485, 4, -38220, 1);
    if ctx7.frobenius(&x) != q(&curve.field, -247365, 4, 38220, 1) {
        errors.push("frobenius golden value".into());
    }
    if ctx7.frobenius(&ctx7.frobenius(&x)) != x {
        errors.push("frobenius involution".into());
    }
    if ctx7.vp(&curve.field.from_rat(47, 7)) != Some(-1) {
        errors.push("vp(47/7) != -1".into());
    }
    let m = BigInt::from(5491);
    for (nn, dd) in [(13i64, 2i64), (21, 2), (-7, 3)] {
        let r = (BigInt::from(nn) * e2p_core::exactnum::inv_mod_u64(dd as u64, 5491).unwrap()) % &m;
        match rational_reconstruction(&r, &m, &BigInt::from(25)) {
            Some(v) if v == BigRational::new(nn.into(), dd.into()) => {}
            other => errors.push(format!("reconstruction round trip {nn}/{dd}: {other:?}")),
        }
    }

    conclude(
        8,
        "series oracles, Honda checks, group-law axioms, weight-2 equivariance, arithmetic round-trips",
        errors,
    );
}
