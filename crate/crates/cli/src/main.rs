//! Command-line front end: series expansion dumps, prime classification,
//! p-adic verification/recovery, and the complex-analytic cross-check.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{emit, load_curve, parse_primes, DomainChoice, PlaceChoice, PrimeFilter};
use e2p_core::analytic;
use e2p_core::eisenstein::{
    classify_prime, count_points_ap, feasible_lambda_level, lambda_coordinates, recover_lambda,
    solve_mu_supersingular, verify_fast, verify_theorem, PrimeClass, VerificationReport,
};
use e2p_core::exactnum::{crt_combine_pair, rational_reconstruction, CoeffSplitting, ExactError};
use e2p_core::series::text::format_series;
use e2p_core::series::QuadDomain;
use e2p_core::weierstrass::{exact_expansion, WeierstrassExpansion};
use e2p_core::{CurveModel, PlaceContext, QuadRat};
use num_bigint::BigInt;

/// Hard cap on the series length a single job may request.
const N_CAP: i64 = 5000;

#[derive(Parser)]
#[command(
    name = "e2p",
    version,
    about = "Formal-group expansions of CM elliptic curves and p-adic verification of the weight-2 Eisenstein value"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump the curve expansions (c_n, wp, zeta, log, zeta(log)) as
    /// (exponent, coefficient) pairs.
    Expand {
        #[arg(long, default_value = "cm15")]
        curve: String,
        #[arg(long = "N", default_value_t = 20)]
        n: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify primes (bad/ordinary/supersingular) and cross-check the
    /// Kronecker symbol against point counts and the b(p) valuation.
    Classify {
        #[arg(long, default_value = "cm15")]
        curve: String,
        #[arg(long, default_value = "5..50")]
        primes: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the integrality decomposition at the given primes.
    Verify {
        #[arg(long, default_value = "cm15")]
        curve: String,
        /// The algebraic value as `a/b + c/d*w`, or `recover` to obtain it
        /// p-adically from the ordinary primes of the set first.
        #[arg(long = "A", default_value = "recover")]
        a: String,
        #[arg(long, default_value = "5..30")]
        primes: String,
        #[arg(long, value_enum, default_value_t = PrimeFilter::AllGood)]
        filter: PrimeFilter,
        #[arg(long = "N", default_value_t = 500)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = PlaceChoice::First)]
        places: PlaceChoice,
        #[arg(long, value_enum, default_value_t = DomainChoice::Exact)]
        domain: DomainChoice,
        /// Height bound for rational reconstruction when A = recover.
        #[arg(long, default_value_t = 1000)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for mu at one supersingular prime.
    SolveMu {
        #[arg(long, default_value = "cm15")]
        curve: String,
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        p: u64,
        #[arg(long = "N", default_value_t = 500)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        place: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the Eisenstein value p-adically from ordinary primes.
    Recover {
        #[arg(long, default_value = "cm15")]
        curve: String,
        #[arg(long, default_value = "17,19")]
        primes: String,
        #[arg(long = "N", default_value_t = 400)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 25)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-embedding periods, E2*, the analytic value, and its recognition.
    Analytic {
        #[arg(long, default_value = "cm15")]
        curve: String,
        #[arg(long, default_value_t = 25)]
        bound: i64,
        #[arg(long, default_value_t = 130)]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn exact_error_exit(e: &ExactError) -> ExitCode {
    match e {
        // solver inconsistencies: the data contradicts the expected structure
        ExactError::NotAUnit(_) | ExactError::NotIntegral | ExactError::NonCoprimeModuli(_) => {
            ExitCode::from(3)
        }
        _ => ExitCode::from(2),
    }
}

fn curve_json(curve: &CurveModel, name: &str) -> serde_json::Value {
    json!({
        "name": name,
        "field": { "s": curve.field.s, "t": curve.field.t },
        "g2": curve.g2.to_string(),
        "g3": curve.g3.to_string(),
        "dK": curve.d_k,
        "f": curve.conductor,
    })
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Expand { curve, n, out } => cmd_expand(&curve, n, &out),
        Cmd::Classify { curve, primes, out } => cmd_classify(&curve, &primes, &out),
        Cmd::Verify {
            curve,
            a,
            primes,
            filter,
            n,
            k,
            places,
            domain,
            bound,
            out,
        } => cmd_verify(
            &curve, &a, &primes, filter, n, k, places, domain, bound, &out,
        ),
        Cmd::SolveMu {
            curve,
            a,
            p,
            n,
            k,
            place,
            out,
        } => cmd_solve_mu(&curve, &a, p, n, k, place, &out),
        Cmd::Recover {
            curve,
            primes,
            n,
            k,
            bound,
            out,
        } => cmd_recover(&curve, &primes, n, k, bound, &out),
        Cmd::Analytic {
            curve,
            bound,
            terms,
            out,
        } => cmd_analytic(&curve, bound, terms, &out),
    }
}

fn cmd_expand(curve_spec: &str, n: i64, out: &Option<PathBuf>) -> Result<ExitCode> {
    if !(2..=N_CAP).contains(&n) {
        bail!("N must be between 2 and {N_CAP}");
    }
    let (curve, name) = load_curve(curve_spec)?;
    let exp = exact_expansion(&curve, n).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut body = String::new();
    body.push_str(&format!("# curve {name}\n"));
    body.push_str(&format!("# N {n}\n"));
    body.push_str("# c_n\n");
    for (i, c) in exp.cs.iter().enumerate() {
        if 2 * (i as i64 + 2) - 2 > n {
            break;
        }
        body.push_str(&format!("({}, {})\n", i + 2, c));
    }
    for (title, series) in [
        ("wp", &exp.wp),
        ("wp_prime", &exp.wp_prime),
        ("zeta", &exp.zeta),
        ("log", &exp.log_e),
        ("zeta_of_log", &exp.zeta_of_log),
    ] {
        body.push_str(&format!("# {title}\n"));
        body.push_str(&format_series(&series.truncate(n + 1)));
    }
    emit(out, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(curve_spec: &str, primes: &str, out: &Option<PathBuf>) -> Result<ExitCode> {
    let (curve, name) = load_curve(curve_spec)?;
    let ps = parse_primes(primes, PrimeFilter::All, &curve)?;
    let max_good = ps
        .iter()
        .filter(|&&p| classify_prime(&curve, p) != PrimeClass::Bad)
        .max()
        .copied();
    let exp = match max_good {
        Some(pmax) if pmax <= 1000 => {
            Some(exact_expansion(&curve, pmax as i64 + 1).map_err(|e| anyhow::anyhow!("{e}"))?)
        }
        _ => None,
    };
    let mut rows = Vec::new();
    let mut consistent = true;
    for &p in &ps {
        let class = classify_prime(&curve, p);
        let mut row = json!({
            "p": p,
            "class": class,
            "kronecker_dK": e2p_core::exactnum::kronecker(curve.d_k, p),
        });
        if class != PrimeClass::Bad {
            let inert = e2p_core::exactnum::kronecker(curve.field.disc(), p) == -1;
            if !inert || (p as u128) * (p as u128) <= 1_000_000 {
                let a = count_points_ap(&curve, p).map_err(|e| anyhow::anyhow!("{e}"))?;
                let by_count = if a.rem_euclid(p as i64) == 0 {
                    PrimeClass::Supersingular
                } else {
                    PrimeClass::Ordinary
                };
                row["a_p"] = json!(a);
                if by_count != class {
                    consistent = false;
                }
            }
            if let Some(exp) = &exp {
                let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, 1, 0)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let vb = ctx.vp(&exp.b(p as i64));
                row["vp_b_p"] = json!(vb);
                let by_val = if vb.unwrap_or(i64::MAX) >= 1 {
                    PrimeClass::Supersingular
                } else {
                    PrimeClass::Ordinary
                };
                if by_val != class {
                    consistent = false;
                }
            }
        }
        rows.push(row);
    }
    let body = serde_json::to_string_pretty(&json!({
        "curve": curve_json(&curve, &name),
        "classifications": rows,
        "consistent": consistent,
    }))?;
    emit(out, &body)?;
    if consistent {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("classifier disagreement detected");
        Ok(ExitCode::from(3))
    }
}

/// Places to run at a prime: inert primes have a single place.
fn places_for(curve: &CurveModel, p: u64, choice: PlaceChoice) -> Vec<u8> {
    let split =
        !curve.field.is_rational() && e2p_core::exactnum::kronecker(curve.field.disc(), p) == 1;
    match (split, choice) {
        (false, _) => vec![0],
        (true, PlaceChoice::First) => vec![0],
        (true, PlaceChoice::Second) => vec![1],
        (true, PlaceChoice::Both) => vec![0, 1],
    }
}

/// Recover A from the ordinary primes of the set: per-prime residues,
/// coordinate-wise CRT, rational reconstruction.
fn recover_a_value(
    curve: &CurveModel,
    exp: &WeierstrassExpansion<QuadDomain>,
    primes: &[u64],
    k: u32,
    bound: i64,
) -> Result<(QuadRat, Vec<serde_json::Value>)> {
    let ordinary: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| classify_prime(curve, p) == PrimeClass::Ordinary)
        .collect();
    if ordinary.is_empty() {
        bail!("A = recover requires at least one ordinary prime in the set");
    }
    let mut residues = Vec::new();
    let mut rows = Vec::new();
    for &p in &ordinary {
        let k_eff = feasible_lambda_level(p, k, exp.n_terms);
        if k_eff == 0 {
            bail!("N = {} is too small to recover at p = {p}", exp.n_terms);
        }
        let ctx0 = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, k_eff, 0)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let rec0 = recover_lambda(exp, &ctx0, k_eff).map_err(|e| anyhow::anyhow!("{e}"))?;
        let coords = match ctx0.splitting {
            CoeffSplitting::Split { .. } => {
                let ctx1 = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, k_eff, 1)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let rec1 = recover_lambda(exp, &ctx1, k_eff).map_err(|e| anyhow::anyhow!("{e}"))?;
                rows.push(json!({ "p": p, "k": k_eff, "place": 0, "lambda": rec0.to_string() }));
                rows.push(json!({ "p": p, "k": k_eff, "place": 1, "lambda": rec1.to_string() }));
                lambda_coordinates(&ctx0, &rec0, Some((&ctx1, &rec1)))
                    .map_err(|e| anyhow::anyhow!("{e}"))?
            }
            _ => {
                rows.push(json!({ "p": p, "k": k_eff, "place": 0, "lambda": rec0.to_string() }));
                lambda_coordinates(&ctx0, &rec0, None).map_err(|e| anyhow::anyhow!("{e}"))?
            }
        };
        residues.push(coords);
    }
    let ((ca, cb), modulus) = crt_combine_pair(&residues).map_err(|e| anyhow::anyhow!("{e}"))?;
    let bound_big = BigInt::from(bound);
    if modulus <= BigInt::from(2) * &bound_big * &bound_big {
        bail!(
            "combined modulus {modulus} is too small for unique reconstruction at height {bound}; add primes or raise k"
        );
    }
    let ra = rational_reconstruction(&ca, &modulus, &bound_big);
    let rb = rational_reconstruction(&cb, &modulus, &bound_big);
    match (ra, rb) {
        (Some(a), Some(b)) => Ok((curve.field.elem_rat(a, b), rows)),
        _ => bail!("rational reconstruction failed at height bound {bound}"),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    curve_spec: &str,
    a_spec: &str,
    primes_spec: &str,
    filter: PrimeFilter,
    n: i64,
    k: u32,
    places: PlaceChoice,
    domain: DomainChoice,
    bound: i64,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let (curve, name) = load_curve(curve_spec)?;
    let primes = parse_primes(primes_spec, filter, &curve)?;
    if k < 1 {
        bail!("k must be at least 1");
    }

    // every supersingular prime needs at least its mod-p constraint at index
    // p; beyond that the requested k degrades to what N supports rather than
    // inflating N for the whole job
    let mut n_eff = n;
    for &p in &primes {
        if classify_prime(&curve, p) == PrimeClass::Supersingular && (p as i64) > n_eff {
            eprintln!("note: raising N from {n_eff} to {p} for supersingular p = {p}");
            n_eff = p as i64;
        }
    }
    if n_eff > N_CAP {
        bail!("N = {n_eff} exceeds the cap {N_CAP}");
    }
    let mut k_for: Vec<(u64, u32)> = Vec::new();
    for &p in &primes {
        if classify_prime(&curve, p) == PrimeClass::Supersingular {
            let mut kp = k;
            while kp > 1 && (p as i64).checked_pow(2 * kp - 1).unwrap_or(i64::MAX) > n_eff {
                kp -= 1;
            }
            if kp < k {
                eprintln!(
                    "note: mu at p = {p} is pinned mod p^{kp} only (N = {n_eff} < p^{})",
                    2 * k - 1
                );
            }
            k_for.push((p, kp));
        } else {
            k_for.push((p, k));
        }
    }

    let need_exact = domain != DomainChoice::Fast || a_spec == "recover";
    let exp = if need_exact {
        Some(exact_expansion(&curve, n_eff).map_err(|e| anyhow::anyhow!("{e}"))?)
    } else {
        None
    };

    let (a_value, recovered_rows) = if a_spec == "recover" {
        let exp = exp.as_ref().expect("exact expansion present");
        recover_a_value(&curve, exp, &primes, k, bound)?
    } else {
        (
            QuadRat::parse(a_spec, curve.field).map_err(|e| anyhow::anyhow!("A: {e}"))?,
            Vec::new(),
        )
    };

    let mut reports: Vec<VerificationReport> = Vec::new();
    for &(p, kp) in &k_for {
        let class = classify_prime(&curve, p);
        if class == PrimeClass::Bad {
            reports.push(VerificationReport {
                p,
                class,
                place: 0,
                n: n_eff,
                k: kp,
                lambda_input: Some(a_value.to_string()),
                lambda_recovered: None,
                mu: None,
                pre_violation: None,
                ok: true,
                first_violation: None,
            });
            continue;
        }
        for place in places_for(&curve, p, places) {
            let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, kp, place)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let exact_report = match &exp {
                Some(exp) => match verify_theorem(exp, &curve, &ctx, &a_value, n_eff, kp) {
                    Ok(r) => Some(r),
                    Err(e) => {
                        eprintln!("hard failure at p = {p}: {e}");
                        return Ok(exact_error_exit(&e));
                    }
                },
                None => None,
            };
            let fast_report = if domain != DomainChoice::Exact {
                match verify_fast(&curve, &ctx, &a_value, n_eff, kp, 8) {
                    Ok(r) => Some(r),
                    Err(ExactError::PrecisionExhausted) => {
                        bail!(
                            "fast domain ran out of tracked precision at p = {p}; rerun with --domain exact"
                        );
                    }
                    Err(e) => {
                        eprintln!("hard failure at p = {p}: {e}");
                        return Ok(exact_error_exit(&e));
                    }
                }
            } else {
                None
            };
            let report = match (exact_report, fast_report) {
                (Some(e), Some(f)) => {
                    if e.ok != f.ok || e.mu != f.mu || e.first_violation != f.first_violation {
                        eprintln!(
                            "internal inconsistency at p = {p}: exact and fast domains disagree"
                        );
                        return Ok(ExitCode::from(3));
                    }
                    e
                }
                (Some(e), None) => e,
                (None, Some(f)) => f,
                (None, None) => unreachable!(),
            };
            reports.push(report);
        }
    }
    reports.sort_by_key(|r| (r.p, r.place));
    let all_ok = reports.iter().all(|r| r.ok);
    let mut doc = json!({
        "curve": curve_json(&curve, &name),
        "A": a_value.to_string(),
        "results": reports,
    });
    if !recovered_rows.is_empty() {
        doc["recovered_from"] = json!(recovered_rows);
    }
    emit(out, &serde_json::to_string_pretty(&doc)?)?;
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve_mu(
    curve_spec: &str,
    a_spec: &str,
    p: u64,
    n: i64,
    k: u32,
    place: u8,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let (curve, name) = load_curve(curve_spec)?;
    if classify_prime(&curve, p) != PrimeClass::Supersingular {
        bail!("p = {p} is not supersingular for this curve");
    }
    let a_value = QuadRat::parse(a_spec, curve.field).map_err(|e| anyhow::anyhow!("A: {e}"))?;
    let need = (p as i64)
        .checked_pow(2 * k - 1)
        .filter(|&x| x <= N_CAP)
        .ok_or_else(|| anyhow::anyhow!("p^(2k-1) exceeds the cap {N_CAP}"))?;
    let n_eff = n.max(need);
    if n_eff > N_CAP {
        bail!("N = {n_eff} exceeds the cap {N_CAP}");
    }
    if n_eff > n {
        eprintln!("note: raising N from {n} to {n_eff} for the mod p^{k} constraint");
    }
    let exp = exact_expansion(&curve, n_eff).map_err(|e| anyhow::anyhow!("{e}"))?;
    let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, k, place)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    match solve_mu_supersingular(&exp, &ctx, &a_value, n_eff, k) {
        Ok(report) => {
            let ok = report.ok;
            let doc = json!({
                "curve": curve_json(&curve, &name),
                "A": a_value.to_string(),
                "result": report,
            });
            emit(out, &serde_json::to_string_pretty(&doc)?)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Err(e) => {
            eprintln!("mu solve failed: {e}");
            Ok(exact_error_exit(&e))
        }
    }
}

fn cmd_recover(
    curve_spec: &str,
    primes_spec: &str,
    n: i64,
    k: u32,
    bound: i64,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let (curve, name) = load_curve(curve_spec)?;
    let primes = parse_primes(primes_spec, PrimeFilter::Ordinary, &curve)?;
    let ordinary: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| classify_prime(&curve, p) == PrimeClass::Ordinary)
        .collect();
    if ordinary.is_empty() {
        bail!("no ordinary primes in the set");
    }
    if n > N_CAP {
        bail!("N = {n} exceeds the cap {N_CAP}");
    }
    let exp = exact_expansion(&curve, n).map_err(|e| anyhow::anyhow!("{e}"))?;
    let (a, rows) = recover_a_value(&curve, &exp, &ordinary, k, bound)?;
    let doc = json!({
        "curve": curve_json(&curve, &name),
        "residues": rows,
        "A": a.to_string(),
    });
    emit(out, &serde_json::to_string_pretty(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_analytic(
    curve_spec: &str,
    bound: i64,
    terms: usize,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let (curve, name) = load_curve(curve_spec)?;
    if curve.field.is_rational() {
        bail!("analytic recognition requires a quadratic coefficient field");
    }
    let mut rows = Vec::new();
    let mut vals = [0.0f64; 2];
    for idx in [0u8, 1] {
        let ctx = analytic::periods(&curve, idx).map_err(|e| anyhow::anyhow!("{e}"))?;
        let a = analytic::analytic_a(&ctx, terms);
        let e2s = analytic::e2star(ctx.tau, terms);
        vals[idx as usize] = a.re;
        rows.push(json!({
            "embedding": idx,
            "w_real": ctx.w_real,
            "tau": { "re": ctx.tau.re, "im": ctx.tau.im },
            "omega1": { "re": ctx.omega1.re, "im": ctx.omega1.im },
            "omega2": { "re": ctx.omega2.re, "im": ctx.omega2.im },
            "e2star": { "re": e2s.re, "im": e2s.im },
            "A_float": a.re,
            "A_imag": a.im,
        }));
    }
    let recognized = analytic::recognize_quad(vals[0], vals[1], curve.field, bound);
    let doc = json!({
        "curve": curve_json(&curve, &name),
        "embeddings": rows,
        "A_recognized": recognized.as_ref().map(|x| x.to_string()),
    });
    emit(out, &serde_json::to_string_pretty(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}
