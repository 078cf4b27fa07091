//! Expand the bundled curve and verify the weight-2 value at a few primes.
//!
//!     cargo run --release --example verify_curve -- 200

use e2p_core::eisenstein::{classify_prime, verify_theorem, PrimeClass};
use e2p_core::weierstrass::exact_expansion;
use e2p_core::{CurveModel, PlaceContext, QuadRat};
use std::time::Instant;

fn main() {
    let n: i64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let curve = CurveModel::cm15();
    let a = QuadRat::parse("13/2 + 21/2*w", curve.field).unwrap();

    let t0 = Instant::now();
    let exp = exact_expansion(&curve, n).unwrap();
    println!("expanded to {n} terms in {:.2?}", t0.elapsed());

    for p in (5..30).filter(|&p| classify_prime(&curve, p) != PrimeClass::Bad) {
        let k = if (p as i64).pow(3) <= n { 2 } else { 1 };
        let ctx = PlaceContext::new(curve.field, curve.d_k, curve.conductor, p, k, 0).unwrap();
        let report = verify_theorem(&exp, &curve, &ctx, &a, n, k).unwrap();
        println!(
            "p = {:>2} ({:>13}): ok = {}{}",
            p,
            report.class.to_string(),
            report.ok,
            report.mu.map(|m| format!(", mu = {m}")).unwrap_or_default()
        );
    }
}
