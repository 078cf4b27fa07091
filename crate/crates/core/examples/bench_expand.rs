use std::time::Instant;

fn main() {
    let n: i64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let curve = e2p_core::CurveModel::cm15();
    let t0 = Instant::now();
    let exp = e2p_core::weierstrass::exact_expansion(&curve, n).unwrap();
    println!("expand({n}) took {:?}", t0.elapsed());
    println!(
        "b({}) digits ~ {}",
        n - 1,
        exp.b(n - 1).a.numer().to_string().len()
    );
}
