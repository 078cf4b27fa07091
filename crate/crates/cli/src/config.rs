//! Job configuration: curve fixtures/files, prime-set parsing, and the
//! knobs shared by the verification subcommands.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use e2p_core::eisenstein::{classify_prime, PrimeClass};
use e2p_core::exactnum::modular::is_prime;
use e2p_core::{CurveModel, QuadField, QuadRat};

/// Curve description as stored in TOML fixtures.
#[derive(Debug, Deserialize)]
pub struct CurveFile {
    pub name: Option<String>,
    pub s: i64,
    pub t: i64,
    pub g2: String,
    pub g3: String,
    pub d_k: i64,
    pub conductor: i64,
}

pub const BUNDLED_CM15: &str = include_str!("../fixtures/cm15.toml");

/// Load a curve by bundled fixture name or TOML path.
pub fn load_curve(spec: &str) -> Result<(CurveModel, String)> {
    let text = if spec == "cm15" {
        BUNDLED_CM15.to_string()
    } else {
        std::fs::read_to_string(spec)
            .with_context(|| format!("reading curve file `{spec}` (or unknown fixture name)"))?
    };
    let file: CurveFile = toml::from_str(&text).context("parsing curve TOML")?;
    let field = QuadField::new(file.s, file.t).map_err(|e| anyhow::anyhow!("{e}"))?;
    let g2 = QuadRat::parse(&file.g2, field).map_err(|e| anyhow::anyhow!("g2: {e}"))?;
    let g3 = QuadRat::parse(&file.g3, field).map_err(|e| anyhow::anyhow!("g3: {e}"))?;
    let curve = CurveModel::new(field, g2, g3, file.d_k, file.conductor)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let name = file.name.unwrap_or_else(|| spec.to_string());
    Ok((curve, name))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PrimeFilter {
    /// Every prime in range, bad ones included (classification-only reports).
    All,
    /// Every good prime in range (ordinary and supersingular).
    AllGood,
    Ordinary,
    Supersingular,
}

/// Parse `--primes`: an explicit comma list keeps every entry (bad primes
/// yield classification-only reports); a range `lo..hi` is filtered.
pub fn parse_primes(spec: &str, filter: PrimeFilter, curve: &CurveModel) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo.trim().parse().context("range start")?;
        let hi: u64 = hi.trim().parse().context("range end")?;
        if lo > hi {
            bail!("empty prime range {lo}..{hi}");
        }
        for p in lo..=hi {
            if !is_prime(p) {
                continue;
            }
            let class = classify_prime(curve, p);
            let keep = match filter {
                PrimeFilter::All => true,
                PrimeFilter::AllGood => class != PrimeClass::Bad,
                PrimeFilter::Ordinary => class == PrimeClass::Ordinary,
                PrimeFilter::Supersingular => class == PrimeClass::Supersingular,
            };
            if keep {
                out.push(p);
            }
        }
        if out.is_empty() {
            bail!("no primes matching the filter in {lo}..{hi}");
        }
    } else {
        for tok in spec.split(',') {
            let p: u64 = tok
                .trim()
                .parse()
                .with_context(|| format!("prime `{tok}`"))?;
            out.push(p);
        }
        out.sort_unstable();
        out.dedup();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DomainChoice {
    /// Exact quadratic-rational coefficients.
    Exact,
    /// Scaled p-adic residues (per-prime, advisory).
    Fast,
    /// Run both and require agreement.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlaceChoice {
    #[value(name = "0")]
    First,
    #[value(name = "1")]
    Second,
    Both,
}

/// Write to the path or stdout; always newline-terminated.
pub fn emit(out: &Option<std::path::PathBuf>, body: &str) -> Result<()> {
    let body = if body.ends_with('\n') {
        body.to_string()
    } else {
        format!("{body}\n")
    };
    match out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {path:?}"))?,
        None => print!("{body}"),
    }
    Ok(())
}
