//! Complex-analytic cross-check: periods via the complex AGM, the
//! quasi-modular weight-2 series and its completion, the analytic Eisenstein
//! value, and recognition of the result as a quadratic-field element.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::exactnum::{QuadField, QuadRat};
use crate::weierstrass::CurveModel;

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticError {
    DegenerateCubic,
    NoConsistentPeriods(String),
    Embedding(String),
}

impl std::fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyticError::DegenerateCubic => write!(f, "cubic has a repeated root"),
            AnalyticError::NoConsistentPeriods(s) => {
                write!(f, "no AGM branch reproduced the curve: {s}")
            }
            AnalyticError::Embedding(s) => write!(f, "embedding failure: {s}"),
        }
    }
}

impl std::error::Error for AnalyticError {}

/// One real embedding of the coefficient field and the attached lattice data.
#[derive(Clone, Debug)]
pub struct EmbeddingContext {
    pub index: u8,
    pub w_real: f64,
    pub g2_c: Complex64,
    pub g3_c: Complex64,
    pub omega1: Complex64,
    pub omega2: Complex64,
    /// omega2/omega1 reduced to the fundamental domain, Im > 0.
    pub tau: Complex64,
}

/// Real embeddings of `a + b*w`; index 0 sends w to the smaller root.
pub fn embed_real(x: &QuadRat, field: &QuadField, index: u8) -> f64 {
    let (w0, w1) = field.real_roots();
    x.embed_real(if index == 0 { w0 } else { w1 })
}

fn sigma_table(power: u32, terms: usize) -> Vec<f64> {
    // sigma[n] = sum of d^power over divisors d of n, 1-indexed
    let mut table = vec![0f64; terms + 1];
    for d in 1..=terms {
        let dp = (d as f64).powi(power as i32);
        let mut m = d;
        while m <= terms {
            table[m] += dp;
            m += d;
        }
    }
    table
}

fn q_series(tau: Complex64, coeffs: impl Fn(usize) -> f64, terms: usize) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        qn *= q;
        acc += coeffs(n) * qn;
    }
    acc
}

/// Ramanujan's quasi-modular series `P(tau) = 1 - 24 sum sigma_1(n) q^n`.
pub fn ramanujan_p(tau: Complex64, terms: usize) -> Complex64 {
    let s1 = sigma_table(1, terms);
    Complex64::new(1.0, 0.0) - 24.0 * q_series(tau, |n| s1[n], terms)
}

/// The weight-2 completion `E2*(tau) = P(tau) - 3/(pi Im tau)`.
pub fn e2star(tau: Complex64, terms: usize) -> Complex64 {
    ramanujan_p(tau, terms) - Complex64::new(3.0 / (PI * tau.im), 0.0)
}

pub fn eisenstein_e4(tau: Complex64, terms: usize) -> Complex64 {
    let s3 = sigma_table(3, terms);
    Complex64::new(1.0, 0.0) + 240.0 * q_series(tau, |n| s3[n], terms)
}

pub fn eisenstein_e6(tau: Complex64, terms: usize) -> Complex64 {
    let s5 = sigma_table(5, terms);
    Complex64::new(1.0, 0.0) - 504.0 * q_series(tau, |n| s5[n], terms)
}

/// Klein j from the q-expansions.
pub fn j_from_tau(tau: Complex64, terms: usize) -> Complex64 {
    let e4 = eisenstein_e4(tau, terms);
    let e6 = eisenstein_e6(tau, terms);
    let e4c = e4 * e4 * e4;
    1728.0 * e4c / (e4c - e6 * e6)
}

/// Roots of the depressed cubic `x^3 + p x + q` by Durand-Kerner iteration.
fn cubic_roots(p: Complex64, q: Complex64) -> Result<[Complex64; 3], AnalyticError> {
    let eval = |x: Complex64| (x * x + p) * x + q;
    let scale = p.norm().sqrt().max(q.norm().cbrt()).max(1e-12);
    let seed = Complex64::new(0.4, 0.9) * scale;
    let mut r = [
        seed,
        seed * seed / scale,
        seed * seed * seed / (scale * scale),
    ];
    for _ in 0..200 {
        let mut delta_max = 0.0f64;
        for i in 0..3 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    denom *= r[i] - r[j];
                }
            }
            if denom.norm() < 1e-280 {
                return Err(AnalyticError::DegenerateCubic);
            }
            let step = eval(r[i]) / denom;
            r[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-14 * scale.max(1.0) {
            break;
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j && (r[i] - r[j]).norm() < 1e-10 * scale.max(1.0) {
                return Err(AnalyticError::DegenerateCubic);
            }
        }
    }
    Ok(r)
}

/// Optimal complex AGM: the square-root branch is chosen so that
/// |a - b| <= |a + b| at every step.
fn optimal_agm(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..80 {
        if (a - b).norm() <= 1e-16 * a.norm() {
            break;
        }
        let am = (a + b) / 2.0;
        let mut gm = (a * b).sqrt();
        if (am - gm).norm() > (am + gm).norm() {
            gm = -gm;
        }
        a = am;
        b = gm;
    }
    a
}

/// Reduce tau to the standard fundamental domain by translations and
/// inversions.
fn reduce_tau(mut tau: Complex64) -> Complex64 {
    for _ in 0..200 {
        let n = tau.re.round();
        tau.re -= n;
        if tau.norm_sqr() < 1.0 - 1e-12 {
            tau = -1.0 / tau;
        } else {
            break;
        }
    }
    tau
}

/// Lattice periods of `y^2 = 4x^3 - g2 x - g3` at a real embedding.
///
/// tau comes from the complex AGM on the cubic's root differences; the
/// branch/labeling ambiguity is resolved by requiring Im(omega2/omega1) > 0
/// and matching the j-invariant computed back from the q-expansion. The
/// scale of omega1 is then pinned by the weight-4/weight-6 relations
/// `g2 = (2 pi / omega1)^4 E4(tau)/12`, `g3 = (2 pi / omega1)^6 E6(tau)/216`.
pub fn periods(curve: &CurveModel, index: u8) -> Result<EmbeddingContext, AnalyticError> {
    let (w0, w1) = curve.field.real_roots();
    let w_real = if index == 0 { w0 } else { w1 };
    let g2_c = Complex64::new(curve.g2.embed_real(w_real), 0.0);
    let g3_c = Complex64::new(curve.g3.embed_real(w_real), 0.0);
    let j_c = Complex64::new(curve.j().embed_real(w_real), 0.0);

    let roots = cubic_roots(g2_c / -4.0, g3_c / -4.0)?;
    let terms = 80;

    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best: Option<(f64, Complex64)> = None;
    for perm in perms {
        let (e1, e2, e3) = (roots[perm[0]], roots[perm[1]], roots[perm[2]]);
        for sb in [1.0, -1.0] {
            for sc in [1.0, -1.0] {
                let a = (e1 - e3).sqrt();
                let b = (e1 - e2).sqrt() * sb;
                let c = (e2 - e3).sqrt() * sc;
                let m1 = optimal_agm(a, b);
                let m2 = optimal_agm(a, c);
                if m1.norm() < 1e-200 || m2.norm() < 1e-200 {
                    continue;
                }
                let om1 = PI / m1;
                let om2 = Complex64::new(0.0, PI) / m2;
                let mut tau = om2 / om1;
                if tau.im < 0.0 {
                    tau = -tau;
                }
                let tau = reduce_tau(tau);
                if tau.im <= 0.0 {
                    continue;
                }
                let jq = j_from_tau(tau, terms);
                let err = (jq - j_c).norm() / j_c.norm().max(1.0);
                if best.as_ref().is_none_or(|(e, _)| err < *e) {
                    best = Some((err, tau));
                }
            }
        }
    }
    let (err, tau) = best.ok_or_else(|| {
        AnalyticError::NoConsistentPeriods("no branch produced Im(tau) > 0".into())
    })?;
    if err > 1e-6 {
        return Err(AnalyticError::NoConsistentPeriods(format!(
            "best j mismatch {err:.3e}"
        )));
    }

    // pin the scale: omega1^2 = (2pi)^2 E6 g2 / (18 E4 g3)   (from the
    // weight-4 and weight-6 relations), with the quartic consistency check
    let e4 = eisenstein_e4(tau, terms);
    let e6 = eisenstein_e6(tau, terms);
    let two_pi = Complex64::new(2.0 * PI, 0.0);
    let om1_sq = two_pi * two_pi * e6 * g2_c / (18.0 * e4 * g3_c);
    let om1 = om1_sq.sqrt();
    let check = (two_pi / om1).powu(4) * e4 / 12.0;
    if (check - g2_c).norm() > 1e-6 * g2_c.norm().max(1.0) {
        return Err(AnalyticError::NoConsistentPeriods(format!(
            "scale check failed: {} vs {}",
            check, g2_c
        )));
    }
    Ok(EmbeddingContext {
        index,
        w_real,
        g2_c,
        g3_c,
        omega1: om1,
        omega2: tau * om1,
        tau,
    })
}

/// The analytic Eisenstein value `A = pi^2/(3 omega1^2) E2*(tau)`.
pub fn analytic_a(ctx: &EmbeddingContext, terms: usize) -> Complex64 {
    let pi2 = Complex64::new(PI * PI, 0.0);
    pi2 / (3.0 * ctx.omega1 * ctx.omega1) * e2star(ctx.tau, terms)
}

/// Best rational with numerator and denominator bounded by `bound`, by
/// continued fractions.
fn rational_approx(x: f64, bound: i64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if p1.abs() > bound || q1 > bound {
            return None.or(if q0 >= 1 && p0.abs() <= bound && q0 <= bound {
                Some((p0, q0))
            } else {
                None
            });
        }
        if frac.abs() < 1e-13 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as i64 * q1 + q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if p1.abs() <= bound && q1 <= bound && q1 >= 1 {
        Some((p1, q1))
    } else if p0.abs() <= bound && q0 <= bound && q0 >= 1 {
        Some((p0, q0))
    } else {
        None
    }
}

/// Recognize a pair of per-embedding real values as `a + b*w`: solve the 2x2
/// system against the two real roots, round each coordinate to a rational of
/// height <= bound, and verify the back-substitution to 1e-8.
pub fn recognize_quad(v0: f64, v1: f64, field: QuadField, bound: i64) -> Option<QuadRat> {
    let (w0, w1) = field.real_roots();
    let b = (v1 - v0) / (w1 - w0);
    let a = v0 - b * w0;
    let (an, ad) = rational_approx(a, bound)?;
    let (bn, bd) = rational_approx(b, bound)?;
    let cand = field.elem_rat(
        num_rational::BigRational::new(an.into(), ad.into()),
        num_rational::BigRational::new(bn.into(), bd.into()),
    );
    let scale0 = v0.abs().max(1.0);
    let scale1 = v1.abs().max(1.0);
    if (cand.embed_real(w0) - v0).abs() < 1e-8 * scale0
        && (cand.embed_real(w1) - v1).abs() < 1e-8 * scale1
    {
        Some(cand)
    } else {
        None
    }
}

/// Truncated direct lattice sums `g2 = 60 sum' m^-4`, `g3 = 140 sum' m^-6`
/// over `m = i omega1 + j omega2`, `|i|,|j| <= cutoff`. Test oracle for the
/// period computation.
pub fn lattice_invariants_direct(
    omega1: Complex64,
    omega2: Complex64,
    cutoff: i64,
) -> (Complex64, Complex64) {
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    for i in -cutoff..=cutoff {
        for j in -cutoff..=cutoff {
            if i == 0 && j == 0 {
                continue;
            }
            let m = omega1 * i as f64 + omega2 * j as f64;
            let m2 = m * m;
            let inv4 = 1.0 / (m2 * m2);
            s4 += inv4;
            s6 += inv4 / m2;
        }
    }
    (60.0 * s4, 140.0 * s6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> CurveModel {
        CurveModel::cm15()
    }

    #[test]
    fn golden_tau_imaginary_parts() {
        let c = curve();
        let ctx0 = periods(&c, 0).unwrap();
        let ctx1 = periods(&c, 1).unwrap();
        // sqrt(15)/4 and sqrt(15)/2
        assert!(
            (ctx0.tau.im - 0.968_245_836_551_854_2).abs() < 1e-10,
            "{}",
            ctx0.tau
        );
        assert!(
            (ctx1.tau.im - 1.9364916731037084).abs() < 1e-10,
            "{}",
            ctx1.tau
        );
        assert!(ctx0.tau.im > 0.0 && ctx1.tau.im > 0.0);
    }

    #[test]
    fn ramanujan_p_at_i_and_e2star_covariance() {
        // P(i) = 3/pi (so the completed series vanishes at the fixed point)
        let i = Complex64::new(0.0, 1.0);
        let p = ramanujan_p(i, 60);
        assert!((p.re - 3.0 / PI).abs() < 1e-12 && p.im.abs() < 1e-12, "{p}");
        let e = e2star(i, 60);
        assert!(e.norm() < 1e-12, "{e}");

        // weight-2 covariance: E2*(-1/tau) = tau^2 E2*(tau)
        let tau = Complex64::new(0.3, 1.1);
        let lhs = e2star(-1.0 / tau, 120);
        let rhs = tau * tau * e2star(tau, 120);
        assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");

        // q -> 0 limit: P -> 1 exponentially, the non-holomorphic correction
        // like 1/Im, so E2* -> 1 as Im grows
        let p_far = ramanujan_p(Complex64::new(0.1, 40.0), 30);
        assert!((p_far - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let far = e2star(Complex64::new(0.1, 40.0), 30);
        assert!((far - Complex64::new(1.0, 0.0)).norm() < 3.0 / (PI * 40.0) + 1e-15);
        let farther = e2star(Complex64::new(0.1, 1e9), 30);
        assert!((farther - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn analytic_value_matches_embedded_golden() {
        let c = curve();
        let expect = QuadRat::parse("13/2 + 21/2*w", c.field).unwrap();
        let mut vals = [0.0f64; 2];
        for idx in [0u8, 1] {
            let ctx = periods(&c, idx).unwrap();
            let a = analytic_a(&ctx, 130);
            let target = embed_real(&expect, &c.field, idx);
            assert!(a.im.abs() < 1e-9, "analytic value should be real, got {a}");
            assert!(
                (a.re - target).abs() < 1e-8,
                "embedding {idx}: {} vs {}",
                a.re,
                target
            );
            vals[idx as usize] = a.re;
        }
        let rec = recognize_quad(vals[0], vals[1], c.field, 25).unwrap();
        assert_eq!(rec, expect);
    }

    #[test]
    fn lattice_sums_reproduce_invariants() {
        let c = curve();
        for idx in [0u8, 1] {
            let ctx = periods(&c, idx).unwrap();
            let (g2s, g3s) = lattice_invariants_direct(ctx.omega1, ctx.omega2, 600);
            // direct sums converge like cutoff^-2; 600 gives ~1e-6 relative
            assert!(
                (g2s - ctx.g2_c).norm() < 2e-5 * ctx.g2_c.norm().max(1.0),
                "embedding {idx}: g2 {} vs {}",
                g2s,
                ctx.g2_c
            );
            assert!(
                (g3s - ctx.g3_c).norm() < 2e-5 * ctx.g3_c.norm().max(1.0),
                "embedding {idx}: g3 {} vs {}",
                g3s,
                ctx.g3_c
            );
        }
    }

    #[test]
    fn j_sanity_from_q_series() {
        let c = curve();
        for idx in [0u8, 1] {
            let ctx = periods(&c, idx).unwrap();
            let j_emb = Complex64::new(c.j().embed_real(ctx.w_real), 0.0);
            let jq = j_from_tau(ctx.tau, 80);
            assert!((jq - j_emb).norm() < 1e-6 * j_emb.norm().max(1.0));
        }
    }

    #[test]
    fn recognition_round_trip() {
        let f = QuadField::golden();
        let (w0, w1) = f.real_roots();
        assert_eq!(recognize_quad(1.0, 1.0, f, 10), Some(f.one()));
        let mut seed = 0x2468_1357u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let an = (next() % 41) as i64 - 20;
            let ad = (next() % 9) as i64 + 1;
            let bn = (next() % 41) as i64 - 20;
            let bd = (next() % 9) as i64 + 1;
            let x = f.elem_rat(
                num_rational::BigRational::new(an.into(), ad.into()),
                num_rational::BigRational::new(bn.into(), bd.into()),
            );
            // embed with a touch of noise
            let v0 = x.embed_real(w0) + 1e-12;
            let v1 = x.embed_real(w1) - 1e-12;
            assert_eq!(recognize_quad(v0, v1, f, 25), Some(x));
        }
        // unrecognizable: none
        assert_eq!(recognize_quad(0.123456789, 9.87654321, f, 6), None);
    }
}
