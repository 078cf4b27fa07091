//! Exact arithmetic: arbitrary-precision rationals over a real quadratic
//! field, Kronecker symbol, Frobenius action, p-adic valuations, Hensel
//! lifting, CRT, rational reconstruction, and the scaled p-adic fast domain.

pub mod kronecker;
pub mod modular;
pub mod padic;
pub mod place;
pub mod quad;

pub use kronecker::kronecker;
pub use modular::{
    crt_combine, crt_combine_pair, hensel_lift_root, inv_mod_u64, rational_reconstruction, vp_int,
    vp_rat, QuadModPk, QuadResidue, ZmodPk,
};
pub use padic::{PadicDomain, PadicScaled};
pub use place::{CoeffSplitting, PlaceContext, ResidueCtx};
pub use quad::{QuadField, QuadRat};

/// Errors from the exact-arithmetic layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    BadField(String),
    BadPrime(String),
    Ramified(u64),
    DivisionByZero,
    NotAUnit(String),
    NoSplitRoot(String),
    NonCoprimeModuli(String),
    PrecisionExhausted,
    NotIntegral,
    Parse(String),
}

impl std::fmt::Display for ExactError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactError::BadField(s) => write!(f, "invalid quadratic field: {s}"),
            ExactError::BadPrime(s) => write!(f, "invalid prime: {s}"),
            ExactError::Ramified(p) => write!(f, "prime {p} ramifies in the coefficient field"),
            ExactError::DivisionByZero => write!(f, "division by zero"),
            ExactError::NotAUnit(s) => write!(f, "not a unit: {s}"),
            ExactError::NoSplitRoot(s) => write!(f, "no split root: {s}"),
            ExactError::NonCoprimeModuli(s) => write!(f, "moduli not coprime: {s}"),
            ExactError::PrecisionExhausted => write!(f, "p-adic precision exhausted"),
            ExactError::NotIntegral => write!(f, "element is not p-integral"),
            ExactError::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for ExactError {}
