//! Exact-arithmetic klt verdicts for B-stable pairs on flag and
//! horospherical varieties.
//!
//! Everything here is combinatorial: root systems are built from Cartan
//! matrices, flag varieties are represented by their parabolic data,
//! horospherical varieties by colored fans. Discrepancies are computed as
//! exact rationals; no floating point appears anywhere.
//!
//! The crate is organized as a library with runnable examples (see
//! `examples/`) and one thin CLI binary (`kltpairs`).

pub mod cli;
pub mod flagklt;
pub mod horoklt;
pub mod ledger;
pub mod oracle;
pub mod rootcore;
pub mod toricres;

pub(crate) mod linalg;

use num_traits::{One, Signed, Zero};

/// The one rational type used throughout. Ranks are capped at 8 per simple
/// component and fans at rank 4, so 64-bit numerators never get close to
/// overflow.
pub type Rat = num_rational::Rational64;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// Canonical exact string form: `p/q` reduced, or just `p` when q = 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or a bare integer. Floats are rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("not an exact rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse_int(p)?, parse_int(q)?);
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn is_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unsupported rank: {0}")]
    UnsupportedRank(String),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("word is not reduced")]
    NotReducedWord,
    #[error("not a character of P: pairs nonzero with simple root a{}", .0 + 1)]
    NotPCharacter(usize),
    #[error("boundary coefficient out of range: {0}")]
    CoefficientOutOfRange(String),
    #[error("cone {0} is not simplicial")]
    NonSimplicial(usize),
    #[error("divisor is not Q-Cartier on cone {0}")]
    NotQCartier(usize),
    #[error("fan rank {0} exceeds the supported cap of 4")]
    RankCapExceeded(usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
