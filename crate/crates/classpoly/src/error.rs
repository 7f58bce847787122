//! Error type shared by the whole crate.

use rug::Integer;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: need D < 0 and D congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(Integer),

    #[error("invalid quadratic form ({a}, {b}, {c}): {reason}")]
    InvalidForm {
        a: Integer,
        b: Integer,
        c: Integer,
        reason: String,
    },

    #[error("prime {ell} is inert for discriminant {d}")]
    InertPrime { ell: u64, d: Integer },

    #[error("prime {ell} divides the conductor of discriminant {d}")]
    ConductorPrime { ell: u64, d: Integer },

    #[error("prime {q} does not stay inert for discriminant {d}")]
    SplitOrRamified { q: u64, d: Integer },

    #[error("prime {q} carries more than one supersingular j-invariant")]
    NoUniqueSupersingular { q: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} divides discriminant {d}")]
    DividesDiscriminant { p: u64, d: Integer },

    #[error("prime {p} is at or below the certification threshold 457")]
    MestreThreshold { p: u64 },

    #[error("witness equation 4p = u^2 - v^2 D fails for p={p}, u={u}, v={v}")]
    BadWitness { p: u64, u: u64, v: u64 },

    #[error("no generator decomposition found for discriminant {d}: {detail}")]
    ClassGroup { d: Integer, detail: String },

    #[error("multiple {m} does not annihilate the point")]
    BadOrderMultiple { m: u64 },

    #[error("cardinality of the curve could not be certified over F_{p}")]
    CardinalityUncertified { p: u64 },

    #[error(
        "no curve with the requested endomorphism ring found over F_{p} after {trials} candidates"
    )]
    SearchExhausted { p: u64, trials: u64 },

    #[error("fell off the crater: {roots} rational roots at a degree-{ell} step over F_{p}")]
    CraterStep { ell: u64, p: u64, roots: usize },

    #[error(
        "no admissible degree-{ell} neighbor while adjusting the endomorphism ring over F_{p}"
    )]
    NoAdmissibleNeighbor { ell: u64, p: u64 },

    #[error("conjugate orbit over F_{p} has {got} distinct values, expected {expected}")]
    OrbitCollision { p: u64, expected: usize, got: usize },

    #[error("level {ell} exceeds the configured modular polynomial maximum {max}")]
    LevelTooLarge { ell: u64, max: u64 },

    #[error("modular polynomial for level {ell} did not stabilize at {bits} bits")]
    ModPolyUnstable { ell: u64, bits: u32 },

    #[error("floating-point precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("no cached modular polynomial for level {ell} at {path}")]
    CacheMissing { ell: u64, path: PathBuf },

    #[error("cache entry for level {ell} fails integrity check: {invariant}")]
    CacheIntegrity { ell: u64, invariant: String },

    #[error("residue degrees disagree: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("moduli {p} and {q} are not coprime")]
    NonCoprimeModuli { p: u64, q: u64 },

    #[error("combined polynomial disagrees with its own residue mod {p}")]
    RoundTrip { p: u64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
