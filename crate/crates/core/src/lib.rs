//! Partial weight spectra of polar, PAC, and pre-transformed polar codes,
//! with puncturing and shortening, via coset weight-enumerator message
//! passing over the kernel factor graph.
//!
//! The pipeline: [`CodeSpec`] fixes the code (kernel depth, frozen set,
//! length-matching pattern, pre-transform); [`CosetEvaluator`] answers
//! weight-enumerator and minimum-weight queries for any input prefix;
//! [`enumerate_spectrum`] unions the final-stage cosets into every `A_w`
//! with `w ≤ w_end`, discarding branches that provably contribute nothing.
//! All counts are exact big integers.

pub mod code;
pub mod coset;
pub mod gf2;
pub mod oracle;
pub mod poly;
pub mod spectrum;

pub use code::{CodeSpec, Mode, PreTransform, UpperTriangular};
pub use coset::{
    check_combine, coset_min_weight, coset_rwef, leaf_init, var_combine, CoordStatus,
    CosetEvaluator, Message, MinWeight, Semantics,
};
pub use gf2::{bit_reversal, kron_row, prefix_image, rank_profile, BitVector, RankProfile};
pub use oracle::{brute_coset, brute_spectrum, OracleLimits};
pub use poly::{wp_add, wp_div_pow2, wp_lowest, wp_lp, wp_mul_trunc, Monomial, WeightPoly};
pub use spectrum::{
    enumerate_spectrum, enumerate_spectrum_with, find_min_distance, EnumOptions, PrefixEntry,
    RunStats, SpectrumResult,
};

/// Unified error type for the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("prefix of length {got} exceeds maximum {max}")]
    PrefixTooLong { got: usize, max: usize },
    #[error("prefix length {got} does not match expected {want}")]
    PrefixLenMismatch { got: usize, want: usize },
    #[error("weight cap mismatch: {a} vs {b}")]
    CapMismatch { a: u32, b: u32 },
    #[error("count at weight {degree} is not divisible by 2^{k}")]
    NonDivisibleCount { degree: u32, k: u32 },
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("shortening constraint violated: coordinate {coord} is nonzero")]
    ShorteningViolated { coord: usize },
    #[error("prefix list grew to {size}, above the cap {cap}, at stage {stage}")]
    ListCapExceeded { size: usize, cap: usize, stage: usize },
    #[error("code has no information bits")]
    AllFrozen,
    #[error("enumeration needs {needed} free bits, above the limit {limit}")]
    EnumerationLimit { needed: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
