//! Exact-arithmetic toolkit for degree-five orthogonal hypergeometric groups.
//!
//! The crate enumerates the 77 pairs of cyclotomic parameters up to scalar
//! shift, computes their invariant quadratic forms and ℚ-ranks, and verifies
//! the 23 unipotent arithmeticity certificates shipped in `data/`.

pub mod census;
pub mod certify;
pub mod cyclo;
pub mod exactlin;
pub mod hgcore;
pub mod witt;
pub mod wordlang;

pub use exactlin::{Mat, Rat, SymMat};

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Space-separated rational list in the `p/q` format.
pub fn fmt_rats(v: &[Rat]) -> String {
    v.iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}
