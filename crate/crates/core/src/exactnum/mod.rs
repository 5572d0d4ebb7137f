//! Exact arithmetic for the face metric: the field Q(√2, √3) and sums of
//! square roots of its nonnegative elements.

mod qfield;
mod parse;
mod radical;
mod rational;

pub use parse::{parse_radical, ParseError};
pub use qfield::QField;
pub use radical::{
    cmp_radical_sums, max_precision_bits, set_max_precision_bits, CertInterval, RadicalSum, Term,
    Undecided, DEFAULT_MAX_PRECISION_BITS,
};
pub use rational::rat;
