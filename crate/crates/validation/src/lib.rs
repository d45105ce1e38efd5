//! Exact oracles for the orthogonality, attainment and pairing computations
//! of `bsa-core`, written independently of the library, and the acceptance
//! suite built on them (`cargo test -p bsa-validation --test acceptance`).

pub mod oracle;

#[cfg(test)]
mod parity;
