//! Seeded generators for random instances. Every random quantity is a dyadic
//! rational so that all downstream checks stay exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::spaces::{Atom, Measure, PLFunction, SparseSeq, StepFunction};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for instance `i` of a suite seeded with `seed`.
pub fn stream(seed: u64, i: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Uniform on the dyadics `k / 2^bits` in [0, 1].
pub fn dyadic_unit<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Scalar {
    let k: u64 = rng.gen_range(0..=(1u64 << bits));
    Scalar::new(BigInt::from(k), pow2(bits))
}

/// Uniform on the dyadics `k / 2^bits` in [-1, 1].
pub fn dyadic<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Scalar {
    let n = 1i64 << bits;
    let k: i64 = rng.gen_range(-n..=n);
    Scalar::new(BigInt::from(k), pow2(bits))
}

/// Like [`dyadic`] but never zero.
pub fn dyadic_nonzero<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Scalar {
    loop {
        let v = dyadic(rng, bits);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Dyadic in the open interval (0, 1).
pub fn dyadic_open_unit<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Scalar {
    let n = 1u64 << bits;
    let k: u64 = rng.gen_range(1..n);
    Scalar::new(BigInt::from(k), pow2(bits))
}

/// Geometric size with success probability `p`, at least 1 and at most `cap`.
pub fn geometric<R: Rng + ?Sized>(rng: &mut R, p: f64, cap: usize) -> usize {
    let mut n = 1;
    while n < cap && !rng.gen_bool(p) {
        n += 1;
    }
    n
}

/// Random partition of [0,1] into `pieces` pieces with dyadic breakpoints.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, pieces: usize, bits: u32) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> = (1..pieces).map(|_| dyadic_open_unit(rng, bits)).collect();
    pts.push(Scalar::zero());
    pts.push(Scalar::one());
    pts.sort();
    pts.dedup();
    pts
}

/// Sequence with `len` nonzero dyadic entries on indices drawn from 1..=`max_index`.
pub fn sparse_seq<R: Rng + ?Sized>(rng: &mut R, len: usize, max_index: usize, bits: u32) -> SparseSeq {
    let mut entries = Vec::with_capacity(len);
    for _ in 0..len {
        entries.push((rng.gen_range(1..=max_index), dyadic_nonzero(rng, bits)));
    }
    let x = SparseSeq::from_entries(entries).expect("indices start at 1");
    if x.is_zero() {
        SparseSeq::from_entries([(1, Scalar::one())]).unwrap()
    } else {
        x
    }
}

pub fn step_function<R: Rng + ?Sized>(rng: &mut R, pieces: usize, bits: u32) -> StepFunction {
    let bp = partition(rng, pieces, 4);
    let vals = (1..bp.len()).map(|_| dyadic(rng, bits)).collect();
    StepFunction::new(bp, vals).expect("valid partition")
}

pub fn pl_function<R: Rng + ?Sized>(rng: &mut R, pieces: usize, bits: u32) -> PLFunction {
    let nodes = partition(rng, pieces, 4);
    let vals = nodes.iter().map(|_| dyadic(rng, bits)).collect();
    PLFunction::new(nodes, vals).expect("valid nodes")
}

pub fn measure<R: Rng + ?Sized>(rng: &mut R, atoms: usize, pieces: usize, bits: u32) -> Measure {
    let mut locs: Vec<Scalar> = (0..atoms).map(|_| dyadic_unit(rng, 4)).collect();
    locs.sort();
    locs.dedup();
    let atoms = locs
        .into_iter()
        .map(|location| Atom {
            location,
            weight: dyadic_nonzero(rng, bits),
        })
        .collect();
    let density = if pieces == 0 {
        StepFunction::zero()
    } else {
        step_function(rng, pieces, bits)
    };
    Measure::new(atoms, density).expect("distinct atoms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_are_reproducible() {
        let a: Vec<Scalar> = (0..5).map(|_| dyadic(&mut rng(7), 6)).collect();
        let b: Vec<Scalar> = (0..5).map(|_| dyadic(&mut rng(7), 6)).collect();
        assert_eq!(a, b);
        let mut s0 = stream(7, 0);
        let mut s1 = stream(7, 1);
        let x: Vec<u64> = (0..4).map(|_| s0.gen()).collect();
        let y: Vec<u64> = (0..4).map(|_| s1.gen()).collect();
        assert_ne!(x, y);
    }

    #[test]
    fn generators_respect_ranges() {
        let mut r = rng(1);
        for _ in 0..200 {
            let v = dyadic(&mut r, 5);
            assert!(v >= -Scalar::one() && v <= Scalar::one());
            let u = dyadic_open_unit(&mut r, 5);
            assert!(u > Scalar::zero() && u < Scalar::one());
            assert!(geometric(&mut r, 0.5, 6) <= 6);
        }
        let f = step_function(&mut r, 5, 4);
        assert!(f.breakpoints().len() <= 6);
    }
}
