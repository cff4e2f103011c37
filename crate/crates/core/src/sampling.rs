//! Seeded random classes for property trials.

use num_bigint::BigInt;
use rand::Rng;

use crate::graded_poly::{Monomial, Poly};
use crate::quotient_ring::RingPresentation;

pub const MAX_TERMS: usize = 5;
pub const MAX_COEFFICIENT: i64 = 9;

/// Random combination of at most five basis monomials of `degree`, with
/// coefficients in `-9..=9`. Zero when the degree has no basis.
pub fn random_from_basis<R: Rng + ?Sized>(
    ring: &RingPresentation,
    basis: &[Monomial],
    rng: &mut R,
) -> Poly {
    let mut p = ring.zero();
    if basis.is_empty() {
        return p;
    }
    let n = rng.gen_range(1..=MAX_TERMS);
    for _ in 0..n {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        let c = rng.gen_range(-MAX_COEFFICIENT..=MAX_COEFFICIENT);
        p.add_term(m, BigInt::from(c));
    }
    p
}

pub fn random_homogeneous<R: Rng + ?Sized>(
    ring: &RingPresentation,
    degree: u32,
    rng: &mut R,
) -> Poly {
    random_from_basis(ring, &ring.basis(degree), rng)
}

/// A degree in `0..=max` with a nonempty basis, if any.
pub fn random_degree<R: Rng + ?Sized>(ring: &RingPresentation, max: u32, rng: &mut R) -> u32 {
    let candidates: Vec<u32> = (0..=max.min(ring.dimension()))
        .filter(|d| !ring.basis(*d).is_empty())
        .collect();
    if candidates.is_empty() {
        0
    } else {
        candidates[rng.gen_range(0..candidates.len())]
    }
}
