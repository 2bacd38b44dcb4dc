//! Seeded random elements for property checks and explorers.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{make_element, Algebra, AlgebraElement};
use crate::coeff::{Coefficient, FieldSpec};
use crate::poly::{PolyRing, Polynomial};

/// A nonzero coefficient: `-5..=5` over Q, any nonzero residue over F_p.
pub fn random_coefficient<R: Rng>(field: FieldSpec, rng: &mut R) -> Coefficient {
    let p = field.characteristic();
    let v = if p == 0 {
        let v = rng.random_range(1..=5i64);
        if rng.random_bool(0.5) {
            -v
        } else {
            v
        }
    } else {
        rng.random_range(1..p) as i64
    };
    Coefficient::from_i64(v, field)
}

/// Random exponent vector of total degree `<= max_degree` (uniform degree first).
pub fn random_exponents<R: Rng>(nvars: usize, max_degree: u32, rng: &mut R) -> Vec<i32> {
    let mut e = vec![0i32; nvars];
    if nvars == 0 {
        return e;
    }
    let d = rng.random_range(0..=max_degree);
    for _ in 0..d {
        e[rng.random_range(0..nvars)] += 1;
    }
    e
}

/// Polynomial with at most `max_terms` terms of total degree `<= max_degree`.
pub fn random_polynomial<R: Rng>(ring: &Arc<PolyRing>, max_degree: u32, max_terms: usize, rng: &mut R) -> Polynomial {
    let n = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..n)
        .map(|_| (random_exponents(ring.nvars(), max_degree, rng), random_coefficient(ring.field(), rng)))
        .collect();
    Polynomial::from_terms(ring, terms).expect("exponents are nonnegative")
}

/// Random element of `algebra` (normal form of a random polynomial; may be zero).
pub fn random_element<R: Rng>(algebra: &Algebra, max_degree: u32, max_terms: usize, rng: &mut R) -> AlgebraElement {
    let p = random_polynomial(algebra.ring(), max_degree, max_terms, rng);
    make_element(algebra, &p).expect("polynomial lives in the algebra's ring")
}

/// Nonzero random element; retries until a nonzero normal form appears.
pub fn random_nonzero<R: Rng>(algebra: &Algebra, max_degree: u32, max_terms: usize, rng: &mut R) -> AlgebraElement {
    loop {
        let a = random_element(algebra, max_degree, max_terms, rng);
        if !a.is_zero() {
            return a;
        }
    }
}

/// Random polynomial expression in `gens` (products of at most `max_degree` factors).
pub fn random_in_subalgebra<R: Rng>(
    gens: &[AlgebraElement],
    max_degree: u32,
    max_terms: usize,
    rng: &mut R,
) -> AlgebraElement {
    let algebra = gens[0].owner().clone();
    let n = rng.random_range(1..=max_terms.max(1));
    let mut acc = algebra.zero();
    for _ in 0..n {
        let e = random_exponents(gens.len(), max_degree, rng);
        let mut term = algebra.scalar(random_coefficient(algebra.field(), rng));
        for (g, &k) in gens.iter().zip(&e) {
            term = &term * &g.pow(k as u32);
        }
        acc = &acc + &term;
    }
    acc
}
