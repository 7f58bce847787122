//! Class polynomial residues at the handful of primes whose supersingular
//! locus is a single rational j-invariant.
//!
//! At such a prime q, every root of H_D mod q for an inert q is forced onto
//! that one j-invariant, so the residue is (X - j)^h with no curve work at
//! all. The table is tiny and is re-derived by exhaustive point counts the
//! first time it is used.

use crate::error::{Error, Result};
use crate::gfpoly::PolyModP;
use crate::quadform::{class_number, Discriminant};
use std::sync::OnceLock;

/// Primes with exactly one supersingular j-invariant, and that invariant.
const TABLE: [(u64, u64); 5] = [(2, 0), (3, 0), (5, 0), (7, 6), (13, 5)];

/// The verified table. The first call recomputes the supersingular locus of
/// every listed prime from scratch and panics on any disagreement, so a
/// corrupted constant cannot quietly poison downstream residues.
pub fn supersingular_j_table() -> &'static [(u64, u64)] {
    static VERIFIED: OnceLock<()> = OnceLock::new();
    VERIFIED.get_or_init(|| {
        for &(q, j) in &TABLE {
            let found = supersingular_j_set(q);
            assert_eq!(found, vec![j], "supersingular locus over F_{q}");
        }
    });
    &TABLE
}

/// All j-invariants over F_q carried by some curve with q + 1 points,
/// sorted. Exhaustive over every curve shape, so it is the ground truth the
/// table is checked against.
fn supersingular_j_set(q: u64) -> Vec<u64> {
    let mut found: Vec<u64> = if q < 5 {
        long_weierstrass_sweep(q)
    } else {
        short_weierstrass_sweep(q)
    };
    found.sort_unstable();
    found.dedup();
    found
}

/// Characteristic 2 and 3 need the five-coefficient curve shape; the count
/// walks every (x, y) pair directly.
fn long_weierstrass_sweep(q: u64) -> Vec<u64> {
    let qi = q as i64;
    let m = |x: i64| x.rem_euclid(qi) as u64;
    let mut found = Vec::new();
    for a1 in 0..qi {
        for a2 in 0..qi {
            for a3 in 0..qi {
                for a4 in 0..qi {
                    for a6 in 0..qi {
                        let b2 = a1 * a1 + 4 * a2;
                        let b4 = 2 * a4 + a1 * a3;
                        let b6 = a3 * a3 + 4 * a6;
                        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
                        let disc =
                            -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
                        if m(disc) == 0 {
                            continue;
                        }
                        let mut count = 1u64;
                        for x in 0..qi {
                            for y in 0..qi {
                                let lhs = y * y + a1 * x * y + a3 * y;
                                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                                if m(lhs - rhs) == 0 {
                                    count += 1;
                                }
                            }
                        }
                        if count == q + 1 {
                            let c4 = b2 * b2 - 24 * b4;
                            let c4_cubed = m(c4) * m(c4) % q * m(c4) % q;
                            let inv = crate::arith::invmod(m(disc), q)
                                .expect("discriminant was checked nonzero");
                            found.push(c4_cubed * inv % q);
                        }
                    }
                }
            }
        }
    }
    found
}

fn short_weierstrass_sweep(q: u64) -> Vec<u64> {
    let mut found = Vec::new();
    for a in 0..q {
        for b in 0..q {
            match crate::ecfp::CurveFp::new(q, a, b) {
                Ok(curve) => {
                    if curve.exhaustive_count() == q + 1 {
                        found.push(curve.j_invariant());
                    }
                }
                Err(_) => continue,
            }
        }
    }
    found
}

/// H_D mod q for an inert prime q from the table: (X - j)^h(D).
pub fn hilbert_mod_q_trivial(d: &Discriminant, q: u64) -> Result<PolyModP> {
    let table = supersingular_j_table();
    let Some(&(_, j)) = table.iter().find(|(prime, _)| *prime == q) else {
        return Err(Error::NoUniqueSupersingular { q });
    };
    if d.symbol(q) != -1 {
        return Err(Error::SplitOrRamified {
            q,
            d: d.value().clone(),
        });
    }
    let factor = PolyModP::new(q, vec![(q - j) % q, 1]);
    let mut poly = PolyModP::one(q);
    for _ in 0..class_number(d) {
        poly = poly.mul(&factor);
    }
    Ok(poly)
}
