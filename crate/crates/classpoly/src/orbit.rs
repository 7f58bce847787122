//! Galois orbits of CM j-invariants over F_p and the split-prime residues
//! of the class polynomial they multiply out to.

use crate::ecfp::{self, find_cm_j};
use crate::error::{Error, Result};
use crate::gfpoly::{product_from_roots, PolyModP};
use crate::modpoly::ModPolyCache;
use crate::primesel::SplitPrimeWitness;
use crate::quadform::{decompose_class_group, ClassGroupDecomposition, Discriminant};

/// The complete set of roots of the class polynomial mod p, in the order the
/// generator walk produced them, together with the schedule that drove it.
#[derive(Debug, Clone)]
pub struct ConjugateOrbit {
    p: u64,
    j_values: Vec<u64>,
    schedule: ClassGroupDecomposition,
}

impl ConjugateOrbit {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn j_values(&self) -> &[u64] {
        &self.j_values
    }

    pub fn schedule(&self) -> &ClassGroupDecomposition {
        &self.schedule
    }
}

/// Expand one starting j-invariant into the whole orbit by walking roots of
/// modular polynomials, one class group generator at a time.
///
/// A generator of norm ell and order n multiplies the orbit by n: every
/// member collected so far seeds a chain of n - 1 steps through roots of
/// Phi_ell(X, current), never stepping back onto the predecessor. A chain
/// start on a split norm sees two fresh roots and commits to the numerically
/// smaller one; afterwards the predecessor uses up one of the two (the norms
/// are chosen coprime to p and to the witness v, so the walk stays on a flat
/// surface with at most two rational roots per vertex). Any other root count
/// means the walk fell off the crater.
pub fn walk_conjugates(
    j0: u64,
    schedule: &ClassGroupDecomposition,
    cache: &ModPolyCache,
    p: u64,
) -> Result<ConjugateOrbit> {
    walk_oriented(j0, schedule, cache, p, false)
}

/// As `walk_conjugates`, but optionally flipping the two-fresh-roots choice
/// at chain starts. The orbit is a set; traversing each cycle in the
/// opposite direction must reproduce it, and tests pin that down.
pub(crate) fn walk_oriented(
    j0: u64,
    schedule: &ClassGroupDecomposition,
    cache: &ModPolyCache,
    p: u64,
    flip_first: bool,
) -> Result<ConjugateOrbit> {
    let mut orbit = vec![j0];
    for gen in schedule.generators() {
        let phi = cache.get(gen.norm)?;
        let mut grown = Vec::with_capacity(orbit.len() * gen.order as usize);
        for &start in &orbit {
            grown.push(start);
            let mut prev: Option<u64> = None;
            let mut cur = start;
            for _ in 1..gen.order {
                let roots = ecfp::phi_roots(&phi, cur, p);
                if roots.is_empty() || roots.len() > 2 {
                    return Err(Error::CraterStep {
                        ell: gen.norm,
                        p,
                        roots: roots.len(),
                    });
                }
                let fresh: Vec<u64> = roots.iter().copied().filter(|r| Some(*r) != prev).collect();
                let next = match fresh.as_slice() {
                    [only] => *only,
                    [a, b] if prev.is_none() => {
                        let (lo, hi) = if a < b { (*a, *b) } else { (*b, *a) };
                        if flip_first {
                            hi
                        } else {
                            lo
                        }
                    }
                    // Mid-chain the predecessor must be one of the roots
                    // (the curve relation is symmetric); zero fresh roots or
                    // two of them mean the surface is not the one we think.
                    _ => {
                        return Err(Error::CraterStep {
                            ell: gen.norm,
                            p,
                            roots: roots.len(),
                        })
                    }
                };
                prev = Some(cur);
                cur = next;
                grown.push(cur);
            }
        }
        orbit = grown;
    }
    let expected = schedule.class_number() as usize;
    let mut distinct = orbit.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if orbit.len() != expected || distinct.len() != expected {
        return Err(Error::OrbitCollision {
            p,
            expected,
            got: distinct.len(),
        });
    }
    Ok(ConjugateOrbit {
        p,
        j_values: orbit,
        schedule: schedule.clone(),
    })
}

/// Norms the generator schedule must avoid for the witness prime p: p itself
/// and every prime dividing v, so each walk level keeps exactly the
/// endomorphism rings the starting curve was descended to.
fn forbidden_norms(witness: &SplitPrimeWitness) -> Vec<u64> {
    let mut forbidden = vec![witness.p()];
    for (q, _) in ecfp::factor_u64(witness.v()) {
        forbidden.push(q);
    }
    forbidden
}

/// Find a starting curve and walk out the full conjugate orbit over F_p.
///
/// The two discriminants with extra automorphisms are dispatched directly:
/// their single root is pinned by the curve shapes Y^2 = X^3 + a X and
/// Y^2 = X^3 + b, which the random search deliberately avoids.
pub fn conjugate_orbit(
    d: &Discriminant,
    witness: &SplitPrimeWitness,
    seed: u64,
    cache: &ModPolyCache,
) -> Result<ConjugateOrbit> {
    let p = witness.p();
    let special = if *d.value() == -3 {
        Some(0)
    } else if *d.value() == -4 {
        Some(1728 % p)
    } else {
        None
    };
    let j0 = match special {
        Some(j) => j,
        None => find_cm_j(d, witness, seed, cache)?,
    };
    let schedule = decompose_class_group(d, &forbidden_norms(witness))?;
    walk_conjugates(j0, &schedule, cache, p)
}

/// The class polynomial mod p for a certified split prime witness: one CM
/// point, the orbit walk, then the monic product of the linear factors.
pub fn hilbert_mod_p_split(
    d: &Discriminant,
    witness: &SplitPrimeWitness,
    seed: u64,
    cache: &ModPolyCache,
) -> Result<PolyModP> {
    let orbit = conjugate_orbit(d, witness, seed, cache)?;
    Ok(product_from_roots(orbit.p(), orbit.j_values()))
}
