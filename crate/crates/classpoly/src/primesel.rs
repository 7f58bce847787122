//! Prime classification and selection for the multi-prime computation.
//!
//! A prime is usable in one of two ways: totally split primes admit a
//! representation 4p = u^2 - v^2 D and carry curves whose j-invariants are
//! roots of the class polynomial mod p, while a handful of tiny inert primes
//! give the whole residue for free. Selection accumulates qualifying primes
//! in ascending order until their product reaches the target modulus size.

use crate::arith;
use crate::error::{Error, Result};
use crate::quadform::Discriminant;
use rug::Integer;

/// Curves can only be certified by order-of-a-point arguments above this
/// prime size; split primes at or below it never enter a plan.
pub const CERTIFICATION_THRESHOLD: u64 = 457;

/// Inert primes whose supersingular locus is a single j-invariant, making
/// the residue immediate.
pub const TRIVIAL_INERT_CANDIDATES: [u64; 5] = [2, 3, 5, 7, 13];

/// Kronecker symbol (a | m) for m >= 1.
pub fn kronecker(a: &Integer, m: &Integer) -> i32 {
    assert!(*m >= 1, "kronecker needs a positive lower argument");
    a.kronecker(m)
}

/// Primality with a deterministic witness set, exact for 64-bit inputs.
pub fn is_probable_prime(m: u64) -> bool {
    arith::is_prime_u64(m)
}

/// A solution of 4p = u^2 - v^2 D for an odd prime p not dividing D, or None
/// when p has no such representation (p is then not totally split in the
/// ring class field).
///
/// The search runs the half-gcd remainder chain on (2p, r) where r is the
/// square root of D mod p with the parity of D, stopping at the first
/// remainder at most 2*sqrt(p); p = 2 is handled by inspection.
pub fn split_witness(d: &Discriminant, p: u64) -> Result<Option<(u64, u64)>> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if d.value().is_divisible(&Integer::from(p)) {
        return Err(Error::DividesDiscriminant {
            p,
            d: d.value().clone(),
        });
    }
    let abs_d = d.abs();
    if p == 2 {
        // 8 = u^2 + |D| v^2 forces v = 1 and |D| ∈ {4, 7}; |D| = 4 is
        // excluded above since 2 | D.
        return Ok(if abs_d == 7 { Some((1, 1)) } else { None });
    }
    if d.symbol(p) != 1 {
        return Ok(None);
    }
    let mut r = arith::sqrt_mod(d.residue(p), p).expect("symbol is 1");
    if r % 2 != d.residue(2) {
        r = p - r;
    }
    let bound = (4 * p).isqrt();
    let (mut a, mut b) = (2 * p, r);
    while b > bound {
        (a, b) = (b, a % b);
    }
    if b == 0 {
        return Ok(None);
    }
    let t = Integer::from(4 * p) - Integer::from(b) * Integer::from(b);
    if !t.is_divisible(&abs_d) {
        return Ok(None);
    }
    let quot = t / &abs_d;
    if !quot.is_perfect_square() {
        return Ok(None);
    }
    let v = quot.sqrt().to_u64().expect("v fits far below 2 sqrt(p)");
    if v == 0 {
        return Ok(None);
    }
    Ok(Some((b, v)))
}

/// A certified split prime with its norm-equation witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPrimeWitness {
    p: u64,
    u: u64,
    v: u64,
}

impl SplitPrimeWitness {
    /// Witness for a split prime above the certification threshold.
    pub fn new(d: &Discriminant, p: u64) -> Result<Self> {
        if p <= CERTIFICATION_THRESHOLD {
            return Err(Error::MestreThreshold { p });
        }
        Self::allowing_small_prime(d, p)
    }

    /// As `new` but without the threshold guard, for callers that certify
    /// cardinalities by exhaustive counting instead.
    pub fn allowing_small_prime(d: &Discriminant, p: u64) -> Result<Self> {
        match split_witness(d, p)? {
            Some((u, v)) => {
                let w = SplitPrimeWitness { p, u, v };
                w.check(d)?;
                Ok(w)
            }
            None => Err(Error::BadWitness { p, u: 0, v: 0 }),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    /// Re-verify 4p = u^2 - v^2 D, positivity, and p coprime to v.
    pub fn check(&self, d: &Discriminant) -> Result<()> {
        let lhs = Integer::from(4u32) * Integer::from(self.p);
        let rhs = Integer::from(self.u) * Integer::from(self.u)
            - Integer::from(self.v) * Integer::from(self.v) * d.value();
        if self.u == 0 || self.v == 0 || lhs != rhs || self.v % self.p == 0 {
            return Err(Error::BadWitness {
                p: self.p,
                u: self.u,
                v: self.v,
            });
        }
        Ok(())
    }
}

/// How a prime plan may spend its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanPolicy {
    SplitOnly,
    WithTrivialInert,
}

/// The ascending set of primes whose product reaches the requested size.
#[derive(Debug, Clone)]
pub struct PrimePlan {
    split: Vec<SplitPrimeWitness>,
    inert_trivial: Vec<u64>,
    target_bits: u32,
    product: Integer,
}

impl PrimePlan {
    pub fn split(&self) -> &[SplitPrimeWitness] {
        &self.split
    }

    pub fn inert_trivial(&self) -> &[u64] {
        &self.inert_trivial
    }

    pub fn target_bits(&self) -> u32 {
        self.target_bits
    }

    /// Product of every selected prime; the CRT modulus.
    pub fn modulus(&self) -> &Integer {
        &self.product
    }

    pub fn total_modulus_bits(&self) -> u32 {
        self.product.significant_bits()
    }

    pub fn smallest_split(&self) -> Option<u64> {
        self.split.first().map(|w| w.p)
    }

    pub fn largest_split(&self) -> Option<u64> {
        self.split.last().map(|w| w.p)
    }
}

/// Enumerate qualifying primes in ascending order until their product is at
/// least 2^n. Split primes must exceed the certification threshold and carry
/// a witness with v <= v_max; under `WithTrivialInert` the inert members of
/// the trivial table are taken first, each contributing its own log2(q) bits
/// at no curve-counting cost.
pub fn select_primes(
    d: &Discriminant,
    n: u32,
    policy: PlanPolicy,
    v_max: u64,
) -> Result<PrimePlan> {
    let target = Integer::from(1) << n;
    let mut product = Integer::from(1);
    let mut inert_trivial = Vec::new();
    if policy == PlanPolicy::WithTrivialInert {
        for q in TRIVIAL_INERT_CANDIDATES {
            if d.symbol(q) == -1 {
                inert_trivial.push(q);
                product *= q;
            }
        }
    }
    let mut split = Vec::new();
    let mut p = CERTIFICATION_THRESHOLD;
    while product < target {
        p += 1;
        if !arith::is_prime_u64(p) || d.symbol(p) != 1 {
            continue;
        }
        if let Some((u, v)) = split_witness(d, p)? {
            if v <= v_max {
                let w = SplitPrimeWitness { p, u, v };
                w.check(d)?;
                split.push(w);
                product *= p;
            }
        }
    }
    Ok(PrimePlan {
        split,
        inert_trivial,
        target_bits: n,
        product,
    })
}
