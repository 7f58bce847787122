//! Binary quadratic forms, class groups, and the precision bound.
//!
//! A form (A, B, C) stands for Ax^2 + Bxy + Cy^2 with discriminant
//! D = B^2 - 4AC < 0, always positive definite and primitive here. Classes
//! of such forms under proper equivalence make the class group of the order
//! O_D; its size h(D) is the degree of the Hilbert class polynomial and the
//! reduced representatives drive both the analytic evaluation and the
//! per-prime conjugate walks.

use crate::arith;
use crate::error::{Error, Result};
use rug::ops::{Pow, RemRounding};
use rug::{Complete, Float, Integer, Rational};
use std::collections::HashMap;

/// A negative discriminant, D < 0 and D = 0 or 1 mod 4, together with its
/// decomposition D = f^2 * delta into conductor and fundamental discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discriminant {
    d: Integer,
    delta: Integer,
    conductor: Integer,
}

impl Discriminant {
    pub fn new<T: Into<Integer>>(d: T) -> Result<Self> {
        let d: Integer = d.into();
        if d >= 0 || d.mod_u(4) > 1 {
            return Err(Error::InvalidDiscriminant(d));
        }
        let (delta, conductor) = fundamental_decomposition(&d);
        Ok(Discriminant {
            d,
            delta,
            conductor,
        })
    }

    pub fn value(&self) -> &Integer {
        &self.d
    }

    /// The fundamental discriminant delta with D = f^2 * delta.
    pub fn fundamental(&self) -> &Integer {
        &self.delta
    }

    /// The conductor f with D = f^2 * delta.
    pub fn conductor(&self) -> &Integer {
        &self.conductor
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }

    /// |D| as a non-negative integer.
    pub fn abs(&self) -> Integer {
        (-&self.d).complete()
    }

    /// D reduced into [0, m).
    pub fn residue(&self, m: u64) -> u64 {
        (&self.d)
            .rem_euc(&Integer::from(m))
            .complete()
            .to_u64()
            .unwrap()
    }

    /// Kronecker symbol (D | ell) for prime ell, reported as -1, 0, or 1.
    pub fn symbol(&self, ell: u64) -> i32 {
        if ell == 2 {
            match self.residue(8) {
                1 => 1,
                5 => -1,
                _ => 0,
            }
        } else {
            arith::legendre(self.residue(ell), ell)
        }
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.d)
    }
}

/// Split |D| = s^2 * m with m squarefree, by trial division; the residual
/// cofactor beyond the trial bound is handled as a square or a prime when it
/// is one, and treated as squarefree otherwise.
fn fundamental_decomposition(d: &Integer) -> (Integer, Integer) {
    let mut m = (-d).complete();
    let mut s = Integer::from(1);
    let mut sqfree = Integer::from(1);
    let mut p = Integer::from(2);
    while (&p * &p).complete() <= m && p < 10_000_000u64 {
        if m.is_divisible(&p) {
            let mut e = 0u32;
            while m.is_divisible(&p) {
                m /= &p;
                e += 1;
            }
            s *= p.clone().pow(e / 2);
            if e % 2 == 1 {
                sqfree *= &p;
            }
        }
        p += if p == 2 { 1u32 } else { 2u32 };
    }
    if m > 1 {
        if m.is_perfect_square() {
            s *= m.sqrt();
        } else {
            sqfree *= &m;
        }
    }
    // D = -s^2 * sqfree. delta = -sqfree if that is 1 mod 4, else -4*sqfree.
    let minus_sqfree = -sqfree;
    if minus_sqfree.mod_u(4) == 1 {
        (minus_sqfree, s)
    } else {
        let delta = (&minus_sqfree * 4u32).complete();
        debug_assert!(s.is_divisible_u(2));
        (delta, s / 2u32)
    }
}

/// Primitive positive definite binary quadratic form (A, B, C).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    a: Integer,
    b: Integer,
    c: Integer,
}

impl QuadForm {
    pub fn new<T: Into<Integer>>(a: T, b: T, c: T) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        let invalid = |reason: &str| Error::InvalidForm {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            reason: reason.into(),
        };
        if a <= 0 {
            return Err(invalid("leading coefficient must be positive"));
        }
        if (&b * &b).complete() >= 4u32 * (&a * &c).complete() {
            return Err(invalid("discriminant must be negative"));
        }
        let g = a.clone().gcd(&b).gcd(&c);
        if g != 1 {
            return Err(invalid("form must be primitive"));
        }
        Ok(QuadForm { a, b, c })
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn c(&self) -> &Integer {
        &self.c
    }

    pub fn discriminant(&self) -> Integer {
        (&self.b * &self.b).complete() - 4u32 * (&self.a * &self.c).complete()
    }

    /// The principal form of discriminant d.
    pub fn identity(d: &Discriminant) -> QuadForm {
        let dv = d.value();
        if dv.mod_u(4) == 0 {
            QuadForm {
                a: Integer::from(1),
                b: Integer::from(0),
                c: (-dv).complete() / 4u32,
            }
        } else {
            QuadForm {
                a: Integer::from(1),
                b: Integer::from(1),
                c: (1u32 - dv).complete() / 4u32,
            }
        }
    }

    /// |B| <= A <= C, with B >= 0 on either boundary.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.clone().abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b < 0 {
            return false;
        }
        true
    }

    /// Gauss reduction: translate B into (-A, A], swap A and C while A > C.
    pub fn reduce(&self) -> QuadForm {
        let d = self.discriminant();
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        loop {
            // Normalize: B in (-A, A].
            let two_a = (&a * 2u32).complete();
            let mut r = (&b).rem_euc(&two_a).complete();
            if r > a {
                r -= &two_a;
            }
            if r != b {
                b = r;
                c = ((&b * &b).complete() - &d) / (4u32 * &a).complete();
            }
            if a > c {
                (a, b, c) = (c, (-&b).complete(), a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        let out = QuadForm { a, b, c };
        debug_assert!(out.is_reduced());
        debug_assert_eq!(out.discriminant(), d);
        out
    }

    /// The inverse class, represented by (A, -B, C), reduced.
    pub fn inverse(&self) -> QuadForm {
        QuadForm {
            a: self.a.clone(),
            b: (-&self.b).complete(),
            c: self.c.clone(),
        }
        .reduce()
    }

    /// Gauss composition; both forms must share a discriminant. The result is
    /// reduced.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(Error::Inconsistent(format!(
                "composing forms of discriminants {} and {}",
                d,
                other.discriminant()
            )));
        }
        let s = ((&self.b + &other.b).complete()) >> 1u32;
        // Bezout data for g = gcd(a1, a2, s) = x*a1 + y*a2 + z*s.
        let (g0, _, y0) = self.a.clone().extended_gcd(other.a.clone(), Integer::new());
        let (g, t, z) = g0.extended_gcd(s.clone(), Integer::new());
        let y = (&y0 * &t).complete();
        let a3 = (&self.a * &other.a).complete() / (&g * &g).complete();
        let half_diff = ((&self.b - &other.b).complete()) >> 1u32;
        let inner = (&y * &half_diff).complete() - (&z * &other.c).complete();
        let b_raw = other.b.clone() + (2u32 * (&other.a * &inner).complete()) / &g;
        let two_a = (&a3 * 2u32).complete();
        let mut b3 = b_raw.rem_euc(&two_a);
        if b3 > a3 {
            b3 -= &two_a;
        }
        let c3 = ((&b3 * &b3).complete() - &d) / (4u32 * &a3).complete();
        let composed = QuadForm {
            a: a3,
            b: b3,
            c: c3,
        };
        debug_assert_eq!(composed.discriminant(), d);
        Ok(composed.reduce())
    }

    /// e-th power in the class group by square and multiply.
    pub fn pow(&self, e: u64, d: &Discriminant) -> Result<QuadForm> {
        let mut acc = QuadForm::identity(d);
        let mut base = self.reduce();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Order of the class in the class group.
    pub fn order(&self, d: &Discriminant) -> Result<u64> {
        let identity = QuadForm::identity(d);
        let mut acc = self.reduce();
        let mut n = 1u64;
        while acc != identity {
            acc = acc.compose(self)?;
            n += 1;
            if n > 1 << 40 {
                return Err(Error::Inconsistent("form order runaway".into()));
            }
        }
        Ok(n)
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant d, sorted by (A, B).
pub fn enumerate_reduced(d: &Discriminant) -> Vec<QuadForm> {
    let abs_d = d.abs();
    let parity = d.residue(2) as u32;
    let mut out = Vec::new();
    let mut a = Integer::from(1);
    while 3u32 * (&a * &a).complete() <= abs_d {
        let four_a = (&a * 4u32).complete();
        // B runs over (-A, A] with B = D mod 2.
        let mut b = (-&a).complete() + 1u32;
        if b.mod_u(2) != parity {
            b += 1u32;
        }
        while b <= a {
            let num = (&b * &b).complete() + &abs_d;
            if num.is_divisible(&four_a) {
                let c = num / &four_a;
                if c >= a {
                    let boundary = (b.clone().abs() == a || a == c) && b < 0;
                    if !boundary && a.clone().gcd(&b).gcd(&c) == 1 {
                        out.push(QuadForm {
                            a: a.clone(),
                            b: b.clone(),
                            c,
                        });
                    }
                }
            }
            b += 2u32;
        }
        a += 1u32;
    }
    out.sort();
    out
}

/// The class number h(D).
pub fn class_number(d: &Discriminant) -> u64 {
    enumerate_reduced(d).len() as u64
}

/// One generator of the class group decomposition: a prime form of norm
/// `norm` (so its leading coefficient is `norm`) of the given order.
#[derive(Debug, Clone)]
pub struct Generator {
    pub form: QuadForm,
    pub norm: u64,
    pub order: u64,
}

/// A decomposition of the class group as a direct sum of cyclic subgroups,
/// each generated by a prime form. Exponent tuples (e_1, ..., e_k) with
/// 0 <= e_i < order_i hit every class exactly once.
#[derive(Debug, Clone)]
pub struct ClassGroupDecomposition {
    h: u64,
    generators: Vec<Generator>,
}

impl ClassGroupDecomposition {
    pub fn class_number(&self) -> u64 {
        self.h
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }
}

/// The form (ell, B, C) of discriminant d with the smallest non-negative B
/// satisfying B^2 = D mod 4*ell; errors when ell is inert or divides the
/// conductor. The returned form is reduced.
pub fn prime_form(d: &Discriminant, ell: u64) -> Result<QuadForm> {
    Ok(prime_form_raw(d, ell)?.reduce())
}

/// As `prime_form` but keeping the leading coefficient equal to ell, which is
/// what the conjugate walks need for their bookkeeping.
fn prime_form_raw(d: &Discriminant, ell: u64) -> Result<QuadForm> {
    if !arith::is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    if d.symbol(ell) == -1 {
        return Err(Error::InertPrime {
            ell,
            d: d.value().clone(),
        });
    }
    if d.conductor().is_divisible_u(ell as u32) {
        return Err(Error::ConductorPrime {
            ell,
            d: d.value().clone(),
        });
    }
    let parity = d.residue(2);
    let b = if ell == 2 {
        match d.residue(8) {
            0 => 0,
            1 => 1,
            4 => 2,
            r => {
                return Err(Error::Inconsistent(format!(
                    "discriminant residue {r} mod 8 cannot meet a prime form at 2"
                )))
            }
        }
    } else {
        let r = arith::sqrt_mod(d.residue(ell), ell).expect("symbol said the residue is a square");
        // Candidates mod 2*ell built from the two square roots; pick the
        // smallest with the parity of D.
        [r, ell - r, r + ell, 2 * ell - r]
            .into_iter()
            .filter(|cand| cand % 2 == parity)
            .min()
            .unwrap()
    };
    let b = Integer::from(b);
    let c = ((&b * &b).complete() - d.value()) / Integer::from(4 * ell);
    QuadForm::new(Integer::from(ell), b, c)
}

/// Decompose the class group into independent cyclic subgroups generated by
/// prime forms whose norms avoid `forbidden`.
///
/// Candidates are collected over ascending primes; generators are committed
/// preferring larger element order, restarting with a larger candidate pool
/// when the chosen generators fail to stay independent. The result satisfies
/// order_1 * ... * order_k = h(D) with trivial pairwise intersections, so
/// exponent tuples enumerate the group exactly once.
pub fn decompose_class_group(
    d: &Discriminant,
    forbidden: &[u64],
) -> Result<ClassGroupDecomposition> {
    let h = class_number(d);
    if h == 1 {
        return Ok(ClassGroupDecomposition {
            h,
            generators: Vec::new(),
        });
    }
    let identity = QuadForm::identity(d);
    let mut candidates: Vec<Generator> = Vec::new();
    let mut closure: HashMap<QuadForm, ()> = HashMap::new();
    closure.insert(identity.clone(), ());
    let mut ell = 1u64;
    let mut batch_target = 6usize;
    loop {
        // Grow the candidate pool until it generates the whole group, then by
        // batches whenever selection stalls.
        while candidates.len() < batch_target || closure.len() < h as usize {
            ell = next_candidate_prime(ell, d, forbidden)?;
            let form = prime_form_raw(d, ell)?;
            let order = form.order(d)?;
            if order == 1 {
                continue;
            }
            extend_closure(&mut closure, &form, d)?;
            candidates.push(Generator {
                form,
                norm: ell,
                order,
            });
            if closure.len() >= h as usize && candidates.len() >= batch_target {
                break;
            }
        }
        if let Some(gens) = try_select_generators(d, &identity, &candidates, h)? {
            let total: u64 = gens.iter().map(|g| g.order).product();
            debug_assert_eq!(total, h);
            return Ok(ClassGroupDecomposition {
                h,
                generators: gens,
            });
        }
        batch_target += 8;
        if batch_target > 512 {
            return Err(Error::ClassGroup {
                d: d.value().clone(),
                detail: format!(
                    "no independent generator set within {} candidates",
                    candidates.len()
                ),
            });
        }
    }
}

fn next_candidate_prime(mut ell: u64, d: &Discriminant, forbidden: &[u64]) -> Result<u64> {
    loop {
        ell += 1;
        if ell > 1_000_000 {
            return Err(Error::ClassGroup {
                d: d.value().clone(),
                detail: "ran out of candidate primes".into(),
            });
        }
        if !arith::is_prime_u64(ell) || forbidden.contains(&ell) {
            continue;
        }
        if d.symbol(ell) == -1 || d.conductor().is_divisible_u(ell as u32) {
            continue;
        }
        return Ok(ell);
    }
}

fn extend_closure(
    closure: &mut HashMap<QuadForm, ()>,
    g: &QuadForm,
    _d: &Discriminant,
) -> Result<()> {
    loop {
        let snapshot: Vec<QuadForm> = closure.keys().cloned().collect();
        let mut grew = false;
        for s in snapshot {
            let t = s.compose(g)?;
            if !closure.contains_key(&t) {
                closure.insert(t, ());
                grew = true;
            }
        }
        if !grew {
            return Ok(());
        }
    }
}

/// One greedy pass: sort by descending order and commit candidates whose
/// cyclic span meets the current subgroup trivially.
fn try_select_generators(
    d: &Discriminant,
    identity: &QuadForm,
    candidates: &[Generator],
    h: u64,
) -> Result<Option<Vec<Generator>>> {
    let mut sorted: Vec<&Generator> = candidates.iter().collect();
    sorted.sort_by_key(|g| (std::cmp::Reverse(g.order), g.norm));
    let mut sub: HashMap<QuadForm, ()> = HashMap::new();
    sub.insert(identity.clone(), ());
    let mut gens: Vec<Generator> = Vec::new();
    for cand in sorted {
        if sub.len() as u64 == h {
            break;
        }
        if sub.len() as u64 * cand.order > h {
            continue;
        }
        // <g> meets sub trivially iff g^(order/q) stays outside sub for every
        // prime q dividing the order.
        let mut independent = true;
        for q in prime_divisors(cand.order) {
            let probe = cand.form.pow(cand.order / q, d)?;
            if sub.contains_key(&probe) {
                independent = false;
                break;
            }
        }
        if !independent {
            continue;
        }
        let snapshot: Vec<QuadForm> = sub.keys().cloned().collect();
        let reduced_gen = cand.form.reduce();
        for s in snapshot {
            let mut acc = s;
            for _ in 1..cand.order {
                acc = acc.compose(&reduced_gen)?;
                sub.insert(acc.clone(), ());
            }
        }
        gens.push(cand.clone());
    }
    if sub.len() as u64 == h {
        Ok(Some(gens))
    } else {
        Ok(None)
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Upper bound, in bits, on the largest coefficient of the class polynomial
/// of discriminant D, which is the working precision the multi-prime lift
/// must reach.
///
/// Each root j(tau_i) grows like exp(pi sqrt(|D|) / A_i), so the dominant
/// term is pi sqrt(|D|) sum(1/A_i) / ln 2 bits, with the sum over the
/// reduced forms taken in exact rational arithmetic. The elementary
/// symmetric combinations add a further log2(1.4885) bits per class, and a
/// floor of 16 bits covers the constant term of the j-expansion for the few
/// smallest discriminants, where the per-class allowance has not yet
/// accumulated.
pub fn precision_bound(d: &Discriminant) -> u32 {
    let forms = enumerate_reduced(d);
    let h = forms.len() as u32;
    let mut inv_a_sum = Rational::new();
    for f in &forms {
        inv_a_sum += Rational::from((Integer::from(1), f.a().clone()));
    }
    let prec = 320;
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let sqrt_abs_d = Float::with_val(prec, d.abs()).sqrt();
    let per_class = Float::with_val(prec, Rational::from((14885, 10000))).log2();
    let bits = (pi * sqrt_abs_d * Float::with_val(prec, &inv_a_sum) / ln2 + per_class * h).ceil();
    bits.to_integer().unwrap().to_u32().unwrap().max(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(Integer::from(d)).unwrap()
    }

    fn qf(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(Integer::from(a), Integer::from(b), Integer::from(c)).unwrap()
    }

    #[test]
    fn discriminant_validation() {
        assert!(Discriminant::new(Integer::from(-3)).is_ok());
        assert!(Discriminant::new(Integer::from(-4)).is_ok());
        assert!(Discriminant::new(Integer::from(-5)).is_err());
        assert!(Discriminant::new(Integer::from(-6)).is_err());
        assert!(Discriminant::new(Integer::from(4)).is_err());
        assert!(Discriminant::new(Integer::from(0)).is_err());
    }

    #[test]
    fn fundamental_decompositions() {
        let d = disc(-12);
        assert_eq!(*d.fundamental(), -3);
        assert_eq!(*d.conductor(), 2);
        let d = disc(-71);
        assert_eq!(*d.fundamental(), -71);
        assert!(d.is_fundamental());
        let d = disc(-108708);
        assert_eq!(*d.fundamental(), -108708);
        assert_eq!(*d.conductor(), 1);
        let d = disc(-27);
        assert_eq!(*d.fundamental(), -3);
        assert_eq!(*d.conductor(), 3);
        let d = disc(-16);
        assert_eq!(*d.fundamental(), -4);
        assert_eq!(*d.conductor(), 2);
    }

    #[test]
    fn reduce_examples() {
        // (9, 1, 2) is properly equivalent to (2, -1, 9); see the brute-force
        // enumeration test below for the independent check.
        assert_eq!(qf(9, 1, 2).reduce(), qf(2, -1, 9));
        assert_eq!(qf(3, 7, 5).reduce(), qf(1, 1, 3));
        let r = qf(2, 1, 9);
        assert_eq!(r.reduce(), r);
    }

    /// Apply the unimodular substitution (x, y) -> (px + qy, rx + sy).
    fn transform(f: &QuadForm, p: i64, q: i64, r: i64, s: i64) -> (Integer, Integer, Integer) {
        let (a, b, c) = (f.a(), f.b(), f.c());
        let (p, q, r, s) = (
            Integer::from(p),
            Integer::from(q),
            Integer::from(r),
            Integer::from(s),
        );
        let a2 = (&p * &p).complete() * a + (&p * &r).complete() * b + (&r * &r).complete() * c;
        let b2 = 2u32 * (&p * &q).complete() * a
            + ((&p * &s).complete() + (&q * &r).complete()) * b
            + 2u32 * (&r * &s).complete() * c;
        let c2 = (&q * &q).complete() * a + (&q * &s).complete() * b + (&s * &s).complete() * c;
        (a2, b2, c2)
    }

    #[test]
    fn reduce_agrees_with_sl2_enumeration() {
        // Brute-force orbit of (9, 1, 2) under SL2(Z) matrices with small
        // entries: the reduced representative (2, -1, 9) must appear, and the
        // inverse class (2, 1, 9) must not.
        let f = qf(9, 1, 2);
        let bound = 4i64;
        let mut hit_reduced = false;
        let mut hit_inverse = false;
        for p in -bound..=bound {
            for q in -bound..=bound {
                for r in -bound..=bound {
                    for s in -bound..=bound {
                        if p * s - q * r != 1 {
                            continue;
                        }
                        let (a2, b2, c2) = transform(&f, p, q, r, s);
                        if a2 == 2 && b2 == -1 && c2 == 9 {
                            hit_reduced = true;
                        }
                        if a2 == 2 && b2 == 1 && c2 == 9 {
                            hit_inverse = true;
                        }
                    }
                }
            }
        }
        assert!(hit_reduced);
        assert!(!hit_inverse);
    }

    #[test]
    fn enumerate_reduced_expected_sets() {
        let forms = enumerate_reduced(&disc(-71));
        let expected = vec![
            qf(1, 1, 18),
            qf(2, -1, 9),
            qf(2, 1, 9),
            qf(3, -1, 6),
            qf(3, 1, 6),
            qf(4, -3, 5),
            qf(4, 3, 5),
        ];
        assert_eq!(forms, expected);
        assert_eq!(enumerate_reduced(&disc(-4)), vec![qf(1, 0, 1)]);
        assert_eq!(
            enumerate_reduced(&disc(-23)),
            vec![qf(1, 1, 6), qf(2, -1, 3), qf(2, 1, 3)]
        );
        assert_eq!(
            enumerate_reduced(&disc(-56)),
            vec![qf(1, 0, 14), qf(2, 0, 7), qf(3, -2, 5), qf(3, 2, 5)]
        );
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(&disc(-3)), 1);
        assert_eq!(class_number(&disc(-4)), 1);
        assert_eq!(class_number(&disc(-7)), 1);
        assert_eq!(class_number(&disc(-23)), 3);
        assert_eq!(class_number(&disc(-71)), 7);
        assert_eq!(class_number(&disc(-108708)), 100);
    }

    #[test]
    fn compose_group_laws_on_small_groups() {
        for dv in [-23i64, -47, -56, -71, -84, -95] {
            let d = disc(dv);
            let forms = enumerate_reduced(&d);
            let e = QuadForm::identity(&d).reduce();
            for f in &forms {
                assert_eq!(f.compose(&e).unwrap(), *f, "identity law at D={dv}");
                assert_eq!(f.compose(&f.inverse()).unwrap(), e, "inverse law at D={dv}");
                for g in &forms {
                    let fg = f.compose(g).unwrap();
                    assert_eq!(fg, g.compose(f).unwrap(), "commutativity at D={dv}");
                    assert!(forms.contains(&fg), "closure at D={dv}");
                    for k in &forms {
                        let left = fg.compose(k).unwrap();
                        let right = f.compose(&g.compose(k).unwrap()).unwrap();
                        assert_eq!(left, right, "associativity at D={dv}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_form_examples() {
        assert_eq!(prime_form(&disc(-71), 2).unwrap(), qf(2, 1, 9));
        assert_eq!(prime_form(&disc(-71), 3).unwrap(), qf(3, 1, 6));
        // Ramified prime form at 2 for D=-4 reduces to the principal class.
        assert_eq!(prime_form(&disc(-4), 2).unwrap(), qf(1, 0, 1));
        match prime_form(&disc(-71), 11) {
            Err(Error::InertPrime { ell: 11, .. }) => {}
            other => panic!("expected inert error, got {other:?}"),
        }
        match prime_form(&disc(-12), 2) {
            Err(Error::ConductorPrime { ell: 2, .. }) => {}
            other => panic!("expected conductor error, got {other:?}"),
        }
        match prime_form(&disc(-71), 4) {
            Err(Error::NotPrime(4)) => {}
            other => panic!("expected primality error, got {other:?}"),
        }
    }

    #[test]
    fn prime_form_b_is_minimal() {
        // Smallest non-negative B with the right parity and B^2 = D mod 4*ell.
        for (dv, ell) in [(-71i64, 2u64), (-71, 3), (-56, 5), (-23, 13), (-108708, 7)] {
            let d = disc(dv);
            let f = prime_form_raw(&d, ell).unwrap();
            let b = f.b().to_i64().unwrap();
            let m = 4 * ell as i64;
            for smaller in 0..b {
                assert_ne!(
                    (smaller * smaller).rem_euclid(m),
                    dv.rem_euclid(m),
                    "B={b} is not minimal for D={dv}, ell={ell}"
                );
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let d = disc(-71);
        let dec = decompose_class_group(&d, &[]).unwrap();
        assert_eq!(dec.class_number(), 7);
        assert_eq!(dec.generators().len(), 1);
        assert_eq!(dec.generators()[0].norm, 2);
        assert_eq!(dec.generators()[0].order, 7);

        let dec = decompose_class_group(&d, &[2]).unwrap();
        assert_eq!(dec.generators().len(), 1);
        assert_eq!(dec.generators()[0].norm, 3);
        assert_eq!(dec.generators()[0].order, 7);

        let dec = decompose_class_group(&disc(-4), &[]).unwrap();
        assert!(dec.generators().is_empty());

        let dec = decompose_class_group(&disc(-23), &[]).unwrap();
        assert_eq!(dec.generators().len(), 1);
        assert_eq!(dec.generators()[0].norm, 2);
        assert_eq!(dec.generators()[0].order, 3);

        // The cyclic group of order 4 for D=-56 cannot keep the ramified
        // 2-form as an independent generator; the norm-3 form of full order
        // must win.
        let dec = decompose_class_group(&disc(-56), &[]).unwrap();
        assert_eq!(dec.generators().len(), 1);
        assert_eq!(dec.generators()[0].norm, 3);
        assert_eq!(dec.generators()[0].order, 4);
    }

    #[test]
    fn decompose_tuple_enumeration_covers_group() {
        for dv in [-23i64, -56, -71, -84, -95, -120, -108708] {
            let d = disc(dv);
            let dec = decompose_class_group(&d, &[]).unwrap();
            let h = dec.class_number();
            let product: u64 = dec.generators().iter().map(|g| g.order).product();
            assert_eq!(product, h, "orders multiply to h at D={dv}");
            let mut seen = vec![QuadForm::identity(&d).reduce()];
            for g in dec.generators() {
                assert_eq!(*g.form.a(), g.norm, "generator keeps A = norm");
                let mut next = Vec::new();
                for s in &seen {
                    let mut acc = s.clone();
                    next.push(acc.clone());
                    for _ in 1..g.order {
                        acc = acc.compose(&g.form).unwrap();
                        next.push(acc.clone());
                    }
                }
                seen = next;
            }
            let mut seen_sorted = seen.clone();
            seen_sorted.sort();
            seen_sorted.dedup();
            assert_eq!(seen_sorted.len() as u64, h, "tuples are distinct at D={dv}");
            assert_eq!(seen_sorted, enumerate_reduced(&d), "tuples cover at D={dv}");
        }
    }

    #[test]
    fn decompose_respects_forbidden_norms() {
        let d = disc(-108708);
        let dec = decompose_class_group(&d, &[2, 7]).unwrap();
        for g in dec.generators() {
            assert!(g.norm != 2 && g.norm != 7);
        }
        assert_eq!(
            dec.generators().iter().map(|g| g.order).product::<u64>(),
            100
        );
    }

    #[test]
    fn precision_bound_values() {
        let n71 = precision_bound(&disc(-71));
        assert!((120..=140).contains(&n71), "n(-71) = {n71}");
        assert_eq!(precision_bound(&disc(-108708)), 5943);
        // Floor region: the bound still dominates the true coefficient sizes
        // of the one-class discriminants (1728 is 11 bits, 32768 is 16 bits).
        assert_eq!(precision_bound(&disc(-4)), 16);
        assert!(precision_bound(&disc(-11)) >= 16);
    }

    #[test]
    fn growth_of_class_data_stays_tame() {
        // Sampled sanity check: h(D) well below sqrt(|D|) log|D| and the
        // reduced 1/A sum well below (log|D|)^2.
        for dv in [-10_003i64, -40_004, -100_003, -400_004, -999_999] {
            let d = disc(dv);
            let forms = enumerate_reduced(&d);
            let h = forms.len() as f64;
            let abs_d = (-dv) as f64;
            let log_d = abs_d.ln();
            assert!(h <= abs_d.sqrt() * log_d, "h growth at D={dv}");
            let sum: f64 = forms.iter().map(|f| 1.0 / f.a().to_f64()).sum();
            assert!(sum <= log_d * log_d, "1/A growth at D={dv}");
        }
    }
}
