//! Dense univariate polynomial arithmetic over prime fields F_p.
//!
//! Everything the per-prime stage needs: ring operations with a dual
//! schoolbook/Karatsuba multiplication, X^e mod f by square and multiply,
//! gcd, and root finding through gcd(X^p - X, f) followed by deterministic
//! equal-degree splitting. Moduli are machine words; coefficients are kept
//! reduced.

use crate::arith::{self, DetStream};
use crate::error::{Error, Result};

/// An element of F_p carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpElement {
    value: u64,
    p: u64,
}

impl FpElement {
    pub fn new(value: u64, p: u64) -> FpElement {
        FpElement {
            value: value % p,
            p,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl std::fmt::Display for FpElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense polynomial over F_p, coefficients ascending, trailing zeros
/// trimmed; the empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

const KARATSUBA_CROSSOVER: usize = 32;

impl PolyModP {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> PolyModP {
        debug_assert!(arith::is_prime_u64(p));
        for c in &mut coeffs {
            *c %= p;
        }
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> PolyModP {
        PolyModP {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> PolyModP {
        PolyModP::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> PolyModP {
        PolyModP::new(p, vec![c])
    }

    /// The monomial X.
    pub fn x(p: u64) -> PolyModP {
        PolyModP::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn assert_same_field(&self, other: &PolyModP) {
        assert_eq!(self.p, other.p, "mixed moduli");
    }

    pub fn add(&self, other: &PolyModP) -> PolyModP {
        self.assert_same_field(other);
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = self.coeff(i) + other.coeff(i);
            if s >= p {
                s -= p;
            }
            coeffs.push(s);
        }
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn sub(&self, other: &PolyModP) -> PolyModP {
        self.assert_same_field(other);
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i);
            let b = other.coeff(i);
            coeffs.push(if a >= b { a - b } else { a + p - b });
        }
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn scale(&self, k: u64) -> PolyModP {
        let p = self.p;
        let k = k % p;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| arith::mulmod(c, k, p))
            .collect();
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn mul(&self, other: &PolyModP) -> PolyModP {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return PolyModP::zero(self.p);
        }
        let coeffs = mul_dispatch(&self.coeffs, &other.coeffs, self.p);
        let mut out = PolyModP { p: self.p, coeffs };
        out.trim();
        out
    }

    /// Quotient and remainder with deg r < deg g.
    pub fn divrem(&self, g: &PolyModP) -> Result<(PolyModP, PolyModP)> {
        self.assert_same_field(g);
        let p = self.p;
        let gd = g
            .degree()
            .ok_or_else(|| Error::Inconsistent("division by the zero polynomial".into()))?;
        if self.degree().map_or(true, |fd| fd < gd) {
            return Ok((PolyModP::zero(p), self.clone()));
        }
        let fd = self.degree().unwrap();
        let lead_inv = arith::invmod(g.leading(), p).expect("leading coefficient is a unit");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; fd - gd + 1];
        for k in (0..=fd - gd).rev() {
            let c = arith::mulmod(rem[k + gd], lead_inv, p);
            quot[k] = c;
            if c != 0 {
                for (i, &gc) in g.coeffs.iter().enumerate() {
                    let t = arith::mulmod(c, gc, p);
                    let r = &mut rem[k + i];
                    *r = if *r >= t { *r - t } else { *r + p - t };
                }
            }
        }
        rem.truncate(gd);
        let mut q = PolyModP { p, coeffs: quot };
        q.trim();
        let mut r = PolyModP { p, coeffs: rem };
        r.trim();
        Ok((q, r))
    }

    pub fn rem(&self, g: &PolyModP) -> Result<PolyModP> {
        Ok(self.divrem(g)?.1)
    }

    pub fn make_monic(&self) -> PolyModP {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.scale(arith::invmod(self.leading(), self.p).expect("nonzero leading"))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &PolyModP) -> PolyModP {
        self.assert_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (arith::mulmod(acc, x, p) + c) % p;
        }
        acc
    }
}

/// Descending powers joined by bare plus signs; coefficients are canonical
/// representatives so no sign handling is needed, zero terms are dropped,
/// and a unit coefficient on a power of X is left implicit.
impl std::fmt::Display for PolyModP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{i}")?,
                (_, _) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

fn mul_dispatch(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.len().min(b.len()) < KARATSUBA_CROSSOVER {
        mul_schoolbook(a, b, p)
    } else {
        mul_karatsuba(a, b, p)
    }
}

fn mul_schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let t = arith::mulmod(ai, bj, p);
            let o = &mut out[i + j];
            *o += t;
            if *o >= p {
                *o -= p;
            }
        }
    }
    out
}

fn mul_karatsuba(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.len().min(b.len()) < KARATSUBA_CROSSOVER {
        return mul_schoolbook(a, b, p);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let low = mul_karatsuba(a0, b0, p);
    let high = if a1.is_empty() || b1.is_empty() {
        Vec::new()
    } else {
        mul_karatsuba(a1, b1, p)
    };
    let asum = slice_add(a0, a1, p);
    let bsum = slice_add(b0, b1, p);
    let mid = mul_karatsuba(&asum, &bsum, p);
    // (a0+a1)(b0+b1) - a0 b0 - a1 b1
    let mut cross = mid;
    slice_sub_assign(&mut cross, &low, p);
    slice_sub_assign(&mut cross, &high, p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &c) in low.iter().enumerate() {
        add_at(&mut out, i, c, p);
    }
    for (i, &c) in cross.iter().enumerate() {
        add_at(&mut out, i + m, c, p);
    }
    for (i, &c) in high.iter().enumerate() {
        add_at(&mut out, i + 2 * m, c, p);
    }
    out
}

fn slice_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let s = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
            if s >= p {
                s - p
            } else {
                s
            }
        })
        .collect()
}

fn slice_sub_assign(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &bi) in b.iter().enumerate() {
        let ai = &mut a[i];
        *ai = if *ai >= bi { *ai - bi } else { *ai + p - bi };
    }
}

fn add_at(out: &mut [u64], i: usize, c: u64, p: u64) {
    if c == 0 {
        return;
    }
    let o = &mut out[i];
    *o += c;
    if *o >= p {
        *o -= p;
    }
}

/// X^e mod f by square and multiply.
pub fn powmod_x(e: u64, f: &PolyModP) -> PolyModP {
    assert!(
        f.degree().map_or(false, |d| d >= 1),
        "modulus must have degree >= 1"
    );
    poly_powmod(&PolyModP::x(f.modulus()), e, f)
}

/// base^e mod f.
fn poly_powmod(base: &PolyModP, e: u64, f: &PolyModP) -> PolyModP {
    let mut acc = PolyModP::one(f.modulus());
    let mut base = base.rem(f).expect("nonzero modulus");
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(f).expect("nonzero modulus");
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).rem(f).expect("nonzero modulus");
        }
    }
    acc
}

/// The monic product of the distinct linear factors of f, i.e.
/// gcd(X^p - X, f).
fn distinct_linear_part(f: &PolyModP) -> PolyModP {
    let p = f.modulus();
    let xp = powmod_x(p, f);
    let diff = xp.sub(&PolyModP::x(p).rem(f).expect("deg >= 1"));
    diff.gcd(f)
}

const ROOT_SCAN_LIMIT: u64 = 4096;

/// All distinct roots of f in F_p, ascending; deterministic for a given
/// seed. Small fields are scanned outright; larger ones go through
/// gcd(X^p - X, f) and seeded equal-degree splitting.
pub fn roots_in_fp(f: &PolyModP, seed: u64) -> Vec<FpElement> {
    assert!(!f.is_zero(), "root finding on the zero polynomial");
    let p = f.modulus();
    let mut roots: Vec<u64> = if p < ROOT_SCAN_LIMIT {
        (0..p).filter(|&x| f.eval(x) == 0).collect()
    } else {
        let lin = distinct_linear_part(f);
        let mut out = Vec::new();
        let mut stream = DetStream::with_label(seed, &[p, arith::fnv1a(f.coeffs())]);
        split_linear(&lin, &mut stream, &mut out);
        out
    };
    roots.sort_unstable();
    roots.dedup();
    roots.into_iter().map(|r| FpElement::new(r, p)).collect()
}

/// Split a product of distinct monic linear factors into its roots using
/// gcd with (X + a)^((p-1)/2) - 1 at stream-chosen shifts a.
fn split_linear(g: &PolyModP, stream: &mut DetStream, out: &mut Vec<u64>) {
    let p = g.modulus();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            // Monic X + c has root -c.
            let c = g.coeff(0);
            out.push(if c == 0 { 0 } else { p - c });
        }
        Some(_) => loop {
            let a = stream.next_below(p);
            let shifted = PolyModP::new(p, vec![a, 1]);
            let h = poly_powmod(&shifted, (p - 1) / 2, g).sub(&PolyModP::one(p));
            let t = h.gcd(g);
            let td = t.degree().unwrap_or(0);
            if td > 0 && td < g.degree().unwrap() {
                let (q, r) = g.divrem(&t).expect("nonzero gcd");
                debug_assert!(r.is_zero());
                split_linear(&t, stream, out);
                split_linear(&q, stream, out);
                return;
            }
        },
    }
}

/// Distinct roots with multiplicities, by repeated division.
pub fn roots_with_multiplicity(f: &PolyModP, seed: u64) -> Vec<(FpElement, usize)> {
    let roots = roots_in_fp(f, seed);
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let lin = PolyModP::new(
            f.modulus(),
            vec![
                if r.value() == 0 {
                    0
                } else {
                    f.modulus() - r.value()
                },
                1,
            ],
        );
        let mut m = 0usize;
        let mut g = f.clone();
        loop {
            let (q, rem) = g.divrem(&lin).expect("linear divisor");
            if !rem.is_zero() {
                break;
            }
            m += 1;
            g = q;
        }
        debug_assert!(m >= 1);
        out.push((r, m));
    }
    out
}

/// Monic product of (X - r) over the multiset of roots, by a balanced tree.
pub fn product_from_roots(p: u64, roots: &[u64]) -> PolyModP {
    fn build(p: u64, roots: &[u64]) -> PolyModP {
        match roots.len() {
            0 => PolyModP::one(p),
            1 => {
                let r = roots[0] % p;
                PolyModP::new(p, vec![if r == 0 { 0 } else { p - r }, 1])
            }
            n => {
                let (a, b) = roots.split_at(n / 2);
                build(p, a).mul(&build(p, b))
            }
        }
    }
    build(p, roots)
}
