//! Classical modular polynomials Phi_ell(X, Y), their reduction mod p,
//! and a line-oriented disk cache.
//!
//! Phi_ell is recovered from scratch by numerics: at ell+2 sample points
//! tau = i*t the polynomial Phi_ell(X, j(tau)) factors as
//! (X - j(ell*tau)) prod_k (X - j((tau+k)/ell)), so evaluating j at high
//! precision, expanding, and interpolating each X-coefficient as a
//! polynomial in Y = j(tau) yields floating images of the true integer
//! coefficients. Precision doubles until rounding is clean and the three
//! structural invariants hold, which turns the floats into a proof of
//! the exact result.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rug::ops::{CompleteRound, RemRounding};
use rug::{Complete, Complex, Float, Integer};

use crate::analytic::{j_eval, reduce_to_fundamental};
use crate::arith;
use crate::error::{Error, Result};
use crate::gfpoly::PolyModP;

pub const MAX_LEVEL: u64 = 97;

/// Symmetric bivariate integer polynomial Phi_ell, stored as a dense
/// (ell+2) x (ell+2) coefficient matrix indexed by (X-degree, Y-degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPolynomial {
    level: u64,
    coeffs: Vec<Vec<Integer>>,
}

impl ModularPolynomial {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Integer {
        &self.coeffs[i][j]
    }

    fn dim(&self) -> usize {
        self.level as usize + 2
    }

    /// The three structural invariants; the named failure feeds the
    /// cache-integrity error.
    pub fn verify(&self) -> Result<()> {
        let ell = self.level;
        let n = self.dim();
        for i in 0..n {
            for j in 0..i {
                if self.coeffs[i][j] != self.coeffs[j][i] {
                    return Err(Error::CacheIntegrity {
                        ell,
                        invariant: "symmetry".into(),
                    });
                }
            }
        }
        let top = n - 1;
        for j in 0..n {
            let expected = u32::from(j == 0);
            if self.coeffs[top][j] != expected {
                return Err(Error::CacheIntegrity {
                    ell,
                    invariant: "monic leading monomial".into(),
                });
            }
        }
        if self.coeffs[top - 1][top - 1] != -1 {
            return Err(Error::CacheIntegrity {
                ell,
                invariant: "X^l Y^l coefficient".into(),
            });
        }
        // Phi_ell = (X^l - Y)(X - Y^l) mod ell
        let m = Integer::from(ell);
        let le = ell as usize;
        for i in 0..n {
            for j in 0..n {
                let expected: i64 = match (i, j) {
                    (a, 0) if a == le + 1 => 1,
                    (0, b) if b == le + 1 => 1,
                    (a, b) if a == le && b == le => -1,
                    (1, 1) => -1,
                    _ => 0,
                };
                let got = (&self.coeffs[i][j]).rem_euc(&m).complete();
                let want = Integer::from(expected).rem_euc(&m);
                if got != want {
                    return Err(Error::CacheIntegrity {
                        ell,
                        invariant: "Kronecker congruence".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Phi_ell(X, j0) over F_p as a univariate polynomial of degree
    /// ell+1.
    pub fn specialize_mod_p(&self, j0: u64, p: u64) -> PolyModP {
        let n = self.dim();
        let m = Integer::from(p);
        let j0 = j0 % p;
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            // Horner in the Y variable
            let mut acc = 0u64;
            for j in (0..n).rev() {
                let c = (&self.coeffs[i][j])
                    .rem_euc(&m)
                    .complete()
                    .to_u64()
                    .unwrap();
                acc = (arith::mulmod(acc, j0, p) + c) % p;
            }
            coeffs.push(acc);
        }
        PolyModP::new(p, coeffs)
    }
}

const BUILD_START_BITS: u32 = 128;
const BUILD_BITS_CEILING: u32 = 1 << 20;

/// Construct Phi_ell exactly. See the module docs for the method.
pub fn build_modular_polynomial(ell: u64) -> Result<ModularPolynomial> {
    if !arith::is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell > MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            ell,
            max: MAX_LEVEL,
        });
    }
    let mut bits = BUILD_START_BITS;
    loop {
        if bits > BUILD_BITS_CEILING {
            return Err(Error::ModPolyUnstable { ell, bits });
        }
        if let Some(coeffs) = build_attempt(ell, bits) {
            let phi = ModularPolynomial { level: ell, coeffs };
            if phi.verify().is_ok() {
                return Ok(phi);
            }
        }
        bits *= 2;
    }
}

/// One precision level: returns the rounded coefficient matrix if every
/// entry lands within 2^-10 of an integer, else None.
fn build_attempt(ell: u64, bits: u32) -> Option<Vec<Vec<Integer>>> {
    let n = (ell + 2) as usize;
    let prec = bits + 32;

    // Sample points tau_m = i * t_m with distinct t_m in (1, 2).
    let mut nodes = Vec::with_capacity(n); // y_m = j(tau_m)
    let mut rows: Vec<Vec<Float>> = vec![Vec::with_capacity(n); n]; // rows[i][m]
    for m in 0..n {
        let t = Float::with_val(prec, 1u32)
            + Float::with_val(prec, (m + 1) as u32) / Float::with_val(prec, (n + 1) as u32);
        let tau = Complex::with_val(prec, (Float::with_val(prec, 0), t.clone()));
        let y = j_eval(&tau, bits);
        debug_assert!(y.imag().clone().abs().to_f64() < 1e-10);
        nodes.push(y.real().clone());

        // roots of Phi_ell(X, y): j(ell tau) and j((tau + k)/ell)
        let mut roots = Vec::with_capacity(ell as usize + 1);
        let big = Complex::with_val(prec, (Float::with_val(prec, 0), t.clone() * ell as u32));
        roots.push(j_eval(&big, bits));
        for k in 0..ell {
            let shifted = Complex::with_val(
                prec,
                (
                    Float::with_val(prec, k as u32) / Float::with_val(prec, ell as u32),
                    t.clone() / Float::with_val(prec, ell as u32),
                ),
            );
            let reduced = reduce_to_fundamental(&shifted);
            roots.push(j_eval(&reduced, bits));
        }

        // expand prod (X - root); coefficients must come out real
        let mut poly = vec![Complex::with_val(prec, (1, 0))];
        for r in &roots {
            let mut next = vec![Complex::with_val(prec, (0, 0)); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                let t = (c * r).complete((prec, prec));
                next[i] -= t;
            }
            poly = next;
        }
        for (i, c) in poly.iter().enumerate() {
            let re = c.real().clone();
            let im_mag = c.imag().clone().abs();
            let scale = re.clone().abs().max(&Float::with_val(prec, 1));
            if im_mag > scale >> (bits / 2) {
                return None; // imaginary residue too large at this precision
            }
            rows[i].push(re);
        }
    }

    // Interpolate each X-coefficient row as a degree <= ell+1 polynomial
    // in Y through the nodes, then round.
    let mut out = Vec::with_capacity(n);
    for row in &rows {
        let poly = lagrange_interpolate(&nodes, row, prec);
        let mut int_row = Vec::with_capacity(n);
        for c in &poly {
            let nearest = c.to_integer()?;
            let dist = (c.clone() - Float::with_val(prec, &nearest)).abs();
            if dist.to_f64() >= 0.0009765625 {
                return None;
            }
            int_row.push(nearest);
        }
        out.push(int_row);
    }
    Some(out)
}

/// Coefficients (ascending) of the unique degree < nodes.len()
/// polynomial through (nodes[m], values[m]).
fn lagrange_interpolate(nodes: &[Float], values: &[Float], prec: u32) -> Vec<Float> {
    let n = nodes.len();
    // master = prod (Y - y_r)
    let mut master = vec![Float::with_val(prec, 1)];
    for y in nodes {
        let mut next = vec![Float::with_val(prec, 0); master.len() + 1];
        for (i, c) in master.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Float::with_val(prec, c * y);
        }
        master = next;
    }
    let mut acc = vec![Float::with_val(prec, 0); n];
    for m in 0..n {
        // master / (Y - y_m) by synthetic division
        let mut basis = vec![Float::with_val(prec, 0); n];
        let mut carry = Float::with_val(prec, 0);
        for i in (0..n).rev() {
            let c = master[i + 1].clone() + Float::with_val(prec, &carry * &nodes[m]);
            carry = c.clone();
            basis[i] = c;
        }
        let mut denom = Float::with_val(prec, 1);
        for (r, y) in nodes.iter().enumerate() {
            if r != m {
                denom *= Float::with_val(prec, &nodes[m] - y);
            }
        }
        let w = Float::with_val(prec, &values[m] / &denom);
        for (a, b) in acc.iter_mut().zip(basis.iter()) {
            *a += Float::with_val(prec, b * &w);
        }
    }
    acc
}

fn cache_file(dir: &Path, ell: u64) -> PathBuf {
    dir.join(format!("modpoly_{ell}.txt"))
}

/// The cache file body: "MODPOLY ell" plus one "i j c" line per nonzero
/// monomial with i >= j. The command line dumps exactly this text, so it and
/// the stored file stay byte-identical by construction.
pub fn cache_text(phi: &ModularPolynomial) -> String {
    let mut body = format!("MODPOLY {}\n", phi.level);
    let n = phi.dim();
    for i in 0..n {
        for j in 0..=i {
            let c = &phi.coeffs[i][j];
            if !c.is_zero() {
                body.push_str(&format!("{i} {j} {c}\n"));
            }
        }
    }
    body
}

/// Write the cache body atomically (temp file then rename).
pub fn cache_store(phi: &ModularPolynomial, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let body = cache_text(phi);
    let tmp = dir.join(format!(".modpoly_{}.tmp", phi.level));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, cache_file(dir, phi.level))?;
    Ok(())
}

/// Load and re-verify Phi_ell from the cache directory.
pub fn cache_load(ell: u64, dir: &Path) -> Result<ModularPolynomial> {
    let path = cache_file(dir, ell);
    let text = std::fs::read_to_string(&path).map_err(|_| Error::CacheMissing {
        ell,
        path: path.clone(),
    })?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != format!("MODPOLY {ell}") {
        return Err(Error::CacheIntegrity {
            ell,
            invariant: "header".into(),
        });
    }
    let n = ell as usize + 2;
    let mut coeffs = vec![vec![Integer::new(); n]; n];
    for line in lines {
        let mut parts = line.split_whitespace();
        let mut parse = || -> Option<(usize, usize, Integer)> {
            let i: usize = parts.next()?.parse().ok()?;
            let j: usize = parts.next()?.parse().ok()?;
            let c: Integer = Integer::parse(parts.next()?).ok()?.into();
            Some((i, j, c))
        };
        let (i, j, c) = parse().ok_or_else(|| Error::CacheIntegrity {
            ell,
            invariant: "line format".into(),
        })?;
        if i >= n || j >= n || j > i {
            return Err(Error::CacheIntegrity {
                ell,
                invariant: "index range".into(),
            });
        }
        coeffs[i][j] = c.clone();
        coeffs[j][i] = c;
    }
    let phi = ModularPolynomial { level: ell, coeffs };
    phi.verify()?;
    Ok(phi)
}

/// Shared handle: in-memory map over an optional disk directory;
/// builds on miss and persists best-effort.
pub struct ModPolyCache {
    dir: Option<PathBuf>,
    mem: Mutex<HashMap<u64, Arc<ModularPolynomial>>>,
}

impl ModPolyCache {
    pub fn new(dir: Option<PathBuf>) -> ModPolyCache {
        ModPolyCache {
            dir,
            mem: Mutex::new(HashMap::new()),
        }
    }

    /// Explicit directory if given, else the MODPOLY_CACHE environment
    /// variable, else memory-only.
    pub fn from_env_or(dir: Option<PathBuf>) -> ModPolyCache {
        let dir = dir.or_else(|| std::env::var_os("MODPOLY_CACHE").map(PathBuf::from));
        ModPolyCache::new(dir)
    }

    pub fn get(&self, ell: u64) -> Result<Arc<ModularPolynomial>> {
        if let Some(hit) = self.mem.lock().unwrap().get(&ell) {
            return Ok(hit.clone());
        }
        if let Some(dir) = &self.dir {
            if let Ok(phi) = cache_load(ell, dir) {
                let arc = Arc::new(phi);
                self.mem.lock().unwrap().insert(ell, arc.clone());
                return Ok(arc);
            }
        }
        let phi = build_modular_polynomial(ell)?;
        if let Some(dir) = &self.dir {
            let _ = cache_store(&phi, dir);
        }
        let arc = Arc::new(phi);
        self.mem.lock().unwrap().insert(ell, arc.clone());
        Ok(arc)
    }
}
