//! Assembly of the integer class polynomial from its modular residues.
//!
//! The driver picks a prime plan whose product clears the coefficient bound,
//! computes one residue per prime (in parallel for the split primes, which
//! carry all the curve work), lifts coefficient-wise with symmetric
//! representatives, and re-reduces against every plan prime before handing
//! the polynomial back.

use crate::analytic::hilbert_analytic;
use crate::arith;
use crate::error::{Error, Result};
use crate::gfpoly::PolyModP;
use crate::inert::hilbert_mod_q_trivial;
use crate::intpoly::IntPoly;
use crate::modpoly::ModPolyCache;
use crate::orbit::hilbert_mod_p_split;
use crate::primesel::{
    select_primes, split_witness, PlanPolicy, SplitPrimeWitness, CERTIFICATION_THRESHOLD,
};
use crate::quadform::{class_number, decompose_class_group, precision_bound, Discriminant};
use rug::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

/// Knobs for `compute_hilbert`. The defaults match the command line ones:
/// spend the trivial inert primes, witnesses up to v = 16, deterministic
/// seed 0, and however many threads the runtime owns.
#[derive(Debug, Clone)]
pub struct ComputeOptions {
    pub policy: PlanPolicy,
    pub v_max: u64,
    pub seed: u64,
    /// 0 lets the thread pool pick its own width.
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            policy: PlanPolicy::WithTrivialInert,
            v_max: 16,
            seed: 0,
            workers: 0,
            cache_dir: None,
            checkpoint: None,
        }
    }
}

/// Combine residues of one polynomial into the integer polynomial with
/// symmetric coefficients, smallest absolute representatives.
///
/// Every residue must have the same degree and the moduli must be pairwise
/// coprime; the lift is unique mod the product N and lands in (-N/2, N/2]
/// per coefficient.
pub fn crt_combine(residues: &[PolyModP]) -> Result<IntPoly> {
    let Some(first) = residues.first() else {
        return Err(Error::Inconsistent("no residues to combine".into()));
    };
    let degree = first.degree();
    for r in residues {
        if r.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree.map_or(0, |d| d + 1),
                got: r.degree().map_or(0, |d| d + 1),
            });
        }
    }
    for (i, a) in residues.iter().enumerate() {
        for b in &residues[i + 1..] {
            if arith::gcd_u64(a.modulus(), b.modulus()) != 1 {
                return Err(Error::NonCoprimeModuli {
                    p: a.modulus(),
                    q: b.modulus(),
                });
            }
        }
    }
    let width = degree.map_or(1, |d| d + 1);
    let mut modulus = Integer::from(first.modulus());
    let mut coeffs: Vec<Integer> = (0..width).map(|i| Integer::from(first.coeff(i))).collect();
    let reduce = |value: &Integer, p: u64| -> u64 {
        Integer::from(value % Integer::from(p)).to_u64().unwrap()
    };
    for r in &residues[1..] {
        let p = r.modulus();
        let inv =
            arith::invmod(reduce(&modulus, p), p).expect("pairwise coprimality was checked above");
        for (i, c) in coeffs.iter_mut().enumerate() {
            let delta = arith::mulmod((r.coeff(i) + p - reduce(c, p)) % p, inv, p);
            *c += Integer::from(delta) * &modulus;
        }
        modulus *= p;
    }
    let half = Integer::from(&modulus >> 1u32);
    for c in coeffs.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }
    Ok(IntPoly::new(coeffs))
}

/// One residue line of a checkpoint file: the prime and the full ascending
/// coefficient list.
fn render_checkpoint_line(poly: &PolyModP) -> String {
    let mut line = format!("RES {} :", poly.modulus());
    let width = poly.degree().map_or(1, |d| d + 1);
    for i in 0..width {
        line.push_str(&format!(" {}", poly.coeff(i)));
    }
    line.push('\n');
    line
}

/// Read back every complete residue line. A trailing fragment without a
/// newline is the survivor of an interrupted append and is discarded, and
/// lines that do not parse are skipped outright: recomputing a residue is
/// always safe, refusing to start is not.
fn load_checkpoint(path: &Path) -> Result<BTreeMap<u64, Vec<u64>>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(e.into()),
    };
    let complete = match text.rfind('\n') {
        Some(idx) => &text[..=idx],
        None => "",
    };
    let mut residues = BTreeMap::new();
    'lines: for line in complete.lines() {
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("RES") {
            continue;
        }
        let Some(Ok(p)) = tokens.next().map(str::parse::<u64>) else {
            continue;
        };
        if tokens.next() != Some(":") {
            continue;
        }
        let mut coeffs = Vec::new();
        for tok in tokens {
            match tok.parse::<u64>() {
                Ok(c) if c < p => coeffs.push(c),
                _ => continue 'lines,
            }
        }
        if !coeffs.is_empty() {
            residues.insert(p, coeffs);
        }
    }
    Ok(residues)
}

/// Open the residue log for appending, sealing any crash fragment with a
/// newline so fresh lines never merge into it.
fn open_checkpoint_log(path: &Path) -> Result<File> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let len = file.metadata()?.len();
    if len > 0 {
        let text = std::fs::read_to_string(path)?;
        if !text.ends_with('\n') {
            file.write_all(b"\n")?;
        }
    }
    Ok(file)
}

/// Soft ceiling on the modular polynomial levels the per-prime walks may
/// schedule. Levels up to here build in seconds; the next sizes cost
/// minutes each, so a witness that would demand one is dropped in favor of
/// a later prime instead.
const WALK_NORM_BUDGET: u64 = 37;

/// Largest generator norm residue computation tolerates for this
/// discriminant.
///
/// The budget usually rules, but cannot always: for D = 1 mod 8 the norm
/// equation 4p = u^2 - v^2 D forces v even for every split prime, so the
/// norm-2 generator is never walkable, and a few class groups only close
/// with a much larger norm in its place. The cap absorbs that floor so such
/// discriminants stay computable at the price of one expensive level,
/// rather than running out of usable primes.
fn walk_norm_cap(d: &Discriminant) -> Result<u64> {
    let max_norm = |forbidden: &[u64]| -> Result<u64> {
        Ok(decompose_class_group(d, forbidden)?
            .generators()
            .iter()
            .map(|g| g.norm)
            .max()
            .unwrap_or(1))
    };
    let mut cap = max_norm(&[])?;
    if d.abs().mod_u(8) == 7 {
        cap = cap.max(max_norm(&[2])?);
    }
    Ok(cap.max(WALK_NORM_BUDGET))
}

/// Distinct prime factors of a witness's v: the norms that prime's walk
/// must avoid. p itself is formally forbidden too, but it sits far above
/// every candidate norm, so factor sets alone key the schedule memo.
fn v_factors(v: u64) -> Vec<u64> {
    crate::ecfp::factor_u64(v)
        .into_iter()
        .map(|(q, _)| q)
        .collect()
}

/// Generator norms of the schedule walked under the given forbidden factor
/// set, memoized; the handful of distinct sets repeats across many primes.
fn schedule_norms(
    d: &Discriminant,
    memo: &mut BTreeMap<Vec<u64>, Vec<u64>>,
    forbidden: Vec<u64>,
) -> Result<Vec<u64>> {
    if let Some(norms) = memo.get(&forbidden) {
        return Ok(norms.clone());
    }
    let schedule = decompose_class_group(d, &forbidden)?;
    let norms: Vec<u64> = schedule.generators().iter().map(|g| g.norm).collect();
    memo.insert(forbidden, norms.clone());
    Ok(norms)
}

/// The full integer class polynomial via residues and lifting.
pub fn compute_hilbert(d: &Discriminant, options: &ComputeOptions) -> Result<IntPoly> {
    if *d.value() == -3 {
        return Ok(IntPoly::from_i64(&[0, 1]));
    }
    if *d.value() == -4 {
        return Ok(IntPoly::from_i64(&[-1728, 1]));
    }
    let h = class_number(d) as usize;
    let n = precision_bound(d);
    // One bit past the coefficient bound: the symmetric lift needs
    // M > 2 * |c| to place a coefficient of either sign, so a modulus that
    // merely clears 2^n can sit half a step short of the extreme ones.
    let plan = select_primes(d, n + 1, options.policy, options.v_max)?;
    let cache = ModPolyCache::from_env_or(options.cache_dir.clone());

    // The plan is the ascending-minimal prefix, but not every member is
    // walkable at a sane cost: a witness whose v shares its factors with
    // the cheap generators forces the schedule onto a far larger norm.
    // Such primes are dropped and the stream extended past the plan until
    // the product of what remains clears 2^n again.
    let cap = walk_norm_cap(d)?;
    let mut memo: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    let mut used: Vec<SplitPrimeWitness> = Vec::new();
    let mut modulus = Integer::from(1);
    for &q in plan.inert_trivial() {
        modulus *= q;
    }
    for w in plan.split() {
        let norms = schedule_norms(d, &mut memo, v_factors(w.v()))?;
        if norms.iter().all(|&ell| ell <= cap) {
            modulus *= w.p();
            used.push(w.clone());
        }
    }
    let target = Integer::from(1) << (n + 1);
    let mut scan = plan.largest_split().unwrap_or(CERTIFICATION_THRESHOLD);
    while modulus < target {
        scan += 1;
        if scan > 1 << 30 {
            return Err(Error::Inconsistent(
                "ran out of walkable split primes".into(),
            ));
        }
        if !arith::is_prime_u64(scan) || d.symbol(scan) != 1 {
            continue;
        }
        let Some((_, v)) = split_witness(d, scan)? else {
            continue;
        };
        if v > options.v_max {
            continue;
        }
        let norms = schedule_norms(d, &mut memo, v_factors(v))?;
        if norms.iter().any(|&ell| ell > cap) {
            continue;
        }
        let w = SplitPrimeWitness::new(d, scan)?;
        modulus *= w.p();
        used.push(w);
    }

    let mut known: BTreeMap<u64, PolyModP> = BTreeMap::new();
    if let Some(path) = &options.checkpoint {
        let used_primes: std::collections::BTreeSet<u64> = used
            .iter()
            .map(|w| w.p())
            .chain(plan.inert_trivial().iter().copied())
            .collect();
        for (p, coeffs) in load_checkpoint(path)? {
            // Entries for foreign primes or the wrong degree are dropped and
            // recomputed; only a well-formed residue for a used prime saves
            // work.
            if !used_primes.contains(&p) {
                continue;
            }
            if coeffs.len() != h + 1 || coeffs.last() != Some(&1) {
                continue;
            }
            known.insert(p, PolyModP::new(p, coeffs));
        }
    }

    let log = match &options.checkpoint {
        Some(path) => Some(Mutex::new(open_checkpoint_log(path)?)),
        None => None,
    };
    let append = |poly: &PolyModP| -> Result<()> {
        if let Some(log) = &log {
            let mut file = log.lock().expect("checkpoint writer poisoned");
            file.write_all(render_checkpoint_line(poly).as_bytes())?;
            file.flush()?;
        }
        Ok(())
    };

    let mut residues: Vec<PolyModP> = known.values().cloned().collect();
    for &q in plan.inert_trivial() {
        if known.contains_key(&q) {
            continue;
        }
        let poly = hilbert_mod_q_trivial(d, q)?;
        append(&poly)?;
        residues.push(poly);
    }

    let todo: Vec<&SplitPrimeWitness> = used
        .iter()
        .filter(|w| !known.contains_key(&w.p()))
        .collect();
    // Warm every level the walks will specialize, so parallel workers do
    // not race to build the same one.
    let mut levels: Vec<u64> = Vec::new();
    for w in &todo {
        for ell in schedule_norms(d, &mut memo, v_factors(w.v()))? {
            if !levels.contains(&ell) {
                levels.push(ell);
            }
        }
    }
    for ell in levels {
        cache.get(ell)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    let fresh: Vec<Result<PolyModP>> = pool.install(|| {
        use rayon::prelude::*;
        todo.par_iter()
            .map(|w| {
                let poly = hilbert_mod_p_split(d, w, options.seed, &cache)?;
                append(&poly)?;
                Ok(poly)
            })
            .collect()
    });
    for poly in fresh {
        residues.push(poly?);
    }

    // Merge order must not depend on scheduling: ascending prime.
    residues.sort_by_key(|r| r.modulus());
    let combined = crt_combine(&residues)?;
    for c in combined.coeffs() {
        if c.significant_bits() > n {
            return Err(Error::Inconsistent(format!(
                "coefficient needs {} bits, plan was sized for {}",
                c.significant_bits(),
                n
            )));
        }
    }
    for r in &residues {
        if combined.reduce_mod(r.modulus()) != *r {
            return Err(Error::RoundTrip { p: r.modulus() });
        }
    }
    Ok(combined)
}

/// Comparison of a candidate class polynomial against the floating-point
/// construction, coefficient by coefficient.
#[derive(Debug, Clone)]
pub struct OracleReport {
    degree_matches: bool,
    mismatches: Vec<usize>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.degree_matches && self.mismatches.is_empty()
    }

    pub fn degree_matches(&self) -> bool {
        self.degree_matches
    }

    /// Indices (ascending, by coefficient of X^i) that disagree.
    pub fn mismatches(&self) -> &[usize] {
        &self.mismatches
    }
}

/// Recompute H_D along the wholly independent analytic route and compare.
pub fn verify_against_oracle(d: &Discriminant, candidate: &IntPoly) -> Result<OracleReport> {
    let reference = hilbert_analytic(d, 0)?;
    let width = reference.coeffs().len().max(candidate.coeffs().len());
    let zero = Integer::new();
    let mut mismatches = Vec::new();
    for i in 0..width {
        let a = candidate.coeffs().get(i).unwrap_or(&zero);
        let b = reference.coeffs().get(i).unwrap_or(&zero);
        if a != b {
            mismatches.push(i);
        }
    }
    Ok(OracleReport {
        degree_matches: candidate.degree() == reference.degree(),
        mismatches,
    })
}

/// Wire format for a computed polynomial: the discriminant, the degree, and
/// every coefficient in ascending order as a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HilbertJson {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: u64,
    pub coeffs: Vec<String>,
}

impl HilbertJson {
    pub fn new(d: &Discriminant, poly: &IntPoly) -> HilbertJson {
        HilbertJson {
            d: d.value().to_i64().expect("discriminants in range fit i64"),
            h: poly.degree().map_or(0, |deg| deg as u64),
            coeffs: poly.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<IntPoly> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for text in &self.coeffs {
            let c = Integer::parse(text)
                .map_err(|_| Error::Inconsistent(format!("bad coefficient: {text}")))?;
            coeffs.push(Integer::from(c));
        }
        Ok(IntPoly::new(coeffs))
    }
}
