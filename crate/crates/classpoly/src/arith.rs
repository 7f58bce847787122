//! Machine-word modular arithmetic helpers used across the crate.
//!
//! Everything here is deterministic: primality is Miller-Rabin with a fixed
//! witness set that is exhaustive below 2^64, square roots use Tonelli-Shanks
//! seeded with the smallest non-residue, and the pseudo-random streams are
//! counter-based so any search can be replayed from its seed.

/// (a * b) mod m without overflow.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square and multiply.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a mod m; m need not be prime but gcd(a, m) must be 1.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, exhaustive for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol of a mod odd prime p, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = powmod(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue mod odd prime p.
pub fn least_nonresidue(p: u64) -> u64 {
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    z
}

/// Square root of a mod odd prime p, or None if a is a non-residue.
/// Returns the smaller of the two roots so the choice is deterministic.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        // Tonelli-Shanks with the least non-residue as the fixed generator.
        let mut q = p - 1;
        let mut s = 0u32;
        while q & 1 == 0 {
            q >>= 1;
            s += 1;
        }
        let z = least_nonresidue(p);
        let mut m = s;
        let mut c = powmod(z, q, p);
        let mut t = powmod(a, q, p);
        let mut r = powmod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mulmod(t2, t2, p);
                i += 1;
                debug_assert!(i < m);
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = mulmod(b, b, p);
            }
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
        r
    };
    debug_assert_eq!(mulmod(r, r, p), a);
    Some(r.min(p - r))
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over a word slice; stable across runs, unlike the std hasher.
pub fn fnv1a(words: &[u64]) -> u64 {
    let mut h = FNV_OFFSET;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

/// Counter-based deterministic stream (splitmix64 over seed + counter).
#[derive(Debug, Clone)]
pub struct DetStream {
    seed: u64,
    counter: u64,
}

impl DetStream {
    pub fn new(seed: u64) -> Self {
        DetStream { seed, counter: 0 }
    }

    /// Mix an additional label into the seed (order matters).
    pub fn with_label(seed: u64, label: &[u64]) -> Self {
        let mut words = vec![seed];
        words.extend_from_slice(label);
        DetStream::new(fnv1a(&words))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let mut z = self
            .seed
            .wrapping_add(self.counter.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform-enough value below n (multiply-shift; n > 0).
    pub fn next_below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}
