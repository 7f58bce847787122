//! Complex-analytic construction of the class polynomial.
//!
//! For each reduced form (A,B,C) the CM point tau = (-B + sqrt(D))/(2A)
//! lies in the fundamental domain; j(tau) runs over the conjugates of
//! j(O_D), so expanding prod (X - j(tau_a)) and rounding to integers
//! recovers the exact polynomial. Forms come in inverse pairs whose j
//! values are complex conjugates, which keeps every partial product
//! real. This module is the independent cross-check for the modular
//! route and the source of most frozen test values.

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::quadform::{enumerate_reduced, precision_bound, Discriminant, QuadForm};

/// A reduced form together with its CM point in the upper half plane.
#[derive(Debug, Clone)]
pub struct CmPoint {
    form: QuadForm,
    tau: Complex,
}

impl CmPoint {
    /// tau = (-B + i sqrt(|D|)) / (2A) at the given working precision.
    pub fn new(form: QuadForm, prec: u32) -> CmPoint {
        let two_a = Float::with_val(prec, form.a()) * 2u32;
        let re = -Float::with_val(prec, form.b()) / &two_a;
        let four_ac = Integer::from(form.a() * form.c()) * 4u32;
        let b_sq = Integer::from(form.b() * form.b());
        let abs_d = Float::with_val(prec, four_ac - b_sq);
        let im = abs_d.sqrt() / &two_a;
        debug_assert!(im.to_f64() > 0.8); // reduced => Im tau >= sqrt(3)/2
        CmPoint {
            form,
            tau: Complex::with_val(prec, (re, im)),
        }
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn tau(&self) -> &Complex {
        &self.tau
    }
}

fn cabs(z: &Complex) -> Float {
    let re = z.real().clone();
    let im = z.imag().clone();
    (re.square() + im.square()).sqrt()
}

/// sum of d^3 over divisors d of n
fn sigma3(n: u64) -> u64 {
    let mut s = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += d * d * d;
            let e = n / d;
            if e != d {
                s += e * e * e;
            }
        }
        d += 1;
    }
    s
}

pub(crate) fn complex_pow(z: &Complex, e: u64) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, (1, 0));
    let mut base = z.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * &base;
        }
    }
    acc
}

/// Klein's j-function by q-expansion: j = E4^3 / Delta with
/// E4 = 1 + 240 sum sigma_3(n) q^n and Delta = q prod (1-q^n)^24, the
/// product expanded through the pentagonal-number series. Series are
/// truncated once a term drops below 2^-(bits+16) of the partial sum.
pub fn j_eval(tau: &Complex, bits: u32) -> Complex {
    let prec = bits + 32;
    let tau = Complex::with_val(prec, tau);
    assert!(
        tau.imag().to_f64() > 0.0,
        "tau must be in the upper half plane"
    );
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let i_two_pi = Complex::with_val(prec, (0, &two_pi));
    let q = (i_two_pi * &tau).exp();

    let tail_shift = bits + 16;

    // E4
    let mut e4 = Complex::with_val(prec, (1, 0));
    let mut qn = Complex::with_val(prec, (1, 0));
    let mut n = 0u64;
    loop {
        n += 1;
        qn *= &q;
        let term = qn.clone() * (240 * sigma3(n));
        let small = cabs(&term) < (cabs(&e4) >> tail_shift);
        e4 += term;
        if small && n >= 2 {
            break;
        }
        assert!(n < 1 << 24, "q-series failed to converge");
    }

    // prod (1 - q^n) via the pentagonal sparse series
    let mut eta_prod = Complex::with_val(prec, (1, 0));
    let mut k = 0u64;
    loop {
        k += 1;
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        let term = complex_pow(&q, g1) + complex_pow(&q, g2);
        let small = cabs(&term) < (cabs(&eta_prod) >> tail_shift);
        if k % 2 == 1 {
            eta_prod -= term;
        } else {
            eta_prod += term;
        }
        if small && k >= 2 {
            break;
        }
        assert!(k < 1 << 20, "eta product failed to converge");
    }

    let delta = q * complex_pow(&eta_prod, 24);
    let e4_cubed = complex_pow(&e4, 3);
    e4_cubed / delta
}

/// Translate/invert into the standard fundamental domain before
/// evaluating; keeps |q| small for points handed in raw.
pub fn reduce_to_fundamental(tau: &Complex) -> Complex {
    let prec = tau.prec().0;
    let mut t = Complex::with_val(prec, tau);
    loop {
        let shift = t.real().clone().round();
        t -= Complex::with_val(prec, (&shift, &Float::with_val(prec, 0)));
        let norm = t.real().clone().square() + t.imag().clone().square();
        if norm < 1 {
            t = -t.recip();
        } else {
            break;
        }
    }
    t
}

struct RealPoly {
    prec: u32,
    coeffs: Vec<Float>,
}

impl RealPoly {
    fn one(prec: u32) -> RealPoly {
        RealPoly {
            prec,
            coeffs: vec![Float::with_val(prec, 1)],
        }
    }

    fn mul_factor(&mut self, factor: &[Float]) {
        let mut out = vec![Float::with_val(self.prec, 0); self.coeffs.len() + factor.len() - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            for (k, f) in factor.iter().enumerate() {
                out[i + k] += Float::with_val(self.prec, c * f);
            }
        }
        self.coeffs = out;
    }
}

fn round_if_stable(coeffs: &[Float]) -> Option<Vec<Integer>> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let nearest = c.to_integer()?;
        let dist = (c.clone() - Float::with_val(c.prec(), &nearest)).abs();
        if dist.to_f64() >= 0.0009765625 {
            return None; // farther than 2^-10 from an integer
        }
        out.push(nearest);
    }
    Some(out)
}

const PRECISION_CEILING: u32 = 1 << 22;

/// The class polynomial of D by evaluating j at every CM point and
/// expanding the product. Starts at precision_bound(D) + 64 guard bits
/// (or the caller's hint if larger) and doubles until every coefficient
/// rounds cleanly.
pub fn hilbert_analytic(d: &Discriminant, bits_hint: u32) -> Result<IntPoly> {
    let forms = enumerate_reduced(d);
    let h = forms.len();
    let mut bits = precision_bound(d).max(16).saturating_add(64).max(bits_hint);
    loop {
        if bits > PRECISION_CEILING {
            return Err(Error::PrecisionExhausted { bits });
        }
        if let Some(coeffs) = hilbert_attempt(d, &forms, bits) {
            let poly = IntPoly::new(coeffs);
            debug_assert_eq!(poly.degree(), Some(h));
            debug_assert!(poly.is_monic());
            return Ok(poly);
        }
        bits *= 2;
    }
}

fn hilbert_attempt(d: &Discriminant, forms: &[QuadForm], bits: u32) -> Option<Vec<Integer>> {
    let prec = bits + 32;
    let mut product = RealPoly::one(prec);
    for form in forms {
        if *form.b() < 0 {
            continue; // conjugate partner of a b > 0 form
        }
        let ambiguous = form.b().is_zero() || form.a() == form.b() || form.a() == form.c();
        let point = CmPoint::new(form.clone(), prec);
        let j = j_eval(point.tau(), bits);
        if ambiguous {
            // self-inverse class: j is real, contribute X - j
            let factor = [-j.real().clone(), Float::with_val(prec, 1)];
            product.mul_factor(&factor);
        } else {
            // (X - j)(X - conj j) = X^2 - 2 Re(j) X + |j|^2
            let re = j.real().clone();
            let norm = j.real().clone().square() + j.imag().clone().square();
            let factor = [norm, re * -2, Float::with_val(prec, 1)];
            product.mul_factor(&factor);
        }
    }
    if product.coeffs.len() != forms.len() + 1 {
        // pairing bookkeeping must cover every class exactly once
        panic!("conjugate pairing mismatch for discriminant {}", d.value());
    }
    round_if_stable(&product.coeffs)
}
