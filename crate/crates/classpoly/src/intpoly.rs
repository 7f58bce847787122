//! Univariate polynomials over the integers.
//!
//! The end product of the whole pipeline is one of these: monic, degree
//! h(D). The type also carries the small amount of formatting and
//! reduction logic the front end and the verifier share.

use rug::ops::RemRounding;
use rug::{Complete, Integer};

use crate::gfpoly::PolyModP;

/// Dense integer polynomial, coefficients ascending, trailing zeros
/// trimmed; empty means zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> IntPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_else(Integer::new)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| *c == 1)
    }

    /// Bit length of the largest coefficient in absolute value; the
    /// height that the precision bound has to dominate.
    pub fn height_bits(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.significant_bits())
            .max()
            .unwrap_or(0)
    }

    pub fn reduce_mod(&self, p: u64) -> PolyModP {
        let m = Integer::from(p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| (c.rem_euc(&m)).complete().to_u64().expect("residue fits"))
            .collect();
        PolyModP::new(p, coeffs)
    }

    /// Render in descending powers with explicit signs, e.g.
    /// "X^7 + 72X^6 + ... + 30X + 19" or "X - 1728".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < 0;
            let abs = c.clone().abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = abs == 1;
            match k {
                0 => out.push_str(&abs.to_string()),
                1 => {
                    if !unit {
                        out.push_str(&abs.to_string());
                    }
                    out.push('X');
                }
                _ => {
                    if !unit {
                        out.push_str(&abs.to_string());
                    }
                    out.push_str(&format!("X^{k}"));
                }
            }
        }
        out
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}
