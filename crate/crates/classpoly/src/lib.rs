//! Hilbert class polynomials for imaginary quadratic orders.
//!
//! The central object is H_D, the minimal polynomial over Q of the j-invariant
//! of the complex elliptic curve C/O_D, where O_D is the imaginary quadratic
//! order of discriminant D < 0. H_D is monic with integer coefficients and
//! degree h(D), the class number.
//!
//! Two independent computations are provided:
//!
//! * a multi-prime method: for enough small primes p, the reduction of H_D
//!   mod p is assembled from the j-invariants of curves over F_p whose
//!   endomorphism ring is O_D (found by random search plus isogeny descent,
//!   then walked through the full Galois orbit via modular polynomials), and
//!   the integer coefficients are recovered by the Chinese remainder theorem;
//! * a complex-analytic evaluation: j is evaluated at the CM points attached
//!   to the reduced quadratic forms of discriminant D in high-precision
//!   floating arithmetic and the product of linear factors is rounded.
//!
//! The second serves as an oracle for the first; `crt::verify_against_oracle`
//! compares them coefficient by coefficient.

mod arith;

pub mod analytic;
pub mod crt;
pub mod ecfp;
pub mod error;
pub mod gfpoly;
pub mod inert;
pub mod intpoly;
pub mod modpoly;
pub mod orbit;
pub mod primesel;
pub mod quadform;

pub use crt::{compute_hilbert, verify_against_oracle, ComputeOptions, OracleReport};
pub use error::{Error, Result};
pub use intpoly::IntPoly;
pub use quadform::{Discriminant, QuadForm};
