//! Exact-arithmetic tools for codes with symmetric distance sets.
//!
//! The crate covers the dual orthogonal polynomials of the Johnson scheme
//! `J(2n, n)` and the binary Hamming scheme `H(n, 2)`, the upper bounds for
//! symmetric-distance codes in those schemes, the certificate polynomial whose
//! integral zeros are necessary for a tight code, and the number-theoretic
//! machinery (half-integer binomials, p-adic valuations, prime gaps) used to
//! exclude parameter ranges. Every verdict is computed in exact arithmetic.

pub mod codes;
pub mod error;
pub mod exactnum;
pub mod phicert;
pub mod primetools;
pub mod schemepoly;
pub mod sweeper;

pub use error::{Error, ErrorKind, Result};
pub use exactnum::{Integer, Rational};
pub use schemepoly::{Family, Poly, SchemeParams};
