//! Exact kernels for desk-scale experiments with modular square roots.
//!
//! The crate is split along the objects it computes:
//!
//! * [`arith`] — integer factorization, multiplicative functions, and
//!   square roots modulo prime powers and composites (exact, `u64` range).
//! * [`energy`] — root tables, difference spectra, the restricted additive
//!   energies `E2`/`E4` and their unrestricted counterparts `T2`/`T4`,
//!   together with the proven and conjectural bound expressions.
//! * [`lattice`] — the planar congruence lattice `x ≡ c·y (mod r)`, boxes,
//!   exact successive minima with witnesses, point counts, and the
//!   Minkowski / Betke–Henk–Wills certificate checks.
//! * [`bilinear`] — bilinear sums with square-root phases, their bound
//!   formulas, and a Weyl-differencing inequality checker.
//! * [`sieve`] — the large-sieve quadratic-moduli sum, the counting
//!   function `P(α)`, and the critical-point parameter selectors.
//!
//! Everything here is a pure function of its inputs: no I/O, no global
//! state, no interior mutability. The crate builds without `std` (the
//! `alloc` crate is required); transcendental functions go through `libm`
//! so results are bit-identical across platforms and feature sets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod bilinear;
pub mod energy;
pub mod frac;
pub mod fx;
pub mod lattice;
pub mod rng;
pub mod sieve;

/// Outcome of a single named inequality or range condition.
///
/// `lhs` and `rhs` are the two sides as evaluated; `holds` is the exact
/// verdict (computed in integer/rational arithmetic where possible, so it
/// is not merely `lhs <= rhs` on the rounded values).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Condition {
    /// Natural-log margin by which the condition holds (negative if violated).
    pub fn log_margin(&self) -> f64 {
        if self.lhs <= 0.0 || self.rhs <= 0.0 {
            return if self.holds { 0.0 } else { f64::NEG_INFINITY };
        }
        fx::ln(self.rhs) - fx::ln(self.lhs)
    }
}
