//! Exact computer algebra for truncated formal group laws and their Lie theory.
//!
//! The library works at a fixed truncation: power series are cut at a total
//! degree bound `D`, p-adic coefficients at a modulus `p^N`.  Within that
//! window everything is exact — no floating point anywhere.
//!
//! The main layers, bottom up:
//!
//! * [`coeff`] — coefficient rings: exact rationals, fixed-precision p-adics
//!   (with Laurent headroom for transient negative valuation), and truncated
//!   polynomial extensions `(Z/p^N)[t]/t^M`.
//! * [`series`] — sparse truncated multivariate power series over those rings.
//! * [`freelie`] — Lyndon words, bracketings, and projection of primitive
//!   elements of the free associative algebra onto the Lyndon basis of the
//!   free Lie algebra.
//! * [`bch`] — the Baker–Campbell–Hausdorff series `log(e^x e^y)` in the
//!   Lyndon basis, its denominator-valuation audit, and its evaluation inside
//!   concrete Lie algebras.
//! * [`liealg`] — structure constants, the Killing form, and radical /
//!   nilpotency analysis over exact rationals.
//! * [`law`] — formal group laws: axiom checks, the extracted Lie algebra,
//!   and group points with multiplication and inversion.
//! * [`operator`] — translation operators on the truncated coordinate
//!   algebra, invariant derivations, operator log/exp, and the group-level
//!   log/exp maps they induce.

pub mod bch;
pub mod coeff;
pub mod error;
pub mod freelie;
pub mod law;
pub mod liealg;
pub mod operator;
pub mod series;

pub use error::{Error, Result};
