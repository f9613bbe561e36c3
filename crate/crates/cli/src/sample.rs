//! Deterministic sampling of group points from the level lattice `s·R^d`.
//!
//! The seed fully determines every draw, so two runs with the same
//! arguments produce byte-identical reports.  Coordinates are drawn from
//! `s·{-B..B}` over the rationals and from `s·(uniform residues mod p^N)`
//! over p-adic rings; either way every coordinate has valuation at least
//! `v_p(s)`, so sampled points lie in the domain of the group logarithm by
//! construction.

use grouplaw::coeff::{Coefficient, Ring};
use num::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct PointSampler {
    ring: Ring,
    scale: u64,
    bound: i64,
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(ring: Ring, scale: u64, bound: i64, seed: u64) -> PointSampler {
        PointSampler {
            ring,
            scale,
            bound: bound.max(1),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One coordinate vector of the given dimension.
    pub fn coordinates(&mut self, dimension: usize) -> Vec<Coefficient> {
        (0..dimension).map(|_| self.coordinate()).collect()
    }

    /// A uniform index below `n`, from the same deterministic stream.
    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn coordinate(&mut self) -> Coefficient {
        match self.ring {
            Ring::Rational => {
                let k = self.rng.gen_range(-self.bound..=self.bound);
                Coefficient::from_integer(self.ring, self.scale as i64 * k)
            }
            Ring::PAdic { p, precision } | Ring::PAdicT { p, precision, .. } => {
                // A uniform residue mod p^N, drawn digit by digit so the
                // result is exact at any precision.
                let mut residue = BigInt::from(0);
                let mut power = BigInt::from(1);
                for _ in 0..precision {
                    let digit = self.rng.gen_range(0..p);
                    residue += BigInt::from(digit) * &power;
                    power *= p;
                }
                Coefficient::from_integer(self.ring, BigInt::from(self.scale) * residue)
            }
        }
    }
}
