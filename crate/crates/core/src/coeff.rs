//! Coefficient rings for truncated series arithmetic.
//!
//! Three rings are supported, selected dynamically by a [`Ring`] descriptor:
//!
//! * `Rational` — exact arbitrary-precision rationals.
//! * `PAdic { p, precision: N }` — fixed-precision p-adic integers.  An
//!   element is `p^shift * residue` with `0 <= residue < p^digits`, where
//!   `digits <= N` counts the guaranteed digits of the residue.  The absolute
//!   precision of the element is `shift + digits`: the value is known modulo
//!   `p^(shift + digits)` and nothing more.  Negative shifts (Laurent
//!   headroom) arise transiently from division and are rejected when an
//!   integral element is required for storage.
//! * `PAdicT { p, precision: N, t_precision: M }` — polynomials in `t` of
//!   degree `< M` with `PAdic` coefficients, multiplied modulo `t^M`.
//!
//! Invariants maintained by every constructor and operation:
//!
//! * Residues are reduced: `0 <= residue < p^digits`, `1 <= digits <= N`.
//! * A residue divisible by `p` under a negative shift is renormalized
//!   (powers of `p` move from the residue into the shift, shrinking `digits`
//!   so the absolute precision is preserved — precision loss is tracked, not
//!   hidden).
//! * An operation whose result would retain no guaranteed digit fails with
//!   [`Error::PrecisionExhausted`] instead of returning junk.
//! * Operands from different rings are rejected, never coerced.
//!
//! Equality of p-adic elements is congruence at the smaller of the two
//! guaranteed absolute precisions; exact rationals compare exactly.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scale constant for convergence of p-adic exp/log: points of the standard
/// group must have coordinates divisible by `4` when `p = 2` and by `p`
/// otherwise.
pub fn convergence_scale(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}

/// Descriptor of a coefficient ring.  Cheap to copy and carried by every
/// coefficient, series, law, and operator so mismatches are caught early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Ring {
    /// Exact rationals.
    #[serde(rename = "rational")]
    Rational,
    /// p-adic integers to absolute precision `p^precision`.
    #[serde(rename = "padic")]
    PAdic { p: u64, precision: u32 },
    /// `(Z/p^precision)[t] / t^t_precision`.
    #[serde(rename = "padic_t")]
    PAdicT {
        p: u64,
        precision: u32,
        t_precision: u32,
    },
}

impl Ring {
    pub fn rational() -> Self {
        Ring::Rational
    }

    pub fn padic(p: u64, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least one digit");
        Ring::PAdic { p, precision }
    }

    pub fn padic_t(p: u64, precision: u32, t_precision: u32) -> Self {
        assert!(precision >= 1 && t_precision >= 1);
        Ring::PAdicT {
            p,
            precision,
            t_precision,
        }
    }

    /// The prime, if the ring has one.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Ring::Rational => None,
            Ring::PAdic { p, .. } | Ring::PAdicT { p, .. } => Some(*p),
        }
    }

    /// Number of guaranteed p-adic digits carried by the ring (`N`).
    pub fn precision(&self) -> Option<u32> {
        match self {
            Ring::Rational => None,
            Ring::PAdic { precision, .. } | Ring::PAdicT { precision, .. } => Some(*precision),
        }
    }

    /// Truncation order in `t` (`M`), for the polynomial extension.
    pub fn t_precision(&self) -> Option<u32> {
        match self {
            Ring::PAdicT { t_precision, .. } => Some(*t_precision),
            _ => None,
        }
    }

    /// Same ring with a different number of p-adic digits.  Used to run a
    /// computation at a widened working precision before reducing back.
    pub fn with_precision(&self, precision: u32) -> Ring {
        match *self {
            Ring::Rational => Ring::Rational,
            Ring::PAdic { p, .. } => Ring::PAdic { p, precision },
            Ring::PAdicT { p, t_precision, .. } => Ring::PAdicT {
                p,
                precision,
                t_precision,
            },
        }
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "Q"),
            Ring::PAdic { p, precision } => write!(f, "Z_{p} (N = {precision})"),
            Ring::PAdicT {
                p,
                precision,
                t_precision,
            } => write!(f, "Z_{p}[t]/t^{t_precision} (N = {precision})"),
        }
    }
}

/// p-adic valuation, `+inf` for zero (at working precision).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_at_least(&self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => *v >= bound,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

pub(crate) fn pow_bigint(p: u64, k: u32) -> BigInt {
    num::pow::pow(BigInt::from(p), k as usize)
}

/// p-adic valuation of a nonzero integer.
fn int_valuation(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if r.is_zero() {
            v += 1;
            x = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of an exact rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
    }
}

/// True when `v_p(a - b) >= k`, i.e. the rationals agree modulo `p^k`.
pub fn rationals_congruent(a: &BigRational, b: &BigRational, p: u64, k: i64) -> bool {
    rational_valuation(&(a - b), p).is_at_least(k)
}

/// Inverse of `a` modulo `m`; `a` must be a unit.
fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Ok(e.x.mod_floor(m))
    } else {
        Err(Error::InexactDivision(format!(
            "{a} is not a unit modulo {m}"
        )))
    }
}

/// One p-adic element: `p^shift * residue`, residue reduced modulo
/// `p^digits`.  The value is guaranteed modulo `p^(shift + digits)`.
#[derive(Debug, Clone)]
struct Padic {
    shift: i64,
    digits: u32,
    residue: BigInt,
}

impl Padic {
    /// Canonicalize raw data: reduce the residue, strip powers of `p` out of
    /// the residue while the shift is negative (keeping absolute precision
    /// honest), fold nonnegative shifts into the residue, and cap guaranteed
    /// digits at the ring precision.  Fails if no guaranteed digit survives.
    fn make(p: u64, n: u32, mut shift: i64, residue: BigInt, digits: u32) -> Result<Padic> {
        let abs_prec = shift + digits as i64;
        if abs_prec < 1 {
            return Err(Error::PrecisionExhausted(format!(
                "element known only modulo {p}^{abs_prec}"
            )));
        }
        let mut digits = digits.min(n);
        let mut residue = residue.mod_floor(&pow_bigint(p, digits));
        if residue.is_zero() {
            // Canonical zero at the surviving absolute precision.
            let d = (abs_prec.min(n as i64)) as u32;
            return Ok(Padic {
                shift: 0,
                digits: d,
                residue: BigInt::zero(),
            });
        }
        // Move p-powers from the residue into a negative shift; each moved
        // digit was a leading zero, so the guarantee shrinks with it.
        if shift < 0 {
            let v = int_valuation(&residue, p).min(-shift).min(digits as i64 - 1);
            if v > 0 {
                residue /= pow_bigint(p, v as u32);
                shift += v;
                digits -= v as u32;
            }
        }
        // Fold a nonnegative shift into the residue (fixed-modulus storage
        // form); knowledge beyond p^n is discarded by the ring.
        if shift > 0 {
            let d = (shift + digits as i64).min(n as i64) as u32;
            residue = (residue * pow_bigint(p, shift as u32)).mod_floor(&pow_bigint(p, d));
            shift = 0;
            digits = d;
            if residue.is_zero() {
                return Ok(Padic {
                    shift: 0,
                    digits,
                    residue,
                });
            }
        }
        Ok(Padic {
            shift,
            digits,
            residue,
        })
    }

    fn zero(n: u32) -> Padic {
        Padic {
            shift: 0,
            digits: n,
            residue: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn abs_precision(&self) -> i64 {
        self.shift + self.digits as i64
    }

    fn valuation(&self, p: u64) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.shift + int_valuation(&self.residue, p))
        }
    }

    /// Valuation of the residue, capped at the guaranteed digits.
    fn residue_valuation(&self, p: u64) -> i64 {
        if self.is_zero() {
            self.digits as i64
        } else {
            int_valuation(&self.residue, p).min(self.digits as i64)
        }
    }

    fn add(&self, other: &Padic, p: u64, n: u32) -> Result<Padic> {
        let shift = self.shift.min(other.shift);
        let abs = self.abs_precision().min(other.abs_precision());
        let d = abs - shift;
        if d < 1 {
            return Err(Error::PrecisionExhausted(
                "sum retains no guaranteed digit".into(),
            ));
        }
        let a = &self.residue * pow_bigint(p, (self.shift - shift) as u32);
        let b = &other.residue * pow_bigint(p, (other.shift - shift) as u32);
        Padic::make(p, n, shift, a + b, d.min(n as i64) as u32)
    }

    fn neg(&self, p: u64, n: u32) -> Result<Padic> {
        Padic::make(p, n, self.shift, -&self.residue, self.digits)
    }

    fn mul(&self, other: &Padic, p: u64, n: u32) -> Result<Padic> {
        let shift = self.shift + other.shift;
        let va = self.residue_valuation(p);
        let vb = other.residue_valuation(p);
        let d = (self.digits as i64 + vb)
            .min(other.digits as i64 + va)
            .min(n as i64) as u32;
        Padic::make(p, n, shift, &self.residue * &other.residue, d)
    }

    /// Exact division by a nonzero integer: the unit part inverts modulo
    /// `p^digits`, the p-part lowers the shift (absolute precision drops).
    fn div_int(&self, k: &BigInt, p: u64, n: u32) -> Result<Padic> {
        if k.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        let v = int_valuation(k, p);
        let unit = k / pow_bigint(p, v as u32);
        let inv = mod_inverse(&unit, &pow_bigint(p, self.digits))?;
        Padic::make(p, n, self.shift - v, &self.residue * inv, self.digits)
    }

    /// Division by a general element; the divisor's unit part inverts and
    /// its p-part lowers the shift.
    fn div(&self, other: &Padic, p: u64, n: u32) -> Result<Padic> {
        if other.is_zero() {
            return Err(Error::InexactDivision(
                "division by zero at working precision".into(),
            ));
        }
        let v = int_valuation(&other.residue, p);
        let unit = &other.residue / pow_bigint(p, v as u32);
        let d = self.digits.min(other.digits - v as u32);
        let inv = mod_inverse(&unit, &pow_bigint(p, d))?;
        Padic::make(
            p,
            n,
            self.shift - other.shift - v,
            self.residue.mod_floor(&pow_bigint(p, d)) * inv,
            d,
        )
    }

    /// Congruence at the smaller guaranteed absolute precision.
    fn congruent(&self, other: &Padic, p: u64) -> bool {
        let abs = self.abs_precision().min(other.abs_precision());
        let shift = self.shift.min(other.shift);
        let m = pow_bigint(p, (abs - shift) as u32);
        let a = &self.residue * pow_bigint(p, (self.shift - shift) as u32);
        let b = &other.residue * pow_bigint(p, (other.shift - shift) as u32);
        (a - b).mod_floor(&m).is_zero()
    }

    /// Canonical rational lift `p^shift * residue`.
    fn lift(&self, p: u64) -> BigRational {
        if self.shift >= 0 {
            BigRational::from_integer(&self.residue * pow_bigint(p, self.shift as u32))
        } else {
            BigRational::new(self.residue.clone(), pow_bigint(p, (-self.shift) as u32))
        }
    }

    fn from_rational(x: &BigRational, p: u64, n: u32) -> Result<Padic> {
        if x.is_zero() {
            return Ok(Padic::zero(n));
        }
        let vn = int_valuation(x.numer(), p);
        let vd = int_valuation(x.denom(), p);
        let num_unit = x.numer() / pow_bigint(p, vn as u32);
        let den_unit = x.denom() / pow_bigint(p, vd as u32);
        let m = pow_bigint(p, n);
        let inv = mod_inverse(&den_unit, &m)?;
        Padic::make(p, n, vn - vd, num_unit.mod_floor(&m) * inv, n)
    }

    fn fmt_with(&self, p: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*{}^{} mod {}^{}",
            self.residue, p, self.shift, p, self.digits
        )
    }
}

#[derive(Debug, Clone)]
enum Value {
    Rational(BigRational),
    PAdic(Padic),
    /// Coefficient of `t^i` at index `i`; trailing zero coefficients are
    /// trimmed, the zero polynomial is the empty vector.
    PAdicT(Vec<Padic>),
}

/// An element of one of the supported coefficient rings.
#[derive(Debug, Clone)]
pub struct Coefficient {
    ring: Ring,
    value: Value,
}

impl Coefficient {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn zero(ring: Ring) -> Coefficient {
        let value = match ring {
            Ring::Rational => Value::Rational(BigRational::zero()),
            Ring::PAdic { precision, .. } => Value::PAdic(Padic::zero(precision)),
            Ring::PAdicT { .. } => Value::PAdicT(Vec::new()),
        };
        Coefficient { ring, value }
    }

    pub fn one(ring: Ring) -> Coefficient {
        Coefficient::from_integer(ring, BigInt::one())
    }

    pub fn from_integer(ring: Ring, x: impl Into<BigInt>) -> Coefficient {
        let x = BigRational::from_integer(x.into());
        Coefficient::from_rational(ring, x).expect("integers embed into every ring")
    }

    /// Embed an exact rational.  For p-adic rings the denominator's p-part
    /// becomes a negative shift (Laurent form); a denominator prime to `p`
    /// inverts exactly modulo `p^N`.
    pub fn from_rational(ring: Ring, x: BigRational) -> Result<Coefficient> {
        let value = match ring {
            Ring::Rational => Value::Rational(x),
            Ring::PAdic { p, precision } => Value::PAdic(Padic::from_rational(&x, p, precision)?),
            Ring::PAdicT { p, precision, .. } => {
                if x.is_zero() {
                    Value::PAdicT(Vec::new())
                } else {
                    Value::PAdicT(vec![Padic::from_rational(&x, p, precision)?])
                }
            }
        };
        Ok(Coefficient { ring, value })
    }

    /// The monomial `c * t^k` in a `PAdicT` ring (zero when `k >= M`).
    pub fn t_monomial(ring: Ring, c: BigRational, k: u32) -> Result<Coefficient> {
        match ring {
            Ring::PAdicT {
                p,
                precision,
                t_precision,
            } => {
                if k >= t_precision || c.is_zero() {
                    return Ok(Coefficient::zero(ring));
                }
                let mut coeffs = vec![Padic::zero(precision); k as usize];
                coeffs.push(Padic::from_rational(&c, p, precision)?);
                Ok(Coefficient {
                    ring,
                    value: Value::PAdicT(coeffs),
                })
            }
            _ => Err(Error::input(format!("{ring} has no t-monomials"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(x) => x.is_zero(),
            Value::PAdic(x) => x.is_zero(),
            Value::PAdicT(cs) => cs.iter().all(Padic::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Coefficient::one(self.ring)
    }

    fn padic_params(&self) -> (u64, u32) {
        match self.ring {
            Ring::PAdic { p, precision } | Ring::PAdicT { p, precision, .. } => (p, precision),
            Ring::Rational => unreachable!("rational coefficients have no p-adic parameters"),
        }
    }

    pub fn add(&self, other: &Coefficient) -> Result<Coefficient> {
        self.ring.check_same(&other.ring)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::PAdic(a), Value::PAdic(b)) => {
                let (p, n) = self.padic_params();
                Value::PAdic(a.add(b, p, n)?)
            }
            (Value::PAdicT(a), Value::PAdicT(b)) => {
                let (p, n) = self.padic_params();
                let len = a.len().max(b.len());
                let zero = Padic::zero(n);
                let mut out = Vec::with_capacity(len);
                for i in 0..len {
                    let x = a.get(i).unwrap_or(&zero);
                    let y = b.get(i).unwrap_or(&zero);
                    out.push(x.add(y, p, n)?);
                }
                Value::PAdicT(trim_poly(out))
            }
            _ => unreachable!("ring equality guarantees matching variants"),
        };
        Ok(Coefficient {
            ring: self.ring,
            value,
        })
    }

    pub fn neg(&self) -> Result<Coefficient> {
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(-a),
            Value::PAdic(a) => {
                let (p, n) = self.padic_params();
                Value::PAdic(a.neg(p, n)?)
            }
            Value::PAdicT(a) => {
                let (p, n) = self.padic_params();
                let mut out = Vec::with_capacity(a.len());
                for c in a {
                    out.push(c.neg(p, n)?);
                }
                Value::PAdicT(trim_poly(out))
            }
        };
        Ok(Coefficient {
            ring: self.ring,
            value,
        })
    }

    pub fn sub(&self, other: &Coefficient) -> Result<Coefficient> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient> {
        self.ring.check_same(&other.ring)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::PAdic(a), Value::PAdic(b)) => {
                let (p, n) = self.padic_params();
                Value::PAdic(a.mul(b, p, n)?)
            }
            (Value::PAdicT(a), Value::PAdicT(b)) => {
                let (p, n) = self.padic_params();
                let m = self.ring.t_precision().unwrap() as usize;
                Value::PAdicT(poly_mul(a, b, p, n, m)?)
            }
            _ => unreachable!("ring equality guarantees matching variants"),
        };
        Ok(Coefficient {
            ring: self.ring,
            value,
        })
    }

    /// Exact division by a nonzero integer.  Over the rationals this is
    /// always exact; over p-adic rings the p-part of `k` lowers the shift
    /// and with it the guaranteed absolute precision.
    pub fn div_exact_int(&self, k: impl Into<BigInt>) -> Result<Coefficient> {
        let k: BigInt = k.into();
        if k.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(a / BigRational::from_integer(k)),
            Value::PAdic(a) => {
                let (p, n) = self.padic_params();
                Value::PAdic(a.div_int(&k, p, n)?)
            }
            Value::PAdicT(a) => {
                let (p, n) = self.padic_params();
                let mut out = Vec::with_capacity(a.len());
                for c in a {
                    out.push(c.div_int(&k, p, n)?);
                }
                Value::PAdicT(trim_poly(out))
            }
        };
        Ok(Coefficient {
            ring: self.ring,
            value,
        })
    }

    /// Multiply by an exact rational scalar (numerator times, denominator
    /// divided exactly).
    pub fn scale_rational(&self, q: &BigRational) -> Result<Coefficient> {
        let num = Coefficient::from_integer(self.ring, q.numer().clone());
        self.mul(&num)?.div_exact_int(q.denom().clone())
    }

    /// General division.  Over `Q` exact; over p-adic rings the divisor's
    /// unit part inverts and its p-part lowers the shift; over `PAdicT` the
    /// divisor's constant term must be a unit.
    pub fn div(&self, other: &Coefficient) -> Result<Coefficient> {
        self.ring.check_same(&other.ring)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => {
                if b.is_zero() {
                    return Err(Error::InexactDivision("division by zero".into()));
                }
                Value::Rational(a / b)
            }
            (Value::PAdic(a), Value::PAdic(b)) => {
                let (p, n) = self.padic_params();
                Value::PAdic(a.div(b, p, n)?)
            }
            (Value::PAdicT(_), Value::PAdicT(_)) => {
                return self.mul(&other.invert()?);
            }
            _ => unreachable!("ring equality guarantees matching variants"),
        };
        Ok(Coefficient {
            ring: self.ring,
            value,
        })
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self) -> Result<Coefficient> {
        match &self.value {
            Value::Rational(a) => {
                if a.is_zero() {
                    return Err(Error::InexactDivision("zero has no inverse".into()));
                }
                Ok(Coefficient {
                    ring: self.ring,
                    value: Value::Rational(a.recip()),
                })
            }
            Value::PAdic(_) => Coefficient::one(self.ring).div(self),
            Value::PAdicT(cs) => {
                let (p, n) = self.padic_params();
                let m = self.ring.t_precision().unwrap() as usize;
                let c0 = cs.first().cloned().unwrap_or_else(|| Padic::zero(n));
                if c0.valuation(p) != Valuation::Finite(0) {
                    return Err(Error::InexactDivision(
                        "constant-in-t term is not a unit".into(),
                    ));
                }
                // Newton iteration g <- g (2 - f g); t-degree of correctness
                // doubles each round, so ceil(log2 M) + 1 rounds suffice.
                let one = Coefficient::one(self.ring);
                let two = Coefficient::from_integer(self.ring, 2);
                let mut g = Coefficient {
                    ring: self.ring,
                    value: Value::PAdicT(vec![c0.div(&cs[0], p, n)?]),
                };
                let rounds = (usize::BITS - m.leading_zeros()) + 1;
                for _ in 0..rounds {
                    g = g.mul(&two.sub(&self.mul(&g)?)?)?;
                }
                debug_assert!(self.mul(&g)? == one, "Newton inversion converged");
                Ok(g)
            }
        }
    }

    /// p-adic valuation in the ring's own prime; `Rational` has none.
    /// For `PAdicT` this is the minimum over the `t`-coefficients.
    pub fn valuation(&self) -> Result<Valuation> {
        match &self.value {
            Value::Rational(_) => Err(Error::input(
                "rational ring needs a designated prime for valuations; use valuation_at",
            )),
            Value::PAdic(a) => Ok(a.valuation(self.padic_params().0)),
            Value::PAdicT(cs) => {
                let p = self.padic_params().0;
                Ok(cs
                    .iter()
                    .map(|c| c.valuation(p))
                    .min()
                    .unwrap_or(Valuation::Infinite))
            }
        }
    }

    /// Valuation at a designated prime.  For p-adic rings the prime must
    /// match the ring's own.
    pub fn valuation_at(&self, p: u64) -> Result<Valuation> {
        match &self.value {
            Value::Rational(a) => Ok(rational_valuation(a, p)),
            _ => {
                if self.padic_params().0 == p {
                    self.valuation()
                } else {
                    Err(Error::input(format!(
                        "valuation at {p} requested in {}",
                        self.ring
                    )))
                }
            }
        }
    }

    /// Canonical exact-rational lift: identity on `Q`, `p^shift * residue`
    /// for p-adics, and the constant term when a `PAdicT` value happens to
    /// be constant in `t`.
    pub fn to_rational_lift(&self) -> Result<BigRational> {
        match &self.value {
            Value::Rational(a) => Ok(a.clone()),
            Value::PAdic(a) => Ok(a.lift(self.padic_params().0)),
            Value::PAdicT(cs) => {
                if cs.len() <= 1 {
                    Ok(cs
                        .first()
                        .map(|c| c.lift(self.padic_params().0))
                        .unwrap_or_else(BigRational::zero))
                } else {
                    Err(Error::input(
                        "a polynomial in t has no canonical rational lift",
                    ))
                }
            }
        }
    }

    /// Check that the element can be stored as an integral element of the
    /// ring (no negative valuation shift left over from division).
    pub fn assert_integral(&self) -> Result<()> {
        let bad = match &self.value {
            Value::Rational(_) => false,
            Value::PAdic(a) => a.shift < 0,
            Value::PAdicT(cs) => cs.iter().any(|c| c.shift < 0),
        };
        if bad {
            Err(Error::NotIntegral(self.to_string()))
        } else {
            Ok(())
        }
    }

    /// Re-embed the canonical lift into another ring (typically the same
    /// ring at a widened or narrowed precision).  Polynomials in `t` are
    /// lifted coefficient by coefficient.  The result claims full digits of
    /// the *representative*; callers that lift residues are responsible for
    /// reducing final answers back to the original modulus.
    pub fn reinterpret_in(&self, ring: Ring) -> Result<Coefficient> {
        if let (Value::PAdicT(cs), Ring::PAdicT { p: q, .. }) = (&self.value, ring) {
            let p = self.padic_params().0;
            if q != p {
                return Err(Error::input(format!(
                    "cannot reinterpret a {p}-adic t-polynomial in {ring}"
                )));
            }
            let mut acc = Coefficient::zero(ring);
            for (k, c) in cs.iter().enumerate() {
                acc = acc.add(&Coefficient::t_monomial(ring, c.lift(p), k as u32)?)?;
            }
            return Ok(acc);
        }
        Coefficient::from_rational(ring, self.to_rational_lift()?)
    }

    /// Number of guaranteed digits (absolute p-adic precision); `None` over
    /// the rationals.
    pub fn guaranteed_precision(&self) -> Option<i64> {
        match &self.value {
            Value::Rational(_) => None,
            Value::PAdic(a) => Some(a.abs_precision()),
            Value::PAdicT(cs) => cs.iter().map(|c| c.abs_precision()).min().or_else(|| {
                Some(self.ring.precision().unwrap() as i64)
            }),
        }
    }
}

fn trim_poly(mut cs: Vec<Padic>) -> Vec<Padic> {
    while cs.last().is_some_and(Padic::is_zero) {
        cs.pop();
    }
    cs
}

fn poly_mul(a: &[Padic], b: &[Padic], p: u64, n: u32, m: usize) -> Result<Vec<Padic>> {
    let len = (a.len() + b.len()).saturating_sub(1).min(m);
    let mut out = vec![Padic::zero(n); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j >= m {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y, p, n)?, p, n)?;
        }
    }
    Ok(trim_poly(out))
}

impl PartialEq for Coefficient {
    /// Exact equality over `Q`; congruence at the smaller guaranteed
    /// absolute precision for p-adic rings.
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => a == b,
            (Value::PAdic(a), Value::PAdic(b)) => a.congruent(b, self.padic_params().0),
            (Value::PAdicT(a), Value::PAdicT(b)) => {
                let (p, n) = self.padic_params();
                let zero = Padic::zero(n);
                let len = a.len().max(b.len());
                (0..len).all(|i| {
                    a.get(i)
                        .unwrap_or(&zero)
                        .congruent(b.get(i).unwrap_or(&zero), p)
                })
            }
            _ => false,
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(a) => {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            Value::PAdic(a) => a.fmt_with(self.padic_params().0, f),
            Value::PAdicT(cs) => {
                if cs.iter().all(Padic::is_zero) {
                    return write!(f, "0");
                }
                let p = self.padic_params().0;
                let mut first = true;
                for (k, c) in cs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    // Storage-canonical coefficients have shift 0 and print
                    // as bare residues; transient Laurent parts keep the
                    // explicit power.
                    let coeff = if c.shift == 0 {
                        format!("{}", c.residue)
                    } else {
                        format!("{}*{}^{}", c.residue, p, c.shift)
                    };
                    match k {
                        0 => write!(f, "{coeff}")?,
                        1 => write!(f, "{coeff}*t")?,
                        _ => write!(f, "{coeff}*t^{k}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parse the text encoding of a coefficient in a given ring.
///
/// * `Rational`: `"a/b"` or `"a"`.
/// * `PAdic`: `"u*p^s mod p^N"`, or a plain (possibly signed) integer which
///   embeds at full precision.
/// * `PAdicT`: `"c0 + c1*t + c2*t^2"` with integer or `u*p^s` coefficients.
pub fn parse_coefficient(ring: Ring, s: &str) -> Result<Coefficient> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::input("empty coefficient"));
    }
    match ring {
        Ring::Rational => {
            let q = parse_rational(s)?;
            Coefficient::from_rational(ring, q)
        }
        Ring::PAdic { p, precision } => {
            if let Some((lhs, rhs)) = s.split_once(" mod ") {
                let (residue, shift) = parse_power_term(lhs.trim(), p)?;
                let digits = parse_modulus(rhs.trim(), p)?;
                if digits < 1 || digits > precision {
                    return Err(Error::input(format!(
                        "modulus {p}^{digits} outside ring precision {p}^{precision}"
                    )));
                }
                let x = Padic::make(p, precision, shift, residue, digits)?;
                Ok(Coefficient {
                    ring,
                    value: Value::PAdic(x),
                })
            } else {
                let q = parse_rational(s)?;
                Coefficient::from_rational(ring, q)
            }
        }
        Ring::PAdicT { p, precision, .. } => {
            let mut acc = Coefficient::zero(ring);
            for term in s.split('+') {
                let term = term.trim();
                let (coeff_str, t_pow) = split_t_power(term)?;
                let (residue, shift) = if coeff_str.is_empty() {
                    (BigInt::one(), 0)
                } else if coeff_str.contains('^') {
                    parse_power_term(coeff_str, p)?
                } else {
                    (
                        coeff_str
                            .parse::<BigInt>()
                            .map_err(|e| Error::input(format!("bad residue {coeff_str:?}: {e}")))?,
                        0,
                    )
                };
                let c = Padic::make(p, precision, shift, residue, precision)?;
                let lift = c.lift(p);
                acc = acc.add(&Coefficient::t_monomial(ring, lift, t_pow)?)?;
            }
            Ok(acc)
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n = num
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::input(format!("bad numerator {num:?}: {e}")))?;
        let d = den
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::input(format!("bad denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::input("zero denominator"));
        }
        Ok(BigRational::new(n, d))
    } else {
        s.parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|e| Error::input(format!("bad integer {s:?}: {e}")))
    }
}

/// Parse `"u*p^s"` (or a bare integer) against a known prime.
fn parse_power_term(s: &str, p: u64) -> Result<(BigInt, i64)> {
    if let Some((residue, power)) = s.split_once('*') {
        let residue = residue
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::input(format!("bad residue {residue:?}: {e}")))?;
        let (base, exp) = power
            .trim()
            .split_once('^')
            .ok_or_else(|| Error::input(format!("expected p^s, found {power:?}")))?;
        if base.trim() != p.to_string() {
            return Err(Error::input(format!(
                "prime {base} does not match ring prime {p}"
            )));
        }
        let shift = exp
            .trim()
            .parse::<i64>()
            .map_err(|e| Error::input(format!("bad shift {exp:?}: {e}")))?;
        Ok((residue, shift))
    } else {
        let residue = s
            .parse::<BigInt>()
            .map_err(|e| Error::input(format!("bad residue {s:?}: {e}")))?;
        Ok((residue, 0))
    }
}

/// Parse `"p^N"` against a known prime.
fn parse_modulus(s: &str, p: u64) -> Result<u32> {
    let (base, exp) = s
        .split_once('^')
        .ok_or_else(|| Error::input(format!("expected p^N, found {s:?}")))?;
    if base.trim() != p.to_string() {
        return Err(Error::input(format!(
            "modulus prime {base} does not match ring prime {p}"
        )));
    }
    exp.trim()
        .parse::<u32>()
        .map_err(|e| Error::input(format!("bad modulus exponent {exp:?}: {e}")))
}

/// Split a `PAdicT` term into its coefficient text and t-power:
/// `"5"` -> `("5", 0)`, `"5*t"` -> `("5", 1)`, `"t^2"` -> `("", 2)`.
fn split_t_power(term: &str) -> Result<(&str, u32)> {
    if term == "t" {
        return Ok(("", 1));
    }
    if let Some(exp) = term.strip_prefix("t^") {
        let k = exp
            .parse::<u32>()
            .map_err(|e| Error::input(format!("bad t-power {exp:?}: {e}")))?;
        return Ok(("", k));
    }
    if let Some((coeff, t_part)) = term.rsplit_once("*t") {
        if t_part.is_empty() {
            return Ok((coeff.trim(), 1));
        }
        if let Some(exp) = t_part.strip_prefix('^') {
            let k = exp
                .parse::<u32>()
                .map_err(|e| Error::input(format!("bad t-power {exp:?}: {e}")))?;
            return Ok((coeff.trim(), k));
        }
    }
    Ok((term, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Coefficient {
        Coefficient::from_rational(Ring::Rational, BigRational::new(n.into(), d.into())).unwrap()
    }

    fn z3() -> Ring {
        Ring::padic(3, 4)
    }

    #[test]
    fn rational_add_reduces() {
        let sum = q(1, 2).add(&q(1, 3)).unwrap();
        assert_eq!(sum, q(5, 6));
        assert_eq!(sum.to_string(), "5/6");
    }

    #[test]
    fn padic_add_and_valuation() {
        let a = Coefficient::from_integer(z3(), 3);
        let b = Coefficient::from_integer(z3(), 6);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum, Coefficient::from_integer(z3(), 9));
        assert_eq!(sum.valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(sum.to_string(), "9*3^0 mod 3^4");
    }

    #[test]
    fn padict_add() {
        let ring = Ring::padic_t(3, 2, 2);
        let one_2t = parse_coefficient(ring, "1 + 2*t").unwrap();
        let two_t = parse_coefficient(ring, "2 + t").unwrap();
        let sum = one_2t.add(&two_t).unwrap();
        assert_eq!(sum.to_string(), "3 + 3*t");
    }

    #[test]
    fn padict_mul_truncates_t() {
        let ring = Ring::padic_t(3, 2, 2);
        let a = parse_coefficient(ring, "1 + t").unwrap();
        let sq = a.mul(&a).unwrap();
        // (1 + t)^2 = 1 + 2t + t^2, and t^2 = 0 in the ring.
        assert_eq!(sq.to_string(), "1 + 2*t");
    }

    #[test]
    fn padict_reinterpret_lifts_each_t_coefficient() {
        let ring = Ring::padic_t(3, 2, 2);
        let a = parse_coefficient(ring, "2 + 5*t").unwrap();
        let wide = a.reinterpret_in(ring.with_precision(4)).unwrap();
        assert_eq!(wide.ring().precision(), Some(4));
        let back = wide.reinterpret_in(ring).unwrap();
        assert!(a.sub(&back).unwrap().is_zero());
        assert!(a.reinterpret_in(Ring::padic_t(5, 2, 2)).is_err());
    }

    #[test]
    fn valuation_examples() {
        let v = Coefficient::from_integer(z3(), 18).valuation().unwrap();
        assert_eq!(v, Valuation::Finite(2));

        let zero = Coefficient::zero(z3());
        assert_eq!(zero.valuation().unwrap(), Valuation::Infinite);

        let x = q(-1, 24);
        assert_eq!(x.valuation_at(2).unwrap(), Valuation::Finite(-3));
    }

    #[test]
    fn rational_div_exact() {
        assert_eq!(q(1, 2).div_exact_int(3).unwrap(), q(1, 6));
    }

    #[test]
    fn padic_div_renormalizes_shift() {
        // 9 / 3 = 3: the shift dips to -1 and the residue's own power of 3
        // folds back, at the cost of one guaranteed digit.
        let nine = Coefficient::from_integer(z3(), 9);
        let third = nine.div_exact_int(3).unwrap();
        assert_eq!(third, Coefficient::from_integer(z3(), 3));
        assert_eq!(third.to_string(), "3*3^0 mod 3^3");
        assert_eq!(third.guaranteed_precision(), Some(3));
        third.assert_integral().unwrap();
    }

    #[test]
    fn padic_div_laurent_headroom() {
        // 2 / 3 stays at shift -1: a genuine Laurent element, fine in
        // transit but rejected for storage.
        let x = Coefficient::from_integer(z3(), 2).div_exact_int(3).unwrap();
        assert_eq!(x.to_string(), "2*3^-1 mod 3^4");
        assert_eq!(x.valuation().unwrap(), Valuation::Finite(-1));
        assert!(matches!(x.assert_integral(), Err(Error::NotIntegral(_))));
        // Multiplying the headroom away makes it integral again.
        let back = x.mul(&Coefficient::from_integer(z3(), 3)).unwrap();
        assert_eq!(back, Coefficient::from_integer(z3(), 2));
    }

    #[test]
    fn padic_precision_exhaustion() {
        let one = Coefficient::one(z3());
        let err = one.div_exact_int(81).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted(_)), "{err}");
    }

    #[test]
    fn integer_embedding_round_trips() {
        for ring in [Ring::Rational, z3(), Ring::padic_t(3, 2, 2)] {
            for k in -5i64..20 {
                let c = Coefficient::from_integer(ring, k);
                let parsed = parse_coefficient(ring, &c.to_string()).unwrap();
                assert_eq!(c, parsed, "round trip of {k} in {ring}");
            }
        }
    }

    #[test]
    fn padic_embedding_reads_back_mod_pn() {
        let c = Coefficient::from_integer(z3(), 100);
        // 100 = 81 + 19 == 19 mod 3^4.
        assert_eq!(c.to_string(), "19*3^0 mod 3^4");
        assert_eq!(
            c.to_rational_lift().unwrap(),
            BigRational::from_integer(19.into())
        );
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let err = q(1, 2).add(&Coefficient::one(z3())).unwrap_err();
        assert!(matches!(err, Error::RingMismatch(..)));
    }

    #[test]
    fn parse_display_round_trip_padic() {
        for s in ["41*3^0 mod 3^4", "2*3^-1 mod 3^4", "0*3^0 mod 3^4"] {
            let c = parse_coefficient(z3(), s).unwrap();
            assert_eq!(c.to_string(), s);
        }
    }

    #[test]
    fn padict_inverse() {
        let ring = Ring::padic_t(3, 2, 2);
        let a = parse_coefficient(ring, "1 + t").unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Coefficient::one(ring));
        assert_eq!(inv.to_string(), "1 + 8*t"); // -1 == 8 mod 9
    }

    #[test]
    fn convergence_scale_values() {
        assert_eq!(convergence_scale(2), 4);
        assert_eq!(convergence_scale(3), 3);
        assert_eq!(convergence_scale(7), 7);
    }

    #[test]
    fn ring_serde_shape() {
        let j = serde_json::to_string(&Ring::padic(3, 4)).unwrap();
        assert_eq!(j, r#"{"kind":"padic","p":3,"precision":4}"#);
        let back: Ring = serde_json::from_str(&j).unwrap();
        assert_eq!(back, Ring::padic(3, 4));
    }

    proptest! {
        #[test]
        fn rational_ring_axioms(a in -40i64..40, b in -40i64..40, c in -40i64..40,
                                da in 1i64..12, db in 1i64..12, dc in 1i64..12) {
            let (a, b, c) = (q(a, da), q(b, db), q(c, dc));
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.add(&b).unwrap().add(&c).unwrap(),
                a.add(&b.add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.add(&b).unwrap().mul(&c).unwrap(),
                a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.sub(&a).unwrap(), Coefficient::zero(Ring::Rational));
        }

        #[test]
        fn padic_ring_axioms(a in -100i64..100, b in -100i64..100, c in -100i64..100) {
            let ring = Ring::padic(3, 4);
            let (a, b, c) = (
                Coefficient::from_integer(ring, a),
                Coefficient::from_integer(ring, b),
                Coefficient::from_integer(ring, c),
            );
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.add(&b).unwrap().add(&c).unwrap(),
                a.add(&b.add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.add(&b).unwrap().mul(&c).unwrap(),
                a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn valuation_laws(a in 1i64..400, b in 1i64..400) {
            let (ca, cb) = (
                Coefficient::from_integer(Ring::Rational, a),
                Coefficient::from_integer(Ring::Rational, b),
            );
            for p in [2u64, 3, 5] {
                let va = ca.valuation_at(p).unwrap().finite().unwrap();
                let vb = cb.valuation_at(p).unwrap().finite().unwrap();
                let prod = ca.mul(&cb).unwrap();
                prop_assert_eq!(prod.valuation_at(p).unwrap(), Valuation::Finite(va + vb));
                let sum = ca.add(&cb).unwrap();
                prop_assert!(sum.valuation_at(p).unwrap().is_at_least(va.min(vb)));
            }
        }

        #[test]
        fn padic_mul_div_round_trip(a in -200i64..200, n in 1i64..50) {
            let ring = Ring::padic(3, 6);
            let c = Coefficient::from_integer(ring, a);
            let trip = c.mul(&Coefficient::from_integer(ring, n)).unwrap()
                .div_exact_int(n).unwrap();
            prop_assert_eq!(trip, c);
        }
    }
}
