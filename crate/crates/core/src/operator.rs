//! Linear operators on the truncated coordinate algebra of a formal group.
//!
//! `A_{<=D}` denotes the jet space `R[y_1..y_d] / (degree > D)`.  A
//! [`TruncOperator`] stores one image series per basis monomial, in graded
//! lexicographic order, so operators compose and compare exactly.
//!
//! The operators of interest:
//!
//! * right translation `rho_x f = f(F(y, x))` and left translation
//!   `lambda_x f = f(F(x^{-1}, y))` for a group point `x`;
//! * the invariant derivation `psi(a) = sum_k W_k(y) d/dy_k` with
//!   `W_k = sum_i (dF_k/dx_i)(y, 0) a_i`, the unique left-invariant vector
//!   field with value `a` at the identity;
//! * `phi`, the linear functional reading the identity-value of a
//!   derivation back off (`phi(psi(a)) = a`).
//!
//! Invariants relied on throughout:
//!
//! * for every law whose components are at most linear in the first
//!   variable block (true of all builtin laws), translation operators on
//!   the jet space are exact, not approximations, so `log`/`exp`
//!   identities hold on the nose;
//! * over a p-adic ring every entry of `rho_x - 1` is divisible by the
//!   coordinates of `x`, so `val(rho_x - 1) >= min_i val(x_i)`; valuations
//!   of operator products add, which drives the convergence certificates
//!   in [`operator_log`] and [`operator_exp`];
//! * over `Q` the logarithm and exponential are degree-`D` jets: exact
//!   whenever the iterate dies (polynomial/nilpotent cases), truncations
//!   otherwise.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One};

use crate::coeff::{Coefficient, Ring, Valuation};
use crate::error::{Error, Result};
use crate::law::{FormalGroupLaw, GroupPoint};
use crate::series::{monomials_up_to, Monomial, TruncSeries};

/// The graded-lexicographic monomial basis of `A_{<=D}`, with an index map
/// for constant-time lookup.  Shared between operators of the same shape.
#[derive(Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree_bound: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree_bound: u32) -> MonomialBasis {
        let monomials = monomials_up_to(nvars, degree_bound);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            nvars,
            degree_bound,
            monomials,
            index,
        }
    }

    /// Cached shared basis; operators of equal shape reuse one allocation.
    pub fn shared(nvars: usize, degree_bound: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("basis cache poisoned");
        map.entry((nvars, degree_bound))
            .or_insert_with(|| Arc::new(MonomialBasis::new(nvars, degree_bound)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A linear endomorphism of `A_{<=D}`, stored column-by-column: entry `j`
/// is the image of the `j`-th basis monomial.
#[derive(Debug, Clone)]
pub struct TruncOperator {
    ring: Ring,
    nvars: usize,
    degree_bound: u32,
    basis: Arc<MonomialBasis>,
    columns: Vec<TruncSeries>,
}

impl PartialEq for TruncOperator {
    /// Shape equality plus column-wise series equality (congruence at the
    /// shared guaranteed precision over p-adic rings).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.nvars == other.nvars
            && self.degree_bound == other.degree_bound
            && self.columns == other.columns
    }
}

impl TruncOperator {
    pub fn zero(ring: Ring, nvars: usize, degree_bound: u32) -> TruncOperator {
        let basis = MonomialBasis::shared(nvars, degree_bound);
        let columns = vec![TruncSeries::zero(ring, nvars, degree_bound); basis.len()];
        TruncOperator {
            ring,
            nvars,
            degree_bound,
            basis,
            columns,
        }
    }

    pub fn identity(ring: Ring, nvars: usize, degree_bound: u32) -> TruncOperator {
        let mut op = TruncOperator::zero(ring, nvars, degree_bound);
        for (j, col) in op.columns.iter_mut().enumerate() {
            col.set_coefficient(op.basis.monomial(j).clone(), Coefficient::one(ring))
                .expect("basis monomial fits its own jet space");
        }
        op
    }

    /// The substitution operator `f -> f(args)`.  Arguments may have
    /// nonzero constant terms (translations do), so images are built by
    /// one multiplication per variable step instead of series
    /// substitution.
    pub fn from_substitution(ring: Ring, args: &[TruncSeries]) -> Result<TruncOperator> {
        let nvars = args.len();
        if nvars == 0 {
            return Err(Error::input("substitution needs at least one variable"));
        }
        let degree_bound = args[0].degree_bound();
        for g in args {
            ring.check_same(&g.ring())?;
            if g.nvars() != nvars || g.degree_bound() != degree_bound {
                return Err(Error::shape(
                    "substitution arguments must share one jet space",
                ));
            }
        }
        let basis = MonomialBasis::shared(nvars, degree_bound);
        let mut columns: Vec<TruncSeries> = Vec::with_capacity(basis.len());
        for m in basis.monomials() {
            if m.is_one() {
                columns.push(TruncSeries::one(ring, nvars, degree_bound));
                continue;
            }
            let k = m.0.iter().position(|&e| e > 0).expect("nonconstant");
            let mut exps = m.0.clone();
            exps[k] -= 1;
            let prev = basis
                .index_of(&Monomial(exps))
                .expect("divisor monomial stays under the bound");
            columns.push(columns[prev].mul(&args[k])?);
        }
        Ok(TruncOperator {
            ring,
            nvars,
            degree_bound,
            basis,
            columns,
        })
    }

    /// The derivation `f -> sum_k fields[k] * df/dy_k`.
    pub fn derivation_from_fields(ring: Ring, fields: &[TruncSeries]) -> Result<TruncOperator> {
        let nvars = fields.len();
        if nvars == 0 {
            return Err(Error::input("a derivation needs at least one variable"));
        }
        let degree_bound = fields[0].degree_bound();
        for w in fields {
            ring.check_same(&w.ring())?;
            if w.nvars() != nvars || w.degree_bound() != degree_bound {
                return Err(Error::shape("derivation fields must share one jet space"));
            }
        }
        let basis = MonomialBasis::shared(nvars, degree_bound);
        let mut columns = Vec::with_capacity(basis.len());
        for m in basis.monomials() {
            let mut image = TruncSeries::zero(ring, nvars, degree_bound);
            for k in 0..nvars {
                let e = m.0[k];
                if e == 0 || fields[k].is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[k] -= 1;
                let part = fields[k].mul_term(&Monomial(exps), &Coefficient::from_integer(ring, e))?;
                image = image.add(&part)?;
            }
            columns.push(image);
        }
        Ok(TruncOperator {
            ring,
            nvars,
            degree_bound,
            basis,
            columns,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Dimension of the jet space the operator acts on.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn columns(&self) -> &[TruncSeries] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &TruncSeries {
        &self.columns[j]
    }

    /// Image of the basis monomial `m`.
    pub fn image_of(&self, m: &Monomial) -> Result<&TruncSeries> {
        let j = self
            .basis
            .index_of(m)
            .ok_or_else(|| Error::shape("monomial outside the jet space"))?;
        Ok(&self.columns[j])
    }

    fn check_shape(&self, other: &TruncOperator) -> Result<()> {
        self.ring.check_same(&other.ring)?;
        if self.nvars != other.nvars || self.degree_bound != other.degree_bound {
            return Err(Error::shape("operators act on different jet spaces"));
        }
        Ok(())
    }

    pub fn apply(&self, f: &TruncSeries) -> Result<TruncSeries> {
        self.ring.check_same(&f.ring())?;
        if f.nvars() != self.nvars || f.degree_bound() != self.degree_bound {
            return Err(Error::shape("series lives outside the operator's jet space"));
        }
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (m, c) in f.iter() {
            if c.is_zero() {
                continue;
            }
            let j = self
                .basis
                .index_of(m)
                .expect("series monomials stay under the bound");
            out = out.add(&self.columns[j].scale(c)?)?;
        }
        Ok(out)
    }

    /// Composition `(self . other)(f) = self(other(f))`.
    pub fn compose(&self, other: &TruncOperator) -> Result<TruncOperator> {
        self.check_shape(other)?;
        let columns = other
            .columns
            .iter()
            .map(|col| self.apply(col))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring: self.ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    pub fn add(&self, other: &TruncOperator) -> Result<TruncOperator> {
        self.check_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring: self.ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    pub fn sub(&self, other: &TruncOperator) -> Result<TruncOperator> {
        self.check_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring: self.ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    pub fn scale(&self, c: &Coefficient) -> Result<TruncOperator> {
        let columns = self
            .columns
            .iter()
            .map(|col| col.scale(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring: self.ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    pub fn scale_rational(&self, q: &BigRational) -> Result<TruncOperator> {
        let columns = self
            .columns
            .iter()
            .map(|col| col.scale_rational(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring: self.ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    /// Commutator `self . other - other . self`.
    pub fn bracket(&self, other: &TruncOperator) -> Result<TruncOperator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(TruncSeries::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == TruncOperator::identity(self.ring, self.nvars, self.degree_bound)
    }

    /// Minimum p-adic valuation over all matrix entries; `None` for the
    /// zero operator.  Valuations of operator products add, which makes
    /// this the contraction modulus for the series below.
    fn min_valuation(&self) -> Result<Option<i64>> {
        let mut min: Option<i64> = None;
        for col in &self.columns {
            for (_, c) in col.iter() {
                match c.valuation()? {
                    Valuation::Infinite => {}
                    Valuation::Finite(v) => min = Some(min.map_or(v, |m| m.min(v))),
                }
            }
        }
        Ok(min)
    }

    /// Fewest guaranteed digits over all entries; `None` over `Q` or for
    /// the zero operator.
    fn min_guaranteed(&self) -> Option<i64> {
        self.columns
            .iter()
            .flat_map(|col| col.iter())
            .filter_map(|(_, c)| c.guaranteed_precision())
            .min()
    }

    /// Re-embed every entry into `ring` through its canonical rational
    /// lift (used to widen the working precision of the series below).
    fn reinterpret_in(&self, ring: Ring) -> Result<TruncOperator> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut out = TruncSeries::zero(ring, self.nvars, self.degree_bound);
                for (m, c) in col.iter() {
                    out.set_coefficient(m.clone(), c.reinterpret_in(ring)?)?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncOperator {
            ring,
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            basis: self.basis.clone(),
            columns,
        })
    }

    /// Reduce every entry to `ring`, first checking it still carries the
    /// target modulus worth of guaranteed digits.
    fn narrowed_to(&self, ring: Ring) -> Result<TruncOperator> {
        let n = ring.precision().expect("narrowing targets a p-adic ring") as i64;
        for col in &self.columns {
            for (_, c) in col.iter() {
                if c.guaranteed_precision().is_some_and(|g| g < n) {
                    return Err(Error::PrecisionExhausted(format!(
                        "a result entry retains fewer than {n} guaranteed digits"
                    )));
                }
            }
        }
        self.reinterpret_in(ring)
    }
}

/// Right translation `rho_x f = f(F(y, x))`: substitute the point into the
/// second variable block of every law component.
pub fn right_translation(law: &FormalGroupLaw, x: &GroupPoint) -> Result<TruncOperator> {
    law.ring().check_same(&x.ring())?;
    let d = law.dimension();
    let args = law
        .components()
        .iter()
        .map(|f| f.eval_block(d, x.coordinates()))
        .collect::<Result<Vec<_>>>()?;
    TruncOperator::from_substitution(law.ring(), &args)
}

/// Left translation `lambda_x f = f(F(x^{-1}, y))`.
pub fn left_translation(law: &FormalGroupLaw, x: &GroupPoint) -> Result<TruncOperator> {
    law.ring().check_same(&x.ring())?;
    let inv = law.inverse(x)?;
    let args = law
        .components()
        .iter()
        .map(|f| f.eval_block(0, inv.coordinates()))
        .collect::<Result<Vec<_>>>()?;
    TruncOperator::from_substitution(law.ring(), &args)
}

/// The left-invariant derivation with value `a` at the identity:
/// `psi(a) = sum_k W_k d/dy_k` where `W_k(y) = sum_i (dF_k/dx_i)(y, 0) a_i`.
pub fn invariant_derivation(law: &FormalGroupLaw, a: &[Coefficient]) -> Result<TruncOperator> {
    let d = law.dimension();
    let ring = law.ring();
    if a.len() != d {
        return Err(Error::shape(format!("expected {d} coordinates")));
    }
    for c in a {
        ring.check_same(&c.ring())?;
    }
    let zeros = vec![Coefficient::zero(ring); d];
    let mut fields = vec![TruncSeries::zero(ring, d, law.degree_bound()); d];
    for (k, field) in fields.iter_mut().enumerate() {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let j_ki = law.components()[k].partial(d + i)?.eval_block(d, &zeros)?;
            *field = field.add(&j_ki.scale(ai)?)?;
        }
    }
    TruncOperator::derivation_from_fields(ring, &fields)
}

/// Identity-value of a derivation: the constant terms of the images of the
/// coordinate functions.  Left inverse of [`invariant_derivation`].
pub fn phi(w: &TruncOperator) -> Result<Vec<Coefficient>> {
    (0..w.nvars())
        .map(|i| {
            let m = Monomial::variable(w.nvars(), i);
            Ok(w.image_of(&m)?.constant_term())
        })
        .collect()
}

/// Smallest degree bound guard for the iteration caps below.
fn series_cap(degree_bound: u32, precision: Option<u32>) -> i64 {
    8 * (degree_bound as i64 + precision.unwrap_or(0) as i64 + 16)
}

/// True when every tail term `u^j / j` with `j >= next` is divisible by
/// `p^target`: `j*g - v_p(j) >= j*g - ilog_p(j)`, and the bound is
/// nondecreasing in `j` once `g >= 1`.
fn log_tail_closed(next: i64, gain: i64, p: u64, target: i64) -> bool {
    next * gain - (next as u64).ilog(p) as i64 >= target
}

/// True when every tail term `w^j / j!` with `j >= next` is divisible by
/// `p^target`: `v_p(j!) <= (j-1)/(p-1)`, and the bound is nondecreasing in
/// `j` once `g*(p-1) >= 2`.
fn exp_tail_closed(next: i64, gain: i64, p: u64, target: i64) -> bool {
    let q = p as i64 - 1;
    next * gain * q - (next - 1) >= target * q
}

/// Operator logarithm `log T = sum (-1)^{i+1} (T-1)^i / i`.
///
/// Over `Q` the series must terminate: `T - 1` has to be nilpotent on the
/// jet space (true for every translation of a polynomial nilpotent law —
/// each application of `T - 1` trades at least one unit of coordinate
/// weight for a constant).  The result is then the exact logarithm.  A
/// non-nilpotent rational operator is rejected with `NoTermination`; the
/// degree-`D` jet of a divergent logarithm lives at the group level, see
/// [`group_log`].
///
/// Over a p-adic ring at precision `N` the entries of `T - 1` must have
/// valuation `>= 1`.  The sum runs at an internally widened precision
/// (covering every division the retained terms perform, so no needed digit
/// is pulled in from above the working modulus), each summand is certified
/// by `val((T-1)^i) >= i * val(T-1)`, the tail beyond the last retained
/// term is provably divisible by `p^N`, and the result is reduced back to
/// precision `N` only after checking every entry still carries `N`
/// guaranteed digits.  The reduction is sound because `log` is
/// 1-Lipschitz on its domain.
pub fn operator_log(t: &TruncOperator) -> Result<TruncOperator> {
    let ring = t.ring();
    let id = TruncOperator::identity(ring, t.nvars(), t.degree_bound());
    let u = t.sub(&id)?;
    match ring.prime() {
        None => {
            let mut out = TruncOperator::zero(ring, t.nvars(), t.degree_bound());
            let mut power = id;
            let cap = series_cap(t.degree_bound(), None);
            for i in 1..=cap {
                power = power.compose(&u)?;
                if power.is_zero() {
                    return Ok(out);
                }
                let sign = if i % 2 == 1 { 1 } else { -1 };
                let q = BigRational::new(BigInt::from(sign), BigInt::from(i));
                out = out.add(&power.scale_rational(&q)?)?;
            }
            Err(Error::NoTermination(
                "T - 1 is not nilpotent on the jet space; the rational logarithm does not terminate"
                    .into(),
            ))
        }
        Some(p) => {
            let n = ring.precision().expect("p-adic ring has a precision") as i64;
            if t.min_guaranteed().is_some_and(|g| g < n) {
                return Err(Error::PrecisionExhausted(
                    "input operator carries fewer guaranteed digits than its ring declares"
                        .into(),
                ));
            }
            let gain = match u.min_valuation()? {
                None => return Ok(TruncOperator::zero(ring, t.nvars(), t.degree_bound())),
                Some(g) => g,
            };
            if gain < 1 {
                return Err(Error::input(
                    "operator logarithm requires T - 1 with entries of valuation at least 1",
                ));
            }
            // First index whose tail is entirely divisible by p^n, and the
            // deepest division the retained terms perform.
            let cap = series_cap(t.degree_bound(), ring.precision());
            let mut stop = 1i64;
            while !log_tail_closed(stop, gain, p, n) {
                stop += 1;
                if stop > cap {
                    return Err(Error::NoTermination(
                        "operator logarithm did not converge at this precision".into(),
                    ));
                }
            }
            let dip = (stop.max(1) as u64).ilog(p) as i64 + 1;
            let wide = ring.with_precision((n + dip + 2) as u32);
            let u = u.reinterpret_in(wide)?;
            let mut out = TruncOperator::zero(wide, t.nvars(), t.degree_bound());
            let mut power = TruncOperator::identity(wide, t.nvars(), t.degree_bound());
            for i in 1..stop {
                power = power.compose(&u)?;
                if power.is_zero() {
                    // Remaining terms are divisible by p^(wide - dip) >= p^n.
                    break;
                }
                match power.min_valuation()? {
                    None => break,
                    Some(v) if v < i * gain => {
                        return Err(Error::PrecisionExhausted(format!(
                            "power {i} of T - 1 lost its valuation certificate ({v} < {})",
                            i * gain
                        )));
                    }
                    Some(_) => {}
                }
                let sign = if i % 2 == 1 { 1 } else { -1 };
                let q = BigRational::new(BigInt::from(sign), BigInt::from(i));
                out = out.add(&power.scale_rational(&q)?)?;
            }
            out.narrowed_to(ring)
        }
    }
}

/// Operator exponential `exp W = sum W^i / i!`.
///
/// Over `Q` the series must terminate (`W` nilpotent on the jet space),
/// and the result is then the exact exponential; otherwise
/// `NoTermination`, with the divergent jet exponential available at the
/// group level through [`group_exp`].
///
/// Over a p-adic ring the entries of `W` must have valuation `g` with
/// `g*(p-1) >= 2` (valuation 1 suffices for odd `p`, valuation 2 for
/// `p = 2`), which makes the factorial-adjusted tail bound increase.  The
/// widening, certificates, tail cutoff and final reduction mirror
/// [`operator_log`]; `exp` is likewise 1-Lipschitz on this domain.
pub fn operator_exp(w: &TruncOperator) -> Result<TruncOperator> {
    let ring = w.ring();
    let id = TruncOperator::identity(ring, w.nvars(), w.degree_bound());
    match ring.prime() {
        None => {
            let mut out = id.clone();
            let mut power = id;
            let mut factorial = BigInt::one();
            let cap = series_cap(w.degree_bound(), None);
            for i in 1..=cap {
                power = power.compose(w)?;
                if power.is_zero() {
                    return Ok(out);
                }
                factorial *= i;
                let q = BigRational::new(BigInt::one(), factorial.clone());
                out = out.add(&power.scale_rational(&q)?)?;
            }
            Err(Error::NoTermination(
                "W is not nilpotent on the jet space; the rational exponential does not terminate"
                    .into(),
            ))
        }
        Some(p) => {
            let n = ring.precision().expect("p-adic ring has a precision") as i64;
            if w.min_guaranteed().is_some_and(|g| g < n) {
                return Err(Error::PrecisionExhausted(
                    "input operator carries fewer guaranteed digits than its ring declares"
                        .into(),
                ));
            }
            let gain = match w.min_valuation()? {
                None => return Ok(id),
                Some(g) => g,
            };
            if gain < 1 || gain * (p as i64 - 1) < 2 {
                return Err(Error::input(format!(
                    "operator exponential at p = {p} requires entries of valuation at least {}",
                    if p == 2 { 2 } else { 1 }
                )));
            }
            let cap = series_cap(w.degree_bound(), ring.precision());
            let mut stop = 1i64;
            while !exp_tail_closed(stop, gain, p, n) {
                stop += 1;
                if stop > cap {
                    return Err(Error::NoTermination(
                        "operator exponential did not converge at this precision".into(),
                    ));
                }
            }
            // Legendre: v_p((stop-1)!) <= (stop-2)/(p-1).
            let dip = (stop - 2).max(0) / (p as i64 - 1) + 1;
            let wide = ring.with_precision((n + dip + 2) as u32);
            let w = w.reinterpret_in(wide)?;
            let mut out = TruncOperator::identity(wide, w.nvars(), w.degree_bound());
            let mut power = out.clone();
            let mut factorial = BigInt::one();
            for i in 1..stop {
                power = power.compose(&w)?;
                if power.is_zero() {
                    break;
                }
                match power.min_valuation()? {
                    None => break,
                    Some(v) if v < i * gain => {
                        return Err(Error::PrecisionExhausted(format!(
                            "power {i} of W lost its valuation certificate ({v} < {})",
                            i * gain
                        )));
                    }
                    Some(_) => {}
                }
                factorial *= i;
                let q = BigRational::new(BigInt::one(), factorial.clone());
                out = out.add(&power.scale_rational(&q)?)?;
            }
            out.narrowed_to(ring)
        }
    }
}

/// Group-to-Lie logarithm: `log x = phi(log rho_x)`.
///
/// Over a p-adic ring this is `phi` of [`operator_log`], and every
/// returned coordinate is guaranteed modulo `p^N`.  Over `Q` only the
/// identity-values of the log series are summed, to `D` terms: for
/// nilpotent laws of class `<= D` the contributions die out and the value
/// is exact; otherwise it is the degree-`D` jet of the logarithm (e.g.
/// the truncation of `log(1+a)` for the multiplicative law).
pub fn group_log(law: &FormalGroupLaw, x: &GroupPoint) -> Result<Vec<Coefficient>> {
    let ring = law.ring();
    let rho = right_translation(law, x)?;
    if ring.prime().is_some() {
        return phi(&operator_log(&rho)?);
    }
    let d = law.dimension();
    let db = law.degree_bound();
    let mut vals = vec![Coefficient::zero(ring); d];
    let mut cols: Vec<TruncSeries> = (0..d)
        .map(|i| TruncSeries::variable(ring, d, db, i))
        .collect();
    for i in 1..=db.max(1) as i64 {
        // Advance each column from (rho - 1)^(i-1) x_k to (rho - 1)^i x_k.
        let mut all_zero = true;
        for col in cols.iter_mut() {
            *col = rho.apply(col)?.sub(col)?;
            all_zero = all_zero && col.is_zero();
        }
        if all_zero {
            break;
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let q = BigRational::new(BigInt::from(sign), BigInt::from(i));
        for (v, col) in vals.iter_mut().zip(&cols) {
            *v = v.add(&col.constant_term().scale_rational(&q)?)?;
        }
    }
    Ok(vals)
}

/// Lie-to-group exponential: the point whose coordinates are the constant
/// terms of `exp(psi(a))` applied to the coordinate functions; the
/// inverse of [`group_log`], with the same jet semantics over `Q`.
pub fn group_exp(law: &FormalGroupLaw, a: &[Coefficient]) -> Result<GroupPoint> {
    let ring = law.ring();
    if let Some(p) = ring.prime() {
        let need: i64 = if p == 2 { 2 } else { 1 };
        for c in a {
            if !c.valuation()?.is_at_least(need) {
                return Err(Error::input(format!(
                    "exponential coordinates must have valuation at least {need} at p = {p}"
                )));
            }
        }
        let e = operator_exp(&invariant_derivation(law, a)?)?;
        let d = law.dimension();
        let coords = (0..d)
            .map(|i| {
                let m = Monomial::variable(d, i);
                Ok(e.image_of(&m)?.constant_term())
            })
            .collect::<Result<Vec<_>>>()?;
        return law.point(coords);
    }
    let w = invariant_derivation(law, a)?;
    let d = law.dimension();
    let db = law.degree_bound();
    let mut coords = vec![Coefficient::zero(ring); d];
    let mut cols: Vec<TruncSeries> = (0..d)
        .map(|i| TruncSeries::variable(ring, d, db, i))
        .collect();
    let mut factorial = BigInt::one();
    for i in 1..=db.max(1) as i64 {
        let mut all_zero = true;
        for col in cols.iter_mut() {
            *col = w.apply(col)?;
            all_zero = all_zero && col.is_zero();
        }
        if all_zero {
            break;
        }
        factorial *= i;
        let q = BigRational::new(BigInt::one(), factorial.clone());
        for (v, col) in coords.iter_mut().zip(&cols) {
            *v = v.add(&col.constant_term().scale_rational(&q)?)?;
        }
    }
    law.point(coords)
}

/// Conjugation of an operator by right translation:
/// `Ad_x(w) = rho_x . w . rho_{x^{-1}}`.  For `w = psi(b)` this is
/// `psi(e^{ad a} b)` with `a = log x`.
pub fn adjoint_action(
    law: &FormalGroupLaw,
    x: &GroupPoint,
    w: &TruncOperator,
) -> Result<TruncOperator> {
    let rho = right_translation(law, x)?;
    let rho_inv = right_translation(law, &law.inverse(x)?)?;
    rho.compose(&w.compose(&rho_inv)?)
}

/// The substitution operator `f -> f(x^{-1} y x)`, i.e.
/// `lambda_x . rho_x`.
pub fn conjugation_operator(law: &FormalGroupLaw, x: &GroupPoint) -> Result<TruncOperator> {
    left_translation(law, x)?.compose(&right_translation(law, x)?)
}

/// Whether `t` restricts to a unipotent operator on the finite-dimensional
/// block `I / I^k` (monomials of degree `1..k`): `(t - 1)` must be
/// nilpotent there.  Errors if `t` does not preserve the augmentation
/// ideal.
pub fn is_unipotent(t: &TruncOperator, k: u32) -> Result<bool> {
    if k < 2 || k > t.degree_bound() + 1 {
        return Err(Error::input(
            "the unipotence window must satisfy 2 <= k <= degree bound + 1",
        ));
    }
    let block: Vec<usize> = (0..t.dimension())
        .filter(|&j| {
            let deg = t.basis().monomial(j).degree();
            deg >= 1 && deg < k
        })
        .collect();
    let m = block.len();
    let ring = t.ring();
    // Matrix of t - 1 on the block, entries indexed (row, col).
    let mut n = vec![vec![Coefficient::zero(ring); m]; m];
    for (cj, &j) in block.iter().enumerate() {
        let col = t.column(j);
        if !col.constant_term().is_zero() {
            return Err(Error::input(
                "operator does not preserve the augmentation ideal",
            ));
        }
        for (ri, &i) in block.iter().enumerate() {
            let mut c = col.coefficient(t.basis().monomial(i));
            if i == j {
                c = c.sub(&Coefficient::one(ring))?;
            }
            n[ri][cj] = c;
        }
    }
    let mut power = n.clone();
    for _ in 1..m {
        if matrix_is_zero(&power) {
            return Ok(true);
        }
        power = matrix_mul(&power, &n, ring)?;
    }
    Ok(matrix_is_zero(&power))
}

fn matrix_is_zero(a: &[Vec<Coefficient>]) -> bool {
    a.iter().all(|row| row.iter().all(Coefficient::is_zero))
}

fn matrix_mul(
    a: &[Vec<Coefficient>],
    b: &[Vec<Coefficient>],
    ring: Ring,
) -> Result<Vec<Vec<Coefficient>>> {
    let m = a.len();
    let mut out = vec![vec![Coefficient::zero(ring); m]; m];
    for i in 0..m {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if bk[j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&bk[j])?)?;
            }
        }
    }
    Ok(out)
}

/// Leibniz defect `w(fg) - w(f)g - f w(g)`; identically zero exactly when
/// `w` acts as a derivation on the jet space.
pub fn leibniz_defect(
    w: &TruncOperator,
    f: &TruncSeries,
    g: &TruncSeries,
) -> Result<TruncSeries> {
    let lhs = w.apply(&f.mul(g)?)?;
    let rhs = w.apply(f)?.mul(g)?.add(&f.mul(&w.apply(g)?)?)?;
    lhs.sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::{ad_exp, bch_eval, vectors_equal};
    use crate::law::builtin_law;
    use num::Zero;

    fn q() -> Ring {
        Ring::rational()
    }

    fn qc(n: i64, d: i64) -> Coefficient {
        Coefficient::from_rational(q(), BigRational::new(BigInt::from(n), BigInt::from(d)))
            .expect("rational coefficient")
    }

    fn coeffs(ring: Ring, values: &[i64]) -> Vec<Coefficient> {
        values
            .iter()
            .map(|&v| Coefficient::from_integer(ring, v))
            .collect()
    }

    #[test]
    fn substitution_with_variables_is_identity() {
        let ring = q();
        let args: Vec<TruncSeries> = (0..3).map(|i| TruncSeries::variable(ring, 3, 4, i)).collect();
        let op = TruncOperator::from_substitution(ring, &args).unwrap();
        assert!(op.is_identity());
        let f = TruncSeries::variable(ring, 3, 4, 0)
            .mul(&TruncSeries::variable(ring, 3, 4, 1))
            .unwrap();
        assert_eq!(op.apply(&f).unwrap(), f);
    }

    #[test]
    fn translation_by_identity_point_is_identity() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let e = law.identity();
        assert!(right_translation(&law, &e).unwrap().is_identity());
        assert!(left_translation(&law, &e).unwrap().is_identity());
    }

    #[test]
    fn right_translations_compose_like_the_group() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[1, -2, 3]).unwrap();
        let y = law.point_from_integers(&[2, 5, -1]).unwrap();
        let lhs = right_translation(&law, &x)
            .unwrap()
            .compose(&right_translation(&law, &y).unwrap())
            .unwrap();
        let rhs = right_translation(&law, &law.multiply(&x, &y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_translations_compose_and_commute_with_right() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[2, 1, -1]).unwrap();
        let y = law.point_from_integers(&[-1, 3, 2]).unwrap();
        let lx = left_translation(&law, &x).unwrap();
        let ly = left_translation(&law, &y).unwrap();
        let lxy = left_translation(&law, &law.multiply(&x, &y).unwrap()).unwrap();
        assert_eq!(lx.compose(&ly).unwrap(), lxy);
        let ry = right_translation(&law, &y).unwrap();
        assert_eq!(
            lx.compose(&ry).unwrap(),
            ry.compose(&lx).unwrap(),
            "left and right translations commute"
        );
    }

    #[test]
    fn multiplicative_translation_column() {
        let law = builtin_law("multiplicative", q(), 4).unwrap();
        let x = law.point_from_integers(&[3]).unwrap();
        let rho = right_translation(&law, &x).unwrap();
        // rho_3(y) = y + 3 + 3y
        let mut expected = TruncSeries::zero(q(), 1, 4);
        expected
            .set_coefficient(Monomial(vec![0]), qc(3, 1))
            .unwrap();
        expected
            .set_coefficient(Monomial(vec![1]), qc(4, 1))
            .unwrap();
        assert_eq!(*rho.image_of(&Monomial(vec![1])).unwrap(), expected);
    }

    #[test]
    fn invariant_derivation_heisenberg_fields() {
        // psi(e2) = d/dy2 + y1 d/dy3 for the Heisenberg law.
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[0, 1, 0])).unwrap();
        let one = TruncSeries::one(q(), 3, 4);
        let y1 = TruncSeries::variable(q(), 3, 4, 0);
        let zero = TruncSeries::zero(q(), 3, 4);
        assert_eq!(*w.image_of(&Monomial(vec![1, 0, 0])).unwrap(), zero);
        assert_eq!(*w.image_of(&Monomial(vec![0, 1, 0])).unwrap(), one);
        assert_eq!(*w.image_of(&Monomial(vec![0, 0, 1])).unwrap(), y1);
    }

    #[test]
    fn multiplicative_derivation_satisfies_leibniz() {
        let law = builtin_law("multiplicative", q(), 5).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[1])).unwrap();
        // psi(1) = (1 + y) d/dy: check the image of y^2 and Leibniz overall.
        let mut expected = TruncSeries::zero(q(), 1, 5);
        expected
            .set_coefficient(Monomial(vec![1]), qc(2, 1))
            .unwrap();
        expected
            .set_coefficient(Monomial(vec![2]), qc(2, 1))
            .unwrap();
        assert_eq!(*w.image_of(&Monomial(vec![2])).unwrap(), expected);
        // Leibniz holds on every pair whose product still fits the jet
        // space; beyond the bound, truncating fg discards terms that the
        // degree-lowering field would fold back under the bound.
        for i in 0..=5u32 {
            for j in 0..=5u32.saturating_sub(i) {
                let f = TruncSeries::from_terms(
                    q(),
                    1,
                    5,
                    vec![(Monomial(vec![i]), Coefficient::one(q()))],
                )
                .unwrap();
                let g = TruncSeries::from_terms(
                    q(),
                    1,
                    5,
                    vec![(Monomial(vec![j]), Coefficient::one(q()))],
                )
                .unwrap();
                assert!(leibniz_defect(&w, &f, &g).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn phi_inverts_invariant_derivation() {
        for name in ["heisenberg", "unitriangular:4"] {
            let law = builtin_law(name, q(), 3).unwrap();
            let d = law.dimension();
            let a: Vec<Coefficient> = (0..d)
                .map(|i| Coefficient::from_integer(q(), (i as i64) * 3 - 4))
                .collect();
            let w = invariant_derivation(&law, &a).unwrap();
            let back = phi(&w).unwrap();
            assert!(vectors_equal(&a, &back));
        }
    }

    #[test]
    fn pairing_of_derivations_with_coordinates_is_dual() {
        let law = builtin_law("unitriangular:4", q(), 3).unwrap();
        let d = law.dimension();
        for i in 0..d {
            let mut a = coeffs(q(), &vec![0; d]);
            a[i] = Coefficient::one(q());
            let got = phi(&invariant_derivation(&law, &a).unwrap()).unwrap();
            for (j, c) in got.iter().enumerate() {
                assert_eq!(c.is_zero(), i != j, "phi(psi(e_{i}))[{j}]");
            }
        }
    }

    #[test]
    fn derivation_brackets_match_structure_constants() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let sc = law.lie_constants().unwrap();
        let d = law.dimension();
        let psis: Vec<TruncOperator> = (0..d)
            .map(|i| {
                let mut a = coeffs(q(), &vec![0; d]);
                a[i] = Coefficient::one(q());
                invariant_derivation(&law, &a).unwrap()
            })
            .collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = psis[i].bracket(&psis[j]).unwrap();
                let c = sc.bracket(
                    &(0..d)
                        .map(|k| {
                            if k == i {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect::<Vec<_>>(),
                    &(0..d)
                        .map(|k| {
                            if k == j {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect::<Vec<_>>(),
                );
                let cv = c
                    .into_iter()
                    .map(|v| Coefficient::from_rational(q(), v).unwrap())
                    .collect::<Vec<_>>();
                let rhs = invariant_derivation(&law, &cv).unwrap();
                assert_eq!(lhs, rhs, "[psi(e{i}), psi(e{j})]");
            }
        }
    }

    #[test]
    fn invariant_derivations_commute_with_left_translation() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[2, -1, 4]).unwrap();
        let lx = left_translation(&law, &x).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[3, 1, -2])).unwrap();
        assert_eq!(w.compose(&lx).unwrap(), lx.compose(&w).unwrap());
    }

    #[test]
    fn log_of_identity_is_zero_and_exp_of_zero_is_identity() {
        let ring = q();
        let id = TruncOperator::identity(ring, 2, 3);
        assert!(operator_log(&id).unwrap().is_zero());
        let zero = TruncOperator::zero(ring, 2, 3);
        assert!(operator_exp(&zero).unwrap().is_identity());
    }

    #[test]
    fn additive_operator_log_is_the_derivation_at_the_point() {
        let law = builtin_law("additive:2", q(), 4).unwrap();
        let x = law.point_from_integers(&[3, -5]).unwrap();
        let l = operator_log(&right_translation(&law, &x).unwrap()).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[3, -5])).unwrap();
        assert_eq!(l, w);
    }

    #[test]
    fn non_nilpotent_rational_operator_log_is_rejected() {
        let law = builtin_law("multiplicative", q(), 4).unwrap();
        let x = law.point_from_integers(&[3]).unwrap();
        let rho = right_translation(&law, &x).unwrap();
        assert!(matches!(operator_log(&rho), Err(Error::NoTermination(_))));
    }

    #[test]
    fn heisenberg_operator_log_is_exact() {
        let law = builtin_law("heisenberg", q(), 5).unwrap();
        let x = law.point_from_integers(&[3, 0, 0]).unwrap();
        let l = operator_log(&right_translation(&law, &x).unwrap()).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[3, 0, 0])).unwrap();
        assert_eq!(l, w);
    }

    #[test]
    fn exp_log_roundtrip_is_exact_for_nilpotent_laws() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        for coords in [[1, 2, 3], [-2, 0, 5], [7, -3, 1]] {
            let x = law.point_from_integers(&coords).unwrap();
            let rho = right_translation(&law, &x).unwrap();
            let back = operator_exp(&operator_log(&rho).unwrap()).unwrap();
            assert_eq!(back, rho);
        }
    }

    #[test]
    fn exponential_of_derivation_is_an_algebra_map() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[2, -1, 3])).unwrap();
        let e = operator_exp(&w).unwrap();
        let f = TruncSeries::variable(q(), 3, 4, 0);
        let g = TruncSeries::variable(q(), 3, 4, 1)
            .mul(&TruncSeries::variable(q(), 3, 4, 2))
            .unwrap()
            .add(&TruncSeries::variable(q(), 3, 4, 0))
            .unwrap();
        let lhs = e.apply(&f.mul(&g).unwrap()).unwrap();
        let rhs = e.apply(&f).unwrap().mul(&e.apply(&g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_log_of_identity_is_zero() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let a = group_log(&law, &law.identity()).unwrap();
        assert!(a.iter().all(Coefficient::is_zero));
    }

    #[test]
    fn multiplicative_group_log_is_the_jet_of_log() {
        let law = builtin_law("multiplicative", q(), 6).unwrap();
        let x = law.point_from_integers(&[3]).unwrap();
        let a = group_log(&law, &x).unwrap();
        let mut expected = BigRational::zero();
        for i in 1..=6i64 {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            expected += BigRational::new(BigInt::from(sign * 3i64.pow(i as u32)), BigInt::from(i));
        }
        assert_eq!(a[0].to_rational_lift().unwrap(), expected);
    }

    #[test]
    fn multiplicative_group_exp_is_the_jet_of_exp() {
        let law = builtin_law("multiplicative", q(), 5).unwrap();
        let x = group_exp(&law, &[qc(2, 1)]).unwrap();
        let mut expected = BigRational::zero();
        let mut factorial = BigInt::one();
        for i in 1..=5i64 {
            factorial *= i;
            expected += BigRational::new(BigInt::from(2i64.pow(i as u32)), factorial.clone());
        }
        assert_eq!(x.coordinates()[0].to_rational_lift().unwrap(), expected);
    }

    #[test]
    fn group_log_turns_products_into_bch() {
        let law = builtin_law("heisenberg", q(), 5).unwrap();
        let sc = law.lie_constants().unwrap();
        let x = law.point_from_integers(&[1, 2, 3]).unwrap();
        let y = law.point_from_integers(&[-2, 1, 5]).unwrap();
        let lhs = group_log(&law, &law.multiply(&x, &y).unwrap()).unwrap();
        let rhs = bch_eval(
            &sc,
            q(),
            &group_log(&law, &x).unwrap(),
            &group_log(&law, &y).unwrap(),
            5,
        )
        .unwrap();
        assert!(vectors_equal(&lhs, &rhs));
    }

    #[test]
    fn group_exp_inverts_group_log() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[4, -1, 2]).unwrap();
        let back = group_exp(&law, &group_log(&law, &x).unwrap()).unwrap();
        assert!(vectors_equal(x.coordinates(), back.coordinates()));
    }

    #[test]
    fn padic_group_log_matches_bch_and_keeps_precision() {
        let ring = Ring::padic(3, 6);
        let law = builtin_law("heisenberg", ring, 5).unwrap();
        let sc = law.lie_constants().unwrap();
        let x = law.point_from_integers(&[3, 6, -3]).unwrap();
        let y = law.point_from_integers(&[9, -3, 12]).unwrap();
        let lhs = group_log(&law, &law.multiply(&x, &y).unwrap()).unwrap();
        let a = group_log(&law, &x).unwrap();
        let b = group_log(&law, &y).unwrap();
        let rhs = bch_eval(&sc, ring, &a, &b, 5).unwrap();
        assert!(vectors_equal(&lhs, &rhs));
        for c in lhs.iter().chain(rhs.iter()) {
            assert!(
                c.guaranteed_precision().unwrap() >= 6,
                "answers are guaranteed modulo 3^6"
            );
        }
    }

    #[test]
    fn padic_multiplicative_roundtrip_holds_mod_precision() {
        let ring = Ring::padic(3, 8);
        let law = builtin_law("multiplicative", ring, 8).unwrap();
        let x = law
            .point(vec![Coefficient::from_integer(ring, 6)])
            .unwrap();
        let rho = right_translation(&law, &x).unwrap();
        let back = operator_exp(&operator_log(&rho).unwrap()).unwrap();
        assert_eq!(back, rho);
        for col in back.columns() {
            for (_, c) in col.iter() {
                assert!(c.guaranteed_precision().unwrap() >= 8);
            }
        }
        let a = group_log(&law, &x).unwrap();
        let y = group_exp(&law, &a).unwrap();
        assert!(vectors_equal(x.coordinates(), y.coordinates()));
    }

    #[test]
    fn padic_exponential_needs_the_convergence_lattice() {
        let ring = Ring::padic(2, 6);
        let law = builtin_law("multiplicative", ring, 6).unwrap();
        // Valuation 1 is not enough at p = 2; the lattice starts at 4.
        let err = group_exp(&law, &[Coefficient::from_integer(ring, 2)]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let x = group_exp(&law, &[Coefficient::from_integer(ring, 4)]).unwrap();
        let back = group_log(&law, &x).unwrap();
        assert!(back[0] == Coefficient::from_integer(ring, 4));
    }

    #[test]
    fn adjoint_action_fixes_derivations_at_the_identity_point() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[1, 2, 3])).unwrap();
        let tau = adjoint_action(&law, &law.identity(), &w).unwrap();
        assert_eq!(tau, w);
    }

    #[test]
    fn adjoint_action_on_heisenberg_shears_by_the_bracket() {
        // Ad_x psi(e2) = psi(e2) + 3 psi(e3) for x = (3, 0, 0).
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[3, 0, 0]).unwrap();
        let w = invariant_derivation(&law, &coeffs(q(), &[0, 1, 0])).unwrap();
        let tau = adjoint_action(&law, &x, &w).unwrap();
        let expected = invariant_derivation(&law, &coeffs(q(), &[0, 1, 3])).unwrap();
        assert_eq!(tau, expected);
        // The center is fixed.
        let z = invariant_derivation(&law, &coeffs(q(), &[0, 0, 1])).unwrap();
        assert_eq!(adjoint_action(&law, &x, &z).unwrap(), z);
    }

    #[test]
    fn adjoint_action_matches_the_adjoint_exponential() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let sc = law.lie_constants().unwrap();
        let x = law.point_from_integers(&[2, -3, 1]).unwrap();
        let a = group_log(&law, &x).unwrap();
        let d = law.dimension();
        for i in 0..d {
            let mut b = coeffs(q(), &vec![0; d]);
            b[i] = Coefficient::one(q());
            let lhs = adjoint_action(&law, &x, &invariant_derivation(&law, &b).unwrap()).unwrap();
            let image = ad_exp(&sc, q(), &a, &b).unwrap();
            let rhs = invariant_derivation(&law, &image).unwrap();
            assert_eq!(lhs, rhs, "Ad_x psi(e{i})");
        }
    }

    #[test]
    fn conjugation_is_unipotent_on_nilpotent_laws() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[1, 2, -1]).unwrap();
        let t = conjugation_operator(&law, &x).unwrap();
        assert!(is_unipotent(&t, 2).unwrap());
        assert!(is_unipotent(&t, 4).unwrap());
        let id = TruncOperator::identity(q(), 3, 4);
        assert!(is_unipotent(&id, 3).unwrap());
    }

    #[test]
    fn abelian_conjugation_is_the_identity() {
        let law = builtin_law("additive:2", q(), 4).unwrap();
        let x = law.point_from_integers(&[5, -7]).unwrap();
        let t = conjugation_operator(&law, &x).unwrap();
        assert!(t.is_identity());
    }

    #[test]
    fn non_augmentation_preserving_operator_is_rejected() {
        let law = builtin_law("multiplicative", q(), 3).unwrap();
        let x = law.point_from_integers(&[2]).unwrap();
        let rho = right_translation(&law, &x).unwrap();
        assert!(matches!(
            is_unipotent(&rho, 3),
            Err(Error::InvalidInput(_))
        ));
    }
}
