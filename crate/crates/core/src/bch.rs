//! The Baker–Campbell–Hausdorff series `H(x1, x2) = log(e^{x1} e^{x2})`:
//! computation in the Lyndon basis, valuation audits, and evaluation inside
//! concrete Lie algebras.
//!
//! The table is computed the simple exact way: multiply `exp(x1) exp(x2)`
//! in the truncated free associative algebra over Q, take the truncated
//! `log`, and project onto the Lyndon basis.  The projection doubles as a
//! proof that each homogeneous component is a Lie element — a nonzero
//! remainder aborts the run.
//!
//! Two facts drive the numeric uses:
//!
//! * every coefficient `λ` of a degree-`n` term satisfies
//!   `v_p(λ) ≥ -(n-1)/(p-1)` ([`audit_valuations`] checks this in integer
//!   arithmetic, no rounding);
//! * consequently, when `a, b` have coordinate valuations at least
//!   `v_p(s)` for the convergence scale `s` (`p` odd: `s = p`; `p = 2`:
//!   `s = 4`), the degree-`n` term of `H(a, b)` has valuation at least
//!   `n·v_p(s) - (n-1)/(p-1)`, which grows without bound.  [`bch_eval`]
//!   asserts that certificate term by term and may stop as soon as terms
//!   vanish at the working precision.
//!
//! Over the rationals, evaluation is exact and requires a nilpotent target
//! algebra (class `c` truncates the series at degree `c`); anything else is
//! rejected rather than silently truncated.

use std::collections::BTreeMap;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{convergence_scale, rational_valuation, Coefficient, Ring, Valuation};
use crate::error::{Error, Result};
use crate::freelie::{lie_bracket, lyndon_words, project_to_lie, AssocSeries, LieSeries, LyndonWord};
use crate::liealg::{StructureConstants, Subspace};

/// Primes audited by default: the `p = 2` special case plus three odd primes.
pub const AUDIT_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// `v·(p-1) ≥ -(n-1)` — the valuation bound for a degree-`n` coefficient,
/// checked in integers.
pub fn valuation_bound_holds(valuation: Valuation, degree: u32, p: u64) -> bool {
    match valuation {
        Valuation::Infinite => true,
        Valuation::Finite(v) => v * (p as i64 - 1) >= -(degree as i64 - 1),
    }
}

/// One coefficient violating the valuation bound for some prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationViolation {
    pub lyndon_word: String,
    pub degree: u32,
    pub valuation: i64,
}

/// Audit of one prime over a whole table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAudit {
    pub prime: u64,
    pub pass: bool,
    pub violations: Vec<ValuationViolation>,
}

/// Audit of several primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationAudit {
    pub pass: bool,
    pub primes: Vec<PrimeAudit>,
}

/// Check `v_p(λ) ≥ -(n-1)/(p-1)` for every term of a rational Lie series.
pub fn audit_valuations(series: &LieSeries, primes: &[u64]) -> Result<ValuationAudit> {
    if series.ring() != Ring::Rational {
        return Err(Error::input("valuation audits run on exact rational tables"));
    }
    let mut prime_audits = Vec::new();
    for &p in primes {
        let mut violations = Vec::new();
        for (w, c) in series.iter() {
            let q = c.to_rational_lift()?;
            let v = rational_valuation(&q, p);
            if !valuation_bound_holds(v, w.len() as u32, p) {
                violations.push(ValuationViolation {
                    lyndon_word: w.to_string(),
                    degree: w.len() as u32,
                    valuation: v.finite().expect("nonzero coefficient"),
                });
            }
        }
        prime_audits.push(PrimeAudit {
            prime: p,
            pass: violations.is_empty(),
            violations,
        });
    }
    Ok(ValuationAudit {
        pass: prime_audits.iter().all(|a| a.pass),
        primes: prime_audits,
    })
}

/// The BCH series through a degree bound, in the Lyndon basis over Q, with
/// the default valuation audit attached.
#[derive(Debug, Clone, PartialEq)]
pub struct BchTable {
    degree_bound: u32,
    series: LieSeries,
    audit: ValuationAudit,
}

/// Compute `log(exp(x1) exp(x2))` through degree `degree` and project onto
/// the Lyndon basis.
pub fn bch_series(degree: u32) -> Result<BchTable> {
    if degree < 1 {
        return Err(Error::input("the BCH table needs a degree bound of at least 1"));
    }
    let ring = Ring::Rational;
    let x1 = AssocSeries::generator(ring, 2, degree, 1);
    let x2 = AssocSeries::generator(ring, 2, degree, 2);
    let product = x1.exp()?.mul(&x2.exp()?)?;
    let series = project_to_lie(&product.log()?)?;
    let audit = audit_valuations(&series, &AUDIT_PRIMES)?;
    Ok(BchTable {
        degree_bound: degree,
        series,
        audit,
    })
}

impl BchTable {
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn series(&self) -> &LieSeries {
        &self.series
    }

    pub fn audit(&self) -> &ValuationAudit {
        &self.audit
    }

    /// Coefficient of a Lyndon word given as a digit string.
    pub fn coefficient(&self, word: &str) -> Result<BigRational> {
        let w = LyndonWord::from_digits(word)?;
        self.series.coefficient(&w).to_rational_lift()
    }

    pub fn to_json(&self) -> BchTableJson {
        let terms = self
            .series
            .iter()
            .map(|(w, c)| {
                let q = c.to_rational_lift().expect("rational table");
                let valuations = AUDIT_PRIMES
                    .iter()
                    .map(|&p| {
                        let v = rational_valuation(&q, p)
                            .finite()
                            .expect("nonzero coefficient");
                        (p.to_string(), v)
                    })
                    .collect();
                BchTermJson {
                    lyndon_word: w.to_string(),
                    degree: w.len() as u32,
                    coefficient: c.to_string(),
                    valuations,
                }
            })
            .collect();
        let valuation_audit = self
            .audit
            .primes
            .iter()
            .map(|a| {
                (
                    a.prime.to_string(),
                    if a.pass { "pass" } else { "fail" }.to_string(),
                )
            })
            .collect();
        BchTableJson {
            degree_bound: self.degree_bound,
            basis: "lyndon".to_string(),
            terms,
            valuation_audit,
        }
    }
}

/// Serialized BCH table; term order is graded-lex on the Lyndon words, so
/// serialization is deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BchTableJson {
    pub degree_bound: u32,
    pub basis: String,
    pub terms: Vec<BchTermJson>,
    pub valuation_audit: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BchTermJson {
    pub lyndon_word: String,
    pub degree: u32,
    pub coefficient: String,
    pub valuations: BTreeMap<String, i64>,
}

fn zero_vector(ring: Ring, d: usize) -> Vec<Coefficient> {
    vec![Coefficient::zero(ring); d]
}

fn add_vectors(a: &[Coefficient], b: &[Coefficient]) -> Result<Vec<Coefficient>> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// Elementwise equality (congruence at shared precision for p-adic rings).
pub fn vectors_equal(a: &[Coefficient], b: &[Coefficient]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

/// Bilinear bracket through structure constants, in an arbitrary ring.
fn bracket_in_ring(
    sc: &StructureConstants,
    ring: Ring,
    x: &[Coefficient],
    y: &[Coefficient],
) -> Result<Vec<Coefficient>> {
    let d = sc.dimension();
    let mut out = zero_vector(ring, d);
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let f = x[i].mul(&y[j])?;
            for (k, o) in out.iter_mut().enumerate() {
                let c = sc.constant(i, j, k);
                if !num::Zero::is_zero(c) {
                    *o = o.add(&f.scale_rational(c)?)?;
                }
            }
        }
    }
    Ok(out)
}

/// Evaluate the bracketing of a Lyndon word at `(a, b)`, memoized on
/// sub-words.
fn eval_word(
    sc: &StructureConstants,
    ring: Ring,
    a: &[Coefficient],
    b: &[Coefficient],
    w: &LyndonWord,
    memo: &mut BTreeMap<Vec<u8>, Vec<Coefficient>>,
) -> Result<Vec<Coefficient>> {
    if let Some(v) = memo.get(w.letters()) {
        return Ok(v.clone());
    }
    let value = match w.standard_factorization() {
        None => match w.letters()[0] {
            1 => a.to_vec(),
            2 => b.to_vec(),
            l => return Err(Error::shape(format!("unexpected generator x{l}"))),
        },
        Some((u, v)) => {
            let eu = eval_word(sc, ring, a, b, &u, memo)?;
            let ev = eval_word(sc, ring, a, b, &v, memo)?;
            bracket_in_ring(sc, ring, &eu, &ev)?
        }
    };
    memo.insert(w.letters().to_vec(), value.clone());
    Ok(value)
}

fn min_valuation(v: &[Coefficient]) -> Result<Valuation> {
    let mut min = Valuation::Infinite;
    for c in v {
        let val = c.valuation()?;
        if val < min {
            min = val;
        }
    }
    Ok(min)
}

/// Evaluate `Σ_{n ≤ degree} H_n(a, b)` in the Lie algebra given by `sc`.
///
/// * Nilpotent algebra of class `c`: the series is truncated at
///   `min(degree, c)` and the result is exact (independent of larger
///   `degree`).
/// * Rational ring with a non-nilpotent algebra: rejected — the series
///   would not terminate.
/// * p-adic rings: inputs must lie in the convergence lattice (all
///   coordinate valuations `≥ v_p(s)`, `s` the convergence scale); each
///   degree-`n` term is certified to have valuation
///   `≥ n·v_p(s) - (n-1)/(p-1)`, and summation stops once terms vanish at
///   the ring precision.  The sum is computed at a widened working
///   precision so the divisions by the table denominators do not eat into
///   the requested precision, then reduced back; every returned coordinate
///   is guaranteed modulo `p^N`.  Sound because the series is 1-Lipschitz
///   on the lattice: perturbing an input by `p^N` moves a degree-`n` term
///   by at least `N + (n-1)·(v_p(s)·(p-1) - 1)/(p-1) ≥ N`.
pub fn bch_eval(
    sc: &StructureConstants,
    ring: Ring,
    a: &[Coefficient],
    b: &[Coefficient],
    degree: u32,
) -> Result<Vec<Coefficient>> {
    let d = sc.dimension();
    if a.len() != d || b.len() != d {
        return Err(Error::shape(format!(
            "points must have {d} coordinates, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    for c in a.iter().chain(b) {
        ring.check_same(&c.ring())?;
    }
    if degree < 1 {
        return Err(Error::input("evaluation needs a degree bound of at least 1"));
    }

    let whole = Subspace::whole(d);
    let class = sc.nilpotency_class(&whole);
    let effective = match class {
        Some(c) => degree.min((c as u32).max(1)),
        None => {
            if ring == Ring::Rational {
                return Err(Error::NoTermination(
                    "the algebra is not nilpotent, so the series does not terminate over the rationals"
                        .into(),
                ));
            }
            degree
        }
    };

    // Convergence precondition and certificate data for p-adic rings.
    let scale_valuation: i64 = match ring.prime() {
        None => 0,
        Some(p) => {
            let s = convergence_scale(p);
            let sv = if p == 2 { 2 } else { 1 };
            for c in a.iter().chain(b) {
                if !c.valuation()?.is_at_least(sv) {
                    return Err(Error::input(format!(
                        "point coordinates must have valuation at least {sv} (the scale {s} lattice)"
                    )));
                }
            }
            sv
        }
    };

    // Widened working precision: a degree-n term is divided by denominators
    // of valuation at most (n-1)/(p-1), which would otherwise fall below
    // the digit cap of the stored coefficients.
    let work_ring = match (ring.precision(), ring.prime()) {
        (Some(n), Some(p)) => {
            let dip = (effective - 1) / (p as u32 - 1) + 2;
            ring.with_precision(n + dip)
        }
        _ => ring,
    };
    let (wa, wb) = if work_ring == ring {
        (a.to_vec(), b.to_vec())
    } else {
        (
            a.iter()
                .map(|c| c.reinterpret_in(work_ring))
                .collect::<Result<Vec<_>>>()?,
            b.iter()
                .map(|c| c.reinterpret_in(work_ring))
                .collect::<Result<Vec<_>>>()?,
        )
    };

    let table = bch_series(effective)?;
    let mut memo = BTreeMap::new();
    let mut result = zero_vector(work_ring, d);
    for n in 1..=effective {
        let mut term = zero_vector(work_ring, d);
        for (w, c) in table.series().iter() {
            if w.len() as u32 != n {
                continue;
            }
            let value = eval_word(sc, work_ring, &wa, &wb, w, &mut memo)?;
            let lambda = c.to_rational_lift()?;
            for (t, v) in term.iter_mut().zip(&value) {
                *t = t.add(&v.scale_rational(&lambda)?)?;
            }
        }
        if let Some(p) = ring.prime() {
            // Certificate: v(term_n)·(p-1) ≥ (n·v_p(s))·(p-1) - (n-1).
            let v = min_valuation(&term)?;
            let bound_num = n as i64 * scale_valuation * (p as i64 - 1) - (n as i64 - 1);
            match v {
                Valuation::Infinite => {}
                Valuation::Finite(v) => {
                    if v * (p as i64 - 1) < bound_num {
                        return Err(Error::PrecisionExhausted(format!(
                            "degree-{n} term valuation {v} fell below the convergence certificate"
                        )));
                    }
                }
            }
            result = add_vectors(&result, &term)?;
            // Terms are guaranteed smaller from here on once they vanish at
            // the requested (unwidened) precision.
            if let Some(target) = ring.precision() {
                if n as i64 * scale_valuation - ((n as i64 - 1) / (p as i64 - 1)) >= target as i64 {
                    break;
                }
            }
        } else {
            result = add_vectors(&result, &term)?;
        }
    }
    if work_ring == ring {
        return Ok(result);
    }
    // Reduce back, insisting every coordinate still carries the requested
    // number of guaranteed digits.
    let target = ring.precision().expect("widened rings are p-adic") as i64;
    result
        .into_iter()
        .map(|c| {
            if let Some(g) = c.guaranteed_precision() {
                if g < target {
                    return Err(Error::PrecisionExhausted(format!(
                        "a BCH coordinate retains only {g} of {target} guaranteed digits"
                    )));
                }
            }
            c.reinterpret_in(ring)
        })
        .collect()
}

/// `e^{ad a}(b) = Σ (ad a)^i (b) / i!` in the algebra given by `sc`.
/// Terminates when a term vanishes exactly (nilpotent algebras, or p-adic
/// rings once precision is exhausted); otherwise errors.
pub fn ad_exp(
    sc: &StructureConstants,
    ring: Ring,
    a: &[Coefficient],
    b: &[Coefficient],
) -> Result<Vec<Coefficient>> {
    let d = sc.dimension();
    if a.len() != d || b.len() != d {
        return Err(Error::shape(format!("vectors must have {d} coordinates")));
    }
    let mut sum = b.to_vec();
    let mut term = b.to_vec();
    let cap = d as i64 + ring.precision().unwrap_or(0) as i64 * 2 + 8;
    for i in 1..=cap {
        term = bracket_in_ring(sc, ring, a, &term)?;
        for t in term.iter_mut() {
            *t = t.div_exact_int(i)?;
        }
        if term.iter().all(Coefficient::is_zero) {
            return Ok(sum);
        }
        sum = add_vectors(&sum, &term)?;
    }
    Err(Error::NoTermination(
        "the adjoint exponential did not terminate; the algebra is not nilpotent".into(),
    ))
}

/// Structure constants of the free-nilpotent Lie algebra on `generators`
/// generators of class `class`, in the Lyndon basis (graded-lex order).
pub fn free_nilpotent_constants(generators: usize, class: u32) -> Result<StructureConstants> {
    if generators < 1 || class < 1 {
        return Err(Error::input("need at least one generator and class at least 1"));
    }
    let basis = lyndon_words(generators, class);
    let index: BTreeMap<Vec<u8>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, w)| (w.letters().to_vec(), i))
        .collect();
    let d = basis.len();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut si = LieSeries::zero(Ring::Rational, generators, class);
            si.insert(basis[i].clone(), Coefficient::one(Ring::Rational))?;
            let mut sj = LieSeries::zero(Ring::Rational, generators, class);
            sj.insert(basis[j].clone(), Coefficient::one(Ring::Rational))?;
            let bracket = lie_bracket(&si, &sj)?;
            let mut result = Vec::new();
            for (w, c) in bracket.iter() {
                let k = index[w.letters()];
                result.push((k, c.to_rational_lift()?));
            }
            entries.push((i, j, result));
        }
    }
    StructureConstants::from_entries(d, &entries)
}

/// Outcome of the sampled group-axioms check for `(s·lattice, H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGroupReport {
    pub trials: u32,
    pub seed: u64,
    pub scale: u64,
    pub degree: u32,
    pub identity_failures: u32,
    pub inverse_failures: u32,
    pub associativity_failures: u32,
    pub pass: bool,
}

/// Sample points from `scale · {-5..5}^d` and check that `H` gives a group:
/// `H(a,0) = a = H(0,a)`, `H(a,-a) = 0`, and associativity
/// `H(H(a,b),c) = H(a,H(b,c))`.
pub fn gamma_group_check(
    sc: &StructureConstants,
    ring: Ring,
    scale: u64,
    degree: u32,
    trials: u32,
    seed: u64,
) -> Result<GammaGroupReport> {
    if let Some(p) = ring.prime() {
        let s = convergence_scale(p);
        if scale % s != 0 {
            return Err(Error::input(format!(
                "sampling scale {scale} must be a multiple of the convergence scale {s}"
            )));
        }
    }
    let d = sc.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Coefficient> {
        (0..d)
            .map(|_| {
                let k: i64 = rng.gen_range(-5..=5);
                Coefficient::from_integer(ring, scale as i64 * k)
            })
            .collect()
    };
    let zero = zero_vector(ring, d);
    let mut identity_failures = 0;
    let mut inverse_failures = 0;
    let mut associativity_failures = 0;
    for _ in 0..trials {
        let a = sample(&mut rng);
        let b = sample(&mut rng);
        let c = sample(&mut rng);

        let right = bch_eval(sc, ring, &a, &zero, degree)?;
        let left = bch_eval(sc, ring, &zero, &a, degree)?;
        if !vectors_equal(&right, &a) || !vectors_equal(&left, &a) {
            identity_failures += 1;
        }

        let minus_a: Vec<Coefficient> = a.iter().map(Coefficient::neg).collect::<Result<_>>()?;
        if !vectors_equal(&bch_eval(sc, ring, &a, &minus_a, degree)?, &zero) {
            inverse_failures += 1;
        }

        let ab_c = bch_eval(sc, ring, &bch_eval(sc, ring, &a, &b, degree)?, &c, degree)?;
        let a_bc = bch_eval(sc, ring, &a, &bch_eval(sc, ring, &b, &c, degree)?, degree)?;
        if !vectors_equal(&ab_c, &a_bc) {
            associativity_failures += 1;
        }
    }
    Ok(GammaGroupReport {
        trials,
        seed,
        scale,
        degree,
        identity_failures,
        inverse_failures,
        associativity_failures,
        pass: identity_failures == 0 && inverse_failures == 0 && associativity_failures == 0,
    })
}
