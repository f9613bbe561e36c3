//! Sparse truncated multivariate power series.
//!
//! A [`TruncSeries`] is a polynomial representative of a power series cut at
//! a total degree bound `D`: the term map only holds monomials of total
//! degree `<= D`, keyed in graded lexicographic order so that iteration and
//! serialization are canonical.
//!
//! Invariants:
//!
//! * No stored zero coefficients.
//! * All keys have total degree `<= degree_bound` and exactly `nvars`
//!   exponents.
//! * All coefficients share the series' ring.
//!
//! Arithmetic requires identical shape (ring, variable count, degree bound);
//! nothing is coerced implicitly.  Coefficients with transient negative
//! valuation shifts may appear inside intermediate series (operator logs and
//! the like); the containers that represent actual algebra elements check
//! integrality at their boundaries via [`TruncSeries::assert_integral`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::{parse_coefficient, Coefficient, Ring};
use crate::error::{Error, Result};

/// Exponent vector of a monomial.  Ordered by total degree, then
/// lexicographically on the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn variable(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of total degree `<= bound`, in graded
/// lexicographic order.  This is the canonical basis of the truncated
/// coordinate algebra.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    for d in 0..=bound {
        fill_degree(&mut out, &mut current, 0, d, nvars);
    }
    out
}

fn fill_degree(out: &mut Vec<Monomial>, current: &mut Vec<u32>, var: usize, left: u32, nvars: usize) {
    if var + 1 == nvars {
        current[var] = left;
        out.push(Monomial(current.clone()));
        current[var] = 0;
        return;
    }
    for e in 0..=left {
        current[var] = e;
        fill_degree(out, current, var + 1, left - e, nvars);
    }
    current[var] = 0;
}

/// Sparse truncated power series.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries {
    ring: Ring,
    nvars: usize,
    degree_bound: u32,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl TruncSeries {
    pub fn zero(ring: Ring, nvars: usize, degree_bound: u32) -> TruncSeries {
        TruncSeries {
            ring,
            nvars,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, nvars: usize, degree_bound: u32, c: Coefficient) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, nvars, degree_bound);
        s.insert(Monomial::one(nvars), c);
        s
    }

    pub fn one(ring: Ring, nvars: usize, degree_bound: u32) -> TruncSeries {
        TruncSeries::constant(ring, nvars, degree_bound, Coefficient::one(ring))
    }

    pub fn variable(ring: Ring, nvars: usize, degree_bound: u32, i: usize) -> TruncSeries {
        assert!(i < nvars, "variable index out of range");
        assert!(degree_bound >= 1, "degree bound too small for a variable");
        let mut s = TruncSeries::zero(ring, nvars, degree_bound);
        s.insert(Monomial::variable(nvars, i), Coefficient::one(ring));
        s
    }

    pub fn from_terms(
        ring: Ring,
        nvars: usize,
        degree_bound: u32,
        terms: impl IntoIterator<Item = (Monomial, Coefficient)>,
    ) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(ring, nvars, degree_bound);
        for (m, c) in terms {
            if m.0.len() != nvars {
                return Err(Error::shape(format!(
                    "monomial with {} exponents in a {}-variable series",
                    m.0.len(),
                    nvars
                )));
            }
            if m.degree() > degree_bound {
                return Err(Error::shape(format!(
                    "monomial of degree {} above bound {}",
                    m.degree(),
                    degree_bound
                )));
            }
            if c.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
            }
            let prev = s.coefficient(&m);
            s.insert(m, prev.add(&c)?);
        }
        Ok(s)
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.ring))
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Largest total degree with a nonzero term (`0` for the zero series).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: Coefficient) {
        debug_assert!(m.degree() <= self.degree_bound && m.0.len() == self.nvars);
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    /// Set one coefficient, validating the monomial shape and ring.
    pub fn set_coefficient(&mut self, m: Monomial, c: Coefficient) -> Result<()> {
        if m.0.len() != self.nvars {
            return Err(Error::shape(format!(
                "monomial in {} variables does not fit a series in {}",
                m.0.len(),
                self.nvars
            )));
        }
        if m.degree() > self.degree_bound {
            return Err(Error::shape(format!(
                "monomial {m} exceeds the degree bound {}",
                self.degree_bound
            )));
        }
        self.ring.check_same(&c.ring())?;
        self.insert(m, c);
        Ok(())
    }

    fn check_shape(&self, other: &TruncSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        if self.nvars != other.nvars || self.degree_bound != other.degree_bound {
            return Err(Error::shape(format!(
                "{} vars at degree {} vs {} vars at degree {}",
                self.nvars, self.degree_bound, other.nvars, other.degree_bound
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let prev = out.coefficient(m);
            out.insert(m.clone(), prev.add(c)?);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.neg()?);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, c: &Coefficient) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        if c.is_zero() {
            return Ok(out);
        }
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.mul(c)?);
        }
        Ok(out)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.scale_rational(q)?);
        }
        Ok(out)
    }

    /// Multiply by a single term (exponent shift), dropping overflow past
    /// the degree bound.
    pub fn mul_term(&self, m: &Monomial, c: &Coefficient) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        if c.is_zero() {
            return Ok(out);
        }
        for (k, v) in &self.terms {
            if k.degree() + m.degree() > self.degree_bound {
                continue;
            }
            out.insert(k.mul(m), v.mul(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_shape(other)?;
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > self.degree_bound {
                    continue;
                }
                let m = ma.mul(mb);
                let prev = out.coefficient(&m);
                out.insert(m, prev.add(&ca.mul(cb)?)?);
            }
        }
        Ok(out)
    }

    /// Restrict to a lower degree bound.
    pub fn truncate(&self, degree_bound: u32) -> TruncSeries {
        let mut out = TruncSeries::zero(self.ring, self.nvars, degree_bound);
        for (m, c) in &self.terms {
            if m.degree() <= degree_bound {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Keep only the terms of one exact total degree.
    pub fn homogeneous_part(&self, degree: u32) -> TruncSeries {
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (m, c) in &self.terms {
            if m.degree() == degree {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Composition `self(args[0], ..., args[nvars-1])`.  Every argument must
    /// have zero constant term (otherwise truncation by total degree is not
    /// well defined), and all arguments must share one shape.
    pub fn substitute(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        if args.len() != self.nvars {
            return Err(Error::shape(format!(
                "{} arguments for {} variables",
                args.len(),
                self.nvars
            )));
        }
        if args.is_empty() {
            // A 0-variable series is a constant; nothing to substitute.
            return Err(Error::shape("substitution into a 0-variable series"));
        }
        let shape = &args[0];
        for a in args {
            shape.check_shape(a)?;
            if a.ring != self.ring {
                return Err(Error::RingMismatch(
                    self.ring.to_string(),
                    a.ring.to_string(),
                ));
            }
            if !a.constant_term().is_zero() {
                return Err(Error::input(
                    "substitution argument has a nonzero constant term",
                ));
            }
        }
        let mut out = TruncSeries::zero(shape.ring, shape.nvars, shape.degree_bound);
        // Lazily extended power tables, one per variable.
        let mut powers: Vec<Vec<TruncSeries>> = args
            .iter()
            .map(|a| vec![TruncSeries::one(a.ring, a.nvars, a.degree_bound), a.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut term = TruncSeries::constant(shape.ring, shape.nvars, shape.degree_bound, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&args[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Formal partial derivative in variable `i` (same shape).
    pub fn partial(&self, i: usize) -> Result<TruncSeries> {
        if i >= self.nvars {
            return Err(Error::shape(format!(
                "partial in variable {i} of a {}-variable series",
                self.nvars
            )));
        }
        let mut out = TruncSeries::zero(self.ring, self.nvars, self.degree_bound);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut lower = m.clone();
            lower.0[i] -= 1;
            let prev = out.coefficient(&lower);
            out.insert(lower, prev.add(&c.mul(&Coefficient::from_integer(self.ring, e as i64))?)?);
        }
        Ok(out)
    }

    /// Full evaluation at a point (exact polynomial evaluation of the
    /// truncated representative).
    pub fn eval(&self, point: &[Coefficient]) -> Result<Coefficient> {
        if point.len() != self.nvars {
            return Err(Error::shape(format!(
                "point with {} coordinates for {} variables",
                point.len(),
                self.nvars
            )));
        }
        for c in point {
            if c.ring() != self.ring {
                return Err(Error::RingMismatch(self.ring.to_string(), c.ring().to_string()));
            }
        }
        let mut powers: Vec<Vec<Coefficient>> = point
            .iter()
            .map(|c| vec![Coefficient::one(self.ring), c.clone()])
            .collect();
        let mut acc = Coefficient::zero(self.ring);
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&point[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Evaluate a contiguous block of variables `[start, start + vals.len())`
    /// at given ring elements; the remaining variables are renumbered in
    /// order into a smaller series.
    pub fn eval_block(&self, start: usize, vals: &[Coefficient]) -> Result<TruncSeries> {
        let end = start + vals.len();
        if end > self.nvars {
            return Err(Error::shape("evaluation block out of range"));
        }
        for c in vals {
            if c.ring() != self.ring {
                return Err(Error::RingMismatch(self.ring.to_string(), c.ring().to_string()));
            }
        }
        let new_nvars = self.nvars - vals.len();
        let mut out = TruncSeries::zero(self.ring, new_nvars, self.degree_bound);
        let mut powers: Vec<Vec<Coefficient>> = vals
            .iter()
            .map(|c| vec![Coefficient::one(self.ring), c.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (j, v) in vals.iter().enumerate() {
                let e = m.0[start + j];
                if e == 0 {
                    continue;
                }
                let _ = v;
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul(&vals[j])?;
                    powers[j].push(next);
                }
                coeff = coeff.mul(&powers[j][e as usize])?;
            }
            if coeff.is_zero() {
                continue;
            }
            let mut rest: Vec<u32> = Vec::with_capacity(new_nvars);
            rest.extend_from_slice(&m.0[..start]);
            rest.extend_from_slice(&m.0[end..]);
            let key = Monomial(rest);
            let prev = out.coefficient(&key);
            out.insert(key, prev.add(&coeff)?);
        }
        Ok(out)
    }

    /// Relabel variables into a larger variable space: exponent `i` of every
    /// monomial moves to position `map[i]`.
    pub fn rename_vars(&self, nvars: usize, map: &[usize]) -> Result<TruncSeries> {
        if map.len() != self.nvars {
            return Err(Error::shape("variable map length mismatch"));
        }
        if map.iter().any(|&j| j >= nvars) {
            return Err(Error::shape("variable map target out of range"));
        }
        let mut out = TruncSeries::zero(self.ring, nvars, self.degree_bound);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &exp) in m.0.iter().enumerate() {
                e[map[i]] += exp;
            }
            let key = Monomial(e);
            let prev = out.coefficient(&key);
            out.insert(key, prev.add(c)?);
        }
        Ok(out)
    }

    /// Minimum of `v_p(coefficient) + total degree` over all terms — the
    /// weight of the series in the combined (valuation, degree) filtration.
    /// `None` means the series is zero (weight `+inf`).
    pub fn filtration_weight(&self, p: u64) -> Result<Option<i64>> {
        let mut best: Option<i64> = None;
        for (m, c) in &self.terms {
            if let Some(v) = c.valuation_at(p)?.finite() {
                let w = v + m.degree() as i64;
                best = Some(best.map_or(w, |b| b.min(w)));
            }
        }
        Ok(best)
    }

    /// Verify every stored coefficient can live in the ring without a
    /// negative valuation shift.
    pub fn assert_integral(&self) -> Result<()> {
        for (m, c) in &self.terms {
            c.assert_integral().map_err(|_| {
                Error::NotIntegral(format!("coefficient {c} of {m} has negative shift"))
            })?;
        }
        Ok(())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                let cs = c.to_string();
                if cs == "1" {
                    write!(f, "{m}")?;
                } else if cs.contains(' ') || cs.contains('+') {
                    write!(f, "({cs})*{m}")?;
                } else {
                    write!(f, "{cs}*{m}")?;
                }
            }
        }
        Ok(())
    }
}

/// Serialized form of a series: exponent vectors plus coefficient strings,
/// in graded-lex order.  The ring travels separately (in the enclosing
/// document), matching the text encodings of [`crate::coeff`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub nvars: usize,
    pub degree_bound: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl TruncSeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            nvars: self.nvars,
            degree_bound: self.degree_bound,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exponents: m.0.clone(),
                    coefficient: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(ring: Ring, json: &SeriesJson) -> Result<TruncSeries> {
        TruncSeries::from_terms(
            ring,
            json.nvars,
            json.degree_bound,
            json.terms
                .iter()
                .map(|t| {
                    Ok((
                        Monomial(t.exponents.clone()),
                        parse_coefficient(ring, &t.coefficient)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }
}
