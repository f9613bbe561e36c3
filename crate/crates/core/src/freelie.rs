//! Lyndon words and the free Lie algebra inside the free associative algebra.
//!
//! Conventions, fixed across the crate:
//!
//! * Generators are written `x1, x2, ...`; a word is a sequence of 1-based
//!   letters, serialized as a digit string (`"112"` means `x1 x1 x2`).
//! * A word is Lyndon when it is strictly smaller than every proper rotation
//!   of itself.  [`is_lyndon`] implements that definition verbatim (it is the
//!   test oracle); [`lyndon_words`] generates them by Duval's algorithm.
//! * The bracketing of a Lyndon word is defined through its standard
//!   factorization `w = u v` (`v` the lexicographically least — equivalently
//!   longest Lyndon — proper suffix): `b(w) = [b(u), b(v)]`, single letters
//!   bracket to themselves.
//! * Expanding `b(w)` into the free associative algebra puts coefficient
//!   exactly `1` on `w` itself, and every other word of the same degree is
//!   lexicographically greater.  Projection onto the Lyndon basis eliminates
//!   leading words in that triangular order and certifies primitivity: a
//!   nonzero remainder (or a non-Lyndon leading word) means the input was
//!   not a Lie element.
//!
//! Word and Lie-series coefficients live in any [`Ring`]; the series here
//! are graded by word length and truncated at a fixed maximal length.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::{parse_coefficient, Coefficient, Ring};
use crate::error::{Error, Result};

/// A word in the free monoid on `x1..xk`, ordered by length then
/// lexicographically (graded-lex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(pub Vec<u8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// True when `letters` is strictly smaller than all of its proper rotations
/// — the definition of a Lyndon word, checked exhaustively.
pub fn is_lyndon(letters: &[u8]) -> bool {
    if letters.is_empty() {
        return false;
    }
    let n = letters.len();
    (1..n).all(|r| {
        let rotation = letters[r..].iter().chain(&letters[..r]);
        letters.iter().lt(rotation)
    })
}

/// A Lyndon word over a fixed alphabet; always nonempty and Lyndon by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonWord {
    letters: Vec<u8>,
}

impl LyndonWord {
    pub fn new(letters: Vec<u8>) -> Result<LyndonWord> {
        if !is_lyndon(&letters) {
            return Err(Error::input(format!(
                "{} is not a Lyndon word",
                Word(letters.clone())
            )));
        }
        if letters.iter().any(|&l| l == 0) {
            return Err(Error::input("letters are 1-based"));
        }
        Ok(LyndonWord { letters })
    }

    /// Parse a digit string such as `"112"` (alphabet of at most 9 letters).
    pub fn from_digits(s: &str) -> Result<LyndonWord> {
        let letters = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d >= 1)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::input(format!("bad letter {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        LyndonWord::new(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self) -> Word {
        Word(self.letters.clone())
    }

    /// The standard factorization `w = u v`, with `v` the lexicographically
    /// least proper suffix (the longest proper Lyndon suffix).  Single
    /// letters have no factorization.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        if self.letters.len() < 2 {
            return None;
        }
        let n = self.letters.len();
        let split = (1..n)
            .min_by(|&a, &b| self.letters[a..].cmp(&self.letters[b..]))
            .expect("nonempty suffix set");
        let u = LyndonWord::new(self.letters[..split].to_vec())
            .expect("left factor of a Lyndon word is Lyndon");
        let v = LyndonWord::new(self.letters[split..].to_vec())
            .expect("least proper suffix is Lyndon");
        Some((u, v))
    }

    /// Human-readable nested bracket form, e.g. `[x1,[x1,x2]]` for `112`.
    pub fn bracket_string(&self) -> String {
        match self.standard_factorization() {
            None => format!("x{}", self.letters[0]),
            Some((u, v)) => format!("[{},{}]", u.bracket_string(), v.bracket_string()),
        }
    }
}

impl Ord for LyndonWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word().cmp(&other.word())
    }
}

impl PartialOrd for LyndonWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word())
    }
}

/// All Lyndon words over `k` letters of length `<= max_len`, generated by
/// Duval's algorithm and returned in graded-lex order.
pub fn lyndon_words(k: usize, max_len: u32) -> Vec<LyndonWord> {
    assert!(k >= 1 && k <= 255);
    let n = max_len as usize;
    let mut out: Vec<LyndonWord> = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![1];
    loop {
        out.push(LyndonWord { letters: w.clone() });
        // Extend periodically to full length, then bump the last
        // incrementable letter.
        let mut t: Vec<u8> = (0..n).map(|i| w[i % w.len()]).collect();
        while t.last().is_some_and(|&l| l as usize == k) {
            t.pop();
        }
        match t.last_mut() {
            None => break,
            Some(l) => *l += 1,
        }
        w = t;
    }
    out.sort_by(|a, b| a.word().cmp(&b.word()));
    out
}

/// An element of the free associative algebra on `generators` letters,
/// truncated at word length `degree_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssocSeries {
    ring: Ring,
    generators: usize,
    degree_bound: u32,
    terms: BTreeMap<Word, Coefficient>,
}

impl AssocSeries {
    pub fn zero(ring: Ring, generators: usize, degree_bound: u32) -> AssocSeries {
        AssocSeries {
            ring,
            generators,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring, generators: usize, degree_bound: u32) -> AssocSeries {
        let mut s = AssocSeries::zero(ring, generators, degree_bound);
        s.insert(Word(Vec::new()), Coefficient::one(ring));
        s
    }

    pub fn generator(ring: Ring, generators: usize, degree_bound: u32, i: u8) -> AssocSeries {
        assert!(i >= 1 && (i as usize) <= generators);
        assert!(degree_bound >= 1);
        let mut s = AssocSeries::zero(ring, generators, degree_bound);
        s.insert(Word(vec![i]), Coefficient::one(ring));
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Coefficient {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.ring))
    }

    fn insert(&mut self, w: Word, c: Coefficient) {
        debug_assert!(w.0.len() as u32 <= self.degree_bound || w.0.is_empty());
        if c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    fn check_shape(&self, other: &AssocSeries) -> Result<()> {
        if self.ring != other.ring
            || self.generators != other.generators
            || self.degree_bound != other.degree_bound
        {
            return Err(Error::shape("associative series shapes differ"));
        }
        Ok(())
    }

    pub fn add(&self, other: &AssocSeries) -> Result<AssocSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let prev = out.coefficient(w);
            out.insert(w.clone(), prev.add(c)?);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<AssocSeries> {
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.neg()?);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AssocSeries) -> Result<AssocSeries> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, c: &Coefficient) -> Result<AssocSeries> {
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        if c.is_zero() {
            return Ok(out);
        }
        for (w, v) in &self.terms {
            out.insert(w.clone(), v.mul(c)?);
        }
        Ok(out)
    }

    /// Concatenation product, truncated at the length bound.
    pub fn mul(&self, other: &AssocSeries) -> Result<AssocSeries> {
        self.check_shape(other)?;
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if (wa.0.len() + wb.0.len()) as u32 > self.degree_bound {
                    continue;
                }
                let mut w = wa.0.clone();
                w.extend_from_slice(&wb.0);
                let w = Word(w);
                let prev = out.coefficient(&w);
                out.insert(w, prev.add(&ca.mul(cb)?)?);
            }
        }
        Ok(out)
    }

    /// `exp` of a series with zero constant term; terminates at the length
    /// bound because each power raises the minimal word length.
    pub fn exp(&self) -> Result<AssocSeries> {
        if !self.coefficient(&Word(Vec::new())).is_zero() {
            return Err(Error::input("exp needs a zero constant term"));
        }
        let mut out = AssocSeries::one(self.ring, self.generators, self.degree_bound);
        // Running term a^j / j!.
        let mut term = AssocSeries::one(self.ring, self.generators, self.degree_bound);
        for j in 1..=self.degree_bound as i64 {
            term = term.mul(self)?.div_by_int(j)?;
            if term.is_zero() {
                break;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<AssocSeries> {
        if !self.coefficient(&Word(Vec::new())).is_one() {
            return Err(Error::input("log needs constant term 1"));
        }
        let u = self.sub(&AssocSeries::one(self.ring, self.generators, self.degree_bound))?;
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        let mut power = AssocSeries::one(self.ring, self.generators, self.degree_bound);
        for i in 1..=self.degree_bound as i64 {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let term = power.scale(&Coefficient::from_integer(self.ring, if i % 2 == 1 { 1 } else { -1 }))?;
            out = out.add(&term.div_by_int(i)?)?;
        }
        Ok(out)
    }

    fn div_by_int(&self, k: i64) -> Result<AssocSeries> {
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.div_exact_int(k)?);
        }
        Ok(out)
    }

    /// Algebra endomorphism sending generator `i` to `signs[i-1] * x_{map[i-1]}`.
    pub fn map_generators(&self, map: &[u8], signs: &[i64]) -> Result<AssocSeries> {
        if map.len() != self.generators || signs.len() != self.generators {
            return Err(Error::shape("generator map length mismatch"));
        }
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        for (w, c) in &self.terms {
            let mut sign = 1i64;
            let image: Vec<u8> = w
                .0
                .iter()
                .map(|&l| {
                    sign *= signs[(l - 1) as usize];
                    map[(l - 1) as usize]
                })
                .collect();
            let w = Word(image);
            let c = c.mul(&Coefficient::from_integer(self.ring, sign))?;
            let prev = out.coefficient(&w);
            out.insert(w, prev.add(&c)?);
        }
        Ok(out)
    }

    /// Smallest word (graded-lex) with a nonzero coefficient.
    pub fn leading_term(&self) -> Option<(&Word, &Coefficient)> {
        self.terms.iter().next()
    }

    pub fn truncate(&self, degree_bound: u32) -> AssocSeries {
        let mut out = AssocSeries::zero(self.ring, self.generators, degree_bound);
        for (w, c) in &self.terms {
            if w.0.len() as u32 <= degree_bound {
                out.insert(w.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for AssocSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.0.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

/// Expansion of the bracketing of a Lyndon word into the free associative
/// algebra (integer coefficients, so valid in every ring).
pub fn expand_bracketing(
    w: &LyndonWord,
    ring: Ring,
    generators: usize,
    degree_bound: u32,
) -> Result<AssocSeries> {
    if w.len() as u32 > degree_bound {
        return Err(Error::shape(format!(
            "word {w} longer than the degree bound {degree_bound}"
        )));
    }
    match w.standard_factorization() {
        None => Ok(AssocSeries::generator(
            ring,
            generators,
            degree_bound,
            w.letters()[0],
        )),
        Some((u, v)) => {
            let eu = expand_bracketing(&u, ring, generators, degree_bound)?;
            let ev = expand_bracketing(&v, ring, generators, degree_bound)?;
            eu.mul(&ev)?.sub(&ev.mul(&eu)?)
        }
    }
}

/// A Lie element written in the Lyndon bracket basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieSeries {
    ring: Ring,
    generators: usize,
    degree_bound: u32,
    terms: BTreeMap<LyndonWord, Coefficient>,
}

impl LieSeries {
    pub fn zero(ring: Ring, generators: usize, degree_bound: u32) -> LieSeries {
        LieSeries {
            ring,
            generators,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
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

    pub fn iter(&self) -> impl Iterator<Item = (&LyndonWord, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &LyndonWord) -> Coefficient {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.ring))
    }

    pub fn insert(&mut self, w: LyndonWord, c: Coefficient) -> Result<()> {
        if w.len() as u32 > self.degree_bound {
            return Err(Error::shape(format!(
                "word {w} longer than degree bound {}",
                self.degree_bound
            )));
        }
        if w.letters().iter().any(|&l| l as usize > self.generators) {
            return Err(Error::shape(format!("word {w} uses unknown generators")));
        }
        if c.ring() != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), c.ring().to_string()));
        }
        if c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
        Ok(())
    }

    pub fn add(&self, other: &LieSeries) -> Result<LieSeries> {
        if self.ring != other.ring
            || self.generators != other.generators
            || self.degree_bound != other.degree_bound
        {
            return Err(Error::shape("Lie series shapes differ"));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let prev = out.coefficient(w);
            out.insert(w.clone(), prev.add(c)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<LieSeries> {
        let mut out = LieSeries::zero(self.ring, self.generators, self.degree_bound);
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.neg()?)?;
        }
        Ok(out)
    }

    pub fn truncate(&self, degree_bound: u32) -> LieSeries {
        let mut out = LieSeries::zero(self.ring, self.generators, degree_bound);
        for (w, c) in &self.terms {
            if w.len() as u32 <= degree_bound {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Re-expansion into the free associative algebra.
    pub fn expand(&self) -> Result<AssocSeries> {
        let mut out = AssocSeries::zero(self.ring, self.generators, self.degree_bound);
        for (w, c) in &self.terms {
            let b = expand_bracketing(w, self.ring, self.generators, self.degree_bound)?;
            out = out.add(&b.scale(c)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{}", w.bracket_string())?;
        }
        Ok(())
    }
}

/// Project a primitive element of the free associative algebra onto the
/// Lyndon bracket basis by triangular elimination: repeatedly read off the
/// graded-lex smallest word (it must be Lyndon with the same coefficient as
/// the bracket expansion, whose leading coefficient is exactly 1) and
/// subtract.  A non-Lyndon leading word or nonzero final remainder certifies
/// the input was not a Lie element.
pub fn project_to_lie(s: &AssocSeries) -> Result<LieSeries> {
    if !s.coefficient(&Word(Vec::new())).is_zero() {
        return Err(Error::NotPrimitive(
            "nonzero constant term in the candidate Lie element".into(),
        ));
    }
    let mut out = LieSeries::zero(s.ring(), s.generators(), s.degree_bound());
    let mut rem = s.clone();
    let mut guard = 0usize;
    while let Some((w, c)) = rem.leading_term() {
        let w = w.clone();
        let c = c.clone();
        guard += 1;
        if guard > 4 * s.iter().count() + 16 {
            return Err(Error::NoTermination(
                "projection failed to eliminate leading words".into(),
            ));
        }
        let lyndon = LyndonWord::new(w.0.clone()).map_err(|_| {
            Error::NotPrimitive(format!("leading word {w} is not Lyndon"))
        })?;
        let b = expand_bracketing(&lyndon, s.ring(), s.generators(), s.degree_bound())?;
        let (lead_word, lead_coeff) = b.leading_term().expect("bracket expansions are nonzero");
        assert_eq!(
            lead_word, &w,
            "bracket expansion of {lyndon} must lead with the word itself"
        );
        assert!(
            lead_coeff.is_one(),
            "bracket expansion of {lyndon} must have leading coefficient 1"
        );
        rem = rem.sub(&b.scale(&c)?)?;
        assert!(
            rem.coefficient(&w).is_zero(),
            "elimination must clear the leading word"
        );
        let prev = out.coefficient(&lyndon);
        out.insert(lyndon, prev.add(&c)?)?;
    }
    Ok(out)
}

/// Bracket of two Lie elements, computed in the enveloping algebra and
/// projected back to the Lyndon basis.
pub fn lie_bracket(a: &LieSeries, b: &LieSeries) -> Result<LieSeries> {
    let ea = a.expand()?;
    let eb = b.expand()?;
    project_to_lie(&ea.mul(&eb)?.sub(&eb.mul(&ea)?)?)
}

/// Serialized Lie series: Lyndon words as digit strings plus coefficient
/// strings, in graded-lex order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieSeriesJson {
    pub generators: usize,
    pub degree_bound: u32,
    pub terms: Vec<LieTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieTermJson {
    pub lyndon_word: String,
    pub coefficient: String,
}

impl LieSeries {
    pub fn to_json(&self) -> LieSeriesJson {
        LieSeriesJson {
            generators: self.generators,
            degree_bound: self.degree_bound,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| LieTermJson {
                    lyndon_word: w.to_string(),
                    coefficient: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(ring: Ring, json: &LieSeriesJson) -> Result<LieSeries> {
        let mut out = LieSeries::zero(ring, json.generators, json.degree_bound);
        for t in &json.terms {
            let w = LyndonWord::from_digits(&t.lyndon_word)?;
            let c = parse_coefficient(ring, &t.coefficient)?;
            let prev = out.coefficient(&w);
            out.insert(w, prev.add(&c)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn q() -> Ring {
        Ring::Rational
    }

    fn qc(n: i64) -> Coefficient {
        Coefficient::from_integer(q(), n)
    }

    fn lw(s: &str) -> LyndonWord {
        LyndonWord::from_digits(s).unwrap()
    }

    /// Independent count of Lyndon words: test every word of length `n`
    /// against the rotation definition.
    fn count_by_rotations(k: u8, n: usize) -> usize {
        let mut count = 0;
        let total = (k as u64).pow(n as u32);
        for idx in 0..total {
            let mut w = Vec::with_capacity(n);
            let mut rest = idx;
            for _ in 0..n {
                w.push((rest % k as u64) as u8 + 1);
                rest /= k as u64;
            }
            if is_lyndon(&w) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn lyndon_words_small() {
        let words: Vec<String> = lyndon_words(2, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["1", "2", "12"]);
        let words: Vec<String> = lyndon_words(2, 3).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["1", "2", "12", "112", "122"]);
        let words: Vec<String> = lyndon_words(1, 4).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["1"]);
    }

    #[test]
    fn duval_matches_rotation_definition() {
        for n in 1..=6usize {
            let generated = lyndon_words(2, 6)
                .into_iter()
                .filter(|w| w.len() == n)
                .count();
            assert_eq!(generated, count_by_rotations(2, n), "length {n}");
        }
        // Necklace counts over two letters.
        let per_length: Vec<usize> = (1..=6)
            .map(|n| count_by_rotations(2, n))
            .collect();
        assert_eq!(per_length, [2, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn standard_factorizations() {
        assert_eq!(
            lw("12").standard_factorization().unwrap(),
            (lw("1"), lw("2"))
        );
        assert_eq!(
            lw("112").standard_factorization().unwrap(),
            (lw("1"), lw("12"))
        );
        assert_eq!(
            lw("122").standard_factorization().unwrap(),
            (lw("12"), lw("2"))
        );
        assert_eq!(lw("112").bracket_string(), "[x1,[x1,x2]]");
        assert_eq!(lw("122").bracket_string(), "[[x1,x2],x2]");
        assert!(lw("1").standard_factorization().is_none());
    }

    #[test]
    fn expansion_examples() {
        // [x1, x2] expands to 12 - 21.
        let e = expand_bracketing(&lw("12"), q(), 2, 3).unwrap();
        assert_eq!(e.coefficient(&Word(vec![1, 2])), qc(1));
        assert_eq!(e.coefficient(&Word(vec![2, 1])), qc(-1));
        assert_eq!(e.iter().count(), 2);

        // A single letter is itself.
        let e = expand_bracketing(&lw("1"), q(), 2, 3).unwrap();
        assert_eq!(e.coefficient(&Word(vec![1])), qc(1));
        assert_eq!(e.iter().count(), 1);

        // [x1, [x1, x2]] expands to 112 - 2*121 + 211.
        let e = expand_bracketing(&lw("112"), q(), 2, 3).unwrap();
        assert_eq!(e.coefficient(&Word(vec![1, 1, 2])), qc(1));
        assert_eq!(e.coefficient(&Word(vec![1, 2, 1])), qc(-2));
        assert_eq!(e.coefficient(&Word(vec![2, 1, 1])), qc(1));
        assert_eq!(e.iter().count(), 3);
    }

    #[test]
    fn leading_term_triangularity() {
        // Every bracket expansion leads with its own word, coefficient 1,
        // all other words of the same degree lexicographically greater.
        for w in lyndon_words(2, 6) {
            let e = expand_bracketing(&w, q(), 2, 6).unwrap();
            let (lead, c) = e.leading_term().unwrap();
            assert_eq!(lead.0, w.letters(), "leading word of {w}");
            assert!(c.is_one(), "leading coefficient of {w}");
            for (word, _) in e.iter() {
                assert_eq!(word.0.len(), w.len());
                assert!(word.0 >= lead.0);
            }
        }
    }

    #[test]
    fn projection_examples() {
        // 12 - 21 projects to the single basis word 12.
        let mut s = AssocSeries::zero(q(), 2, 3);
        s = s
            .add(&AssocSeries::generator(q(), 2, 3, 1).mul(&AssocSeries::generator(q(), 2, 3, 2)).unwrap())
            .unwrap();
        s = s
            .sub(&AssocSeries::generator(q(), 2, 3, 2).mul(&AssocSeries::generator(q(), 2, 3, 1)).unwrap())
            .unwrap();
        let lie = project_to_lie(&s).unwrap();
        assert_eq!(lie.len(), 1);
        assert_eq!(lie.coefficient(&lw("12")), qc(1));

        // A generator projects to itself.
        let lie = project_to_lie(&AssocSeries::generator(q(), 2, 3, 1)).unwrap();
        assert_eq!(lie.len(), 1);
        assert_eq!(lie.coefficient(&lw("1")), qc(1));

        // The non-primitive word 11 = x1 x1 is rejected.
        let x1 = AssocSeries::generator(q(), 2, 3, 1);
        let err = project_to_lie(&x1.mul(&x1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotPrimitive(_)), "{err}");
    }

    #[test]
    fn expand_project_round_trip() {
        // Deterministic pseudo-random Lie series on the full Lyndon basis up
        // to degree 6: expanding and projecting back is the identity.
        let words = lyndon_words(2, 6);
        let mut s = LieSeries::zero(q(), 2, 6);
        let mut state = 0x9e3779b97f4a7c15u64;
        for w in words {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = (state >> 33) as i64 % 19 - 9;
            let den = 1 + ((state >> 21) as i64).rem_euclid(7);
            if num == 0 {
                continue;
            }
            let c = Coefficient::from_rational(q(), BigRational::new(num.into(), den.into()))
                .unwrap();
            s.insert(w, c).unwrap();
        }
        assert!(!s.is_zero());
        let back = project_to_lie(&s.expand().unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi() {
        // Checked in the enveloping algebra where they are identities of
        // associative arithmetic.
        let words = ["1", "12", "112", "2"];
        let series: Vec<LieSeries> = words
            .iter()
            .map(|w| {
                let mut s = LieSeries::zero(q(), 2, 6);
                s.insert(lw(w), qc(1)).unwrap();
                s
            })
            .collect();
        for a in &series {
            for b in &series {
                let ab = lie_bracket(a, b).unwrap();
                let ba = lie_bracket(b, a).unwrap();
                assert_eq!(ab, ba.neg().unwrap(), "antisymmetry");
            }
        }
        let (a, b, c) = (&series[0], &series[1], &series[3]);
        let jac = lie_bracket(a, &lie_bracket(b, c).unwrap())
            .unwrap()
            .add(&lie_bracket(b, &lie_bracket(c, a).unwrap()).unwrap())
            .unwrap()
            .add(&lie_bracket(c, &lie_bracket(a, b).unwrap()).unwrap())
            .unwrap();
        assert!(jac.is_zero(), "Jacobi identity, got {jac}");
    }

    #[test]
    fn exp_log_in_free_algebra() {
        let x = AssocSeries::generator(q(), 2, 5, 1);
        let y = AssocSeries::generator(q(), 2, 5, 2);
        let e = x.add(&y).unwrap().exp().unwrap();
        assert_eq!(e.log().unwrap(), x.add(&y).unwrap());

        // exp(x) exp(-x) = 1.
        let prod = x.exp().unwrap().mul(&x.neg().unwrap().exp().unwrap()).unwrap();
        assert_eq!(prod, AssocSeries::one(q(), 2, 5));
    }

    #[test]
    fn lie_series_json_round_trip() {
        let mut s = LieSeries::zero(q(), 2, 3);
        s.insert(lw("112"), Coefficient::from_rational(q(), BigRational::new(1.into(), 12.into())).unwrap())
            .unwrap();
        s.insert(lw("12"), Coefficient::from_rational(q(), BigRational::new(1.into(), 2.into())).unwrap())
            .unwrap();
        let j = s.to_json();
        assert_eq!(j.terms[0].lyndon_word, "12");
        assert_eq!(j.terms[0].coefficient, "1/2");
        assert_eq!(j.terms[1].lyndon_word, "112");
        let back = LieSeries::from_json(q(), &j).unwrap();
        assert_eq!(back, s);
    }
}
