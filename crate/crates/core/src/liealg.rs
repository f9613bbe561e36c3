//! Finite-dimensional Lie algebras given by structure constants, analyzed
//! over the exact rationals.
//!
//! The entry point is [`StructureConstants`]: a dimension `d` and the
//! constants `c^k_{ij}` of `[e_i, e_j] = Σ_k c^k_{ij} e_k`, validated for
//! antisymmetry at construction.  On top of it:
//!
//! * [`StructureConstants::check_jacobi`] evaluates every Jacobi sum and
//!   returns witness triples for failures;
//! * [`StructureConstants::killing_form`] is `κ(e_i, e_j) =
//!   trace(ad e_i · ad e_j)`;
//! * [`StructureConstants::solvable_radical`] computes the radical by
//!   Cartan's criterion — the `κ`-orthogonal complement of `[L, L]`, valid
//!   in characteristic 0 — and certifies it solvable;
//! * derived and lower-central series decide solvability and nilpotency,
//!   and [`StructureConstants::radical_nilpotency_report`] classifies the
//!   algebra as `PASS` (nilpotent radical) or `FLAG` (solvable radical that
//!   is not nilpotent).
//!
//! All linear algebra is exact: subspaces are reduced-row-echelon rational
//! bases, so equal subspaces have equal representations and every rank
//! decision is deterministic.

use std::fmt;

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense matrix over the exact rationals (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RationalMatrix {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> RationalMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &BigRational) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(BigRational::zero(), |s, t| s + t)
            })
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(BigRational::zero(), |s, i| s + self.get(i, i))
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = self.get(r, c).recip();
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                *self.get_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    *self.get_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, f).clone();
            }
            out.push(v);
        }
        out
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A linear subspace of Q^d held as a reduced-row-echelon basis, so equal
/// subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Subspace {
        Subspace::from_spanning(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![BigRational::zero(); ambient];
                    v[i] = BigRational::one();
                    v
                })
                .collect(),
        )
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<BigRational>>) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let mut m = RationalMatrix::from_rows(vectors);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut rem = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rem[p].is_zero() {
                continue;
            }
            let f = rem[p].clone();
            for (r, b) in rem.iter_mut().zip(row) {
                *r -= &f * b;
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// Outcome of a Jacobi-identity scan: every triple `(i, j, l)` evaluated,
/// failing triples reported 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub pass: bool,
    pub witnesses: Vec<(usize, usize, usize)>,
}

/// Classification of the solvable radical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RadicalStatus {
    /// The solvable radical is nilpotent.
    Pass,
    /// The radical is solvable but not nilpotent — such an algebra cannot
    /// be the Lie algebra of a finitely generated standard group.
    Flag,
}

impl fmt::Display for RadicalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadicalStatus::Pass => write!(f, "PASS"),
            RadicalStatus::Flag => write!(f, "FLAG"),
        }
    }
}

/// Full radical analysis: the radical subspace, its lower-central data,
/// and the PASS/FLAG verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalReport {
    pub radical: Subspace,
    pub radical_is_nilpotent: bool,
    pub radical_nilpotency_class: Option<usize>,
    pub radical_lower_central_dims: Vec<usize>,
    pub status: RadicalStatus,
}

/// A Lie algebra presented by structure constants `c^k_{ij}` over the exact
/// rationals; antisymmetry is enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dimension: usize,
    /// `table[(i * d + j) * d + k] = c^k_{ij}` (all indices 0-based).
    table: Vec<BigRational>,
}

impl StructureConstants {
    /// Build from a full table, validating `c^k_{ij} = -c^k_{ji}`.
    pub fn from_table(dimension: usize, table: Vec<BigRational>) -> Result<StructureConstants> {
        if table.len() != dimension * dimension * dimension {
            return Err(Error::shape(format!(
                "structure constant table must have d^3 = {} entries, got {}",
                dimension * dimension * dimension,
                table.len()
            )));
        }
        let sc = StructureConstants { dimension, table };
        for i in 0..dimension {
            for j in 0..dimension {
                for k in 0..dimension {
                    if sc.constant(i, j, k) != &-sc.constant(j, i, k) {
                        return Err(Error::input(format!(
                            "antisymmetry fails: c^{}_{{{},{}}} != -c^{}_{{{},{}}}",
                            k + 1,
                            i + 1,
                            j + 1,
                            k + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        Ok(sc)
    }

    /// Build from sparse bracket entries `(i, j, [(k, c), ...])`, 0-based,
    /// with `[e_j, e_i]` filled in by antisymmetry when absent.
    pub fn from_entries(
        dimension: usize,
        entries: &[(usize, usize, Vec<(usize, BigRational)>)],
    ) -> Result<StructureConstants> {
        let d = dimension;
        let mut table = vec![BigRational::zero(); d * d * d];
        let mut given = vec![false; d * d];
        for (i, j, result) in entries {
            if *i >= d || *j >= d {
                return Err(Error::input(format!(
                    "bracket index ({}, {}) out of range for dimension {d}",
                    i + 1,
                    j + 1
                )));
            }
            given[i * d + j] = true;
            for (k, c) in result {
                if *k >= d {
                    return Err(Error::input(format!(
                        "component index {} out of range for dimension {d}",
                        k + 1
                    )));
                }
                table[(i * d + j) * d + k] += c;
            }
        }
        // Mirror entries whose opposite orientation was not supplied.
        for i in 0..d {
            for j in 0..d {
                if given[i * d + j] && !given[j * d + i] {
                    for k in 0..d {
                        table[(j * d + i) * d + k] = -table[(i * d + j) * d + k].clone();
                    }
                }
            }
        }
        StructureConstants::from_table(d, table)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.table[(i * self.dimension + j) * self.dimension + k]
    }

    /// `[x, y]` extended bilinearly to coordinate vectors.
    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let d = self.dimension;
        assert_eq!(x.len(), d);
        assert_eq!(y.len(), d);
        let mut out = vec![BigRational::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad e_i` acting on coordinates: column `j` is `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> RationalMatrix {
        let d = self.dimension;
        let mut m = RationalMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                *m.get_mut(k, j) = self.constant(i, j, k).clone();
            }
        }
        m
    }

    /// Matrix of `ad x = [x, ·]` for a coordinate vector `x`.
    pub fn ad(&self, x: &[BigRational]) -> RationalMatrix {
        let d = self.dimension;
        let mut m = RationalMatrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            m = m.add(&self.ad_basis(i).scale(xi));
        }
        m
    }

    /// Evaluate every Jacobi sum `[[e_i,e_j],e_l] + [[e_j,e_l],e_i] +
    /// [[e_l,e_i],e_j]`; witnesses are 1-based.
    pub fn check_jacobi(&self) -> JacobiReport {
        let d = self.dimension;
        let basis: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut v = vec![BigRational::zero(); d];
                v[i] = BigRational::one();
                v
            })
            .collect();
        let mut witnesses = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let mut sum = self.bracket(&self.bracket(&basis[i], &basis[j]), &basis[l]);
                    for (s, t) in sum
                        .iter_mut()
                        .zip(self.bracket(&self.bracket(&basis[j], &basis[l]), &basis[i]))
                    {
                        *s += t;
                    }
                    for (s, t) in sum
                        .iter_mut()
                        .zip(self.bracket(&self.bracket(&basis[l], &basis[i]), &basis[j]))
                    {
                        *s += t;
                    }
                    if !sum.iter().all(Zero::is_zero) {
                        witnesses.push((i + 1, j + 1, l + 1));
                    }
                }
            }
        }
        JacobiReport {
            pass: witnesses.is_empty(),
            witnesses,
        }
    }

    /// `κ(e_i, e_j) = trace(ad e_i · ad e_j)`.
    pub fn killing_form(&self) -> RationalMatrix {
        let d = self.dimension;
        let ads: Vec<RationalMatrix> = (0..d).map(|i| self.ad_basis(i)).collect();
        let mut k = RationalMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let t = ads[i].mul(&ads[j]).trace();
                *k.get_mut(i, j) = t.clone();
                *k.get_mut(j, i) = t;
            }
        }
        k
    }

    /// Span of all brackets `[a, b]`, `a ∈ A`, `b ∈ B`.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut spanning = Vec::new();
        for u in a.basis() {
            for v in b.basis() {
                spanning.push(self.bracket(u, v));
            }
        }
        Subspace::from_spanning(self.dimension, spanning)
    }

    /// Derived series of a subalgebra: `S ⊇ [S,S] ⊇ [[S,S],[S,S]] ⊇ …`,
    /// stopping once stable or zero.
    pub fn derived_series(&self, start: &Subspace) -> Vec<Subspace> {
        let mut chain = vec![start.clone()];
        loop {
            let last = chain.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.bracket_subspaces(last, last);
            if &next == last {
                break;
            }
            chain.push(next);
        }
        chain
    }

    /// Lower central series of a subalgebra: `S ⊇ [S,S] ⊇ [S,[S,S]] ⊇ …`,
    /// stopping once stable or zero.
    pub fn lower_central_series(&self, start: &Subspace) -> Vec<Subspace> {
        let mut chain = vec![start.clone()];
        loop {
            let last = chain.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.bracket_subspaces(start, last);
            if &next == last {
                break;
            }
            chain.push(next);
        }
        chain
    }

    pub fn is_solvable(&self, s: &Subspace) -> bool {
        self.derived_series(s).last().unwrap().is_zero()
    }

    pub fn is_nilpotent(&self, s: &Subspace) -> bool {
        self.lower_central_series(s).last().unwrap().is_zero()
    }

    /// Nilpotency class: smallest `c` with `L^{c+1} = 0` in the lower
    /// central series (`None` when not nilpotent; class 0 is the zero
    /// algebra).
    pub fn nilpotency_class(&self, s: &Subspace) -> Option<usize> {
        let chain = self.lower_central_series(s);
        chain.last().unwrap().is_zero().then(|| chain.len() - 1)
    }

    /// Solvable radical by Cartan's criterion:
    /// `R_s = {x : κ(x, [L,L]) = 0}`, certified solvable.
    pub fn solvable_radical(&self) -> Result<Subspace> {
        let d = self.dimension;
        let kappa = self.killing_form();
        let derived = self.bracket_subspaces(&Subspace::whole(d), &Subspace::whole(d));
        // One constraint row per derived-subspace basis vector:
        // row_r[i] = κ(e_i, b_r).
        let rows: Vec<Vec<BigRational>> = derived
            .basis()
            .iter()
            .map(|b| kappa.mul_vec(b))
            .collect();
        let radical = if rows.is_empty() {
            Subspace::whole(d)
        } else {
            Subspace::from_spanning(d, RationalMatrix::from_rows(rows).nullspace())
        };
        // Guarded certificate: in characteristic 0 Cartan's criterion makes
        // this subspace solvable; fail loudly rather than report nonsense.
        if !self.is_solvable(&radical) {
            return Err(Error::input(
                "radical candidate is not solvable; structure constants are inconsistent",
            ));
        }
        Ok(radical)
    }

    /// Compute the radical, decide its nilpotency, and classify.
    pub fn radical_nilpotency_report(&self) -> Result<RadicalReport> {
        let radical = self.solvable_radical()?;
        let chain = self.lower_central_series(&radical);
        let dims: Vec<usize> = chain.iter().map(Subspace::dimension).collect();
        let nilpotent = chain.last().unwrap().is_zero();
        Ok(RadicalReport {
            radical_is_nilpotent: nilpotent,
            radical_nilpotency_class: nilpotent.then(|| chain.len() - 1),
            radical_lower_central_dims: dims,
            status: if nilpotent {
                RadicalStatus::Pass
            } else {
                RadicalStatus::Flag
            },
            radical,
        })
    }

    /// Block direct sum of two algebras.
    pub fn direct_sum(&self, other: &StructureConstants) -> StructureConstants {
        let d1 = self.dimension;
        let d = d1 + other.dimension;
        let mut table = vec![BigRational::zero(); d * d * d];
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d1 {
                    table[(i * d + j) * d + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..other.dimension {
            for j in 0..other.dimension {
                for k in 0..other.dimension {
                    table[((d1 + i) * d + (d1 + j)) * d + (d1 + k)] =
                        other.constant(i, j, k).clone();
                }
            }
        }
        StructureConstants { dimension: d, table }
    }

    // Named example algebras, used by tests and the CLI documentation.

    /// Abelian algebra: all brackets zero.
    pub fn abelian(dimension: usize) -> StructureConstants {
        StructureConstants {
            dimension,
            table: vec![BigRational::zero(); dimension * dimension * dimension],
        }
    }

    /// Heisenberg algebra: `[e1, e2] = e3`, `e3` central.
    pub fn heisenberg() -> StructureConstants {
        StructureConstants::from_entries(
            3,
            &[(0, 1, vec![(2, BigRational::one())])],
        )
        .expect("valid constants")
    }

    /// `sl2` in the basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`,
    /// `[e,f] = h`.
    pub fn sl2() -> StructureConstants {
        let two = BigRational::from_integer(2.into());
        StructureConstants::from_entries(
            3,
            &[
                (0, 1, vec![(1, two.clone())]),
                (0, 2, vec![(2, -two)]),
                (1, 2, vec![(0, BigRational::one())]),
            ],
        )
        .expect("valid constants")
    }

    /// The 2-dimensional non-abelian algebra `[x, y] = y`: solvable but not
    /// nilpotent.
    pub fn affine_line() -> StructureConstants {
        StructureConstants::from_entries(
            2,
            &[(0, 1, vec![(1, BigRational::one())])],
        )
        .expect("valid constants")
    }
}

/// Serialized structure constants; indices are 1-based and only one
/// orientation of each bracket needs to be listed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureConstantsJson {
    pub dimension: usize,
    pub brackets: Vec<BracketJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub result: Vec<BracketTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketTermJson {
    pub k: usize,
    pub coeff: String,
}

impl StructureConstants {
    pub fn to_json(&self) -> StructureConstantsJson {
        let d = self.dimension;
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let result: Vec<BracketTermJson> = (0..d)
                    .filter(|&k| !self.constant(i, j, k).is_zero())
                    .map(|k| BracketTermJson {
                        k: k + 1,
                        coeff: self.constant(i, j, k).to_string(),
                    })
                    .collect();
                if !result.is_empty() {
                    brackets.push(BracketJson {
                        i: i + 1,
                        j: j + 1,
                        result,
                    });
                }
            }
        }
        StructureConstantsJson {
            dimension: d,
            brackets,
        }
    }

    pub fn from_json(json: &StructureConstantsJson) -> Result<StructureConstants> {
        let mut entries = Vec::new();
        for b in &json.brackets {
            if b.i == 0 || b.j == 0 {
                return Err(Error::input("bracket indices are 1-based"));
            }
            let mut result = Vec::new();
            for t in &b.result {
                if t.k == 0 {
                    return Err(Error::input("component indices are 1-based"));
                }
                let c: BigRational = t
                    .coeff
                    .trim()
                    .parse()
                    .map_err(|_| Error::input(format!("bad rational coefficient {:?}", t.coeff)))?;
                result.push((t.k - 1, c));
            }
            entries.push((b.i - 1, b.j - 1, result));
        }
        StructureConstants::from_entries(json.dimension, &entries)
    }
}

/// Positivity guard used by callers that need integral structure constants.
pub fn integral_constants(sc: &StructureConstants) -> bool {
    sc.table.iter().all(|c| c.denom().abs().is_one())
}
