//! Formal group laws at a fixed truncation degree.
//!
//! A law is a `d`-tuple of truncated series in `2d` variables — the first
//! block are the `x`-coordinates, the second block the `y`-coordinates —
//! subject to `F(x, 0) = x`, `F(0, y) = y`, and associativity
//! `F(F(x, y), z) = F(x, F(y, z))`.  [`FormalGroupLaw::check_axioms`]
//! verifies all three by exact substitution and reports the first failing
//! monomial.
//!
//! The degree-2 part of a valid law is purely mixed-bilinear; its
//! antisymmetrization `C(x, y) = B(x, y) - B(y, x)` defines the structure
//! constants of the law's Lie algebra ([`FormalGroupLaw::lie_constants`]),
//! returned over the exact rationals via canonical coefficient lifts.
//!
//! Group points are coordinate tuples in the maximal ideal; multiplication
//! evaluates the law, and inversion solves `F(x, z) = 0` by Newton
//! iteration (the Jacobian in the second block is `1 + O(m)`, so every
//! pivot is a unit).  All built-in laws are polynomial, making every group
//! operation exact at any degree bound that stores the law faithfully.

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Ring, Valuation};
use crate::error::{Error, Result};
use crate::liealg::StructureConstants;
use crate::series::{Monomial, SeriesJson, TruncSeries};

/// A formal group law: `d` series in `2d` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalGroupLaw {
    ring: Ring,
    dimension: usize,
    degree_bound: u32,
    components: Vec<TruncSeries>,
}

/// Element of the group defined by a law: coordinates in the maximal ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    ring: Ring,
    coordinates: Vec<Coefficient>,
}

impl GroupPoint {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coordinates(&self) -> &[Coefficient] {
        &self.coordinates
    }

    pub fn is_identity(&self) -> bool {
        self.coordinates.iter().all(Coefficient::is_zero)
    }

    /// Level of the point: the minimum coordinate valuation at `p`.
    pub fn level_at(&self, p: u64) -> Result<Valuation> {
        let mut min = Valuation::Infinite;
        for c in &self.coordinates {
            let v = c.valuation_at(p)?;
            if v < min {
                min = v;
            }
        }
        Ok(min)
    }
}

/// Outcome of the axiom check; `failure` names the first offending
/// component and monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub identity_pass: bool,
    pub associativity_pass: bool,
    pub pass: bool,
    pub failure: Option<String>,
}

impl FormalGroupLaw {
    pub fn new(
        ring: Ring,
        dimension: usize,
        degree_bound: u32,
        components: Vec<TruncSeries>,
    ) -> Result<FormalGroupLaw> {
        if dimension == 0 {
            return Err(Error::input("a group law needs at least one dimension"));
        }
        if components.len() != dimension {
            return Err(Error::shape(format!(
                "expected {dimension} components, got {}",
                components.len()
            )));
        }
        for c in &components {
            ring.check_same(&c.ring())?;
            if c.nvars() != 2 * dimension {
                return Err(Error::shape(format!(
                    "law components must use {} variables, got {}",
                    2 * dimension,
                    c.nvars()
                )));
            }
            if c.degree_bound() != degree_bound {
                return Err(Error::shape(format!(
                    "law components must be truncated at degree {degree_bound}, got {}",
                    c.degree_bound()
                )));
            }
        }
        Ok(FormalGroupLaw {
            ring,
            dimension,
            degree_bound,
            components,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.components
    }

    /// Re-express the law's coefficients in another ring through exact
    /// rational lifts (used to widen p-adic working precision; canonical
    /// lifts keep integer-coefficient laws exact).
    pub fn reinterpret_in(&self, ring: Ring) -> Result<FormalGroupLaw> {
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut out = TruncSeries::zero(ring, c.nvars(), c.degree_bound());
                for (m, v) in c.iter() {
                    out.set_coefficient(m.clone(), Coefficient::from_rational(ring, v.to_rational_lift()?)?)?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        FormalGroupLaw::new(ring, self.dimension, self.degree_bound, components)
    }

    /// Construct a point, enforcing maximal-ideal membership for p-adic
    /// rings (coordinate valuations at least 1).  The rational backend is a
    /// dense desk model; callers certify membership via `level_at`.
    pub fn point(&self, coordinates: Vec<Coefficient>) -> Result<GroupPoint> {
        if coordinates.len() != self.dimension {
            return Err(Error::shape(format!(
                "expected {} coordinates, got {}",
                self.dimension,
                coordinates.len()
            )));
        }
        for c in &coordinates {
            self.ring.check_same(&c.ring())?;
        }
        if self.ring.prime().is_some() {
            for c in &coordinates {
                if !c.valuation()?.is_at_least(1) {
                    return Err(Error::input(
                        "group points need coordinates in the maximal ideal (valuation >= 1)",
                    ));
                }
            }
        }
        Ok(GroupPoint {
            ring: self.ring,
            coordinates,
        })
    }

    /// Convenience constructor from small integers.
    pub fn point_from_integers(&self, values: &[i64]) -> Result<GroupPoint> {
        self.point(
            values
                .iter()
                .map(|&v| Coefficient::from_integer(self.ring, v))
                .collect(),
        )
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint {
            ring: self.ring,
            coordinates: vec![Coefficient::zero(self.ring); self.dimension],
        }
    }

    fn eval_components(&self, a: &[Coefficient], b: &[Coefficient]) -> Result<Vec<Coefficient>> {
        let mut point = a.to_vec();
        point.extend_from_slice(b);
        self.components.iter().map(|c| c.eval(&point)).collect()
    }

    /// Group multiplication `x ·_F y = F(x, y)`.
    pub fn multiply(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.ring.check_same(&x.ring)?;
        self.ring.check_same(&y.ring)?;
        Ok(GroupPoint {
            ring: self.ring,
            coordinates: self.eval_components(&x.coordinates, &y.coordinates)?,
        })
    }

    /// Group inverse: solve `F(x, z) = 0` by Newton iteration.  The
    /// Jacobian `∂F/∂y` at points of the maximal ideal is `1 + O(m)`, so
    /// the linear systems have unit pivots; iteration is capped and failure
    /// to reach an exact (or precision-exact) zero is an error.
    pub fn inverse(&self, x: &GroupPoint) -> Result<GroupPoint> {
        self.ring.check_same(&x.ring)?;
        let d = self.dimension;
        let mut z: Vec<Coefficient> = x
            .coordinates
            .iter()
            .map(Coefficient::neg)
            .collect::<Result<_>>()?;
        let max_iters = self.degree_bound as usize + self.ring.precision().unwrap_or(0) as usize + 8;
        for _ in 0..max_iters {
            let f = self.eval_components(&x.coordinates, &z)?;
            if f.iter().all(Coefficient::is_zero) {
                return Ok(GroupPoint {
                    ring: self.ring,
                    coordinates: z,
                });
            }
            // J_{kj} = ∂F_k/∂y_j at (x, z).
            let mut jac = Vec::with_capacity(d);
            let mut point = x.coordinates.clone();
            point.extend_from_slice(&z);
            for k in 0..d {
                let mut row = Vec::with_capacity(d);
                for j in 0..d {
                    row.push(self.components[k].partial(d + j)?.eval(&point)?);
                }
                jac.push(row);
            }
            let delta = solve_linear(self.ring, jac, f)?;
            for (zi, di) in z.iter_mut().zip(&delta) {
                *zi = zi.sub(di)?;
            }
        }
        Err(Error::NoTermination(
            "group inversion did not reach an exact zero within the iteration cap".into(),
        ))
    }

    /// Verify `F(x, 0) = x`, `F(0, y) = y`, and associativity, exactly at
    /// the stored truncation.
    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let d = self.dimension;
        let ring = self.ring;
        let zero_d = TruncSeries::zero(ring, d, self.degree_bound);
        let vars_d: Vec<TruncSeries> = (0..d)
            .map(|i| TruncSeries::variable(ring, d, self.degree_bound, i))
            .collect();

        let mut failure = None;
        let mut identity_pass = true;
        // F(x, 0) = x.
        for k in 0..d {
            let mut args: Vec<TruncSeries> = vars_d.clone();
            args.extend(std::iter::repeat(zero_d.clone()).take(d));
            let got = self.components[k].substitute(&args)?;
            if let Some(msg) = first_difference(&got, &vars_d[k]) {
                identity_pass = false;
                failure.get_or_insert(format!("F_{}(x, 0) != x_{}: {msg}", k + 1, k + 1));
            }
        }
        // F(0, y) = y.
        for k in 0..d {
            let mut args: Vec<TruncSeries> =
                std::iter::repeat(zero_d.clone()).take(d).collect();
            args.extend(vars_d.iter().cloned());
            let got = self.components[k].substitute(&args)?;
            if let Some(msg) = first_difference(&got, &vars_d[k]) {
                identity_pass = false;
                failure.get_or_insert(format!("F_{}(0, y) != y_{}: {msg}", k + 1, k + 1));
            }
        }

        // Associativity in 3d variables: blocks x, y, z.
        let mut associativity_pass = true;
        let n3 = 3 * d;
        let in3 = |block: usize| -> Vec<usize> { (0..2 * d).map(|v| block * d + v).collect() };
        // Lift F_k(x, y) and F_k(y, z) into 3d variables.
        let f_xy: Vec<TruncSeries> = self
            .components
            .iter()
            .map(|c| c.rename_vars(n3, &in3(0)))
            .collect::<Result<_>>()?;
        let f_yz: Vec<TruncSeries> = self
            .components
            .iter()
            .map(|c| c.rename_vars(n3, &in3(1)))
            .collect::<Result<_>>()?;
        let vars3: Vec<TruncSeries> = (0..n3)
            .map(|i| TruncSeries::variable(ring, n3, self.degree_bound, i))
            .collect();
        for k in 0..d {
            // F_k(F(x, y), z).
            let mut args = f_xy.clone();
            args.extend(vars3[2 * d..].iter().cloned());
            let lhs = self.components[k].substitute(&args)?;
            // F_k(x, F(y, z)).
            let mut args: Vec<TruncSeries> = vars3[..d].to_vec();
            args.extend(f_yz.iter().cloned());
            let rhs = self.components[k].substitute(&args)?;
            if let Some(msg) = first_difference(&lhs, &rhs) {
                associativity_pass = false;
                failure.get_or_insert(format!(
                    "associativity fails in component {}: {msg}",
                    k + 1
                ));
            }
        }

        Ok(AxiomReport {
            identity_pass,
            associativity_pass,
            pass: identity_pass && associativity_pass,
            failure,
        })
    }

    /// Structure constants of the law's Lie algebra over Q: antisymmetrize
    /// the mixed-bilinear degree-2 part, `c^k_{ij} = [x_i y_j]F_k − [x_j
    /// y_i]F_k`.  Pure quadratic terms (x-only or y-only) are forced to
    /// vanish by the identity axioms and are asserted zero; Jacobi is
    /// validated before returning.
    pub fn lie_constants(&self) -> Result<StructureConstants> {
        let d = self.dimension;
        let mut table = vec![BigRational::from_integer(0.into()); d * d * d];
        for (k, component) in self.components.iter().enumerate() {
            let quadratic = component.homogeneous_part(2);
            for (m, c) in quadratic.iter() {
                let support: Vec<usize> = (0..2 * d).filter(|&v| m.0[v] > 0).collect();
                let mixed = match support.as_slice() {
                    [a, b] if *a < d && *b >= d => Some((*a, *b - d)),
                    _ => None,
                };
                if mixed.is_none() {
                    let pure_x = support.iter().all(|&v| v < d);
                    let pure_y = support.iter().all(|&v| v >= d);
                    if pure_x || pure_y {
                        return Err(Error::input(format!(
                            "component {} has a pure quadratic term {m}, which the identity axioms forbid",
                            k + 1
                        )));
                    }
                    continue;
                }
                let (i, j) = mixed.unwrap();
                let q = c.to_rational_lift()?;
                table[(i * d + j) * d + k] += &q;
                table[(j * d + i) * d + k] -= &q;
            }
        }
        let sc = StructureConstants::from_table(d, table)?;
        let jacobi = sc.check_jacobi();
        if !jacobi.pass {
            return Err(Error::input(format!(
                "extracted constants fail the Jacobi identity at triple {:?}; the law is invalid or the degree bound is too small",
                jacobi.witnesses[0]
            )));
        }
        Ok(sc)
    }

    pub fn to_json(&self) -> LawJson {
        LawJson {
            dimension: self.dimension,
            ring: self.ring,
            degree_bound: self.degree_bound,
            components: self.components.iter().map(TruncSeries::to_json).collect(),
        }
    }

    pub fn from_json(json: &LawJson) -> Result<FormalGroupLaw> {
        let components = json
            .components
            .iter()
            .map(|c| TruncSeries::from_json(json.ring, c))
            .collect::<Result<Vec<_>>>()?;
        FormalGroupLaw::new(json.ring, json.dimension, json.degree_bound, components)
    }
}

/// Serialized law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawJson {
    pub dimension: usize,
    pub ring: Ring,
    pub degree_bound: u32,
    pub components: Vec<SeriesJson>,
}

/// First monomial where two series differ, rendered for reports.
fn first_difference(a: &TruncSeries, b: &TruncSeries) -> Option<String> {
    let mut monomials: Vec<&Monomial> = a.iter().map(|(m, _)| m).collect();
    monomials.extend(b.iter().map(|(m, _)| m));
    monomials.sort();
    monomials.dedup();
    for m in monomials {
        let ca = a.coefficient(m);
        let cb = b.coefficient(m);
        if ca != cb {
            return Some(format!("coefficient of {m} is {ca}, expected {cb}"));
        }
    }
    None
}

/// Solve `A x = b` over any coefficient ring by Gaussian elimination with
/// unit pivots (a pivot must be invertible; rows are swapped to find one).
pub fn solve_linear(
    ring: Ring,
    mut a: Vec<Vec<Coefficient>>,
    mut b: Vec<Coefficient>,
) -> Result<Vec<Coefficient>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::shape("linear system must be square"));
    }
    for col in 0..n {
        let mut pivot = None;
        for (r, row) in a.iter().enumerate().skip(col) {
            if let Ok(inv) = row[col].invert() {
                pivot = Some((r, inv));
                break;
            }
        }
        let Some((r, inv)) = pivot else {
            return Err(Error::InexactDivision(format!(
                "no unit pivot in column {} of the linear system",
                col + 1
            )));
        };
        a.swap(col, r);
        b.swap(col, r);
        for j in 0..n {
            a[col][j] = a[col][j].mul(&inv)?;
        }
        b[col] = b[col].mul(&inv)?;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub(&f.mul(&a[col][j])?)?;
            }
            b[r] = b[r].sub(&f.mul(&b[col])?)?;
        }
    }
    let _ = ring;
    Ok(b)
}

/// Strictly-upper-triangular positions of an `n×n` matrix in the order used
/// by the unitriangular law: sorted by diagonal distance `j - i`, then by
/// `i` (1-based pairs).
pub fn unitriangular_positions(n: usize) -> Vec<(usize, usize)> {
    let mut positions: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    positions.sort_by_key(|&(i, j)| (j - i, i));
    positions
}

/// Construct a catalog law by name: `additive[:d]`, `multiplicative`,
/// `heisenberg`, or `unitriangular:n`.
pub fn builtin_law(name: &str, ring: Ring, degree_bound: u32) -> Result<FormalGroupLaw> {
    let (kind, param) = match name.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (name, None),
    };
    let parse_param = |p: Option<&str>, default: usize| -> Result<usize> {
        match p {
            None => Ok(default),
            Some(s) => s
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::input(format!("bad numeric parameter {s:?} in law name {name:?}"))),
        }
    };
    match kind {
        "additive" => {
            let d = parse_param(param, 1)?;
            if degree_bound < 1 {
                return Err(Error::input("the additive law needs degree bound >= 1"));
            }
            let components = (0..d)
                .map(|k| {
                    let x = TruncSeries::variable(ring, 2 * d, degree_bound, k);
                    let y = TruncSeries::variable(ring, 2 * d, degree_bound, d + k);
                    x.add(&y)
                })
                .collect::<Result<Vec<_>>>()?;
            FormalGroupLaw::new(ring, d, degree_bound, components)
        }
        "multiplicative" => {
            if param.is_some() {
                return Err(Error::input("the multiplicative law takes no parameter"));
            }
            if degree_bound < 2 {
                return Err(Error::input("the multiplicative law needs degree bound >= 2"));
            }
            let x = TruncSeries::variable(ring, 2, degree_bound, 0);
            let y = TruncSeries::variable(ring, 2, degree_bound, 1);
            let f = x.add(&y)?.add(&x.mul(&y)?)?;
            FormalGroupLaw::new(ring, 1, degree_bound, vec![f])
        }
        "heisenberg" => {
            if param.is_some() {
                return Err(Error::input("the heisenberg law takes no parameter"));
            }
            builtin_unitriangular(3, ring, degree_bound)
        }
        "unitriangular" => {
            let n = parse_param(param, 0)?;
            if !(2..=8).contains(&n) {
                return Err(Error::input(
                    "unitriangular:n needs a matrix size n between 2 and 8",
                ));
            }
            builtin_unitriangular(n, ring, degree_bound)
        }
        _ => Err(Error::UnknownName(format!("unknown law {name:?}"))),
    }
}

/// The law of the group of `n×n` unitriangular matrices `1 + X`, read off
/// from `(1 + X)(1 + Y) = 1 + X + Y + XY` in the coordinates given by
/// [`unitriangular_positions`].
fn builtin_unitriangular(n: usize, ring: Ring, degree_bound: u32) -> Result<FormalGroupLaw> {
    if degree_bound < 2 && n > 2 {
        return Err(Error::input(
            "the unitriangular law has quadratic terms; degree bound must be >= 2",
        ));
    }
    let positions = unitriangular_positions(n);
    let d = positions.len();
    let index = |i: usize, j: usize| -> usize {
        positions
            .iter()
            .position(|&p| p == (i, j))
            .expect("strictly upper position")
    };
    let components = positions
        .iter()
        .map(|&(i, j)| {
            let mut f = TruncSeries::variable(ring, 2 * d, degree_bound, index(i, j)).add(
                &TruncSeries::variable(ring, 2 * d, degree_bound, d + index(i, j)),
            )?;
            for k in (i + 1)..j {
                let x = TruncSeries::variable(ring, 2 * d, degree_bound, index(i, k));
                let y = TruncSeries::variable(ring, 2 * d, degree_bound, d + index(k, j));
                f = f.add(&x.mul(&y)?)?;
            }
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    FormalGroupLaw::new(ring, d, degree_bound, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Subspace;

    fn q() -> Ring {
        Ring::Rational
    }

    fn qc(n: i64) -> Coefficient {
        Coefficient::from_integer(q(), n)
    }

    #[test]
    fn multiplicative_shape() {
        let law = builtin_law("multiplicative", q(), 3).unwrap();
        assert_eq!(law.dimension(), 1);
        let f = &law.components()[0];
        assert_eq!(f.len(), 3);
        assert_eq!(f.coefficient(&Monomial(vec![1, 0])), qc(1));
        assert_eq!(f.coefficient(&Monomial(vec![0, 1])), qc(1));
        assert_eq!(f.coefficient(&Monomial(vec![1, 1])), qc(1));
    }

    #[test]
    fn heisenberg_shape() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        assert_eq!(law.dimension(), 3);
        // Third component: x3 + y3 + x1*y2.
        let f3 = &law.components()[2];
        assert_eq!(f3.len(), 3);
        assert_eq!(f3.coefficient(&Monomial(vec![0, 0, 1, 0, 0, 0])), qc(1));
        assert_eq!(f3.coefficient(&Monomial(vec![0, 0, 0, 0, 0, 1])), qc(1));
        assert_eq!(f3.coefficient(&Monomial(vec![1, 0, 0, 0, 1, 0])), qc(1));
        // heisenberg is unitriangular:3 by construction.
        let ut3 = builtin_law("unitriangular:3", q(), 4).unwrap();
        assert_eq!(law, ut3);
    }

    #[test]
    fn unitriangular_position_order() {
        assert_eq!(
            unitriangular_positions(4),
            [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]
        );
        let law = builtin_law("unitriangular:4", q(), 4).unwrap();
        assert_eq!(law.dimension(), 6);
        // Component for (1,3) (index 3): x4 + y4 + x1*y2.
        let f = &law.components()[3];
        let mut expected_mixed = Monomial(vec![0; 12]);
        expected_mixed.0[0] = 1; // x_(1,2)
        expected_mixed.0[6 + 1] = 1; // y_(2,3)
        assert_eq!(f.coefficient(&expected_mixed), qc(1));
        // Component for (1,4) (index 5): x6 + y6 + x1*y5 + x4*y3.
        let f = &law.components()[5];
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn axioms_pass_for_builtins() {
        for name in ["additive:2", "multiplicative", "heisenberg", "unitriangular:4"] {
            let law = builtin_law(name, q(), 4).unwrap();
            let report = law.check_axioms().unwrap();
            assert!(report.pass, "{name}: {:?}", report.failure);
        }
    }

    #[test]
    fn corrupted_law_fails_identity() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let mut components = law.components().to_vec();
        // Add x1^2 to the third component: breaks F(x, 0) = x.
        let mut bad = Monomial(vec![0; 6]);
        bad.0[0] = 2;
        let mut f3 = components[2].clone();
        f3.set_coefficient(bad, qc(1)).unwrap();
        components[2] = f3;
        let law = FormalGroupLaw::new(q(), 3, 4, components).unwrap();
        let report = law.check_axioms().unwrap();
        assert!(!report.identity_pass);
        assert!(report.failure.unwrap().contains("F_3(x, 0)"));
    }

    #[test]
    fn lie_extraction() {
        // Multiplicative: commutative, so the bracket vanishes.
        let law = builtin_law("multiplicative", q(), 4).unwrap();
        let sc = law.lie_constants().unwrap();
        assert_eq!(sc, StructureConstants::abelian(1));

        // Additive: abelian in any dimension.
        let law = builtin_law("additive:3", q(), 4).unwrap();
        assert_eq!(law.lie_constants().unwrap(), StructureConstants::abelian(3));

        // Heisenberg: [e1, e2] = e3.
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        assert_eq!(law.lie_constants().unwrap(), StructureConstants::heisenberg());

        // unitriangular:4: nilpotent of class 3.
        let law = builtin_law("unitriangular:4", q(), 4).unwrap();
        let sc = law.lie_constants().unwrap();
        assert!(sc.check_jacobi().pass);
        assert_eq!(sc.nilpotency_class(&Subspace::whole(6)), Some(3));
    }

    #[test]
    fn multiplication_and_inverse_multiplicative() {
        let law = builtin_law("multiplicative", q(), 4).unwrap();
        let x = law.point_from_integers(&[3]).unwrap();
        let y = law.point_from_integers(&[4]).unwrap();
        let xy = law.multiply(&x, &y).unwrap();
        assert_eq!(xy.coordinates()[0], qc(19)); // 3 + 4 + 12

        // Inverse of a is -a/(1+a).
        let inv = law.inverse(&x).unwrap();
        assert_eq!(
            inv.coordinates()[0],
            Coefficient::from_rational(q(), BigRational::new((-3).into(), 4.into())).unwrap()
        );
        assert!(law.multiply(&x, &inv).unwrap().is_identity());
        assert!(law.multiply(&inv, &x).unwrap().is_identity());
    }

    #[test]
    fn heisenberg_inverse_closed_form() {
        let law = builtin_law("heisenberg", q(), 4).unwrap();
        let x = law.point_from_integers(&[3, -6, 2]).unwrap();
        let inv = law.inverse(&x).unwrap();
        // (a, b, c)^{-1} = (-a, -b, -c + ab).
        assert_eq!(inv.coordinates()[0], qc(-3));
        assert_eq!(inv.coordinates()[1], qc(6));
        assert_eq!(inv.coordinates()[2], qc(-20));
        assert!(law.multiply(&x, &inv).unwrap().is_identity());
        assert!(law.multiply(&inv, &x).unwrap().is_identity());
    }

    #[test]
    fn group_product_is_associative_on_points() {
        let law = builtin_law("unitriangular:4", q(), 4).unwrap();
        let x = law.point_from_integers(&[1, -2, 3, 4, 0, -1]).unwrap();
        let y = law.point_from_integers(&[0, 5, -3, 2, 2, 2]).unwrap();
        let z = law.point_from_integers(&[-4, 1, 1, 0, -3, 7]).unwrap();
        let lhs = law.multiply(&law.multiply(&x, &y).unwrap(), &z).unwrap();
        let rhs = law.multiply(&x, &law.multiply(&y, &z).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn padic_points_and_inverse() {
        let ring = Ring::padic(3, 5);
        let law = builtin_law("heisenberg", ring, 4).unwrap();
        let x = law.point_from_integers(&[3, 6, 9]).unwrap();
        assert_eq!(x.level_at(3).unwrap(), Valuation::Finite(1));
        let inv = law.inverse(&x).unwrap();
        assert!(law.multiply(&x, &inv).unwrap().is_identity());

        // Unit coordinates are rejected: not in the maximal ideal.
        let err = law.point_from_integers(&[1, 3, 3]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn unknown_law_name() {
        let err = builtin_law("elliptic", q(), 4).unwrap_err();
        assert!(matches!(err, Error::UnknownName(_)), "{err}");
        let err = builtin_law("unitriangular:1", q(), 4).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
    }

    #[test]
    fn law_json_round_trip() {
        let law = builtin_law("heisenberg", Ring::padic(3, 4), 4).unwrap();
        let j = law.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let parsed: LawJson = serde_json::from_str(&text).unwrap();
        let back = FormalGroupLaw::from_json(&parsed).unwrap();
        assert_eq!(back, law);
    }

    #[test]
    fn linear_solver_handles_row_swaps() {
        // First pivot is zero: rows must be swapped.
        let a = vec![
            vec![qc(0), qc(2)],
            vec![qc(1), qc(1)],
        ];
        let b = vec![qc(4), qc(3)];
        let x = solve_linear(q(), a, b).unwrap();
        assert_eq!(x, vec![qc(1), qc(2)]);
    }

    #[test]
    fn reinterpretation_widens_precision() {
        let law = builtin_law("heisenberg", Ring::padic(3, 4), 4).unwrap();
        let wide = law.reinterpret_in(Ring::padic(3, 9)).unwrap();
        assert_eq!(wide.ring(), Ring::padic(3, 9));
        assert!(wide.check_axioms().unwrap().pass);
    }
}
