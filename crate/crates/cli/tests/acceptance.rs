//! End-to-end acceptance checks.
//!
//! Each test exercises one shipped guarantee at desk scale and prints a
//! single `criterion N: PASS/FAIL` line (run with `--nocapture` to see all
//! nine).  Everything is exact: rational equality or p-adic congruence at
//! the full stored precision, zero tolerance.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use grouplaw::bch::{ad_exp, audit_valuations, bch_eval, bch_series, vectors_equal, AUDIT_PRIMES};
use grouplaw::coeff::{Coefficient, Ring};
use grouplaw::freelie::LyndonWord;
use grouplaw::law::{builtin_law, FormalGroupLaw};
use grouplaw::liealg::{RationalMatrix, StructureConstants, Subspace};
use grouplaw::operator::{
    adjoint_action, group_exp, group_log, invariant_derivation, leibniz_defect, operator_exp,
    operator_log, phi, right_translation, MonomialBasis,
};
use grouplaw::series::TruncSeries;
use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, pass: bool, what: &str, start: Instant) -> bool {
    println!(
        "criterion {criterion}: {} — {what} ({:.2?})",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    pass
}

// ---------------------------------------------------------------------------
// 1. The Lyndon-basis BCH table evaluated on strictly-upper-triangular
//    rational matrices equals log(e^X e^Y) from terminating matrix series.

fn strict_upper(rng: &mut ChaCha8Rng, size: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(size, size);
    for i in 0..size {
        for j in (i + 1)..size {
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=4);
            *m.get_mut(i, j) = BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    }
    m
}

fn matrix_exp(x: &RationalMatrix) -> RationalMatrix {
    let n = x.rows();
    let mut sum = RationalMatrix::identity(n);
    let mut term = RationalMatrix::identity(n);
    for i in 1..=n as i64 {
        term = term.mul(x).scale(&BigRational::new(BigInt::one(), BigInt::from(i)));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

fn matrix_log(p: &RationalMatrix) -> RationalMatrix {
    let n = p.rows();
    let shifted = p.sub(&RationalMatrix::identity(n));
    let mut sum = RationalMatrix::zeros(n, n);
    let mut power = shifted.clone();
    for i in 1..=n as i64 {
        if power.is_zero() {
            break;
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        sum = sum.add(&power.scale(&BigRational::new(BigInt::from(sign), BigInt::from(i))));
        power = power.mul(&shifted);
    }
    sum
}

fn word_matrix<'a>(
    w: &'a LyndonWord,
    x: &RationalMatrix,
    y: &RationalMatrix,
    memo: &mut HashMap<Vec<u8>, RationalMatrix>,
) -> RationalMatrix {
    if let Some(m) = memo.get(w.letters()) {
        return m.clone();
    }
    let m = match w.standard_factorization() {
        None => {
            if w.letters()[0] == 1 {
                x.clone()
            } else {
                y.clone()
            }
        }
        Some((u, v)) => {
            let a = word_matrix(&u, x, y, memo);
            let b = word_matrix(&v, x, y, memo);
            a.mul(&b).sub(&b.mul(&a))
        }
    };
    memo.insert(w.letters().to_vec(), m.clone());
    m
}

#[test]
fn criterion_1_bch_table_matches_the_matrix_logarithm_oracle() {
    let start = Instant::now();
    // Strictly upper triangular matrices of size <= 6 kill every bracket of
    // degree >= 6, so the degree-5 table is exact for them.
    let table = bch_series(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut pass = true;
    for trial in 0..100u64 {
        let size = 3 + (trial % 4) as usize;
        let x = strict_upper(&mut rng, size);
        let y = strict_upper(&mut rng, size);

        let mut memo = HashMap::new();
        let mut lhs = RationalMatrix::zeros(size, size);
        for (w, c) in table.series().iter() {
            let lambda = c.to_rational_lift().unwrap();
            lhs = lhs.add(&word_matrix(w, &x, &y, &mut memo).scale(&lambda));
        }

        let rhs = matrix_log(&matrix_exp(&x).mul(&matrix_exp(&y)));
        pass &= lhs.sub(&rhs).is_zero();
    }
    assert!(report(
        1,
        pass,
        "BCH series on 100 strictly-upper-triangular rational pairs equals log(e^X e^Y) exactly",
        start
    ));
}

// ---------------------------------------------------------------------------
// 2. Denominator valuations of the degree-10 table.

#[test]
fn criterion_2_valuation_audit_through_degree_10() {
    let start = Instant::now();
    let table = bch_series(10).unwrap();
    let audit = audit_valuations(table.series(), &AUDIT_PRIMES).unwrap();
    let violations: usize = audit.primes.iter().map(|a| a.violations.len()).sum();
    let pass = audit.pass && violations == 0;
    assert!(report(
        2,
        pass,
        "every degree-10 table coefficient satisfies v_p >= -(n-1)/(p-1) for p in {2,3,5,7}",
        start
    ));
}

// ---------------------------------------------------------------------------
// 3. Group-law axioms at degree 8.

#[test]
fn criterion_3_builtin_laws_satisfy_the_axioms_at_degree_8() {
    let start = Instant::now();
    let mut pass = true;
    for name in ["additive", "multiplicative", "heisenberg", "unitriangular:4"] {
        let law = builtin_law(name, Ring::Rational, 8).unwrap();
        let axioms = law.check_axioms().unwrap();
        pass &= axioms.identity_pass && axioms.associativity_pass && axioms.pass;
    }
    assert!(report(
        3,
        pass,
        "additive, multiplicative, heisenberg, unitriangular:4 pass identity and associativity at D = 8",
        start
    ));
}

// ---------------------------------------------------------------------------
// 4. Derivations represent the extracted Lie algebra, and phi inverts psi.

fn unit_vector(ring: Ring, d: usize, j: usize) -> Vec<Coefficient> {
    let mut e = vec![Coefficient::zero(ring); d];
    e[j] = Coefficient::one(ring);
    e
}

fn rational_units(d: usize, j: usize) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); d];
    e[j] = BigRational::one();
    e
}

#[test]
fn criterion_4_derivations_represent_the_lie_algebra_at_degree_6() {
    let start = Instant::now();
    let ring = Ring::Rational;
    let mut pass = true;
    for name in ["heisenberg", "unitriangular:4"] {
        let law = builtin_law(name, ring, 6).unwrap();
        let d = law.dimension();
        let sc = law.lie_constants().unwrap();
        let psis: Vec<_> = (0..d)
            .map(|j| invariant_derivation(&law, &unit_vector(ring, d, j)).unwrap())
            .collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = psis[i].bracket(&psis[j]).unwrap();
                let c = sc.bracket(&rational_units(d, i), &rational_units(d, j));
                let coeffs: Vec<Coefficient> = c
                    .into_iter()
                    .map(|q| Coefficient::from_rational(ring, q).unwrap())
                    .collect();
                let rhs = invariant_derivation(&law, &coeffs).unwrap();
                pass &= lhs == rhs;
            }
        }
        for (j, psi) in psis.iter().enumerate() {
            pass &= vectors_equal(&phi(psi).unwrap(), &unit_vector(ring, d, j));
        }
    }
    assert!(report(
        4,
        pass,
        "[psi(e_i), psi(e_j)] = psi(C(e_i,e_j)) and phi(psi(e_j)) = e_j for heisenberg and unitriangular:4 at D = 6",
        start
    ));
}

// ---------------------------------------------------------------------------
// 5. The group logarithm turns products into the BCH series and the
//    exponential inverts it, over both coefficient backends.

fn rational_lattice_point(
    law: &FormalGroupLaw,
    rng: &mut ChaCha8Rng,
    scale: i64,
) -> Vec<Coefficient> {
    (0..law.dimension())
        .map(|_| {
            let k: i64 = rng.gen_range(-5..=5);
            Coefficient::from_integer(law.ring(), scale * k)
        })
        .collect()
}

fn padic_lattice_point(
    law: &FormalGroupLaw,
    rng: &mut ChaCha8Rng,
    p: u64,
    precision: u32,
    scale: u64,
) -> Vec<Coefficient> {
    (0..law.dimension())
        .map(|_| {
            let mut residue = BigInt::zero();
            let mut power = BigInt::one();
            for _ in 0..precision {
                residue += BigInt::from(rng.gen_range(0..p)) * &power;
                power *= p;
            }
            Coefficient::from_integer(law.ring(), BigInt::from(scale) * residue)
        })
        .collect()
}

fn guaranteed_at_least(coords: &[Coefficient], n: u32) -> bool {
    coords
        .iter()
        .all(|c| c.guaranteed_precision().map_or(true, |g| g >= n as i64))
}

#[test]
fn criterion_5_group_log_is_a_bch_isomorphism_on_the_lattice() {
    let start = Instant::now();
    let mut pass = true;
    for (p, scale) in [(3u64, 3u64), (2u64, 4u64)] {
        // Rational backend: exact equality.
        let law = builtin_law("heisenberg", Ring::Rational, 6).unwrap();
        let sc = law.lie_constants().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1005 + p);
        for _ in 0..50 {
            let x = law.point(rational_lattice_point(&law, &mut rng, scale as i64)).unwrap();
            let y = law.point(rational_lattice_point(&law, &mut rng, scale as i64)).unwrap();
            let xy = law.multiply(&x, &y).unwrap();
            let lx = group_log(&law, &x).unwrap();
            let ly = group_log(&law, &y).unwrap();
            let lxy = group_log(&law, &xy).unwrap();
            let bch = bch_eval(&sc, Ring::Rational, &lx, &ly, 6).unwrap();
            pass &= vectors_equal(&lxy, &bch);
            let back = group_exp(&law, &lx).unwrap();
            pass &= vectors_equal(back.coordinates(), x.coordinates());
        }

        // p-adic backend at N = 8: congruence mod p^8, with the stored
        // precision certified to reach it.
        let ring = Ring::PAdic { p, precision: 8 };
        let law = builtin_law("heisenberg", ring, 6).unwrap();
        let sc = law.lie_constants().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2005 + p);
        for _ in 0..50 {
            let x = law.point(padic_lattice_point(&law, &mut rng, p, 8, scale)).unwrap();
            let y = law.point(padic_lattice_point(&law, &mut rng, p, 8, scale)).unwrap();
            let xy = law.multiply(&x, &y).unwrap();
            let lx = group_log(&law, &x).unwrap();
            let ly = group_log(&law, &y).unwrap();
            let lxy = group_log(&law, &xy).unwrap();
            let bch = bch_eval(&sc, ring, &lx, &ly, 6).unwrap();
            pass &= guaranteed_at_least(&lxy, 8) && guaranteed_at_least(&bch, 8);
            pass &= vectors_equal(&lxy, &bch);
            let back = group_exp(&law, &lx).unwrap();
            pass &= guaranteed_at_least(back.coordinates(), 8);
            pass &= vectors_equal(back.coordinates(), x.coordinates());
        }
    }
    assert!(report(
        5,
        pass,
        "heisenberg log(x·y) = BCH(log x, log y) and exp(log x) = x for 50 seeded pairs per lattice, rational exactly and p-adic mod p^8",
        start
    ));
}

// ---------------------------------------------------------------------------
// 6. The operator logarithm is a derivation on the jet space and the
//    operator exponential restores the translation.

fn leibniz_holds_on_all_pairs(
    w: &grouplaw::operator::TruncOperator,
    basis: &MonomialBasis,
) -> bool {
    let ring = w.ring();
    let nvars = basis.nvars();
    let bound = basis.degree_bound();
    let series_of = |i: usize| {
        TruncSeries::from_terms(
            ring,
            nvars,
            bound,
            [(basis.monomial(i).clone(), Coefficient::one(ring))],
        )
        .unwrap()
    };
    for i in 0..basis.len() {
        let di = basis.monomial(i).degree();
        for j in i..basis.len() {
            // Pairs whose product escapes the degree bound state nothing
            // about the jet space and are skipped.
            if di + basis.monomial(j).degree() > bound {
                continue;
            }
            let defect = leibniz_defect(w, &series_of(i), &series_of(j)).unwrap();
            if !defect.is_zero() {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_6_operator_log_is_a_derivation_and_exp_restores_the_translation() {
    let start = Instant::now();
    let mut pass = true;

    // Nilpotent law over the rationals: everything exact.
    let law = builtin_law("heisenberg", Ring::Rational, 5).unwrap();
    let basis = MonomialBasis::shared(law.dimension(), 5);
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for _ in 0..50 {
        let x = law.point(rational_lattice_point(&law, &mut rng, 3)).unwrap();
        let rho = right_translation(&law, &x).unwrap();
        let w = operator_log(&rho).unwrap();
        pass &= leibniz_holds_on_all_pairs(&w, &basis);
        pass &= operator_exp(&w).unwrap() == rho;
    }

    // Non-nilpotent law over p-adic coefficients: the series converge on
    // the lattice and agree at the full stored precision.
    let ring = Ring::PAdic { p: 3, precision: 8 };
    let law = builtin_law("multiplicative", ring, 5).unwrap();
    let basis = MonomialBasis::shared(law.dimension(), 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2006);
    for _ in 0..50 {
        let x = law.point(padic_lattice_point(&law, &mut rng, 3, 8, 3)).unwrap();
        let rho = right_translation(&law, &x).unwrap();
        let w = operator_log(&rho).unwrap();
        pass &= leibniz_holds_on_all_pairs(&w, &basis);
        pass &= operator_exp(&w).unwrap() == rho;
    }

    assert!(report(
        6,
        pass,
        "operator_log(rho_x) satisfies Leibniz on every in-bound basis-monomial pair of the degree-5 jet space and operator_exp restores rho_x (50 seeded trials, heisenberg and multiplicative)",
        start
    ));
}

// ---------------------------------------------------------------------------
// 7. Conjugating an invariant derivation equals the adjoint exponential.

#[test]
fn criterion_7_adjoint_action_matches_the_adjoint_exponential() {
    let start = Instant::now();
    let ring = Ring::Rational;
    let law = builtin_law("heisenberg", ring, 6).unwrap();
    let d = law.dimension();
    let sc = law.lie_constants().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut pass = true;
    for _ in 0..20 {
        let x = law.point(rational_lattice_point(&law, &mut rng, 1)).unwrap();
        let a = group_log(&law, &x).unwrap();
        for j in 0..d {
            let e_j = unit_vector(ring, d, j);
            let w = invariant_derivation(&law, &e_j).unwrap();
            let lhs = adjoint_action(&law, &x, &w).unwrap();
            let c = ad_exp(&sc, ring, &a, &e_j).unwrap();
            let rhs = invariant_derivation(&law, &c).unwrap();
            pass &= lhs == rhs;
        }
    }
    assert!(report(
        7,
        pass,
        "adjoint_action(x, psi(b)) = psi(e^{ad log x} b) for all basis b and 20 seeded heisenberg points, exactly",
        start
    ));
}

// ---------------------------------------------------------------------------
// 8. Radical analysis distinguishes semisimple, nilpotent, and
//    non-nilpotent-solvable inputs.

#[test]
fn criterion_8_radical_analysis_classifies_the_reference_algebras() {
    let start = Instant::now();
    let mut pass = true;

    let sl2 = StructureConstants::sl2();
    let r = sl2.radical_nilpotency_report().unwrap();
    pass &= r.radical.dimension() == 0 && r.status == grouplaw::liealg::RadicalStatus::Pass;

    let heis = StructureConstants::heisenberg();
    let r = heis.radical_nilpotency_report().unwrap();
    pass &= r.radical.dimension() == 3
        && r.radical_is_nilpotent
        && r.status == grouplaw::liealg::RadicalStatus::Pass;

    let affine = StructureConstants::affine_line();
    let r = affine.radical_nilpotency_report().unwrap();
    pass &= !r.radical_is_nilpotent && r.status == grouplaw::liealg::RadicalStatus::Flag;

    let sum = sl2.direct_sum(&heis);
    let r = sum.radical_nilpotency_report().unwrap();
    let summand = Subspace::from_spanning(
        6,
        (3..6).map(|j| rational_units(6, j)).collect(),
    );
    pass &= r.status == grouplaw::liealg::RadicalStatus::Pass
        && r.radical.dimension() == 3
        && r.radical.contains_subspace(&summand)
        && summand.contains_subspace(&r.radical);

    assert!(report(
        8,
        pass,
        "sl2 has zero radical, heisenberg passes, [x,y]=y flags, and sl2 (+) heisenberg passes with the heisenberg summand as radical",
        start
    ));
}

// ---------------------------------------------------------------------------
// 9. Verification runs are deterministic byte for byte.

#[test]
fn criterion_9_identical_seeded_runs_emit_byte_identical_json() {
    let start = Instant::now();
    let mut pass = true;
    let arg_sets: [&[&str]; 2] = [
        &[
            "law", "explog-verify", "--law", "heisenberg", "--prime", "3", "--precision", "8",
            "--trials", "10", "--seed", "42", "--format", "json",
        ],
        &["bch", "table", "--degree", "6", "--format", "json"],
    ];
    for args in arg_sets {
        let run = |args: &[&str]| {
            Command::new(env!("CARGO_BIN_EXE_grouplaw"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let first = run(args);
        let second = run(args);
        pass &= first.status.code() == Some(0);
        pass &= first.stdout == second.stdout && !first.stdout.is_empty();
    }
    assert!(report(
        9,
        pass,
        "two runs of a verification subcommand with identical flags and seed are byte-identical",
        start
    ));
}
