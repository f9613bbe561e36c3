//! Seeded verification suites behind `law explog-verify`,
//! `law adjoint-verify`, and `law unipotent`.
//!
//! Each suite samples group points from the level lattice, checks the
//! relevant identities exactly in the law's coefficient ring, and reports
//! per-identity failure counts; it passes only with zero failures.  The
//! seed fully determines every sampled point and monomial pair, so reports
//! are reproducible byte for byte.

use grouplaw::bch::{ad_exp, bch_eval, vectors_equal};
use grouplaw::coeff::Coefficient;
use grouplaw::law::FormalGroupLaw;
use grouplaw::operator::{
    adjoint_action, conjugation_operator, group_exp, group_log, invariant_derivation,
    is_unipotent, leibniz_defect, operator_exp, operator_log, right_translation, MonomialBasis,
};
use grouplaw::series::TruncSeries;
use grouplaw::Error;
use serde::Serialize;

use crate::input::CliError;
use crate::sample::PointSampler;

/// How many random monomial pairs the Leibniz check draws per trial, on
/// top of all variable pairs.
const LEIBNIZ_PAIRS_PER_TRIAL: usize = 20;

fn lib_err(context: &str, e: Error) -> CliError {
    match e {
        Error::NoTermination(msg) => CliError::new(format!(
            "{context}: {msg}; over the rational backend the operator series \
             only terminates for nilpotent laws — select a p-adic ring with \
             --prime and --precision"
        )),
        other => CliError::new(format!("{context}: {other}")),
    }
}

/// Report of the exp/log correspondence suite: the logarithm turns group
/// multiplication into the BCH series, the exponential inverts it, the
/// operator exponential of the operator logarithm restores the translation,
/// and the operator logarithm acts as a derivation.
#[derive(Debug, Serialize)]
pub struct ExplogReport {
    pub law: String,
    pub dimension: usize,
    pub degree_bound: u32,
    pub trials: u32,
    pub seed: u64,
    pub scale: u64,
    pub bound: i64,
    pub log_of_product_failures: u32,
    pub exp_log_roundtrip_failures: u32,
    pub operator_roundtrip_failures: u32,
    pub leibniz_failures: u32,
    pub leibniz_pairs_checked: u64,
    pub pass: bool,
}

pub fn explog_verify(
    law: &FormalGroupLaw,
    law_name: &str,
    trials: u32,
    seed: u64,
    scale: u64,
    bound: i64,
) -> Result<ExplogReport, CliError> {
    let ring = law.ring();
    let d = law.dimension();
    let degree = law.degree_bound();
    let sc = law
        .lie_constants()
        .map_err(|e| lib_err("--law: cannot extract structure constants", e))?;
    let basis = MonomialBasis::shared(d, degree);

    // Monomial pairs whose product still fits under the degree bound; only
    // those state a Leibniz identity about the jet space.
    let mut admissible: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        let di = basis.monomial(i).degree();
        if di == 0 {
            continue;
        }
        for j in i..basis.len() {
            let dj = basis.monomial(j).degree();
            if dj >= 1 && di + dj <= degree {
                admissible.push((i, j));
            }
        }
    }
    let variable_pairs: Vec<(usize, usize)> = admissible
        .iter()
        .copied()
        .filter(|&(i, j)| basis.monomial(i).degree() == 1 && basis.monomial(j).degree() == 1)
        .collect();
    let monomial_series = |i: usize| -> Result<TruncSeries, CliError> {
        TruncSeries::from_terms(
            ring,
            d,
            degree,
            [(basis.monomial(i).clone(), Coefficient::one(ring))],
        )
        .map_err(|e| lib_err("internal basis monomial", e))
    };

    let mut sampler = PointSampler::new(ring, scale, bound, seed);
    let mut log_of_product_failures = 0;
    let mut exp_log_roundtrip_failures = 0;
    let mut operator_roundtrip_failures = 0;
    let mut leibniz_failures = 0;
    let mut leibniz_pairs_checked = 0u64;

    for _ in 0..trials {
        let x = law
            .point(sampler.coordinates(d))
            .map_err(|e| lib_err("sampled point", e))?;
        let y = law
            .point(sampler.coordinates(d))
            .map_err(|e| lib_err("sampled point", e))?;

        let xy = law.multiply(&x, &y).map_err(|e| lib_err("product", e))?;
        let log_x = group_log(law, &x).map_err(|e| lib_err("group logarithm", e))?;
        let log_y = group_log(law, &y).map_err(|e| lib_err("group logarithm", e))?;
        let log_xy = group_log(law, &xy).map_err(|e| lib_err("group logarithm", e))?;
        let bch = bch_eval(&sc, ring, &log_x, &log_y, degree)
            .map_err(|e| lib_err("BCH evaluation", e))?;
        if !vectors_equal(&log_xy, &bch) {
            log_of_product_failures += 1;
        }

        let back = group_exp(law, &log_x).map_err(|e| lib_err("group exponential", e))?;
        if !vectors_equal(back.coordinates(), x.coordinates()) {
            exp_log_roundtrip_failures += 1;
        }

        let rho = right_translation(law, &x).map_err(|e| lib_err("translation", e))?;
        let w = operator_log(&rho).map_err(|e| lib_err("operator logarithm", e))?;
        let restored = operator_exp(&w).map_err(|e| lib_err("operator exponential", e))?;
        if restored != rho {
            operator_roundtrip_failures += 1;
        }

        let mut pairs: Vec<(usize, usize)> = variable_pairs.clone();
        for _ in 0..LEIBNIZ_PAIRS_PER_TRIAL.min(admissible.len()) {
            pairs.push(admissible[sampler.pick(admissible.len())]);
        }
        for (i, j) in pairs {
            let f = monomial_series(i)?;
            let g = monomial_series(j)?;
            let defect =
                leibniz_defect(&w, &f, &g).map_err(|e| lib_err("Leibniz defect", e))?;
            leibniz_pairs_checked += 1;
            if !defect.is_zero() {
                leibniz_failures += 1;
            }
        }
    }

    let pass = log_of_product_failures == 0
        && exp_log_roundtrip_failures == 0
        && operator_roundtrip_failures == 0
        && leibniz_failures == 0;
    Ok(ExplogReport {
        law: law_name.to_string(),
        dimension: d,
        degree_bound: degree,
        trials,
        seed,
        scale,
        bound,
        log_of_product_failures,
        exp_log_roundtrip_failures,
        operator_roundtrip_failures,
        leibniz_failures,
        leibniz_pairs_checked,
        pass,
    })
}

impl ExplogReport {
    pub fn text(&self) -> String {
        format!(
            "exp/log verification: law {} (dimension {}, degree bound {})\n\
             trials: {}  seed: {}  scale: {}  bound: {}\n\
             log of product vs BCH failures: {}\n\
             exp(log x) = x failures: {}\n\
             operator exp(log rho) = rho failures: {}\n\
             Leibniz failures: {} (over {} pairs)\n\
             result: {}\n",
            self.law,
            self.dimension,
            self.degree_bound,
            self.trials,
            self.seed,
            self.scale,
            self.bound,
            self.log_of_product_failures,
            self.exp_log_roundtrip_failures,
            self.operator_roundtrip_failures,
            self.leibniz_failures,
            self.leibniz_pairs_checked,
            verdict(self.pass),
        )
    }
}

/// Report of the adjoint identity suite: conjugating an invariant
/// derivation by a translation equals the derivation of the adjoint
/// exponential applied to its coefficient vector.
#[derive(Debug, Serialize)]
pub struct AdjointReport {
    pub law: String,
    pub dimension: usize,
    pub degree_bound: u32,
    pub trials: u32,
    pub seed: u64,
    pub scale: u64,
    pub bound: i64,
    pub adjoint_failures: u32,
    pub comparisons: u64,
    pub pass: bool,
}

pub fn adjoint_verify(
    law: &FormalGroupLaw,
    law_name: &str,
    trials: u32,
    seed: u64,
    scale: u64,
    bound: i64,
) -> Result<AdjointReport, CliError> {
    let ring = law.ring();
    let d = law.dimension();
    let sc = law
        .lie_constants()
        .map_err(|e| lib_err("--law: cannot extract structure constants", e))?;

    let mut sampler = PointSampler::new(ring, scale, bound, seed);
    let mut adjoint_failures = 0;
    let mut comparisons = 0u64;
    for _ in 0..trials {
        let x = law
            .point(sampler.coordinates(d))
            .map_err(|e| lib_err("sampled point", e))?;
        let a = group_log(law, &x).map_err(|e| lib_err("group logarithm", e))?;
        for j in 0..d {
            let mut e_j = vec![Coefficient::zero(ring); d];
            e_j[j] = Coefficient::one(ring);
            let w = invariant_derivation(law, &e_j)
                .map_err(|e| lib_err("invariant derivation", e))?;
            let lhs =
                adjoint_action(law, &x, &w).map_err(|e| lib_err("adjoint action", e))?;
            let c = ad_exp(&sc, ring, &a, &e_j)
                .map_err(|e| lib_err("adjoint exponential", e))?;
            let rhs = invariant_derivation(law, &c)
                .map_err(|e| lib_err("invariant derivation", e))?;
            comparisons += 1;
            if lhs != rhs {
                adjoint_failures += 1;
            }
        }
    }

    Ok(AdjointReport {
        law: law_name.to_string(),
        dimension: d,
        degree_bound: law.degree_bound(),
        trials,
        seed,
        scale,
        bound,
        adjoint_failures,
        comparisons,
        pass: adjoint_failures == 0,
    })
}

impl AdjointReport {
    pub fn text(&self) -> String {
        format!(
            "adjoint verification: law {} (dimension {}, degree bound {})\n\
             trials: {}  seed: {}  scale: {}  bound: {}\n\
             adjoint identity failures: {} (over {} comparisons)\n\
             result: {}\n",
            self.law,
            self.dimension,
            self.degree_bound,
            self.trials,
            self.seed,
            self.scale,
            self.bound,
            self.adjoint_failures,
            self.comparisons,
            verdict(self.pass),
        )
    }
}

/// Report of the unipotence suite: conjugation acts unipotently on the
/// augmentation quotient `I / I^k`.
#[derive(Debug, Serialize)]
pub struct UnipotentReport {
    pub law: String,
    pub dimension: usize,
    pub degree_bound: u32,
    pub window: u32,
    pub trials: u32,
    pub seed: u64,
    pub scale: u64,
    pub bound: i64,
    pub non_unipotent: u32,
    pub pass: bool,
}

pub fn unipotent_verify(
    law: &FormalGroupLaw,
    law_name: &str,
    trials: u32,
    seed: u64,
    scale: u64,
    bound: i64,
    window: Option<u32>,
) -> Result<UnipotentReport, CliError> {
    let ring = law.ring();
    let d = law.dimension();
    let k = window.unwrap_or(law.degree_bound() + 1);

    let mut sampler = PointSampler::new(ring, scale, bound, seed);
    let mut non_unipotent = 0;
    for _ in 0..trials {
        let x = law
            .point(sampler.coordinates(d))
            .map_err(|e| lib_err("sampled point", e))?;
        let t = conjugation_operator(law, &x).map_err(|e| lib_err("conjugation", e))?;
        let ok = is_unipotent(&t, k).map_err(|e| lib_err("unipotence check", e))?;
        if !ok {
            non_unipotent += 1;
        }
    }

    Ok(UnipotentReport {
        law: law_name.to_string(),
        dimension: d,
        degree_bound: law.degree_bound(),
        window: k,
        trials,
        seed,
        scale,
        bound,
        non_unipotent,
        pass: non_unipotent == 0,
    })
}

impl UnipotentReport {
    pub fn text(&self) -> String {
        format!(
            "unipotence check: law {} (dimension {}, degree bound {})\n\
             window: I/I^{}  trials: {}  seed: {}  scale: {}  bound: {}\n\
             non-unipotent conjugations: {}\n\
             result: {}\n",
            self.law,
            self.dimension,
            self.degree_bound,
            self.window,
            self.trials,
            self.seed,
            self.scale,
            self.bound,
            self.non_unipotent,
            verdict(self.pass),
        )
    }
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
