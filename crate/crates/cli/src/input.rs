//! Flag resolution and input loading.
//!
//! Everything here maps user input to library objects, and every failure is
//! a usage error (exit code 2) whose message names the offending flag.
//! Rules:
//!
//! * `--precision` requires `--prime`; `--t-precision` requires
//!   `--precision`.  A prime alone leaves the coefficients rational and only
//!   sets the sampling scale.
//! * `--law` accepts a builtin name (`additive[:d]`, `multiplicative`,
//!   `heisenberg`, `unitriangular:n`) or a path to a law JSON file.  A file
//!   brings its own ring and degree bound; explicit flags that contradict
//!   them are rejected rather than silently overridden.
//! * Sampled group points live in the level lattice `s·R^d` where `s` is
//!   the convergence scale of the prime (`p` for odd `p`, `4` for `p = 2`),
//!   so membership in the domain of `log` holds by construction.

use std::path::Path;

use grouplaw::coeff::{convergence_scale, parse_coefficient, Coefficient, Ring};
use grouplaw::law::{builtin_law, FormalGroupLaw, GroupPoint, LawJson};
use grouplaw::liealg::{StructureConstants, StructureConstantsJson};

/// A usage or input error: printed to stderr, exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn new(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

/// The ring flags shared by every subcommand that builds coefficients.
#[derive(Debug, Clone, Copy, clap::Args)]
pub struct RingFlags {
    /// Prime p; alone it sets the sampling scale, with --precision it
    /// selects p-adic coefficients.
    #[arg(long)]
    pub prime: Option<u64>,

    /// p-adic absolute precision N (coefficients mod p^N); requires --prime.
    #[arg(long)]
    pub precision: Option<u32>,

    /// Truncation order M of the polynomial variable t (ring
    /// (Z/p^N)[t]/t^M); requires --precision.
    #[arg(long)]
    pub t_precision: Option<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The coefficient ring selected by the flags.
pub fn ring_from_flags(flags: &RingFlags) -> Result<Ring, CliError> {
    if flags.precision.is_some() && flags.prime.is_none() {
        return Err(CliError::new("--precision requires --prime"));
    }
    if flags.t_precision.is_some() && flags.precision.is_none() {
        return Err(CliError::new("--t-precision requires --precision"));
    }
    if let Some(p) = flags.prime {
        if !is_prime(p) {
            return Err(CliError::new(format!("--prime: {p} is not prime")));
        }
    }
    if let Some(n) = flags.precision {
        if n == 0 {
            return Err(CliError::new("--precision must be at least 1"));
        }
    }
    if let Some(m) = flags.t_precision {
        if m == 0 {
            return Err(CliError::new("--t-precision must be at least 1"));
        }
    }
    Ok(match (flags.prime, flags.precision, flags.t_precision) {
        (Some(p), Some(n), Some(m)) => Ring::PAdicT {
            p,
            precision: n,
            t_precision: m,
        },
        (Some(p), Some(n), None) => Ring::PAdic { p, precision: n },
        _ => Ring::Rational,
    })
}

/// The sampling scale: the convergence scale of the prime when one is
/// given, otherwise 1 (plain integer sampling over the rationals).
pub fn sampling_scale(flags: &RingFlags) -> u64 {
    match flags.prime {
        Some(p) => convergence_scale(p),
        None => 1,
    }
}

/// Whether a `--law` value should be treated as a file path rather than a
/// builtin name.
fn looks_like_path(spec: &str) -> bool {
    spec.contains('/') || spec.contains('\\') || spec.ends_with(".json") || Path::new(spec).exists()
}

/// Resolve `--law` to a concrete law: builtin names are constructed in the
/// flag-selected ring at the given degree bound, files are loaded and
/// checked for consistency against any explicit flags.
pub fn resolve_law(
    spec: &str,
    flags: &RingFlags,
    degree: Option<u32>,
) -> Result<FormalGroupLaw, CliError> {
    let default_degree = degree.unwrap_or(6);
    if degree == Some(0) {
        return Err(CliError::new("--degree must be at least 1"));
    }
    if looks_like_path(spec) {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::new(format!("--law: cannot read {spec}: {e}")))?;
        let json: LawJson = serde_json::from_str(&text)
            .map_err(|e| CliError::new(format!("--law: malformed JSON in {spec}: {e}")))?;
        let law = FormalGroupLaw::from_json(&json)
            .map_err(|e| CliError::new(format!("--law: invalid law in {spec}: {e}")))?;
        if flags.prime.is_some() || flags.precision.is_some() || flags.t_precision.is_some() {
            let wanted = ring_from_flags(flags)?;
            if wanted != law.ring() {
                return Err(CliError::new(format!(
                    "--law: the file {spec} uses ring {} but the flags select {wanted}",
                    law.ring()
                )));
            }
        }
        if let Some(d) = degree {
            if d != law.degree_bound() {
                return Err(CliError::new(format!(
                    "--degree: the file {spec} is truncated at degree {}; omit --degree or match it",
                    law.degree_bound()
                )));
            }
        }
        Ok(law)
    } else {
        let ring = ring_from_flags(flags)?;
        builtin_law(spec, ring, default_degree)
            .map_err(|e| CliError::new(format!("--law: {e}")))
    }
}

/// Load a structure-constants file.
pub fn load_structure(path: &str) -> Result<StructureConstants, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("--structure: cannot read {path}: {e}")))?;
    let json: StructureConstantsJson = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("--structure: malformed JSON in {path}: {e}")))?;
    StructureConstants::from_json(&json)
        .map_err(|e| CliError::new(format!("--structure: invalid structure constants in {path}: {e}")))
}

/// Parse a comma-separated coordinate vector in the given ring.
pub fn parse_coords(
    ring: Ring,
    flag: &str,
    text: &str,
    dimension: usize,
) -> Result<Vec<Coefficient>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != dimension {
        return Err(CliError::new(format!(
            "{flag}: expected {dimension} comma-separated coordinates, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            parse_coefficient(ring, part).map_err(|e| {
                CliError::new(format!("{flag}: bad coordinate {}: {e}", i + 1))
            })
        })
        .collect()
}

/// Parse a coordinate vector and validate it as a point of the law.
pub fn parse_point(
    law: &FormalGroupLaw,
    flag: &str,
    text: &str,
) -> Result<GroupPoint, CliError> {
    let coords = parse_coords(law.ring(), flag, text, law.dimension())?;
    law.point(coords)
        .map_err(|e| CliError::new(format!("{flag}: {e}")))
}
