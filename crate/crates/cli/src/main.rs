//! Command-line front end for the `grouplaw` library.
//!
//! Subcommand tree:
//!
//! * `bch table|audit` — the Baker–Campbell–Hausdorff series in the Lyndon
//!   basis and its denominator-valuation audit.
//! * `law check|lie|explog-verify|adjoint-verify|unipotent` — group-law
//!   axiom checks, Lie-algebra extraction, and the seeded verification
//!   suites for the exp/log correspondence, the adjoint identity, and
//!   unipotence of conjugation.
//! * `lie jacobi|radical|nilpotent|report` — structure-constant analysis
//!   over exact rationals.
//! * `group mul|inv|log|exp` — arithmetic on points of a law.
//!
//! Exit codes: 0 when every checked identity holds (informational findings
//! included), 1 on a verification failure (the report is still emitted),
//! 2 on a usage or input error with a diagnostic naming the offending
//! flag.  Two runs with the same arguments and seed emit byte-identical
//! JSON.

mod input;
mod report;
mod sample;
mod suites;

use clap::{Args, Parser, Subcommand};
use grouplaw::bch::bch_series;
use grouplaw::coeff::Ring;
use grouplaw::law::AxiomReport;
use grouplaw::liealg::{RadicalStatus, Subspace};
use grouplaw::operator::{group_exp, group_log};
use serde::Serialize;

use input::{
    load_structure, parse_coords, parse_point, resolve_law, sampling_scale, CliError, RingFlags,
};
use report::{OutputFlags, Rendered};
use suites::verdict;

#[derive(Parser)]
#[command(
    name = "grouplaw",
    version,
    about = "Exact computer algebra for truncated formal group laws: BCH tables, \
             axiom checks, exp/log verification, and Lie-algebra radical analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: TopCommand,
}

#[derive(Subcommand)]
enum TopCommand {
    /// Baker–Campbell–Hausdorff tables in the Lyndon basis.
    #[command(subcommand)]
    Bch(BchCommand),
    /// Formal group laws: validation, extraction, verification suites.
    #[command(subcommand)]
    Law(LawCommand),
    /// Structure-constant Lie algebras: Jacobi, radical, nilpotency.
    #[command(subcommand)]
    Lie(LieCommand),
    /// Arithmetic on group points of a law.
    #[command(subcommand)]
    Group(GroupCommand),
}

#[derive(Subcommand)]
enum BchCommand {
    /// Compute the BCH table through a degree bound.
    Table {
        /// Truncation degree of the table.
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Audit the denominator valuations of the table.
    Audit {
        /// Truncation degree of the audited table.
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        out: OutputFlags,
    },
}

/// Flags shared by the verification suites.
#[derive(Args)]
struct TrialFlags {
    /// Number of sampled trials.
    #[arg(long, default_value_t = 20)]
    trials: u32,

    /// Seed; it fully determines every sampled point.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Sampling bound B: rational coordinates are drawn from scale·{-B..B}.
    #[arg(long, default_value_t = 5)]
    bound: i64,
}

#[derive(Subcommand)]
enum LawCommand {
    /// Check the group-law axioms (identity and associativity) exactly.
    Check {
        /// Builtin law name or path to a law JSON file.
        #[arg(long)]
        law: String,
        /// Truncation degree for builtin laws (default 6).
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Extract the Lie algebra of a law and check the Jacobi identity.
    Lie {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Verify the exp/log correspondence on sampled group points.
    ExplogVerify {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        trial: TrialFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Verify that conjugating invariant derivations matches the adjoint
    /// exponential.
    AdjointVerify {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        trial: TrialFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Check that conjugation acts unipotently on augmentation quotients.
    Unipotent {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        /// Quotient window k: unipotence is checked on I/I^k
        /// (default: the whole truncated augmentation ideal).
        #[arg(long)]
        window: Option<u32>,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        trial: TrialFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
}

#[derive(Subcommand)]
enum LieCommand {
    /// Check the Jacobi identity on a structure-constants file.
    Jacobi {
        /// Path to a structure-constants JSON file.
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Compute the solvable radical.
    Radical {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Compute the lower central series and nilpotency class.
    Nilpotent {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Full radical report with a PASS/FLAG classification.
    Report {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        out: OutputFlags,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Multiply two group points.
    Mul {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        /// First point, comma-separated coordinates.
        #[arg(long)]
        x: String,
        /// Second point, comma-separated coordinates.
        #[arg(long)]
        y: String,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Invert a group point.
    Inv {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Group logarithm: Lie-algebra coordinates of a point.
    Log {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Group exponential: the point of a Lie-algebra element.
    Exp {
        #[arg(long)]
        law: String,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        ring: RingFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap prints help/version with exit 0 and usage errors with exit 2.
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(pass) => std::process::exit(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let rendered = match cli.command {
        TopCommand::Bch(cmd) => match cmd {
            BchCommand::Table { degree, out } => emit(bch_table(degree)?, out),
            BchCommand::Audit { degree, out } => emit(bch_audit(degree)?, out),
        },
        TopCommand::Law(cmd) => match cmd {
            LawCommand::Check {
                law,
                degree,
                ring,
                out,
            } => emit(law_check(&law, &ring, degree)?, out),
            LawCommand::Lie {
                law,
                degree,
                ring,
                out,
            } => emit(law_lie(&law, &ring, degree)?, out),
            LawCommand::ExplogVerify {
                law,
                degree,
                ring,
                trial,
                out,
            } => {
                let fgl = resolve_law(&law, &ring, degree)?;
                let r = suites::explog_verify(
                    &fgl,
                    &law,
                    trial.trials,
                    trial.seed,
                    sampling_scale(&ring),
                    trial.bound,
                )?;
                let text = r.text();
                let pass = r.pass;
                emit(
                    Rendered::new("law explog-verify", fgl.ring(), &r, text, pass),
                    out,
                )
            }
            LawCommand::AdjointVerify {
                law,
                degree,
                ring,
                trial,
                out,
            } => {
                let fgl = resolve_law(&law, &ring, degree)?;
                let r = suites::adjoint_verify(
                    &fgl,
                    &law,
                    trial.trials,
                    trial.seed,
                    sampling_scale(&ring),
                    trial.bound,
                )?;
                let text = r.text();
                let pass = r.pass;
                emit(
                    Rendered::new("law adjoint-verify", fgl.ring(), &r, text, pass),
                    out,
                )
            }
            LawCommand::Unipotent {
                law,
                degree,
                window,
                ring,
                trial,
                out,
            } => {
                let fgl = resolve_law(&law, &ring, degree)?;
                let r = suites::unipotent_verify(
                    &fgl,
                    &law,
                    trial.trials,
                    trial.seed,
                    sampling_scale(&ring),
                    trial.bound,
                    window,
                )?;
                let text = r.text();
                let pass = r.pass;
                emit(
                    Rendered::new("law unipotent", fgl.ring(), &r, text, pass),
                    out,
                )
            }
        },
        TopCommand::Lie(cmd) => match cmd {
            LieCommand::Jacobi { structure, out } => emit(lie_jacobi(&structure)?, out),
            LieCommand::Radical { structure, out } => emit(lie_radical(&structure)?, out),
            LieCommand::Nilpotent { structure, out } => emit(lie_nilpotent(&structure)?, out),
            LieCommand::Report { structure, out } => emit(lie_report(&structure)?, out),
        },
        TopCommand::Group(cmd) => match cmd {
            GroupCommand::Mul {
                law,
                degree,
                x,
                y,
                ring,
                out,
            } => emit(group_mul_cmd(&law, &ring, degree, &x, &y)?, out),
            GroupCommand::Inv {
                law,
                degree,
                x,
                ring,
                out,
            } => emit(group_inv_cmd(&law, &ring, degree, &x)?, out),
            GroupCommand::Log {
                law,
                degree,
                x,
                ring,
                out,
            } => emit(group_log_cmd(&law, &ring, degree, &x)?, out),
            GroupCommand::Exp {
                law,
                degree,
                x,
                ring,
                out,
            } => emit(group_exp_cmd(&law, &ring, degree, &x)?, out),
        },
    };
    rendered
}

fn emit(rendered: Rendered, out: OutputFlags) -> Result<bool, CliError> {
    rendered.emit(&out)
}

// ---------------------------------------------------------------------------
// bch

fn bch_table(degree: u32) -> Result<Rendered, CliError> {
    let table = bch_series(degree).map_err(|e| CliError::new(format!("--degree: {e}")))?;
    let json = table.to_json();
    let mut text = format!("BCH table through degree {degree} (Lyndon basis)\n");
    for term in &json.terms {
        text.push_str(&format!(
            "{:<12} degree {:<2} coefficient {}\n",
            term.lyndon_word, term.degree, term.coefficient
        ));
    }
    text.push_str(&format!(
        "terms: {}  valuation audit: {}\n",
        json.terms.len(),
        if table.audit().pass { "pass" } else { "FAIL" }
    ));
    let pass = table.audit().pass;
    Ok(Rendered::new(
        "bch table",
        Ring::Rational,
        &json,
        text,
        pass,
    ))
}

/// Audit payload: the per-prime violation lists for a table, with the
/// degree bound echoed.
#[derive(Serialize)]
struct BchAuditPayload {
    degree_bound: u32,
    terms: usize,
    #[serde(flatten)]
    audit: grouplaw::bch::ValuationAudit,
}

fn bch_audit(degree: u32) -> Result<Rendered, CliError> {
    let table = bch_series(degree).map_err(|e| CliError::new(format!("--degree: {e}")))?;
    let payload = BchAuditPayload {
        degree_bound: degree,
        terms: table.series().iter().count(),
        audit: table.audit().clone(),
    };
    let mut text = format!(
        "valuation audit of the BCH table through degree {degree} \
         (bound: v_p >= -(n-1)/(p-1))\n"
    );
    for prime in &payload.audit.primes {
        text.push_str(&format!(
            "p = {}: {} ({} violations)\n",
            prime.prime,
            verdict(prime.pass),
            prime.violations.len()
        ));
    }
    text.push_str(&format!("result: {}\n", verdict(payload.audit.pass)));
    let pass = payload.audit.pass;
    Ok(Rendered::new("bch audit", Ring::Rational, &payload, text, pass))
}

// ---------------------------------------------------------------------------
// law

#[derive(Serialize)]
struct LawCheckPayload {
    law: String,
    dimension: usize,
    degree_bound: u32,
    #[serde(flatten)]
    axioms: AxiomReport,
}

fn law_check(spec: &str, ring: &RingFlags, degree: Option<u32>) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let axioms = law
        .check_axioms()
        .map_err(|e| CliError::new(format!("--law: {e}")))?;
    let payload = LawCheckPayload {
        law: spec.to_string(),
        dimension: law.dimension(),
        degree_bound: law.degree_bound(),
        axioms: axioms.clone(),
    };
    let mut text = format!(
        "group-law axioms: law {} (dimension {}, degree bound {})\n\
         identity: {}\nassociativity: {}\n",
        spec,
        law.dimension(),
        law.degree_bound(),
        verdict(axioms.identity_pass),
        verdict(axioms.associativity_pass),
    );
    if let Some(witness) = &axioms.failure {
        text.push_str(&format!("first failure: {witness}\n"));
    }
    text.push_str(&format!("result: {}\n", verdict(axioms.pass)));
    Ok(Rendered::new(
        "law check",
        law.ring(),
        &payload,
        text,
        axioms.pass,
    ))
}

#[derive(Serialize)]
struct LawLiePayload {
    law: String,
    degree_bound: u32,
    structure: grouplaw::liealg::StructureConstantsJson,
    jacobi_pass: bool,
}

fn law_lie(spec: &str, ring: &RingFlags, degree: Option<u32>) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let sc = law
        .lie_constants()
        .map_err(|e| CliError::new(format!("--law: {e}")))?;
    let jacobi = sc.check_jacobi();
    let payload = LawLiePayload {
        law: spec.to_string(),
        degree_bound: law.degree_bound(),
        structure: sc.to_json(),
        jacobi_pass: jacobi.pass,
    };
    let mut text = format!(
        "Lie algebra of law {} (dimension {})\n",
        spec,
        sc.dimension()
    );
    for bracket in &payload.structure.brackets {
        let terms: Vec<String> = bracket
            .result
            .iter()
            .map(|t| format!("{}·e{}", t.coeff, t.k))
            .collect();
        text.push_str(&format!(
            "[e{}, e{}] = {}\n",
            bracket.i,
            bracket.j,
            terms.join(" + ")
        ));
    }
    text.push_str(&format!("jacobi: {}\n", verdict(jacobi.pass)));
    let pass = jacobi.pass;
    Ok(Rendered::new("law lie", law.ring(), &payload, text, pass))
}

// ---------------------------------------------------------------------------
// lie

#[derive(Serialize)]
struct JacobiPayload {
    dimension: usize,
    pass: bool,
    witnesses: Vec<[usize; 3]>,
}

fn lie_jacobi(path: &str) -> Result<Rendered, CliError> {
    let sc = load_structure(path)?;
    let jacobi = sc.check_jacobi();
    let payload = JacobiPayload {
        dimension: sc.dimension(),
        pass: jacobi.pass,
        witnesses: jacobi.witnesses.iter().map(|&(i, j, k)| [i, j, k]).collect(),
    };
    let mut text = format!(
        "Jacobi identity: dimension {}\nresult: {}\n",
        sc.dimension(),
        verdict(jacobi.pass)
    );
    if !jacobi.witnesses.is_empty() {
        text.push_str(&format!(
            "failing triples (1-based): {:?}\n",
            payload.witnesses
        ));
    }
    let pass = payload.pass;
    Ok(Rendered::new("lie jacobi", Ring::Rational, &payload, text, pass))
}

fn basis_strings(subspace: &Subspace) -> Vec<Vec<String>> {
    subspace
        .basis()
        .iter()
        .map(|row| row.iter().map(|q| q.to_string()).collect())
        .collect()
}

#[derive(Serialize)]
struct RadicalPayload {
    dimension: usize,
    radical_dimension: usize,
    radical_basis: Vec<Vec<String>>,
}

fn lie_radical(path: &str) -> Result<Rendered, CliError> {
    let sc = load_structure(path)?;
    let radical = sc
        .solvable_radical()
        .map_err(|e| CliError::new(format!("--structure: {e}")))?;
    let payload = RadicalPayload {
        dimension: sc.dimension(),
        radical_dimension: radical.dimension(),
        radical_basis: basis_strings(&radical),
    };
    let mut text = format!(
        "solvable radical: ambient dimension {}, radical dimension {}\n",
        sc.dimension(),
        radical.dimension()
    );
    for row in &payload.radical_basis {
        text.push_str(&format!("  [{}]\n", row.join(", ")));
    }
    Ok(Rendered::new("lie radical", Ring::Rational, &payload, text, true))
}

#[derive(Serialize)]
struct NilpotentPayload {
    dimension: usize,
    lower_central_dims: Vec<usize>,
    nilpotent: bool,
    nilpotency_class: Option<usize>,
}

fn lie_nilpotent(path: &str) -> Result<Rendered, CliError> {
    let sc = load_structure(path)?;
    let whole = Subspace::whole(sc.dimension());
    let series = sc.lower_central_series(&whole);
    let payload = NilpotentPayload {
        dimension: sc.dimension(),
        lower_central_dims: series.iter().map(Subspace::dimension).collect(),
        nilpotent: sc.is_nilpotent(&whole),
        nilpotency_class: sc.nilpotency_class(&whole),
    };
    let class = match payload.nilpotency_class {
        Some(c) => c.to_string(),
        None => "none (not nilpotent)".to_string(),
    };
    let text = format!(
        "lower central series dimensions: {:?}\nnilpotent: {}\nclass: {}\n",
        payload.lower_central_dims, payload.nilpotent, class
    );
    Ok(Rendered::new(
        "lie nilpotent",
        Ring::Rational,
        &payload,
        text,
        true,
    ))
}

#[derive(Serialize)]
struct LieReportPayload {
    dimension: usize,
    jacobi_pass: bool,
    radical_dimension: usize,
    radical_basis: Vec<Vec<String>>,
    radical_is_nilpotent: bool,
    radical_nilpotency_class: Option<usize>,
    radical_lower_central_dims: Vec<usize>,
    status: RadicalStatus,
}

fn lie_report(path: &str) -> Result<Rendered, CliError> {
    let sc = load_structure(path)?;
    let jacobi = sc.check_jacobi();
    let report = sc
        .radical_nilpotency_report()
        .map_err(|e| CliError::new(format!("--structure: {e}")))?;
    let payload = LieReportPayload {
        dimension: sc.dimension(),
        jacobi_pass: jacobi.pass,
        radical_dimension: report.radical.dimension(),
        radical_basis: basis_strings(&report.radical),
        radical_is_nilpotent: report.radical_is_nilpotent,
        radical_nilpotency_class: report.radical_nilpotency_class,
        radical_lower_central_dims: report.radical_lower_central_dims.clone(),
        status: report.status,
    };
    let class = match payload.radical_nilpotency_class {
        Some(c) => c.to_string(),
        None => "none (not nilpotent)".to_string(),
    };
    let text = format!(
        "radical analysis: dimension {}\njacobi: {}\n\
         radical dimension: {}\nradical nilpotent: {} (class {})\n\
         radical lower central dimensions: {:?}\nstatus: {}\n",
        sc.dimension(),
        verdict(jacobi.pass),
        payload.radical_dimension,
        payload.radical_is_nilpotent,
        class,
        payload.radical_lower_central_dims,
        report.status,
    );
    // FLAG is a finding about the input, not a failure; only a Jacobi
    // violation (the input is not a Lie algebra) fails the run.
    let pass = jacobi.pass;
    Ok(Rendered::new("lie report", Ring::Rational, &payload, text, pass))
}

// ---------------------------------------------------------------------------
// group

#[derive(Serialize)]
struct PointPayload {
    law: String,
    coordinates: Vec<String>,
}

fn point_payload(spec: &str, coords: &[grouplaw::coeff::Coefficient]) -> PointPayload {
    PointPayload {
        law: spec.to_string(),
        coordinates: coords.iter().map(|c| c.to_string()).collect(),
    }
}

fn coords_text(title: &str, coords: &[grouplaw::coeff::Coefficient]) -> String {
    let mut text = format!("{title}\n");
    for (i, c) in coords.iter().enumerate() {
        text.push_str(&format!("x{} = {}\n", i + 1, c));
    }
    text
}

fn group_mul_cmd(
    spec: &str,
    ring: &RingFlags,
    degree: Option<u32>,
    x: &str,
    y: &str,
) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let px = parse_point(&law, "--x", x)?;
    let py = parse_point(&law, "--y", y)?;
    let product = law
        .multiply(&px, &py)
        .map_err(|e| CliError::new(format!("product: {e}")))?;
    let payload = point_payload(spec, product.coordinates());
    let text = coords_text("product", product.coordinates());
    Ok(Rendered::new("group mul", law.ring(), &payload, text, true))
}

fn group_inv_cmd(
    spec: &str,
    ring: &RingFlags,
    degree: Option<u32>,
    x: &str,
) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let px = parse_point(&law, "--x", x)?;
    let inverse = law
        .inverse(&px)
        .map_err(|e| CliError::new(format!("inverse: {e}")))?;
    let payload = point_payload(spec, inverse.coordinates());
    let text = coords_text("inverse", inverse.coordinates());
    Ok(Rendered::new("group inv", law.ring(), &payload, text, true))
}

fn group_log_cmd(
    spec: &str,
    ring: &RingFlags,
    degree: Option<u32>,
    x: &str,
) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let px = parse_point(&law, "--x", x)?;
    let coords = group_log(&law, &px).map_err(|e| CliError::new(format!("--x: {e}")))?;
    let payload = point_payload(spec, &coords);
    let text = coords_text("logarithm (Lie-algebra coordinates)", &coords);
    Ok(Rendered::new("group log", law.ring(), &payload, text, true))
}

fn group_exp_cmd(
    spec: &str,
    ring: &RingFlags,
    degree: Option<u32>,
    x: &str,
) -> Result<Rendered, CliError> {
    let law = resolve_law(spec, ring, degree)?;
    let coords = parse_coords(law.ring(), "--x", x, law.dimension())?;
    let point = group_exp(&law, &coords).map_err(|e| CliError::new(format!("--x: {e}")))?;
    let payload = point_payload(spec, point.coordinates());
    let text = coords_text("exponential (group point)", point.coordinates());
    Ok(Rendered::new("group exp", law.ring(), &payload, text, true))
}
