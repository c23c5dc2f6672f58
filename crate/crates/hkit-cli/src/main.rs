//! hkit: batch front end over the exact operator-pair calculus.
//!
//! Five subcommands: `check` evaluates a relation defect, `split`
//! searches for a splitting witness, `classify` reports
//! quasi-homogeneity, `certify` builds and verifies a decomposition
//! certificate, and `generate` emits instances with known witnesses.
//! All output is JSON. Exit codes: 0 success or exact witness, 1
//! relation or verification failure, 2 input and schema errors, 3
//! numeric (non-exact) witness, 4 solver sentinels that the theorems
//! say cannot happen on valid input.

mod manifest;

use clap::{Parser, Subcommand};
use hkit_core::generators::{
    gen_combined_instance, gen_nsym2_instance, gen_nsym_instance, GeneratedInstance,
    GeneratedOperands, InstanceSpec,
};
use hkit_core::nc::{self, RelationKind};
use hkit_core::splitting::{
    split_nsym, split_nsym2, split_perturbation, split_tensor_product,
    split_tensor_sum_helton, SolverOptions, SplitError, SplitWitness,
};
use hkit_core::{classify_qh, make_certificate, verify_certificate, DeltaKind, GaussRat, QhClass};
use manifest::{take_operands, CliRelation, ExactMatrix, Manifest, ManifestOptions};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hkit",
    version,
    about = "Exact relation checks, splitting witnesses, and certificates for operator pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the relation defect at order n and report the strict order
    Check {
        /// Manifest JSON path
        manifest: PathBuf,
        /// Cap for the strict-order scan (overrides the manifest)
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Search for a splitting witness (lambda, l, m)
    Split {
        /// Manifest JSON path
        manifest: PathBuf,
        /// Accept numeric witnesses when no exact scalar exists
        #[arg(long, value_parser = parse_switch)]
        numeric_fallback: Option<bool>,
    },
    /// Report quasi-homogeneity data for a two-variable polynomial
    Classify {
        /// Polynomial in x and y, e.g. "x*y - 1"
        poly: String,
    },
    /// Build and verify a decomposition certificate
    Certify {
        /// Polynomial in x and y
        poly: String,
        /// Combined-pair shape: tensor-product, perturb, or tensor-sum
        #[arg(long, default_value = "tensor-product")]
        delta: String,
        /// Splitting scalar
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Emit an instance bundle with a known witness
    Generate {
        /// n-inverse, helton, nsym, or nsym2
        #[arg(long)]
        relation: String,
        /// Required for n-inverse and helton; implied for nsym and nsym2
        #[arg(long)]
        delta: Option<String>,
        /// First factor order
        #[arg(long)]
        l: u32,
        /// Second factor order
        #[arg(long)]
        m: u32,
        /// Witness scalar (family default when omitted)
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Factor dimensions as d1,d2 (minimal when omitted)
        #[arg(long, value_parser = parse_dims)]
        dims: Option<(usize, usize)>,
        /// Seed for the deterministic random draws
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the bundle to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected d1,d2, got {s:?}"))?;
    let parse = |part: &str| {
        part.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad dimension {part:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

struct Failure {
    message: String,
    code: u8,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code }
}

/// Stdout payload (if any) plus the exit code.
type CmdResult = Result<(Option<String>, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { manifest, cap } => cmd_check(&manifest, cap),
        Command::Split { manifest, numeric_fallback } => cmd_split(&manifest, numeric_fallback),
        Command::Classify { poly } => cmd_classify(&poly),
        Command::Certify { poly, delta, lambda } => cmd_certify(&poly, &delta, &lambda),
        Command::Generate {
            relation,
            delta,
            l,
            m,
            lambda,
            dims,
            seed,
            out,
        } => cmd_generate(&relation, delta.as_deref(), l, m, lambda.as_deref(), dims, seed, out),
    };
    match outcome {
        Ok((text, code)) => {
            if let Some(text) = text {
                println!("{text}");
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Caps and toggles: defaults, then `HKIT_MAX_DIM`, then manifest
/// options, then command-line flags, each layer overriding the last.
fn solver_options(
    opts: &ManifestOptions,
    cap: Option<u32>,
    numeric: Option<bool>,
) -> Result<SolverOptions, Failure> {
    let mut options = SolverOptions::default();
    if let Ok(text) = std::env::var("HKIT_MAX_DIM") {
        options.max_combined_dim = text.trim().parse().map_err(|_| {
            fail(2, format!("HKIT_MAX_DIM must be a positive integer, got {text:?}"))
        })?;
    }
    if let Some(d) = opts.max_dim {
        options.max_combined_dim = d;
    }
    if let Some(c) = opts.cap {
        options.max_n = c;
    }
    if let Some(c) = cap {
        options.max_n = c;
    }
    if let Some(b) = opts.numeric_fallback {
        options.numeric_fallback = b;
    }
    if let Some(b) = numeric {
        options.numeric_fallback = b;
    }
    Ok(options)
}

fn require_same_dim(pairs: &[(&str, &ExactMatrix, &str, &ExactMatrix)]) -> Result<(), Failure> {
    for (an, a, bn, b) in pairs {
        if a.rows() != b.rows() {
            return Err(fail(
                2,
                format!("{an} is {}x{} but {bn} is {}x{}", a.rows(), a.rows(), b.rows(), b.rows()),
            ));
        }
    }
    Ok(())
}

/// The operator pair a manifest describes: a direct pair for plain
/// relations, or the combined pair under the manifest's delta. The two
/// adjoint families imply their delta and accept either one operator
/// (the factor relation) or two (the combined relation).
fn assemble_pair(
    relation: &CliRelation,
    delta: Option<DeltaKind>,
    operands: &mut std::collections::BTreeMap<String, ExactMatrix>,
) -> Result<(ExactMatrix, ExactMatrix), Failure> {
    match relation {
        CliRelation::Base(_) => match delta {
            None => {
                let [s, t] = take_operands(operands, ["s", "t"]).map_err(|e| fail(2, e))?;
                require_same_dim(&[("s", &s, "t", &t)])?;
                Ok((s, t))
            }
            Some(DeltaKind::PerturbX) => {
                let [s, t, q] = take_operands(operands, ["s", "t", "q"]).map_err(|e| fail(2, e))?;
                require_same_dim(&[("s", &s, "t", &t)])?;
                Ok(nc::combine_pair(DeltaKind::PerturbX, &s, &t, &q, &q))
            }
            Some(d) => {
                let [s1, t1, s2, t2] =
                    take_operands(operands, ["s1", "t1", "s2", "t2"]).map_err(|e| fail(2, e))?;
                require_same_dim(&[("s1", &s1, "t1", &t1), ("s2", &s2, "t2", &t2)])?;
                Ok(nc::combine_pair(d, &s1, &t1, &s2, &t2))
            }
        },
        CliRelation::NSym | CliRelation::NSym2 => {
            let implied = if *relation == CliRelation::NSym {
                DeltaKind::TensorProduct
            } else {
                DeltaKind::TensorSum
            };
            if let Some(d) = delta {
                if d != implied {
                    return Err(fail(
                        2,
                        format!("{} implies delta {implied}, not {d}", relation.name()),
                    ));
                }
            }
            if operands.len() == 1 && operands.contains_key("t") {
                let [t] = take_operands(operands, ["t"]).map_err(|e| fail(2, e))?;
                return Ok((t.adjoint(), t));
            }
            let [t1, t2] = take_operands(operands, ["t1", "t2"]).map_err(|e| fail(2, e))?;
            Ok(nc::combine_pair(implied, &t1.adjoint(), &t1, &t2.adjoint(), &t2))
        }
    }
}

fn base_kind(relation: &CliRelation) -> RelationKind {
    match relation {
        CliRelation::Base(kind) => kind.clone(),
        CliRelation::NSym | CliRelation::NSym2 => RelationKind::Helton,
    }
}

#[derive(Serialize)]
struct CheckReport {
    holds: bool,
    n: u32,
    strict_order: Option<u32>,
    residual_frobenius_sqr: String,
}

fn cmd_check(path: &PathBuf, cap: Option<u32>) -> CmdResult {
    let (man, mut ops) = Manifest::load(path).map_err(|e| fail(2, e))?;
    let relation = CliRelation::parse(&man.relation).map_err(|e| fail(2, e))?;
    let options = solver_options(&man.options, cap, None)?;
    if man.n > options.max_n {
        return Err(fail(2, format!("order {} exceeds the cap {}", man.n, options.max_n)));
    }
    let (s, t) = assemble_pair(&relation, man.delta, &mut ops)?;
    if s.rows() > options.max_combined_dim {
        return Err(fail(
            2,
            format!(
                "combined dimension {} exceeds the cap {} (HKIT_MAX_DIM raises it)",
                s.rows(),
                options.max_combined_dim
            ),
        ));
    }
    let kind = base_kind(&relation);
    let defect = nc::defect(&kind, man.n, &s, &t);
    let holds = defect.is_zero();
    let report = CheckReport {
        holds,
        n: man.n,
        strict_order: nc::min_order(&kind, &s, &t, options.max_n),
        residual_frobenius_sqr: defect.frobenius_norm_sq().to_string(),
    };
    Ok((
        Some(serde_json::to_string(&report).expect("reports serialize")),
        if holds { 0 } else { 1 },
    ))
}

fn split_exit(err: &SplitError) -> u8 {
    match err {
        SplitError::NotSatisfied { .. } => 1,
        SplitError::BadInput(_) | SplitError::CapExceeded(_) => 2,
        _ => 4,
    }
}

fn cmd_split(path: &PathBuf, numeric: Option<bool>) -> CmdResult {
    let (man, mut ops) = Manifest::load(path).map_err(|e| fail(2, e))?;
    let relation = CliRelation::parse(&man.relation).map_err(|e| fail(2, e))?;
    let options = solver_options(&man.options, None, numeric)?;
    let result: Result<SplitWitness, SplitError> = match &relation {
        CliRelation::Base(kind) => {
            let delta = man
                .delta
                .ok_or_else(|| fail(2, "split needs a delta for this relation".to_string()))?;
            match delta {
                DeltaKind::TensorProduct => {
                    let [s1, t1, s2, t2] =
                        take_operands(&mut ops, ["s1", "t1", "s2", "t2"]).map_err(|e| fail(2, e))?;
                    split_tensor_product(kind, &s1, &t1, &s2, &t2, man.n, &options)
                }
                DeltaKind::PerturbX => {
                    let [s, t, q] =
                        take_operands(&mut ops, ["s", "t", "q"]).map_err(|e| fail(2, e))?;
                    split_perturbation(kind, &s, &t, &q, man.n, &options)
                }
                DeltaKind::TensorSum => {
                    if *kind != RelationKind::Helton {
                        return Err(fail(
                            2,
                            "tensor-sum witness search is defined for the helton relation",
                        ));
                    }
                    let [s1, t1, s2, t2] =
                        take_operands(&mut ops, ["s1", "t1", "s2", "t2"]).map_err(|e| fail(2, e))?;
                    split_tensor_sum_helton(&s1, &t1, &s2, &t2, man.n, &options)
                }
            }
        }
        CliRelation::NSym | CliRelation::NSym2 => {
            let implied = if relation == CliRelation::NSym {
                DeltaKind::TensorProduct
            } else {
                DeltaKind::TensorSum
            };
            if let Some(d) = man.delta {
                if d != implied {
                    return Err(fail(
                        2,
                        format!("{} implies delta {implied}, not {d}", relation.name()),
                    ));
                }
            }
            let [t1, t2] = take_operands(&mut ops, ["t1", "t2"]).map_err(|e| fail(2, e))?;
            if relation == CliRelation::NSym {
                split_nsym(&t1, &t2, man.n, &options)
            } else {
                split_nsym2(&t1, &t2, man.n, &options)
            }
        }
    };
    match result {
        Ok(witness) => {
            let code = if witness.lambda.is_exact() { 0 } else { 3 };
            Ok((
                Some(serde_json::to_string(&witness).expect("witnesses serialize")),
                code,
            ))
        }
        Err(e) => Err(fail(split_exit(&e), e.to_string())),
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    quasi_homogeneous: bool,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    class: Option<QhClass>,
}

fn cmd_classify(text: &str) -> CmdResult {
    let p = hkit_core::parse_poly(text).map_err(|e| fail(2, format!("bad polynomial: {e}")))?;
    let report = match classify_qh(&p) {
        Err(e) => return Err(fail(2, e.to_string())),
        Ok(class) => ClassifyReport { quasi_homogeneous: class.is_some(), class },
    };
    Ok((
        Some(serde_json::to_string(&report).expect("reports serialize")),
        0,
    ))
}

fn cmd_certify(poly: &str, delta: &str, lambda: &str) -> CmdResult {
    let p = hkit_core::parse_poly(poly).map_err(|e| fail(2, format!("bad polynomial: {e}")))?;
    let kind = DeltaKind::parse(delta)
        .ok_or_else(|| fail(2, format!("unknown delta {delta:?}")))?;
    let lam: GaussRat = lambda
        .parse()
        .map_err(|e| fail(2, format!("bad lambda: {e}")))?;
    let cert = make_certificate(&p, kind, &lam).map_err(|e| fail(2, format!("not certifiable: {e}")))?;
    if !verify_certificate(&p, &cert) {
        return Err(fail(
            1,
            "constructed certificate failed verification; this is a bug",
        ));
    }
    Ok((
        Some(serde_json::to_string(&cert).expect("certificates serialize")),
        0,
    ))
}

fn operand_entries(ops: &GeneratedOperands) -> Vec<(&'static str, &ExactMatrix)> {
    match ops {
        GeneratedOperands::Four { s1, t1, s2, t2 } => {
            vec![("s1", s1), ("t1", t1), ("s2", s2), ("t2", t2)]
        }
        GeneratedOperands::Perturb { s, t, q } => vec![("s", s), ("t", t), ("q", q)],
        GeneratedOperands::AdjointPair { t1, t2 } => vec![("t1", t1), ("t2", t2)],
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    relation: &str,
    delta: Option<&str>,
    l: u32,
    m: u32,
    lambda: Option<&str>,
    dims: Option<(usize, usize)>,
    seed: u64,
    out: Option<PathBuf>,
) -> CmdResult {
    if l == 0 || m == 0 {
        return Err(fail(2, "factor orders must be positive"));
    }
    let relation = CliRelation::parse(relation).map_err(|e| fail(2, e))?;
    let lambda: Option<GaussRat> = lambda
        .map(|s| s.parse())
        .transpose()
        .map_err(|e| fail(2, format!("bad lambda: {e}")))?;
    let instance: GeneratedInstance = match &relation {
        CliRelation::Base(kind) => {
            let delta_text = delta.ok_or_else(|| {
                fail(2, format!("generate needs --delta for the {} relation", relation.name()))
            })?;
            let delta = DeltaKind::parse(delta_text)
                .ok_or_else(|| fail(2, format!("unknown delta {delta_text:?}")))?;
            let lambda = lambda.unwrap_or_else(|| match delta {
                DeltaKind::PerturbX => GaussRat::from_int(0),
                _ => GaussRat::from_int(1),
            });
            let spec = InstanceSpec {
                relation: kind.clone(),
                delta,
                l,
                m,
                lambda,
                dims: dims.unwrap_or((l as usize, m as usize)),
                seed,
            };
            gen_combined_instance(&spec).map_err(|e| fail(2, e.to_string()))?
        }
        CliRelation::NSym | CliRelation::NSym2 => {
            let implied = if relation == CliRelation::NSym {
                DeltaKind::TensorProduct
            } else {
                DeltaKind::TensorSum
            };
            if let Some(d) = delta {
                if DeltaKind::parse(d) != Some(implied) {
                    return Err(fail(
                        2,
                        format!("{} implies delta {implied}, not {d}", relation.name()),
                    ));
                }
            }
            let dims = dims.unwrap_or((((l + 1) / 2) as usize, ((m + 1) / 2) as usize));
            if relation == CliRelation::NSym {
                gen_nsym_instance(l, m, dims, lambda.as_ref(), seed)
                    .map_err(|e| fail(2, e.to_string()))?
            } else {
                gen_nsym2_instance(l, m, dims, lambda.as_ref(), seed)
                    .map_err(|e| fail(2, e.to_string()))?
            }
        }
    };
    let mut operands = serde_json::Map::new();
    for (name, matrix) in operand_entries(&instance.operands) {
        operands.insert(
            name.to_string(),
            serde_json::to_value(matrix).expect("matrices serialize"),
        );
    }
    let bundle = serde_json::json!({
        "manifest": {
            "relation": relation.name(),
            "delta": instance.witness.delta,
            "n": instance.n,
            "operands": operands,
        },
        "witness": instance.witness,
    });
    let text = serde_json::to_string_pretty(&bundle).expect("bundles serialize");
    match out {
        Some(path) => {
            std::fs::write(&path, text + "\n")
                .map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?;
            Ok((None, 0))
        }
        None => Ok((Some(text), 0)),
    }
}
