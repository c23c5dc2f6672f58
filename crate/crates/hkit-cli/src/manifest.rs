//! Manifest schema for the batch commands: a relation, the optional
//! combined-pair shape, named operand matrices (inline or by file
//! reference), and option overrides. Schema violations are reported
//! before any computation starts.

use hkit_core::matrix::Matrix;
use hkit_core::{DeltaKind, GaussRat, RelationKind};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

pub type ExactMatrix = Matrix<GaussRat>;

/// One manifest file driving `check` or `split`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub relation: String,
    #[serde(default)]
    pub delta: Option<DeltaKind>,
    pub n: u32,
    pub operands: BTreeMap<String, MatrixRef>,
    #[serde(default)]
    pub options: ManifestOptions,
}

/// Caps and toggles; absent fields fall back to the built-in defaults
/// (after the `HKIT_MAX_DIM` environment override, which these beat).
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ManifestOptions {
    #[serde(default)]
    pub cap: Option<u32>,
    #[serde(default)]
    pub max_dim: Option<usize>,
    #[serde(default)]
    pub numeric_fallback: Option<bool>,
}

/// An operand is either an inline matrix object or a path to a matrix
/// JSON file, resolved relative to the manifest's directory.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Inline(ExactMatrix),
    Path(String),
}

/// The relation vocabulary of the command line: the library relations
/// plus the two adjoint-pair families.
#[derive(Clone, Debug, PartialEq)]
pub enum CliRelation {
    Base(RelationKind),
    NSym,
    NSym2,
}

impl CliRelation {
    pub fn parse(s: &str) -> Result<CliRelation, String> {
        match s {
            "nsym" => Ok(CliRelation::NSym),
            "nsym2" => Ok(CliRelation::NSym2),
            _ => RelationKind::parse(s).map(CliRelation::Base),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CliRelation::Base(kind) => kind.to_string(),
            CliRelation::NSym => "nsym".to_string(),
            CliRelation::NSym2 => "nsym2".to_string(),
        }
    }
}

impl Manifest {
    pub fn load(path: &Path) -> Result<(Manifest, BTreeMap<String, ExactMatrix>), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|e| format!("bad manifest {}: {e}", path.display()))?;
        if manifest.n == 0 {
            return Err("the relation order n must be positive".to_string());
        }
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut resolved = BTreeMap::new();
        for (name, reference) in &manifest.operands {
            let matrix = match reference {
                MatrixRef::Inline(m) => m.clone(),
                MatrixRef::Path(rel) => {
                    let full = base.join(rel);
                    let text = std::fs::read_to_string(&full)
                        .map_err(|e| format!("cannot read operand {name} ({}): {e}", full.display()))?;
                    serde_json::from_str(&text)
                        .map_err(|e| format!("bad matrix in {}: {e}", full.display()))?
                }
            };
            resolved.insert(name.clone(), matrix);
        }
        Ok((manifest, resolved))
    }
}

/// Removes exactly the named operands, rejecting extras and absences by
/// listing what the command expects.
pub fn take_operands<const N: usize>(
    operands: &mut BTreeMap<String, ExactMatrix>,
    names: [&str; N],
) -> Result<[ExactMatrix; N], String> {
    let extra: Vec<&String> = operands
        .keys()
        .filter(|k| !names.contains(&k.as_str()))
        .collect();
    if !extra.is_empty() {
        return Err(format!(
            "unexpected operands {extra:?}; this command takes exactly {names:?}"
        ));
    }
    let mut out = Vec::with_capacity(N);
    for name in names {
        match operands.remove(name) {
            Some(m) => out.push(m),
            None => return Err(format!("missing operand {name:?}; expected {names:?}")),
        }
    }
    Ok(out.try_into().map_err(|_| "operand arity").unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_manifest_round_trips() {
        let text = r#"{
            "relation": "n-inverse",
            "delta": "tensor-product",
            "n": 2,
            "operands": {
                "s1": {"dim": 1, "entries": [["1"]]},
                "t1": {"dim": 1, "entries": [["1"]]}
            },
            "options": {"numeric_fallback": false}
        }"#;
        let manifest: Manifest = serde_json::from_str(text).unwrap();
        assert_eq!(manifest.n, 2);
        assert_eq!(manifest.delta, Some(DeltaKind::TensorProduct));
        assert_eq!(manifest.options.numeric_fallback, Some(false));
        assert_eq!(manifest.operands.len(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"relation": "helton", "n": 1, "operands": {}, "frobnicate": 1}"#;
        assert!(serde_json::from_str::<Manifest>(text).is_err());
        let text = r#"{"relation": "helton", "n": 1, "operands": {}, "options": {"sloppy": true}}"#;
        assert!(serde_json::from_str::<Manifest>(text).is_err());
    }

    #[test]
    fn relation_vocabulary() {
        assert_eq!(
            CliRelation::parse("n-inverse"),
            Ok(CliRelation::Base(RelationKind::NInverse))
        );
        assert_eq!(CliRelation::parse("nsym"), Ok(CliRelation::NSym));
        assert_eq!(CliRelation::parse("nsym2"), Ok(CliRelation::NSym2));
        assert!(CliRelation::parse("general:x*y^2-2").is_ok());
        assert!(CliRelation::parse("isometry").is_err());
        assert_eq!(CliRelation::parse("nsym2").unwrap().name(), "nsym2");
    }

    #[test]
    fn operand_sets_are_exact() {
        let mut ops = BTreeMap::new();
        ops.insert("s".to_string(), Matrix::identity(1));
        ops.insert("t".to_string(), Matrix::identity(1));
        let [s, t] = take_operands(&mut ops, ["s", "t"]).unwrap();
        assert!(s.is_identity() && t.is_identity());

        let mut ops = BTreeMap::new();
        ops.insert("s".to_string(), Matrix::<GaussRat>::identity(1));
        assert!(take_operands(&mut ops, ["s", "t"]).unwrap_err().contains("missing"));

        let mut ops = BTreeMap::new();
        ops.insert("bogus".to_string(), Matrix::<GaussRat>::identity(1));
        assert!(take_operands(&mut ops, ["t"]).unwrap_err().contains("unexpected"));
    }
}
