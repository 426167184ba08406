//! JSON file formats for quivers with dimension vectors and for
//! representations.
//!
//! ```json
//! {"vertices": ["1", "2"], "arrows": [{"id": "a", "tail": "1", "head": "2"}],
//!  "dim": {"1": 1, "2": 2}, "field": "Q"}
//! ```
//!
//! A representation file holds `{"quiver": <inline spec or path>, "mats":
//! {"a": [[1, "1/2"]]}}`. Entries are integers or `p/q` strings, and
//! matrices act on row vectors, so the matrix over `a` is
//! `dim(tail) x dim(head)`. Zero-height matrices are written as `[]` and
//! zero-width ones as rows of `[]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ExactMatrix, Field, FieldScalar, LinalgError};
use crate::quiver::{DimVector, Quiver, QuiverError, Representation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: line {line}, column {column}: {message}", .source_name)]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}{}: {message}", .source_name, .line.map(|l| format!(": line {l}")).unwrap_or_default())]
    Invalid {
        source_name: String,
        line: Option<usize>,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl IoError {
    pub fn line(&self) -> Option<usize> {
        match self {
            IoError::Syntax { line, .. } => Some(*line),
            IoError::Invalid { line, .. } => *line,
            IoError::Read { .. } => None,
        }
    }
}

/// `"Q"` or `{"GF": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Name(FieldName),
    Prime {
        #[serde(rename = "GF")]
        gf: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldName {
    Q,
}

impl FieldSpec {
    pub fn to_field(self) -> Result<Field, LinalgError> {
        match self {
            FieldSpec::Name(FieldName::Q) => Ok(Field::Rational),
            FieldSpec::Prime { gf } => Field::prime(gf),
        }
    }

    pub fn from_field(f: Field) -> Self {
        match f {
            Field::Rational => FieldSpec::Name(FieldName::Q),
            Field::Prime(p) => FieldSpec::Prime { gf: p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub dim: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
}

/// A matrix entry: an integer or a rational string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn from_scalar(x: &FieldScalar) -> Self {
        match x.to_i64() {
            Some(v) => Entry::Int(v),
            None => Entry::Text(x.to_string()),
        }
    }

    fn to_scalar(&self, field: Field) -> Result<FieldScalar, LinalgError> {
        match self {
            Entry::Int(v) => Ok(field.from_i64(*v)),
            Entry::Text(t) => field.parse_scalar(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverRef {
    Inline(QuiverSpec),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub quiver: QuiverRef,
    pub mats: BTreeMap<String, Vec<Vec<Entry>>>,
}

/// A validated quiver file.
#[derive(Clone, Debug)]
pub struct LoadedQuiver {
    pub quiver: Arc<Quiver>,
    pub dims: DimVector,
    pub field: Field,
}

/// Where a document came from, used to annotate errors.
struct Source<'a> {
    name: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn syntax(&self, e: serde_json::Error) -> IoError {
        IoError::Syntax {
            source_name: self.name.to_string(),
            line: e.line(),
            column: e.column(),
            message: e
                .to_string()
                .split(" at line")
                .next()
                .unwrap_or_default()
                .to_string(),
        }
    }

    /// Line of `"needle"` used as an object key, or else of its first
    /// occurrence as a JSON string.
    fn line_of(&self, needle: &str) -> Option<usize> {
        let quoted = serde_json::to_string(needle).ok()?;
        let hits: Vec<usize> = self.text.match_indices(&quoted).map(|(i, _)| i).collect();
        let as_key = hits
            .iter()
            .find(|&&i| self.text[i + quoted.len()..].trim_start().starts_with(':'));
        let at = *as_key.or(hits.first())?;
        Some(self.text[..at].matches('\n').count() + 1)
    }

    fn invalid(&self, needle: Option<&str>, message: impl Into<String>) -> IoError {
        IoError::Invalid {
            source_name: self.name.to_string(),
            line: needle.and_then(|n| self.line_of(n)),
            message: message.into(),
        }
    }
}

fn quiver_error_key(e: &QuiverError) -> Option<&str> {
    match e {
        QuiverError::DuplicateVertex(s)
        | QuiverError::DuplicateArrow(s)
        | QuiverError::UnknownVertex(s)
        | QuiverError::UnknownArrow(s) => Some(s),
        QuiverError::MatrixShape { arrow, .. } => Some(arrow),
        _ => None,
    }
}

impl QuiverSpec {
    pub fn from_parts(q: &Quiver, d: &DimVector, field: Field) -> Self {
        QuiverSpec {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowSpec {
                    id: a.id.clone(),
                    tail: q.vertices()[a.tail].clone(),
                    head: q.vertices()[a.head].clone(),
                })
                .collect(),
            dim: q
                .vertices()
                .iter()
                .cloned()
                .zip(d.0.iter().copied())
                .collect(),
            field: Some(FieldSpec::from_field(field)),
        }
    }

    fn validate(
        &self,
        src: &Source<'_>,
        field_override: Option<Field>,
    ) -> Result<LoadedQuiver, IoError> {
        let quiver = Quiver::new(
            self.vertices.iter().cloned(),
            self.arrows
                .iter()
                .map(|a| (a.id.clone(), a.tail.clone(), a.head.clone())),
        )
        .map_err(|e| src.invalid(quiver_error_key(&e), e.to_string()))?;
        for key in self.dim.keys() {
            if quiver.vertex(key).is_none() {
                return Err(src.invalid(
                    Some(key),
                    format!("dimension given for unknown vertex `{key}`"),
                ));
            }
        }
        let dims = self
            .vertices
            .iter()
            .map(|v| {
                self.dim.get(v).copied().ok_or_else(|| {
                    src.invalid(Some("dim"), format!("no dimension for vertex `{v}`"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let field = match field_override {
            Some(f) => f,
            None => match self.field {
                Some(f) => f
                    .to_field()
                    .map_err(|e| src.invalid(Some("field"), e.to_string()))?,
                None => Field::Rational,
            },
        };
        Ok(LoadedQuiver {
            quiver: Arc::new(quiver),
            dims: DimVector(dims),
            field,
        })
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a quiver document. `field_override` replaces the file's field.
pub fn parse_quiver(
    text: &str,
    name: &str,
    field_override: Option<Field>,
) -> Result<LoadedQuiver, IoError> {
    let src = Source { name, text };
    let spec: QuiverSpec = serde_json::from_str(text).map_err(|e| src.syntax(e))?;
    spec.validate(&src, field_override)
}

pub fn load_quiver(path: &Path, field_override: Option<Field>) -> Result<LoadedQuiver, IoError> {
    parse_quiver(&read(path)?, &path.display().to_string(), field_override)
}

/// Parses a representation document; a quiver given by path is resolved
/// against `base_dir`.
pub fn parse_rep(
    text: &str,
    name: &str,
    base_dir: Option<&Path>,
    field_override: Option<Field>,
) -> Result<Representation, IoError> {
    let src = Source { name, text };
    let spec: RepSpec = serde_json::from_str(text).map_err(|e| src.syntax(e))?;
    let lq = match &spec.quiver {
        QuiverRef::Inline(q) => q.validate(&src, field_override)?,
        QuiverRef::Path(p) => {
            let path = base_dir.map_or_else(|| PathBuf::from(p), |b| b.join(p));
            load_quiver(&path, field_override)?
        }
    };
    build_rep(&spec, lq, &src)
}

pub fn load_rep(path: &Path, field_override: Option<Field>) -> Result<Representation, IoError> {
    parse_rep(
        &read(path)?,
        &path.display().to_string(),
        path.parent(),
        field_override,
    )
}

fn build_rep(
    spec: &RepSpec,
    lq: LoadedQuiver,
    src: &Source<'_>,
) -> Result<Representation, IoError> {
    let q = &lq.quiver;
    for id in spec.mats.keys() {
        if q.arrow(id).is_none() {
            return Err(src.invalid(Some(id), format!("matrix given for unknown arrow `{id}`")));
        }
    }
    let mut mats = Vec::with_capacity(q.n_arrows());
    for a in q.arrows() {
        let (rows, cols) = (lq.dims[a.tail], lq.dims[a.head]);
        let Some(m) = spec.mats.get(&a.id) else {
            if rows * cols == 0 {
                mats.push(ExactMatrix::zeros(lq.field, rows, cols));
                continue;
            }
            return Err(src.invalid(Some("mats"), format!("no matrix for arrow `{}`", a.id)));
        };
        let shape_err = |got: String| {
            src.invalid(
                Some(&a.id),
                format!("matrix over `{}` is {got}, expected {rows}x{cols}", a.id),
            )
        };
        if m.len() != rows {
            return Err(shape_err(format!("{} rows", m.len())));
        }
        if let Some(r) = m.iter().find(|r| r.len() != cols) {
            return Err(shape_err(format!("a row of length {}", r.len())));
        }
        let entries = m
            .iter()
            .flatten()
            .map(|e| e.to_scalar(lq.field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| src.invalid(Some(&a.id), format!("arrow `{}`: {e}", a.id)))?;
        mats.push(
            ExactMatrix::from_scalars(lq.field, rows, cols, &entries)
                .map_err(|e| src.invalid(Some(&a.id), e.to_string()))?,
        );
    }
    Representation::new(lq.quiver, lq.field, lq.dims, mats)
        .map_err(|e| src.invalid(quiver_error_key(&e), e.to_string()))
}

pub fn matrix_to_json(m: &ExactMatrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Entry::from_scalar).collect())
        .collect()
}

/// A self-contained document for `v`, with the quiver inline.
pub fn rep_to_spec(v: &Representation) -> RepSpec {
    let q = v.quiver();
    RepSpec {
        quiver: QuiverRef::Inline(QuiverSpec::from_parts(q, v.dims(), v.field())),
        mats: q
            .arrows()
            .iter()
            .zip(v.mats())
            .map(|(a, m)| (a.id.clone(), matrix_to_json(m)))
            .collect(),
    }
}

/// Parses a matrix given as nested JSON arrays of entries.
pub fn matrix_from_json(
    rows: &[Vec<Entry>],
    cols: Option<usize>,
    field: Field,
) -> Result<ExactMatrix, LinalgError> {
    let c = cols.unwrap_or_else(|| rows.first().map_or(0, Vec::len));
    let entries: Vec<FieldScalar> = rows
        .iter()
        .flatten()
        .map(|e| e.to_scalar(field))
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != c) {
        return Err(LinalgError::EntryCount {
            rows: rows.len(),
            cols: c,
            got: entries.len(),
        });
    }
    ExactMatrix::from_scalars(field, rows.len(), c, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const D4: &str = r#"{
  "vertices": ["1", "2", "3", "4"],
  "arrows": [
    {"id": "a", "tail": "1", "head": "2"},
    {"id": "b", "tail": "3", "head": "2"},
    {"id": "c", "tail": "2", "head": "4"}
  ],
  "dim": {"1": 1, "2": 2, "3": 1, "4": 1},
  "field": "Q"
}"#;

    #[test]
    fn quiver_round_trip() {
        let lq = parse_quiver(D4, "d4", None).unwrap();
        assert_eq!(lq.dims, DimVector(vec![1, 2, 1, 1]));
        assert_eq!(lq.field, Field::Rational);
        let spec = QuiverSpec::from_parts(&lq.quiver, &lq.dims, lq.field);
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back = parse_quiver(&text, "x", None).unwrap();
        assert_eq!(*back.quiver, *lq.quiver);
        assert_eq!(back.dims, lq.dims);
        let gf = D4.replace("\"Q\"", "{\"GF\": 7}");
        assert_eq!(parse_quiver(&gf, "x", None).unwrap().field, Field::Prime(7));
        assert_eq!(
            parse_quiver(D4, "x", Some(Field::Prime(5))).unwrap().field,
            Field::Prime(5)
        );
    }

    #[test]
    fn rep_round_trip() {
        let lq = parse_quiver(D4, "d4", None).unwrap();
        for field in [Field::Rational, Field::Prime(11)] {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let v = Representation::random(lq.quiver.clone(), field, lq.dims.clone(), 4, &mut rng)
                .unwrap();
            let text = serde_json::to_string(&rep_to_spec(&v)).unwrap();
            assert_eq!(parse_rep(&text, "v", None, None).unwrap(), v);
        }
        let text = r#"{"quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "tail": "1", "head": "2"}],
            "dim": {"1": 1, "2": 2}}, "mats": {"a": [["1/2", -3]]}}"#;
        let v = parse_rep(text, "v", None, None).unwrap();
        assert_eq!(v.mat(0).get(0, 0).to_string(), "1/2");
        assert_eq!(rep_to_spec(&v).mats["a"][0][0], Entry::Text("1/2".into()));
    }

    #[test]
    fn quiver_by_path() {
        let dir = std::env::temp_dir().join(format!("dquiver-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("q.json"), D4).unwrap();
        let rep =
            r#"{"quiver": "q.json", "mats": {"a": [[1, 0]], "b": [[0, 1]], "c": [[1], [1]]}}"#;
        std::fs::write(dir.join("v.json"), rep).unwrap();
        let v = load_rep(&dir.join("v.json"), None).unwrap();
        assert_eq!(v.dims(), &DimVector(vec![1, 2, 1, 1]));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn diagnostics_carry_lines() {
        let broken = D4.replace("\"head\": \"4\"}", "\"head\": \"4\"");
        let e = parse_quiver(&broken, "d4", None).unwrap_err();
        assert!(matches!(e, IoError::Syntax { .. }), "{e}");
        assert!(e.line().is_some());

        let unknown = D4.replace("\"head\": \"4\"", "\"head\": \"9\"");
        let e = parse_quiver(&unknown, "d4", None).unwrap_err();
        assert_eq!(e.line(), Some(6), "{e}");

        let missing = D4.replace(", \"4\": 1", "");
        let e = parse_quiver(&missing, "d4", None).unwrap_err();
        assert!(e.to_string().contains("vertex `4`"), "{e}");

        let text = format!(
            "{{\"quiver\": {D4},\n\"mats\": {{\"a\": [[1, 0]], \"b\": [[0]], \"c\": [[1], [1]]}}}}"
        );
        let e = parse_rep(&text, "v", None, None).unwrap_err();
        assert!(e.to_string().contains("expected 1x2"), "{e}");
        assert_eq!(e.line(), Some(11));

        let bad_field = D4.replace("\"Q\"", "{\"GF\": 8}");
        assert!(parse_quiver(&bad_field, "d4", None).is_err());
        let bad_entry = format!("{{\"quiver\": {D4}, \"mats\": {{\"a\": [[\"x\", 0]], \"b\": [[0, 1]], \"c\": [[1], [1]]}}}}");
        assert!(parse_rep(&bad_entry, "v", None, None).is_err());
    }

    #[test]
    fn signature_json_shape() {
        let sig = crate::zigzag::RankSignature {
            n: 2,
            version: "dn-v1".into(),
            values: vec![0, 1],
        };
        let json = serde_json::to_value(&sig).unwrap();
        assert_eq!(json["enumeration-version"], "dn-v1");
        assert_eq!(
            serde_json::from_value::<crate::zigzag::RankSignature>(json).unwrap(),
            sig
        );
    }
}
