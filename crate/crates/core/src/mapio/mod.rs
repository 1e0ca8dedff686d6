//! `.qmap.json` documents and named fixtures.
//!
//! A document is a single JSON object:
//!
//! ```json
//! {
//!   "kind": "osr",
//!   "dim": 2,
//!   "payload": [ { "sign": 1, "op": { "rows": 2, "cols": 2, "data": [[1.0, 0.0], …] } } ],
//!   "meta": { "name": "identity" }
//! }
//! ```
//!
//! `superop` and `choi` documents carry a single matrix object as payload. Matrix
//! data is row-major, each entry a `[re, im]` pair. Floats are written in the
//! shortest form that parses back to the same bits.

mod fixtures;

use std::fs;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::maps::{choi_from_osr, ChoiMatrix, OsrTerm, Sign, SignedOsr, Superoperator};

pub use fixtures::{gen_fixture, FixtureParams, FIXTURE_NAMES};

/// Conventional file extension.
pub const EXTENSION: &str = ".qmap.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Superop,
    Choi,
    Osr,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Superop => "superop",
            MapKind::Choi => "choi",
            MapKind::Osr => "osr",
        }
    }
}

impl std::str::FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superop" => Ok(MapKind::Superop),
            "choi" => Ok(MapKind::Choi),
            "osr" => Ok(MapKind::Osr),
            other => Err(Error::Parse(format!("unknown map kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Meta {
    pub fn named(name: impl Into<String>) -> Self {
        Self {
            name: Some(name.into()),
            description: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Matrix(ComplexMatrix),
    Terms(Vec<OsrTerm>),
}

/// A map as stored on disk. Shapes are checked on load; Hermiticity is not.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDocument {
    pub kind: MapKind,
    pub dim: usize,
    pub payload: Payload,
    pub meta: Option<Meta>,
}

/// A document converted into its typed representation.
#[derive(Debug, Clone)]
pub enum QuantumMap {
    Superop(Superoperator),
    Choi(ChoiMatrix),
    Osr(SignedOsr),
}

impl MapDocument {
    pub fn from_osr(osr: &SignedOsr, meta: Option<Meta>) -> Self {
        Self {
            kind: MapKind::Osr,
            dim: osr.dim(),
            payload: Payload::Terms(osr.terms().to_vec()),
            meta,
        }
    }

    pub fn from_superop(a: &Superoperator, meta: Option<Meta>) -> Self {
        Self {
            kind: MapKind::Superop,
            dim: a.dim(),
            payload: Payload::Matrix(a.matrix().clone()),
            meta,
        }
    }

    pub fn from_choi(b: &ChoiMatrix, meta: Option<Meta>) -> Self {
        Self {
            kind: MapKind::Choi,
            dim: b.dim(),
            payload: Payload::Matrix(b.matrix().clone()),
            meta,
        }
    }

    /// Typed map. A `choi` payload that is not Hermitian is rejected here.
    pub fn to_map(&self) -> Result<QuantumMap> {
        match (&self.kind, &self.payload) {
            (MapKind::Superop, Payload::Matrix(m)) => Ok(QuantumMap::Superop(Superoperator::new(
                self.dim,
                m.clone(),
            )?)),
            (MapKind::Choi, Payload::Matrix(m)) => {
                Ok(QuantumMap::Choi(ChoiMatrix::new(self.dim, m.clone())?))
            }
            (MapKind::Osr, Payload::Terms(t)) => {
                Ok(QuantumMap::Osr(SignedOsr::new(self.dim, t.clone())?))
            }
            _ => Err(Error::Shape(format!(
                "payload does not match kind '{}'",
                self.kind.as_str()
            ))),
        }
    }

    /// The d²×d² Choi-layout matrix of the map, without any Hermiticity check.
    pub fn choi_layout(&self) -> Result<ComplexMatrix> {
        match (&self.kind, &self.payload) {
            (MapKind::Choi, Payload::Matrix(m)) => Ok(m.clone()),
            _ => match self.to_map()? {
                QuantumMap::Superop(a) => Ok(a.to_choi_matrix()),
                QuantumMap::Choi(b) => Ok(b.matrix().clone()),
                QuantumMap::Osr(osr) => Ok(choi_from_osr(&osr).matrix().clone()),
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        let payload = match &self.payload {
            Payload::Matrix(m) => serde_json::to_value(WireMatrix::from(m)),
            Payload::Terms(terms) => serde_json::to_value(
                terms
                    .iter()
                    .map(|t| WireTerm {
                        sign: i64::from(t.sign.as_i8()),
                        op: WireMatrix::from(&t.op),
                    })
                    .collect::<Vec<_>>(),
            ),
        }
        .expect("finite matrices always serialize");
        let wire = WireDocument {
            kind: self.kind,
            dim: self.dim,
            payload,
            meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("document always serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let wire: WireDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("document: {e}")))?;
        let dim = wire.dim;
        if dim == 0 {
            return Err(Error::Shape("dim must be positive".into()));
        }
        let payload = match wire.kind {
            MapKind::Superop | MapKind::Choi => {
                let m: WireMatrix = serde_json::from_value(wire.payload)
                    .map_err(|e| Error::Parse(format!("payload: {e}")))?;
                let m = m.into_matrix("payload")?;
                if m.shape() != (dim * dim, dim * dim) {
                    return Err(Error::Shape(format!(
                        "payload: {} matrix must be {n}x{n} for dim {dim}, got {}x{}",
                        wire.kind.as_str(),
                        m.rows(),
                        m.cols(),
                        n = dim * dim
                    )));
                }
                Payload::Matrix(m)
            }
            MapKind::Osr => {
                let terms: Vec<WireTerm> = serde_json::from_value(wire.payload)
                    .map_err(|e| Error::Parse(format!("payload: {e}")))?;
                let mut out = Vec::with_capacity(terms.len());
                for (k, term) in terms.into_iter().enumerate() {
                    let sign = Sign::from_i64(term.sign).ok_or_else(|| {
                        Error::Parse(format!(
                            "payload[{k}].sign: expected 1 or -1, got {}",
                            term.sign
                        ))
                    })?;
                    let op = term.op.into_matrix(&format!("payload[{k}].op"))?;
                    if op.shape() != (dim, dim) {
                        return Err(Error::Shape(format!(
                            "payload[{k}].op: operator must be {dim}x{dim}, got {}x{}",
                            op.rows(),
                            op.cols()
                        )));
                    }
                    out.push(OsrTerm::new(sign, op));
                }
                Payload::Terms(out)
            }
        };
        Ok(Self {
            kind: wire.kind,
            dim,
            payload,
            meta: wire.meta,
        })
    }
}

/// Writes a document to `path`.
pub fn save_map(doc: &MapDocument, path: impl AsRef<Path>) -> Result<()> {
    let mut text = doc.to_json_string();
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Reads a document from `path`.
pub fn load_map(path: impl AsRef<Path>) -> Result<MapDocument> {
    MapDocument::from_json_str(&fs::read_to_string(path)?)
}

/// Reads a document from any reader.
pub fn read_map(mut reader: impl Read) -> Result<MapDocument> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    MapDocument::from_json_str(&text)
}

/// Serializes a bare matrix object `{rows, cols, data}`.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&WireMatrix::from(m)).expect("matrix always serializes")
}

pub fn matrix_to_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(WireMatrix::from(m)).expect("matrix always serializes")
}

/// Parses a bare matrix object `{rows, cols, data}`.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let wire: WireMatrix =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    wire.into_matrix("matrix")
}

pub fn matrix_from_value(value: Value) -> Result<ComplexMatrix> {
    let wire: WireMatrix =
        serde_json::from_value(value).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    wire.into_matrix("matrix")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireDocument {
    kind: MapKind,
    dim: usize,
    payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMatrix {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for WireMatrix {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl WireMatrix {
    fn into_matrix(self, field: &str) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Shape(format!(
                "{field}: rows and cols must be positive"
            )));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Shape(format!(
                "{field}: {}x{} matrix needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.data.len()
            )));
        }
        let data = self
            .data
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTerm {
    sign: i64,
    op: WireMatrix,
}
