//! JSON interchange formats.
//!
//! * matrix: `{"rows": r, "cols": c, "entries": [[re, im], ...]}` in row-major order
//! * weights: `{"prefix": [..], "tail": {"constant": x} | {"periodic": [..]}}`
//! * symbol: `{"block_size": k, "coeffs": {"d": matrix, ...}}`
//! * extension: `{"ambient": matrix, "subspace_basis": matrix, "n": int}`
//!
//! Parse failures report a JSON pointer to the offending value.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = String;

    fn try_from(m: MatrixJson) -> std::result::Result<Self, String> {
        if m.entries.len() != m.rows * m.cols {
            return Err(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                m.rows * m.cols,
                m.rows,
                m.cols,
                m.entries.len()
            ));
        }
        if let Some(i) = m.entries.iter().position(|e| !e[0].is_finite() || !e[1].is_finite()) {
            return Err(format!("entry {i} is not finite"));
        }
        Ok(ComplexMatrix::from_fn(m.rows, m.cols, |i, j| {
            let e = m.entries[i * m.cols + j];
            c(e[0], e[1])
        }))
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

/// `#[serde(with = "matrix_serde")]` for `ComplexMatrix` fields.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(json).map_err(serde::de::Error::custom)
    }
}

/// Same as [`matrix_serde`] for optional fields.
pub mod option_matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<ComplexMatrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
        m.as_ref().map(MatrixJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<ComplexMatrix>, D::Error> {
        Option::<MatrixJson>::deserialize(d)?
            .map(|json| ComplexMatrix::try_from(json).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Deserializes `text`, reporting failures with a JSON pointer.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let pointer = json_pointer(err.path());
        let message = err.inner().to_string();
        if err.inner().is_syntax() || err.inner().is_eof() {
            Error::Parse(message)
        } else {
            Error::Schema { pointer, message }
        }
    })?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(value)
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

#[derive(Deserialize)]
struct MatrixDoc(#[serde(with = "matrix_serde")] ComplexMatrix);

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    from_json_str::<MatrixDoc>(text).map(|d| d.0)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix(r#"{"rows": 2, "cols": 2, "entries": [[1,0],[2,0],[0,0],[-1,0.5]]}"#).unwrap();
        assert_eq!(m[(0, 1)], c(2.0, 0.0));
        assert_eq!(m[(1, 1)], c(-1.0, 0.5));
        let back = parse_matrix(&matrix_to_json(&m).to_string()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let err = parse_matrix(r#"{"rows": 1, "cols": 1, "entries": [[1, "x"]]}"#).unwrap_err();
        match err {
            Error::Schema { pointer, .. } => assert_eq!(pointer, "/entries/0/1"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_matrix(r#"{"rows": 2, "cols": 1, "entries": [[1, 0]]}"#),
            Err(Error::Schema { .. })
        ));
        assert!(matches!(parse_matrix("{"), Err(Error::Parse(_))));
    }
}
