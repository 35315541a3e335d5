//! JSON documents for quivers, graded Cox data, section quivers and
//! representations.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{parse_rational, RationalMatrix};
use crate::moduli::{assemble, Representation};
use crate::quiver::{Quiver, QuiverFlagSpec};
use crate::toric::{GradedCoxData, SectionQuiver};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// A count written either as a JSON integer or as a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
enum Count {
    Integer(u64),
    Text(String),
}

impl Count {
    fn value<E: serde::de::Error>(self) -> std::result::Result<u64, E> {
        match self {
            Count::Integer(n) => Ok(n),
            Count::Text(t) => t
                .trim()
                .parse()
                .map_err(|_| E::custom(format!("expected a nonnegative integer, got {t:?}"))),
        }
    }
}

fn count<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<usize, D::Error> {
    let n = Count::deserialize(d)?.value()?;
    usize::try_from(n).map_err(serde::de::Error::custom)
}

fn counts<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<u64>, D::Error> {
    Vec::<Count>::deserialize(d)?
        .into_iter()
        .map(Count::value)
        .collect()
}

fn count_pairs<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<(usize, usize)>, D::Error> {
    Vec::<(Count, Count)>::deserialize(d)?
        .into_iter()
        .map(|(t, h)| {
            let t = usize::try_from(t.value()?).map_err(serde::de::Error::custom)?;
            let h = usize::try_from(h.value()?).map_err(serde::de::Error::custom)?;
            Ok((t, h))
        })
        .collect()
}

/// `{"vertices": n, "arrows": [[tail, head], ...], "dims": [1, r_1, ...]}`.
/// Numbers may also be given as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDocument {
    #[serde(deserialize_with = "count")]
    pub vertices: usize,
    #[serde(deserialize_with = "count_pairs")]
    pub arrows: Vec<(usize, usize)>,
    #[serde(deserialize_with = "counts")]
    pub dims: Vec<u64>,
}

impl QuiverDocument {
    pub fn to_spec(&self) -> Result<QuiverFlagSpec> {
        QuiverFlagSpec::new(
            Quiver::new(self.vertices, self.arrows.iter().copied())?,
            self.dims.clone(),
        )
    }

    /// The document of a spec in its canonical labels.
    pub fn from_spec(spec: &QuiverFlagSpec) -> Self {
        QuiverDocument {
            vertices: spec.quiver().vertex_count(),
            arrows: spec
                .quiver()
                .arrows()
                .iter()
                .map(|a| (a.tail, a.head))
                .collect(),
            dims: spec.dims().to_vec(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<QuiverFlagSpec> {
    serde_json::from_str::<QuiverDocument>(text)
        .map_err(parse_err)?
        .to_spec()
}

/// `{"vars": ["x1", ...], "degrees": [[1, 0], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxDocument {
    pub vars: Vec<String>,
    pub degrees: Vec<Vec<i64>>,
}

impl CoxDocument {
    pub fn to_data(&self) -> Result<GradedCoxData> {
        let rank = self
            .degrees
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidDegrees("at least one variable is needed".into()))?;
        GradedCoxData::new(rank, self.vars.clone(), self.degrees.clone())
    }

    pub fn from_data(data: &GradedCoxData) -> Self {
        CoxDocument {
            vars: data.vars().to_vec(),
            degrees: data.degrees().to_vec(),
        }
    }
}

pub fn parse_cox(text: &str) -> Result<GradedCoxData> {
    serde_json::from_str::<CoxDocument>(text)
        .map_err(parse_err)?
        .to_data()
}

/// A section quiver with its labels as exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionQuiverDocument {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
    pub labels: Vec<Vec<u32>>,
    pub degrees: Vec<Vec<i64>>,
}

impl SectionQuiverDocument {
    pub fn from_section_quiver(sq: &SectionQuiver) -> Self {
        SectionQuiverDocument {
            vertices: sq.quiver.vertex_count(),
            arrows: sq
                .quiver
                .arrows()
                .iter()
                .map(|a| (a.tail, a.head))
                .collect(),
            labels: sq.labels.clone(),
            degrees: sq.degrees.clone(),
        }
    }
}

/// A matrix entry: a rational written as a string, or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Integer(i64),
    Text(String),
}

pub type MatrixDocument = Vec<Vec<Entry>>;

/// `{"blocks": [w_1, ..., w_ρ]}` or `{"arrows": [one map per arrow]}`, with
/// matrices given row by row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepresentationDocument {
    Blocks { blocks: Vec<MatrixDocument> },
    Arrows { arrows: Vec<MatrixDocument> },
}

fn matrix_from_document(doc: &MatrixDocument) -> Result<RationalMatrix> {
    let cols = doc.first().map_or(0, Vec::len);
    let rows = doc
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Entry::Integer(n) => Ok(num_rational::BigRational::from_integer((*n).into())),
                    Entry::Text(t) => parse_rational(t),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(rows, cols)
}

/// Rows of rational strings such as `"3/7"`.
pub fn matrix_to_document(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect()
}

pub fn parse_representation(spec: &QuiverFlagSpec, text: &str) -> Result<Representation> {
    let doc: RepresentationDocument = serde_json::from_str(text).map_err(parse_err)?;
    match doc {
        RepresentationDocument::Blocks { blocks } => {
            let blocks = blocks
                .iter()
                .map(matrix_from_document)
                .collect::<Result<Vec<_>>>()?;
            Representation::new(spec, blocks)
        }
        RepresentationDocument::Arrows { arrows } => {
            let maps = arrows
                .iter()
                .map(matrix_from_document)
                .collect::<Result<Vec<_>>>()?;
            assemble(spec, &maps)
        }
    }
}
