//! Module files: a JSON encoding of rings, modules and pairings.
//!
//! Ring elements are flat coefficient vectors (the storage layout of
//! [`RingElem`]); matrices are lists of rows. Output is canonical: compact,
//! with object keys sorted, so that emitting a parsed canonical file
//! reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fl_module::{Block, FLModule, LData};
use crate::matrix::Matrix;
use crate::pairing::{PairedFLModule, Symmetry};
use crate::ring::{Family, Ring, RingElem};

pub type Entry = Vec<i64>;
pub type MatrixJson = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub family: Family,
    pub p: u64,
    pub f: usize,
    pub level: u32,
    pub minimal_poly: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub weights: Vec<i64>,
    pub phi: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LJson {
    pub s: Vec<i64>,
    pub c: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingJson {
    pub epsilon: i64,
    #[serde(rename = "L")]
    pub l: LJson,
    pub gram: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub ring: RingJson,
    pub witt_degree: usize,
    pub rank: usize,
    pub bounds: [i64; 2],
    pub blocks: Vec<BlockJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingJson>,
}

/// Either a plain module or a paired one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Module(FLModule),
    Paired(PairedFLModule),
}

impl Document {
    pub fn module(&self) -> &FLModule {
        match self {
            Document::Module(m) => m,
            Document::Paired(p) => &p.module,
        }
    }

    /// Runs every validator that applies.
    pub fn validate(&self) -> Result<()> {
        match self {
            Document::Module(m) => m.validate(),
            Document::Paired(p) => p.validate(),
        }
    }
}

/// Serializes to canonical compact JSON with sorted keys.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    // serde_json's map type is ordered by key unless `preserve_order` is on
    serde_json::to_value(value).map(|v| v.to_string()).expect("serializable value")
}

pub fn ring_to_json(ring: &Ring) -> RingJson {
    RingJson {
        family: ring.family(),
        p: ring.p(),
        f: ring.f(),
        level: ring.level(),
        minimal_poly: ring.modulus().iter().map(|&c| c as i64).collect(),
    }
}

pub fn ring_from_json(r: &RingJson) -> Result<Ring> {
    if r.minimal_poly.len() != r.f + 1 {
        return Err(Error::InvalidRing(format!("minimal_poly must have {} coefficients", r.f + 1)));
    }
    Ring::with_modulus(r.family, r.p, r.level, &r.minimal_poly)
}

pub fn elem_to_json(x: &RingElem) -> Entry {
    x.coeffs_i64()
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().map(elem_to_json).collect()).collect()
}

fn matrix_from_json(ring: &Ring, m: &MatrixJson, r: usize, block: usize) -> Result<Matrix> {
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(Error::BlockRankMismatch { block });
    }
    let rows = m
        .iter()
        .map(|row| row.iter().map(|e| RingElem::try_from_coeffs(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(ring, rows)
}

pub fn module_to_file(m: &FLModule) -> ModuleFile {
    ModuleFile {
        ring: ring_to_json(&m.ring),
        witt_degree: m.witt_degree(),
        rank: m.rank(),
        bounds: [m.bounds.0, m.bounds.1],
        blocks: m
            .blocks
            .iter()
            .map(|b| BlockJson { weights: b.weights.clone(), phi: matrix_to_json(&b.phi) })
            .collect(),
        pairing: None,
    }
}

pub fn paired_to_file(p: &PairedFLModule) -> ModuleFile {
    let mut f = module_to_file(&p.module);
    f.pairing = Some(PairingJson {
        epsilon: p.symmetry.sign(),
        l: LJson { s: p.l.s.clone(), c: p.l.c.iter().map(elem_to_json).collect() },
        gram: p.gram.iter().map(matrix_to_json).collect(),
    });
    f
}

pub fn document_to_file(d: &Document) -> ModuleFile {
    match d {
        Document::Module(m) => module_to_file(m),
        Document::Paired(p) => paired_to_file(p),
    }
}

/// Builds the in-memory objects. Shape errors (wrong counts, wrong entry
/// lengths) are reported here; the algebraic axioms are left to `validate`.
pub fn file_to_document(f: &ModuleFile) -> Result<Document> {
    let ring = ring_from_json(&f.ring)?;
    if f.blocks.len() != f.witt_degree {
        return Err(Error::DimensionMismatch(format!(
            "witt_degree {} but {} blocks",
            f.witt_degree,
            f.blocks.len()
        )));
    }
    let blocks = f
        .blocks
        .iter()
        .enumerate()
        .map(|(t, b)| {
            if b.weights.len() != f.rank {
                return Err(Error::BlockRankMismatch { block: t });
            }
            Ok(Block { weights: b.weights.clone(), phi: matrix_from_json(&ring, &b.phi, f.rank, t)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let module = FLModule::new(&ring, (f.bounds[0], f.bounds[1]), blocks);
    let Some(pj) = &f.pairing else { return Ok(Document::Module(module)) };
    let symmetry = Symmetry::from_sign(pj.epsilon)?;
    let c = pj.l.c.iter().map(|e| RingElem::try_from_coeffs(&ring, e)).collect::<Result<Vec<_>>>()?;
    let gram = pj
        .gram
        .iter()
        .enumerate()
        .map(|(t, g)| matrix_from_json(&ring, g, f.rank, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Document::Paired(PairedFLModule { module, l: LData { s: pj.l.s.clone(), c }, symmetry, gram }))
}

/// Parse failures, kept apart from algebraic failures.
#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("ParseError: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Model(#[from] Error),
}

pub fn parse_file(text: &str) -> std::result::Result<ModuleFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn parse_document(text: &str) -> std::result::Result<Document, ParseError> {
    Ok(file_to_document(&parse_file(text)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::standard_gram;
    use crate::random::random_paired;
    use crate::ring::make_ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ring in [make_ring(Family::Witt, 7, 2, 2).unwrap(), make_ring(Family::DualNumbers, 5, 1, 3).unwrap()] {
            let p = random_paired(&mut rng, &ring, ring.f(), 2, Symmetry::Symplectic, 1).unwrap();
            let text = to_canonical(&paired_to_file(&p));
            let back = parse_document(&text).unwrap();
            assert_eq!(back, Document::Paired(p));
            assert_eq!(to_canonical(&document_to_file(&back)), text);
        }
    }

    #[test]
    fn keys_are_sorted() {
        let k = make_ring(Family::Witt, 5, 1, 1).unwrap();
        let p = PairedFLModule {
            module: FLModule::from_ints(&k, (0, 1), &[0, 1], &[&[1, 0], &[0, 1]]),
            l: LData::trivial(&k, vec![1]),
            symmetry: Symmetry::Symplectic,
            gram: vec![standard_gram(&k, 2, Symmetry::Symplectic)],
        };
        let text = to_canonical(&paired_to_file(&p));
        assert_eq!(
            text,
            r#"{"blocks":[{"phi":[[[1],[0]],[[0],[1]]],"weights":[0,1]}],"bounds":[0,1],"pairing":{"L":{"c":[[1]],"s":[1]},"epsilon":-1,"gram":[[[[0],[1]],[[4],[0]]]]},"rank":2,"ring":{"f":1,"family":"witt","level":1,"minimal_poly":[0,1],"p":5},"witt_degree":1}"#
        );
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_document("{\"ring\":"), Err(ParseError::Json(_))));
        let text = r#"{"blocks":[{"phi":[[[1]]],"weights":[0,1]}],"bounds":[0,1],"rank":2,"ring":{"f":1,"family":"witt","level":1,"minimal_poly":[0,1],"p":5},"witt_degree":1}"#;
        assert!(matches!(parse_document(text), Err(ParseError::Model(Error::BlockRankMismatch { block: 0 }))));
    }
}
