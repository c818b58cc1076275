//! File formats: OFF/nOFF meshes, CSV distance matrices, JSON complexes,
//! chains and vertex functions, and the corpus writer.

mod csv;
mod json;
mod off;
mod writer;

use std::path::Path;

pub use csv::{parse_distance_csv, write_distance_csv};
pub use json::{
    parse_chain_json, parse_complex_json, parse_function_json, q_to_value, value_to_q, ChainFile, ComplexJson,
    EdgeLengthJson, SimplexJson,
};
pub use off::{parse_off, write_off, OffMesh};
pub use writer::{write_corpus, CorpusSizes};

use crate::complex::WeightedComplex;
use crate::error::{Error, Result};

/// Reads a complex from `.off` or `.json`, chosen by extension.
pub fn read_complex(path: &Path) -> Result<WeightedComplex> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("off") => parse_off(&text)?.complex(),
        Some("json") => parse_complex_json(&text),
        _ => Err(Error::Parse(format!("unknown complex format for {}", path.display()))),
    }
}
