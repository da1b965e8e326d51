//! JSON inputs: file path, inline JSON, or `-` for stdin.
//!
//! Complex entries are `[re, im]` pairs (a bare number is read as real);
//! matrices are arrays of rows; algebras are
//! `{"n": …, "unitary": [[…]], "blocks": [[a, m], …]}`, and measurements are
//! the same object with `"measurement": true` and every `a = 1`.

use std::io::Read;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use qortho::algebra::{AlgebraSpec, Block, Partition};
use qortho::commutative::RealMatrix;
use qortho::latin::{validate_latin, LatinSquare};
use qortho::mum::Measurement;
use qortho::{ComplexMatrix, Tolerance};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl From<&Entry> for Complex64 {
    fn from(e: &Entry) -> Self {
        match *e {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    n: usize,
    unitary: Vec<Vec<Entry>>,
    blocks: Vec<[usize; 2]>,
    #[serde(default)]
    measurement: bool,
}

/// Reads the raw text behind `--flag`, honouring `-` and inline JSON.
fn read_source(flag: &str, src: &str) -> Result<String, CliError> {
    let t = src.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
            path: format!("{flag} (stdin)"),
            source: e,
        })?;
        return Ok(s);
    }
    std::fs::read_to_string(src).map_err(|e| CliError::Io {
        path: format!("{flag} {src}"),
        source: e,
    })
}

fn parse<T: DeserializeOwned>(flag: &str, src: &str) -> Result<T, CliError> {
    let text = read_source(flag, src)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| CliError::input(format!("{flag}: malformed JSON at `{}`: {}", e.path(), e.inner())))?;
    de.end()
        .map_err(|e| CliError::input(format!("{flag}: trailing characters: {e}")))?;
    Ok(value)
}

fn complex_matrix(flag: &str, rows: &[Vec<Entry>]) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(Complex64::from).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::input(format!("{flag}: {e}")))
}

fn spec_from_json(flag: &str, j: SpecJson, tol: &Tolerance) -> Result<(AlgebraSpec, bool), CliError> {
    let u = complex_matrix(&format!("{flag}.unitary"), &j.unitary)?;
    if u.rows() != j.n || u.cols() != j.n {
        return Err(CliError::input(format!(
            "{flag}: \"n\" is {} but the unitary is {}x{}",
            j.n,
            u.rows(),
            u.cols()
        )));
    }
    let blocks = j.blocks.iter().map(|&[a, m]| Block::new(a, m)).collect();
    Ok((AlgebraSpec::new(u, blocks, tol)?, j.measurement))
}

pub fn algebra(flag: &str, src: &str, tol: &Tolerance) -> Result<AlgebraSpec, CliError> {
    let j: SpecJson = parse(flag, src)?;
    Ok(spec_from_json(flag, j, tol)?.0)
}

/// A measurement: a commutative spec whose blocks `[1, k]` give the ranks.
pub fn measurement(flag: &str, src: &str, tol: &Tolerance) -> Result<Measurement, CliError> {
    let j: SpecJson = parse(flag, src)?;
    let (spec, _) = spec_from_json(flag, j, tol)?;
    if !spec.is_commutative() {
        return Err(CliError::input(format!(
            "{flag}: measurement blocks must all be [1, rank]"
        )));
    }
    let ranks = Partition::new(spec.blocks().iter().map(|b| b.m).collect())?;
    Ok(Measurement::from_unitary(spec.unitary().clone(), &ranks, tol)?)
}

pub fn complex(flag: &str, src: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Entry>> = parse(flag, src)?;
    complex_matrix(flag, &rows)
}

pub fn real_matrix(flag: &str, src: &str) -> Result<RealMatrix, CliError> {
    let rows: Vec<Vec<f64>> = parse(flag, src)?;
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::input(format!("{flag}: matrix rows must be non-empty and of equal length")));
    }
    let data: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(RealMatrix::from_row_slice(rows.len(), cols, &data))
}

pub fn latin(flag: &str, src: &str) -> Result<LatinSquare, CliError> {
    let rows: Vec<Vec<usize>> = parse(flag, src)?;
    validate_latin(rows).map_err(|e| CliError::input(format!("{flag}: {e}")))
}

/// `"2,1"` → `(2, 1)`.
pub fn partition(flag: &str, s: &str) -> Result<Partition, CliError> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::input(format!("{flag}: cannot parse {s:?} as a partition: {e}")))?;
    Partition::new(parts).map_err(|e| CliError::input(format!("{flag}: {e}")))
}
