//! JSON file formats for channels, states and codes.
//!
//! Matrices are row-major lists of rows; an entry is either a real number or
//! a `[re, im]` pair.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use secrecy_core::codes::WiretapCode;
use secrecy_core::wiretap::{validate_channel, CqqWiretapChannel};
use secrecy_core::{ComplexMatrix, DensityOperator};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixSpec {
    pub matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChannelSpec {
    #[serde(default)]
    pub name: String,
    pub alphabet: usize,
    pub dim_b: usize,
    pub dim_e: usize,
    pub states: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateSpec {
    #[serde(default)]
    pub name: String,
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CodeSpec {
    pub m: usize,
    pub n: usize,
    pub encoder: Vec<Vec<f64>>,
    #[serde(default)]
    pub decoder: Option<Vec<MatrixSpec>>,
}

impl MatrixSpec {
    pub fn to_matrix(&self, what: &str) -> Result<ComplexMatrix, CliError> {
        to_matrix(&self.matrix, what)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixSpec { matrix: from_matrix(m) }
    }
}

fn to_matrix(rows: &[Vec<Entry>], what: &str) -> Result<ComplexMatrix, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::parse(format!("{what}: expected a nonempty square matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Complex([re, im]) => Complex64::new(re, im),
        Entry::Real(re) => Complex64::new(re, 0.0),
    }))
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<Entry>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Entry::Complex([m[(i, j)].re, m[(i, j)].im])).collect()).collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::parse(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

impl ChannelSpec {
    /// Builds and validates the channel; validation failures name the letter.
    pub fn to_channel(&self) -> Result<CqqWiretapChannel, CliError> {
        if self.states.len() != self.alphabet {
            return Err(CliError::parse(format!(
                "field `states`: {} matrices for an alphabet of {}",
                self.states.len(),
                self.alphabet
            )));
        }
        let mats = self
            .states
            .iter()
            .enumerate()
            .map(|(x, s)| s.to_matrix(&format!("states[{x}]")))
            .collect::<Result<Vec<_>, _>>()?;
        validate_channel(&mats, self.dim_b, self.dim_e).into_result().map_err(|e| CliError::parse(e.to_string()))?;
        CqqWiretapChannel::new(mats, self.dim_b, self.dim_e).map_err(CliError::from)
    }

    pub fn from_channel(name: &str, w: &CqqWiretapChannel) -> Self {
        ChannelSpec {
            name: name.to_string(),
            alphabet: w.alphabet(),
            dim_b: w.dim_b(),
            dim_e: w.dim_e(),
            states: w.states().iter().map(|s| MatrixSpec::from_matrix(s.matrix())).collect(),
        }
    }
}

impl StateSpec {
    pub fn to_state(&self) -> Result<DensityOperator, CliError> {
        let m = to_matrix(&self.matrix, "matrix")?;
        DensityOperator::new(m, self.dims.clone()).map_err(|e| CliError::parse(e.to_string()))
    }
}

impl CodeSpec {
    pub fn to_code(&self, alphabet: usize) -> Result<WiretapCode, CliError> {
        if self.encoder.len() != self.m {
            return Err(CliError::parse(format!("field `encoder`: {} rows for m = {}", self.encoder.len(), self.m)));
        }
        let decoder = match &self.decoder {
            Some(d) => Some(
                d.iter()
                    .enumerate()
                    .map(|(u, e)| e.to_matrix(&format!("decoder[{u}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        WiretapCode::new(alphabet, self.n, self.encoder.clone(), decoder).map_err(|e| CliError::parse(e.to_string()))
    }

    pub fn from_code(code: &WiretapCode) -> Self {
        CodeSpec {
            m: code.messages(),
            n: code.blocklength(),
            encoder: code.encoder().to_vec(),
            decoder: code.decoder().map(|d| d.iter().map(MatrixSpec::from_matrix).collect()),
        }
    }
}

pub fn read_channel(path: &Path) -> Result<CqqWiretapChannel, CliError> {
    read_json::<ChannelSpec>(path)?.to_channel()
}

pub fn read_state(path: &Path) -> Result<DensityOperator, CliError> {
    read_json::<StateSpec>(path)?.to_state()
}

pub fn read_code(path: &Path, alphabet: usize) -> Result<WiretapCode, CliError> {
    read_json::<CodeSpec>(path)?.to_code(alphabet)
}

pub fn read_channel_spec(path: &Path) -> Result<ChannelSpec, CliError> {
    read_json(path)
}
