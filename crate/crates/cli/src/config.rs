//! Configuration documents: coupling tensors as nested arrays of exact
//! rationals written `"p/q"`.

use std::fs;
use std::path::Path;

use pfg_core::rational::{fmt_q, parse_q};
use pfg_core::structure::{Tensor, CouplingData};
use pfg_core::{Signature, Q};
use serde::{Deserialize, Serialize};

use crate::CliError;

type Matrix = Vec<Vec<String>>;
type Cube = Vec<Vec<Vec<String>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub k: usize,
    pub kprime: usize,
    pub a: Cube,
    pub b: Cube,
    pub c: Cube,
    pub e: Cube,
    pub g: Matrix,
    pub gprime: Matrix,
    pub signature: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
}

impl ConfigDocument {
    pub fn from_couplings(cd: &CouplingData, signature: Signature) -> Self {
        ConfigDocument {
            k: cd.k,
            kprime: cd.kp,
            a: cube(&cd.a),
            b: cube(&cd.b),
            c: cube(&cd.c),
            e: cube(&cd.e),
            g: matrix(&cd.g),
            gprime: matrix(&cd.gp),
            signature: signature.name().to_string(),
            seed: None,
            cutoff: None,
            suites: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn signature(&self) -> Result<Signature, CliError> {
        Signature::from_name(&self.signature).map_err(|e| CliError::Config(format!("signature: {e}")))
    }

    /// Exact coupling data, with shapes checked against `k` and `kprime`.
    pub fn couplings(&self) -> Result<CouplingData, CliError> {
        let (k, kp) = (self.k, self.kprime);
        let cd = CouplingData {
            k,
            kp,
            a: tensor3("a", &self.a, [k, k, k])?,
            b: tensor3("b", &self.b, [k, kp, k])?,
            c: tensor3("c", &self.c, [kp, kp, kp])?,
            e: tensor3("e", &self.e, [kp, k, k])?,
            g: tensor2("g", &self.g, [k, k])?,
            gp: tensor2("gprime", &self.gprime, [kp, kp])?,
        };
        cd.validated().map_err(|e| CliError::Config(e.to_string()))
    }
}

fn cube(t: &Tensor) -> Cube {
    let d = t.dims();
    (0..d[0])
        .map(|i| (0..d[1]).map(|j| (0..d[2]).map(|l| fmt_q(t.at3(i, j, l))).collect()).collect())
        .collect()
}

fn matrix(t: &Tensor) -> Matrix {
    let d = t.dims();
    (0..d[0]).map(|i| (0..d[1]).map(|j| fmt_q(t.at2(i, j))).collect()).collect()
}

fn entry(field: &str, idx: &[usize], s: &str) -> Result<Q, CliError> {
    parse_q(s).map_err(|e| CliError::Config(format!("{field}{idx:?}: {e}")))
}

fn shape_error(field: &str, idx: &[usize], want: usize, got: usize) -> CliError {
    CliError::Config(format!("{field}{idx:?}: expected length {want}, got {got}"))
}

fn tensor3(field: &str, v: &Cube, dims: [usize; 3]) -> Result<Tensor, CliError> {
    if v.len() != dims[0] {
        return Err(shape_error(field, &[], dims[0], v.len()));
    }
    let mut data = Vec::new();
    for (i, row) in v.iter().enumerate() {
        if row.len() != dims[1] {
            return Err(shape_error(field, &[i], dims[1], row.len()));
        }
        for (j, col) in row.iter().enumerate() {
            if col.len() != dims[2] {
                return Err(shape_error(field, &[i, j], dims[2], col.len()));
            }
            for (l, s) in col.iter().enumerate() {
                data.push(entry(field, &[i, j, l], s)?);
            }
        }
    }
    Tensor::from_vec(&dims, data).map_err(|e| CliError::Config(e.to_string()))
}

fn tensor2(field: &str, v: &Matrix, dims: [usize; 2]) -> Result<Tensor, CliError> {
    if v.len() != dims[0] {
        return Err(shape_error(field, &[], dims[0], v.len()));
    }
    let mut data = Vec::new();
    for (i, row) in v.iter().enumerate() {
        if row.len() != dims[1] {
            return Err(shape_error(field, &[i], dims[1], row.len()));
        }
        for (j, s) in row.iter().enumerate() {
            data.push(entry(field, &[i, j], s)?);
        }
    }
    Tensor::from_vec(&dims, data).map_err(|e| CliError::Config(e.to_string()))
}
