//! JSON and CSV documents for states, constellations and density matrices.
//!
//! State: `{"n", "basis": "dicke"|"computational", "re", "im"}`.
//! Constellation: `{"n", "points": [{"alpha", "beta", "mult"}]}`, with
//! `β = π` standing for the point at infinity.
//! Density matrix: `{"dim", "basis": "symmetric"|"computational", "k", "re", "im"}`
//! with row-major nested arrays.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::majorana::{MajoranaConstellation, ProjectiveRoot};
use crate::state::{FullState, SymmetricState};

/// Tolerance used to validate density matrices read from documents.
pub const DENSITY_READ_TOL: f64 = 1e-8;

/// A state in either basis.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Symmetric(SymmetricState),
    Full(FullState),
}

impl State {
    pub fn n(&self) -> usize {
        match self {
            State::Symmetric(s) => s.n(),
            State::Full(f) => f.n(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub n: usize,
    pub basis: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDocument {
    pub alpha: f64,
    pub beta: f64,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstellationDocument {
    pub n: usize,
    pub points: Vec<PointDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityDocument {
    pub dim: usize,
    pub basis: String,
    pub k: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

fn split(v: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    (v.iter().map(|z| z.re).collect(), v.iter().map(|z| z.im).collect())
}

fn join(re: &[f64], im: &[f64]) -> Result<Vec<Complex64>> {
    if re.len() != im.len() {
        return Err(Error::Format(format!(
            "re has {} entries but im has {}",
            re.len(),
            im.len()
        )));
    }
    Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

impl From<&State> for StateDocument {
    fn from(s: &State) -> Self {
        let (basis, amps) = match s {
            State::Symmetric(s) => ("dicke", s.coeffs()),
            State::Full(f) => ("computational", f.amplitudes()),
        };
        let (re, im) = split(amps);
        Self {
            n: s.n(),
            basis: basis.into(),
            re,
            im,
        }
    }
}

impl TryFrom<&StateDocument> for State {
    type Error = Error;

    fn try_from(d: &StateDocument) -> Result<Self> {
        let amps = join(&d.re, &d.im)?;
        let state = match d.basis.as_str() {
            "dicke" => State::Symmetric(SymmetricState::new(amps)?),
            "computational" => State::Full(FullState::new(d.n, amps)?),
            other => return Err(Error::Format(format!("unknown state basis {other:?}"))),
        };
        if state.n() != d.n {
            return Err(Error::DimensionMismatch {
                expected: d.n,
                actual: state.n(),
            });
        }
        Ok(state)
    }
}

pub fn state_to_json(s: &State) -> String {
    serde_json::to_string_pretty(&StateDocument::from(s)).expect("plain data serializes")
}

pub fn state_from_json(text: &str) -> Result<State> {
    let doc: StateDocument = serde_json::from_str(text).map_err(json_err)?;
    State::try_from(&doc)
}

impl From<&MajoranaConstellation> for ConstellationDocument {
    fn from(c: &MajoranaConstellation) -> Self {
        let points = c
            .points()
            .iter()
            .map(|(p, mult)| {
                let (alpha, beta) = p.angles();
                PointDocument {
                    alpha,
                    beta,
                    mult: *mult,
                }
            })
            .collect();
        Self { n: c.n(), points }
    }
}

impl TryFrom<&ConstellationDocument> for MajoranaConstellation {
    type Error = Error;

    fn try_from(d: &ConstellationDocument) -> Result<Self> {
        let points = d
            .points
            .iter()
            .map(|p| (ProjectiveRoot::from_angles(p.alpha, p.beta), p.mult))
            .collect();
        let c = MajoranaConstellation::new(points)?;
        if c.n() != d.n {
            return Err(Error::DimensionMismatch {
                expected: d.n,
                actual: c.n(),
            });
        }
        Ok(c)
    }
}

pub fn constellation_to_json(c: &MajoranaConstellation) -> String {
    serde_json::to_string_pretty(&ConstellationDocument::from(c)).expect("plain data serializes")
}

pub fn constellation_from_json(text: &str) -> Result<MajoranaConstellation> {
    let doc: ConstellationDocument = serde_json::from_str(text).map_err(json_err)?;
    MajoranaConstellation::try_from(&doc)
}

/// Rows `alpha,beta,mult` under a header line.
pub fn constellation_csv(c: &MajoranaConstellation) -> String {
    let mut out = String::from("alpha,beta,mult\n");
    for p in ConstellationDocument::from(c).points {
        writeln!(out, "{:.17e},{:.17e},{}", p.alpha, p.beta, p.mult).expect("string write");
    }
    out
}

impl From<&DensityMatrix> for DensityDocument {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        let row = |i: usize, f: fn(&Complex64) -> f64| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect();
        let basis = match rho.basis() {
            Basis::Symmetric { .. } => "symmetric",
            Basis::Computational { .. } => "computational",
        };
        Self {
            dim: rho.dim(),
            basis: basis.into(),
            k: rho.k(),
            re: (0..m.nrows()).map(|i| row(i, |z| z.re)).collect(),
            im: (0..m.nrows()).map(|i| row(i, |z| z.im)).collect(),
        }
    }
}

impl TryFrom<&DensityDocument> for DensityMatrix {
    type Error = Error;

    fn try_from(d: &DensityDocument) -> Result<Self> {
        let basis = match d.basis.as_str() {
            "symmetric" => Basis::Symmetric { k: d.k },
            "computational" => Basis::Computational { k: d.k },
            other => return Err(Error::Format(format!("unknown density basis {other:?}"))),
        };
        if basis.dim() != d.dim || d.re.len() != d.dim || d.im.len() != d.dim {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: d.dim,
            });
        }
        let mut entries = DMatrix::zeros(d.dim, d.dim);
        for (i, (re, im)) in d.re.iter().zip(&d.im).enumerate() {
            if re.len() != d.dim {
                return Err(Error::DimensionMismatch {
                    expected: d.dim,
                    actual: re.len(),
                });
            }
            for (j, z) in join(re, im)?.into_iter().enumerate() {
                entries[(i, j)] = z;
            }
        }
        DensityMatrix::new(basis, entries, DENSITY_READ_TOL)
    }
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityDocument::from(rho)).expect("plain data serializes")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let doc: DensityDocument = serde_json::from_str(text).map_err(json_err)?;
    DensityMatrix::try_from(&doc)
}
