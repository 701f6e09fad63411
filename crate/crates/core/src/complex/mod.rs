//! Finite cochain complexes standing in for the de Rham complex, and the
//! Spencer total complex built on them.

mod total;

pub use total::{
    build_total, degenerate_cocycles, subcomplex_check, verify_degeneration, BigradedSpencer, Cell,
    CoboundaryWitness, CocycleElement, CohomologyCheck, DegenerateCocycleSpace, DegenerationReport,
    ProjectionReport, ResidualBlock, ResidualGrade, ResidualReport, SubcomplexReport,
    SubcomplexWitness, Surjectivity,
};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
#[cfg(test)]
use crate::linalg::rat;
use crate::linalg::{format_vector, kernel_basis, parse_rational, MatrixQ, Rational};

/// `C^0 → C^1 → … → C^N` with `d^{k+1} d^k = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    dims: Vec<usize>,
    /// `differentials[k]` is `d^k`, of shape `dims[k+1] × dims[k]`.
    differentials: Vec<MatrixQ>,
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<MatrixQ>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex(
                "at least one degree is required".into(),
            ));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::InvalidComplex(format!(
                    "d^{k} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            let dd = &differentials[k + 1] * &differentials[k];
            if let Some(pos) = dd
                .entries()
                .iter()
                .position(|x| !num_traits::Zero::is_zero(x))
            {
                let (i, j) = (pos / dd.cols(), pos % dd.cols());
                return Err(Error::InvalidComplex(format!(
                    "d^{}·d^{k} != 0: entry ({i}, {j}) is {}",
                    k + 1,
                    dd.get(i, j)
                )));
            }
        }
        Ok(CochainComplex {
            dims,
            differentials,
        })
    }

    /// One point: `dims = [1]`.
    pub fn point() -> Self {
        Self::new(vec![1], vec![]).expect("point complex")
    }

    /// Minimal model of the circle: `dims = [1, 1]`, `d^0 = 0`.
    pub fn circle() -> Self {
        Self::new(vec![1, 1], vec![MatrixQ::zeros(1, 1)]).expect("circle complex")
    }

    /// `dims = [1, 1]` with `d^0 = [1]`, an acyclic model.
    pub fn interval() -> Self {
        Self::new(vec![1, 1], vec![MatrixQ::from_i64(&[&[1]])]).expect("interval complex")
    }

    /// Zero-differential complex with the given dimensions.
    pub fn with_zero_differentials(dims: Vec<usize>) -> Result<Self> {
        let ds = dims
            .windows(2)
            .map(|w| MatrixQ::zeros(w[1], w[0]))
            .collect();
        Self::new(dims, ds)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "point" => Ok(Self::point()),
            "circle" => Ok(Self::circle()),
            "interval" => Ok(Self::interval()),
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        }
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `d^k`; past the top degree this is the zero map to the zero space.
    pub fn differential(&self, k: usize) -> MatrixQ {
        self.differentials
            .get(k)
            .cloned()
            .unwrap_or_else(|| MatrixQ::zeros(self.dim(k + 1), self.dim(k)))
    }

    /// Basis of `ker d^k` (the cocycles `Z^k`).
    pub fn cocycle_basis(&self, k: usize) -> Vec<Vec<Rational>> {
        kernel_basis(&self.differential(k))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("complex file: {e}")))?;
        let mut ds = Vec::with_capacity(file.differentials.len());
        for (k, rows) in file.differentials.iter().enumerate() {
            let rows_q = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|t| parse_rational(t))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let cols = file.dims.get(k).copied().unwrap_or(0);
            let m = MatrixQ::from_rows(rows_q, cols).map_err(|_| {
                Error::InvalidComplex(format!("d^{k} rows must have {cols} entries"))
            })?;
            ds.push(m);
        }
        Self::new(file.dims, ds)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = ComplexFile {
            dims: self.dims.clone(),
            differentials: self
                .differentials
                .iter()
                .map(|d| (0..d.rows()).map(|i| format_vector(d.row(i))).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("complex serializes")
    }

    /// `dim H^k = dim ker d^k − rank d^{k−1}`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|k| {
                let z = self.cocycle_basis(k).len();
                let b = if k == 0 {
                    0
                } else {
                    crate::linalg::rref(&self.differential(k - 1)).rank
                };
                z - b
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    dims: Vec<usize>,
    #[serde(default)]
    differentials: Vec<Vec<Vec<String>>>,
}
