//! Dense-matrix simulation of the operator circuit: oracle `O`, the
//! alternating sequence of ancilla rotations and oracle calls, and the
//! `<0|.|0>` block it encodes.
//!
//! Joint basis index is `system * 2 + ancilla`, so the ancilla is the least
//! significant factor.

mod circuit;
pub mod generators;
mod pipeline;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::TargetFunction;
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;

pub use circuit::{assemble_circuit, extract_block, oracle_unitary};
pub use generators::{parse_hamiltonian, random_hermitian, tfim_chain};
pub use pipeline::{run_pipeline, BlockEncodingResult, PipelineOptions};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest system dimension accepted by default.
pub const MAX_DIM: usize = 1024;
/// Slack on `||H|| <= 1` before a remap is required.
pub const NORM_SLACK: f64 = 1e-12;

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() > MAX_DIM {
            return Err(Error::InvalidInput(format!("dimension {} exceeds {MAX_DIM}", matrix.nrows())));
        }
        if matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let scale = matrix.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let asym = (&matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if asym > 1e-12 * scale {
            return Err(Error::NotHermitian(asym));
        }
        // remove rounding-level asymmetry so the eigensolver sees an exact Hermitian
        let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { matrix })
    }

    pub fn from_diagonal(lambdas: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(lambdas.len(), lambdas.iter().map(|&l| Complex64::new(l, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `U H U^dag`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        Self::new(u * &self.matrix * u.adjoint())
    }
}

/// Spectral decomposition `H = V diag(lambdas) V^dag`, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub lambdas: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// `V diag(v(lambda)) V^dag`.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, v: F) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &l) in self.lambdas.iter().enumerate() {
            let value = v(l);
            scaled.column_mut(j).iter_mut().for_each(|x| *x *= value);
        }
        scaled * self.vectors.adjoint()
    }

    /// `max |lambda|`.
    pub fn norm(&self) -> f64 {
        self.lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// Same eigenvectors with eigenvalues sent through `map`.
    pub fn mapped<F: Fn(f64) -> f64>(&self, map: F) -> Self {
        Self {
            lambdas: self.lambdas.iter().map(|&l| map(l)).collect(),
            vectors: self.vectors.clone(),
        }
    }
}

pub fn eigendecompose(h: &HermitianOperator) -> EigenDecomposition {
    let eig = nalgebra::SymmetricEigen::new(h.matrix.clone());
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambdas = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(h.dim(), h.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    EigenDecomposition { lambdas, vectors }
}

/// What [`exact_function_of_h`] applies to each eigenvalue.
#[derive(Debug, Clone, Copy)]
pub enum SpectralFunction<'a> {
    /// `series(lambda t + shift)`.
    Series { series: &'a FourierSeries, t: f64, shift: f64 },
    /// `alpha f(lambda)`.
    Target { f: &'a TargetFunction, alpha: f64 },
}

/// `sum_lambda v(lambda) |lambda><lambda|`.
pub fn exact_function_of_h(eig: &EigenDecomposition, function: SpectralFunction<'_>) -> CMatrix {
    match function {
        SpectralFunction::Series { series, t, shift } => eig.apply(|l| series.evaluate(l * t + shift)),
        SpectralFunction::Target { f, alpha } => eig.apply(|l| f.eval(l) * alpha),
    }
}

/// Largest singular value by power iteration on `A^dag A`.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    const TOLERANCE: f64 = 1e-10;
    const MAX_ITERATIONS: usize = 10_000;
    if a.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    let n = a.ncols();
    // fixed, non-symmetric start so no singular direction is missed by design
    let mut v = CVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * (i % 7) as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let ata = a.adjoint() * a;
    let mut estimate = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let w = &ata * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm.sqrt();
        v = w / Complex64::new(norm, 0.0);
        if (next - estimate).abs() <= TOLERANCE * next {
            estimate = next;
            break;
        }
        estimate = next;
    }
    estimate
}

/// `||block psi||^2` for unit `psi`.
pub fn success_probability(block: &CMatrix, psi: &CVector) -> Result<f64> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalizedState(norm));
    }
    if block.ncols() != psi.len() {
        return Err(Error::InvalidInput(format!(
            "state of length {} for a {}x{} block",
            psi.len(),
            block.nrows(),
            block.ncols()
        )));
    }
    Ok((block * psi).norm_squared())
}

/// Oracle time and phase sending `[lambda_minus, lambda_plus]` onto `[-x0, x0]`
/// through `x = lambda t + shift`. Narrow intervals give large `t`.
pub fn remap_interval(lambda_minus: f64, lambda_plus: f64, x0: f64) -> Result<(f64, f64)> {
    if !(lambda_minus.is_finite() && lambda_plus.is_finite() && lambda_minus < lambda_plus) {
        return Err(Error::InvalidInput(format!(
            "empty interval [{lambda_minus}, {lambda_plus}]"
        )));
    }
    if !(x0 > 0.0 && x0 <= std::f64::consts::PI) {
        return Err(Error::InvalidInput(format!("x0 must lie in (0, pi], got {x0}")));
    }
    let half_width = (lambda_plus - lambda_minus) / 2.0;
    let center = (lambda_plus + lambda_minus) / 2.0;
    let t = x0 / half_width;
    if t > 1e6 {
        log::warn!("interval of half width {half_width:e} needs oracle time {t:e}");
    }
    Ok((t, -x0 * center / half_width))
}

/// JSON matrix layout: `{"dim": d, "entries": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim || self.entries.iter().any(|r| r.len() != self.dim) {
            return Err(Error::InvalidInput(format!("matrix file rows do not match dim = {}", self.dim)));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.entries[i][j];
            Complex64::new(re, im)
        }))
    }
}

pub(crate) fn matrix_serde<S: serde::Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixFile::from_matrix(m).serialize(s)
}

pub(crate) fn matrix_deserde<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
    MatrixFile::deserialize(d)?.to_matrix().map_err(serde::de::Error::custom)
}
