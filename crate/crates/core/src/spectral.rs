//! Discretized localization operators as Hermitian matrices on region cells.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hs_engine::coherent_overlap_closed;
use crate::phase_space::GridRegion;

pub const DEFAULT_CELL_CAP: usize = 6000;

/// Matrix `M_ij = h² ⟨φ_{z_j}, φ_{z_i}⟩` over the cells `z_i` of the region, in index order.
pub fn build_operator_matrix(region: &GridRegion, cap: usize) -> Result<DMatrix<Complex64>> {
    let cells = region.cells();
    if cells.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if cells.len() > cap {
        return Err(Error::CellCapExceeded { cells: cells.len(), cap });
    }
    let spec = region.spec();
    let w = spec.cell_area();
    let points: Vec<[f64; 2]> = cells.iter().map(|&k| spec.center_of(k)).collect();
    let n = points.len();
    let rows: Vec<Vec<Complex64>> = points
        .par_iter()
        .map(|&zi| points.iter().map(|&zj| coherent_overlap_closed(zj, zi) * w).collect())
        .collect();
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// All eigenvalues of a Hermitian matrix, in descending order.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::InvalidParameter("matrix is not square".into()));
    }
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidParameter(format!("matrix is not Hermitian at ({i}, {j})")));
            }
        }
    }
    let mut eig: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    if eig.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolve("non-finite eigenvalue".into()));
    }
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// `(Σ λ^p)^{1/p}` over eigenvalues clipped at zero; `p = ∞` gives the largest.
pub fn schatten_norm(eigs: &[f64], p: f64) -> f64 {
    let lmax = eigs.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() {
        return lmax;
    }
    eigs.iter().map(|&v| v.max(0.0).powf(p)).sum::<f64>().powf(1.0 / p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub omega_measure: f64,
    /// Keys `"1"`, `"2"`, `"4"`, `"inf"`.
    pub schatten: BTreeMap<String, f64>,
}

impl SpectralResult {
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn spectrum(region: &GridRegion, cap: usize) -> Result<SpectralResult> {
    let m = build_operator_matrix(region, cap)?;
    let eigenvalues = eigenvalues(&m)?;
    let mut schatten = BTreeMap::new();
    for (key, p) in [("1", 1.0), ("2", 2.0), ("4", 4.0), ("inf", f64::INFINITY)] {
        schatten.insert(key.to_string(), schatten_norm(&eigenvalues, p));
    }
    Ok(SpectralResult { eigenvalues, h: region.spec().h, omega_measure: region.measure(), schatten })
}
