use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{validation, Error, Result};
use crate::gaussian::ThermalSpec;

pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated before a matrix is rejected as a state.
pub const NEGATIVITY_TOL: f64 = 1e-6;
pub const DEFAULT_TAIL: f64 = 1e-12;
/// Smallest eigenvalue of a non-diagonal `ρ` accepted by [`trace_quotient`].
pub const CONDITIONING_FLOOR: f64 = 1e-14;

/// Hermitian operator on `n_modes` Fock truncations of dimension `cutoff`;
/// basis index `q·cutoff + r` for two modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    cutoff: usize,
    n_modes: usize,
    entries: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    pub fn new(cutoff: usize, n_modes: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        if !(1..=2).contains(&n_modes) || cutoff == 0 {
            return Err(validation(format!(
                "need 1 or 2 modes and a positive cutoff, got {n_modes} modes, cutoff {cutoff}"
            )));
        }
        let dim = cutoff.pow(n_modes as u32);
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(validation(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let scale = entries.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        for i in 0..dim {
            for j in i..dim {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > HERMITIAN_TOL * scale {
                    return Err(validation(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            cutoff,
            n_modes,
            entries,
        })
    }

    /// Replaces `X` by `(X + X†)/2` before validating.
    pub fn symmetrized(cutoff: usize, n_modes: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        let herm = (&entries + entries.adjoint()).scale(0.5);
        Self::new(cutoff, n_modes, herm)
    }

    pub fn from_diagonal(cutoff: usize, diag: &[f64]) -> Result<Self> {
        let n_modes = if diag.len() == cutoff { 1 } else { 2 };
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::from(x)));
        Self::new(cutoff, n_modes, DMatrix::from_diagonal(&d))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn tensor(&self, other: &FockDensityMatrix) -> Result<FockDensityMatrix> {
        if self.n_modes != 1 || other.n_modes != 1 || self.cutoff != other.cutoff {
            return Err(validation("tensor products need two single-mode matrices of equal cutoff"));
        }
        FockDensityMatrix::new(self.cutoff, 2, self.entries.kronecker(&other.entries))
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &FockDensityMatrix) -> Result<FockDensityMatrix> {
        if self.dim() != other.dim() {
            return Err(validation("dimension mismatch"));
        }
        FockDensityMatrix::new(self.cutoff, self.n_modes, &self.entries + other.entries.scale(s))
    }

    pub fn max_abs_diff(&self, other: &FockDensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_diagonal(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|j| (0..dim).all(|i| i == j || self.entries[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = eigen_blocks(&self.entries)
            .into_iter()
            .flat_map(|b| b.values.iter().copied().collect::<Vec<_>>())
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

/// Eigen-decomposition of one connected block of a Hermitian matrix.
pub(crate) struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

/// Splits a Hermitian matrix into the connected components of its nonzero
/// pattern and diagonalizes each separately.
pub(crate) fn eigen_blocks(m: &DMatrix<Complex64>) -> Vec<EigenBlock> {
    let dim = m.nrows();
    let max = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let floor = 1e-15 * max;
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for j in 0..dim {
        for i in 0..j {
            if m[(i, j)].norm() > floor {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for i in 0..dim {
        let root = find(&mut parent, i);
        groups[root].push(i);
    }
    groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|indices| {
            let n = indices.len();
            let sub = DMatrix::from_fn(n, n, |a, b| m[(indices[a], indices[b])]);
            let eig = SymmetricEigen::new(sub);
            EigenBlock {
                indices,
                values: eig.eigenvalues,
                vectors: eig.eigenvectors,
            }
        })
        .collect()
}

/// `f(H)` for Hermitian `H` via its block eigen-decomposition.
pub(crate) fn hermitian_map(m: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let dim = m.nrows();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for block in eigen_blocks(m) {
        let n = block.indices.len();
        let fd = DVector::from_iterator(n, block.values.iter().map(|&x| Complex64::from(f(x))));
        let sub = &block.vectors * DMatrix::from_diagonal(&fd) * block.vectors.adjoint();
        for a in 0..n {
            for b in 0..n {
                out[(block.indices[a], block.indices[b])] = sub[(a, b)];
            }
        }
    }
    out
}

/// Truncated thermal state, renormalized; the discarded tail `v^cutoff` must
/// not exceed `tail`.
pub fn thermal_fock_tail(n_mean: f64, cutoff: usize, tail: f64) -> Result<FockDensityMatrix> {
    let v = ThermalSpec::new(n_mean)?.ratio();
    let lost = v.powi(cutoff as i32);
    if lost > tail {
        return Err(Error::Cutoff(format!(
            "cutoff {cutoff} leaves tail mass {lost:.2e} > {tail:.1e} at N = {n_mean}"
        )));
    }
    let probs: Vec<f64> = (0..cutoff).map(|n| (1.0 - v) * v.powi(n as i32) / (1.0 - lost)).collect();
    FockDensityMatrix::from_diagonal(cutoff, &probs)
}

pub fn thermal_fock(n_mean: f64, cutoff: usize) -> Result<FockDensityMatrix> {
    thermal_fock_tail(n_mean, cutoff, DEFAULT_TAIL)
}

/// Untruncated thermal weights `(1-v) v^n` on the window `n < cutoff`.
pub(crate) fn thermal_window(n_mean: f64, cutoff: usize) -> Result<Vec<f64>> {
    let v = ThermalSpec::new(n_mean)?.ratio();
    Ok((0..cutoff).map(|n| (1.0 - v) * v.powi(n as i32)).collect())
}

pub fn von_neumann_entropy_nats(rho: &FockDensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for block in eigen_blocks(rho.entries()) {
        for &x in block.values.iter() {
            if x < -NEGATIVITY_TOL {
                return Err(Error::InvalidState(format!("eigenvalue {x:.3e} below tolerance")));
            }
            if x > 0.0 {
                s -= x * x.ln();
            }
        }
    }
    Ok(s)
}

/// `-Tr ρ log₂ ρ` with eigenvalues clamped at zero.
pub fn von_neumann_entropy(rho: &FockDensityMatrix) -> Result<f64> {
    Ok(von_neumann_entropy_nats(rho)? / std::f64::consts::LN_2)
}

/// `Re Tr(φ ρ⁻¹ φ')`, evaluated in the eigenbasis of `ρ`.
pub fn trace_quotient_cross(
    phi: &FockDensityMatrix,
    rho: &FockDensityMatrix,
    phi_other: &FockDensityMatrix,
) -> Result<f64> {
    if phi.dim() != rho.dim() || phi_other.dim() != rho.dim() {
        return Err(validation("dimension mismatch"));
    }
    let dim = rho.dim();
    if rho.is_diagonal() {
        let mut inv = Vec::with_capacity(dim);
        for j in 0..dim {
            let x = rho.entries()[(j, j)].re;
            if !(x > 0.0) {
                return Err(Error::Conditioning(format!("diagonal entry {j} is {x:.3e}")));
            }
            inv.push(1.0 / x);
        }
        let (a, b) = (phi.entries(), phi_other.entries());
        let mut acc = 0.0;
        for j in 0..dim {
            let col: f64 = (0..dim).map(|i| (a[(i, j)] * b[(j, i)]).re).sum();
            acc += col * inv[j];
        }
        return Ok(acc);
    }
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    let mut inv = vec![0.0; dim];
    let mut col = 0;
    for block in eigen_blocks(rho.entries()) {
        for (k, &x) in block.values.iter().enumerate() {
            if x < CONDITIONING_FLOOR {
                return Err(Error::Conditioning(format!(
                    "eigenvalue {x:.3e} below {CONDITIONING_FLOOR:.0e}; reduce the cutoff"
                )));
            }
            inv[col] = 1.0 / x;
            for (a, &row) in block.indices.iter().enumerate() {
                u[(row, col)] = block.vectors[(a, k)];
            }
            col += 1;
        }
    }
    let ut = u.adjoint();
    let a = &ut * phi.entries() * &u;
    let b = &ut * phi_other.entries() * &u;
    let mut acc = 0.0;
    for j in 0..dim {
        let c: f64 = (0..dim).map(|i| (a[(i, j)] * b[(j, i)]).re).sum();
        acc += c * inv[j];
    }
    Ok(acc)
}

/// `Tr(φ² / ρ)`.
pub fn trace_quotient(phi: &FockDensityMatrix, rho: &FockDensityMatrix) -> Result<f64> {
    trace_quotient_cross(phi, rho, phi)
}
