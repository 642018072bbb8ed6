//! Covariance-matrix calculus for Gaussian states.
//!
//! Quadratures are ordered `(q1, p1, ..., qn, pn)` with `a = (q + ip)/sqrt(2)`,
//! so the vacuum covariance matrix is `I/2` and a thermal mode with mean photon
//! number `N` has covariance `(N + 1/2) I`. First moments are not represented.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, validation, Error, Result};

/// Tolerance on the uncertainty relation `nu >= 1/2`.
pub const PHYSICAL_TOL: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-12;

/// Below this the `s log s` term is replaced by its limit.
const ENTROPY_ZERO_CLAMP: f64 = 1e-15;

/// Entropy in bits of a thermal mode with mean photon number `s`:
/// `g(s) = (s+1) log2(s+1) - s log2(s)`.
pub fn bosonic_entropy(s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(domain(format!("mean photon number must be >= 0, got {s}")));
    }
    Ok(g_unchecked(s))
}

/// `g(s)` without the domain check; `s` below the clamp evaluates the limit 0.
pub(crate) fn g_unchecked(s: f64) -> f64 {
    if s < ENTROPY_ZERO_CLAMP {
        return 0.0;
    }
    // (s+1)log(s+1) - s log s = log(s+1) + s log(1 + 1/s)
    ((s + 1.0).ln() + s * (1.0 / s).ln_1p()) / std::f64::consts::LN_2
}

/// Real symmetric `2n x 2n` matrix of quadrature second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps `entries`, checking the shape and symmetry.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(validation(format!(
                "covariance matrix must be square with even positive dimension, got {rows}x{cols}"
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(validation("covariance matrix has non-finite entries"));
        }
        let scale = entries.amax().max(1.0);
        for i in 0..rows {
            for j in (i + 1)..cols {
                if (entries[(i, j)] - entries[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(validation(format!(
                        "covariance matrix not symmetric at ({i},{j}): {} vs {}",
                        entries[(i, j)],
                        entries[(j, i)]
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    /// Direct sum `self ⊕ other` (modes of `other` appended after those of `self`).
    pub fn direct_sum(&self, other: &CovarianceMatrix) -> CovarianceMatrix {
        let a = self.entries.nrows();
        let b = other.entries.nrows();
        let mut out = DMatrix::zeros(a + b, a + b);
        out.view_mut((0, 0), (a, a)).copy_from(&self.entries);
        out.view_mut((a, a), (b, b)).copy_from(&other.entries);
        CovarianceMatrix { entries: out }
    }

    /// Congruence `S V S^T`. `S` is assumed symplectic; no check is made.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<CovarianceMatrix> {
        if s.nrows() != self.entries.nrows() || s.ncols() != self.entries.ncols() {
            return Err(validation("transform dimension does not match covariance matrix"));
        }
        let out = s * &self.entries * s.transpose();
        // symmetrize away rounding
        let sym = (&out + out.transpose()) * 0.5;
        Ok(CovarianceMatrix { entries: sym })
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(self)
    }

    /// `true` when every symplectic eigenvalue is at least `1/2 - PHYSICAL_TOL`.
    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues()
            .map(|nu| nu.iter().all(|&v| v >= 0.5 - PHYSICAL_TOL))
            .unwrap_or(false)
    }
}

/// The symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]` on `n` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Williamson spectrum in descending order.
///
/// Modes are first split into groups with no correlations between them. A
/// single mode contributes `√det`. Larger groups use the moduli of the
/// eigenvalues of `iΩV`, which equal the singular values of the antisymmetric
/// matrix `V^{1/2} Ω V^{1/2}` (similar to `ΩV`); those come in equal pairs and
/// one of each pair is kept.
pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(cov.entries.clone());
    let min_eig = eig.eigenvalues.min();
    if !(min_eig > 0.0) {
        return Err(Error::InvalidState(format!(
            "covariance matrix is not positive definite (min eigenvalue {min_eig:e})"
        )));
    }
    let mut nu = Vec::with_capacity(cov.n_modes());
    for group in mode_groups(&cov.entries) {
        let idx: Vec<usize> = group.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let sub = cov.entries.select_rows(&idx).select_columns(&idx);
        if group.len() == 1 {
            nu.push(sub.determinant().sqrt());
        } else {
            nu.extend(coupled_spectrum(sub));
        }
    }
    nu.sort_by(|x, y| y.total_cmp(x));
    Ok(nu)
}

fn mode_groups(v: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = v.nrows() / 2;
    let coupled = |a: usize, b: usize| {
        (0..2).any(|i| (0..2).any(|j| v[(2 * a + i, 2 * b + j)] != 0.0 || v[(2 * b + j, 2 * a + i)] != 0.0))
    };
    let mut group_of = vec![usize::MAX; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if group_of[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        group_of[start] = id;
        let mut members = vec![start];
        let mut next = 0;
        while next < members.len() {
            let a = members[next];
            next += 1;
            for (b, g) in group_of.iter_mut().enumerate() {
                if *g == usize::MAX && coupled(a, b) {
                    *g = id;
                    members.push(b);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
}

fn coupled_spectrum(v: DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows() / 2;
    let eig = SymmetricEigen::new(v);
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let a = &root * symplectic_form(n) * &root;
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

/// Von Neumann entropy in bits, `Σ g(ν_i - 1/2)`.
pub fn gaussian_entropy(cov: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_eigenvalues(cov)?;
    if let Some(&bad) = nu.iter().find(|&&v| v < 0.5 - PHYSICAL_TOL) {
        return Err(Error::InvalidState(format!(
            "symplectic eigenvalue {bad} violates the uncertainty relation"
        )));
    }
    Ok(nu.iter().map(|&v| g_unchecked((v - 0.5).max(0.0))).sum())
}

/// Mean photon number of a single thermal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    n_mean: f64,
}

impl ThermalSpec {
    pub fn new(n_mean: f64) -> Result<Self> {
        if !(n_mean >= 0.0) || !n_mean.is_finite() {
            return Err(domain(format!("thermal mean photon number must be >= 0, got {n_mean}")));
        }
        Ok(Self { n_mean })
    }

    pub fn n_mean(&self) -> f64 {
        self.n_mean
    }

    /// `v = N / (N + 1)`.
    pub fn ratio(&self) -> f64 {
        self.n_mean / (self.n_mean + 1.0)
    }
}

pub fn thermal_cov(spec: ThermalSpec) -> CovarianceMatrix {
    CovarianceMatrix {
        entries: DMatrix::identity(2, 2) * (spec.n_mean + 0.5),
    }
}

/// Two-mode squeezed vacuum purifying a thermal mode; mode 0 is the system,
/// mode 1 the reference.
pub fn tmsv_cov(spec: ThermalSpec) -> CovarianceMatrix {
    let a = spec.n_mean + 0.5;
    let c = (spec.n_mean * (spec.n_mean + 1.0)).sqrt();
    #[rustfmt::skip]
    let entries = DMatrix::from_row_slice(4, 4, &[
        a,   0.0, c,   0.0,
        0.0, a,   0.0, -c,
        c,   0.0, a,   0.0,
        0.0, -c,  0.0, a,
    ]);
    CovarianceMatrix { entries }
}

/// Single-mode Gaussian input described by its energy and shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInputParams {
    energy: f64,
    x: f64,
    angle: f64,
}

impl GaussianInputParams {
    /// `energy` is `<a†a> + 1/2`; `x = (N + 1/2)^2 / E^2 ∈ (0, 1]`; `angle` rotates
    /// the squeezing axis.
    pub fn new(energy: f64, x: f64, angle: f64) -> Result<Self> {
        if !energy.is_finite() || !x.is_finite() || !angle.is_finite() {
            return Err(domain("gaussian input parameters must be finite"));
        }
        if !(x > 0.0 && x <= 1.0) {
            return Err(domain(format!("shape parameter x must lie in (0, 1], got {x}")));
        }
        if energy * x.sqrt() < 0.5 - 1e-14 {
            return Err(domain(format!(
                "E*sqrt(x) = {} is below 1/2: no physical state has this energy and shape",
                energy * x.sqrt()
            )));
        }
        Ok(Self { energy, x, angle })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// `N + 1/2 = E sqrt(x)`, the symplectic eigenvalue of the input.
    pub fn symplectic_eigenvalue(&self) -> f64 {
        (self.energy * self.x.sqrt()).max(0.5)
    }

    /// Mean photon number of the thermal state this input is squeezed from.
    pub fn thermal_n(&self) -> f64 {
        self.symplectic_eigenvalue() - 0.5
    }
}

/// `R(angle) diag(ν e^{2s}, ν e^{-2s}) R(angle)^T` with `ν = E√x`, `cosh 2s = 1/√x`.
pub fn make_gaussian_input(params: GaussianInputParams) -> CovarianceMatrix {
    let nu = params.symplectic_eigenvalue();
    let two_s = (1.0 / params.x.sqrt()).acosh();
    let (hi, lo) = (nu * two_s.exp(), nu * (-two_s).exp());
    let (sin, cos) = params.angle.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[cos, -sin, sin, cos]);
    let diag = DMatrix::from_row_slice(2, 2, &[hi, 0.0, 0.0, lo]);
    let m = &rot * diag * rot.transpose();
    let sym = (&m + m.transpose()) * 0.5;
    CovarianceMatrix { entries: sym }
}

/// Total mean photon number `tr(V)/2 - n/2`.
pub fn mean_photon(cov: &CovarianceMatrix) -> f64 {
    cov.entries.trace() / 2.0 - cov.n_modes() as f64 / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_function_values() {
        assert_eq!(bosonic_entropy(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(bosonic_entropy(1.0).unwrap(), 2.0, epsilon = 1e-15);
        // 1.5 log2 1.5 - 0.5 log2 0.5
        assert_abs_diff_eq!(bosonic_entropy(0.5).unwrap(), 1.377_443_751_081_734_4, epsilon = 1e-12);
        assert!(matches!(bosonic_entropy(-1e-3), Err(Error::Domain(_))));
        assert!(bosonic_entropy(f64::NAN).is_err());
        assert_eq!(bosonic_entropy(1e-16).unwrap(), 0.0);
    }

    #[test]
    fn entropy_function_matches_geometric_shannon_entropy() {
        for &s in &[1e-6, 0.01, 0.3, 1.0, 4.0, 25.0] {
            let v = s / (s + 1.0);
            let mut h = 0.0;
            let mut p: f64 = 1.0 - v;
            let mut tail = 1.0;
            while tail > 1e-14 {
                if p > 0.0 {
                    h -= p * p.log2();
                }
                tail -= p;
                p *= v;
            }
            assert_abs_diff_eq!(bosonic_entropy(s).unwrap(), h, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectra_of_reference_states() {
        let vac = CovarianceMatrix::vacuum(1);
        assert_abs_diff_eq!(vac.symplectic_eigenvalues().unwrap()[0], 0.5, epsilon = 1e-14);
        let th = thermal_cov(ThermalSpec::new(1.0).unwrap());
        assert_abs_diff_eq!(th.symplectic_eigenvalues().unwrap()[0], 1.5, epsilon = 1e-14);
        for &n in &[0.0, 1.0, 7.5, 50.0] {
            let nu = tmsv_cov(ThermalSpec::new(n).unwrap()).symplectic_eigenvalues().unwrap();
            assert_eq!(nu.len(), 2);
            for v in nu {
                assert_abs_diff_eq!(v, 0.5, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn tmsv_entries() {
        let v = tmsv_cov(ThermalSpec::new(1.0).unwrap());
        assert_abs_diff_eq!(v.entries()[(0, 2)], 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.entries()[(1, 3)], -(2f64.sqrt()), epsilon = 1e-15);
        assert_eq!(tmsv_cov(ThermalSpec::new(0.0).unwrap()), CovarianceMatrix::vacuum(2));
    }

    #[test]
    fn entropies_of_reference_states() {
        assert_eq!(gaussian_entropy(&CovarianceMatrix::vacuum(3)).unwrap(), 0.0);
        let th = thermal_cov(ThermalSpec::new(1.0).unwrap());
        assert_abs_diff_eq!(gaussian_entropy(&th).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gaussian_entropy(&th.direct_sum(&th)).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(CovarianceMatrix::new(asym), Err(Error::Validation(_))));
        assert!(CovarianceMatrix::new(DMatrix::identity(3, 3)).is_err());
        let unphysical = CovarianceMatrix::new(DMatrix::identity(2, 2) * 0.25).unwrap();
        assert!(matches!(gaussian_entropy(&unphysical), Err(Error::InvalidState(_))));
        assert!(!unphysical.is_physical());
    }

    #[test]
    fn squeezed_input_constructor() {
        let th = make_gaussian_input(GaussianInputParams::new(1.5, 1.0, 0.0).unwrap());
        assert_abs_diff_eq!(th.entries()[(0, 0)], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(th.entries()[(1, 1)], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(th.entries()[(0, 1)], 0.0, epsilon = 1e-14);

        let sq = make_gaussian_input(GaussianInputParams::new(1.5, 0.25, 0.0).unwrap());
        let r3 = 3f64.sqrt();
        assert_abs_diff_eq!(sq.entries()[(0, 0)], 0.75 * (2.0 + r3), epsilon = 1e-13);
        assert_abs_diff_eq!(sq.entries()[(1, 1)], 0.75 * (2.0 - r3), epsilon = 1e-13);
        assert_abs_diff_eq!(sq.entries().determinant(), 0.5625, epsilon = 1e-13);
        assert_abs_diff_eq!(mean_photon(&sq), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_input_domain() {
        assert!(GaussianInputParams::new(1.5, 1.2, 0.0).is_err());
        assert!(GaussianInputParams::new(1.5, 0.0, 0.0).is_err());
        assert!(GaussianInputParams::new(0.6, 0.5, 0.0).is_err());
        assert!(GaussianInputParams::new(0.5, 1.0, 0.0).is_ok());
    }

    #[test]
    fn mean_photon_counts() {
        assert_eq!(mean_photon(&CovarianceMatrix::vacuum(1)), 0.0);
        let one = ThermalSpec::new(1.0).unwrap();
        assert_abs_diff_eq!(mean_photon(&thermal_cov(one)), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mean_photon(&tmsv_cov(one)), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn energy_minimized_by_thermal_shape() {
        // fixed symplectic eigenvalue: E = ν/√x decreases toward x = 1
        let nu = 2.5;
        let mut last = f64::INFINITY;
        for i in 1..=20 {
            let x = i as f64 / 20.0;
            let e = nu / x.sqrt();
            let cov = make_gaussian_input(GaussianInputParams::new(e, x, 0.3).unwrap());
            let energy = mean_photon(&cov) + 0.5;
            assert!(energy < last);
            last = energy;
        }
        assert_abs_diff_eq!(last, nu, epsilon = 1e-12);
    }
}
