//! Fock matrices from characteristic functions,
//! `σ = ∫ (d²μ/π) χ(μ) D(-μ)`, by polar quadrature.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{thermal_window, FockDensityMatrix};
use super::displacement::displacement_matrix_real;
use super::quadrature::{GaussLaguerre, QuadratureSpec};
use crate::error::{validation, Error, Result};
use crate::perturbation::PerturbationSpec;

/// Two quadrature levels must agree to this before a result is accepted.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Smallest eigenvalue tolerated for a perturbed state.
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const PHI_TRACE_TOL: f64 = 1e-6;

fn integrate<F>(chi: &F, cutoff: usize, quad: &QuadratureSpec) -> DMatrix<Complex64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let d = cutoff;
    let span = 2 * d - 1;
    let m = quad.angular_nodes();
    let phases: Vec<Complex64> = (0..m)
        .map(|b| Complex64::from_polar(1.0, 2.0 * PI * b as f64 / m as f64))
        .collect();
    // twiddle[b][Δ + d - 1] = e^{iΔθ_b}
    let twiddle: Vec<Vec<Complex64>> = phases
        .iter()
        .map(|&p| {
            let inv = p.conj();
            let mut row = vec![Complex64::new(0.0, 0.0); span];
            row[d - 1] = Complex64::new(1.0, 0.0);
            for k in 1..d {
                row[d - 1 + k] = row[d - 2 + k] * p;
                row[d - 1 - k] = row[d - k] * inv;
            }
            row
        })
        .collect();
    let rule = GaussLaguerre::new(quad.radial_nodes());
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    let mut harmonics = vec![Complex64::new(0.0, 0.0); span];
    for (t, w) in rule.scaled(quad.radius_scale()) {
        let r = t.sqrt();
        harmonics.iter_mut().for_each(|h| *h = Complex64::new(0.0, 0.0));
        for (b, &p) in phases.iter().enumerate() {
            let c = chi(p * r);
            for (h, tw) in harmonics.iter_mut().zip(&twiddle[b]) {
                *h += c * tw;
            }
        }
        // r dr = dt/2 and (1/π)∫dθ ≈ (2/M) Σ_b
        let scale = w / m as f64;
        let radial = displacement_matrix_real(r, d);
        for j in 0..d {
            for i in 0..d {
                let delta = i as isize - j as isize;
                let sign = if delta % 2 == 0 { 1.0 } else { -1.0 };
                let h = harmonics[(delta + d as isize - 1) as usize];
                out[(i, j)] += h * (sign * scale * radial[(i, j)]);
            }
        }
    }
    out
}

/// `∫ (d²μ/π) χ(μ) ⟨i|D(-μ)|j⟩` without symmetrization, checked against a
/// refined quadrature level.
pub fn operator_from_charfn<F>(chi: &F, cutoff: usize, quad: &QuadratureSpec) -> Result<DMatrix<Complex64>>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if cutoff == 0 {
        return Err(validation("cutoff must be positive"));
    }
    let coarse = integrate(chi, cutoff, quad);
    let fine = integrate(chi, cutoff, &quad.refined());
    let deviation = coarse
        .iter()
        .zip(fine.iter())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    if deviation > CONVERGENCE_TOL {
        return Err(Error::Convergence {
            deviation,
            tolerance: CONVERGENCE_TOL,
        });
    }
    Ok(fine)
}

/// Single-mode state with characteristic function `chi`.
pub fn state_from_charfn<F>(chi: &F, cutoff: usize, quad: &QuadratureSpec) -> Result<FockDensityMatrix>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    FockDensityMatrix::symmetrized(cutoff, 1, operator_from_charfn(chi, cutoff, quad)?)
}

/// `∫ (d²μ/π) χ_th(μ) μ^a μ*^b D(-μ)` for a thermal `χ_th` of mean `n_mean`.
pub fn thermal_monomial(
    n_mean: f64,
    a: u32,
    b: u32,
    cutoff: usize,
    quad: Option<QuadratureSpec>,
) -> Result<DMatrix<Complex64>> {
    let damping = n_mean + 0.5;
    let quad = quad.unwrap_or_else(|| QuadratureSpec::for_cutoff(cutoff + (a + b) as usize, damping));
    let chi = move |mu: Complex64| (-damping * mu.norm_sqr()).exp() * mu.powu(a) * mu.conj().powu(b);
    operator_from_charfn(&chi, cutoff, &quad)
}

/// Thermal product state together with the first-order operator `φ` of a
/// perturbation spec.
#[derive(Debug, Clone)]
pub struct PerturbedState {
    pub base: FockDensityMatrix,
    pub phi: FockDensityMatrix,
}

impl PerturbedState {
    /// `ρ + ε φ`, rejected if it has an eigenvalue below `-POSITIVITY_TOL`.
    pub fn at(&self, epsilon: f64) -> Result<FockDensityMatrix> {
        let state = self.base.add_scaled(epsilon, &self.phi)?;
        if epsilon != 0.0 {
            let min = state.min_eigenvalue();
            if min < -POSITIVITY_TOL {
                return Err(Error::InvalidState(format!(
                    "perturbed state has eigenvalue {min:.3e} at ε = {epsilon}; use a smaller ε"
                )));
            }
        }
        Ok(state)
    }
}

/// Builds `ρ^{⊗n}` (untruncated weights on the window) and `φ` for `n <= 2`.
pub fn perturbed_state(
    spec: &PerturbationSpec,
    n_mean: f64,
    cutoff: usize,
    quad: Option<QuadratureSpec>,
) -> Result<PerturbedState> {
    let n = spec.n_modes();
    if n > 2 {
        return Err(validation(format!("at most 2 modes are supported, got {n}")));
    }
    let weights = thermal_window(n_mean, cutoff)?;
    let single = FockDensityMatrix::from_diagonal(cutoff, &weights)?;
    let base = if n == 1 { single } else { single.tensor(&single)? };

    let c = spec.amplitude();
    let mut forward = DMatrix::from_element(1, 1, c);
    let mut backward = DMatrix::from_element(1, 1, c.conj());
    for (&k, &l) in spec.k().iter().zip(spec.l()) {
        forward = forward.kronecker(&thermal_monomial(n_mean, k, l, cutoff, quad)?);
        backward = backward.kronecker(&thermal_monomial(n_mean, l, k, cutoff, quad)?);
    }
    let phi = FockDensityMatrix::symmetrized(cutoff, n, forward + backward)?;
    let tr = phi.trace();
    if tr.abs() > PHI_TRACE_TOL {
        return Err(Error::Cutoff(format!(
            "perturbation trace {tr:.3e} exceeds {PHI_TRACE_TOL:.0e} at cutoff {cutoff}"
        )));
    }
    Ok(PerturbedState { base, phi })
}
