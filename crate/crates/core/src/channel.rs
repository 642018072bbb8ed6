//! Lossy bosonic channel followed by additive classical Gaussian noise.
//!
//! On characteristic functions the channel acts as
//! `χ'(μ) = χ(√η μ) exp(-(N_n + (1-η)/2)|μ|²)`; on covariance matrices as
//! `V -> η V + (N_n + (1-η)/2) I`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, validation, Result};
use crate::gaussian::{tmsv_cov, CovarianceMatrix, ThermalSpec};

/// Transmissivity `η ∈ [0, 1]` and added classical noise `N_n >= 0` (photons).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    eta: f64,
    n_noise: f64,
}

impl ChannelParams {
    pub fn new(eta: f64, n_noise: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain(format!("transmissivity must lie in [0, 1], got {eta}")));
        }
        if !(n_noise >= 0.0) || !n_noise.is_finite() {
            return Err(domain(format!("noise photon number must be >= 0, got {n_noise}")));
        }
        Ok(Self { eta, n_noise })
    }

    pub fn identity() -> Self {
        Self { eta: 1.0, n_noise: 0.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn n_noise(&self) -> f64 {
        self.n_noise
    }

    /// Beam-splitter angle with `η = cos² θ`.
    pub fn theta(&self) -> f64 {
        self.eta.sqrt().acos()
    }

    /// `N_n' = N_n + (1-η)/2`, the variance added to each quadrature.
    pub fn added_variance(&self) -> f64 {
        self.n_noise + (1.0 - self.eta) / 2.0
    }

    /// Channel equal to applying `self` and then `next`.
    pub fn then(&self, next: &ChannelParams) -> ChannelParams {
        ChannelParams {
            eta: self.eta * next.eta,
            n_noise: next.eta * self.n_noise + next.n_noise,
        }
    }
}

/// Map `χ(μ) -> χ(scale·μ) exp(-damping |μ|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharTransform {
    pub scale: f64,
    pub damping: f64,
}

impl CharTransform {
    /// Characteristic function of the output, given that of the input.
    pub fn apply<F>(&self, chi: F) -> impl Fn(Complex64) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        let CharTransform { scale, damping } = *self;
        move |mu: Complex64| chi(mu * scale) * (-damping * mu.norm_sqr()).exp()
    }
}

pub fn char_transform(params: ChannelParams) -> CharTransform {
    CharTransform {
        scale: params.eta.sqrt(),
        damping: params.added_variance(),
    }
}

/// Applies the channel to the listed modes of a multi-mode covariance matrix.
pub fn apply_to_cov(
    params: ChannelParams,
    cov: &CovarianceMatrix,
    channel_modes: &[usize],
) -> Result<CovarianceMatrix> {
    let n = cov.n_modes();
    let mut scale = vec![1.0; 2 * n];
    let mut added = vec![0.0; 2 * n];
    let mut seen = vec![false; n];
    for &mode in channel_modes {
        if mode >= n {
            return Err(validation(format!("mode index {mode} out of range for {n} modes")));
        }
        if std::mem::replace(&mut seen[mode], true) {
            return Err(validation(format!("mode index {mode} listed twice")));
        }
        let s = params.eta.sqrt();
        for q in [2 * mode, 2 * mode + 1] {
            scale[q] = s;
            added[q] = params.added_variance();
        }
    }
    let v = cov.entries();
    let out = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let base = scale[i] * scale[j] * v[(i, j)];
        if i == j {
            base + added[i]
        } else {
            base
        }
    });
    CovarianceMatrix::new(out)
}

/// `N' = η N + N_n`.
pub fn output_mean_photon(params: ChannelParams, n_in: f64) -> f64 {
    params.eta * n_in + params.n_noise
}

/// Covariance of `(E ⊗ I)` applied to the purification of a thermal input;
/// mode 0 is the channel output, mode 1 the untouched reference.
pub fn joint_output_cov(params: ChannelParams, spec: ThermalSpec) -> CovarianceMatrix {
    apply_to_cov(params, &tmsv_cov(spec), &[0]).expect("mode 0 exists in a two-mode state")
}
