//! The channel on truncated Fock space.
//!
//! Both stages are phase covariant, so `|n⟩⟨n'| -> Σ T[m, m'; n, n'] |m⟩⟨m'|`
//! only couples `m - m' = n - n'`. For each offset `Δ` the transfer is stored
//! as a dense `d×d` matrix in `(m, n)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::density::FockDensityMatrix;
use super::displacement::displacement_matrix_real;
use super::quadrature::GaussLaguerre;
use crate::channel::ChannelParams;
use crate::error::{validation, Error, Result};

/// Trace change beyond which a state is considered truncated too hard.
pub const TRACE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct FockChannel {
    params: ChannelParams,
    cutoff: usize,
    /// `transfer[Δ + d - 1][(m, n)]`, zero where `m - Δ` or `n - Δ` leaves the window.
    transfer: Vec<DMatrix<f64>>,
}

fn in_window(i: isize, d: usize) -> bool {
    i >= 0 && (i as usize) < d
}

fn loss_transfer(eta: f64, d: usize) -> Vec<DMatrix<f64>> {
    let mut binom = vec![vec![0.0f64; d]; d];
    for n in 0..d {
        binom[n][0] = 1.0;
        for k in 1..=n {
            binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0.0 };
        }
    }
    let sq = eta.sqrt();
    (0..2 * d - 1)
        .map(|idx| {
            let delta = idx as isize - (d as isize - 1);
            DMatrix::from_fn(d, d, |m, n| {
                let (mp, np) = (m as isize - delta, n as isize - delta);
                if n < m || !in_window(mp, d) || !in_window(np, d) {
                    return 0.0;
                }
                let (mp, np, k) = (mp as usize, np as usize, n - m);
                (binom[n][k] * binom[np][k]).sqrt()
                    * sq.powi((m + mp) as i32)
                    * (1.0 - eta).powi(k as i32)
            })
        })
        .collect()
}

/// Averaging `D(α) · D(α)†` over `exp(-|α|²/N_n)/(π N_n)`; the angular
/// average enforces `m - n = m' - n'` exactly, leaving a radial integral.
fn noise_transfer(n_noise: f64, d: usize, nodes: usize) -> Vec<DMatrix<f64>> {
    let rule = GaussLaguerre::new(nodes);
    let scale = 1.0 / n_noise + 1.0;
    let samples: Vec<(f64, DMatrix<f64>)> = rule
        .scaled_damped(scale, 1.0 / n_noise)
        .map(|(t, w)| (w / n_noise, displacement_matrix_real(t.sqrt(), d)))
        .collect();
    (0..2 * d - 1)
        .into_par_iter()
        .map(|idx| {
            let delta = idx as isize - (d as isize - 1);
            DMatrix::from_fn(d, d, |m, n| {
                let (mp, np) = (m as isize - delta, n as isize - delta);
                if !in_window(mp, d) || !in_window(np, d) {
                    return 0.0;
                }
                samples
                    .iter()
                    .map(|(w, r)| w * r[(m, n)] * r[(mp as usize, np as usize)])
                    .sum()
            })
        })
        .collect()
}

impl FockChannel {
    pub fn new(params: ChannelParams, cutoff: usize) -> Result<Self> {
        Self::with_noise_nodes(params, cutoff, cutoff + 8)
    }

    /// `noise_nodes >= cutoff` integrates the noise average exactly.
    pub fn with_noise_nodes(params: ChannelParams, cutoff: usize, noise_nodes: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(validation("cutoff must be positive"));
        }
        let loss = loss_transfer(params.eta(), cutoff);
        let transfer = if params.n_noise() == 0.0 {
            loss
        } else {
            let noise = noise_transfer(params.n_noise(), cutoff, noise_nodes.max(8));
            noise.iter().zip(&loss).map(|(a, b)| a * b).collect()
        };
        Ok(Self {
            params,
            cutoff,
            transfer,
        })
    }

    pub fn params(&self) -> ChannelParams {
        self.params
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `⟨m|E(|n⟩⟨n'|)|m'⟩`.
    pub fn element(&self, m: usize, mp: usize, n: usize, np: usize) -> f64 {
        let delta = m as isize - mp as isize;
        if n as isize - np as isize != delta {
            return 0.0;
        }
        self.transfer[(delta + self.cutoff as isize - 1) as usize][(m, n)]
    }

    /// Applies the channel to `mode` of an operator on `n_modes` truncations,
    /// without any trace check.
    pub fn apply_operator(
        &self,
        x: &DMatrix<Complex64>,
        n_modes: usize,
        mode: usize,
    ) -> Result<DMatrix<Complex64>> {
        let d = self.cutoff;
        let dim = d.pow(n_modes as u32);
        if mode >= n_modes || x.nrows() != dim || x.ncols() != dim {
            return Err(validation(format!(
                "operator of size {}x{} does not match {n_modes} modes at cutoff {d} (mode {mode})",
                x.nrows(),
                x.ncols()
            )));
        }
        let other = dim / d;
        // flat index of (mode value, rest of the modes)
        let flat = |target: usize, rest: usize| match (n_modes, mode) {
            (1, _) => target,
            (_, 0) => target * d + rest,
            _ => rest * d + target,
        };
        let columns: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|col| {
                let (mp, rp) = match (n_modes, mode) {
                    (1, _) => (col, 0),
                    (_, 0) => (col / d, col % d),
                    _ => (col % d, col / d),
                };
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                // m - mp = n - np, so each input column (np, rp) is read once
                for np in 0..d {
                    let src = x.column(flat(np, rp));
                    for n in 0..d {
                        let delta = n as isize - np as isize;
                        let m = mp as isize + delta;
                        if m < 0 || m >= d as isize {
                            continue;
                        }
                        let m = m as usize;
                        let coef = self.transfer[(delta + d as isize - 1) as usize][(m, n)];
                        if coef == 0.0 {
                            continue;
                        }
                        for r in 0..other {
                            out[flat(m, r)] += src[flat(n, r)] * coef;
                        }
                    }
                }
                out
            })
            .collect();
        let mut y = DMatrix::<Complex64>::zeros(dim, dim);
        for (col, entries) in columns.into_iter().enumerate() {
            y.column_mut(col).copy_from_slice(&entries);
        }
        Ok(y)
    }

    /// Applies the channel to each listed mode of a state and checks that
    /// the trace is preserved to `TRACE_GUARD`.
    pub fn apply(&self, rho: &FockDensityMatrix, modes: &[usize]) -> Result<FockDensityMatrix> {
        if rho.cutoff() != self.cutoff {
            return Err(validation(format!(
                "state cutoff {} differs from channel cutoff {}",
                rho.cutoff(),
                self.cutoff
            )));
        }
        let mut seen = vec![false; rho.n_modes()];
        let mut x = rho.entries().clone();
        for &mode in modes {
            if mode >= rho.n_modes() || std::mem::replace(&mut seen[mode], true) {
                return Err(validation(format!("invalid or repeated mode {mode}")));
            }
            x = self.apply_operator(&x, rho.n_modes(), mode)?;
        }
        let out = FockDensityMatrix::symmetrized(self.cutoff, rho.n_modes(), x)?;
        let lost = rho.trace() - out.trace();
        if lost.abs() > TRACE_GUARD {
            return Err(Error::Cutoff(format!(
                "channel output lost trace {lost:.3e} at cutoff {}; increase the cutoff",
                self.cutoff
            )));
        }
        Ok(out)
    }
}

/// Applies the channel to every mode of `rho`.
pub fn apply_channel_fock(params: ChannelParams, rho: &FockDensityMatrix) -> Result<FockDensityMatrix> {
    let modes: Vec<usize> = (0..rho.n_modes()).collect();
    FockChannel::new(params, rho.cutoff())?.apply(rho, &modes)
}
