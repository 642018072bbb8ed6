//! Closed-form coherent information of the noisy lossy channel.
//!
//! For a thermal input the joint output of system and reference is brought to
//! a product of two thermal modes with occupations `N_A`, `N_B` by a two-mode
//! squeezing transformation of parameter `r`, with
//!
//! ```text
//! D       = sqrt((N' + N + 1)^2 - 4 η N (N + 1))
//! N_{A,B} = (D ± (N' - N) - 1) / 2
//! tanh 2r = 2 sqrt(η N (N + 1)) / (N' + N + 1)
//! N       = N_B cosh²r + (N_A + 1) sinh²r
//! ```

use crate::channel::{output_mean_photon, ChannelParams};
use crate::error::{domain, validation, Error, Result};
use crate::gaussian::{g_unchecked, GaussianInputParams, ThermalSpec};

/// Normal-mode data of the joint output for a thermal input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpectrum {
    pub d_big: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub r: f64,
    sinh2: f64,
}

impl JointSpectrum {
    pub fn cosh2_r(&self) -> f64 {
        1.0 + self.sinh2
    }

    pub fn sinh2_r(&self) -> f64 {
        self.sinh2
    }

    /// `|N - (N_B cosh²r + (N_A + 1) sinh²r)|`.
    pub fn residual(&self, n_mean: f64) -> f64 {
        (n_mean - (self.n_b * self.cosh2_r() + (self.n_a + 1.0) * self.sinh2)).abs()
    }

    /// Symplectic eigenvalues `{N_A + 1/2, N_B + 1/2}` in descending order.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let (a, b) = (self.n_a + 0.5, self.n_b + 0.5);
        if a >= b {
            [a, b]
        } else {
            [b, a]
        }
    }

    /// `A = N_A (N_A + 1) sinh⁴ r`.
    pub fn a_weight(&self) -> f64 {
        self.n_a * (self.n_a + 1.0) * self.sinh2 * self.sinh2
    }

    /// `B = N_B (N_B + 1) cosh⁴ r`.
    pub fn b_weight(&self) -> f64 {
        let c2 = self.cosh2_r();
        self.n_b * (self.n_b + 1.0) * c2 * c2
    }
}

pub fn joint_spectrum(params: ChannelParams, spec: ThermalSpec) -> JointSpectrum {
    let (eta, nn) = (params.eta(), params.n_noise());
    let n = spec.n_mean();
    let np = output_mean_photon(params, n);
    let sum = np + n + 1.0;
    // D² = (N + 1 - ηN)² + N_n (2ηN + 2N + 2 + N_n), a sum of non-negative terms
    let lead = n + 1.0 - eta * n;
    let d_big = (lead * lead + nn * (2.0 * eta * n + 2.0 * n + 2.0 + nn)).sqrt();
    // D² - (N - N' + 1)² = 4 (N + 1) N_n and D² - (N' - N + 1)² = 4 N (N_n + 1 - η)
    let n_a = 2.0 * (n + 1.0) * nn / (d_big + n - np + 1.0);
    let n_b = 2.0 * n * (nn + 1.0 - eta) / (d_big + np - n + 1.0);
    // cosh 2r = sum / D, so sinh²r = (sum - D) / 2D with sum² - D² = 4ηN(N+1)
    let sinh2 = 2.0 * eta * n * (n + 1.0) / (d_big * (sum + d_big));
    JointSpectrum {
        d_big,
        n_a,
        n_b,
        r: sinh2.sqrt().asinh(),
        sinh2,
    }
}

/// Coherent information in bits with its three entropy terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentInfoReport {
    pub value: f64,
    pub term_out: f64,
    pub term_a: f64,
    pub term_b: f64,
}

impl CoherentInfoReport {
    fn from_terms(term_out: f64, term_a: f64, term_b: f64) -> Self {
        Self {
            value: term_out - term_a - term_b,
            term_out,
            term_a,
            term_b,
        }
    }
}

/// `I_c = g(N') - g(N_A) - g(N_B)` for a thermal input.
pub fn thermal_coherent_info(params: ChannelParams, spec: ThermalSpec) -> CoherentInfoReport {
    let js = joint_spectrum(params, spec);
    let np = output_mean_photon(params, spec.n_mean());
    CoherentInfoReport::from_terms(g_unchecked(np), g_unchecked(js.n_a), g_unchecked(js.n_b))
}

/// Value of the single-letter capacity formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity {
    Bits(f64),
    /// Noiseless identity channel: the thermal coherent information grows without bound.
    Unbounded,
}

impl Capacity {
    pub fn bits(&self) -> Option<f64> {
        match *self {
            Capacity::Bits(b) => Some(b),
            Capacity::Unbounded => None,
        }
    }
}

/// `max{0, log2 η - log2(1-η) - g(N_n/(1-η))}`, the large-`N` limit of the
/// thermal coherent information.
///
/// At `η = 1` the expression is evaluated as its limit: unbounded without
/// noise, `max{0, -log2 N_n - log2 e}` with noise.
pub fn capacity_conjecture(params: ChannelParams) -> Capacity {
    let (eta, nn) = (params.eta(), params.n_noise());
    if eta == 0.0 {
        return Capacity::Bits(0.0);
    }
    if eta == 1.0 {
        if nn == 0.0 {
            return Capacity::Unbounded;
        }
        let value = -nn.log2() - std::f64::consts::LOG2_E;
        return Capacity::Bits(value.max(0.0));
    }
    let value = eta.log2() - (1.0 - eta).log2() - g_unchecked(nn / (1.0 - eta));
    Capacity::Bits(value.max(0.0))
}

/// Symplectic eigenvalues of the output (`d0`) and of the joint output
/// (`d1 >= d2`) for a single-mode Gaussian input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpectrum {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
}

struct SpectrumParts {
    spectrum: GaussianSpectrum,
    d1_sq: f64,
    d2_sq: f64,
}

fn spectrum_parts(params: ChannelParams, energy: f64, x: f64) -> Result<SpectrumParts> {
    let eta = params.eta();
    let nnp = params.added_variance();
    let e = energy;
    let d0_sq = nnp * nnp + 2.0 * eta * e * nnp + eta * eta * e * e * x;
    let big_x = nnp * nnp + 2.0 * eta * e * nnp + eta / 2.0 + (1.0 - eta).powi(2) * e * e * x;
    let big_y = 0.5 * eta * e * nnp + eta * eta / 16.0 + e * e * nnp * nnp * x;
    let disc = big_x * big_x - 4.0 * big_y;
    if disc < -1e-12 * big_x * big_x {
        return Err(Error::Singular(format!(
            "negative discriminant X^2 - 4Y = {disc:e} for η={eta}, E={e}, x={x}"
        )));
    }
    let d1_sq = 0.5 * (big_x + disc.max(0.0).sqrt());
    let d2_sq = if d1_sq > 0.0 { big_y / d1_sq } else { 0.0 };
    Ok(SpectrumParts {
        spectrum: GaussianSpectrum {
            d0: d0_sq.sqrt(),
            d1: d1_sq.sqrt(),
            d2: d2_sq.sqrt(),
        },
        d1_sq,
        d2_sq,
    })
}

pub fn gaussian_output_spectrum(
    params: ChannelParams,
    input: GaussianInputParams,
) -> Result<GaussianSpectrum> {
    spectrum_parts(params, input.energy(), input.x()).map(|p| p.spectrum)
}

/// `I_c = g(d0 - 1/2) - g(d1 - 1/2) - g(d2 - 1/2)`.
pub fn gaussian_coherent_info(
    params: ChannelParams,
    input: GaussianInputParams,
) -> Result<CoherentInfoReport> {
    let s = gaussian_output_spectrum(params, input)?;
    let term = |d: f64| g_unchecked((d - 0.5).max(0.0));
    Ok(CoherentInfoReport::from_terms(term(s.d0), term(s.d1), term(s.d2)))
}

/// Contributions `f(d_i) = (1/2d) log2((d + 1/2)/(d - 1/2)) d(d²)/dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeTerms {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
}

impl DerivativeTerms {
    /// `dI_c/dx = f0 - f1 - f2`.
    pub fn total(&self) -> f64 {
        self.f0 - self.f1 - self.f2
    }
}

const SINGULAR_TOL: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-7;

fn f_term(d: f64, d_sq_dx: f64) -> Result<f64> {
    if d <= 0.5 + SINGULAR_TOL {
        return Err(Error::Singular(format!(
            "symplectic eigenvalue {d} at the pure-state boundary 1/2"
        )));
    }
    let log_ratio = (1.0 / (d - 0.5)).ln_1p() / std::f64::consts::LN_2;
    Ok(log_ratio * d_sq_dx / (2.0 * d))
}

pub fn derivative_terms(
    params: ChannelParams,
    input: GaussianInputParams,
) -> Result<DerivativeTerms> {
    let e = input.energy();
    let parts = spectrum_parts(params, e, input.x())?;
    let eta = params.eta();
    let nnp = params.added_variance();
    let dx_x = (1.0 - eta).powi(2) * e * e;
    let dy_x = e * e * nnp * nnp;
    let s = parts.spectrum;
    let f0 = f_term(s.d0, eta * eta * e * e)?;
    let gap = parts.d1_sq - parts.d2_sq;
    let sum = parts.d1_sq + parts.d2_sq;
    if gap <= DEGENERATE_TOL * sum {
        // d1 = d2: only the symmetric combination has a limit
        let u = 0.5 * sum;
        let d = u.sqrt();
        if d <= 0.5 + SINGULAR_TOL {
            return Err(Error::Singular("degenerate joint spectrum at the pure-state boundary".into()));
        }
        let log_ratio = (1.0 / (d - 0.5)).ln_1p() / std::f64::consts::LN_2;
        let h = log_ratio / (2.0 * d);
        let dh_dd = -1.0 / (std::f64::consts::LN_2 * (d * d - 0.25) * 2.0 * d) - log_ratio / (2.0 * d * d);
        let dh_du = dh_dd / (2.0 * d);
        let both = h * dx_x + 0.5 * dh_du * (sum * dx_x - 2.0 * dy_x);
        return Ok(DerivativeTerms {
            f0,
            f1: 0.5 * both,
            f2: 0.5 * both,
        });
    }
    // from d1² + d2² = X and d1² d2² = Y
    let dd1 = (parts.d1_sq * dx_x - dy_x) / gap;
    let dd2 = (dy_x - dx_x * parts.d2_sq) / gap;
    Ok(DerivativeTerms {
        f0,
        f1: f_term(s.d1, dd1)?,
        f2: f_term(s.d2, dd2)?,
    })
}

/// `dI_c/dx` at fixed energy, in bits per unit `x`.
pub fn coherent_info_dx(params: ChannelParams, input: GaussianInputParams) -> Result<f64> {
    derivative_terms(params, input).map(|t| t.total())
}

/// Large-energy forms of the derivative contributions as stated for this
/// channel: `f(d0) - f(d1) ≈ -(N_n'/(x E ln 2)) (1/η - η/(1-η)²)`, the limit
/// of `f(d2)`, and the limit `d2 -> N_n'/(1-η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeEnergyAsymptotics {
    pub f0_minus_f1: f64,
    pub f2_limit: f64,
    pub d2_limit: f64,
}

pub fn large_energy_asymptotics(
    params: ChannelParams,
    input: GaussianInputParams,
) -> Result<LargeEnergyAsymptotics> {
    let eta = params.eta();
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain(format!("asymptotics need 0 < η < 1, got {eta}")));
    }
    let (e, x) = (input.energy(), input.x());
    let nnp = params.added_variance();
    let nn = params.n_noise();
    let loss = 1.0 - eta;
    let f0_minus_f1 =
        -nnp / (x * e * std::f64::consts::LN_2) * (1.0 / eta - eta / (loss * loss));
    let f2_limit = if nn == 0.0 {
        0.0
    } else {
        // N_n'² - (1-η)²/4 = N_n (N_n + 1 - η)
        let bracket = nn * (nn + loss);
        let log_ratio = ((nn + loss) / nn).log2();
        3.0 * eta * bracket / (4.0 * x * x * loss.powi(3)) * log_ratio
    };
    Ok(LargeEnergyAsymptotics {
        f0_minus_f1,
        f2_limit,
        d2_limit: nnp / loss,
    })
}

/// Energy above which thermal-shape inputs are expected to maximize the
/// coherent information over a grid in `x`.
pub const DEFAULT_LARGE_ENERGY: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct XOptimum {
    pub x_star: f64,
    pub value: f64,
    /// `true` when the energy is at or above the threshold passed in.
    pub large_energy: bool,
    /// `(x, I_c)` for every grid point, in grid order.
    pub evaluated: Vec<(f64, f64)>,
}

/// Grid argmax of the Gaussian-input coherent information at fixed energy.
/// The first maximum in grid order wins ties.
pub fn argmax_over_x(
    params: ChannelParams,
    energy: f64,
    grid: &[f64],
    large_energy_threshold: f64,
) -> Result<XOptimum> {
    if grid.is_empty() {
        return Err(validation("x grid is empty"));
    }
    if !grid.contains(&1.0) {
        return Err(validation("x grid must contain x = 1"));
    }
    let mut evaluated = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64)> = None;
    for &x in grid {
        let input = GaussianInputParams::new(energy, x, 0.0)?;
        let value = gaussian_coherent_info(params, input)?.value;
        evaluated.push((x, value));
        if best.is_none_or(|(_, v)| value > v) {
            best = Some((x, value));
        }
    }
    let (x_star, value) = best.expect("grid is non-empty");
    Ok(XOptimum {
        x_star,
        value,
        large_energy: energy >= large_energy_threshold,
        evaluated,
    })
}
