//! First-order non-Gaussian perturbations of a product thermal input.
//!
//! A spec `(k, l, c, ε)` modulates the characteristic function of `ρ^{⊗n}` as
//!
//! ```text
//! χ_ε(μ) = χ(μ) [1 + ε (c μ^k μ*^l + c* μ*^k μ^l)],   Σk = Σl = m >= 1
//! ```
//!
//! and the resulting operator `φ` shifts entropies at order `ε²` by
//! `-(ε²/2) Tr(φ²/ρ)`. All shifts are returned in nats.

use num_complex::Complex64;

use crate::channel::{output_mean_photon, ChannelParams};
use crate::coherent::joint_spectrum;
use crate::error::{domain, validation, Error, Result};
use crate::gaussian::ThermalSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    k: Vec<u32>,
    l: Vec<u32>,
    c: Complex64,
    epsilon: f64,
}

impl PerturbationSpec {
    pub fn new(k: Vec<u32>, l: Vec<u32>, c: Complex64, epsilon: f64) -> Result<Self> {
        if k.is_empty() || k.len() != l.len() {
            return Err(validation(format!(
                "exponent vectors must be non-empty and of equal length, got {} and {}",
                k.len(),
                l.len()
            )));
        }
        let (mk, ml): (u32, u32) = (k.iter().sum(), l.iter().sum());
        if mk != ml || mk == 0 {
            return Err(validation(format!(
                "exponent sums must agree and be positive, got {mk} and {ml}"
            )));
        }
        if !c.re.is_finite() || !c.im.is_finite() || !epsilon.is_finite() {
            return Err(validation("amplitude and strength must be finite"));
        }
        Ok(Self { k, l, c, epsilon })
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn l(&self) -> &[u32] {
        &self.l
    }

    pub fn amplitude(&self) -> Complex64 {
        self.c
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..self.clone() }
    }

    pub fn n_modes(&self) -> usize {
        self.k.len()
    }

    /// Total degree `m = Σk = Σl`.
    pub fn order(&self) -> u32 {
        self.k.iter().sum()
    }

    /// `k == l`: the two monomials coincide and only `Re c` survives.
    pub fn is_diagonal(&self) -> bool {
        self.k == self.l
    }

    /// `Π kᵢ! lᵢ!`.
    pub fn factorial_product(&self) -> f64 {
        self.k.iter().chain(&self.l).map(|&n| factorial(n)).product()
    }

    /// Same perturbation with modes reordered by `perm` (`new[i] = old[perm[i]]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_modes();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(validation("not a permutation of the modes"));
        }
        Ok(Self {
            k: perm.iter().map(|&p| self.k[p]).collect(),
            l: perm.iter().map(|&p| self.l[p]).collect(),
            ..self.clone()
        })
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(m: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * f64::from(m - i) / f64::from(i + 1))
}

/// Amplitude weight `c₀` with `Tr(φ²/ρ) = 2 c₀ Π(kᵢ! lᵢ!) / [N(N+1)]^m`:
/// `|c|²` when `k ≠ l`, `2 (Re c)²` when `k = l`.
pub fn c_zero(spec: &PerturbationSpec) -> f64 {
    if spec.is_diagonal() {
        2.0 * spec.c.re * spec.c.re
    } else {
        spec.c.norm_sqr()
    }
}

fn thermal_scale(n_mean: f64, m: u32, what: &str) -> Result<f64> {
    if !(n_mean > 0.0) || !n_mean.is_finite() {
        return Err(Error::Singular(format!(
            "{what} mean photon number must be positive, got {n_mean}"
        )));
    }
    Ok((n_mean * (n_mean + 1.0)).powi(m as i32))
}

/// `Tr(φ²/ρ^{⊗n})` for a product thermal state of mean photon number `n_mean`.
pub fn moment_trace(spec: &PerturbationSpec, n_mean: f64) -> Result<f64> {
    let scale = thermal_scale(n_mean, spec.order(), "input")?;
    Ok(2.0 * c_zero(spec) * spec.factorial_product() / scale)
}

/// `Tr(φ φ'/ρ^{⊗n})` for two perturbations at unit strength.
///
/// Nonzero only when `(k', l')` equals `(k, l)` or its swap `(l, k)`; the
/// swapped spec describes the same operator with amplitude `c*`.
pub fn cross_term(a: &PerturbationSpec, b: &PerturbationSpec, n_mean: f64) -> Result<f64> {
    if a.n_modes() != b.n_modes() {
        return Err(validation(format!(
            "mode counts differ: {} and {}",
            a.n_modes(),
            b.n_modes()
        )));
    }
    let scale = thermal_scale(n_mean, a.order(), "input")?;
    let mut weight = 0.0;
    if a.k == b.k && a.l == b.l {
        weight += 2.0 * (a.c * b.c.conj()).re;
    }
    if a.k == b.l && a.l == b.k {
        weight += 2.0 * (a.c * b.c).re;
    }
    Ok(weight * a.factorial_product() / scale)
}

/// `S(ρ_ε) - S(ρ)` in nats.
pub fn input_entropy_shift(spec: &PerturbationSpec, n_mean: f64) -> Result<f64> {
    Ok(-0.5 * spec.epsilon * spec.epsilon * moment_trace(spec, n_mean)?)
}

/// Output entropy shift in nats. The channel maps the perturbation onto the
/// same monomial of the output thermal state with amplitude `η^m c`.
pub fn output_entropy_shift(
    spec: &PerturbationSpec,
    n_mean: f64,
    params: ChannelParams,
) -> Result<f64> {
    ThermalSpec::new(n_mean)?;
    let m = spec.order();
    let np = output_mean_photon(params, n_mean);
    let scale = thermal_scale(np, m, "output")?;
    let gain = params.eta().powi(2 * m as i32);
    let eps2 = spec.epsilon * spec.epsilon;
    Ok(-0.5 * eps2 * gain * 2.0 * c_zero(spec) * spec.factorial_product() / scale)
}

/// `Σ_j C(m,j)² b^j a^{m-j}` with `a, b` the joint weights divided by `N(N+1)`.
fn binomial_sum(m: u32, a: f64, b: f64) -> f64 {
    (0..=m)
        .map(|j| {
            let c = binomial(m, j);
            c * c * b.powi(j as i32) * a.powi((m - j) as i32)
        })
        .sum()
}

fn scaled_weights(n_mean: f64, params: ChannelParams) -> Result<(f64, f64)> {
    let spec = ThermalSpec::new(n_mean)?;
    if !(n_mean > 0.0) {
        return Err(Error::Singular("input mean photon number must be positive".into()));
    }
    let js = joint_spectrum(params, spec);
    let norm = n_mean * (n_mean + 1.0);
    Ok((js.a_weight() / norm, js.b_weight() / norm))
}

/// Joint (output plus reference) entropy shift in nats, from the binomial sum
/// over the normal-mode weights. Vanishes for the identity channel, where the
/// joint state stays pure.
pub fn joint_entropy_shift(
    spec: &PerturbationSpec,
    n_mean: f64,
    params: ChannelParams,
) -> Result<f64> {
    let m = spec.order();
    let (a, b) = scaled_weights(n_mean, params)?;
    let base = moment_trace(spec, n_mean)?;
    Ok(-0.5 * spec.epsilon * spec.epsilon * base * binomial_sum(m, a, b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedSum {
    pub value: f64,
    /// `N > N_n / (1 - η)`, the regime in which `value < 1` is expected.
    pub condition_met: bool,
}

impl NormalizedSum {
    pub fn below_one(&self) -> bool {
        self.value < 1.0
    }
}

/// `Σ_j C(m,j)² B^j A^{m-j} / [N(N+1)]^m`.
pub fn normalized_sum(m: u32, n_mean: f64, params: ChannelParams) -> Result<NormalizedSum> {
    let eta = params.eta();
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain(format!("transmissivity must lie in (0, 1), got {eta}")));
    }
    if m == 0 {
        return Err(validation("order must be at least 1"));
    }
    let (a, b) = scaled_weights(n_mean, params)?;
    Ok(NormalizedSum {
        value: binomial_sum(m, a, b),
        condition_met: n_mean > params.n_noise() / (1.0 - eta),
    })
}

/// Second-order entropy shifts in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftReport {
    pub d_s_in: f64,
    pub d_s_out: f64,
    pub d_s_joint: f64,
    pub d_ic: f64,
}

impl ShiftReport {
    pub fn to_bits(&self) -> ShiftReport {
        let s = std::f64::consts::LN_2;
        ShiftReport {
            d_s_in: self.d_s_in / s,
            d_s_out: self.d_s_out / s,
            d_s_joint: self.d_s_joint / s,
            d_ic: self.d_ic / s,
        }
    }
}

pub fn coherent_info_shift(
    spec: &PerturbationSpec,
    n_mean: f64,
    params: ChannelParams,
) -> Result<ShiftReport> {
    let d_s_in = input_entropy_shift(spec, n_mean)?;
    let d_s_out = output_entropy_shift(spec, n_mean, params)?;
    let d_s_joint = joint_entropy_shift(spec, n_mean, params)?;
    Ok(ShiftReport {
        d_s_in,
        d_s_out,
        d_s_joint,
        d_ic: d_s_out - d_s_joint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn spec(k: &[u32], l: &[u32], c: Complex64, eps: f64) -> PerturbationSpec {
        PerturbationSpec::new(k.to_vec(), l.to_vec(), c, eps).unwrap()
    }

    fn one(k: &[u32], l: &[u32]) -> PerturbationSpec {
        spec(k, l, Complex64::new(1.0, 0.0), 0.01)
    }

    fn params(eta: f64, n: f64) -> ChannelParams {
        ChannelParams::new(eta, n).unwrap()
    }

    #[test]
    fn rejects_unbalanced_specs() {
        let c = Complex64::new(1.0, 0.0);
        assert!(PerturbationSpec::new(vec![1], vec![2], c, 0.1).is_err());
        assert!(PerturbationSpec::new(vec![0], vec![0], c, 0.1).is_err());
        assert!(PerturbationSpec::new(vec![1, 0], vec![1], c, 0.1).is_err());
        assert!(PerturbationSpec::new(vec![], vec![], c, 0.1).is_err());
    }

    #[test]
    fn amplitude_weights() {
        assert_eq!(c_zero(&one(&[1], &[1])), 2.0);
        assert_eq!(c_zero(&spec(&[2, 0], &[1, 1], Complex64::i(), 0.1)), 1.0);
        assert_eq!(c_zero(&spec(&[1], &[1], Complex64::i(), 0.1)), 0.0);
        assert_abs_diff_eq!(
            c_zero(&spec(&[1], &[1], Complex64::new(0.5, 3.0), 0.1)),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn moment_traces() {
        assert_relative_eq!(moment_trace(&one(&[1], &[1]), 1.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(moment_trace(&one(&[2], &[2]), 1.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(
            moment_trace(&one(&[1, 1], &[1, 1]), 1.0).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            moment_trace(&one(&[2, 0], &[1, 1]), 1.0).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert!(matches!(moment_trace(&one(&[1], &[1]), 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn input_shift_scaling() {
        let s = one(&[1], &[1]);
        assert_relative_eq!(input_entropy_shift(&s, 1.0).unwrap(), -1e-4, max_relative = 1e-12);
        assert_eq!(input_entropy_shift(&s.with_epsilon(0.0), 1.0).unwrap(), 0.0);
        let ratio = input_entropy_shift(&s.with_epsilon(0.02), 1.0).unwrap()
            / input_entropy_shift(&s, 1.0).unwrap();
        assert_relative_eq!(ratio, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn output_shift() {
        let s = one(&[1], &[1]);
        assert_relative_eq!(
            output_entropy_shift(&s, 1.3, ChannelParams::identity()).unwrap(),
            input_entropy_shift(&s, 1.3).unwrap(),
            max_relative = 1e-15
        );
        let v = output_entropy_shift(&s, 1.0, params(0.5, 0.25)).unwrap();
        assert_relative_eq!(v, -1e-4 * 0.5 / (0.75 * 1.75), max_relative = 1e-12);
        assert!(matches!(
            output_entropy_shift(&s, 1.0, params(0.0, 0.0)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn joint_shift() {
        let s = one(&[1], &[1]);
        assert_eq!(joint_entropy_shift(&s, 2.0, ChannelParams::identity()).unwrap(), 0.0);
        let v = joint_entropy_shift(&s, 1.0, params(0.8, 0.0)).unwrap();
        assert_relative_eq!(v / 1e-4, -1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn normalized_sums() {
        let ns = normalized_sum(1, 1.0, params(0.8, 0.0)).unwrap();
        assert_relative_eq!(ns.value, 1.0 / 3.0, max_relative = 1e-12);
        assert!(ns.condition_met && ns.below_one());
        assert!(normalized_sum(1, 1.0, params(1.0, 0.0)).is_err());
        assert!(normalized_sum(1, 1.0, params(0.0, 0.0)).is_err());
        for &eta in &[0.1, 0.5, 0.9] {
            for &n in &[0.1, 1.0, 30.0] {
                for m in 1..=3 {
                    assert!(normalized_sum(m, n, params(eta, 0.0)).unwrap().value < 1.0);
                }
            }
        }
    }

    #[test]
    fn first_order_sum_identity() {
        for &(eta, nn, n) in &[(0.3, 0.2, 2.0), (0.8, 0.1, 5.0), (0.6, 1.0, 0.4)] {
            let p = params(eta, nn);
            let js = joint_spectrum(p, ThermalSpec::new(n).unwrap());
            let (s2, c2) = (js.sinh2_r(), js.cosh2_r());
            let gap = (js.n_b * js.n_a + (js.n_b + 1.0) * (js.n_a + 1.0)) * c2 * s2;
            let lhs = n * (n + 1.0) - (js.a_weight() + js.b_weight());
            assert_relative_eq!(lhs, gap, max_relative = 1e-9);
        }
    }

    #[test]
    fn coherent_shift_examples() {
        let s = one(&[1], &[1]);
        let r = coherent_info_shift(&s, 1.0, ChannelParams::identity()).unwrap();
        assert_eq!(r.d_s_joint, 0.0);
        assert_eq!(r.d_ic, r.d_s_in);
        let r = coherent_info_shift(&s, 1.0, params(0.8, 0.0)).unwrap();
        let expected = -1e-4 * (0.64 * 2.0 / 1.44 - 1.0 / 3.0);
        assert_relative_eq!(r.d_ic, expected, max_relative = 1e-12);
        assert_relative_eq!(r.to_bits().d_ic * std::f64::consts::LN_2, r.d_ic, max_relative = 1e-15);
    }

    #[test]
    fn cross_terms() {
        let a = one(&[1], &[1]);
        assert_eq!(cross_term(&a, &one(&[2], &[2]), 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            cross_term(&a, &a, 1.0).unwrap(),
            moment_trace(&a, 1.0).unwrap(),
            max_relative = 1e-15
        );
        let b = spec(&[2, 0], &[1, 1], Complex64::new(0.3, -0.7), 0.1);
        assert_relative_eq!(
            cross_term(&b, &b, 1.0).unwrap(),
            moment_trace(&b, 1.0).unwrap(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            cross_term(&b, &one(&[1, 1], &[2, 0]), 1.0).unwrap(),
            0.3,
            max_relative = 1e-14
        );
        assert_eq!(cross_term(&one(&[1, 0], &[0, 1]), &one(&[0, 1], &[1, 0]), 1.0).unwrap(), 1.0);
        assert_eq!(cross_term(&one(&[1, 0], &[1, 0]), &one(&[0, 1], &[0, 1]), 1.0).unwrap(), 0.0);
        assert!(cross_term(&a, &one(&[1, 0], &[1, 0]), 1.0).is_err());
    }

    #[test]
    fn permutation_invariance() {
        let s = spec(&[2, 1, 0], &[0, 1, 2], Complex64::new(0.4, 0.1), 0.05);
        let t = s.permuted(&[2, 0, 1]).unwrap();
        let p = params(0.7, 0.3);
        assert_eq!(coherent_info_shift(&s, 3.0, p).unwrap(), coherent_info_shift(&t, 3.0, p).unwrap());
        assert!(s.permuted(&[0, 0, 1]).is_err());
    }
}
