//! Brute-force counterparts of the closed forms: coherent information of
//! the thermal input, the ladder-operator identities of the purified thermal
//! state, and second-order entropy shifts of perturbed inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::channel::FockChannel;
use super::charfn::perturbed_state;
use super::density::{hermitian_map, thermal_fock, von_neumann_entropy_nats, FockDensityMatrix};
use crate::channel::ChannelParams;
use crate::error::{domain, validation, Error, Result};
use crate::gaussian::ThermalSpec;
use crate::perturbation::PerturbationSpec;

pub const DEFAULT_EPSILONS: [f64; 3] = [0.02, 0.01, 0.005];
/// Largest tolerated gap between the smallest-ε estimate and the extrapolation,
/// relative to the extrapolated coefficient.
pub const QUADRATIC_TOL: f64 = 0.1;

/// Two-mode pure state `Σ (√ρ)_{qr} |q⟩|r⟩` whose first mode has marginal `ρ`.
pub fn purify(rho: &FockDensityMatrix) -> Result<FockDensityMatrix> {
    if rho.n_modes() != 1 {
        return Err(validation("purification needs a single-mode state"));
    }
    let d = rho.cutoff();
    let root = hermitian_map(rho.entries(), |x| x.max(0.0).sqrt());
    let psi = DVector::from_fn(d * d, |i, _| root[(i / d, i % d)]);
    FockDensityMatrix::symmetrized(d, 2, &psi * psi.adjoint())
}

/// Coherent information in bits with its two entropies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCoherentInfo {
    pub value: f64,
    pub s_out: f64,
    pub s_joint: f64,
}

/// `S(E(ρ)) - S((E ⊗ I)(ψ))` for the purified truncated thermal state.
pub fn coherent_info_fock(params: ChannelParams, n_mean: f64, cutoff: usize) -> Result<FockCoherentInfo> {
    let rho = thermal_fock(n_mean, cutoff)?;
    let ch = FockChannel::new(params, cutoff)?;
    let ln2 = std::f64::consts::LN_2;
    let s_out = von_neumann_entropy_nats(&ch.apply(&rho, &[0])?)? / ln2;
    let s_joint = von_neumann_entropy_nats(&ch.apply(&purify(&rho)?, &[0])?)? / ln2;
    Ok(FockCoherentInfo {
        value: s_out - s_joint,
        s_out,
        s_joint,
    })
}

/// Which ladder identity of the purified thermal state to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaPart {
    /// `(E⊗I)(a†^k ρ a^m) = v^{-(k+m)/2} b^k ρ' b†^m`.
    Raising,
    /// `(E⊗I)(a^k ρ a†^m) = v^{(k+m)/2} b†^k ρ' b^m`.
    Lowering,
}

pub const MAX_LEMMA_ORDER: u32 = 4;

/// Ladder action on one factor of a two-mode vector or matrix index `q·D + r`.
#[derive(Clone, Copy)]
enum Ladder {
    Raise,
    Lower,
}

/// Applies `op^power` on `mode` to the rows of `x` (all columns at once).
fn ladder_rows(x: &DMatrix<Complex64>, dim: usize, mode: usize, op: Ladder, power: u32) -> DMatrix<Complex64> {
    let mut cur = x.clone();
    for _ in 0..power {
        let mut next = DMatrix::<Complex64>::zeros(cur.nrows(), cur.ncols());
        // ⟨n|a† = √n ⟨n-1|, ⟨n|a = √(n+1) ⟨n+1|
        let sources: Vec<Option<(usize, f64)>> = (0..cur.nrows())
            .map(|row| {
                let (q, r) = (row / dim, row % dim);
                let n = if mode == 0 { q } else { r };
                let (src, coef) = match op {
                    Ladder::Raise if n > 0 => (n - 1, (n as f64).sqrt()),
                    Ladder::Lower if n + 1 < dim => (n + 1, ((n + 1) as f64).sqrt()),
                    _ => return None,
                };
                Some((if mode == 0 { src * dim + r } else { q * dim + src }, coef))
            })
            .collect();
        for (src_col, dst_col) in cur.column_iter().zip(next.column_iter_mut()) {
            let mut dst_col = dst_col;
            for (row, source) in sources.iter().enumerate() {
                if let Some((src_row, coef)) = *source {
                    dst_col[row] = src_col[src_row] * coef;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Maximum elementwise deviation between the two sides of the ladder
/// identity on the `cutoff` window, with the thermal purification truncated
/// at `cutoff` and a working space of `cutoff + max(k, m)` levels per mode.
pub fn lemma_check(
    part: LemmaPart,
    k: u32,
    m: u32,
    n_mean: f64,
    params: ChannelParams,
    cutoff: usize,
) -> Result<f64> {
    if k + m > MAX_LEMMA_ORDER {
        return Err(validation(format!("k + m must not exceed {MAX_LEMMA_ORDER}")));
    }
    if !(n_mean > 0.0) {
        return Err(domain(format!("mean photon number must be positive, got {n_mean}")));
    }
    let v = ThermalSpec::new(n_mean)?.ratio();
    let dim = cutoff + k.max(m) as usize;
    let mut psi = DMatrix::<Complex64>::zeros(dim * dim, 1);
    for n in 0..cutoff {
        psi[(n * dim + n, 0)] = Complex64::from(((1.0 - v) * v.powi(n as i32)).sqrt());
    }
    let ch = FockChannel::new(params, dim)?;

    let (sys_op, ref_op, factor) = match part {
        LemmaPart::Raising => (Ladder::Raise, Ladder::Lower, v.powf(-0.5 * (k + m) as f64)),
        LemmaPart::Lowering => (Ladder::Lower, Ladder::Raise, v.powf(0.5 * (k + m) as f64)),
    };
    let u = ladder_rows(&psi, dim, 0, sys_op, k);
    let w = ladder_rows(&psi, dim, 0, sys_op, m);
    let lhs = ch.apply_operator(&(&u * w.adjoint()), 2, 0)?;

    let joint = ch.apply_operator(&(&psi * psi.adjoint()), 2, 0)?;
    // b^k Y (b^m)† for Raising, b†^k Y (b†^m)† for Lowering
    let left = ladder_rows(&joint, dim, 1, ref_op, k);
    let both = ladder_rows(&left.adjoint(), dim, 1, ref_op, m).adjoint();
    let rhs = both.scale(factor);

    let mut dev = 0.0f64;
    for col in 0..dim * dim {
        let (qc, rc) = (col / dim, col % dim);
        if qc >= cutoff || rc >= cutoff {
            continue;
        }
        for row in 0..dim * dim {
            let (qr, rr) = (row / dim, row % dim);
            if qr < cutoff && rr < cutoff {
                dev = dev.max((lhs[(row, col)] - rhs[(row, col)]).norm());
            }
        }
    }
    Ok(dev)
}

/// Second-order coefficient of an entropy difference in `ε`, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCoefficient {
    /// Extrapolated coefficient of `ε²`.
    pub value: f64,
    /// Change of the extrapolation when the largest `ε` is dropped.
    pub error: f64,
    /// `(ε, [S(ε) + S(-ε) - 2 S(0)] / (2ε²))` for every `ε`.
    pub raw: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleShifts {
    pub input: ShiftCoefficient,
    pub output: ShiftCoefficient,
    /// Present for single-mode inputs.
    pub joint: Option<ShiftCoefficient>,
}

/// Polynomial extrapolation in `h = ε²` to `h = 0`.
fn extrapolate(points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .enumerate()
        .map(|(i, &(ei, yi))| {
            let hi = ei * ei;
            let weight: f64 = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(ej, _))| ej * ej / (ej * ej - hi))
                .product();
            yi * weight
        })
        .sum()
}

fn coefficient(what: &str, eps: &[f64], plus: &[f64], minus: &[f64], zero: f64) -> Result<ShiftCoefficient> {
    let raw: Vec<(f64, f64)> = eps
        .iter()
        .zip(plus.iter().zip(minus))
        .map(|(&e, (&p, &m))| (e, (p + m - 2.0 * zero) / (2.0 * e * e)))
        .collect();
    let value = extrapolate(&raw);
    let smallest = raw.iter().fold((f64::INFINITY, 0.0), |a, &(e, y)| if e < a.0 { (e, y) } else { a });
    let largest = raw.iter().fold(0.0f64, |a, &(e, _)| a.max(e));
    let reduced: Vec<(f64, f64)> = raw.iter().copied().filter(|&(e, _)| e != largest).collect();
    let error = (value - extrapolate(&reduced)).abs();
    let gap = (smallest.1 - value).abs();
    if gap > QUADRATIC_TOL * value.abs() && gap > 1e-9 {
        return Err(Error::NonQuadratic(format!(
            "{what} entropy: estimate {:.6e} at ε = {} is {gap:.3e} from the extrapolation {value:.6e}",
            smallest.1, smallest.0
        )));
    }
    Ok(ShiftCoefficient { value, error, raw })
}

/// Symmetric second differences of the input, output and (single-mode)
/// joint entropies, extrapolated to `ε -> 0`.
pub fn entropy_shift_oracle(
    spec: &PerturbationSpec,
    n_mean: f64,
    params: ChannelParams,
    epsilons: &[f64],
    cutoff: usize,
) -> Result<OracleShifts> {
    if epsilons.len() < 3 {
        return Err(validation("at least three values of ε are needed"));
    }
    let mut sorted = epsilons.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted.iter().any(|&e| !(e > 0.0)) || sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(validation("ε values must be positive and distinct"));
    }
    let ps = perturbed_state(spec, n_mean, cutoff, None)?;
    let ch = FockChannel::new(params, cutoff)?;
    let modes: Vec<usize> = (0..spec.n_modes()).collect();
    let with_joint = spec.n_modes() == 1;

    let entropies = |eps: f64| -> Result<[f64; 3]> {
        let state = ps.at(eps)?;
        let s_in = von_neumann_entropy_nats(&state)?;
        let s_out = von_neumann_entropy_nats(&ch.apply(&state, &modes)?)?;
        let s_joint = if with_joint {
            von_neumann_entropy_nats(&ch.apply(&purify(&state)?, &[0])?)?
        } else {
            0.0
        };
        Ok([s_in, s_out, s_joint])
    };
    let zero = entropies(0.0)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &e in &sorted {
        plus.push(entropies(e)?);
        minus.push(entropies(-e)?);
    }
    let column = |i: usize| -> (Vec<f64>, Vec<f64>) {
        (plus.iter().map(|s| s[i]).collect(), minus.iter().map(|s| s[i]).collect())
    };
    let (p, m) = column(0);
    let input = coefficient("input", &sorted, &p, &m, zero[0])?;
    let (p, m) = column(1);
    let output = coefficient("output", &sorted, &p, &m, zero[1])?;
    let joint = if with_joint {
        let (p, m) = column(2);
        Some(coefficient("joint", &sorted, &p, &m, zero[2])?)
    } else {
        None
    };
    Ok(OracleShifts { input, output, joint })
}
