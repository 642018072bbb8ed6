//! Fock-basis matrix elements of the displacement operator `D(μ)`, from the
//! associated Laguerre closed form.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `⟨i|D(μ)|j⟩` from the associated Laguerre closed form.
pub fn displacement_element(i: usize, j: usize, mu: Complex64) -> Complex64 {
    let t = mu.norm_sqr();
    if t == 0.0 {
        return Complex64::from(if i == j { 1.0 } else { 0.0 });
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let alpha = hi - lo;
    let log_fact_ratio: f64 = ((lo + 1)..=hi).map(|k| (k as f64).ln()).sum();
    let magnitude = (0.5 * (alpha as f64 * t.ln() - log_fact_ratio) - 0.5 * t).exp();
    let radial = magnitude * laguerre(lo, alpha, t);
    let phase = if i >= j {
        (mu / mu.norm()).powu(alpha as u32)
    } else {
        (-mu.conj() / mu.norm()).powu(alpha as u32)
    };
    phase * radial
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)`.
fn laguerre(n: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Real matrix `⟨m|D(r)|n⟩` for real `r >= 0`; for complex `μ = r e^{iθ}`
/// each element picks up the phase `e^{i(m-n)θ}`.
pub fn displacement_matrix_real(r: f64, dim: usize) -> DMatrix<f64> {
    let mut d = DMatrix::<f64>::zeros(dim, dim);
    let t = r * r;
    if t == 0.0 {
        d.fill_with_identity();
        return d;
    }
    let ln_t = t.ln();
    let log_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..dim).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    for alpha in 0..dim {
        let a = alpha as f64;
        let (mut prev, mut cur) = (0.0, 1.0);
        for lo in 0..dim - alpha {
            if lo > 0 {
                let k = (lo - 1) as f64;
                let next = ((2.0 * k + 1.0 + a - t) * cur - (k + a) * prev) / (k + 1.0);
                prev = cur;
                cur = next;
            }
            let hi = lo + alpha;
            let magnitude = (0.5 * (a * ln_t - (log_fact[hi] - log_fact[lo])) - 0.5 * t).exp();
            let value = magnitude * cur;
            d[(hi, lo)] = value;
            d[(lo, hi)] = if alpha % 2 == 0 { value } else { -value };
        }
    }
    d
}

/// Complex matrix `⟨m|D(μ)|n⟩` on a `dim`-dimensional truncation.
pub fn displacement_matrix(mu: Complex64, dim: usize) -> DMatrix<Complex64> {
    let (r, theta) = mu.to_polar();
    let real = displacement_matrix_real(r, dim);
    DMatrix::from_fn(dim, dim, |m, n| {
        Complex64::from_polar(real[(m, n)], (m as f64 - n as f64) * theta)
    })
}
