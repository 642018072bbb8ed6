use crate::error::{validation, Result};

/// Gauss–Laguerre rule for `∫₀^∞ f(t) dt`, stored as nodes `x` and
/// `ln(w e^x)` so that integrands are evaluated in true (unweighted) form.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut log_weights = Vec::with_capacity(n);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..n {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            for _ in 0..200 {
                let (p1, p2) = laguerre_pair(n, z);
                let step = p1 * z / (nf * (p1 - p2));
                z -= step;
                if step.abs() <= 1e-15 * z.abs() {
                    break;
                }
            }
            let (p1, p2) = laguerre_pair(n, z);
            let pp = nf * (p1 - p2) / z;
            nodes.push(z);
            log_weights.push(z - (nf * pp * p2).abs().ln());
        }
        Self { nodes, log_weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights for `∫₀^∞ f(t) dt` with `t = x / scale`.
    pub fn scaled(&self, scale: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.log_weights)
            .map(move |(&x, &lw)| (x / scale, lw.exp() / scale))
    }

    /// As [`Self::scaled`] with the weight multiplied by `exp(-rate t)`,
    /// combined in log space.
    pub fn scaled_damped(&self, scale: f64, rate: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().zip(&self.log_weights).map(move |(&x, &lw)| {
            let t = x / scale;
            (t, (lw - rate * t).exp() / scale)
        })
    }
}

/// `(L_n(z), L_{n-1}(z))`.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// Node counts and Gaussian width for the polar rule `μ = r e^{iθ}`:
/// Gauss–Laguerre in `r²` with scale `radius_scale`, trapezoid in `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    radial_nodes: usize,
    angular_nodes: usize,
    radius_scale: f64,
}

pub const MIN_NODES: usize = 8;

impl QuadratureSpec {
    pub fn new(radial_nodes: usize, angular_nodes: usize, radius_scale: f64) -> Result<Self> {
        if radial_nodes < MIN_NODES || angular_nodes < MIN_NODES {
            return Err(validation(format!(
                "node counts must be at least {MIN_NODES}, got {radial_nodes} and {angular_nodes}"
            )));
        }
        if !(radius_scale > 0.0) || !radius_scale.is_finite() {
            return Err(validation(format!("radius scale must be positive, got {radius_scale}")));
        }
        Ok(Self {
            radial_nodes,
            angular_nodes,
            radius_scale,
        })
    }

    /// Rule that integrates `exp(-damping |μ|²)` times polynomials exactly on
    /// a `cutoff`-dimensional truncation.
    pub fn for_cutoff(cutoff: usize, damping: f64) -> Self {
        Self {
            radial_nodes: cutoff / 2 + 16,
            angular_nodes: 2 * cutoff + 16,
            radius_scale: damping + 0.5,
        }
    }

    pub fn refined(&self) -> Self {
        Self {
            radial_nodes: self.radial_nodes + 8,
            angular_nodes: self.angular_nodes + 8,
            ..*self
        }
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular_nodes
    }

    pub fn radius_scale(&self) -> f64 {
        self.radius_scale
    }
}
