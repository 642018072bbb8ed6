//! Oracle-equivalence suites: closed forms against the Williamson spectrum
//! and against the truncated Fock computations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::{joint_output_cov, ChannelParams};
use crate::coherent::{gaussian_coherent_info, joint_spectrum, thermal_coherent_info};
use crate::error::{validation, Error, Result};
use crate::fock::{entropy_shift_oracle, lemma_check, perturbed_state, trace_quotient_cross, LemmaPart};
use crate::gaussian::{symplectic_eigenvalues, GaussianInputParams, ThermalSpec};
use crate::perturbation::{
    cross_term, input_entropy_shift, joint_entropy_shift, moment_trace, output_entropy_shift, PerturbationSpec,
};

pub const ETA_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const NOISE_GRID: [f64; 4] = [0.0, 0.1, 0.5, 1.0];
pub const N_GRID: [f64; 4] = [0.5, 1.0, 5.0, 50.0];
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const LEMMA_TOL: f64 = 1e-6;
pub const LEMMA_CUTOFF: usize = 40;
pub const LEMMA_ORDERS: [(u32, u32); 4] = [(1, 0), (0, 1), (1, 1), (2, 1)];
pub const TRACE_TOL: f64 = 1e-4;
pub const CROSS_TOL: f64 = 1e-6;
pub const SHIFT_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gaussian,
    Lemma,
    Perturbation,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Suite::Gaussian),
            "lemma" => Ok(Suite::Lemma),
            "perturbation" => Ok(Suite::Perturbation),
            "all" => Ok(Suite::All),
            _ => Err(validation(format!(
                "unknown suite '{s}' (expected gaussian, lemma, perturbation or all)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Gaussian => "gaussian",
            Suite::Lemma => "lemma",
            Suite::Perturbation => "perturbation",
            Suite::All => "all",
        })
    }
}

/// One compared quantity. `deviation` is absolute or relative as the check
/// name says.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn max_deviation(&self, suite: Suite) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.suite == suite)
            .map(|c| c.deviation)
            .reduce(f64::max)
    }
}

fn relative(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn gaussian_suite(checks: &mut Vec<Check>) -> Result<()> {
    let s = Suite::Gaussian;
    for &eta in &ETA_GRID {
        for &nn in &NOISE_GRID {
            let params = ChannelParams::new(eta, nn)?;
            for &n in &N_GRID {
                let spec = ThermalSpec::new(n)?;
                let case = format!("η={eta} N_n={nn} N={n}");
                let js = joint_spectrum(params, spec);
                let closed = js.symplectic_eigenvalues();
                let oracle = symplectic_eigenvalues(&joint_output_cov(params, spec))?;
                let dev = closed
                    .iter()
                    .zip(&oracle)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                checks.push(Check::new(s, format!("joint spectrum {case}"), dev, SPECTRUM_TOL));
                checks.push(Check::new(s, format!("occupation residual {case}"), js.residual(n), SPECTRUM_TOL));
                let energy = n + 0.5;
                let gauss = gaussian_coherent_info(params, GaussianInputParams::new(energy, 1.0, 0.0)?)?.value;
                let thermal = thermal_coherent_info(params, spec).value;
                checks.push(Check::new(s, format!("x=1 coherent info {case}"), (gauss - thermal).abs(), SPECTRUM_TOL));
            }
        }
    }
    Ok(())
}

fn lemma_suite(checks: &mut Vec<Check>, cutoff: usize) -> Result<()> {
    let params = ChannelParams::new(0.6, 0.2)?;
    for part in [LemmaPart::Raising, LemmaPart::Lowering] {
        for &(k, m) in &LEMMA_ORDERS {
            let dev = lemma_check(part, k, m, 1.0, params, cutoff)?;
            let name = format!("{part:?} k={k} m={m} N=1 η=0.6 N_n=0.2 cutoff={cutoff}");
            checks.push(Check::new(Suite::Lemma, name, dev, LEMMA_TOL));
        }
    }
    Ok(())
}

fn spec(k: &[u32], l: &[u32], c: Complex64) -> Result<PerturbationSpec> {
    PerturbationSpec::new(k.to_vec(), l.to_vec(), c, 1.0)
}

fn perturbation_suite(checks: &mut Vec<Check>) -> Result<()> {
    let s = Suite::Perturbation;
    let one = Complex64::new(1.0, 0.0);
    let traced = [
        (spec(&[1], &[1], one)?, 60),
        (spec(&[2], &[2], one)?, 60),
        (spec(&[2, 0], &[1, 1], one)?, 30),
    ];
    for (p, cutoff) in &traced {
        let ps = perturbed_state(p, 1.0, *cutoff, None)?;
        let oracle = trace_quotient_cross(&ps.phi, &ps.base, &ps.phi)?;
        let name = format!("moment trace k={:?} l={:?} N=1 (relative)", p.k(), p.l());
        checks.push(Check::new(s, name, relative(oracle, moment_trace(p, 1.0)?), TRACE_TOL));
    }
    let pairs = [
        (spec(&[1], &[1], one)?, spec(&[2], &[2], one)?, 60),
        (spec(&[1, 0], &[0, 1], one)?, spec(&[1, 0], &[1, 0], one)?, 30),
        (spec(&[2, 0], &[1, 1], one)?, spec(&[1, 1], &[1, 1], one)?, 30),
        (spec(&[1, 0], &[0, 1], one)?, spec(&[0, 1], &[1, 0], one)?, 30),
    ];
    for (a, b, cutoff) in &pairs {
        let pa = perturbed_state(a, 1.0, *cutoff, None)?;
        let pb = perturbed_state(b, 1.0, *cutoff, None)?;
        let oracle = trace_quotient_cross(&pa.phi, &pa.base, &pb.phi)?;
        let name = format!("cross term {:?}/{:?} vs {:?}/{:?} N=1", a.k(), a.l(), b.k(), b.l());
        checks.push(Check::new(s, name, (oracle - cross_term(a, b, 1.0)?).abs(), CROSS_TOL));
    }

    let first = spec(&[1], &[1], one)?;
    let eps = crate::fock::DEFAULT_EPSILONS;
    let noisy = ChannelParams::new(0.5, 0.25)?;
    let r = entropy_shift_oracle(&first, 1.0, noisy, &eps, 30)?;
    checks.push(Check::new(
        s,
        "input shift coefficient N=1 (relative)",
        relative(r.input.value, input_entropy_shift(&first, 1.0)?),
        SHIFT_TOL,
    ));
    checks.push(Check::new(
        s,
        "output shift coefficient η=0.5 N_n=0.25 N=1 (relative)",
        relative(r.output.value, output_entropy_shift(&first, 1.0, noisy)?),
        SHIFT_TOL,
    ));
    let lossy = ChannelParams::new(0.8, 0.0)?;
    let r = entropy_shift_oracle(&first, 1.0, lossy, &eps, 30)?;
    let joint = r.joint.map(|j| j.value).unwrap_or(f64::NAN);
    checks.push(Check::new(
        s,
        "joint shift coefficient η=0.8 N_n=0 N=1 (relative)",
        relative(joint, joint_entropy_shift(&first, 1.0, lossy)?),
        SHIFT_TOL,
    ));
    Ok(())
}

/// Runs a suite. Tolerance breaches are reported in the result; errors are
/// reserved for computations that could not be carried out.
pub fn run(suite: Suite) -> Result<Report> {
    run_with(suite, LEMMA_CUTOFF)
}

/// As [`run`] with the lemma checks at `lemma_cutoff`.
pub fn run_with(suite: Suite, lemma_cutoff: usize) -> Result<Report> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Gaussian | Suite::All) {
        gaussian_suite(&mut checks)?;
    }
    if matches!(suite, Suite::Lemma | Suite::All) {
        lemma_suite(&mut checks, lemma_cutoff)?;
    }
    if matches!(suite, Suite::Perturbation | Suite::All) {
        perturbation_suite(&mut checks)?;
    }
    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in [Suite::Gaussian, Suite::Lemma, Suite::Perturbation, Suite::All] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("fock".parse::<Suite>().is_err());
    }

    #[test]
    fn gaussian_suite_passes() {
        let report = run(Suite::Gaussian).unwrap();
        assert_eq!(report.checks.len(), 3 * 80);
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.max_deviation(Suite::Gaussian).unwrap() <= SPECTRUM_TOL);
        assert!(report.max_deviation(Suite::Lemma).is_none());
    }
}
