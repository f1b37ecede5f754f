use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parity::MAX_WIDTH;
use crate::walsh::{phases_from_angles, AngleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbationMode {
    /// Sign-aligned errors `delta_y = eps`, which pile up on `theta_0`.
    Adversarial,
    /// Independent `delta_y ~ U[-eps, eps]`.
    Random,
}

impl fmt::Display for PerturbationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerturbationMode::Adversarial => "adversarial",
            PerturbationMode::Random => "random",
        })
    }
}

impl FromStr for PerturbationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adversarial" => Ok(PerturbationMode::Adversarial),
            "random" => Ok(PerturbationMode::Random),
            other => Err(Error::Incompatible(format!("unknown sensitivity mode '{other}'"))),
        }
    }
}

/// Phase error caused by rotation-angle errors of size at most `epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct SensitivityReport {
    pub qubits: usize,
    pub mode: PerturbationMode,
    pub epsilon: f64,
    /// `2^{N-1} eps`, the triangle-inequality bound on `|delta theta|_inf`.
    pub worst_case_bound: f64,
    pub empirical_max: f64,
    pub empirical_rms: f64,
    /// `eps 2^{N/2} / (2 sqrt 3)`, the RMS for uniform errors.
    pub analytic_rms: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn sensitivity(
    n: usize,
    epsilon: f64,
    mode: PerturbationMode,
    trials: usize,
    seed: u64,
) -> Result<SensitivityReport> {
    if epsilon < 0.0 || epsilon.is_nan() {
        return Err(Error::NegativeEpsilon(epsilon));
    }
    if n == 0 || n > MAX_WIDTH {
        return Err(Error::InvalidWidth { width: n, max: MAX_WIDTH });
    }
    let dim = 1usize << n;
    let worst_case_bound = epsilon * (1u64 << (n - 1)) as f64;
    let analytic_rms = epsilon * (dim as f64).sqrt() / (2.0 * 3f64.sqrt());

    let mut max = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut samples = 0usize;
    let mut record = |delta: Vec<f64>| {
        let err = phases_from_angles(&AngleSpec::new(n, delta).expect("finite perturbation"));
        for &d in err.theta() {
            max = max.max(d.abs());
            sum_sq += d * d;
        }
        samples += dim;
    };

    let trials = match mode {
        PerturbationMode::Adversarial => {
            record(vec![epsilon; dim]);
            1
        }
        PerturbationMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let delta = (0..dim)
                    .map(|_| if epsilon == 0.0 { 0.0 } else { rng.gen_range(-epsilon..=epsilon) })
                    .collect();
                record(delta);
            }
            trials
        }
    };
    let empirical_rms = if samples == 0 { 0.0 } else { (sum_sq / samples as f64).sqrt() };
    Ok(SensitivityReport {
        qubits: n,
        mode,
        epsilon,
        worst_case_bound,
        empirical_max: max,
        empirical_rms,
        analytic_rms,
        trials,
        seed,
    })
}
