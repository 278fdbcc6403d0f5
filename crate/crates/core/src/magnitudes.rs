//! Per-terminal magnitudes `R_1..R_k` and the seeded randomness behind them.
//!
//! All randomness uses [`ChaCha8Rng`] seeded through [`rng_for`]. Sub-streams
//! are derived from `(seed, role, index)` by [`derive_seed`], so one base seed
//! reproduces a whole experiment.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default for the constant `c` of the randomized policies.
pub const DEFAULT_C: f64 = 5.0;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for the `index`-th stream of a given `role`.
pub fn derive_seed(seed: u64, role: &str, index: u64) -> u64 {
    let role_hash = role
        .bytes()
        .fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01B3));
    mix64(mix64(seed ^ role_hash).wrapping_add(index))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inverse-CDF transform of `u ∈ (0, 1]` into an EXP draw with the given mean.
pub fn exponential_from_uniform(lambda_mean: f64, u: f64) -> f64 {
    // -0.0 at u = 1
    (-lambda_mean * u.ln()).max(0.0)
}

/// One draw from the exponential distribution with mean `lambda_mean`.
pub fn sample_exponential<R: Rng + ?Sized>(lambda_mean: f64, rng: &mut R) -> f64 {
    debug_assert!(lambda_mean > 0.0);
    // gen() is in [0, 1); flip it onto (0, 1]
    let u = 1.0 - rng.gen::<f64>();
    exponential_from_uniform(lambda_mean, u)
}

/// How the scale parameter `s` of the randomized policies maps onto the
/// exponential distribution of the exponents `Z_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpScale {
    /// `s` is the rate: `Pr[Z ≥ a] = e^{-s·a}`, mean `1/s`.
    #[default]
    Rate,
    /// `s` is the mean: `Pr[Z ≥ a] = e^{-a/s}`.
    Mean,
}

impl ExpScale {
    pub fn mean_for(self, s: f64) -> f64 {
        match self {
            ExpScale::Rate => 1.0 / s,
            ExpScale::Mean => s,
        }
    }
}

impl FromStr for ExpScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate" => Ok(ExpScale::Rate),
            "mean" => Ok(ExpScale::Mean),
            _ => Err(Error::Config(format!("unknown exponential scale `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MagnitudePolicy {
    /// Every terminal gets the same `R ≥ 1`.
    Constant { r: f64 },
    /// `R_j = 2·e^{Z_j}` with `Z_j` exponential at scale `c·ddim`.
    DoublingExp { c: f64, ddim: f64, scale: ExpScale },
    /// `R_j = e^{Z_j}` with `Z_j` exponential at scale `c·ln k`
    /// (`ln k` replaced by 1 when `k = 1`).
    LogKExp { c: f64, scale: ExpScale },
}

impl MagnitudePolicy {
    pub fn constant(r: f64) -> Self {
        MagnitudePolicy::Constant { r }
    }

    pub fn doubling(c: f64, ddim: f64) -> Self {
        MagnitudePolicy::DoublingExp { c, ddim, scale: ExpScale::Rate }
    }

    pub fn log_k(c: f64) -> Self {
        MagnitudePolicy::LogKExp { c, scale: ExpScale::Rate }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMagnitude(msg));
        match *self {
            MagnitudePolicy::Constant { r } if !(r >= 1.0) || !r.is_finite() => {
                bad(format!("constant magnitude must be a finite value >= 1, got {r}"))
            }
            MagnitudePolicy::DoublingExp { c, ddim, .. } if !(c > 0.0 && ddim > 0.0) => {
                bad(format!("c and ddim must be positive, got c = {c}, ddim = {ddim}"))
            }
            MagnitudePolicy::LogKExp { c, .. } if !(c > 0.0) => {
                bad(format!("c must be positive, got {c}"))
            }
            _ => Ok(()),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, MagnitudePolicy::Constant { .. })
    }

    /// Mean of `Z_j` for `k` terminals; `None` for the constant policy.
    pub fn exponent_mean(&self, k: usize) -> Option<f64> {
        match *self {
            MagnitudePolicy::Constant { .. } => None,
            MagnitudePolicy::DoublingExp { c, ddim, scale } => Some(scale.mean_for(c * ddim)),
            MagnitudePolicy::LogKExp { c, scale } => {
                let log_k = (k as f64).ln().max(1.0);
                Some(scale.mean_for(c * log_k))
            }
        }
    }

    /// Maps an exponent `z ≥ 0` to the magnitude it produces.
    pub fn magnitude_from_exponent(&self, z: f64) -> f64 {
        match *self {
            MagnitudePolicy::Constant { r } => r,
            MagnitudePolicy::DoublingExp { .. } => 2.0 * z.exp(),
            MagnitudePolicy::LogKExp { .. } => z.exp(),
        }
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<MagnitudeVector> {
        self.validate()?;
        let values = match self.exponent_mean(k) {
            None => vec![self.magnitude_from_exponent(0.0); k],
            Some(mean) => (0..k)
                .map(|_| self.magnitude_from_exponent(sample_exponential(mean, rng)))
                .collect(),
        };
        MagnitudeVector::new(values)
    }

    /// Magnitudes for `k` terminals; same `(policy, k, seed)` gives the same vector.
    pub fn sample(&self, k: usize, seed: u64) -> Result<MagnitudeVector> {
        self.sample_with(k, &mut rng_for(seed))
    }
}

impl Default for MagnitudePolicy {
    fn default() -> Self {
        MagnitudePolicy::constant(3.0)
    }
}

impl fmt::Display for MagnitudePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MagnitudePolicy::Constant { r } => write!(f, "const:{r}"),
            MagnitudePolicy::DoublingExp { c, ddim, .. } => write!(f, "dexp:{c},{ddim}"),
            MagnitudePolicy::LogKExp { c, .. } => write!(f, "klog:{c}"),
        }
    }
}

impl FromStr for MagnitudePolicy {
    type Err = Error;

    /// Parses `const:<R>`, `dexp:<c>,<ddim>` and `klog:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown magnitude policy `{s}`"));
        let num = |a: &str| a.trim().parse::<f64>().map_err(|_| bad());
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        let policy = match head {
            "const" => MagnitudePolicy::constant(num(arg)?),
            "dexp" => {
                let (c, ddim) = arg.split_once(',').ok_or_else(bad)?;
                MagnitudePolicy::doubling(num(c)?, num(ddim)?)
            }
            "klog" => MagnitudePolicy::log_k(num(arg)?),
            _ => return Err(bad()),
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// `R_1..R_k`, indexed by position in π. Every entry is at least 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MagnitudeVector(Vec<f64>);

impl MagnitudeVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((j, r)) = values.iter().enumerate().find(|(_, r)| !(**r >= 1.0)) {
            return Err(Error::InvalidMagnitude(format!("R_{j} = {r} is below 1")));
        }
        Ok(MagnitudeVector(values))
    }

    pub fn constant(r: f64, k: usize) -> Result<Self> {
        Self::new(vec![r; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }
}
