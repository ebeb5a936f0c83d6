use crate::heuristics::HeuristicKind;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("stable factor must be a decimal greater than 1, got {0:?}")]
    BadFactor(String),
    #[error("either max_iterations or wall_clock_budget must be set")]
    Unbounded,
}

/// Exact rational growth factor for the stagnation threshold, parsed from a
/// decimal such as `1.2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableFactor {
    num: u64,
    den: u64,
}

impl StableFactor {
    pub fn new(num: u64, den: u64) -> Option<Self> {
        (den > 0 && num > den).then_some(Self { num, den })
    }

    /// `floor(value * factor)`, growing by at least one.
    pub fn grow(self, value: u64) -> u64 {
        let scaled = (value as u128 * self.num as u128 / self.den as u128) as u64;
        scaled.max(value + 1)
    }
}

impl Default for StableFactor {
    fn default() -> Self {
        Self { num: 6, den: 5 }
    }
}

impl FromStr for StableFactor {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, ParamError> {
        let bad = || ParamError::BadFactor(s.to_string());
        let t = s.trim();
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 9
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        let g = gcd(num, den);
        Self::new(num / g, den / g).ok_or_else(bad)
    }
}

impl fmt::Display for StableFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Decimal when the denominator divides a power of ten.
        let mut scale = 1u64;
        for digits in 0..=9usize {
            if scale % self.den == 0 {
                let scaled = self.num * (scale / self.den);
                return if digits == 0 {
                    write!(f, "{scaled}")
                } else {
                    write!(f, "{}.{:0digits$}", scaled / scale, scaled % scale)
                };
            }
            scale *= 10;
        }
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Tunables of the segment search. Defaults reproduce the published settings:
/// segment size 1, stagnation threshold 1000 growing by 1.2, tabu tenure
/// drawn from `[4, n/8]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub initial_segment_size: usize,
    pub initial_max_stable: u64,
    pub stable_factor: StableFactor,
    pub tenure_min: u64,
    pub tenure_max_divisor: u64,
    /// Cap on the contiguous window re-optimized in single-segment mode.
    pub max_single_segment_size: usize,
    /// Length of each sub-segment in multiple-segment mode.
    pub multi_sub_segment_size: usize,
    /// Single windows whose placement count exceeds this are narrowed
    /// around their center.
    pub max_single_neighborhood: u64,
    /// Multiple-segment selections whose placement product exceeds this are
    /// trimmed, dropping the most recently drawn sub-segments first.
    pub max_multiple_neighborhood: u64,
    pub max_iterations: Option<u64>,
    pub wall_clock_budget: Option<Duration>,
    pub rng_seed: u64,
    /// Guide every iteration with one heuristic instead of drawing one.
    pub pinned_heuristic: Option<HeuristicKind>,
    /// Single-residue greedy iterations applied to the random start.
    pub warmup_iterations: u64,
    /// Stop as soon as the best energy reaches this value.
    pub target_energy: Option<i64>,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            initial_segment_size: 1,
            initial_max_stable: 1000,
            stable_factor: StableFactor::default(),
            tenure_min: 4,
            tenure_max_divisor: 8,
            max_single_segment_size: 6,
            multi_sub_segment_size: 1,
            max_single_neighborhood: 20_000,
            max_multiple_neighborhood: 4096,
            max_iterations: Some(100_000),
            wall_clock_budget: None,
            rng_seed: 0,
            pinned_heuristic: None,
            warmup_iterations: 0,
            target_energy: None,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        let checks: [(&'static str, bool); 8] = [
            ("initial_segment_size", self.initial_segment_size > 0),
            ("initial_max_stable", self.initial_max_stable > 0),
            ("tenure_min", self.tenure_min > 0),
            ("tenure_max_divisor", self.tenure_max_divisor > 0),
            ("max_single_segment_size", self.max_single_segment_size > 0),
            ("multi_sub_segment_size", self.multi_sub_segment_size > 0),
            ("max_single_neighborhood", self.max_single_neighborhood > 0),
            ("max_multiple_neighborhood", self.max_multiple_neighborhood > 0),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(ParamError::NotPositive(name));
        }
        if self.max_iterations.is_none() && self.wall_clock_budget.is_none() && self.target_energy.is_none() {
            return Err(ParamError::Unbounded);
        }
        Ok(())
    }

    /// Inclusive tenure range for a chain of `n` monomers; collapses to
    /// `tenure_min` when `n / divisor` is smaller.
    pub fn tenure_range(&self, n: usize) -> (u64, u64) {
        let hi = n as u64 / self.tenure_max_divisor;
        (self.tenure_min, hi.max(self.tenure_min))
    }
}

/// Segment growth on stagnation: after `max_stable` iterations without a new
/// global best the threshold is multiplied by the factor and the segment
/// grows by one. A new global best restores both initial values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagnationSchedule {
    initial_segment_size: usize,
    initial_max_stable: u64,
    factor: StableFactor,
    segment_size: usize,
    max_stable: u64,
    steps_since_improvement: u64,
}

impl StagnationSchedule {
    pub fn new(params: &SearchParams) -> Self {
        Self {
            initial_segment_size: params.initial_segment_size,
            initial_max_stable: params.initial_max_stable,
            factor: params.stable_factor,
            segment_size: params.initial_segment_size,
            max_stable: params.initial_max_stable,
            steps_since_improvement: 0,
        }
    }

    pub fn segment_size(&self) -> usize {
        self.segment_size
    }

    pub fn max_stable(&self) -> u64 {
        self.max_stable
    }

    pub fn steps_since_improvement(&self) -> u64 {
        self.steps_since_improvement
    }

    /// Advances one iteration. Returns true when the segment grew.
    pub fn record(&mut self, improved: bool) -> bool {
        if improved {
            self.reset();
            return false;
        }
        self.steps_since_improvement += 1;
        if self.steps_since_improvement >= self.max_stable {
            self.max_stable = self.factor.grow(self.max_stable);
            self.segment_size += 1;
            self.steps_since_improvement = 0;
            return true;
        }
        false
    }

    pub fn reset(&mut self) {
        self.segment_size = self.initial_segment_size;
        self.max_stable = self.initial_max_stable;
        self.steps_since_improvement = 0;
    }
}
