//! The derived constant bundle driving every threshold in the algorithm.
//!
//! From an assumed upper bound on the 1-shallow-minor density of the input,
//! everything else is forced: the cover budget `k` (twice the rounded-up
//! bound), the strength ratio `1/k`, the minimum per-step gain `4k^3 + 1`,
//! the residual cap `4k^4`, and the witness-set thresholds for dominating
//! sequences. The density bound itself cannot be determined locally and is
//! therefore part of the input.

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::Graph;
use crate::sparsity::min_excluded_biclique;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamsError {
    #[error("the density bound must be positive, got {0}")]
    NonPositiveDensityBound(Ratio<i64>),
    #[error("the density bound {0} is too large to be useful (cover budget would exceed 2000)")]
    DensityBoundTooLarge(Ratio<i64>),
    #[error("the biclique bound must be at least 2, got {0}")]
    BicliqueBoundTooSmall(u32),
    #[error("override {field} must be at least 1")]
    InvalidOverride { field: &'static str },
}

/// Where the biclique bound `t` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMode {
    /// Exact search on the input graph. Not derivable locally, but a
    /// property the analysis holds for the instance at hand.
    Exact,
    /// `t = k + 1`, valid because twice the subgraph density is below twice
    /// the minor density; keeps the run a pure function of the input bound.
    Bound,
    /// Caller-supplied value.
    Fixed(u32),
}

impl TMode {
    pub fn label(&self) -> String {
        match self {
            TMode::Exact => "exact".into(),
            TMode::Bound => "bound".into(),
            TMode::Fixed(v) => v.to_string(),
        }
    }
}

/// Test-oriented replacements for the derived constants. Any override marks
/// the run as nonconforming in every report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub min_gain: Option<u64>,
    pub residual_cap: Option<u64>,
    /// Witness-set size thresholds by position (1-based); positions past the
    /// end of the list reuse the last entry.
    pub thresholds: Option<Vec<u64>>,
}

impl ParamOverrides {
    pub fn is_empty(&self) -> bool {
        self.min_gain.is_none() && self.residual_cap.is_none() && self.thresholds.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    /// Assumed upper bound on the 1-shallow-minor density of the input.
    pub density_bound: Ratio<i64>,
    /// `k`: how many other vertices suffice to cover any surviving
    /// neighborhood; twice the rounded-up density bound.
    pub cover_budget: u32,
    /// `1 / cover_budget`, the strength ratio for covering steps.
    pub strength: Ratio<i64>,
    /// Minimum number of newly covered elements per pseudo-cover step.
    pub min_gain: u64,
    /// Maximum number of elements a pseudo-cover may leave uncovered.
    pub residual_cap: u64,
    /// `t`: both sides of the smallest excluded biclique.
    pub biclique_bound: u32,
    pub t_mode: TMode,
    pub overrides: ParamOverrides,
}

impl Params {
    /// Derives the bundle for a graph. The graph is only consulted in
    /// `TMode::Exact`, where the smallest excluded biclique is computed
    /// (and clamped up to 2).
    pub fn for_graph(
        g: &Graph,
        density_bound: Ratio<i64>,
        t_mode: TMode,
        overrides: ParamOverrides,
    ) -> Result<Self, ParamsError> {
        if density_bound <= Ratio::zero() {
            return Err(ParamsError::NonPositiveDensityBound(density_bound));
        }
        let rounded = density_bound.ceil().to_integer();
        if rounded > 1000 {
            return Err(ParamsError::DensityBoundTooLarge(density_bound));
        }
        let cover_budget = 2 * rounded as u32;
        let biclique_bound = match t_mode {
            TMode::Exact => min_excluded_biclique(g).max(2),
            TMode::Bound => cover_budget + 1,
            TMode::Fixed(v) => {
                if v < 2 {
                    return Err(ParamsError::BicliqueBoundTooSmall(v));
                }
                v
            }
        };
        if let Some(0) = overrides.min_gain {
            return Err(ParamsError::InvalidOverride { field: "min_gain" });
        }
        if let Some(list) = &overrides.thresholds {
            if list.is_empty() {
                return Err(ParamsError::InvalidOverride { field: "thresholds" });
            }
        }
        let k = cover_budget as u64;
        let min_gain = overrides.min_gain.unwrap_or(4 * k.pow(3) + 1);
        let residual_cap = overrides.residual_cap.unwrap_or(4 * k.pow(4));
        Ok(Params {
            density_bound,
            cover_budget,
            strength: Ratio::new(1, cover_budget as i64),
            min_gain,
            residual_cap,
            biclique_bound,
            t_mode,
            overrides,
        })
    }

    /// True when every constant is derived by the formulas; override runs
    /// are flagged as nonconforming in reports.
    pub fn conforming(&self) -> bool {
        self.overrides.is_empty()
    }

    /// Required size of the `i`-th witness set of a dominating sequence
    /// (1-based): `k^(t-i) * (2t - i + (t-i) q)`, exact. Beyond position `t`
    /// the value decays through negative territory; the formula is applied
    /// literally. With overridden thresholds, the list entry is used.
    pub fn witness_threshold(&self, i: u32) -> BigRational {
        assert!(i >= 1);
        if let Some(list) = &self.overrides.thresholds {
            let idx = (i as usize).min(list.len()) - 1;
            return BigRational::from_integer(BigInt::from(list[idx]));
        }
        let k = BigInt::from(self.cover_budget);
        let t = self.biclique_bound as i64;
        let i = i as i64;
        let linear = BigInt::from(2 * t - i)
            + BigInt::from(t - i) * BigInt::from(self.residual_cap);
        if i <= t {
            BigRational::from_integer(k.pow((t - i) as u32) * linear)
        } else {
            BigRational::new(linear, k.pow((i - t) as u32))
        }
    }

    /// Minimum neighborhood size for a vertex to start any dominating
    /// sequence: the first witness threshold.
    pub fn sequence_start_threshold(&self) -> BigRational {
        self.witness_threshold(1)
    }

    /// Upper bound on the number of pseudo-covers of a neighborhood larger
    /// than `min_gain`: `2 (2k^2)^k`.
    pub fn pseudocover_count_bound(&self) -> BigInt {
        let k = self.cover_budget;
        BigInt::from(2) * BigInt::from(2 * k as u64 * k as u64).pow(k)
    }

    /// Upper bound on the number of distinct pseudo-cover elements of one
    /// neighborhood: `(2k)^(2k+1)`.
    pub fn pool_size_bound(&self) -> BigInt {
        let k = self.cover_budget;
        BigInt::from(2 * k).pow(2 * k + 1)
    }

    /// Growth factor of the pseudo-cover closure after `depth` steps:
    /// `(2k)^(depth (2k+1))`.
    pub fn closure_growth(&self, depth: u32) -> BigInt {
        let k = self.cover_budget;
        BigInt::from(2 * k).pow(depth * (2 * k + 1))
    }

    /// The proven approximation factor:
    /// `2 + 3 (2k)^(t (2k+1)) + k^(t-1) (2t - 1 + (t-1) q)`.
    pub fn approximation_factor(&self) -> BigInt {
        let two = BigInt::from(2);
        let second = BigInt::from(3) * self.closure_growth(self.biclique_bound);
        let k = BigInt::from(self.cover_budget);
        let t = self.biclique_bound as u64;
        let third = k.pow(self.biclique_bound - 1)
            * BigInt::from(2 * t - 1 + (t - 1) * self.residual_cap);
        two + second + third
    }

    /// Minimum target size for the strong-vertex count bound to apply:
    /// `8 * density_bound * k^2`.
    pub fn strong_count_min_size(&self) -> Ratio<i64> {
        let k = self.cover_budget as i64;
        self.density_bound * Ratio::from_integer(8 * k * k)
    }

    /// Bound on the number of strong vertices for large targets:
    /// `4 * density_bound * k`.
    pub fn strong_count_bound(&self) -> Ratio<i64> {
        self.density_bound * Ratio::from_integer(4 * self.cover_budget as i64)
    }
}

/// Parses a rational like `3` or `7/2`.
pub fn parse_ratio(text: &str) -> Result<Ratio<i64>, String> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| format!("invalid integer {s:?}"))
    };
    match text.split_once('/') {
        None => Ok(Ratio::from_integer(parse_int(text)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == 0 {
                return Err("denominator must be nonzero".into());
            }
            Ok(Ratio::new(parse_int(n)?, den))
        }
    }
}

/// Compares an integer count against an exact rational threshold.
pub fn count_at_least(count: usize, threshold: &BigRational) -> bool {
    BigRational::from_integer(BigInt::from(count)) >= *threshold
}

/// True when the threshold is positive and a count of zero could still
/// matter; used to skip vacuous checks.
pub fn threshold_is_positive(threshold: &BigRational) -> bool {
    threshold.is_positive()
}

/// Converts a small nonnegative rational threshold to a `u64` ceiling if it
/// fits; handy for displaying thresholds in reports.
pub fn threshold_ceil_u64(threshold: &BigRational) -> Option<u64> {
    if threshold.is_negative() {
        return Some(0);
    }
    threshold.ceil().to_integer().to_u64()
}
