//! Information-theoretic kernels over finite distributions. All quantities
//! are in bits and `0·log 0` is taken as 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack absorbed at the ends of `[0, 1]` when validating a probability.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Allowed deviation of a distribution's total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    /// Values within [`PROBABILITY_TOLERANCE`] outside the unit interval are
    /// clamped onto it; anything further out (or NaN) is rejected.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite()
            || !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&value)
        {
            return Err(Error::domain(format!(
                "probability {value} is outside [0, 1]"
            )));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 − p`.
    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// `−p·log2 p` with the `0·log 0 = 0` convention applied by branch.
#[inline]
fn neg_plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

fn validate_mass<'a>(values: impl Iterator<Item = &'a f64>) -> Result<f64> {
    let mut total = 0.0;
    for &v in values {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(format!(
                "weight {v} is negative or not finite"
            )));
        }
        total += v;
    }
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::domain(format!(
            "weights sum to {total}, expected 1 within {NORMALIZATION_TOLERANCE:e}"
        )));
    }
    Ok(total)
}

/// Non-empty probability vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FiniteDistribution {
    weights: Vec<Probability>,
}

impl FiniteDistribution {
    /// Validates and, if the mass is off by at most
    /// [`NORMALIZATION_TOLERANCE`], renormalises the weights.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("distribution must have at least one weight"));
        }
        let total = validate_mass(weights.iter())?;
        // leave sums that are already 1 up to round-off untouched, so that
        // construction is idempotent
        let scale = if (total - 1.0).abs() <= weights.len() as f64 * f64::EPSILON {
            1.0
        } else {
            total
        };
        let weights = weights
            .into_iter()
            .map(|w| Probability::new(w / scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteDistribution { weights })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain("distribution must have at least one weight"));
        }
        Self::new(vec![1.0 / len as f64; len])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Probability] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().map(|p| p.get())
    }
}

impl<'de> Deserialize<'de> for FiniteDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(d)?;
        FiniteDistribution::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Joint distribution of two finite variables; rows index the first.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl JointDistribution {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::domain("joint distribution must be non-empty"));
        }
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("joint distribution rows have unequal length"));
        }
        let entries: Vec<f64> = matrix.into_iter().flatten().collect();
        let total = validate_mass(entries.iter())?;
        let entries = entries.into_iter().map(|e| e / total).collect();
        Ok(JointDistribution {
            rows,
            cols,
            entries,
        })
    }

    /// Joint distribution of independent variables.
    pub fn product(first: &FiniteDistribution, second: &FiniteDistribution) -> Result<Self> {
        Self::new(
            first
                .iter()
                .map(|a| second.iter().map(|b| a * b).collect())
                .collect(),
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.entries
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.entries.chunks(self.cols) {
            for (acc, v) in out.iter_mut().zip(row) {
                *acc += v;
            }
        }
        out
    }

    /// Entropy of the pair, `H(X, Y)`.
    pub fn joint_entropy(&self) -> f64 {
        entropy_of(&self.entries)
    }
}

fn entropy_of(weights: &[f64]) -> f64 {
    weights.iter().map(|&w| neg_plogp(w)).sum()
}

/// `h(p) = −p log2 p − (1−p) log2(1−p)`.
pub fn binary_entropy(p: Probability) -> f64 {
    let p = p.get();
    (neg_plogp(p) + neg_plogp(1.0 - p)).clamp(0.0, 1.0)
}

/// Checked variant of [`binary_entropy`] taking a raw float.
pub fn binary_entropy_of(p: f64) -> Result<f64> {
    Probability::new(p).map(binary_entropy)
}

pub fn shannon_entropy(d: &FiniteDistribution) -> f64 {
    d.iter().map(neg_plogp).sum()
}

/// `I(X:Y) = H(X) + H(Y) − H(X,Y)`, floored at zero.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let hx = entropy_of(&j.row_marginal());
    let hy = entropy_of(&j.col_marginal());
    (hx + hy - j.joint_entropy()).max(0.0)
}

/// `Σ_i w_i · h(c_i)`: the conditional entropy of a binary variable given an
/// outcome `i` drawn with weight `w_i`, when `c_i = P(A=0 | i)`.
pub fn conditional_entropy_given(
    outcome_weights: &FiniteDistribution,
    conditionals: &[Probability],
) -> Result<f64> {
    if outcome_weights.len() != conditionals.len() {
        return Err(Error::usage(format!(
            "{} outcome weights but {} conditionals",
            outcome_weights.len(),
            conditionals.len()
        )));
    }
    let sum: f64 = outcome_weights
        .iter()
        .zip(conditionals)
        .map(|(w, &c)| w * binary_entropy(c))
        .sum();
    Ok(sum.clamp(0.0, 1.0))
}

/// Joint distribution of a binary `A` (rows `A=0`, `A=1`) and an outcome
/// variable with the given weights and conditionals `P(A=0 | i)`.
pub fn binary_joint(
    outcome_weights: &FiniteDistribution,
    conditionals: &[Probability],
) -> Result<JointDistribution> {
    if outcome_weights.len() != conditionals.len() {
        return Err(Error::usage(format!(
            "{} outcome weights but {} conditionals",
            outcome_weights.len(),
            conditionals.len()
        )));
    }
    let zero_row = outcome_weights
        .iter()
        .zip(conditionals)
        .map(|(w, c)| w * c.get())
        .collect();
    let one_row = outcome_weights
        .iter()
        .zip(conditionals)
        .map(|(w, c)| w * (1.0 - c.get()))
        .collect();
    JointDistribution::new(vec![zero_row, one_row])
}

/// Uniform bit sent through a binary symmetric channel with the given
/// probability of arriving unflipped.
pub fn symmetric_channel_joint(accuracy: Probability) -> JointDistribution {
    let a = accuracy.get();
    JointDistribution::new(vec![
        vec![a / 2.0, (1.0 - a) / 2.0],
        vec![(1.0 - a) / 2.0, a / 2.0],
    ])
    .expect("symmetric channel joint is normalised by construction")
}
