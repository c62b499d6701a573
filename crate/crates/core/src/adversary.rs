//! Eavesdropper strategies over finite outcome alphabets.
//!
//! A strategy assigns to each of Eve's outcomes `i` a weight `p_i` and the
//! conditional `P(A=0 | i)` for Alice's bit. Eve's best guess on outcome `i`
//! is right with probability `P_{E|i} = max(P(A=0|i), P(A=1|i))` and her
//! overall guessing probability is `P_E = Σ p_i P_{E|i}`.
//!
//! The key fact used by the security condition is the lower bound
//! `Σ p_i h(P_{E|i}) ≥ 2(1 − P_E)`, tight exactly when every `P_{E|i}` is
//! `1/2` or `1`. This module checks it directly on strategies, searches for
//! its minimiser on a lattice, and builds strategies where `P_B > P_E` yet
//! Eve holds more information than Bob.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, conditional_entropy_given, FiniteDistribution, Probability};
use crate::error::{Error, Result};

/// Largest alphabet accepted by [`minimize_conditional_entropy`].
pub const MAX_ORACLE_ALPHABET: usize = 5;
/// Smallest guess-grid size accepted by [`minimize_conditional_entropy`].
pub const MIN_ORACLE_GRID: usize = 10;
/// Largest guess-grid size accepted by [`minimize_conditional_entropy`].
pub const MAX_ORACLE_GRID: usize = 400;

/// Slack used when checking `Σ p_i h(P_{E|i}) ≥ 2(1 − P_E)`.
pub const CONCAVITY_SLACK: f64 = 1e-12;

/// Minimum strict margin for a strategy to count as a counterexample.
pub const COUNTEREXAMPLE_MARGIN: f64 = 1e-12;

#[derive(Deserialize)]
struct StrategyDoc {
    weights: Vec<f64>,
    conditionals: Vec<f64>,
}

/// Eve's outcome weights and Alice's conditionals `P(A=0 | i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StrategyDoc")]
pub struct EveStrategy {
    weights: FiniteDistribution,
    conditionals: Vec<Probability>,
}

impl TryFrom<StrategyDoc> for EveStrategy {
    type Error = Error;

    fn try_from(doc: StrategyDoc) -> Result<Self> {
        EveStrategy::from_raw(doc.weights, doc.conditionals)
    }
}

impl EveStrategy {
    pub fn new(weights: FiniteDistribution, conditionals: Vec<Probability>) -> Result<Self> {
        if weights.len() != conditionals.len() {
            return Err(Error::domain(format!(
                "strategy has {} weights but {} conditionals",
                weights.len(),
                conditionals.len()
            )));
        }
        Ok(EveStrategy {
            weights,
            conditionals,
        })
    }

    pub fn from_raw(weights: Vec<f64>, conditionals: Vec<f64>) -> Result<Self> {
        let weights = FiniteDistribution::new(weights)?;
        let conditionals = conditionals
            .into_iter()
            .map(Probability::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights, conditionals)
    }

    /// Parses `{"weights": [...], "conditionals": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("strategy JSON: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strategy serialises")
    }

    pub fn alphabet_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &FiniteDistribution {
        &self.weights
    }

    pub fn conditionals(&self) -> &[Probability] {
        &self.conditionals
    }

    /// `P_{E|i} = max(P(A=0|i), 1 − P(A=0|i))` per outcome.
    pub fn guess_per_outcome(&self) -> impl Iterator<Item = f64> + '_ {
        self.conditionals.iter().map(|c| c.get().max(1.0 - c.get()))
    }

    /// `P(A=0)` induced by the strategy.
    pub fn alice_zero_probability(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.conditionals)
            .map(|(w, c)| w * c.get())
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

/// Symmetric channel from Alice's uniform bit to Bob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub p_b: Probability,
}

impl ChannelModel {
    pub fn new(p_b: Probability) -> Result<Self> {
        if p_b.get() < 0.5 {
            return Err(Error::domain(format!("P_B = {} is below 1/2", p_b.get())));
        }
        Ok(ChannelModel { p_b })
    }

    /// `I(A:B) = 1 − h(P_B)`.
    pub fn bob_information(&self) -> f64 {
        1.0 - binary_entropy(self.p_b)
    }
}

/// `P_E = Σ p_i P_{E|i}`.
pub fn guessing_probability(s: &EveStrategy) -> Probability {
    let pe: f64 = s
        .weights
        .iter()
        .zip(s.guess_per_outcome())
        .map(|(w, g)| w * g)
        .sum();
    Probability::new(pe.clamp(0.5, 1.0)).expect("clamped")
}

/// `I(A:E) = h(P(A=0)) − Σ p_i h(P(A=0|i))`, using the strategy's own
/// marginal for Alice.
pub fn eve_information(s: &EveStrategy) -> f64 {
    let h_a = binary_entropy(Probability::new(s.alice_zero_probability()).expect("clamped"));
    let h_a_given_e = conditional_entropy_given(&s.weights, &s.conditionals)
        .expect("lengths checked at construction");
    (h_a - h_a_given_e).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcavityCheck {
    /// `Σ p_i h(P_{E|i})`
    pub lhs: f64,
    /// `2(1 − P_E)`
    pub rhs: f64,
    pub holds: bool,
}

impl ConcavityCheck {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn concavity_bound_check(s: &EveStrategy) -> ConcavityCheck {
    let lhs: f64 = s
        .weights
        .iter()
        .zip(s.guess_per_outcome())
        .map(|(w, g)| w * binary_entropy(Probability::new(g).expect("in [1/2, 1]")))
        .sum();
    let rhs = 2.0 * (1.0 - guessing_probability(s).get());
    ConcavityCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - CONCAVITY_SLACK,
    }
}

/// Largest distance from `{1/2, 1}` among the per-outcome guessing
/// probabilities of outcomes with positive weight.
pub fn two_point_deviation(s: &EveStrategy) -> f64 {
    s.weights
        .iter()
        .zip(s.guess_per_outcome())
        .filter(|(w, _)| *w > 0.0)
        .map(|(_, g)| (g - 0.5).abs().min((1.0 - g).abs()))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Lattice oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub target_pe: f64,
    pub alphabet_size: usize,
    pub grid_steps: usize,
    /// Weight lattice: every `p_i` is a multiple of `1/weight_steps`.
    pub weight_steps: usize,
    /// Spacing of the guess grid `1/2 + j/(2n)`.
    pub resolution: f64,
    /// `min Σ p_i h(P_{E|i})` over lattice strategies with `P_E` in
    /// `[target_pe − band, target_pe]`.
    pub min_value: f64,
    pub achieved_pe: f64,
    /// Width of the accepted `P_E` window below the target, `1/n`.
    pub band: f64,
    pub argmin: EveStrategy,
}

const UNUSED: u32 = 0;

#[inline]
fn pack(j: usize, m: usize, weight_steps: usize) -> u32 {
    (1 + j * (weight_steps + 1) + m) as u32
}

#[inline]
fn unpack(code: u32, weight_steps: usize) -> Option<(usize, usize)> {
    if code == UNUSED {
        return None;
    }
    let c = code as usize - 1;
    Some((c / (weight_steps + 1), c % (weight_steps + 1)))
}

/// Per-slot best cost and the decision that achieved it, on the
/// `(weight units, guess units)` table.
struct SlotTable {
    cost: Vec<f64>,
    decision: Vec<u32>,
}

impl SlotTable {
    fn carry(old: &[f64]) -> Self {
        SlotTable {
            cost: old.to_vec(),
            decision: vec![UNUSED; old.len()],
        }
    }

    fn absorb(&mut self, other: &SlotTable) {
        for (k, (&c, &d)) in other.cost.iter().zip(&other.decision).enumerate() {
            if (c, d) < (self.cost[k], self.decision[k]) {
                self.cost[k] = c;
                self.decision[k] = d;
            }
        }
    }
}

/// Minimises `Σ p_i h(P_{E|i})` over strategies with `alphabet_size`
/// outcomes, guessing probabilities on the grid `1/2 + j/(2n)` (`n =
/// grid_steps`) and weights on the simplex lattice with `⌈n/2⌉` steps,
/// among those with `P_E ∈ [target_pe − 1/n, target_pe]`.
///
/// The window is one-sided, so the minimum never undercuts `2(1 − P_E)`
/// unless the concavity bound itself fails, and it always contains a lattice
/// strategy supported on `{1/2, 1}`.
///
/// The search is exhaustive over the lattice. It is carried out as a dynamic
/// programme over outcome slots: the state is the number of weight units
/// placed and the accumulated `Σ m_i j_i`, and both the objective and the
/// state update are additive over outcomes, so the table minimum equals the
/// minimum over all lattice strategies.
pub fn minimize_conditional_entropy(
    target_pe: Probability,
    alphabet_size: usize,
    grid_steps: usize,
) -> Result<OracleResult> {
    if !(1..=MAX_ORACLE_ALPHABET).contains(&alphabet_size) {
        return Err(Error::usage(format!(
            "alphabet size {alphabet_size} outside supported range 1..={MAX_ORACLE_ALPHABET}"
        )));
    }
    if !(MIN_ORACLE_GRID..=MAX_ORACLE_GRID).contains(&grid_steps) {
        return Err(Error::usage(format!(
            "grid steps {grid_steps} outside supported range {MIN_ORACLE_GRID}..={MAX_ORACLE_GRID}"
        )));
    }
    let pe = target_pe.get();
    if pe < 0.5 {
        return Err(Error::domain(format!("target P_E = {pe} is below 1/2")));
    }

    let n = grid_steps;
    let w = n.div_ceil(2);
    // P_E = 1/2 + t / (2 n w) with t = Σ m_i j_i ∈ [0, n w]. Accepted window:
    // P_E ∈ [pe − 1/n, pe], i.e. t ∈ [t* − 2w, t*].
    let scale = (2 * n * w) as f64;
    let t_target = (pe - 0.5) * scale;
    let t_cap = ((t_target + 1e-9).floor().max(0.0) as usize).min(n * w);
    let t_final_lo = (t_target - (2 * w) as f64 - 1e-9).ceil().max(0.0) as usize;
    let cols = t_cap + 1;
    let idx = |u: usize, t: usize| u * cols + t;
    // Row u can only finish at t ≥ t_final_lo if t ≥ t_final_lo − (w − u)·n,
    // and cannot hold more than u·n; cells outside that window are never read.
    let row_lo = |u: usize| t_final_lo.saturating_sub((w - u) * n);
    let row_hi = |u: usize| (u * n).min(t_cap);

    let unit_cost: Vec<f64> = (0..=n)
        .map(|j| {
            let g = Probability::new(0.5 + j as f64 / (2 * n) as f64).expect("grid in [1/2, 1]");
            binary_entropy(g) / w as f64
        })
        .collect();

    let mut layer = vec![f64::INFINITY; (w + 1) * cols];
    layer[idx(0, 0)] = 0.0;
    let mut decisions: Vec<Vec<u32>> = Vec::with_capacity(alphabet_size);

    let threads = rayon::current_num_threads().clamp(1, 8);
    let chunk = (n + 1).div_ceil(threads);
    let js: Vec<usize> = (0..=n).collect();

    for _slot in 0..alphabet_size {
        let old = &layer;
        let merged = js
            .par_chunks(chunk)
            .map(|block| {
                let mut best = SlotTable::carry(old);
                let mut chain = vec![f64::INFINITY; old.len()];
                let mut units = vec![0u16; old.len()];
                for &j in block {
                    let c = unit_cost[j];
                    chain[..cols].copy_from_slice(&old[..cols]);
                    units[..cols].fill(0);
                    for u in 1..=w {
                        let row = idx(u, 0);
                        let (done, rest) = chain.split_at_mut(row);
                        let (units_done, units_rest) = units.split_at_mut(row);
                        let prev_cost = &done[idx(u - 1, 0)..];
                        let prev_units = &units_done[idx(u - 1, 0)..];
                        let cur_cost = &mut rest[..cols];
                        let cur_units = &mut units_rest[..cols];
                        let stay = &old[row..row + cols];
                        let best_cost = &mut best.cost[row..row + cols];
                        let best_dec = &mut best.decision[row..row + cols];
                        let lo = j.max(row_lo(u)).min(cols);
                        let hi = row_hi(u) + 1;
                        cur_cost[..lo].copy_from_slice(&stay[..lo]);
                        cur_units[..lo].fill(0);
                        if hi < cols {
                            cur_cost[hi..].copy_from_slice(&stay[hi..]);
                            cur_units[hi..].fill(0);
                        }
                        for t in lo..hi.max(lo) {
                            let step = prev_cost[t - j] + c;
                            if step < stay[t] {
                                let m = prev_units[t - j] + 1;
                                cur_cost[t] = step;
                                cur_units[t] = m;
                                if step <= best_cost[t] {
                                    let code = pack(j, m as usize, w);
                                    if (step, code) < (best_cost[t], best_dec[t]) {
                                        best_cost[t] = step;
                                        best_dec[t] = code;
                                    }
                                }
                            } else {
                                cur_cost[t] = stay[t];
                                cur_units[t] = 0;
                            }
                        }
                    }
                }
                best
            })
            .reduce(
                || SlotTable::carry(old),
                |mut a, b| {
                    a.absorb(&b);
                    a
                },
            );
        layer = merged.cost;
        decisions.push(merged.decision);
    }

    // lowest cost, then the P_E closest to the target
    let t_best = (t_final_lo..cols)
        .filter(|&t| layer[idx(w, t)].is_finite())
        .min_by(|&a, &b| {
            layer[idx(w, a)]
                .total_cmp(&layer[idx(w, b)])
                .then(b.cmp(&a))
        })
        .ok_or_else(|| Error::domain("no lattice strategy reaches the target window"))?;

    let mut letters = Vec::with_capacity(alphabet_size);
    let (mut u, mut t) = (w, t_best);
    for dec in decisions.iter().rev() {
        match unpack(dec[idx(u, t)], w) {
            Some((j, m)) => {
                letters.push((j, m));
                u -= m;
                t -= m * j;
            }
            None => letters.push((0, 0)),
        }
    }
    debug_assert_eq!((u, t), (0, 0));
    letters.sort_unstable();

    let argmin = EveStrategy::from_raw(
        letters.iter().map(|&(_, m)| m as f64 / w as f64).collect(),
        letters
            .iter()
            .map(|&(j, _)| 0.5 + j as f64 / (2 * n) as f64)
            .collect(),
    )?;
    let check = concavity_bound_check(&argmin);
    let achieved_pe = 0.5 + t_best as f64 / scale;
    Ok(OracleResult {
        target_pe: pe,
        alphabet_size,
        grid_steps: n,
        weight_steps: w,
        resolution: 1.0 / (2 * n) as f64,
        min_value: check.lhs,
        achieved_pe,
        band: 1.0 / n as f64,
        argmin,
    })
}

// ---------------------------------------------------------------------------
// Random strategies
// ---------------------------------------------------------------------------

/// Weights uniform on the simplex, conditionals uniform on `[0, 1]`.
pub fn random_strategy<R: Rng + ?Sized>(rng: &mut R, alphabet_size: usize) -> EveStrategy {
    let raw: Vec<f64> = (0..alphabet_size)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let weights = if total > 0.0 {
        raw.iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / alphabet_size as f64; alphabet_size]
    };
    let conditionals = (0..alphabet_size).map(|_| rng.random::<f64>()).collect();
    EveStrategy::from_raw(weights, conditionals).expect("sampler output is a valid strategy")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavitySweep {
    pub seed: u64,
    pub samples: usize,
    pub max_alphabet: usize,
    pub violations: usize,
    /// Smallest `lhs − rhs` seen.
    pub min_gap: f64,
}

/// Checks the concavity bound on `samples` random strategies with alphabet
/// sizes cycling through `1..=max_alphabet`. Sample `i` uses its own
/// ChaCha stream, so the result does not depend on scheduling.
pub fn concavity_sweep(samples: usize, max_alphabet: usize, seed: u64) -> Result<ConcavitySweep> {
    if max_alphabet == 0 {
        return Err(Error::usage("alphabet size must be at least 1"));
    }
    let (violations, min_gap) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let s = random_strategy(&mut rng, 1 + i % max_alphabet);
            let check = concavity_bound_check(&s);
            (usize::from(!check.holds), check.gap())
        })
        .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));
    Ok(ConcavitySweep {
        seed,
        samples,
        max_alphabet,
        violations,
        min_gap,
    })
}

// ---------------------------------------------------------------------------
// Counterexamples
// ---------------------------------------------------------------------------

/// A strategy with `P_E < P_B` but `I(A:E) > I(A:B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub p_b: f64,
    pub strategy: EveStrategy,
    pub p_e: f64,
    pub i_ab: f64,
    pub i_ae: f64,
}

impl Counterexample {
    /// Evaluates `strategy` against a symmetric channel with accuracy `p_b`
    /// and returns it if it violates the binary-alphabet implication.
    pub fn evaluate(p_b: Probability, strategy: EveStrategy) -> Option<Self> {
        let p_e = guessing_probability(&strategy).get();
        let i_ab = ChannelModel { p_b }.bob_information();
        let i_ae = eve_information(&strategy);
        let c = Counterexample {
            p_b: p_b.get(),
            strategy,
            p_e,
            i_ab,
            i_ae,
        };
        (c.guess_margin() > COUNTEREXAMPLE_MARGIN && c.information_margin() > COUNTEREXAMPLE_MARGIN)
            .then_some(c)
    }

    /// `P_B − P_E`
    pub fn guess_margin(&self) -> f64 {
        self.p_b - self.p_e
    }

    /// `I(A:E) − I(A:B)`
    pub fn information_margin(&self) -> f64 {
        self.i_ae - self.i_ab
    }
}

fn open_unit_half(p_b: Probability) -> Result<f64> {
    let pb = p_b.get();
    if pb <= 0.5 || pb >= 1.0 {
        return Err(Error::domain(format!(
            "P_B = {pb} must lie strictly inside (1/2, 1)"
        )));
    }
    Ok(pb)
}

/// Ternary counterexample with weights `(p, (1−p)/2, (1−p)/2)` and
/// conditionals `(1/2, 1, 0)`, where `p = 2(1−P_B) + slack·(h(P_B) − 2(1−P_B))`.
pub fn build_counterexample(p_b: Probability, slack: f64) -> Result<Counterexample> {
    let pb = open_unit_half(p_b)?;
    if !(slack > 0.0 && slack < 1.0) {
        return Err(Error::usage(format!("slack {slack} must lie in (0, 1)")));
    }
    let floor = 2.0 * (1.0 - pb);
    let p = floor + slack * (binary_entropy(p_b) - floor);
    counterexample_with_blind_weight(p_b, p, 3)
}

/// Builds the counterexample with a given weight `p` on the blind outcome
/// (`P_{E|i} = 1/2`). `p` must lie in `(2(1−P_B), h(P_B))`.
///
/// With `alphabet_size ≥ 3` the ternary family is used (padded with
/// zero-weight outcomes). With fewer outcomes Eve is restricted to a binary
/// symmetric guess at the same `P_E`, which never beats Bob; that case is
/// reported as a domain error.
pub fn counterexample_with_blind_weight(
    p_b: Probability,
    p: f64,
    alphabet_size: usize,
) -> Result<Counterexample> {
    let pb = open_unit_half(p_b)?;
    let lo = 2.0 * (1.0 - pb);
    let hi = binary_entropy(p_b);
    if !(p > lo && p < hi) {
        return Err(Error::domain(format!(
            "blind weight {p} outside ({lo}, {hi}); no counterexample at P_B = {pb}"
        )));
    }
    if alphabet_size == 0 {
        return Err(Error::usage("alphabet size must be at least 1"));
    }
    let p_e = 1.0 - p / 2.0;
    let strategy = if alphabet_size >= 3 {
        let mut weights = vec![p, (1.0 - p) / 2.0, (1.0 - p) / 2.0];
        let mut conds = vec![0.5, 1.0, 0.0];
        weights.resize(alphabet_size, 0.0);
        conds.resize(alphabet_size, 0.5);
        EveStrategy::from_raw(weights, conds)?
    } else if alphabet_size == 2 {
        EveStrategy::from_raw(vec![0.5, 0.5], vec![p_e, 1.0 - p_e])?
    } else {
        EveStrategy::from_raw(vec![1.0], vec![p_e])?
    };
    Counterexample::evaluate(p_b, strategy).ok_or_else(|| {
        Error::domain(format!(
            "an alphabet of size {alphabet_size} admits no counterexample at P_B = {pb}, P_E = {p_e}"
        ))
    })
}

/// Which binary strategies [`binary_counterexample_search`] enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryClass {
    /// Weights `(w, 1−w)`, conditionals `(g, 1−g)`: Eve's guess is right
    /// with the same probability on both outcomes.
    Symmetric,
    /// Any binary strategy that keeps Alice's bit uniform.
    UniformMarginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySearchReport {
    pub class: BinaryClass,
    pub grid: usize,
    pub checked: usize,
    pub found: usize,
    pub example: Option<Counterexample>,
}

/// Exhaustive search for binary-alphabet counterexamples on a `grid`-step
/// lattice over strategy parameters and `P_B ∈ (1/2, 1]`.
pub fn binary_counterexample_search(grid: usize, class: BinaryClass) -> Result<BinarySearchReport> {
    if grid < 2 {
        return Err(Error::usage("binary search grid needs at least 2 steps"));
    }
    let g = grid as f64;
    let strategies: Vec<EveStrategy> = match class {
        BinaryClass::Symmetric => (0..=grid)
            .flat_map(|a| (0..=grid).map(move |b| (a, b)))
            .map(|(a, b)| {
                let w = a as f64 / g;
                let c = 0.5 + b as f64 / (2.0 * g);
                EveStrategy::from_raw(vec![w, 1.0 - w], vec![c, 1.0 - c])
            })
            .collect::<Result<_>>()?,
        BinaryClass::UniformMarginal => (1..grid)
            .flat_map(|a| (0..=grid).map(move |b| (a, b)))
            .filter_map(|(a, b)| {
                let w = a as f64 / g;
                let c1 = b as f64 / g;
                let c2 = (0.5 - w * c1) / (1.0 - w);
                (-1e-12..=1.0 + 1e-12)
                    .contains(&c2)
                    .then(|| EveStrategy::from_raw(vec![w, 1.0 - w], vec![c1, c2.clamp(0.0, 1.0)]))
            })
            .collect::<Result<_>>()?,
    };
    let p_bs: Vec<Probability> = (1..=grid)
        .map(|k| Probability::new(0.5 + k as f64 / (2.0 * g)))
        .collect::<Result<_>>()?;

    let p_bs = &p_bs;
    let hits: Vec<(usize, Counterexample)> = strategies
        .par_iter()
        .enumerate()
        .flat_map_iter(|(si, s)| {
            p_bs.iter().enumerate().filter_map(move |(bi, &pb)| {
                Counterexample::evaluate(pb, s.clone()).map(|c| (si * p_bs.len() + bi, c))
            })
        })
        .collect();
    let example = hits.iter().min_by_key(|(k, _)| *k).map(|(_, c)| c.clone());
    Ok(BinarySearchReport {
        class,
        grid,
        checked: strategies.len() * p_bs.len(),
        found: hits.len(),
        example,
    })
}
