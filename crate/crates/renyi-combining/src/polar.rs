//! Recursive two-copy channel transform and desk-scale polarization
//! statistics.
//!
//! One step turns two binary-input channels into a degraded combination
//! (`-`) and an upgraded one (`+`): the `-` channel sees both outputs but
//! must guess the XOR of the inputs, the `+` channel additionally sees that
//! XOR. The figure of merit is the joint-order mutual information
//! [`mutual_info_j`], whose chain rule `I(W⁺) + I(W⁻) = 2·I(W)` is exact at
//! every finite order; together with a strictly positive spread on
//! mid-range channels (estimated by [`kappa_estimate`]) it drives the
//! per-level statistics of [`polarize_tree`] toward the extremes.
//!
//! Alphabets multiply at every step, so the joint-order path is exact and
//! depth-capped rather than quantized: the joint-order entropy is not
//! invariant under output merging, and approximate alphabet reduction would
//! silently bias it. Posterior merging is offered only at order 1, where it
//! is provably lossless for every computed quantity.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::{BinaryChannel, EntropyKind};
use crate::combining::{bec_bound, bsc_bound, expected_direction, Direction};
use crate::entropy::{binary_renyi_inverse, k_transform, Alpha, KKind};
use crate::par;
use crate::real::Real;
use crate::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// Cap on the output count a single transform step may materialize.
pub const OUTPUT_CAP: usize = 1 << 22;

/// Deepest tree when every alphabet is kept exact.
pub const MAX_DEPTH_EXACT: usize = 4;

/// Deepest tree when posterior merging keeps alphabets collapsed.
pub const MAX_DEPTH_MERGED: usize = 12;

fn guard_outputs(needed: usize) -> Result<()> {
    if needed > OUTPUT_CAP {
        return Err(Error::ResourceLimit { needed, cap: OUTPUT_CAP });
    }
    Ok(())
}

/// Degraded combination of two independent channel uses: both outputs are
/// seen, the XOR of the two inputs must be guessed. Output `(y₁, y₂)` has
/// likelihoods `½·Σ_{u₂} W(y₁|u₁⊕u₂)·V(y₂|u₂)`. The alphabet is the full
/// product, minus zero-mass pairs; equal posteriors are not merged.
pub fn polar_minus_pair(w: &BinaryChannel, v: &BinaryChannel) -> Result<BinaryChannel> {
    guard_outputs(w.output_count() * v.output_count())?;
    let mut outputs = Vec::with_capacity(w.output_count() * v.output_count());
    for &(a0, a1) in w.outputs() {
        for &(b0, b1) in v.outputs() {
            let u0 = 0.5 * (a0 * b0 + a1 * b1);
            let u1 = 0.5 * (a1 * b0 + a0 * b1);
            if u0 == 0.0 && u1 == 0.0 {
                continue;
            }
            outputs.push((u0, u1));
        }
    }
    BinaryChannel::new(outputs)
}

/// Upgraded combination of two independent channel uses: both outputs and
/// the first (XOR) input are seen, the second input must be guessed. Output
/// `(y₁, y₂, u₁)` has likelihood `½·W(y₁|u₁⊕u₂)·V(y₂|u₂)` under input
/// `u₂`. The alphabet is twice the product, minus zero-mass triples.
pub fn polar_plus_pair(w: &BinaryChannel, v: &BinaryChannel) -> Result<BinaryChannel> {
    guard_outputs(2 * w.output_count() * v.output_count())?;
    let mut outputs = Vec::with_capacity(2 * w.output_count() * v.output_count());
    for &(a0, a1) in w.outputs() {
        for &(b0, b1) in v.outputs() {
            for (c0, c1) in [(0.5 * a0 * b0, 0.5 * a1 * b1), (0.5 * a1 * b0, 0.5 * a0 * b1)] {
                if c0 == 0.0 && c1 == 0.0 {
                    continue;
                }
                outputs.push((c0, c1));
            }
        }
    }
    BinaryChannel::new(outputs)
}

/// [`polar_minus_pair`] of a channel with itself.
pub fn polar_minus(w: &BinaryChannel) -> Result<BinaryChannel> {
    polar_minus_pair(w, w)
}

/// [`polar_plus_pair`] of a channel with itself.
pub fn polar_plus(w: &BinaryChannel) -> Result<BinaryChannel> {
    polar_plus_pair(w, w)
}

/// Joint-order mutual information of a binary-input channel under the
/// uniform input, in nats: `ln 2` minus the joint-order conditional entropy.
/// Ranges from `0` (useless channel) to `ln 2` (noiseless channel). Finite
/// orders only.
pub fn mutual_info_j(w: &BinaryChannel, alpha: &Alpha<f64>) -> Result<f64> {
    if alpha.is_infinite() {
        return Err(Error::UnsupportedOrder(
            "joint-order mutual information is defined for finite orders only".into(),
        ));
    }
    Ok(LN2 - w.cond_entropy(alpha, EntropyKind::Jizba)?)
}

/// The two scalars polarization rests on.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PolarConditions {
    /// `I(W⁺) + I(W⁻) − 2·I(W)`; zero up to rounding at every finite order.
    pub chain_residual: f64,
    /// `(I(W⁺) − I(W⁻)) / 2`; nonnegative, and zero only for extremal
    /// channels.
    pub delta_w: f64,
}

/// Evaluate the chain-rule residual and the one-step spread for a channel.
pub fn check_polar_conditions(w: &BinaryChannel, alpha: &Alpha<f64>) -> Result<PolarConditions> {
    let i = mutual_info_j(w, alpha)?;
    let im = mutual_info_j(&polar_minus(w)?, alpha)?;
    let ip = mutual_info_j(&polar_plus(w)?, alpha)?;
    Ok(PolarConditions { chain_residual: ip + im - 2.0 * i, delta_w: 0.5 * (ip - im) })
}

/// Numerical lower-bound proxy for the mid-range spread constant: the
/// smallest value of `[LB(H, H) − H] / ln 2` over an entropy grid with
/// `H/ln 2 ∈ [a, b]`, where `LB` is the proven lower bound on the
/// joint-order entropy of a degraded combination (the symmetric-channel
/// expression, or the erasure expression at the orders where the latter is
/// the lower one). Strictly positive for `0 < a < b < 1`; shrinks to zero as
/// the window opens toward the extremes.
pub fn kappa_estimate(alpha: &Alpha<f64>, a: f64, b: f64, grid_n: usize) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b && b < 1.0) {
        return Err(Error::Config(format!(
            "spread window must satisfy 0 < a < b < 1, got a = {a}, b = {b}"
        )));
    }
    if grid_n < 2 {
        return Err(Error::Config(format!("spread grid needs at least 2 points, got {grid_n}")));
    }
    let (direction, _, assertable) = expected_direction::<f64>(EntropyKind::Jizba, alpha)?;
    if !assertable {
        return Err(Error::UnsupportedOrder(format!(
            "no proven one-sided bound at order {}",
            alpha.order_f64()
        )));
    }
    let mut kappa = f64::INFINITY;
    for i in 0..grid_n {
        let t = a + (b - a) * (i as f64) / ((grid_n - 1) as f64);
        let h = t * LN2;
        let lb = match direction {
            Direction::BscLowerBecUpper | Direction::Equality => bsc_bound(&h, &h, alpha)?,
            Direction::BscUpperBecLower => {
                let p = binary_renyi_inverse(&h, alpha)?;
                let k = k_transform(&p, alpha, KKind::Hayashi)?;
                bec_bound(&k, &k, alpha, EntropyKind::Jizba)?
            }
        };
        kappa = kappa.min((lb - h) / LN2);
    }
    Ok(kappa)
}

/// Whether synthesized channels keep their raw product alphabets or merge
/// outputs with equal posteriors after every step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergePolicy {
    /// Keep every product output; exact for all kinds and orders.
    None,
    /// Merge proportional likelihood pairs after each step; lossless only
    /// at order 1.
    PosteriorMerge,
}

impl MergePolicy {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            MergePolicy::None => "none",
            MergePolicy::PosteriorMerge => "posterior_merge",
        }
    }
}

impl fmt::Display for MergePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for MergePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(MergePolicy::None),
            "posterior_merge" => Ok(MergePolicy::PosteriorMerge),
            other => Err(Error::Parse(format!(
                "unknown merge policy {other:?}; expected none or posterior_merge"
            ))),
        }
    }
}

/// Validated configuration for a polarization run.
#[derive(Clone, Debug)]
pub struct PolarConfig {
    alpha: Alpha<f64>,
    max_depth: usize,
    threshold_low: f64,
    threshold_high: f64,
    merge: MergePolicy,
}

impl PolarConfig {
    /// Build a configuration.
    ///
    /// The thresholds must satisfy `0 < a < b < 1` (they compare against
    /// `I/ln 2`). Exact runs are capped at depth [`MAX_DEPTH_EXACT`];
    /// posterior-merged runs at [`MAX_DEPTH_MERGED`], and merging demands
    /// order 1 because it changes the joint-order entropy at every other
    /// order. The order must be finite.
    pub fn new(
        alpha: Alpha<f64>,
        max_depth: usize,
        a: f64,
        b: f64,
        merge: MergePolicy,
    ) -> Result<Self> {
        if alpha.is_infinite() {
            return Err(Error::UnsupportedOrder(
                "polarization statistics need a finite order".into(),
            ));
        }
        if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b && b < 1.0) {
            return Err(Error::Config(format!(
                "thresholds must satisfy 0 < a < b < 1, got a = {a}, b = {b}"
            )));
        }
        match merge {
            MergePolicy::None => {
                if max_depth > MAX_DEPTH_EXACT {
                    return Err(Error::Config(format!(
                        "exact alphabets grow doubly exponentially; depth {max_depth} exceeds \
                         the cap {MAX_DEPTH_EXACT}"
                    )));
                }
            }
            MergePolicy::PosteriorMerge => {
                if !alpha.is_one() {
                    return Err(Error::Config(format!(
                        "posterior merging changes the joint-order entropy at order {}; \
                         it is lossless only at order 1",
                        alpha.order_f64()
                    )));
                }
                if max_depth > MAX_DEPTH_MERGED {
                    return Err(Error::Config(format!(
                        "depth {max_depth} exceeds the merged-run cap {MAX_DEPTH_MERGED}"
                    )));
                }
            }
        }
        Ok(PolarConfig { alpha, max_depth, threshold_low: a, threshold_high: b, merge })
    }

    pub fn alpha(&self) -> &Alpha<f64> {
        &self.alpha
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// The `(a, b)` classification window.
    pub fn thresholds(&self) -> (f64, f64) {
        (self.threshold_low, self.threshold_high)
    }

    pub fn merge(&self) -> MergePolicy {
        self.merge
    }

    fn apply_merge(&self, ch: BinaryChannel) -> BinaryChannel {
        match self.merge {
            MergePolicy::None => ch,
            MergePolicy::PosteriorMerge => ch.merge_equivalent_outputs(),
        }
    }
}

/// One synthesized channel in a polarization run.
#[derive(Clone, Debug)]
pub struct PolarNode {
    pub channel: BinaryChannel,
    /// Sign path from the root, one `-`/`+` per level; empty at the root.
    pub path: String,
    pub level: usize,
    /// `mutual_info_j / ln 2`, in `[0, 1]` up to rounding.
    pub i_value: f64,
}

/// Statistics over all nodes of one level.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelStats {
    pub level: usize,
    /// Mean `i_value`; constant across levels by the chain rule.
    pub mean: f64,
    /// Population variance of `i_value`; nondecreasing across levels.
    pub variance: f64,
    /// Fraction of nodes with `i_value < a`.
    pub frac_low: f64,
    /// Fraction with `a ≤ i_value ≤ b`.
    pub frac_mid: f64,
    /// Fraction with `i_value > b`.
    pub frac_high: f64,
}

/// All nodes and per-level statistics of one run, level-major order.
#[derive(Clone, Debug)]
pub struct PolarRun {
    pub nodes: Vec<PolarNode>,
    pub levels: Vec<LevelStats>,
}

impl PolarRun {
    /// CSV of every node, columns `path,level,i_value`; the root's path is
    /// the empty string.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path,level,i_value\n");
        for node in &self.nodes {
            out.push_str(&format!(
                "{},{},{}\n",
                node.path,
                node.level,
                node.i_value.to_csv_string()
            ));
        }
        out
    }

    /// Per-level statistics as a JSON array.
    pub fn levels_json(&self) -> String {
        serde_json::to_string(&self.levels).expect("level statistics serialize")
    }
}

fn level_stats(level: usize, values: &[f64], cfg: &PolarConfig) -> LevelStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let (a, b) = cfg.thresholds();
    let low = values.iter().filter(|&&v| v < a).count() as f64 / n;
    let high = values.iter().filter(|&&v| v > b).count() as f64 / n;
    LevelStats {
        level,
        mean,
        variance,
        frac_low: low,
        frac_mid: 1.0 - low - high,
        frac_high: high,
    }
}

/// A channel labeled with its sign path from the root.
type PathedChannel = (String, BinaryChannel);

/// Evaluate one level's channels and append them to the node list.
fn record_level(
    nodes: &mut Vec<PolarNode>,
    current: &[PathedChannel],
    level: usize,
    cfg: &PolarConfig,
) -> Result<LevelStats> {
    let ivals: Vec<f64> = par::map_slice(current, |(_, ch)| {
        mutual_info_j(ch, cfg.alpha()).map(|i| i / LN2)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    for ((path, ch), &i) in current.iter().zip(&ivals) {
        nodes.push(PolarNode { channel: ch.clone(), path: path.clone(), level, i_value: i });
    }
    Ok(level_stats(level, &ivals, cfg))
}

/// Polarize a single channel recursively to `cfg.max_depth()`.
///
/// Level `k` holds the `2^k` distinct sign paths; in this stationary setting
/// every path is a single channel, so per-level statistics over paths equal
/// statistics over the full multiplicity-weighted collection. Children are
/// expanded in parallel within a level. Depth and alphabet growth are
/// guarded: a step that would materialize more than [`OUTPUT_CAP`] outputs
/// fails with a resource error rather than thrash.
pub fn polarize_tree(w: &BinaryChannel, cfg: &PolarConfig) -> Result<PolarRun> {
    let mut current = vec![(String::new(), cfg.apply_merge(w.clone()))];
    let mut nodes = Vec::new();
    let mut levels = Vec::with_capacity(cfg.max_depth() + 1);
    for level in 0..=cfg.max_depth() {
        levels.push(record_level(&mut nodes, &current, level, cfg)?);
        if level == cfg.max_depth() {
            break;
        }
        let expanded: Vec<[PathedChannel; 2]> =
            par::map_slice(&current, |(path, ch)| -> Result<_> {
                let minus = cfg.apply_merge(polar_minus(ch)?);
                let plus = cfg.apply_merge(polar_plus(ch)?);
                Ok([(format!("{path}-"), minus), (format!("{path}+"), plus)])
            })
            .into_iter()
            .collect::<Result<_>>()?;
        current = expanded.into_iter().flatten().collect();
    }
    Ok(PolarRun { nodes, levels })
}

/// Polarize a sequence of `2^max_depth` channels, pairing adjacent channels
/// with equal sign paths at every step.
///
/// This is the non-stationary variant: the two inputs of a step may be
/// different channels, and every level carries the full sequence (several
/// nodes then share a sign path). The chain rule holds per pair, so the
/// per-level mean is still conserved. With all channels equal this produces
/// the same statistics as [`polarize_tree`].
pub fn polarize_sequence(ws: &[BinaryChannel], cfg: &PolarConfig) -> Result<PolarRun> {
    let want = 1usize << cfg.max_depth();
    if ws.len() != want {
        return Err(Error::Config(format!(
            "need exactly 2^depth = {want} leaf channels, got {}",
            ws.len()
        )));
    }
    let mut current: Vec<PathedChannel> =
        ws.iter().map(|w| (String::new(), cfg.apply_merge(w.clone()))).collect();
    let mut nodes = Vec::new();
    let mut levels = Vec::with_capacity(cfg.max_depth() + 1);
    for level in 0..=cfg.max_depth() {
        levels.push(record_level(&mut nodes, &current, level, cfg)?);
        if level == cfg.max_depth() {
            break;
        }
        // Groups of equal path are contiguous with even sizes, so plain
        // adjacent pairing never crosses a group boundary.
        let pairs: Vec<(&PathedChannel, &PathedChannel)> =
            current.chunks_exact(2).map(|c| (&c[0], &c[1])).collect();
        let transformed: Vec<(PathedChannel, PathedChannel)> =
            par::map_slice(&pairs, |(l, r)| -> Result<_> {
                let minus = cfg.apply_merge(polar_minus_pair(&l.1, &r.1)?);
                let plus = cfg.apply_merge(polar_plus_pair(&l.1, &r.1)?);
                Ok(((format!("{}-", l.0), minus), (format!("{}+", l.0), plus)))
            })
            .into_iter()
            .collect::<Result<_>>()?;
        // Each group contributes its minus children first, then its pluses,
        // keeping the next level contiguous by path.
        let pairs_per_group = (current.len() >> level) / 2;
        let mut next = Vec::with_capacity(current.len());
        for group in transformed.chunks(pairs_per_group) {
            for (minus, _) in group {
                next.push(minus.clone());
            }
            for (_, plus) in group {
                next.push(plus.clone());
            }
        }
        current = next;
    }
    Ok(PolarRun { nodes, levels })
}
