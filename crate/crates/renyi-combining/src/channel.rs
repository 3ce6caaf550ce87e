//! Binary-input channels, joint distributions, and the conditional entropy
//! evaluators.
//!
//! A [`BinaryChannel`] stores one likelihood pair per output symbol. A
//! [`JointDistribution`] stores one joint mass pair per output symbol; it is
//! what the entropy definitions actually consume. Both keep their numbers in
//! `f64`; evaluation lifts into the caller's precision type.
//!
//! The general worker is [`cond_entropy_table`], which accepts an arbitrary
//! finite input alphabet. The chain-rule and additivity identities need
//! composite inputs such as `(X, Y)`, so the binary case is just the
//! two-row special case of the table form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::{binary_renyi, Alpha, KKind};
use crate::real::Real;
use crate::{Error, Result};

/// Tolerance on probability normalization checks.
const MASS_TOL: f64 = 1e-12;

/// Relative tolerance for posterior-proportionality when merging outputs.
const MERGE_REL_TOL: f64 = 1e-10;

/// Compensated accumulator for the normalization checks. Product-alphabet
/// channels reach several hundred thousand outputs; naive summation over
/// that many entries drifts past `MASS_TOL` on its own and would reject
/// masses that are exact to machine precision.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

/// Which conditional entropy definition to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropyKind {
    /// `(α/(1−α)) · ln Σ_y p(y) (Σ_x p(x|y)^α)^{1/α}`; supports α = ∞.
    Arimoto,
    /// `(1/(1−α)) · ln Σ_{x,y} p(y) p(x|y)^α`.
    Hayashi,
    /// `(1/(1−α)) · [ln Σ_{x,y} p(x,y)^α − ln Σ_y p(y)^α]`.
    Jizba,
    /// `(1/(1−α)) · Σ_y p(y) ln Σ_x p(x|y)^α`.
    Cachin,
    /// `−Σ_{x,y} p(x,y) ln p(x|y)`; ignores the order parameter.
    Shannon,
    /// `−ln Σ_y max_x p(x,y)`; ignores the order parameter.
    MinEntropy,
}

impl EntropyKind {
    pub const ALL: [EntropyKind; 6] = [
        EntropyKind::Arimoto,
        EntropyKind::Hayashi,
        EntropyKind::Jizba,
        EntropyKind::Cachin,
        EntropyKind::Shannon,
        EntropyKind::MinEntropy,
    ];

    /// The four order-parameterized definitions.
    pub const RENYI: [EntropyKind; 4] = [
        EntropyKind::Arimoto,
        EntropyKind::Hayashi,
        EntropyKind::Jizba,
        EntropyKind::Cachin,
    ];

    pub fn token(self) -> &'static str {
        match self {
            EntropyKind::Arimoto => "A",
            EntropyKind::Hayashi => "H",
            EntropyKind::Jizba => "J",
            EntropyKind::Cachin => "C",
            EntropyKind::Shannon => "shannon",
            EntropyKind::MinEntropy => "min",
        }
    }
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(EntropyKind::Arimoto),
            "H" | "h" => Ok(EntropyKind::Hayashi),
            "J" | "j" => Ok(EntropyKind::Jizba),
            "C" | "c" => Ok(EntropyKind::Cachin),
            "shannon" | "Shannon" => Ok(EntropyKind::Shannon),
            "min" | "Min" => Ok(EntropyKind::MinEntropy),
            other => Err(Error::Parse(format!(
                "unknown entropy kind {other:?}; expected A, H, J, C, shannon, or min"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WireRow {
    w0: f64,
    w1: f64,
}

#[derive(Serialize, Deserialize)]
struct WireChannel {
    outputs: Vec<WireRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// A discrete memoryless channel with binary input.
///
/// Row `y` holds `(W(y|0), W(y|1))`. Both columns must sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryChannel {
    outputs: Vec<(f64, f64)>,
    labels: Option<Vec<String>>,
}

impl BinaryChannel {
    pub fn new(outputs: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_labels(outputs, None)
    }

    pub fn with_labels(outputs: Vec<(f64, f64)>, labels: Option<Vec<String>>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidDistribution("channel has no outputs".into()));
        }
        let mut sums = (Compensated::default(), Compensated::default());
        for (i, &(w0, w1)) in outputs.iter().enumerate() {
            if !w0.is_finite() || !w1.is_finite() || w0 < 0.0 || w1 < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "output {i} has invalid likelihoods ({w0}, {w1})"
                )));
            }
            sums.0.add(w0);
            sums.1.add(w1);
        }
        let sums = (sums.0.value(), sums.1.value());
        if (sums.0 - 1.0).abs() > MASS_TOL || (sums.1 - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!(
                "likelihood columns sum to ({}, {}), expected 1 within {MASS_TOL}",
                sums.0, sums.1
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != outputs.len() {
                return Err(Error::InvalidDistribution(format!(
                    "{} labels for {} outputs",
                    l.len(),
                    outputs.len()
                )));
            }
        }
        Ok(BinaryChannel { outputs, labels })
    }

    /// Symmetric channel that flips the input with probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        check_unit("crossover probability", p)?;
        Self::new(vec![(1.0 - p, p), (p, 1.0 - p)])
    }

    /// Erasure channel: the input survives with probability `1−ε` and is
    /// replaced by a third, input-independent symbol with probability `ε`.
    pub fn bec(eps: f64) -> Result<Self> {
        check_unit("erasure probability", eps)?;
        Self::new(vec![(1.0 - eps, 0.0), (0.0, 1.0 - eps), (eps, eps)])
    }

    pub fn outputs(&self) -> &[(f64, f64)] {
        &self.outputs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Joint distribution under input probability `P(X=0) = px0`.
    pub fn joint_with_input(&self, px0: f64) -> Result<JointDistribution> {
        check_unit("input probability", px0)?;
        let cells = self
            .outputs
            .iter()
            .map(|&(w0, w1)| (px0 * w0, (1.0 - px0) * w1))
            .collect();
        JointDistribution::new(cells)
    }

    /// Joint distribution under the uniform input, the default everywhere.
    pub fn to_joint(&self) -> JointDistribution {
        self.joint_with_input(0.5)
            .expect("uniform input on a valid channel is a valid joint")
    }

    /// Conditional entropy of the input given the output, uniform input.
    pub fn cond_entropy<R: Real>(&self, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
        self.to_joint().cond_entropy(alpha, kind)
    }

    /// Exponentiated conditional entropy, uniform input.
    pub fn k_cond<R: Real>(&self, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
        self.to_joint().k_cond(alpha, kind)
    }

    /// Merge outputs whose likelihood pairs are proportional, i.e. outputs
    /// that induce the same posterior on the input. Zero-mass outputs are
    /// dropped. Surviving outputs keep first-occurrence order and labels.
    ///
    /// Proportionality is decided by the cross product `w0·v1 = v0·w1`
    /// within a relative tolerance, which avoids dividing by small
    /// likelihoods.
    pub fn merge_equivalent_outputs(&self) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::new();
        let mut kept_labels: Vec<String> = Vec::new();
        for (i, &(w0, w1)) in self.outputs.iter().enumerate() {
            if w0 == 0.0 && w1 == 0.0 {
                continue;
            }
            let slot = merged.iter().position(|&(v0, v1)| {
                let cross = (w0 * v1 - v0 * w1).abs();
                let scale = (w0 * v1).abs().max((v0 * w1).abs()).max(f64::MIN_POSITIVE);
                cross <= MERGE_REL_TOL * scale
            });
            match slot {
                Some(j) => {
                    merged[j].0 += w0;
                    merged[j].1 += w1;
                }
                None => {
                    merged.push((w0, w1));
                    if let Some(ref l) = self.labels {
                        kept_labels.push(l[i].clone());
                    }
                }
            }
        }
        BinaryChannel {
            outputs: merged,
            labels: self.labels.as_ref().map(|_| kept_labels),
        }
    }

    /// Parse a channel argument: `bsc:<p>`, `bec:<eps>`, or a file path
    /// whose extension selects the format (`.json` or `.csv`).
    pub fn from_arg(arg: &str) -> Result<Self> {
        if let Some(p) = arg.strip_prefix("bsc:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("invalid crossover probability {p:?}")))?;
            return Self::bsc(p);
        }
        if let Some(e) = arg.strip_prefix("bec:") {
            let e: f64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("invalid erasure probability {e:?}")))?;
            return Self::bec(e);
        }
        Self::load(Path::new(arg))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match extension(path) {
            Some("json") => Self::from_json(&text),
            Some("csv") => Self::from_csv(&text),
            _ => Err(Error::Parse(format!(
                "cannot infer channel format from {}; use a .json or .csv path",
                path.display()
            ))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = match extension(path) {
            Some("json") => self.to_json(),
            Some("csv") => self.to_csv(),
            _ => {
                return Err(Error::Parse(format!(
                    "cannot infer channel format from {}; use a .json or .csv path",
                    path.display()
                )))
            }
        };
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WireChannel = serde_json::from_str(text)?;
        let outputs = wire.outputs.into_iter().map(|r| (r.w0, r.w1)).collect();
        Self::with_labels(outputs, wire.labels)
    }

    pub fn to_json(&self) -> String {
        let wire = WireChannel {
            outputs: self
                .outputs
                .iter()
                .map(|&(w0, w1)| WireRow { w0, w1 })
                .collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("channel serialization cannot fail")
    }

    /// Parse the `w0,w1` CSV form. Errors carry 1-based data row numbers.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty channel file".into()))?;
        if header.trim() != "w0,w1" {
            return Err(Error::Parse(format!(
                "expected header \"w0,w1\", found {:?}",
                header.trim()
            )));
        }
        let mut outputs = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = i + 1;
            let mut fields = line.split(',');
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse(format!(
                        "row {row}: expected two comma-separated fields, found {line:?}"
                    )))
                }
            };
            let w0: f64 = a.trim().parse().map_err(|_| {
                Error::Parse(format!("row {row}: invalid likelihood {:?}", a.trim()))
            })?;
            let w1: f64 = b.trim().parse().map_err(|_| {
                Error::Parse(format!("row {row}: invalid likelihood {:?}", b.trim()))
            })?;
            outputs.push((w0, w1));
        }
        Self::new(outputs)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("w0,w1\n");
        for &(w0, w1) in &self.outputs {
            // Shortest round-trip decimal form keeps the file bit-faithful.
            out.push_str(&format!("{w0},{w1}\n"));
        }
        out
    }
}

/// A joint distribution of a binary input and a finite output.
///
/// Cell `y` holds `(p(X=0, y), p(X=1, y))`; cells sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    cells: Vec<(f64, f64)>,
}

impl JointDistribution {
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidDistribution("joint has no outputs".into()));
        }
        let mut acc = Compensated::default();
        for (i, &(p0, p1)) in cells.iter().enumerate() {
            if !p0.is_finite() || !p1.is_finite() || p0 < 0.0 || p1 < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "cell {i} has invalid masses ({p0}, {p1})"
                )));
            }
            acc.add(p0);
            acc.add(p1);
        }
        let total = acc.value();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total}, expected 1 within {MASS_TOL}"
            )));
        }
        Ok(JointDistribution { cells })
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    /// Marginal probability of the input symbol 0.
    pub fn px0(&self) -> f64 {
        self.cells.iter().map(|c| c.0).sum()
    }

    /// Recover the conditional channel and the input probability.
    /// Zero-mass output cells become zero-likelihood outputs.
    pub fn to_channel(&self) -> Result<(BinaryChannel, f64)> {
        let px0 = self.px0();
        let px1 = 1.0 - px0;
        if px0 <= 0.0 || px1 <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "input marginal ({px0}, {px1}) leaves a conditional undefined"
            )));
        }
        let outputs = self
            .cells
            .iter()
            .map(|&(p0, p1)| (p0 / px0, p1 / px1))
            .collect();
        Ok((BinaryChannel::new(outputs)?, px0))
    }

    /// Conditional entropy of the input given the output, in nats.
    pub fn cond_entropy<R: Real>(&self, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
        let groups: Vec<Vec<f64>> = self.cells.iter().map(|&(p0, p1)| vec![p0, p1]).collect();
        cond_entropy_table(&groups, alpha, kind)
    }

    /// Exponentiated conditional entropy: `exp(((1−α)/α)·H)` for the
    /// Arimoto kind, `exp((1−α)·H)` for Hayashi and Jizba. At α = ∞ the
    /// Arimoto value is `exp(−H_min)`.
    pub fn k_cond<R: Real>(&self, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
        let scale = k_scale(alpha, kind)?;
        let h = self.cond_entropy(alpha, kind)?;
        Ok((scale * h).exp())
    }

    /// Same value as [`Self::k_cond`], assembled output by output:
    /// `K^A = Σ_y p(y) k^A(p(0|y))`, `K^H = Σ_y p(y) k^H(p(0|y))`, and
    /// `K^J = Σ_y p̃(y) k^H(p(0|y))` with `p̃` the tilted output weights.
    pub fn k_cond_by_parts<R: Real>(&self, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
        k_scale(alpha, kind)?; // reject unsupported kind/order pairs up front
        let weights: Vec<f64> = self.cells.iter().map(|&(p0, p1)| p0 + p1).collect();
        let outer: Vec<R> = match kind {
            EntropyKind::Jizba => tilt(&weights, alpha)?,
            _ => weights.iter().map(|&w| R::from_f64(w)).collect(),
        };
        let mut total = R::zero();
        for (&(p0, p1), w) in self.cells.iter().zip(outer) {
            let py = p0 + p1;
            if py == 0.0 {
                continue;
            }
            let post = R::from_f64(p0 / py);
            let k = match (kind, alpha) {
                (EntropyKind::Arimoto, Alpha::Infinity) => {
                    crate::entropy::k_transform(&post, &Alpha::Infinity, KKind::Arimoto)?
                }
                (EntropyKind::Arimoto, _) => {
                    crate::entropy::k_transform(&post, alpha, KKind::Arimoto)?
                }
                _ => crate::entropy::k_transform(&post, alpha, KKind::Hayashi)?,
            };
            total = total + w * k;
        }
        Ok(total)
    }
}

fn k_scale<R: Real>(alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
    match kind {
        EntropyKind::Arimoto => match alpha {
            Alpha::One => Err(Error::UnsupportedOrder(
                "exponentiated entropy degenerates to 1 at order 1".into(),
            )),
            Alpha::Infinity => Ok(-R::one()),
            Alpha::Finite(a) => Ok((R::one() - a.clone()) / a.clone()),
        },
        EntropyKind::Hayashi | EntropyKind::Jizba => match alpha {
            Alpha::One => Err(Error::UnsupportedOrder(
                "exponentiated entropy degenerates to 1 at order 1".into(),
            )),
            Alpha::Infinity => Err(Error::UnsupportedOrder(
                "no infinite-order limit for this kind".into(),
            )),
            Alpha::Finite(a) => Ok(R::one() - a.clone()),
        },
        _ => Err(Error::UnsupportedOrder(format!(
            "kind {kind} has no exponentiated form"
        ))),
    }
}

/// Tilted weights `p̃(y) = p(y)^α / Σ p(y)^α`, computed against the largest
/// weight so that large orders cannot underflow every numerator at once.
pub fn tilt<R: Real>(weights: &[f64], alpha: &Alpha<R>) -> Result<Vec<R>> {
    let m = weights.iter().cloned().fold(0.0f64, f64::max);
    if weights.is_empty() || m <= 0.0 {
        return Err(Error::Domain("tilting needs a nonzero weight vector".into()));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Domain("tilting needs nonnegative finite weights".into()));
    }
    let a = match alpha {
        Alpha::One => {
            let total: f64 = weights.iter().sum();
            return Ok(weights.iter().map(|&w| R::from_f64(w / total)).collect());
        }
        Alpha::Finite(a) => a.clone(),
        Alpha::Infinity => {
            return Err(Error::UnsupportedOrder("tilting needs a finite order".into()))
        }
    };
    let scaled: Vec<R> = weights
        .iter()
        .map(|&w| {
            let r = R::from_f64(w / m);
            if w == 0.0 {
                R::zero()
            } else {
                r.pow(&a)
            }
        })
        .collect();
    let mut total = R::zero();
    for s in &scaled {
        total = total + s.clone();
    }
    Ok(scaled.into_iter().map(|s| s / total.clone()).collect())
}

/// Conditional entropy `H(U|Y)` for a joint over an arbitrary finite input
/// alphabet, given as `groups[y][u] = p(U=u, Y=y)`.
///
/// Inner sums are scaled by the largest mass in each group, so the only
/// powers taken are of ratios in `[0, 1]` with at least one ratio equal
/// to 1. That keeps the evaluation finite out to very large orders.
pub fn cond_entropy_table<R: Real>(
    groups: &[Vec<f64>],
    alpha: &Alpha<R>,
    kind: EntropyKind,
) -> Result<R> {
    validate_table(groups)?;
    match kind {
        EntropyKind::Shannon => return shannon_table(groups),
        EntropyKind::MinEntropy => return min_entropy_table(groups),
        _ => {}
    }
    match alpha {
        Alpha::One => shannon_table(groups),
        Alpha::Infinity => match kind {
            EntropyKind::Arimoto => min_entropy_table(groups),
            _ => Err(Error::UnsupportedOrder(format!(
                "kind {kind} has no infinite-order limit"
            ))),
        },
        Alpha::Finite(a) => match kind {
            EntropyKind::Arimoto => arimoto_table(groups, a),
            EntropyKind::Hayashi => hayashi_table(groups, a),
            EntropyKind::Jizba => jizba_table(groups, a),
            EntropyKind::Cachin => cachin_table(groups, a),
            EntropyKind::Shannon | EntropyKind::MinEntropy => unreachable!(),
        },
    }
}

fn validate_table(groups: &[Vec<f64>]) -> Result<()> {
    if groups.is_empty() {
        return Err(Error::InvalidDistribution("joint table has no groups".into()));
    }
    let mut acc = Compensated::default();
    for (y, g) in groups.iter().enumerate() {
        for &p in g {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "group {y} has invalid mass {p}"
                )));
            }
            acc.add(p);
        }
    }
    let total = acc.value();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!(
            "total mass {total}, expected 1 within {MASS_TOL}"
        )));
    }
    Ok(())
}

fn group_mass(g: &[f64]) -> f64 {
    g.iter().sum()
}

fn shannon_table<R: Real>(groups: &[Vec<f64>]) -> Result<R> {
    let mut h = R::zero();
    for g in groups {
        let py = group_mass(g);
        if py == 0.0 {
            continue;
        }
        for &p in g {
            if p > 0.0 {
                let cell = R::from_f64(p);
                h = h + cell.clone() * (R::from_f64(py) / cell).ln();
            }
        }
    }
    Ok(h)
}

fn min_entropy_table<R: Real>(groups: &[Vec<f64>]) -> Result<R> {
    let mut sum = 0.0f64;
    for g in groups {
        sum += g.iter().cloned().fold(0.0f64, f64::max);
    }
    Ok(-R::from_f64(sum).ln())
}

/// `ln Σ_u (p_u)^α` for one group, scaled by the group's largest mass:
/// returns `α·ln m + ln Σ (p_u/m)^α`.
fn scaled_log_power_sum<R: Real>(g: &[f64], a: &R) -> Option<R> {
    let m = g.iter().cloned().fold(0.0f64, f64::max);
    if m <= 0.0 {
        return None;
    }
    let mut sum = R::zero();
    for &p in g {
        if p > 0.0 {
            sum = sum + R::from_f64(p / m).pow(a);
        }
    }
    Some(a.clone() * R::from_f64(m).ln() + sum.ln())
}

fn arimoto_table<R: Real>(groups: &[Vec<f64>], a: &R) -> Result<R> {
    // Σ_y p(y)(Σ_u p(u|y)^α)^{1/α} = Σ_y (Σ_u p(u,y)^α)^{1/α}: the outer
    // weight absorbs into the inner sum, leaving one power per group.
    let inv_a = R::one() / a.clone();
    let mut sum = R::zero();
    for g in groups {
        if let Some(lps) = scaled_log_power_sum(g, a) {
            sum = sum + (inv_a.clone() * lps).exp();
        }
    }
    Ok(a.clone() / (R::one() - a.clone()) * sum.ln())
}

fn hayashi_table<R: Real>(groups: &[Vec<f64>], a: &R) -> Result<R> {
    // Σ_y p(y) Σ_u p(u|y)^α, with each group's power sum taken over
    // posteriors scaled by the largest posterior.
    let mut sum = R::zero();
    for g in groups {
        let py = group_mass(g);
        if py == 0.0 {
            continue;
        }
        let posts: Vec<f64> = g.iter().map(|&p| p / py).collect();
        let lps = scaled_log_power_sum(&posts, a).expect("nonzero group has a positive maximum");
        sum = sum + R::from_f64(py) * lps.exp();
    }
    Ok(sum.ln() / (R::one() - a.clone()))
}

fn jizba_table<R: Real>(groups: &[Vec<f64>], a: &R) -> Result<R> {
    let flat: Vec<f64> = groups.iter().flatten().cloned().collect();
    let marginals: Vec<f64> = groups.iter().map(|g| group_mass(g)).collect();
    let num = scaled_log_power_sum(&flat, a)
        .ok_or_else(|| Error::InvalidDistribution("joint table is all zero".into()))?;
    let den = scaled_log_power_sum(&marginals, a)
        .ok_or_else(|| Error::InvalidDistribution("joint table is all zero".into()))?;
    Ok((num - den) / (R::one() - a.clone()))
}

fn cachin_table<R: Real>(groups: &[Vec<f64>], a: &R) -> Result<R> {
    let mut sum = R::zero();
    for g in groups {
        let py = group_mass(g);
        if py == 0.0 {
            continue;
        }
        let posts: Vec<f64> = g.iter().map(|&p| p / py).collect();
        let lps = scaled_log_power_sum(&posts, a).expect("nonzero group has a positive maximum");
        sum = sum + R::from_f64(py) * lps;
    }
    Ok(sum / (R::one() - a.clone()))
}

/// Conditional entropy of a BSC with the given crossover, any kind. Every
/// output of a BSC carries the same two-point posterior, so all six
/// definitions collapse to the scalar binary entropy.
pub fn bsc_entropy<R: Real>(p: &R, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
    match kind {
        EntropyKind::Shannon => binary_renyi(p, &Alpha::One),
        EntropyKind::MinEntropy => binary_renyi(p, &Alpha::Infinity),
        _ => binary_renyi(p, alpha),
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0,1], got {v}")));
    }
    Ok(())
}

fn extension(path: &Path) -> Option<&str> {
    path.extension().and_then(|e| e.to_str())
}
