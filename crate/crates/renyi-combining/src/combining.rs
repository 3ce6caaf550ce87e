//! Combining two independent channel uses and bounding the result.
//!
//! Two independent pairs `(X₁, Y₁)` and `(X₂, Y₂)` with binary inputs
//! combine into the pair `(X₁⊕X₂, (Y₁, Y₂))`. The conditional entropy of
//! the combination is bracketed by two closed-form expressions: one exact
//! for pairs of symmetric channels (the BSC expression) and one exact for
//! pairs of erasure channels (the BEC expression). Which of the two is the
//! upper and which the lower bound depends on the convexity regime of the
//! combining curve for the chosen entropy kind and order; the static table
//! in [`curve_regime`] records what is proven, conjectured, or open.

use std::fmt;

use serde::Serialize;

use crate::channel::{cond_entropy_table, EntropyKind, JointDistribution};
use crate::entropy::{
    binary_renyi, binary_renyi_inverse, convolve, k_at_half, k_transform, Alpha, CurveKind, KKind,
};
use crate::real::Real;
use crate::{Error, Result};

/// Shape of a combining curve on its domain square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curvature {
    Convex,
    Concave,
    Linear,
    /// Second differences of both signs beyond tolerance.
    Neither,
}

/// How firmly a regime entry is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Evidence {
    Proven,
    Conjectured,
    Open,
}

/// Expected orientation of the two bounds around the combined entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// BSC expression is the lower bound, BEC expression the upper bound.
    BscLowerBecUpper,
    /// BSC expression is the upper bound, BEC expression the lower bound.
    BscUpperBecLower,
    /// Both expressions coincide with the combined entropy.
    Equality,
}

/// Verdict of one bound check, judged against the expected direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sandwiched,
    BscViolated,
    BecViolated,
    BothViolated,
}

impl Curvature {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            Curvature::Convex => "convex",
            Curvature::Concave => "concave",
            Curvature::Linear => "linear",
            Curvature::Neither => "neither",
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Evidence {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            Evidence::Proven => "proven",
            Evidence::Conjectured => "conjectured",
            Evidence::Open => "open",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Direction {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            Direction::BscLowerBecUpper => "bsc_lower_bec_upper",
            Direction::BscUpperBecLower => "bsc_upper_bec_lower",
            Direction::Equality => "equality",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Verdict {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            Verdict::Sandwiched => "sandwiched",
            Verdict::BscViolated => "bsc_violated",
            Verdict::BecViolated => "bec_violated",
            Verdict::BothViolated => "both_violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Slack below which a bound is considered violated by [`check_bounds`].
pub const SLACK_TOL: f64 = 1e-10;

/// Known curvature of the given combining curve at the given finite order.
///
/// The Hayashi curve is settled on the whole half-line. The Arimoto and
/// entropy curves carry proven windows (including the proven mixed-sign
/// windows (1.58, 1.97) and (1.388, 1.95) respectively), conjectured
/// regions, and genuinely open gaps between them.
///
/// The conjectured single-sign segments just above order 1 (Arimoto up to
/// 1.5783, entropy up to 1.3863) describe the diagonal behaviour of the
/// curves; full-grid scans detect mixed signs near the domain edge somewhat
/// earlier (see `analysis::conjecture_scan`). Conjectured entries are never
/// assertable, so callers must not rely on the sign there.
pub fn curve_regime(curve: CurveKind, order: f64) -> (Option<Curvature>, Evidence) {
    use Curvature::*;
    use Evidence::*;
    if order.is_infinite() {
        return match curve {
            // max(p, 1−p) turns convolution into an affine map of k-values.
            CurveKind::KArimoto => (Some(Linear), Proven),
            _ => (None, Open),
        };
    }
    match curve {
        CurveKind::KHayashi => {
            if order < 1.0 {
                (Some(Convex), Proven)
            } else if order < 2.0 {
                (Some(Concave), Proven)
            } else if order == 2.0 {
                (Some(Linear), Proven)
            } else if order < 3.0 {
                (Some(Convex), Proven)
            } else if order == 3.0 {
                (Some(Linear), Proven)
            } else {
                (Some(Concave), Proven)
            }
        }
        CurveKind::KArimoto => {
            if order < 1.0 {
                (Some(Convex), Conjectured)
            } else if order < 1.5783 {
                (Some(Concave), Conjectured)
            } else if order <= 1.58 {
                (None, Open)
            } else if order < 1.97 {
                (Some(Neither), Proven)
            } else if order < 2.0 {
                (None, Open)
            } else {
                (Some(Convex), Proven)
            }
        }
        CurveKind::Entropy => {
            if order < 1.0 {
                (Some(Convex), Conjectured)
            } else if order == 1.0 {
                (Some(Convex), Proven)
            } else if order < 1.3863 {
                (Some(Convex), Conjectured)
            } else if order <= 1.388 {
                (None, Open)
            } else if order < 1.95 {
                (Some(Neither), Proven)
            } else if order < 2.0 {
                (None, Open)
            } else {
                (Some(Concave), Conjectured)
            }
        }
    }
}

/// Which combining curve governs the bounds of an entropy kind.
pub fn curve_for_kind(kind: EntropyKind) -> Option<CurveKind> {
    match kind {
        EntropyKind::Arimoto | EntropyKind::MinEntropy => Some(CurveKind::KArimoto),
        EntropyKind::Hayashi | EntropyKind::Jizba => Some(CurveKind::KHayashi),
        EntropyKind::Cachin | EntropyKind::Shannon => Some(CurveKind::Entropy),
    }
}

/// Expected bound orientation for a kind and order, with its curvature
/// basis and whether it may be asserted in tests.
///
/// The Arimoto, Hayashi, and Jizba bounds act in k-space, where the map
/// back to entropy reverses for orders above 1, so the Jensen direction
/// flips across 1. The Cachin and Shannon bounds act directly in entropy
/// space and never flip. Entries resting on a conjectured or mixed-sign
/// regime come back non-assertable and default to the Shannon-like
/// orientation when nothing better is known.
pub fn expected_direction<R: Real>(
    kind: EntropyKind,
    alpha: &Alpha<R>,
) -> Result<(Direction, Evidence, bool)> {
    if matches!(kind, EntropyKind::Shannon) || alpha.is_one() {
        return Ok((Direction::BscLowerBecUpper, Evidence::Proven, true));
    }
    if matches!(kind, EntropyKind::MinEntropy) {
        return Ok((Direction::Equality, Evidence::Proven, true));
    }
    if alpha.is_infinite() && !matches!(kind, EntropyKind::Arimoto) {
        return Err(Error::UnsupportedOrder(format!(
            "kind {kind} has no infinite-order limit"
        )));
    }
    let order = alpha.order_f64();
    let curve = curve_for_kind(kind).expect("all kinds map to a curve");
    let (curvature, evidence) = curve_regime(curve, order);
    let in_k_space = matches!(curve, CurveKind::KArimoto | CurveKind::KHayashi);
    let flip = in_k_space && order > 1.0;
    let direction = match curvature {
        Some(Curvature::Linear) => Direction::Equality,
        Some(Curvature::Convex) => {
            if flip {
                Direction::BscUpperBecLower
            } else {
                Direction::BscLowerBecUpper
            }
        }
        Some(Curvature::Concave) => {
            if flip {
                Direction::BscLowerBecUpper
            } else {
                Direction::BscUpperBecLower
            }
        }
        Some(Curvature::Neither) | None => Direction::BscLowerBecUpper,
    };
    let assertable = evidence == Evidence::Proven
        && matches!(
            curvature,
            Some(Curvature::Convex) | Some(Curvature::Concave) | Some(Curvature::Linear)
        );
    Ok((direction, evidence, assertable))
}

/// Joint of `(X₁⊕X₂, (Y₁, Y₂))` for independent pairs. The output alphabet
/// is the full Cartesian product; equal posteriors are not merged here.
pub fn combine_pair(j1: &JointDistribution, j2: &JointDistribution) -> Result<JointDistribution> {
    let mut cells = Vec::with_capacity(j1.cells().len() * j2.cells().len());
    for &(a0, a1) in j1.cells() {
        for &(b0, b1) in j2.cells() {
            cells.push((a0 * b0 + a1 * b1, a0 * b1 + a1 * b0));
        }
    }
    JointDistribution::new(cells)
}

/// The symmetric-channel expression: the entropy a pair of BSCs with the
/// given single-use entropies would combine to.
pub fn bsc_bound<R: Real>(h1: &R, h2: &R, alpha: &Alpha<R>) -> Result<R> {
    let p = binary_renyi_inverse(h1, alpha)?;
    let q = binary_renyi_inverse(h2, alpha)?;
    binary_renyi(&convolve(&p, &q), alpha)
}

/// The erasure-channel expression.
///
/// For the Arimoto, Hayashi, and Jizba kinds the inputs are the matching
/// k-values and the result is `(prefactor) · ln[(δ−K₁)(δ−K₂)/(1−δ) + δ]`
/// with the half-point constant δ of the kind's transform. The argument is
/// again a valid k-value, so it is strictly positive; a nonpositive
/// argument means the inputs were out of range. For the Cachin and Shannon
/// kinds the inputs are entropies and the bound is
/// `ln 2 − (ln 2 − H₁)(ln 2 − H₂)/ln 2`.
pub fn bec_bound<R: Real>(v1: &R, v2: &R, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
    match kind {
        EntropyKind::Cachin | EntropyKind::Shannon => {
            let ln2 = R::ln2();
            for h in [v1, v2] {
                if !h.is_finite_val() || *h < -R::from_f64(1e-12) || *h > ln2.clone() + R::from_f64(1e-12)
                {
                    return Err(Error::Domain(format!(
                        "entropy input {h} outside [0, ln 2]"
                    )));
                }
            }
            Ok(ln2.clone()
                - (ln2.clone() - v1.clone()) * (ln2.clone() - v2.clone()) / ln2)
        }
        EntropyKind::Arimoto | EntropyKind::MinEntropy => {
            let inf = Alpha::Infinity;
            let alpha = if matches!(kind, EntropyKind::MinEntropy) {
                &inf
            } else {
                alpha
            };
            let delta = k_at_half(alpha, KKind::Arimoto)?;
            let pre = match alpha {
                Alpha::Infinity => -R::one(),
                Alpha::Finite(a) => a.clone() / (R::one() - a.clone()),
                Alpha::One => unreachable!("rejected by the half-point constant"),
            };
            bec_log_expr(v1, v2, &delta, &pre)
        }
        EntropyKind::Hayashi | EntropyKind::Jizba => {
            let delta = k_at_half(alpha, KKind::Hayashi)?;
            let pre = match alpha {
                Alpha::Finite(a) => R::one() / (R::one() - a.clone()),
                _ => unreachable!("rejected by the half-point constant"),
            };
            bec_log_expr(v1, v2, &delta, &pre)
        }
    }
}

fn bec_log_expr<R: Real>(k1: &R, k2: &R, delta: &R, pre: &R) -> Result<R> {
    let one = R::one();
    let slack = R::from_f64(1e-9);
    let lo = crate::real::rmin(one.clone(), delta.clone());
    let hi = crate::real::rmax(one.clone(), delta.clone());
    for k in [k1, k2] {
        if !k.is_finite_val() || *k < lo.clone() - slack.clone() || *k > hi.clone() + slack.clone()
        {
            return Err(Error::Domain(format!(
                "k-value input {k} outside [{lo}, {hi}]"
            )));
        }
    }
    let arg = (delta.clone() - k1.clone()) * (delta.clone() - k2.clone())
        / (one.clone() - delta.clone())
        + delta.clone();
    if !(arg > R::zero()) {
        return Err(Error::Domain(format!(
            "erasure expression argument {arg} not positive; inputs outside the k-range"
        )));
    }
    Ok(pre.clone() * arg.ln())
}

/// Difference between the symmetric-pair entropy and the erasure expression
/// evaluated for two copies of a BSC with crossover `p`. A sign change of
/// this gap across `p` at fixed order certifies that the governing curve is
/// neither convex nor concave there.
pub fn gap_delta<R: Real>(p: &R, alpha: &Alpha<R>, kind: EntropyKind) -> Result<R> {
    if !(*p > R::zero()) || *p > R::from_f64(0.5) {
        return Err(Error::Domain(format!("crossover must lie in (0, 1/2], got {p}")));
    }
    if alpha.is_one() {
        return Err(Error::UnsupportedOrder(
            "the gap degenerates at order 1; probe 1 ± ε instead".into(),
        ));
    }
    let actual = binary_renyi(&convolve(p, p), alpha)?;
    let bec = match kind {
        EntropyKind::Arimoto => {
            let k = k_transform(p, alpha, KKind::Arimoto)?;
            bec_bound(&k, &k, alpha, EntropyKind::Arimoto)?
        }
        EntropyKind::Hayashi => {
            let k = k_transform(p, alpha, KKind::Hayashi)?;
            bec_bound(&k, &k, alpha, EntropyKind::Hayashi)?
        }
        EntropyKind::Cachin => {
            let h = binary_renyi(p, alpha)?;
            bec_bound(&h, &h, alpha, EntropyKind::Cachin)?
        }
        other => {
            return Err(Error::Config(format!(
                "gap is defined for kinds A, H, C; got {other}"
            )))
        }
    };
    Ok(actual - bec)
}

/// One bound comparison: the combined entropy against both expressions.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub kind: EntropyKind,
    pub alpha: f64,
    pub actual: f64,
    pub bsc_bound: f64,
    pub bec_bound: f64,
    /// Expected orientation from the regime table.
    pub direction: Direction,
    pub evidence: Evidence,
    /// Whether the orientation rests on a proven regime.
    pub assertable: bool,
    /// Signed slack of the BSC-side inequality; negative means violated.
    pub slack_bsc: f64,
    /// Signed slack of the BEC-side inequality; negative means violated.
    pub slack_bec: f64,
    pub verdict: Verdict,
}

/// Evaluate the combined entropy of two independent pairs and compare it
/// against both expressions, oriented by the regime table.
pub fn check_bounds<R: Real>(
    j1: &JointDistribution,
    j2: &JointDistribution,
    alpha: &Alpha<R>,
    kind: EntropyKind,
) -> Result<BoundReport> {
    // The min-entropy kind is the infinite-order Arimoto kind, and the
    // Shannon kind ignores the order, so both pin their own order here.
    let inf = Alpha::Infinity;
    let one = Alpha::One;
    let (kind, alpha) = match kind {
        EntropyKind::MinEntropy => (EntropyKind::Arimoto, &inf),
        EntropyKind::Shannon => (EntropyKind::Shannon, &one),
        _ => (kind, alpha),
    };
    let combined = combine_pair(j1, j2)?;
    let actual = combined.cond_entropy(alpha, kind)?;
    let h1 = j1.cond_entropy(alpha, kind)?;
    let h2 = j2.cond_entropy(alpha, kind)?;
    let bsc = bsc_bound(&h1, &h2, alpha)?;
    let bec = match kind {
        EntropyKind::Cachin | EntropyKind::Shannon => bec_bound(&h1, &h2, alpha, kind)?,
        _ if alpha.is_one() => bec_bound(&h1, &h2, alpha, EntropyKind::Shannon)?,
        _ => {
            let k1 = j1.k_cond(alpha, kind)?;
            let k2 = j2.k_cond(alpha, kind)?;
            bec_bound(&k1, &k2, alpha, kind)?
        }
    };
    let (direction, evidence, assertable) = expected_direction(kind, alpha)?;
    let (actual_f, bsc_f, bec_f) = (actual.to_f64(), bsc.to_f64(), bec.to_f64());
    let (slack_bsc, slack_bec) = match direction {
        Direction::BscLowerBecUpper => (actual_f - bsc_f, bec_f - actual_f),
        Direction::BscUpperBecLower => (bsc_f - actual_f, actual_f - bec_f),
        Direction::Equality => (-(actual_f - bsc_f).abs(), -(actual_f - bec_f).abs()),
    };
    let verdict = match (slack_bsc < -SLACK_TOL, slack_bec < -SLACK_TOL) {
        (false, false) => Verdict::Sandwiched,
        (true, false) => Verdict::BscViolated,
        (false, true) => Verdict::BecViolated,
        (true, true) => Verdict::BothViolated,
    };
    Ok(BoundReport {
        kind,
        alpha: alpha.order_f64(),
        actual: actual_f,
        bsc_bound: bsc_f,
        bec_bound: bec_f,
        direction,
        evidence,
        assertable,
        slack_bsc,
        slack_bec,
        verdict,
    })
}

/// The classical order-1 bounds on the combined entropy.
#[derive(Clone, Debug, Serialize)]
pub struct ShannonBaselines<R> {
    /// `h(h⁻¹(H₁) ∗ h⁻¹(H₂))`: the symmetric-channel lower bound.
    pub mgl_lower: R,
    /// `ln 2 − (ln 2 − H₁)(ln 2 − H₂)/ln 2`: the erasure upper bound.
    pub bec_upper: R,
    /// `H₁·H₂ / ln 2`: lower bound on the second-branch entropy.
    pub plus_lower: R,
    /// `H₁ + H₂ − mgl_lower`: upper bound on the second-branch entropy.
    pub plus_upper: R,
    /// Sharper lower bound `0.799·H(ln 2 − H)/ln 2 + H`, defined only when
    /// both entropies are equal.
    pub refined_lower: Option<R>,
}

/// Compute all order-1 baselines from the two single-use entropies.
pub fn shannon_baselines<R: Real>(h1: &R, h2: &R) -> Result<ShannonBaselines<R>> {
    let ln2 = R::ln2();
    let mgl_lower = bsc_bound(h1, h2, &Alpha::One)?;
    let bec_upper = bec_bound(h1, h2, &Alpha::One, EntropyKind::Shannon)?;
    let plus_lower = h1.clone() * h2.clone() / ln2.clone();
    let plus_upper = h1.clone() + h2.clone() - mgl_lower.clone();
    let refined_lower = if h1 == h2 {
        Some(R::from_f64(0.799) * h1.clone() * (ln2.clone() - h1.clone()) / ln2 + h1.clone())
    } else {
        None
    };
    Ok(ShannonBaselines {
        mgl_lower,
        bec_upper,
        plus_lower,
        plus_upper,
        refined_lower,
    })
}

/// Shannon entropy of the second input given the combined input and both
/// outputs: `H(X₂ | X₁⊕X₂, Y₁, Y₂)`.
pub fn second_branch_entropy<R: Real>(
    j1: &JointDistribution,
    j2: &JointDistribution,
) -> Result<R> {
    // Group by the visible triple (x₁⊕x₂, y₁, y₂); the hidden cell index is
    // x₂, with x₁ = (x₁⊕x₂) ⊕ x₂ fixed by the group.
    let mut groups = Vec::with_capacity(2 * j1.cells().len() * j2.cells().len());
    for s in 0..2usize {
        for &(a0, a1) in j1.cells() {
            for &(b0, b1) in j2.cells() {
                let x1_for = |x2: usize| if x2 == s { a0 } else { a1 };
                groups.push(vec![x1_for(0) * b0, x1_for(1) * b1]);
            }
        }
    }
    cond_entropy_table(&groups, &Alpha::One, EntropyKind::Shannon)
}
