//! Numerical curvature analysis of the combining curves.
//!
//! Everything here probes the bivariate curves `F(x, y) = T(T⁻¹(x) ∗ T⁻¹(y))`
//! on their domain squares: sign classification of second differences,
//! sign-certifying grids for the two curves with a mixed-sign window,
//! midpoint-linearity checks for the orders where the Hayashi curve is exactly
//! linear, audits of the closed-form identities behind the curvature
//! criterion, and order scans that bracket where each curve's behaviour
//! changes. Verdicts are returned as reports with both a machine (serde) and a
//! human (`to_text`) rendering; nothing in this module panics on a failed
//! check.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::EntropyKind;
use crate::combining::{bsc_bound, combine_pair, gap_delta, Curvature};
use crate::entropy::{
    alpha_grid, binary_renyi, binary_renyi_inverse, convexity_witness, convolve, entropy_deriv,
    k2_after_convolve, k3_after_convolve, k_at_half, k_inverse, k_transform, Alpha, CurveKind,
    KKind,
};
use crate::par;
use crate::real::{Extended, Real};
use crate::sampling::random_joint;
use crate::{Error, Result};

/// Margin trimmed off each end of a curve's domain before gridding. The
/// inverse transforms have unbounded derivative at the `k_at_half` endpoint,
/// so grids that touch it stall the root solver and amplify noise.
pub const GRID_MARGIN: f64 = 1e-4;

/// Second differences below this magnitude (everywhere on the grid) classify
/// as linear. Unlike the convex/concave threshold this does not scale with
/// the working precision: it is the bar the exactly-linear orders must clear
/// even in double.
pub const LINEARITY_TOL: f64 = 1e-10;

/// Default points per grid axis.
pub const DEFAULT_GRID_N: usize = 64;

/// Order step used by the sign-certifying grids, written as a decimal literal
/// so each precision parses it exactly.
pub const COUNTEREXAMPLE_STEP: &str = "0.005";

/// Working precision selector for the report entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::Parse(format!(
                "unknown precision {other:?}; expected double or extended"
            ))),
        }
    }
}

/// Outcome of one grid classification of a combining curve.
#[derive(Clone, Debug, Serialize)]
pub struct ConvexityVerdict {
    pub curve: CurveKind,
    /// Order as an `f64` summary (infinite for the min-entropy limit).
    pub alpha: f64,
    pub classification: Curvature,
    /// Most negative central second difference seen over all grid rows.
    pub min_second_diff: f64,
    /// Most positive central second difference seen over all grid rows.
    pub max_second_diff: f64,
    pub grid_n: usize,
    /// Convex/concave threshold the classification used.
    pub tol: f64,
    pub precision: &'static str,
}

/// Parse a compiled-in decimal literal at the working precision.
fn r_lit<R: Real>(s: &str) -> R {
    R::parse(s).expect("compiled-in decimal literal must parse")
}

/// Domain square edge for a curve: the span of `T` over `p ∈ [0, 1/2]`,
/// shrunk by [`GRID_MARGIN`] at both ends.
fn curve_domain<R: Real>(curve: CurveKind, alpha: &Alpha<R>) -> Result<(R, R)> {
    let (lo, hi) = match curve {
        CurveKind::KArimoto | CurveKind::KHayashi => {
            let kind = if curve == CurveKind::KArimoto {
                KKind::Arimoto
            } else {
                KKind::Hayashi
            };
            let delta = k_at_half(alpha, kind)?;
            if delta < R::one() {
                (delta, R::one())
            } else {
                (R::one(), delta)
            }
        }
        CurveKind::Entropy => (R::zero(), R::ln2()),
    };
    let margin = R::from_f64(GRID_MARGIN);
    let lo = lo + margin.clone();
    let hi = hi - margin;
    if !(lo < hi) {
        return Err(Error::Config(format!(
            "domain of curve {} at order {} is narrower than twice the endpoint margin {GRID_MARGIN:e}",
            curve.token(),
            alpha.order_f64(),
        )));
    }
    Ok((lo, hi))
}

/// `T` for the given curve.
fn curve_forward<R: Real>(p: &R, alpha: &Alpha<R>, curve: CurveKind) -> Result<R> {
    match curve {
        CurveKind::KArimoto => k_transform(p, alpha, KKind::Arimoto),
        CurveKind::KHayashi => k_transform(p, alpha, KKind::Hayashi),
        CurveKind::Entropy => binary_renyi(p, alpha),
    }
}

/// `T⁻¹` for the given curve, on the branch `p ∈ [0, 1/2]`.
fn curve_inverse<R: Real>(v: &R, alpha: &Alpha<R>, curve: CurveKind) -> Result<R> {
    match curve {
        CurveKind::KArimoto => k_inverse(v, alpha, KKind::Arimoto),
        CurveKind::KHayashi => k_inverse(v, alpha, KKind::Hayashi),
        CurveKind::Entropy => binary_renyi_inverse(v, alpha),
    }
}

/// Second-difference extrema of `x ↦ F(x, y)` for one fixed `y`, given the
/// preimages `ps` of the x-grid and the preimage `q` of `y`.
fn row_extrema<R: Real>(ps: &[R], q: &R, alpha: &Alpha<R>, curve: CurveKind) -> Result<(R, R)> {
    let mut vals = Vec::with_capacity(ps.len());
    for p in ps {
        vals.push(curve_forward(&convolve(p, q), alpha, curve)?);
    }
    let mut min: Option<R> = None;
    let mut max: Option<R> = None;
    for i in 1..vals.len() - 1 {
        let d2 = (vals[i + 1].clone() - vals[i].clone()) - (vals[i].clone() - vals[i - 1].clone());
        if min.as_ref().is_none_or(|m| d2 < *m) {
            min = Some(d2.clone());
        }
        if max.as_ref().is_none_or(|m| d2 > *m) {
            max = Some(d2);
        }
    }
    Ok((min.expect("grid has interior points"), max.expect("grid has interior points")))
}

/// Classify the curvature of a combining curve on its domain square.
///
/// The grid is uniform in the transformed coordinate with [`GRID_MARGIN`]
/// trimmed at each end. Each axis value is inverted through `T⁻¹` once; a
/// grid cell then costs one convolution and one forward transform. Central
/// second differences are taken along x for every fixed y, which by symmetry
/// of `F` also covers the other direction.
///
/// A verdict of `Neither` needs second differences of both signs beyond
/// `tol` (default [`Real::curvature_tolerance`]); `Linear` needs every
/// second difference below [`LINEARITY_TOL`] in magnitude; otherwise the
/// dominant sign wins.
pub fn classify_convexity<R: Real>(
    curve: CurveKind,
    alpha: &Alpha<R>,
    grid_n: usize,
    tol: Option<R>,
) -> Result<ConvexityVerdict> {
    if grid_n < 16 {
        return Err(Error::Config(format!(
            "curvature grid needs at least 16 points per axis, got {grid_n}"
        )));
    }
    let tol = tol.unwrap_or_else(R::curvature_tolerance);
    if !(tol > R::zero()) {
        return Err(Error::Config(format!("curvature tolerance must be positive, got {tol}")));
    }
    let (lo, hi) = curve_domain(curve, alpha)?;
    let denom = R::from_f64((grid_n - 1) as f64);
    let xs: Vec<R> = (0..grid_n)
        .map(|i| {
            let t = R::from_f64(i as f64) / denom.clone();
            lo.clone() + (hi.clone() - lo.clone()) * t
        })
        .collect();
    let inv: Vec<R> = par::map_slice(&xs, |x| curve_inverse(x, alpha, curve))
        .into_iter()
        .collect::<Result<_>>()?;
    let rows: Vec<(R, R)> = par::map_slice(&inv, |q| row_extrema(&inv, q, alpha, curve))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut min = rows[0].0.clone();
    let mut max = rows[0].1.clone();
    for (rmin, rmax) in &rows[1..] {
        if *rmin < min {
            min = rmin.clone();
        }
        if *rmax > max {
            max = rmax.clone();
        }
    }
    let lin = R::from_f64(LINEARITY_TOL);
    let classification = if max > tol && min < -tol.clone() {
        Curvature::Neither
    } else if max.abs() < lin && min.abs() < lin {
        Curvature::Linear
    } else if min.abs() > max.abs() {
        Curvature::Concave
    } else {
        Curvature::Convex
    };
    Ok(ConvexityVerdict {
        curve,
        alpha: alpha.order_f64(),
        classification,
        min_second_diff: min.to_f64(),
        max_second_diff: max.to_f64(),
        grid_n,
        tol: tol.to_f64(),
        precision: R::LABEL,
    })
}

/// One sign-certified gap grid: `gap_delta(p, ·, kind)` sampled over an order
/// grid, with `expected_sign · Δ` required to be strictly positive.
#[derive(Clone, Debug, Serialize)]
pub struct GapGridCheck {
    pub p: f64,
    /// +1 or −1.
    pub expected_sign: i8,
    pub start: f64,
    /// Exclusive.
    pub end: f64,
    pub step: f64,
    pub points: usize,
    /// Smallest value of `expected_sign · Δ` over the grid; positive means
    /// every point had the expected sign.
    pub worst_margin: f64,
    pub best_margin: f64,
    /// Orders where the margin was not strictly positive.
    pub offending: Vec<f64>,
}

fn run_gap_grid<R: Real>(
    kind: EntropyKind,
    p: &str,
    start: &str,
    end: &str,
    step: &str,
    expected_sign: i8,
) -> Result<GapGridCheck> {
    let pv: R = r_lit(p);
    let (s, e, st): (R, R, R) = (r_lit(start), r_lit(end), r_lit(step));
    let alphas = alpha_grid(&s, &e, &st)?;
    let sign = R::from_f64(f64::from(expected_sign));
    let margins: Vec<R> = par::map_slice(&alphas, |a| {
        gap_delta(&pv, a, kind).map(|d| sign.clone() * d)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut worst = f64::INFINITY;
    let mut best = f64::NEG_INFINITY;
    let mut offending = Vec::new();
    for (a, m) in alphas.iter().zip(&margins) {
        let mf = m.to_f64();
        worst = worst.min(mf);
        best = best.max(mf);
        if !(*m > R::zero()) {
            offending.push(a.order_f64());
        }
    }
    Ok(GapGridCheck {
        p: pv.to_f64(),
        expected_sign,
        start: s.to_f64(),
        end: e.to_f64(),
        step: st.to_f64(),
        points: alphas.len(),
        worst_margin: worst,
        best_margin: best,
        offending,
    })
}

/// Certificate that a combining curve has a mixed-sign window: the diagonal
/// gap is negative near the clean end of the crossover range and positive
/// near the symmetric end, over overlapping orders.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub curve: CurveKind,
    pub kind: EntropyKind,
    pub precision: &'static str,
    pub negative: GapGridCheck,
    pub positive: GapGridCheck,
    /// Orders where both signs are certified, so the curve is neither convex
    /// nor concave there.
    pub mixed_window: (f64, f64),
    pub passed: bool,
}

impl CounterexampleReport {
    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "mixed-sign certificate: curve {} (kind {}, {})\n",
            self.curve.token(),
            self.kind.token(),
            self.precision
        );
        for (label, g) in [("negative", &self.negative), ("positive", &self.positive)] {
            out.push_str(&format!(
                "  expected {label}: p = {:e}, orders [{}, {}) step {}: {} points, \
                 margins [{:.3e}, {:.3e}], {} offending\n",
                g.p,
                g.start,
                g.end,
                g.step,
                g.points,
                g.worst_margin,
                g.best_margin,
                g.offending.len()
            ));
            if !g.offending.is_empty() {
                let shown: Vec<String> =
                    g.offending.iter().take(8).map(|a| format!("{a:.4}")).collect();
                let more = if g.offending.len() > 8 { ", …" } else { "" };
                out.push_str(&format!("    at orders {}{more}\n", shown.join(", ")));
            }
        }
        out.push_str(&format!(
            "  mixed-sign window: ({}, {})\n  verdict: {}\n",
            self.mixed_window.0,
            self.mixed_window.1,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn counterexample<R: Real>(curve: CurveKind) -> Result<CounterexampleReport> {
    let (kind, neg, pos, window) = match curve {
        CurveKind::KArimoto => (
            EntropyKind::Arimoto,
            ("1e-6", "1.001", "1.97"),
            ("0.49", "1.581", "1.999"),
            (1.58, 1.97),
        ),
        CurveKind::Entropy => (
            EntropyKind::Cachin,
            ("1e-7", "1.001", "1.95"),
            ("0.49", "1.388", "1.999"),
            (1.388, 1.95),
        ),
        CurveKind::KHayashi => {
            return Err(Error::Config(
                "the Hayashi curve has no mixed-sign window to certify".into(),
            ))
        }
    };
    let negative = run_gap_grid::<R>(kind, neg.0, neg.1, neg.2, COUNTEREXAMPLE_STEP, -1)?;
    let positive = run_gap_grid::<R>(kind, pos.0, pos.1, pos.2, COUNTEREXAMPLE_STEP, 1)?;
    let passed = negative.offending.is_empty() && positive.offending.is_empty();
    Ok(CounterexampleReport {
        curve,
        kind,
        precision: R::LABEL,
        negative,
        positive,
        mixed_window: window,
        passed,
    })
}

/// Certify the mixed-sign window of the Arimoto combining curve: the
/// diagonal gap at crossover `10⁻⁶` is negative on orders `(1.001, 1.97)`
/// and at crossover `0.49` positive on `(1.581, 1.999)`, both sampled with
/// step [`COUNTEREXAMPLE_STEP`].
///
/// The worst negative-side margin is comfortably above double rounding
/// noise, so both precisions pass; extended is still the mode of record.
pub fn verify_counterexample_a(precision: Precision) -> Result<CounterexampleReport> {
    match precision {
        Precision::Double => counterexample::<f64>(CurveKind::KArimoto),
        Precision::Extended => counterexample::<Extended>(CurveKind::KArimoto),
    }
}

/// Certify the mixed-sign window of the entropy combining curve: the
/// diagonal gap at crossover `10⁻⁷` is negative on orders `(1.001, 1.95)`
/// and at crossover `0.49` positive on `(1.388, 1.999)`.
///
/// The negative margin shrinks to a few times `10⁻¹⁵` at the top of the
/// order grid, below double rounding noise for this expression; use
/// extended precision for a trustworthy full-grid verdict.
pub fn verify_counterexample_c(precision: Precision) -> Result<CounterexampleReport> {
    match precision {
        Precision::Double => counterexample::<f64>(CurveKind::Entropy),
        Precision::Extended => counterexample::<Extended>(CurveKind::Entropy),
    }
}

/// CSV of the diagonal gap over an order grid, columns `alpha,delta`, values
/// in scientific notation at the working precision's digit count.
pub fn gap_csv<R: Real>(kind: EntropyKind, p: &R, start: &R, end: &R, step: &R) -> Result<String> {
    let alphas = alpha_grid(start, end, step)?;
    let rows: Vec<String> = par::map_slice(&alphas, |a| {
        gap_delta(p, a, kind).map(|d| {
            let a_str = match a {
                Alpha::One => R::one().to_csv_string(),
                Alpha::Infinity => "inf".to_string(),
                Alpha::Finite(v) => v.to_csv_string(),
            };
            format!("{a_str},{}", d.to_csv_string())
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut out = String::from("alpha,delta\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// The three orders where a combining curve is exactly linear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinearityCase {
    /// Hayashi curve at order 2.
    #[serde(rename = "kkH@2")]
    HayashiAtTwo,
    /// Hayashi curve at order 3.
    #[serde(rename = "kkH@3")]
    HayashiAtThree,
    /// Arimoto curve (max of the two symbol masses) at infinite order.
    #[serde(rename = "kkA@inf")]
    ArimotoAtInfinity,
}

impl LinearityCase {
    pub const ALL: [LinearityCase; 3] = [
        LinearityCase::HayashiAtTwo,
        LinearityCase::HayashiAtThree,
        LinearityCase::ArimotoAtInfinity,
    ];

    /// Report token, matching the serialized form.
    pub fn token(self) -> &'static str {
        match self {
            LinearityCase::HayashiAtTwo => "kkH@2",
            LinearityCase::HayashiAtThree => "kkH@3",
            LinearityCase::ArimotoAtInfinity => "kkA@inf",
        }
    }

    fn parameters<R: Real>(self) -> (CurveKind, Alpha<R>, EntropyKind) {
        match self {
            LinearityCase::HayashiAtTwo => {
                (CurveKind::KHayashi, Alpha::Finite(R::from_f64(2.0)), EntropyKind::Hayashi)
            }
            LinearityCase::HayashiAtThree => {
                (CurveKind::KHayashi, Alpha::Finite(R::from_f64(3.0)), EntropyKind::Hayashi)
            }
            LinearityCase::ArimotoAtInfinity => {
                (CurveKind::KArimoto, Alpha::Infinity, EntropyKind::Arimoto)
            }
        }
    }
}

impl fmt::Display for LinearityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for LinearityCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kkH@2" => Ok(LinearityCase::HayashiAtTwo),
            "kkH@3" => Ok(LinearityCase::HayashiAtThree),
            "kkA@inf" => Ok(LinearityCase::ArimotoAtInfinity),
            other => Err(Error::Parse(format!(
                "unknown linearity case {other:?}; expected kkH@2, kkH@3, or kkA@inf"
            ))),
        }
    }
}

/// Midpoint defect of a piecewise-max bound below which the infinite-order
/// branch identity counts as exact.
const BRANCH_TOL: f64 = 1e-15;

/// Outcome of one linearity verification.
#[derive(Clone, Debug, Serialize)]
pub struct LinearityReport {
    pub case: LinearityCase,
    /// Largest `|F(mid) − (F(a)+F(b))/2|` over the classification grid.
    pub max_midpoint_defect: f64,
    /// For the infinite-order case: largest deviation of the transform of a
    /// convolution from its explicit two-branch form.
    pub branch_identity_error: Option<f64>,
    pub pair_samples: usize,
    /// Largest deviation of a combined pair's conditional entropy from the
    /// symmetric-channel expression of the two marginal entropies.
    pub max_pair_error: f64,
    pub passed: bool,
}

impl LinearityReport {
    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let branch = match self.branch_identity_error {
            Some(e) => format!("{e:.3e}"),
            None => "n/a".to_string(),
        };
        format!(
            "linearity {}: midpoint defect {:.3e}, branch identity {branch}, \
             {} sampled pairs worst {:.3e}, verdict {}\n",
            self.case.token(),
            self.max_midpoint_defect,
            self.pair_samples,
            self.max_pair_error,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Deviation of the infinite-order Arimoto transform from its explicit
/// branches `max(s, 1−s)` across a crossover/convolution grid.
fn arimoto_branch_error() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..200 {
        let x = f64::from(i) * 0.005;
        for j in 0..=20 {
            let c = f64::from(j) * 0.025;
            let s = convolve(&x, &c);
            let k = k_transform(&s, &Alpha::Infinity, KKind::Arimoto)?;
            let expected = if s < 0.5 { 1.0 - s } else { s };
            worst = worst.max((k - expected).abs());
        }
    }
    Ok(worst)
}

/// Verify one exactly-linear order of a combining curve.
///
/// Three checks: the grid midpoint defect from [`classify_convexity`] stays
/// under [`LINEARITY_TOL`]; for the infinite-order case the transform of a
/// convolution equals its explicit branch form to [`BRANCH_TOL`]; and for
/// `samples` seeded random channel pairs the combined conditional entropy
/// equals the symmetric-channel expression of the marginals to
/// [`LINEARITY_TOL`]. Linearity of the curve makes that expression exact for
/// every pair, not just symmetric ones.
pub fn verify_linearity(case: LinearityCase, seed: u64, samples: usize) -> Result<LinearityReport> {
    if samples == 0 {
        return Err(Error::Config("need at least one sampled channel pair".into()));
    }
    let (curve, alpha, kind) = case.parameters::<f64>();
    let verdict = classify_convexity::<f64>(curve, &alpha, DEFAULT_GRID_N, None)?;
    let max_midpoint_defect =
        0.5 * verdict.min_second_diff.abs().max(verdict.max_second_diff.abs());
    let branch_identity_error = match case {
        LinearityCase::ArimotoAtInfinity => Some(arimoto_branch_error()?),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_pair_error = 0.0f64;
    for _ in 0..samples {
        let j1 = random_joint(&mut rng, 6);
        let j2 = random_joint(&mut rng, 6);
        let h1 = j1.cond_entropy(&alpha, kind)?;
        let h2 = j2.cond_entropy(&alpha, kind)?;
        let combined = combine_pair(&j1, &j2)?.cond_entropy(&alpha, kind)?;
        let err = (combined - bsc_bound(&h1, &h2, &alpha)?).abs();
        max_pair_error = max_pair_error.max(err);
    }
    let passed = max_midpoint_defect < LINEARITY_TOL
        && branch_identity_error.is_none_or(|e| e < BRANCH_TOL)
        && max_pair_error < LINEARITY_TOL;
    Ok(LinearityReport {
        case,
        max_midpoint_defect,
        branch_identity_error,
        pair_samples: samples,
        max_pair_error,
        passed,
    })
}

/// One audited identity.
#[derive(Clone, Debug, Serialize)]
pub struct AppendixItem {
    pub label: &'static str,
    /// Worst deviation (for the sign-criterion item: worst wrong-way
    /// excursion, negative when every sample agrees strictly).
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Audit of the closed-form identities behind the curvature criterion.
#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub items: Vec<AppendixItem>,
    pub passed: bool,
}

impl AppendixReport {
    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::from("identity audit:\n");
        for item in &self.items {
            out.push_str(&format!(
                "  {:<28} worst {:>10.3e}  threshold {:>8.1e}  {}\n",
                item.label,
                item.worst,
                item.threshold,
                if item.passed { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "  verdict: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Audit the identities the curvature criterion rests on.
///
/// Five items: the entropy derivative's closed form against a central
/// difference; stationarity of the curvature witness at its anchor; the
/// order-2 and order-3 closed forms of the Hayashi transform after a
/// convolution; constancy of the witness in `y` at those two orders; and
/// agreement between the witness comparison `g(y) ≥ g(x)` and the sign of
/// the grid second differences at sampled orders on both sides of 1.
pub fn verify_appendix_identities() -> Result<AppendixReport> {
    let mut items = Vec::with_capacity(5);

    // Closed-form derivative vs central difference.
    let mut worst = 0.0f64;
    let fd_h = 1e-6;
    let mut alphas = vec![Alpha::One];
    for a in [0.5, 1.5, 2.5, 4.0] {
        alphas.push(Alpha::new(a)?);
    }
    for alpha in &alphas {
        for i in 1..=9 {
            let p = f64::from(i) * 0.05;
            let d = entropy_deriv(&p, alpha)?;
            let fd = (binary_renyi(&(p + fd_h), alpha)? - binary_renyi(&(p - fd_h), alpha)?)
                / (2.0 * fd_h);
            worst = worst.max((d - fd).abs());
        }
    }
    items.push(AppendixItem {
        label: "derivative-closed-form",
        worst,
        threshold: 1e-6,
        passed: worst < 1e-6,
    });

    // The witness is stationary where it anchors.
    let mut worst = 0.0f64;
    for a in [0.5, 1.5, 2.5, 4.0] {
        let alpha = Alpha::new(a)?;
        for x in [0.15, 0.3, 0.45] {
            for c in [0.1, 0.3] {
                let up = convexity_witness(&(x + fd_h), &x, &c, &alpha)?;
                let dn = convexity_witness(&(x - fd_h), &x, &c, &alpha)?;
                worst = worst.max(((up - dn) / (2.0 * fd_h)).abs());
            }
        }
    }
    items.push(AppendixItem {
        label: "witness-stationarity",
        worst,
        threshold: 1e-6,
        passed: worst < 1e-6,
    });

    // Polynomial closed forms of the transform after a convolution.
    let mut worst = 0.0f64;
    let two = Alpha::new(2.0)?;
    let three = Alpha::new(3.0)?;
    for i in 1..=19 {
        let y = f64::from(i) * 0.05;
        for j in 1..=10 {
            let c = f64::from(j) * 0.05;
            let s = convolve(&y, &c);
            let e2 = (k2_after_convolve(&y, &c) - k_transform(&s, &two, KKind::Hayashi)?).abs();
            let e3 = (k3_after_convolve(&y, &c) - k_transform(&s, &three, KKind::Hayashi)?).abs();
            worst = worst.max(e2).max(e3);
        }
    }
    items.push(AppendixItem {
        label: "convolution-closed-forms",
        worst,
        threshold: 1e-14,
        passed: worst < 1e-14,
    });

    // At the exactly-linear orders the witness does not depend on y at all.
    let mut worst = 0.0f64;
    for alpha in [&two, &three] {
        for x in [0.2, 0.35, 0.5] {
            for c in [0.15, 0.35] {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 1..=49 {
                    let y = f64::from(i) * 0.02;
                    let g = convexity_witness(&y, &x, &c, alpha)?;
                    lo = lo.min(g);
                    hi = hi.max(g);
                }
                worst = worst.max(hi - lo);
            }
        }
    }
    items.push(AppendixItem {
        label: "witness-constant-at-2-3",
        worst,
        threshold: 1e-12,
        passed: worst < 1e-12,
    });

    // The witness comparison must point the same way as the grid second
    // differences wherever the curve has a single sign.
    let mut worst_excursion = f64::NEG_INFINITY;
    let mut sign_ok = true;
    for a in [0.5, 1.5, 2.5, 4.0] {
        let alpha = Alpha::new(a)?;
        let verdict = classify_convexity::<f64>(CurveKind::KHayashi, &alpha, 32, None)?;
        let sign = match verdict.classification {
            Curvature::Convex => 1.0,
            Curvature::Concave => -1.0,
            _ => {
                sign_ok = false;
                continue;
            }
        };
        for x in [0.2, 0.35, 0.5] {
            for c in [0.15, 0.35] {
                let gx = convexity_witness(&x, &x, &c, &alpha)?;
                for i in 0..25 {
                    let y = 0.02 + f64::from(i) * 0.04;
                    let margin = sign * (convexity_witness(&y, &x, &c, &alpha)? - gx);
                    worst_excursion = worst_excursion.max(-margin);
                }
            }
        }
    }
    items.push(AppendixItem {
        label: "witness-sign-criterion",
        worst: worst_excursion,
        threshold: 1e-12,
        passed: sign_ok && worst_excursion < 1e-12,
    });

    let passed = items.iter().all(|i| i.passed);
    Ok(AppendixReport { items, passed })
}

/// One order of a curvature scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub classification: Curvature,
    pub min_second_diff: f64,
    pub max_second_diff: f64,
}

/// Curvature scan over an order grid.
///
/// Two brackets come out of a scan. `first_mixed` brackets the first grid
/// order whose full-grid verdict is `Neither`. `diagonal_flip` brackets the
/// first sign change of the diagonal gap probe at crossover `0.49`, the
/// transition the conjectured regime boundaries refer to. Mixed signs
/// concentrated near the domain edge can appear at lower orders than the
/// diagonal flip, so the two brackets routinely differ.
#[derive(Clone, Debug, Serialize)]
pub struct ScanTable {
    pub curve: CurveKind,
    pub grid_n: usize,
    pub precision: &'static str,
    pub rows: Vec<ScanRow>,
    pub first_mixed: Option<(f64, f64)>,
    pub diagonal_flip: Option<(f64, f64)>,
    pub note: &'static str,
}

impl ScanTable {
    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "curvature scan: curve {} ({}x{} grid, {})\n  {:>8}  {:<8} {:>12} {:>12}\n",
            self.curve.token(),
            self.grid_n,
            self.grid_n,
            self.precision,
            "alpha",
            "class",
            "min d2",
            "max d2"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "  {:>8.4}  {:<8} {:>12.3e} {:>12.3e}\n",
                row.alpha,
                row.classification.token(),
                row.min_second_diff,
                row.max_second_diff
            ));
        }
        match self.first_mixed {
            Some((a, b)) => {
                out.push_str(&format!("  first mixed verdict between {a:.4} and {b:.4}\n"))
            }
            None => out.push_str("  no mixed verdict on this grid\n"),
        }
        match self.diagonal_flip {
            Some((a, b)) => {
                out.push_str(&format!("  diagonal sign change between {a:.4} and {b:.4}\n"))
            }
            None => out.push_str("  no diagonal sign change on this grid\n"),
        }
        out.push_str(&format!("  note: {}\n", self.note));
        out
    }
}

/// Scan the curvature of a combining curve over an order grid, recording the
/// per-order verdicts and the two transition brackets described on
/// [`ScanTable`]. Verdicts at conjectured orders are numerical evidence, not
/// ground truth.
pub fn conjecture_scan<R: Real>(
    curve: CurveKind,
    alphas: &[Alpha<R>],
    grid_n: usize,
    tol: Option<R>,
) -> Result<ScanTable> {
    if alphas.is_empty() {
        return Err(Error::Config("curvature scan needs a nonempty order grid".into()));
    }
    let kind = match curve {
        CurveKind::KArimoto => EntropyKind::Arimoto,
        CurveKind::KHayashi => EntropyKind::Hayashi,
        CurveKind::Entropy => EntropyKind::Cachin,
    };
    let probe: R = r_lit("0.49");
    let mut rows = Vec::with_capacity(alphas.len());
    let mut probes: Vec<Option<f64>> = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let v = classify_convexity(curve, alpha, grid_n, tol.clone())?;
        rows.push(ScanRow {
            alpha: v.alpha,
            classification: v.classification,
            min_second_diff: v.min_second_diff,
            max_second_diff: v.max_second_diff,
        });
        // The probe degenerates at order 1; leave a hole rather than fail
        // the whole scan for grids that straddle it.
        probes.push(gap_delta(&probe, alpha, kind).ok().map(|d| d.to_f64()));
    }
    let mut first_mixed = None;
    for (i, row) in rows.iter().enumerate() {
        if row.classification == Curvature::Neither {
            let prev = if i == 0 { row.alpha } else { rows[i - 1].alpha };
            first_mixed = Some((prev, row.alpha));
            break;
        }
    }
    let mut diagonal_flip = None;
    for i in 1..probes.len() {
        if let (Some(a), Some(b)) = (probes[i - 1], probes[i]) {
            if a != 0.0 && b != 0.0 && (a > 0.0) != (b > 0.0) {
                diagonal_flip = Some((rows[i - 1].alpha, rows[i].alpha));
                break;
            }
        }
    }
    Ok(ScanTable {
        curve,
        grid_n,
        precision: R::LABEL,
        rows,
        first_mixed,
        diagonal_flip,
        note: "full-grid verdicts can turn mixed below the diagonal sign change; \
               mixed signs appear first near the domain edge",
    })
}
