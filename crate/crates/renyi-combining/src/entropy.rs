//! Scalar kernels: binary Rényi entropy, its inverse, binary convolution,
//! the exponential k-transforms, and the bivariate combining curves.
//!
//! All probabilities here live on `[0, 1]` and all entropies in nats, so the
//! binary entropy range is `[0, ln 2]`. Inverses are taken on the branch
//! `p ∈ [0, 1/2]` where every transform in this module is strictly monotone.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::real::{midpoint, rmax, rmin, Real};
use crate::{Error, Result};

/// Rényi order.
///
/// The α = 1 and α = ∞ limits are explicit variants with their own closed
/// forms; the general branch divides by `1 − α` (or multiplies by `1/α`) and
/// must never see them.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha<R: Real> {
    /// α = 1: the Shannon limit.
    One,
    /// Finite positive order other than 1.
    Finite(R),
    /// α = ∞: the min-entropy limit.
    Infinity,
}

impl<R: Real> Alpha<R> {
    /// Build an order from a numeric value. Exactly 1 normalizes to
    /// [`Alpha::One`] and positive infinity to [`Alpha::Infinity`].
    pub fn new(a: R) -> Result<Self> {
        if !(a > R::zero()) {
            return Err(Error::Domain(format!("Rényi order must be positive, got {a}")));
        }
        if !a.is_finite_val() {
            return Ok(Alpha::Infinity);
        }
        if a == R::one() {
            return Ok(Alpha::One);
        }
        Ok(Alpha::Finite(a))
    }

    /// Parse `"inf"` or a positive decimal literal.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Alpha::Infinity);
        }
        let v = R::parse(t).ok_or_else(|| Error::Parse(format!("invalid Rényi order {t:?}")))?;
        Self::new(v)
    }

    /// Same order at `f64` precision, for reports and regime lookups.
    pub fn order_f64(&self) -> f64 {
        match self {
            Alpha::One => 1.0,
            Alpha::Finite(a) => a.to_f64(),
            Alpha::Infinity => f64::INFINITY,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Alpha::One)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Alpha::Infinity)
    }

    /// The finite order, if this is the general branch.
    pub fn finite(&self) -> Option<&R> {
        match self {
            Alpha::Finite(a) => Some(a),
            _ => None,
        }
    }
}

/// Selector for the two exponential reparameterizations of entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KKind {
    /// `k(p) = (p^α + (1−p)^α)^{1/α}`; supports α = ∞ as `max(p, 1−p)`.
    Arimoto,
    /// `k(p) = p^α + (1−p)^α`; finite α only.
    Hayashi,
}

/// Selector for the bivariate combining curves `F(x, y) = T(T⁻¹(x) ∗ T⁻¹(y))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    /// T is the Arimoto k-transform; x, y are K-values.
    #[serde(rename = "kkA")]
    KArimoto,
    /// T is the Hayashi k-transform; x, y are K-values.
    #[serde(rename = "kkH")]
    KHayashi,
    /// T is the binary entropy itself; x, y are entropies in `[0, ln 2]`.
    #[serde(rename = "hh")]
    Entropy,
}

impl CurveKind {
    /// CLI / report token.
    pub fn token(self) -> &'static str {
        match self {
            CurveKind::KArimoto => "kkA",
            CurveKind::KHayashi => "kkH",
            CurveKind::Entropy => "hh",
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kkA" => Ok(CurveKind::KArimoto),
            "kkH" => Ok(CurveKind::KHayashi),
            "hh" => Ok(CurveKind::Entropy),
            other => Err(Error::Parse(format!(
                "unknown curve {other:?}; expected kkA, kkH, or hh"
            ))),
        }
    }
}

/// Slack accepted on domain boundaries before declaring an input invalid.
/// Upstream entropies carry rounding of a few ulps times condition numbers
/// well below this; anything past the slack is a caller bug.
fn domain_slack<R: Real>() -> R {
    R::from_f64(1e-12)
}

fn check_prob<R: Real>(name: &str, p: &R) -> Result<()> {
    if !p.is_finite_val() || *p < R::zero() || *p > R::one() {
        return Err(Error::Domain(format!("{name} must lie in [0,1], got {p}")));
    }
    Ok(())
}

/// Shannon entropy of a `(p, 1−p)` coin in nats, with `0·ln 0 = 0`.
///
/// The maximum at `p = 1/2` is returned as the exact `ln 2` constant so the
/// inverse can recognize it; one ulp of slack there would smear the root
/// across the flat top of the curve.
pub fn binary_shannon<R: Real>(p: &R) -> Result<R> {
    check_prob("p", p)?;
    if *p == R::from_f64(0.5) {
        return Ok(R::ln2());
    }
    let term = |x: R| {
        if x == R::zero() {
            R::zero()
        } else {
            -(x.ln()) * x
        }
    };
    let q = R::one() - p.clone();
    Ok(term(p.clone()) + term(q))
}

/// Rényi entropy of a `(p, 1−p)` coin in nats.
///
/// The finite branch evaluates `ln(p^α + q^α) = α·ln m + ln(1 + s^α)` with
/// `m = max(p, q)` and `s = min/max ≤ 1`, so that large orders shrink `s^α`
/// harmlessly instead of underflowing the whole sum.
pub fn binary_renyi<R: Real>(p: &R, alpha: &Alpha<R>) -> Result<R> {
    check_prob("p", p)?;
    if *p == R::from_f64(0.5) {
        return Ok(R::ln2());
    }
    match alpha {
        Alpha::One => binary_shannon(p),
        Alpha::Infinity => {
            let m = rmax(p.clone(), R::one() - p.clone());
            Ok(-m.ln())
        }
        Alpha::Finite(a) => {
            let q = R::one() - p.clone();
            let m = rmax(p.clone(), q.clone());
            let s = rmin(p.clone(), q) / m.clone();
            if s == R::zero() {
                return Ok(R::zero());
            }
            let log_sum = a.clone() * m.ln() + (R::one() + s.pow(a)).ln();
            Ok(log_sum / (R::one() - a.clone()))
        }
    }
}

/// Derivative of [`binary_renyi`] in `p`, for `p ∈ (0, 1)` and finite α.
///
/// For α ≠ 1 this is `(α/(1−α)) · (p^{α−1} − (1−p)^{α−1}) / (p^α + (1−p)^α)`;
/// at α = 1 it degenerates to `ln((1−p)/p)`.
pub fn entropy_deriv<R: Real>(p: &R, alpha: &Alpha<R>) -> Result<R> {
    if !(*p > R::zero()) || !(*p < R::one()) {
        return Err(Error::Domain(format!("derivative needs p in (0,1), got {p}")));
    }
    match alpha {
        Alpha::One => Ok(((R::one() - p.clone()) / p.clone()).ln()),
        Alpha::Infinity => Err(Error::UnsupportedOrder(
            "entropy derivative at infinite order is piecewise constant and unused".into(),
        )),
        Alpha::Finite(a) => {
            let num = power_difference(p, alpha)?;
            let den = k_transform(p, alpha, KKind::Hayashi)?;
            Ok(a.clone() / (R::one() - a.clone()) * num / den)
        }
    }
}

/// Inverse of [`binary_renyi`] on the branch `p ∈ [0, 1/2]`.
///
/// Accepts `h ∈ [0, ln 2]` with a small slack for upstream rounding; values
/// beyond the slack are domain errors, never silently clamped.
pub fn binary_renyi_inverse<R: Real>(h: &R, alpha: &Alpha<R>) -> Result<R> {
    let ln2 = R::ln2();
    let slack = domain_slack::<R>();
    if !h.is_finite_val() || *h < -slack.clone() || *h > ln2.clone() + slack {
        return Err(Error::Domain(format!("entropy must lie in [0, ln 2], got {h}")));
    }
    if *h <= R::zero() {
        return Ok(R::zero());
    }
    if *h >= ln2 {
        return Ok(R::from_f64(0.5));
    }
    if alpha.is_infinite() {
        // h = −ln(1−p) on [0, 1/2], so p = 1 − e^{−h}.
        return Ok(R::one() - (-h.clone()).exp());
    }
    let a = alpha.clone();
    solve_monotone(
        |p| binary_renyi(p, &a).expect("p stays inside [0, 1/2]"),
        |p| entropy_deriv(p, &a).ok(),
        h,
        R::zero(),
        R::from_f64(0.5),
        true,
    )
}

/// Binary convolution `a ∗ b = a(1−b) + (1−a)b`: the crossover probability
/// of two cascaded symmetric errors.
pub fn convolve<R: Real>(a: &R, b: &R) -> R {
    a.clone() * (R::one() - b.clone()) + (R::one() - a.clone()) * b.clone()
}

/// k-transform of a crossover probability.
///
/// The extremum at `p = 1/2` returns the exact half-point constant; see
/// [`binary_shannon`] for why exactness matters there.
pub fn k_transform<R: Real>(p: &R, alpha: &Alpha<R>, kind: KKind) -> Result<R> {
    check_prob("p", p)?;
    if *p == R::from_f64(0.5) {
        return k_at_half(alpha, kind);
    }
    match alpha {
        Alpha::One => Err(Error::UnsupportedOrder(
            "k-transform degenerates to the constant 1 at order 1".into(),
        )),
        Alpha::Infinity => match kind {
            KKind::Arimoto => Ok(rmax(p.clone(), R::one() - p.clone())),
            KKind::Hayashi => Err(Error::UnsupportedOrder(
                "Hayashi k-transform has no infinite-order limit here".into(),
            )),
        },
        Alpha::Finite(a) => {
            let q = R::one() - p.clone();
            let m = rmax(p.clone(), q.clone());
            let s = rmin(p.clone(), q) / m.clone();
            let tail = if s == R::zero() { R::zero() } else { s.pow(a) };
            match kind {
                // (p^α + q^α)^{1/α} = m · (1 + s^α)^{1/α}
                KKind::Arimoto => Ok(m * (R::one() + tail).pow(&(R::one() / a.clone()))),
                KKind::Hayashi => Ok(m.pow(a) * (R::one() + tail)),
            }
        }
    }
}

/// Value of the k-transform at `p = 1/2`: `2^{(1−α)/α}` (Arimoto) or
/// `2^{1−α}` (Hayashi). Together with 1 (at `p = 0`) it delimits the
/// K-range; it sits below 1 for α > 1 and above 1 for α < 1.
pub fn k_at_half<R: Real>(alpha: &Alpha<R>, kind: KKind) -> Result<R> {
    match alpha {
        Alpha::One => Err(Error::UnsupportedOrder(
            "k-transform degenerates to the constant 1 at order 1".into(),
        )),
        Alpha::Infinity => match kind {
            KKind::Arimoto => Ok(R::from_f64(0.5)),
            KKind::Hayashi => Err(Error::UnsupportedOrder(
                "Hayashi k-transform has no infinite-order limit here".into(),
            )),
        },
        Alpha::Finite(a) => {
            let e = match kind {
                KKind::Arimoto => (R::one() - a.clone()) / a.clone(),
                KKind::Hayashi => R::one() - a.clone(),
            };
            Ok((e * R::ln2()).exp())
        }
    }
}

/// Inverse of [`k_transform`] on the branch `p ∈ [0, 1/2]`.
pub fn k_inverse<R: Real>(k: &R, alpha: &Alpha<R>, kind: KKind) -> Result<R> {
    let half_val = k_at_half(alpha, kind)?;
    let lo_val = rmin(R::one(), half_val.clone());
    let hi_val = rmax(R::one(), half_val.clone());
    let slack = domain_slack::<R>();
    if !k.is_finite_val() || *k < lo_val.clone() - slack.clone() || *k > hi_val.clone() + slack {
        return Err(Error::Domain(format!(
            "k-value {k} outside the range [{lo_val}, {hi_val}] of the transform"
        )));
    }
    let clamped = rmax(lo_val, rmin(hi_val, k.clone()));
    // Exact endpoint values invert exactly; the transform is flat at the
    // half point, so nearby values cannot be resolved better than the
    // plateau the solver sees anyway.
    if clamped == half_val {
        return Ok(R::from_f64(0.5));
    }
    if clamped == R::one() {
        return Ok(R::zero());
    }
    if alpha.is_infinite() {
        // k = max(p, 1−p) = 1 − p on [0, 1/2]
        return Ok(R::one() - clamped);
    }
    let a = alpha.clone();
    let increasing = half_val > R::one(); // α < 1: k grows from 1 to δ
    solve_monotone(
        |p| k_transform(p, &a, kind).expect("p stays inside [0, 1/2]"),
        |p| k_deriv(p, &a, kind),
        &clamped,
        R::zero(),
        R::from_f64(0.5),
        increasing,
    )
}

/// Derivative of the k-transform where it is cheap and well-conditioned;
/// `None` lets the root finder fall back to bisection.
fn k_deriv<R: Real>(p: &R, alpha: &Alpha<R>, kind: KKind) -> Option<R> {
    if !(*p > R::zero()) || !(*p < R::one()) {
        return None;
    }
    let a = alpha.finite()?;
    let pd = power_difference(p, alpha).ok()?;
    match kind {
        // d/dp (p^α + q^α) = α (p^{α−1} − q^{α−1})
        KKind::Hayashi => Some(a.clone() * pd),
        // d/dp S^{1/α} = S^{1/α − 1} (p^{α−1} − q^{α−1}) = k^{1−α} · pd
        KKind::Arimoto => {
            let k = k_transform(p, alpha, KKind::Arimoto).ok()?;
            Some(k.pow(&(R::one() - a.clone())) * pd)
        }
    }
}

/// Bivariate combining curve `F(x, y) = T(T⁻¹(x) ∗ T⁻¹(y))`.
pub fn combine_curve<R: Real>(x: &R, y: &R, alpha: &Alpha<R>, curve: CurveKind) -> Result<R> {
    match curve {
        CurveKind::KArimoto => {
            let p = k_inverse(x, alpha, KKind::Arimoto)?;
            let q = k_inverse(y, alpha, KKind::Arimoto)?;
            k_transform(&convolve(&p, &q), alpha, KKind::Arimoto)
        }
        CurveKind::KHayashi => {
            let p = k_inverse(x, alpha, KKind::Hayashi)?;
            let q = k_inverse(y, alpha, KKind::Hayashi)?;
            k_transform(&convolve(&p, &q), alpha, KKind::Hayashi)
        }
        CurveKind::Entropy => {
            let p = binary_renyi_inverse(x, alpha)?;
            let q = binary_renyi_inverse(y, alpha)?;
            binary_renyi(&convolve(&p, &q), alpha)
        }
    }
}

/// `x^{α−1} − (1−x)^{α−1}`: the odd factor of the Hayashi k-transform
/// derivative. For α < 1 the exponent is negative, so the endpoints blow up
/// and are rejected.
pub fn power_difference<R: Real>(x: &R, alpha: &Alpha<R>) -> Result<R> {
    check_prob("x", x)?;
    let a = match alpha {
        Alpha::Finite(a) => a.clone(),
        Alpha::One => return Ok(R::zero()),
        Alpha::Infinity => {
            return Err(Error::UnsupportedOrder(
                "power difference needs a finite order".into(),
            ))
        }
    };
    let e = a - R::one();
    if e < R::zero() && (*x == R::zero() || *x == R::one()) {
        return Err(Error::Domain(format!(
            "x = {x} is a singular endpoint for order below 1"
        )));
    }
    Ok(x.pow(&e) - (R::one() - x.clone()).pow(&e))
}

/// Curvature witness for the Hayashi combining curve.
///
/// `g(y) = [k(y∗c) − k(y)·(1−2c)·pd(x∗c)/pd(x)] / k(x∗c)` with `k` the
/// Hayashi k-transform and `pd` the power difference. Comparing `g(y)`
/// against `g(x)` over a `y`-grid decides the curve's convexity direction at
/// the probed point. At `x = 1/2` the `pd` ratio is a 0/0 limit equal to
/// `1 − 2c`.
pub fn convexity_witness<R: Real>(y: &R, x: &R, c: &R, alpha: &Alpha<R>) -> Result<R> {
    check_prob("y", y)?;
    check_prob("c", c)?;
    if !(*x > R::zero()) || !(*x < R::one()) {
        return Err(Error::Domain(format!("witness anchor x must lie in (0,1), got {x}")));
    }
    if alpha.finite().is_none() {
        return Err(Error::UnsupportedOrder(
            "curvature witness needs a finite order other than 1".into(),
        ));
    }
    let xc = convolve(x, c);
    let two = R::from_f64(2.0);
    let one_minus_2c = R::one() - two * c.clone();
    let ratio = if *x == R::from_f64(0.5) {
        one_minus_2c.clone()
    } else {
        power_difference(&xc, alpha)? / power_difference(x, alpha)?
    };
    let k_yc = k_transform(&convolve(y, c), alpha, KKind::Hayashi)?;
    let k_y = k_transform(y, alpha, KKind::Hayashi)?;
    let k_xc = k_transform(&xc, alpha, KKind::Hayashi)?;
    Ok((k_yc - k_y * one_minus_2c * ratio) / k_xc)
}

/// Closed form of the order-2 Hayashi k-transform after convolution:
/// `k₂(y ∗ c) = (1−c)² + c² − 2y(1−y)(1−2c)²`.
pub fn k2_after_convolve<R: Real>(y: &R, c: &R) -> R {
    let one = R::one();
    let two = R::from_f64(2.0);
    let omc = one.clone() - c.clone();
    let w = one.clone() - two.clone() * c.clone();
    omc.clone() * omc + c.clone() * c.clone() - two * y.clone() * (one - y.clone()) * w.clone() * w
}

/// Closed form of the order-3 Hayashi k-transform after convolution:
/// `k₃(y ∗ c) = 1 − 3c + 3c² − 3y(1−y)(1−2c)²`.
pub fn k3_after_convolve<R: Real>(y: &R, c: &R) -> R {
    let one = R::one();
    let two = R::from_f64(2.0);
    let three = R::from_f64(3.0);
    let w = one.clone() - two * c.clone();
    one.clone() - three.clone() * c.clone() + three.clone() * c.clone() * c.clone()
        - three * y.clone() * (one - y.clone()) * w.clone() * w
}

/// Build the α-grid `start, start+step, …` up to but excluding `end`.
///
/// The grid is accumulated as `start + k·step` so that long ranges do not
/// drift, and each point is validated as an order.
pub fn alpha_grid<R: Real>(start: &R, end: &R, step: &R) -> Result<Vec<Alpha<R>>> {
    if !(*step > R::zero()) {
        return Err(Error::Config(format!("grid step must be positive, got {step}")));
    }
    if end < start {
        return Err(Error::Config(format!("empty grid: end {end} below start {start}")));
    }
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let a = start.clone() + R::from_f64(f64::from(k)) * step.clone();
        if !(a < *end) {
            break;
        }
        out.push(Alpha::new(a)?);
        k += 1;
        if k > 10_000_000 {
            return Err(Error::Config("grid exceeds 10^7 points".into()));
        }
    }
    Ok(out)
}

/// Solve `f(p) = target` for strictly monotone `f` on `[lo, hi]`.
///
/// Bisection first (guaranteed bracket), then Newton polish once the bracket
/// is narrow; any Newton step that leaves the bracket or meets a flat
/// derivative falls back to bisection. Terminates at the precision's root
/// tolerance.
fn solve_monotone<R: Real>(
    f: impl Fn(&R) -> R,
    df: impl Fn(&R) -> Option<R>,
    target: &R,
    lo: R,
    hi: R,
    increasing: bool,
) -> Result<R> {
    let tol = R::root_tolerance();
    let mut lo = lo;
    let mut hi = hi;
    let coarse = R::from_f64(1e-6);
    // Phase 1: plain bisection down to a comfortable Newton basin.
    while hi.clone() - lo.clone() > coarse {
        let mid = midpoint(&lo, &hi);
        let below = f(&mid) < *target;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Phase 2: Newton with bracket safeguard. Newton on a convex or concave
    // branch converges one-sided, so the bracket alone can stall above the
    // tolerance; a vanishing step is the second accepted exit.
    let mut x = midpoint(&lo, &hi);
    for _ in 0..600 {
        let fx = f(&x);
        if fx == *target {
            return Ok(x);
        }
        let below = fx < *target;
        if below == increasing {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        if hi.clone() - lo.clone() <= tol {
            return Ok(midpoint(&lo, &hi));
        }
        let newton = df(&x).and_then(|d| {
            if d.abs() <= R::from_f64(1e-300) {
                return None;
            }
            let cand = x.clone() - (fx.clone() - target.clone()) / d;
            if cand > lo && cand < hi {
                Some(cand)
            } else {
                None
            }
        });
        match newton {
            Some(c) => {
                if (c.clone() - x.clone()).abs() <= tol {
                    return Ok(c);
                }
                x = c;
            }
            None => x = midpoint(&lo, &hi),
        }
    }
    Ok(midpoint(&lo, &hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Extended;

    fn fin(a: f64) -> Alpha<f64> {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn alpha_normalizes_special_values() {
        assert!(matches!(fin(1.0), Alpha::One));
        assert!(matches!(Alpha::new(f64::INFINITY).unwrap(), Alpha::Infinity));
        assert!(matches!(fin(2.5), Alpha::Finite(_)));
        assert!(Alpha::<f64>::new(0.0).is_err());
        assert!(Alpha::<f64>::new(-3.0).is_err());
        assert!(Alpha::<f64>::new(f64::NAN).is_err());
        assert!(matches!(Alpha::<f64>::parse("inf").unwrap(), Alpha::Infinity));
        assert!(Alpha::<f64>::parse("zero").is_err());
    }

    #[test]
    fn uniform_coin_has_full_entropy_at_every_order() {
        for alpha in [fin(0.5), fin(1.0), fin(2.0), fin(7.0), Alpha::Infinity] {
            let h = binary_renyi(&0.5, &alpha).unwrap();
            assert!((h - std::f64::consts::LN_2).abs() < 1e-15, "alpha {alpha:?}");
        }
    }

    #[test]
    fn deterministic_coin_has_zero_entropy() {
        for alpha in [fin(0.5), fin(1.0), fin(3.0), Alpha::Infinity] {
            assert_eq!(binary_renyi(&0.0, &alpha).unwrap(), 0.0);
            assert_eq!(binary_renyi(&1.0, &alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn order_two_value_matches_direct_formula() {
        let expected = -(0.11f64 * 0.11 + 0.89 * 0.89).ln();
        let got = binary_renyi(&0.11, &fin(2.0)).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((expected - 0.217907).abs() < 1e-5);
        // The order-2 value is also the limit of nearby orders.
        for a in [2.0 - 1e-8, 2.0 + 1e-8] {
            let near = binary_renyi(&0.11, &fin(a)).unwrap();
            assert!((near - expected).abs() < 1e-7);
        }
    }

    #[test]
    fn half_order_value_matches_direct_formula() {
        // (1/(1−1/2)) ln(√p + √q) = 2 ln(√0.2 + √0.8)
        let expected = 2.0 * (0.2f64.sqrt() + 0.8f64.sqrt()).ln();
        let got = binary_renyi(&0.2, &fin(0.5)).unwrap();
        assert!((got - expected).abs() < 1e-15);
    }

    #[test]
    fn entropy_decreases_in_order() {
        let p = 0.3;
        let h_half = binary_renyi(&p, &fin(0.5)).unwrap();
        let h_one = binary_renyi(&p, &fin(1.0)).unwrap();
        let h_two = binary_renyi(&p, &fin(2.0)).unwrap();
        let h_inf = binary_renyi(&p, &Alpha::Infinity).unwrap();
        assert!(h_half > h_one && h_one > h_two && h_two > h_inf);
        assert!((h_inf - -(0.7f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn shannon_limit_is_continuous() {
        for p in [0.001, 0.11, 0.25, 0.49] {
            let h = binary_shannon(&p).unwrap();
            for a in [1.0 - 1e-6, 1.0 + 1e-6] {
                let near = binary_renyi(&p, &fin(a)).unwrap();
                assert!((near - h).abs() < 1e-5, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn inverse_round_trips_across_orders() {
        for alpha in [fin(0.5), fin(1.0), fin(2.0), fin(3.0), fin(7.0), Alpha::Infinity] {
            for i in 0..=50 {
                let p = 0.5 * f64::from(i) / 50.0;
                let h = binary_renyi(&p, &alpha).unwrap();
                let back = binary_renyi_inverse(&h, &alpha).unwrap();
                assert!((back - p).abs() < 1e-12, "alpha {alpha:?} p {p}");
            }
        }
    }

    #[test]
    fn inverse_handles_endpoints_and_rejects_outside() {
        let a = fin(2.0);
        assert_eq!(binary_renyi_inverse(&0.0, &a).unwrap(), 0.0);
        assert_eq!(binary_renyi_inverse(&std::f64::consts::LN_2, &a).unwrap(), 0.5);
        assert!(binary_renyi_inverse(&0.8, &a).is_err());
        assert!(binary_renyi_inverse(&-0.1, &a).is_err());
    }

    #[test]
    fn extended_inverse_reaches_thirty_digit_tolerance() {
        let alpha = Alpha::<Extended>::parse("2.5").unwrap();
        let p = Extended::parse("0.23").unwrap();
        let h = binary_renyi(&p, &alpha).unwrap();
        let back = binary_renyi_inverse(&h, &alpha).unwrap();
        assert!((back - p).abs() < Extended::parse("1e-29").unwrap());
    }

    #[test]
    fn convolution_identities() {
        assert_eq!(convolve(&0.3, &0.0), 0.3);
        assert_eq!(convolve(&0.3, &0.5), 0.5);
        assert!((convolve(&0.3, &1.0) - 0.7).abs() < 1e-15);
        assert!((convolve(&0.1, &0.2) - 0.26).abs() < 1e-15);
        assert_eq!(convolve(&0.1, &0.2), convolve(&0.2, &0.1));
    }

    #[test]
    fn k_transform_endpoint_values() {
        assert!((k_transform(&0.5, &fin(2.0), KKind::Hayashi).unwrap() - 0.5).abs() < 1e-15);
        assert!(
            (k_transform(&0.5, &fin(2.0), KKind::Arimoto).unwrap() - std::f64::consts::FRAC_1_SQRT_2)
                .abs()
                < 1e-15
        );
        assert_eq!(k_transform(&0.0, &fin(3.0), KKind::Arimoto).unwrap(), 1.0);
        assert_eq!(k_transform(&0.0, &fin(3.0), KKind::Hayashi).unwrap(), 1.0);
        assert_eq!(k_transform(&0.2, &Alpha::Infinity, KKind::Arimoto).unwrap(), 0.8);
    }

    #[test]
    fn k_at_half_matches_powers_of_two() {
        assert!((k_at_half(&fin(2.0), KKind::Arimoto).unwrap() - 2f64.powf(-0.5)).abs() < 1e-15);
        assert!((k_at_half(&fin(2.0), KKind::Hayashi).unwrap() - 0.5).abs() < 1e-15);
        assert!((k_at_half(&fin(0.5), KKind::Hayashi).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(k_at_half(&Alpha::<f64>::Infinity, KKind::Arimoto).unwrap(), 0.5);
    }

    #[test]
    fn order_one_rejected_by_k_transforms() {
        assert!(k_transform(&0.3, &Alpha::One, KKind::Arimoto).is_err());
        assert!(k_at_half::<f64>(&Alpha::One, KKind::Hayashi).is_err());
        assert!(k_transform(&0.3, &Alpha::Infinity, KKind::Hayashi).is_err());
    }

    #[test]
    fn k_inverse_round_trips() {
        for alpha in [fin(0.5), fin(1.5), fin(2.0), fin(3.0)] {
            for kind in [KKind::Arimoto, KKind::Hayashi] {
                for i in 0..=40 {
                    let p = 0.5 * f64::from(i) / 40.0;
                    let k = k_transform(&p, &alpha, kind).unwrap();
                    let back = k_inverse(&k, &alpha, kind).unwrap();
                    assert!((back - p).abs() < 1e-12, "{kind:?} alpha {alpha:?} p {p}");
                }
            }
        }
        // α = ∞, Arimoto: closed-form inverse.
        let k = k_transform(&0.2, &Alpha::Infinity, KKind::Arimoto).unwrap();
        assert!((k_inverse(&k, &Alpha::Infinity, KKind::Arimoto).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn k_inverse_rejects_out_of_range() {
        assert!(k_inverse(&0.3, &fin(2.0), KKind::Hayashi).is_err());
        assert!(k_inverse(&1.2, &fin(2.0), KKind::Hayashi).is_err());
        assert!(k_inverse(&0.9, &fin(0.5), KKind::Hayashi).is_err());
    }

    #[test]
    fn k_and_entropy_are_linked_exponentially() {
        for alpha in [fin(0.5), fin(1.5), fin(2.0), fin(4.0)] {
            let a = alpha.order_f64();
            for p in [0.05, 0.2, 0.35, 0.5] {
                let h = binary_renyi(&p, &alpha).unwrap();
                let ka = k_transform(&p, &alpha, KKind::Arimoto).unwrap();
                let kh = k_transform(&p, &alpha, KKind::Hayashi).unwrap();
                assert!((ka - ((1.0 - a) / a * h).exp()).abs() < 1e-12);
                assert!((kh - ((1.0 - a) * h).exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn combine_curve_is_symmetric_and_fixes_endpoints() {
        let alpha = fin(1.5);
        // Valid K range at this order is [2^(−1/2), 1] ≈ [0.7071, 1].
        let delta = k_at_half(&alpha, KKind::Hayashi).unwrap();
        for (x, y) in [(0.72, 0.8), (0.95, 0.71), (0.88, 0.88)] {
            let f_xy = combine_curve(&x, &y, &alpha, CurveKind::KHayashi).unwrap();
            let f_yx = combine_curve(&y, &x, &alpha, CurveKind::KHayashi).unwrap();
            assert!((f_xy - f_yx).abs() < 1e-12);
        }
        let y = 0.77;
        let at_one = combine_curve(&1.0, &y, &alpha, CurveKind::KHayashi).unwrap();
        assert!((at_one - y).abs() < 1e-12);
        let at_delta = combine_curve(&delta, &y, &alpha, CurveKind::KHayashi).unwrap();
        assert!((at_delta - delta).abs() < 1e-12);
    }

    #[test]
    fn hayashi_curve_is_bilinear_at_orders_two_and_three() {
        // Derived from the closed convolution forms: at α=2 the curve is
        // 1 − x − y + 2xy, and at α=3 it is (1 − x − y + 4xy)/3.
        let a2 = fin(2.0);
        let a3 = fin(3.0);
        for i in 1..=9 {
            for j in 1..=9 {
                let x2 = 0.5 + 0.5 * f64::from(i) / 10.0;
                let y2 = 0.5 + 0.5 * f64::from(j) / 10.0;
                let f2 = combine_curve(&x2, &y2, &a2, CurveKind::KHayashi).unwrap();
                assert!((f2 - (1.0 - x2 - y2 + 2.0 * x2 * y2)).abs() < 1e-12);

                let x3 = 0.25 + 0.75 * f64::from(i) / 10.0;
                let y3 = 0.25 + 0.75 * f64::from(j) / 10.0;
                let f3 = combine_curve(&x3, &y3, &a3, CurveKind::KHayashi).unwrap();
                assert!((f3 - (1.0 - x3 - y3 + 4.0 * x3 * y3) / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn arimoto_curve_is_bilinear_at_infinite_order() {
        let alpha = Alpha::Infinity;
        for i in 0..=10 {
            for j in 0..=10 {
                let x = 0.5 + 0.5 * f64::from(i) / 10.0;
                let y = 0.5 + 0.5 * f64::from(j) / 10.0;
                let f = combine_curve(&x, &y, &alpha, CurveKind::KArimoto).unwrap();
                assert!((f - (1.0 - x - y + 2.0 * x * y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entropy_curve_agrees_with_transform_route() {
        // h(h⁻¹∗h⁻¹) can also be reached through K space: both routes must
        // agree since k = exp(((1−α)/α)h) is monotone.
        let alpha = fin(1.5);
        let a = 1.5f64;
        for (h1, h2) in [(0.2, 0.4), (0.6, 0.05), (0.3, 0.69)] {
            let direct = combine_curve(&h1, &h2, &alpha, CurveKind::Entropy).unwrap();
            let k1 = ((1.0 - a) / a * h1).exp();
            let k2 = ((1.0 - a) / a * h2).exp();
            let via_k = combine_curve(&k1, &k2, &alpha, CurveKind::KArimoto).unwrap();
            let back = a / (1.0 - a) * via_k.ln();
            assert!((direct - back).abs() < 1e-11);
        }
    }

    #[test]
    fn power_difference_values_and_endpoint_rules() {
        assert_eq!(power_difference(&0.5, &fin(3.0)).unwrap(), 0.0);
        assert!((power_difference(&0.3, &fin(3.0)).unwrap() - -0.40).abs() < 1e-15);
        assert_eq!(power_difference(&1.0, &fin(2.0)).unwrap(), 1.0);
        assert!(power_difference(&0.0, &fin(0.5)).is_err());
        assert!(power_difference(&0.2, &fin(0.5)).is_ok());
    }

    #[test]
    fn entropy_deriv_matches_finite_differences() {
        let step = 1e-6;
        for alpha in [fin(0.5), fin(1.0), fin(1.5), fin(2.0), fin(3.0)] {
            for x in [0.1, 0.2, 0.35, 0.45, 0.6, 0.8] {
                let exact = entropy_deriv(&x, &alpha).unwrap();
                let up = binary_renyi(&(x + step), &alpha).unwrap();
                let dn = binary_renyi(&(x - step), &alpha).unwrap();
                let approx = (up - dn) / (2.0 * step);
                let denom = exact.abs().max(1.0);
                assert!(
                    ((exact - approx) / denom).abs() < 1e-6,
                    "alpha {alpha:?} x {x}: {exact} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn entropy_deriv_positive_below_half_and_zero_at_half() {
        for alpha in [fin(0.5), fin(1.5), fin(2.0), fin(3.0)] {
            assert!(entropy_deriv(&0.5, &alpha).unwrap().abs() < 1e-15);
            for x in [0.05, 0.2, 0.4] {
                assert!(entropy_deriv(&x, &alpha).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn witness_constant_in_y_at_order_two() {
        let alpha = fin(2.0);
        let (x, c) = (0.3, 0.2);
        let base = convexity_witness(&0.05, &x, &c, &alpha).unwrap();
        for i in 1..=19 {
            let y = f64::from(i) / 20.0;
            let g = convexity_witness(&y, &x, &c, &alpha).unwrap();
            assert!((g - base).abs() < 1e-12, "y {y}");
        }
    }

    #[test]
    fn witness_is_one_when_convolving_with_half() {
        let alpha = fin(1.7);
        for y in [0.1, 0.4, 0.9] {
            let g = convexity_witness(&y, &0.3, &0.5, &alpha).unwrap();
            assert!((g - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn witness_half_anchor_uses_the_limit_ratio() {
        let alpha = fin(2.5);
        let c = 0.2;
        let g_exact = convexity_witness(&0.3, &0.5, &c, &alpha).unwrap();
        let g_near = convexity_witness(&0.3, &(0.5 + 1e-9), &c, &alpha).unwrap();
        assert!((g_exact - g_near).abs() < 1e-6);
    }

    #[test]
    fn witness_is_stationary_at_its_anchor() {
        let step = 1e-6;
        for (x, c, a) in [(0.3, 0.2, 1.5), (0.12, 0.41, 2.5), (0.44, 0.07, 0.5)] {
            let alpha = fin(a);
            let up = convexity_witness(&(x + step), &x, &c, &alpha).unwrap();
            let dn = convexity_witness(&(x - step), &x, &c, &alpha).unwrap();
            assert!(((up - dn) / (2.0 * step)).abs() < 1e-6, "x={x} c={c} a={a}");
        }
    }

    #[test]
    fn convolution_closed_forms_match_the_transform() {
        let a2 = fin(2.0);
        let a3 = fin(3.0);
        for i in 0..10 {
            for j in 0..10 {
                let y = f64::from(i) / 10.0 + 0.05;
                let c = f64::from(j) / 10.0 + 0.03;
                let direct2 = k_transform(&convolve(&y, &c), &a2, KKind::Hayashi).unwrap();
                assert!((k2_after_convolve(&y, &c) - direct2).abs() < 1e-14);
                let direct3 = k_transform(&convolve(&y, &c), &a3, KKind::Hayashi).unwrap();
                assert!((k3_after_convolve(&y, &c) - direct3).abs() < 1e-14);
            }
        }
        assert!((k2_after_convolve(&0.5, &0.3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_grid_is_end_exclusive_and_drift_free() {
        let grid = alpha_grid(&1.01, &2.0, &0.005).unwrap();
        assert_eq!(grid.len(), 198);
        assert!((grid[0].order_f64() - 1.01).abs() < 1e-15);
        assert!((grid[197].order_f64() - 1.995).abs() < 1e-12);
        assert!(grid.iter().all(|a| a.order_f64() < 2.0));
        assert!(alpha_grid(&1.0, &2.0, &0.0).is_err());
        assert!(alpha_grid(&2.0, &1.0, &0.1).is_err());
    }
}
