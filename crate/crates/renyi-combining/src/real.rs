//! Precision-generic scalar arithmetic.
//!
//! Every numeric kernel in this crate is written against [`Real`] so the same
//! code runs in hardware `f64` and in 192-bit MPFR floats. The wide type
//! matters: some verification targets are sign checks on quantities around
//! 1e-13 produced by cancelling terms around 1e-5, and curvature calls near a
//! transition order compare second differences against thresholds as small as
//! 1e-20. Those need more head-room than an `f64` pipeline leaves.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Float;

/// Mantissa bits of [`Extended`]. 192 bits is about 57.8 decimal digits:
/// at least 17 guard digits beyond the 40 that extended CSV output carries.
pub const EXTENDED_PREC: u32 = 192;

/// Scalar type family for entropy computations.
///
/// Implementors behave like a subfield of the reals: exact 0 and 1, total
/// order on the values this crate produces, and the handful of elementary
/// transcendentals the kernels need. Tolerances that must scale with the
/// working precision live here rather than at call sites.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + Sized
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Precision tag used in reports: `"double"` or `"extended"`.
    const LABEL: &'static str;

    /// Significant digits carried into CSV output.
    const CSV_DIGITS: usize;

    fn from_f64(x: f64) -> Self;

    /// Parse a decimal literal directly into this precision, so that inputs
    /// like `0.49` do not take a detour through `f64` rounding.
    fn parse(s: &str) -> Option<Self>;

    /// Nearest `f64`, for summaries and reports.
    fn to_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// ln 2: the entropy of a fair coin, and the top of every entropy range
    /// in this crate.
    fn ln2() -> Self;

    /// Natural logarithm; argument must be positive.
    fn ln(&self) -> Self;

    fn exp(&self) -> Self;

    /// `self^e` for `self` ≥ 0.
    fn pow(&self, e: &Self) -> Self;

    fn abs(&self) -> Self;

    fn is_finite_val(&self) -> bool;

    /// Absolute root-finding tolerance in probability space.
    fn root_tolerance() -> Self;

    /// Default second-difference threshold separating curvature classes.
    fn curvature_tolerance() -> Self;

    /// Scientific notation with [`Self::CSV_DIGITS`] significant digits.
    fn to_csv_string(&self) -> String;
}

impl Real for f64 {
    const LABEL: &'static str = "double";
    const CSV_DIGITS: usize = 17;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn parse(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln2() -> Self {
        std::f64::consts::LN_2
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn pow(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite_val(&self) -> bool {
        self.is_finite()
    }

    fn root_tolerance() -> Self {
        1e-14
    }

    fn curvature_tolerance() -> Self {
        1e-9
    }

    fn to_csv_string(&self) -> String {
        format!("{:.*e}", Self::CSV_DIGITS - 1, self)
    }
}

/// 192-bit MPFR-backed float.
///
/// A thin newtype over [`rug::Float`] pinned to [`EXTENDED_PREC`] bits, so
/// that precision is a property of the type rather than of each value.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Extended(Float);

impl Extended {
    /// Wrap an existing float, re-rounding it to the pinned precision.
    pub fn from_float(f: Float) -> Self {
        Extended(Float::with_val(EXTENDED_PREC, f))
    }

    /// Borrow the underlying MPFR value.
    pub fn as_float(&self) -> &Float {
        &self.0
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for Extended {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Extended(self.0 + rhs.0)
    }
}

impl Sub for Extended {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Extended(self.0 - rhs.0)
    }
}

impl Mul for Extended {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Extended(self.0 * rhs.0)
    }
}

impl Div for Extended {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Extended(self.0 / rhs.0)
    }
}

impl Neg for Extended {
    type Output = Self;
    fn neg(self) -> Self {
        Extended(-self.0)
    }
}

impl Real for Extended {
    const LABEL: &'static str = "extended";
    const CSV_DIGITS: usize = 40;

    fn from_f64(x: f64) -> Self {
        Extended(Float::with_val(EXTENDED_PREC, x))
    }

    fn parse(s: &str) -> Option<Self> {
        Float::parse(s.trim())
            .ok()
            .map(|p| Extended(Float::with_val(EXTENDED_PREC, p)))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn ln2() -> Self {
        Extended(Float::with_val(EXTENDED_PREC, rug::float::Constant::Log2))
    }

    fn ln(&self) -> Self {
        Extended(self.0.clone().ln())
    }

    fn exp(&self) -> Self {
        Extended(self.0.clone().exp())
    }

    fn pow(&self, e: &Self) -> Self {
        Extended(self.0.clone().pow(&e.0))
    }

    fn abs(&self) -> Self {
        Extended(self.0.clone().abs())
    }

    fn is_finite_val(&self) -> bool {
        self.0.is_finite()
    }

    fn root_tolerance() -> Self {
        Self::parse("1e-30").expect("literal tolerance")
    }

    fn curvature_tolerance() -> Self {
        Self::parse("1e-20").expect("literal tolerance")
    }

    fn to_csv_string(&self) -> String {
        // rug reads the format precision as total significant digits, not
        // digits after the point as std does for f64.
        format!("{:.*e}", Self::CSV_DIGITS, self.0)
    }
}

/// Larger of two values by `PartialOrd`; ties go to the first argument.
pub(crate) fn rmax<R: Real>(a: R, b: R) -> R {
    if b > a {
        b
    } else {
        a
    }
}

/// Smaller of two values by `PartialOrd`; ties go to the first argument.
pub(crate) fn rmin<R: Real>(a: R, b: R) -> R {
    if b < a {
        b
    } else {
        a
    }
}

/// Midpoint `(a + b) / 2`.
pub(crate) fn midpoint<R: Real>(a: &R, b: &R) -> R {
    (a.clone() + b.clone()) / R::from_f64(2.0)
}
