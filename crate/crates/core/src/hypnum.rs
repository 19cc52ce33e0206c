//! Hyperbolic and bicomplex numbers in idempotent coordinates.
//!
//! A hyperbolic number `a1 + k*a2` (with `k*k = 1`) is stored as its pair of
//! idempotent coordinates `(u, v)`, meaning `u*e1 + v*e2` where
//! `e1 = (1 + k)/2` and `e2 = (1 - k)/2`. In this basis every ring operation,
//! the order, suprema and the hyperbolic modulus act coordinate by coordinate.
//! The canonical pair `(a1, a2)` is only a view.
//!
//! Bicomplex numbers `w1 + j*w2` are stored the same way, as the complex pair
//! `(z1, z2)` with `z1 = w1 - i*w2` and `z2 = w1 + i*w2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HypError {
    #[error("non-finite real component")]
    InvalidReal,
    #[error("arithmetic overflow to a non-finite value")]
    Overflow,
    #[error("element lies on a zero-divisor line and has no inverse")]
    ZeroDivisor,
    #[error("empty set has no supremum or infimum")]
    EmptySet,
}

/// A hyperbolic number `u*e1 + v*e2`. Both coordinates are always finite.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawHyp", into = "RawHyp")]
pub struct Hyp {
    u: f64,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct RawHyp {
    u: f64,
    v: f64,
}

impl TryFrom<RawHyp> for Hyp {
    type Error = HypError;
    fn try_from(raw: RawHyp) -> Result<Self, HypError> {
        Hyp::new(raw.u, raw.v)
    }
}

impl From<Hyp> for RawHyp {
    fn from(x: Hyp) -> Self {
        RawHyp { u: x.u, v: x.v }
    }
}

impl Hyp {
    pub const ZERO: Hyp = Hyp { u: 0.0, v: 0.0 };
    pub const ONE: Hyp = Hyp { u: 1.0, v: 1.0 };
    pub const E1: Hyp = Hyp { u: 1.0, v: 0.0 };
    pub const E2: Hyp = Hyp { u: 0.0, v: 1.0 };
    /// The hyperbolic unit `k = e1 - e2`.
    pub const K: Hyp = Hyp { u: 1.0, v: -1.0 };

    /// Builds `u*e1 + v*e2`, rejecting NaN and infinities.
    pub fn new(u: f64, v: f64) -> Result<Hyp, HypError> {
        if u.is_finite() && v.is_finite() {
            Ok(Hyp { u, v })
        } else {
            Err(HypError::InvalidReal)
        }
    }

    /// The same value in both idempotent slots, i.e. the real number `t`.
    pub fn splat(t: f64) -> Result<Hyp, HypError> {
        Hyp::new(t, t)
    }

    /// Builds `a1 + k*a2`, stored as `(a1 + a2, a1 - a2)`.
    pub fn from_canonical(a1: f64, a2: f64) -> Result<Hyp, HypError> {
        if !(a1.is_finite() && a2.is_finite()) {
            return Err(HypError::InvalidReal);
        }
        Hyp::new(a1 + a2, a1 - a2).map_err(|_| HypError::Overflow)
    }

    /// Returns `(a1, a2)` with `self = a1 + k*a2`.
    pub fn to_canonical(self) -> (f64, f64) {
        // Halving first keeps the sum finite for large inputs.
        (self.u / 2.0 + self.v / 2.0, self.u / 2.0 - self.v / 2.0)
    }

    /// Coefficient of `e1`.
    #[inline]
    pub fn u(self) -> f64 {
        self.u
    }

    /// Coefficient of `e2`.
    #[inline]
    pub fn v(self) -> f64 {
        self.v
    }

    /// First projection, `p1(u*e1 + v*e2) = u`.
    #[inline]
    pub fn p1(self) -> f64 {
        self.u
    }

    /// Second projection, `p2(u*e1 + v*e2) = v`.
    #[inline]
    pub fn p2(self) -> f64 {
        self.v
    }

    pub fn checked_add(self, rhs: Hyp) -> Result<Hyp, HypError> {
        Hyp::new(self.u + rhs.u, self.v + rhs.v).map_err(|_| HypError::Overflow)
    }

    pub fn checked_sub(self, rhs: Hyp) -> Result<Hyp, HypError> {
        Hyp::new(self.u - rhs.u, self.v - rhs.v).map_err(|_| HypError::Overflow)
    }

    pub fn checked_mul(self, rhs: Hyp) -> Result<Hyp, HypError> {
        Hyp::new(self.u * rhs.u, self.v * rhs.v).map_err(|_| HypError::Overflow)
    }

    /// Multiplicative inverse, defined off the zero-divisor lines only.
    pub fn inv(self) -> Result<Hyp, HypError> {
        if self.u == 0.0 || self.v == 0.0 {
            return Err(HypError::ZeroDivisor);
        }
        Hyp::new(1.0 / self.u, 1.0 / self.v).map_err(|_| HypError::Overflow)
    }

    pub fn checked_div(self, rhs: Hyp) -> Result<Hyp, HypError> {
        self.checked_mul(rhs.inv()?)
    }

    /// Multiplies both coordinates by the real number `t`.
    pub fn scale(self, t: f64) -> Hyp {
        self.map(|c| c * t)
    }

    /// Componentwise absolute value.
    pub fn abs(self) -> Hyp {
        Hyp { u: self.u.abs(), v: self.v.abs() }
    }

    /// Integer power, computed per idempotent slot.
    pub fn powi(self, n: i32) -> Hyp {
        self.map(|c| c.powi(n))
    }

    /// Componentwise maximum: the supremum of `{self, other}`.
    pub fn sup(self, other: Hyp) -> Hyp {
        Hyp { u: self.u.max(other.u), v: self.v.max(other.v) }
    }

    /// Componentwise minimum: the infimum of `{self, other}`.
    pub fn inf(self, other: Hyp) -> Hyp {
        Hyp { u: self.u.min(other.u), v: self.v.min(other.v) }
    }

    // Panics if `f` produces a non-finite value; only used with total maps.
    fn map(self, f: impl Fn(f64) -> f64) -> Hyp {
        Hyp::new(f(self.u), f(self.v)).expect("hyperbolic arithmetic overflowed")
    }

    /// Classifies `self` against the order cone.
    pub fn cone(self) -> ConeClass {
        classify_cone(self)
    }

    /// `self ⪯ other`, i.e. `other - self` lies in the closed cone.
    #[inline]
    pub fn precedes_eq(self, other: Hyp) -> bool {
        self.u <= other.u && self.v <= other.v
    }

    /// `self ≺ other`: strictly smaller in both coordinates.
    #[inline]
    pub fn precedes(self, other: Hyp) -> bool {
        self.u < other.u && self.v < other.v
    }

    pub fn order(self, other: Hyp) -> OrderRel {
        partial_cmp(self, other)
    }

    /// Both coordinates strictly positive.
    pub fn is_positive(self) -> bool {
        self.u > 0.0 && self.v > 0.0
    }

    /// Both coordinates nonnegative.
    pub fn is_nonnegative(self) -> bool {
        self.u >= 0.0 && self.v >= 0.0
    }
}

impl fmt::Debug for Hyp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hyp({:?}, {:?})", self.u, self.v)
    }
}

impl fmt::Display for Hyp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e1 + {}e2", self.u, self.v)
    }
}

// The operator impls panic on overflow; use the `checked_*` methods when the
// operands are not known to be moderate.
impl Add for Hyp {
    type Output = Hyp;
    fn add(self, rhs: Hyp) -> Hyp {
        self.checked_add(rhs).expect("hyperbolic addition overflowed")
    }
}

impl Sub for Hyp {
    type Output = Hyp;
    fn sub(self, rhs: Hyp) -> Hyp {
        self.checked_sub(rhs).expect("hyperbolic subtraction overflowed")
    }
}

impl Mul for Hyp {
    type Output = Hyp;
    fn mul(self, rhs: Hyp) -> Hyp {
        self.checked_mul(rhs).expect("hyperbolic multiplication overflowed")
    }
}

impl Neg for Hyp {
    type Output = Hyp;
    fn neg(self) -> Hyp {
        Hyp { u: -self.u, v: -self.v }
    }
}

/// `PartialOrd` follows `⪯`: `a < b` means `a ⪯ b` and `a != b`, which is
/// weaker than `a ≺ b`. Incomparable pairs compare as `None`.
impl PartialOrd for Hyp {
    fn partial_cmp(&self, other: &Hyp) -> Option<Ordering> {
        match partial_cmp(*self, *other) {
            OrderRel::Equal => Some(Ordering::Equal),
            OrderRel::StrictLess | OrderRel::LessEqNotStrict => Some(Ordering::Less),
            OrderRel::StrictGreater | OrderRel::GreaterEqNotStrict => Some(Ordering::Greater),
            OrderRel::Incomparable => None,
        }
    }
}

/// Outcome of comparing two hyperbolic numbers under the partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderRel {
    Equal,
    /// Strictly smaller in both coordinates (`≺`).
    StrictLess,
    StrictGreater,
    /// `⪯` holds with equality in exactly one coordinate.
    LessEqNotStrict,
    GreaterEqNotStrict,
    Incomparable,
}

impl OrderRel {
    pub fn is_le(self) -> bool {
        matches!(self, OrderRel::Equal | OrderRel::StrictLess | OrderRel::LessEqNotStrict)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, OrderRel::Equal | OrderRel::StrictGreater | OrderRel::GreaterEqNotStrict)
    }

    pub fn reverse(self) -> OrderRel {
        match self {
            OrderRel::StrictLess => OrderRel::StrictGreater,
            OrderRel::StrictGreater => OrderRel::StrictLess,
            OrderRel::LessEqNotStrict => OrderRel::GreaterEqNotStrict,
            OrderRel::GreaterEqNotStrict => OrderRel::LessEqNotStrict,
            other => other,
        }
    }
}

/// Compares two hyperbolic numbers exactly, without any tolerance.
pub fn partial_cmp(x: Hyp, y: Hyp) -> OrderRel {
    if x.u == y.u && x.v == y.v {
        OrderRel::Equal
    } else if x.precedes(y) {
        OrderRel::StrictLess
    } else if y.precedes(x) {
        OrderRel::StrictGreater
    } else if x.precedes_eq(y) {
        OrderRel::LessEqNotStrict
    } else if y.precedes_eq(x) {
        OrderRel::GreaterEqNotStrict
    } else {
        OrderRel::Incomparable
    }
}

/// Position of a hyperbolic number relative to the order cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// Both coordinates strictly positive.
    PositiveInterior,
    /// Exactly one coordinate is zero (a nonzero zero divisor).
    ZeroDivisorBoundary,
    Zero,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeClass {
    pub cone: Cone,
    /// Membership in the closed cone: both coordinates nonnegative.
    pub in_d0plus: bool,
}

pub fn classify_cone(x: Hyp) -> ConeClass {
    let cone = match (x.u == 0.0, x.v == 0.0) {
        (true, true) => Cone::Zero,
        (true, false) | (false, true) => Cone::ZeroDivisorBoundary,
        (false, false) if x.u > 0.0 && x.v > 0.0 => Cone::PositiveInterior,
        (false, false) => Cone::Outside,
    };
    ConeClass { cone, in_d0plus: x.is_nonnegative() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Sup,
    Inf,
}

/// Supremum or infimum of a finite set, taken per idempotent coordinate.
///
/// The result is generally not an element of `items`.
pub fn sup_set(items: &[Hyp], mode: Extremum) -> Result<Hyp, HypError> {
    let (first, rest) = items.split_first().ok_or(HypError::EmptySet)?;
    Ok(rest.iter().fold(*first, |acc, &x| match mode {
        Extremum::Sup => acc.sup(x),
        Extremum::Inf => acc.inf(x),
    }))
}

/// A bicomplex number `z1*e1 + z2*e2`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bc {
    z1: Complex64,
    z2: Complex64,
}

fn complex_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Bc {
    pub const ZERO: Bc = Bc { z1: Complex64::new(0.0, 0.0), z2: Complex64::new(0.0, 0.0) };
    pub const ONE: Bc = Bc { z1: Complex64::new(1.0, 0.0), z2: Complex64::new(1.0, 0.0) };

    /// Builds `z1*e1 + z2*e2` from idempotent components.
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Bc, HypError> {
        if complex_finite(z1) && complex_finite(z2) {
            Ok(Bc { z1, z2 })
        } else {
            Err(HypError::InvalidReal)
        }
    }

    /// Builds `w1 + j*w2` via `z1 = w1 - i*w2`, `z2 = w1 + i*w2`.
    pub fn from_cartesian(w1: Complex64, w2: Complex64) -> Result<Bc, HypError> {
        if !(complex_finite(w1) && complex_finite(w2)) {
            return Err(HypError::InvalidReal);
        }
        let iw2 = Complex64::i() * w2;
        Bc::new(w1 - iw2, w1 + iw2).map_err(|_| HypError::Overflow)
    }

    /// Returns `(w1, w2)` with `self = w1 + j*w2`.
    pub fn to_cartesian(self) -> (Complex64, Complex64) {
        let half = 0.5;
        let w1 = self.z1 * half + self.z2 * half;
        let w2 = Complex64::i() * (self.z1 * half - self.z2 * half);
        (w1, w2)
    }

    /// Embeds a hyperbolic number (real idempotent components).
    pub fn from_hyp(x: Hyp) -> Bc {
        Bc { z1: Complex64::new(x.u, 0.0), z2: Complex64::new(x.v, 0.0) }
    }

    #[inline]
    pub fn z1(self) -> Complex64 {
        self.z1
    }

    #[inline]
    pub fn z2(self) -> Complex64 {
        self.z2
    }

    pub fn checked_add(self, rhs: Bc) -> Result<Bc, HypError> {
        Bc::new(self.z1 + rhs.z1, self.z2 + rhs.z2).map_err(|_| HypError::Overflow)
    }

    pub fn checked_sub(self, rhs: Bc) -> Result<Bc, HypError> {
        Bc::new(self.z1 - rhs.z1, self.z2 - rhs.z2).map_err(|_| HypError::Overflow)
    }

    pub fn checked_mul(self, rhs: Bc) -> Result<Bc, HypError> {
        Bc::new(self.z1 * rhs.z1, self.z2 * rhs.z2).map_err(|_| HypError::Overflow)
    }

    /// The hyperbolic modulus `|z1|*e1 + |z2|*e2`.
    pub fn hyp_mod(self) -> Hyp {
        hyp_mod(self)
    }
}

impl fmt::Debug for Bc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bc({:?}, {:?})", self.z1, self.z2)
    }
}

impl Add for Bc {
    type Output = Bc;
    fn add(self, rhs: Bc) -> Bc {
        self.checked_add(rhs).expect("bicomplex addition overflowed")
    }
}

impl Sub for Bc {
    type Output = Bc;
    fn sub(self, rhs: Bc) -> Bc {
        self.checked_sub(rhs).expect("bicomplex subtraction overflowed")
    }
}

impl Mul for Bc {
    type Output = Bc;
    fn mul(self, rhs: Bc) -> Bc {
        self.checked_mul(rhs).expect("bicomplex multiplication overflowed")
    }
}

impl Neg for Bc {
    type Output = Bc;
    fn neg(self) -> Bc {
        Bc { z1: -self.z1, z2: -self.z2 }
    }
}

/// Hyperbolic modulus of a bicomplex number; always in the closed cone.
pub fn hyp_mod(w: Bc) -> Hyp {
    // `norm` is hypot, which only overflows when the true modulus does.
    Hyp::new(w.z1.norm(), w.z2.norm()).expect("complex modulus overflowed")
}
