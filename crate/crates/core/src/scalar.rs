//! Scalar modes.
//!
//! Two interchangeable scalar types implement [`Scalar`]:
//!
//! * [`ExactScalar`]: arbitrary-precision rationals, always in lowest terms.
//!   Used for construction and verification; equality is bit-exact.
//! * [`ApproxScalar`]: double-precision complex numbers. Used only when a
//!   witness needs a k-th root that leaves the rationals. Equality is
//!   `|a - b| <= 1e-9 * max(1, |b|)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::linalg::{self, SquareMatrix};

/// Absolute tolerance (scaled by `max(1, |expected|)`) for approximate equality.
pub const APPROX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::Approx),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Field operations shared by both scalar modes.
///
/// Arithmetic goes through the std operator traits; `rhs` may be borrowed so
/// that big rationals are not cloned twice per operation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_exact(q: &ExactScalar) -> Self;
    fn is_zero(&self) -> bool;
    /// `None` for zero (or, in approximate mode, a non-finite result).
    fn recip(&self) -> Option<Self>;
    /// Mode-aware equality: exact in exact mode, toleranced in approximate mode.
    fn close_to(&self, expected: &Self) -> bool;
    /// `|self - other|` as a float, used for residual reporting.
    fn distance(&self, other: &Self) -> f64;
    fn to_approx(&self) -> ApproxScalar;
    /// All square roots available in this mode (both signs, principal first).
    fn square_roots(&self) -> Vec<Self>;
    fn invert_matrix(m: &SquareMatrix<Self>) -> Result<SquareMatrix<Self>, Error>;

    /// Invertibility without forming the inverse.
    fn is_invertible(m: &SquareMatrix<Self>) -> bool {
        Self::invert_matrix(m).is_ok()
    }

    fn from_i64(v: i64) -> Self {
        Self::from_exact(&ExactScalar::from(v))
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|inv| self.clone() * inv)
    }

    fn pow(&self, k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are kept inline
/// and combined in `i128`; everything else is a `BigRational`. The split is
/// canonical, so derived equality and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive, numerator never `i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

fn small_from_i128(num: i128, den: i128) -> Option<ExactScalar> {
    debug_assert!(den != 0);
    let g = num.gcd(&den);
    let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) if n != i64::MIN => Some(ExactScalar(Repr::Small(n, d))),
        _ => None,
    }
}

impl ExactScalar {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        small_from_i128(numer as i128, denom as i128)
            .unwrap_or_else(|| ExactScalar::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => ExactScalar(Repr::Small(n, d)),
            _ => ExactScalar(Repr::Big(q)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(q) => q.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => ExactScalar(Repr::Small(n.abs(), *d)),
            Repr::Big(q) => ExactScalar::from_big(q.abs()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// The exact rational k-th root, if one exists. For even `k` the
    /// non-negative root is returned.
    pub fn exact_root(&self, k: u32) -> Option<Self> {
        assert!(k >= 1, "root degree must be positive");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if k == 1 {
            return Some(self.clone());
        }
        let negative = self.is_negative();
        if negative && k % 2 == 0 {
            return None;
        }
        let num = self.numer().abs();
        let den = self.denom();
        let rn = num.nth_root(k);
        let rd = den.nth_root(k);
        if num::pow(rn.clone(), k as usize) != num || num::pow(rd.clone(), k as usize) != den {
            return None;
        }
        Some(ExactScalar::from_big(BigRational::new(if negative { -rn } else { rn }, rd)))
    }

    fn big_op(&self, rhs: &Self, op: impl Fn(BigRational, BigRational) -> BigRational) -> Self {
        ExactScalar::from_big(op(self.to_big(), rhs.to_big()))
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::new(v, 1)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(v: BigInt) -> Self {
        ExactScalar::from_big(BigRational::from_integer(v))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Repr::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(ExactScalar::from_big(BigRational::new(p, q)))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = ExactScalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ExactScalar::from(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ExactScalar::from(BigInt::from(v)))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

fn exact_add(a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) => b.clone(),
        (_, Repr::Small(0, _)) => a.clone(),
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            let (p, q, r, s) = (*p as i128, *q as i128, *r as i128, *s as i128);
            if q == s {
                small_from_i128(p + r, q)
            } else {
                small_from_i128(p * s + r * q, q * s)
            }
            .unwrap_or_else(|| a.big_op(b, |x, y| x + y))
        }
        _ => a.big_op(b, |x, y| x + y),
    }
}

fn exact_mul(a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => ExactScalar::zero(),
        (Repr::Small(1, 1), _) => b.clone(),
        (_, Repr::Small(1, 1)) => a.clone(),
        (Repr::Small(p, q), Repr::Small(r, s)) => {
            small_from_i128(*p as i128 * *r as i128, *q as i128 * *s as i128)
                .unwrap_or_else(|| a.big_op(b, |x, y| x * y))
        }
        _ => a.big_op(b, |x, y| x * y),
    }
}

macro_rules! exact_binop {
    ($tr:ident, $method:ident, $f:expr) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                $f(&self, &rhs)
            }
        }

        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                $f(&self, rhs)
            }
        }

        impl<'a, 'b> $tr<&'b ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'b ExactScalar) -> ExactScalar {
                $f(self, rhs)
            }
        }
    };
}

exact_binop!(Add, add, exact_add);
exact_binop!(Sub, sub, |a: &ExactScalar, b: &ExactScalar| exact_add(a, &-b.clone()));
exact_binop!(Mul, mul, exact_mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self.0 {
            Repr::Small(n, d) => ExactScalar(Repr::Small(-n, d)),
            Repr::Big(q) => ExactScalar::from_big(-q),
        }
    }
}

impl Scalar for ExactScalar {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        ExactScalar(Repr::Small(0, 1))
    }

    fn one() -> Self {
        ExactScalar(Repr::Small(1, 1))
    }

    fn from_exact(q: &ExactScalar) -> Self {
        q.clone()
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    fn recip(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => small_from_i128(*d as i128, *n as i128),
            Repr::Big(q) => Some(ExactScalar::from_big(q.recip())),
        }
    }

    fn close_to(&self, expected: &Self) -> bool {
        self == expected
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs().to_f64()
    }

    fn to_approx(&self) -> ApproxScalar {
        ApproxScalar::real(self.to_f64())
    }

    fn square_roots(&self) -> Vec<Self> {
        match self.exact_root(2) {
            Some(r) if r.is_zero() => vec![r],
            Some(r) => vec![r.clone(), -r],
            None => Vec::new(),
        }
    }

    fn invert_matrix(m: &SquareMatrix<Self>) -> Result<SquareMatrix<Self>, Error> {
        linalg::invert_exact(m)
    }

    fn is_invertible(m: &SquareMatrix<Self>) -> bool {
        linalg::full_rank_field(m)
    }
}

// ---------------------------------------------------------------------------
// Approximate complex values
// ---------------------------------------------------------------------------

/// Double-precision complex value.
#[derive(Clone, Copy, PartialEq)]
pub struct ApproxScalar(pub Complex64);

impl ApproxScalar {
    pub fn new(re: f64, im: f64) -> Self {
        ApproxScalar(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        ApproxScalar(Complex64::new(re, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    /// All k complex k-th roots, principal root first, then counter-clockwise.
    pub fn nth_roots(&self, k: u32) -> Vec<ApproxScalar> {
        assert!(k >= 1, "root degree must be positive");
        if self.0 == Complex64::new(0.0, 0.0) {
            return vec![ApproxScalar::real(0.0)];
        }
        let (r, theta) = self.0.to_polar();
        let mag = r.powf(1.0 / k as f64);
        (0..k)
            .map(|j| {
                let angle = (theta + 2.0 * std::f64::consts::PI * j as f64) / k as f64;
                ApproxScalar(Complex64::from_polar(mag, angle))
            })
            .collect()
    }
}

impl fmt::Display for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}{:+}i", self.0.re, self.0.im)
        }
    }
}

impl fmt::Debug for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    re: f64,
    im: f64,
}

impl Serialize for ApproxScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexRepr { re: self.0.re, im: self.0.im }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ApproxScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let c = ComplexRepr::deserialize(deserializer)?;
        let v = ApproxScalar::new(c.re, c.im);
        if !v.is_finite() {
            return Err(de::Error::custom("non-finite complex value"));
        }
        Ok(v)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty($tr::$method(self.0, rhs.0))
            }
        }

        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                $ty($tr::$method(self.0, &rhs.0))
            }
        }

        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'b $ty) -> $ty {
                $ty($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(ApproxScalar, Add, add);
forward_binop!(ApproxScalar, Sub, sub);
forward_binop!(ApproxScalar, Mul, mul);

impl Neg for ApproxScalar {
    type Output = ApproxScalar;
    fn neg(self) -> ApproxScalar {
        ApproxScalar(-self.0)
    }
}

impl Scalar for ApproxScalar {
    const MODE: Mode = Mode::Approx;

    fn zero() -> Self {
        ApproxScalar::real(0.0)
    }

    fn one() -> Self {
        ApproxScalar::real(1.0)
    }

    fn from_exact(q: &ExactScalar) -> Self {
        q.to_approx()
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = ApproxScalar(self.0.inv());
        inv.is_finite().then_some(inv)
    }

    fn close_to(&self, expected: &Self) -> bool {
        self.is_finite() && (self.0 - expected.0).norm() <= APPROX_TOL * expected.norm().max(1.0)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    fn to_approx(&self) -> ApproxScalar {
        *self
    }

    fn square_roots(&self) -> Vec<Self> {
        self.nth_roots(2)
    }

    fn invert_matrix(m: &SquareMatrix<Self>) -> Result<SquareMatrix<Self>, Error> {
        linalg::invert_approx(m)
    }
}

// ---------------------------------------------------------------------------
// Roots of rationals
// ---------------------------------------------------------------------------

/// Result of [`nth_roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// The rational root, when one exists (non-negative for even degree).
    pub exact: Option<ExactScalar>,
    /// All `k` complex roots, principal first.
    pub approx: Vec<ApproxScalar>,
}

impl RootSet {
    /// Every rational root: for even degree both `r` and `-r`.
    pub fn rational_roots(&self, k: u32) -> Vec<ExactScalar> {
        match &self.exact {
            None => Vec::new(),
            Some(r) if r.is_zero() || k % 2 == 1 => vec![r.clone()],
            Some(r) => vec![r.clone(), -r.clone()],
        }
    }
}

/// k-th roots of a rational: the exact root if it exists plus all complex
/// roots. `s = 0` yields the single root 0.
pub fn nth_roots(s: &ExactScalar, k: u32) -> RootSet {
    assert!(k >= 1, "root degree must be positive");
    RootSet {
        exact: s.exact_root(k),
        approx: s.to_approx().nth_roots(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::new(p, d)
    }

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(q(6, -4).to_string(), "-3/2");
        assert_eq!(q(8, 4).to_string(), "2");
        assert_eq!("-6/4".parse::<ExactScalar>().unwrap(), q(-3, 2));
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("x".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn inline_and_big_agree_at_the_boundary() {
        let max = ExactScalar::from(i64::MAX);
        let big = |v: &ExactScalar| v.to_big();
        assert_eq!(big(&(max.clone() + &ExactScalar::one())), big(&max) + BigRational::one());
        assert_eq!(big(&(max.clone() * &max)), big(&max) * big(&max));
        let min = ExactScalar::new(i64::MIN, 1);
        assert_eq!(-(-min.clone()), min);
        assert_eq!(big(&min), BigRational::from_integer(BigInt::from(i64::MIN)));
        // results that shrink back into range become inline again
        let back = (max.clone() + &ExactScalar::one()) - &ExactScalar::one();
        assert_eq!(back, max);
        assert_eq!(ExactScalar::new(i64::MIN, i64::MIN), ExactScalar::one());
    }

    #[test]
    fn serde_formats() {
        assert_eq!(serde_json::to_string(&q(3, 7)).unwrap(), "\"3/7\"");
        assert_eq!(serde_json::to_string(&q(5, 1)).unwrap(), "\"5\"");
        let v: ExactScalar = serde_json::from_str("\"-2/6\"").unwrap();
        assert_eq!(v, q(-1, 3));
        let v: ExactScalar = serde_json::from_str("4").unwrap();
        assert_eq!(v, q(4, 1));
        let c = ApproxScalar::new(1.5, -2.0);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"re":1.5,"im":-2.0}"#);
    }

    #[test]
    fn perfect_cube() {
        let r = nth_roots(&q(8, 1), 3);
        assert_eq!(r.exact, Some(q(2, 1)));
        assert_eq!(r.approx.len(), 3);
        assert_eq!(nth_roots(&q(-27, 8), 3).exact, Some(q(-3, 2)));
    }

    #[test]
    fn roots_of_unity() {
        let r = nth_roots(&q(1, 1), 4);
        assert_eq!(r.exact, Some(q(1, 1)));
        let expected = [
            ApproxScalar::new(1.0, 0.0),
            ApproxScalar::new(0.0, 1.0),
            ApproxScalar::new(-1.0, 0.0),
            ApproxScalar::new(0.0, -1.0),
        ];
        for (got, want) in r.approx.iter().zip(expected.iter()) {
            assert!(got.close_to(want), "{got} vs {want}");
        }
        assert_eq!(r.rational_roots(4), vec![q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn irrational_square_root() {
        let r = nth_roots(&q(2, 1), 2);
        assert!(r.exact.is_none());
        assert_eq!(r.approx.len(), 2);
        for root in &r.approx {
            assert!((root.pow(2).0 - Complex64::new(2.0, 0.0)).norm() <= 1e-12);
        }
        assert!((r.approx[0].re() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((r.approx[1].re() + std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn zero_root() {
        let r = nth_roots(&ExactScalar::zero(), 5);
        assert_eq!(r.exact, Some(ExactScalar::zero()));
        assert_eq!(r.approx, vec![ApproxScalar::zero()]);
    }

    #[test]
    fn negative_even_root_is_complex() {
        let r = nth_roots(&q(-4, 1), 2);
        assert!(r.exact.is_none());
        assert!(r.approx[0].close_to(&ApproxScalar::new(0.0, 2.0)));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = q(-2, 3);
        let mut acc = ExactScalar::one();
        for k in 0..9u32 {
            assert_eq!(x.pow(k), acc);
            acc = acc * &x;
        }
    }

    #[test]
    fn approx_tolerance_is_scaled() {
        let big = ApproxScalar::real(1e6);
        assert!(ApproxScalar::real(1e6 + 1e-4).close_to(&big));
        assert!(!ApproxScalar::real(1e6 + 1e-2).close_to(&big));
        assert!(!ApproxScalar::real(f64::NAN).close_to(&big));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = ExactScalar> {
            (-1000i64..1000, 1i64..500).prop_map(|(p, d)| ExactScalar::new(p, d))
        }

        proptest! {
            #[test]
            fn add_sub_round_trip(a in rational(), b in rational()) {
                prop_assert_eq!((a.clone() + &b) - &b, a);
            }

            #[test]
            fn matches_big_rational(
                a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX,
            ) {
                let (x, y) = (ExactScalar::new(a, b), ExactScalar::new(c, d));
                let (bx, by) = (
                    BigRational::new(BigInt::from(a), BigInt::from(b)),
                    BigRational::new(BigInt::from(c), BigInt::from(d)),
                );
                prop_assert_eq!((x.clone() + &y).to_big(), &bx + &by);
                prop_assert_eq!((x.clone() - &y).to_big(), &bx - &by);
                prop_assert_eq!((x.clone() * &y).to_big(), &bx * &by);
                prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
                prop_assert_eq!(((x.clone() * &y) + &x) - &(x.clone() * &y), x);
            }

            #[test]
            fn div_mul_round_trip(a in rational(), b in rational()) {
                prop_assume!(!b.is_zero());
                prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a);
            }

            #[test]
            fn nth_roots_are_sound(p in -200i64..200, d in 1i64..50, k in 1u32..7) {
                let s = ExactScalar::new(p, d);
                let roots = nth_roots(&s, k);
                let target = s.to_approx();
                let bound = 1e-9 * target.norm().max(1.0);
                for r in &roots.approx {
                    prop_assert!(r.pow(k).distance(&target) <= bound);
                }
                if let Some(r) = roots.exact {
                    prop_assert_eq!(r.pow(k), s);
                }
            }
        }
    }
}
