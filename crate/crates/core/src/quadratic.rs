//! Exact arithmetic in a quadratic extension `Q(√q)`.
//!
//! Witnesses whose only irrationality is a square root (the `mu12` radical
//! `r^2 = a_1^{n-1}`, or `a_1 = √b_22` on branch 2) are solved here instead
//! of in floats: the substitution has large intermediate terms, and double
//! precision cannot hold those witnesses to the approximate tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::linalg::{self, SquareMatrix};
use crate::scalar::{ApproxScalar, ExactScalar, Mode, Scalar};

/// `u + v √q` for a fixed non-square rational `q`. Plain rationals carry no
/// `q` and mix with any extension; mixing two different `q` is a bug.
#[derive(Clone)]
pub struct QuadScalar {
    u: ExactScalar,
    v: ExactScalar,
    q: Option<ExactScalar>,
}

impl QuadScalar {
    pub fn rational(x: &ExactScalar) -> Self {
        QuadScalar { u: x.clone(), v: ExactScalar::zero(), q: None }
    }

    /// `√q`, or `None` when `q` is a rational square (use [`ExactScalar`]).
    pub fn sqrt_of(q: &ExactScalar) -> Option<Self> {
        if q.exact_root(2).is_some() {
            return None;
        }
        Some(QuadScalar { u: ExactScalar::zero(), v: ExactScalar::one(), q: Some(q.clone()) })
    }

    /// The rational value, if the `√q` part vanishes.
    pub fn as_rational(&self) -> Option<ExactScalar> {
        self.v.is_zero().then(|| self.u.clone())
    }

    pub fn parts(&self) -> (ExactScalar, ExactScalar, Option<ExactScalar>) {
        (self.u.clone(), self.v.clone(), self.q.clone())
    }

    fn join(a: &Option<ExactScalar>, b: &Option<ExactScalar>) -> Option<ExactScalar> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixed quadratic extensions");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn norm(&self) -> ExactScalar {
        let q = self.q.clone().unwrap_or_else(ExactScalar::zero);
        &self.u * &self.u - &(&self.v * &self.v) * &q
    }
}

impl PartialEq for QuadScalar {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && (self.v.is_zero() || self.q == other.q)
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.q {
            Some(q) if !self.v.is_zero() => {
                if !self.u.is_zero() {
                    write!(f, "{} ", self.u)?;
                    f.write_str(if self.v.is_negative() { "- " } else { "+ " })?;
                } else if self.v.is_negative() {
                    f.write_str("-")?;
                }
                let v = self.v.abs();
                if !v.is_one() {
                    write!(f, "{v}*")?;
                }
                write!(f, "sqrt({q})")
            }
            _ => write!(f, "{}", self.u),
        }
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for QuadScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: QuadScalar) -> QuadScalar {
        self + &rhs
    }
}

impl<'a> Add<&'a QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &'a QuadScalar) -> QuadScalar {
        let q = Self::join(&self.q, &rhs.q);
        let v = if rhs.v.is_zero() { self.v } else { self.v + &rhs.v };
        QuadScalar { u: self.u + &rhs.u, v, q }
    }
}

impl Sub for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: QuadScalar) -> QuadScalar {
        self - &rhs
    }
}

impl<'a> Sub<&'a QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &'a QuadScalar) -> QuadScalar {
        let q = Self::join(&self.q, &rhs.q);
        let v = if rhs.v.is_zero() { self.v } else { self.v - &rhs.v };
        QuadScalar { u: self.u - &rhs.u, v, q }
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: QuadScalar) -> QuadScalar {
        self * &rhs
    }
}

impl<'a> Mul<&'a QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &'a QuadScalar) -> QuadScalar {
        let q = Self::join(&self.q, &rhs.q);
        // most entries are rational; skip the cross terms when they vanish
        match (self.v.is_zero(), rhs.v.is_zero()) {
            (true, true) => QuadScalar { u: self.u * &rhs.u, v: self.v, q },
            (true, false) => QuadScalar { u: &self.u * &rhs.u, v: self.u * &rhs.v, q },
            (false, true) => QuadScalar { u: &self.u * &rhs.u, v: self.v * &rhs.u, q },
            (false, false) => {
                let vv = &(&self.v * &rhs.v) * q.as_ref().expect("v != 0 implies q");
                let u = &self.u * &rhs.u + vv;
                let v = &self.u * &rhs.v + &(&self.v * &rhs.u);
                QuadScalar { u, v, q }
            }
        }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { u: -self.u, v: -self.v, q: self.q }
    }
}

impl Scalar for QuadScalar {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        QuadScalar { u: ExactScalar::zero(), v: ExactScalar::zero(), q: None }
    }

    fn one() -> Self {
        QuadScalar { u: ExactScalar::one(), v: ExactScalar::zero(), q: None }
    }

    fn from_exact(q: &ExactScalar) -> Self {
        Self::rational(q)
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn recip(&self) -> Option<Self> {
        // (u + v√q)^{-1} = (u - v√q) / (u^2 - q v^2); the norm vanishes only at 0
        let norm = self.norm();
        if norm.is_zero() {
            return None;
        }
        let inv = norm.recip()?;
        Some(QuadScalar { u: &self.u * &inv, v: -(&self.v * &inv), q: self.q.clone() })
    }

    fn close_to(&self, expected: &Self) -> bool {
        self == expected
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.clone() - other).to_approx().distance(&ApproxScalar::real(0.0))
    }

    fn to_approx(&self) -> ApproxScalar {
        let (u, v, q) = self.parts();
        let root = q.map_or(Complex64::new(0.0, 0.0), |q| Complex64::new(q.to_f64(), 0.0).sqrt());
        ApproxScalar(Complex64::new(u.to_f64(), 0.0) + root * v.to_f64())
    }

    /// Square roots inside the same field: rational ones, and `±c √q` for
    /// rationals `c^2 q`.
    fn square_roots(&self) -> Vec<Self> {
        if !self.v.is_zero() {
            return Vec::new();
        }
        let rational = self.u.square_roots();
        if !rational.is_empty() {
            return rational.iter().map(Self::rational).collect();
        }
        let Some(q) = &self.q else { return Vec::new() };
        match self.u.checked_div(q).and_then(|c2| c2.exact_root(2)) {
            Some(c) => {
                let w = QuadScalar { u: ExactScalar::zero(), v: c, q: Some(q.clone()) };
                vec![w.clone(), -w]
            }
            None => Vec::new(),
        }
    }

    fn invert_matrix(m: &SquareMatrix<Self>) -> Result<SquareMatrix<Self>, Error> {
        linalg::invert_field(m)
    }

    fn is_invertible(m: &SquareMatrix<Self>) -> bool {
        linalg::full_rank_field(m)
    }
}
