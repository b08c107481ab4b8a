//! The scalar tower: rationals, the ninth-root extension Q[δ]/(δ⁹ − D),
//! and multivariate polynomials over Q.

pub mod ninth;
pub mod poly;
pub mod rational;
pub(crate) mod upoly;

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

pub use ninth::NinthRoot;
pub use poly::{Monomial, Poly};
pub use rational::{exact_odd_root, format_rational, parse_rational, q, qi, Q};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Q),
    NinthRoot(NinthRoot),
    Polynomial(Poly),
}

/// Which ring a scalar lives in; rationals embed into every other ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    Rational,
    NinthRoot(Q),
    Polynomial,
}

impl Ring {
    /// The smallest ring containing both, if one exists.
    pub fn join(&self, other: &Ring) -> Result<Ring> {
        match (self, other) {
            (Ring::Rational, r) | (r, Ring::Rational) => Ok(r.clone()),
            (Ring::Polynomial, Ring::Polynomial) => Ok(Ring::Polynomial),
            (Ring::NinthRoot(a), Ring::NinthRoot(b)) if a == b => Ok(self.clone()),
            _ => Err(Error::RingMismatch(format!("{self:?} and {other:?}"))),
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Q::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Q::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rational(q(n, d))
    }

    pub fn from_ninth(x: NinthRoot) -> Self {
        match x.as_rational() {
            Some(r) => Scalar::Rational(r.clone()),
            None => Scalar::NinthRoot(x),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => Scalar::Rational(c),
            None => Scalar::Polynomial(p),
        }
    }

    pub fn var(index: usize) -> Self {
        Scalar::Polynomial(Poly::var(index))
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rational,
            Scalar::NinthRoot(x) => Ring::NinthRoot(x.modulus().clone()),
            Scalar::Polynomial(_) => Ring::Polynomial,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::NinthRoot(x) => x.is_zero(),
            Scalar::Polynomial(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(x) if x.is_one())
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Scalar::Rational(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Poly {
        match self {
            Scalar::Rational(x) => Poly::constant(x.clone()),
            Scalar::Polynomial(p) => p.clone(),
            Scalar::NinthRoot(x) => panic!("ninth-root scalar {x} has no polynomial form"),
        }
    }

    fn lift_ninth(&self, modulus: &Q) -> NinthRoot {
        match self {
            Scalar::Rational(x) => NinthRoot::from_rational(x.clone(), modulus.clone()),
            Scalar::NinthRoot(x) => x.clone(),
            Scalar::Polynomial(_) => panic!("cannot mix polynomial and ninth-root scalars"),
        }
    }

    fn binary(
        &self,
        other: &Self,
        fq: impl Fn(&Q, &Q) -> Q,
        fn9: impl Fn(&NinthRoot, &NinthRoot) -> NinthRoot,
        fp: impl Fn(&Poly, &Poly) -> Poly,
    ) -> Self {
        use Scalar::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Rational(fq(a, b)),
            (NinthRoot(a), _) => Self::from_ninth(fn9(a, &other.lift_ninth(a.modulus()))),
            (_, NinthRoot(b)) => Self::from_ninth(fn9(&self.lift_ninth(b.modulus()), b)),
            _ => Self::from_poly(fp(&self.as_poly(), &other.as_poly())),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a + b, NinthRoot::add, Poly::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a - b, NinthRoot::sub, Poly::sub)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        match (self, other) {
            (Scalar::Rational(a), Scalar::NinthRoot(b)) | (Scalar::NinthRoot(b), Scalar::Rational(a)) => {
                Scalar::NinthRoot(b.scale(a))
            }
            (Scalar::Rational(a), Scalar::Polynomial(b)) | (Scalar::Polynomial(b), Scalar::Rational(a)) => {
                Scalar::Polynomial(b.scale(a))
            }
            _ => self.binary(other, |a, b| a * b, NinthRoot::mul, Poly::mul),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::NinthRoot(x) => Scalar::NinthRoot(x.neg()),
            Scalar::Polynomial(p) => Scalar::Polynomial(p.neg()),
        }
    }

    pub fn scale(&self, factor: &Q) -> Self {
        self.mul(&Scalar::Rational(factor.clone()))
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            Scalar::Rational(x) if x.is_zero() => Err(Error::NotInvertible("0".into())),
            Scalar::Rational(x) => Ok(Scalar::Rational(x.recip())),
            Scalar::NinthRoot(x) => x.inverse().map(Self::from_ninth),
            Scalar::Polynomial(p) => Err(Error::NotInvertible(format!("polynomial {p}"))),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if let Scalar::Rational(d) = other {
            if d.is_zero() {
                return Err(Error::NotInvertible("0".into()));
            }
            return Ok(self.scale(&d.recip()));
        }
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Sign of the real value; `None` for non-constant polynomials.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Rational(x) => Some(x.cmp(&Q::zero())),
            Scalar::NinthRoot(x) => Some(x.real_sign()),
            Scalar::Polynomial(_) => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(x) => Some(rational::to_f64(x)),
            Scalar::NinthRoot(x) => Some(x.to_f64()),
            Scalar::Polynomial(_) => None,
        }
    }

    /// Evaluates polynomial scalars at a rational point.
    pub fn eval(&self, point: &[Q]) -> Scalar {
        match self {
            Scalar::Polynomial(p) => Scalar::Rational(p.eval(point)),
            other => other.clone(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        match self {
            Scalar::Polynomial(p) => p.display_with(names),
            other => format!("{other}"),
        }
    }

    /// True when the printed form needs parentheses as a coefficient.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Rational(_) => false,
            Scalar::NinthRoot(x) => x.coeffs().iter().filter(|c| !c.is_zero()).count() > 1,
            Scalar::Polynomial(p) => p.len() > 1,
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(x) if x.is_negative())
    }
}

impl From<Q> for Scalar {
    fn from(x: Q) -> Self {
        Scalar::Rational(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => f.write_str(&format_rational(x)),
            Scalar::NinthRoot(x) => fmt::Display::fmt(x, f),
            Scalar::Polynomial(p) => fmt::Display::fmt(p, f),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar::$m(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar::$m(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar::$m(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

/// The ring operations shared by exact scalars and floats, so curvature code
/// can run on either.
pub trait Arith: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(x: &Q) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn halved(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Arith for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_q(x: &Q) -> Self {
        Scalar::Rational(x.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn minus(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn negated(&self) -> Self {
        Scalar::neg(self)
    }
    fn halved(&self) -> Self {
        self.scale(&q(1, 2))
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl Arith for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_q(x: &Q) -> Self {
        rational::to_f64(x)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn halved(&self) -> Self {
        self * 0.5
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}
