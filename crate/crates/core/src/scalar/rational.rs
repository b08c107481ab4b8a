//! Helpers around `BigRational`: parsing, exact roots, float conversion.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, `p/q` (decimal integers).
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let err = |m: &str| Error::Parse {
        position: 0,
        message: format!("{m}: {t:?}"),
    };
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Q::new(n, d))
}

/// Canonical `p/q` (or `p` for integers) text.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let mag = n.abs();
    let r = mag.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == mag {
        Some(if n.sign() == Sign::Minus { -r } else { r })
    } else {
        None
    }
}

/// The sign-preserving real `k`-th root of `x` (k odd) when it is rational.
pub fn exact_odd_root(x: &Q, k: u32) -> Option<Q> {
    debug_assert!(k % 2 == 1);
    let n = exact_root(x.numer(), k)?;
    let d = exact_root(x.denom(), k)?;
    Some(Q::new(n, d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back on a scaled division for huge numerators/denominators.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db;
        let scaled = if shift > 0 {
            x / Q::from_integer(BigInt::one() << (shift as usize))
        } else {
            x * Q::from_integer(BigInt::one() << ((-shift) as usize))
        };
        let base = scaled.to_f64().unwrap_or(0.0);
        base * pow2(shift)
    })
}

fn pow2(e: i64) -> f64 {
    let mut r = 1.0f64;
    let step = if e >= 0 { 2.0 } else { 0.5 };
    for _ in 0..e.unsigned_abs().min(2000) {
        r *= step;
    }
    r
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}
