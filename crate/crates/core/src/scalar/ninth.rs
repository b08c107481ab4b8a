//! Elements of Q(δ), δ the real (sign-preserving) ninth root of D, stored as
//! coefficients of 1, δ, …, δ⁸.
//!
//! δ⁹ − D is irreducible unless D is a cube. When D = c³ the field is
//! Q[δ]/(δ³ − c) and coefficients are folded onto 1, δ, δ² (onto 1 alone when
//! D is a ninth power), so equal numbers have equal coefficients.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{exact_odd_root, format_rational, to_f64, Q};
use super::upoly;
use crate::error::{Error, Result};

pub const DEGREE: usize = 9;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NinthRoot {
    coeffs: [Q; DEGREE],
    modulus: Q,
    /// (k, δᵏ) when δᵏ is rational for some k < 9.
    fold: Option<(usize, Q)>,
}

fn fold_of(modulus: &Q) -> Option<(usize, Q)> {
    if let Some(r) = exact_odd_root(modulus, 9) {
        Some((1, r))
    } else {
        exact_odd_root(modulus, 3).map(|c| (3, c))
    }
}

impl NinthRoot {
    /// `Σ coeffs[i] δ^i`; panics if `modulus` is zero.
    pub fn new(coeffs: [Q; DEGREE], modulus: Q) -> Self {
        assert!(!modulus.is_zero(), "ninth-root modulus must be nonzero");
        let fold = fold_of(&modulus);
        NinthRoot { coeffs, modulus, fold }.folded()
    }

    /// Same ring as `self`, without recomputing the fold.
    fn sibling(&self, coeffs: [Q; DEGREE]) -> Self {
        NinthRoot {
            coeffs,
            modulus: self.modulus.clone(),
            fold: self.fold.clone(),
        }
        .folded()
    }

    fn folded(mut self) -> Self {
        if let Some((k, r)) = &self.fold {
            for i in (*k..DEGREE).rev() {
                if !self.coeffs[i].is_zero() {
                    let c = core::mem::take(&mut self.coeffs[i]);
                    self.coeffs[i - k] += c * r;
                }
            }
        }
        self
    }

    pub fn from_rational(value: Q, modulus: Q) -> Self {
        let mut coeffs: [Q; DEGREE] = core::array::from_fn(|_| Q::zero());
        coeffs[0] = value;
        Self::new(coeffs, modulus)
    }

    /// The generator δ itself.
    pub fn generator(modulus: Q) -> Self {
        let mut coeffs: [Q; DEGREE] = core::array::from_fn(|_| Q::zero());
        coeffs[1] = Q::one();
        Self::new(coeffs, modulus)
    }

    pub fn coeffs(&self) -> &[Q; DEGREE] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Q {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(a0)` when every δ-power above zero vanishes.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            self.modulus == other.modulus,
            "ninth-root moduli differ: {} vs {}",
            format_rational(&self.modulus),
            format_rational(&other.modulus)
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let coeffs = core::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]);
        self.sibling(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_ring(other);
        let coeffs = core::array::from_fn(|i| &self.coeffs[i] - &other.coeffs[i]);
        self.sibling(coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = core::array::from_fn(|i| -&self.coeffs[i]);
        self.sibling(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out: [Q; DEGREE] = core::array::from_fn(|_| Q::zero());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                if i + j >= DEGREE {
                    out[i + j - DEGREE] += prod * &self.modulus;
                } else {
                    out[i + j] += prod;
                }
            }
        }
        self.sibling(out)
    }

    pub fn scale(&self, factor: &Q) -> Self {
        let coeffs = core::array::from_fn(|i| &self.coeffs[i] * factor);
        self.sibling(coeffs)
    }

    /// x⁹ − D, or x^k − δᵏ when that is the minimal polynomial.
    fn min_poly(&self) -> Vec<Q> {
        let (k, r) = match &self.fold {
            Some((k, r)) => (*k, r.clone()),
            None => (DEGREE, self.modulus.clone()),
        };
        let mut m = alloc::vec![Q::zero(); k + 1];
        m[0] = -r;
        m[k] = Q::one();
        m
    }

    /// Inverse via extended Euclid modulo the minimal polynomial of δ.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero".into()));
        }
        let (g, s) = upoly::ext_gcd(&self.coeffs, &self.min_poly());
        if upoly::degree(&g) != Some(0) {
            return Err(Error::NotInvertible(format!(
                "{self} is a zero divisor in Q[δ]/(δ⁹ - {})",
                format_rational(&self.modulus)
            )));
        }
        let mut coeffs: [Q; DEGREE] = core::array::from_fn(|_| Q::zero());
        for (i, c) in s.into_iter().enumerate().take(DEGREE) {
            coeffs[i] = c;
        }
        Ok(self.sibling(coeffs))
    }

    /// Sign of the real value at δ = D^{1/9}.
    pub fn real_sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // x⁹ − D has exactly one real root; the element vanishes there iff its
        // gcd with x⁹ − D has odd degree.
        let mut full = alloc::vec![Q::zero(); DEGREE + 1];
        full[0] = -self.modulus.clone();
        full[DEGREE] = Q::one();
        let (g, _) = upoly::ext_gcd(&self.coeffs, &full);
        if upoly::degree(&g).unwrap_or(0) % 2 == 1 {
            return Ordering::Equal;
        }
        let (mut lo, mut hi) = root_bracket(&self.modulus);
        loop {
            let (a, b) = self.eval_interval(&lo, &hi);
            if a.is_positive() {
                return Ordering::Greater;
            }
            if b.is_negative() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            if pow9(&mid) < self.modulus {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    fn eval_interval(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let mut min = Q::zero();
        let mut max = Q::zero();
        let mut plo = Q::one();
        let mut phi = Q::one();
        for c in self.coeffs.iter() {
            if !c.is_zero() {
                let (u, v) = (c * &plo, c * &phi);
                if u <= v {
                    min += u;
                    max += v;
                } else {
                    min += v;
                    max += u;
                }
            }
            plo *= lo;
            phi *= hi;
        }
        (min, max)
    }

    pub fn to_f64(&self) -> f64 {
        let d = real_root_f64(to_f64(&self.modulus));
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in self.coeffs.iter() {
            acc += to_f64(c) * p;
            p *= d;
        }
        acc
    }
}

fn pow9(x: &Q) -> Q {
    let x2 = x * x;
    let x4 = &x2 * &x2;
    let x8 = &x4 * &x4;
    x8 * x
}

/// A rational interval `[lo, hi]` not containing 0 with lo⁹ < D < hi⁹.
fn root_bracket(d: &Q) -> (Q, Q) {
    let approx = real_root_f64(to_f64(d));
    let width = Q::from_float(approx.abs() * 1e-6 + 1e-300).unwrap_or_else(Q::one);
    let centre = Q::from_float(approx).unwrap_or_else(Q::zero);
    let mut lo = &centre - &width;
    let mut hi = &centre + &width;
    while pow9(&lo) >= *d {
        lo = &lo - &(&centre.abs() + Q::one());
    }
    while pow9(&hi) <= *d {
        hi = &hi + &(&centre.abs() + Q::one());
    }
    // Shrink towards the root until the bracket excludes zero.
    while lo.is_negative() && hi.is_positive() {
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        if pow9(&mid) < *d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Real ninth root by Newton's method (sign preserving).
pub fn real_root_f64(d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    let sign = if d < 0.0 { -1.0 } else { 1.0 };
    let a = d * sign;
    let mut x = if a > 1.0 { 1.0 + (a - 1.0) / 9.0 } else { 1.0 };
    for _ in 0..200 {
        let x8 = {
            let x2 = x * x;
            let x4 = x2 * x2;
            x4 * x4
        };
        let next = x - (x8 * x - a) / (9.0 * x8);
        if next == x {
            break;
        }
        x = next;
    }
    sign * x
}

impl fmt::Display for NinthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*δ", format_rational(c))?,
                _ => write!(f, "{}*δ^{}", format_rational(c), i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " [δ⁹={}]", format_rational(&self.modulus))
    }
}

impl fmt::Debug for NinthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
