//! Dense univariate polynomials over Q (coefficients low to high), used for
//! inverses and signs in the radical extensions of `ninth`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::rational::Q;

pub(crate) fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
pub(crate) fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = &b[db];
    let mut rem: Vec<Q> = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Q::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            rem[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

/// Extended Euclid: returns (g, s) with s*a = g (mod m), g = gcd(a, m) monic.
pub(crate) fn ext_gcd(a: &[Q], m: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r0: Vec<Q> = m.to_vec();
    let mut r1: Vec<Q> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<Q> = Vec::new();
    let mut s1: Vec<Q> = vec![Q::one()];
    while degree(&r1).is_some() {
        let (quo, rem) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&quo, &s1));
        r0 = core::mem::replace(&mut r1, rem);
        s0 = core::mem::replace(&mut s1, s2);
    }
    if let Some(d) = degree(&r0) {
        let lead = r0[d].clone();
        for c in r0.iter_mut() {
            *c /= &lead;
        }
        for c in s0.iter_mut() {
            *c /= &lead;
        }
    }
    (r0, s0)
}
