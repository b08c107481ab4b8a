//! Exact refinement, rational reconstruction and exact re-check of numeric
//! Einstein candidates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lm::jacobian;
use super::{Candidate, ReconstructionConfig, ResidualSystem, Status};
use crate::liealg::LieAlgebra;
use crate::metric::{einstein_check, obstruction_dims, EinsteinVerdict, PseudoMetric};
use crate::scalar::{rational, Scalar, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    /// Exact Newton steps taken before reconstruction.
    pub refine_steps: usize,
    /// Size of the last exact correction.
    pub last_step: f64,
    /// The 28 (in general n(n+1)/2) reconstructed values, when all succeeded.
    pub exact: Option<Vec<Q>>,
    pub lambda: Option<Q>,
    /// Whether the dimension inequality of the obstruction report holds.
    pub obstruction_inequality: Option<bool>,
    /// Inequality holds ⇒ λ = 0.
    pub obstruction_consistent: Option<bool>,
    pub note: Option<String>,
}

/// The unique rational with denominator ≤ 2^bits within 2^-(2·bits+1) of x,
/// found among the continued-fraction convergents.
pub fn best_rational(x: &Q, bits: u32) -> Option<Q> {
    let bound = BigInt::one() << bits as usize;
    let tol = Q::new(BigInt::one(), BigInt::one() << (2 * bits as usize + 1));
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            return None;
        }
        let c = Q::new(p2.clone(), q2.clone());
        if (x - &c).abs() <= tol {
            return Some(c);
        }
        let frac = &rest - Q::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rest = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}

fn exact_from(x: f64) -> Q {
    rational::from_f64(x).unwrap_or_else(Q::zero)
}

/// Newton polish in exact arithmetic: x ← x − J⁺ r(x) over the `free`
/// coordinates, with r evaluated over ℚ and J the float Jacobian. Stops once a
/// correction is below `stop` or fails to shrink; returns the steps taken and
/// the last correction size.
pub fn refine(system: &ResidualSystem, x: &mut [Q], free: &[usize], steps: usize, stop: f64) -> (usize, f64) {
    let mut last = f64::INFINITY;
    for step in 0..steps {
        let r: Vec<f64> = system
            .residuals_exact(x)
            .iter()
            .map(|s| s.to_f64().unwrap_or(f64::NAN))
            .collect();
        if r.iter().all(|v| *v == 0.0) {
            return (step, 0.0);
        }
        let xf: Vec<f64> = x.iter().map(rational::to_f64).collect();
        let j = jacobian(&|v: &[f64]| system.residuals(v), &xf, free, r.len());
        let Ok(delta) = j.svd(true, true).solve(&DVector::from_column_slice(&r), 1e-12) else {
            return (step, last);
        };
        let size = delta.amax();
        if !size.is_finite() || size >= last {
            return (step, last);
        }
        for (k, &i) in free.iter().enumerate() {
            x[i] -= exact_from(delta[k]);
        }
        last = size;
        if size < stop {
            return (step + 1, last);
        }
    }
    (steps, last)
}

fn numeric(c: &Candidate, cert: Certification) -> Candidate {
    Candidate {
        status: Status::EinsteinNumeric,
        certification: Some(cert),
        ..c.clone()
    }
}

/// Certifies a candidate whose float residual is at most the system's
/// refinement gate; otherwise the float values are reconstructed as they are.
pub fn certify(l: &LieAlgebra, system: &ResidualSystem, c: &Candidate, config: &ReconstructionConfig) -> Candidate {
    let param = system.parametrization();
    let mut x: Vec<Q> = c.unknowns().into_iter().map(exact_from).collect();
    let (steps, last) = if c.residual <= config.refine_gate {
        let stop = libm::ldexp(1.0, -(2 * config.max_denominator_bits as i32 + 24));
        refine(system, &mut x, &c.free(), config.refine_steps, stop)
    } else {
        (0, f64::NAN)
    };
    let mut cert = Certification {
        refine_steps: steps,
        last_step: last,
        exact: None,
        lambda: None,
        obstruction_inequality: None,
        obstruction_consistent: None,
        note: None,
    };
    let exact: Option<Vec<Q>> = x
        .iter()
        .map(|v| {
            if v.denom().bits() <= u64::from(config.max_denominator_bits) {
                Some(v.clone())
            } else {
                best_rational(v, config.max_denominator_bits)
            }
        })
        .collect();
    let Some(exact) = exact else {
        cert.note = Some(format!(
            "reconstruction exceeded the 2^{} denominator budget",
            config.max_denominator_bits
        ));
        return numeric(c, cert);
    };
    let diag: Vec<Scalar> = param.diagonal(&exact).iter().map(|d| Scalar::Rational(d.clone())).collect();
    if diag.iter().any(Scalar::is_zero) {
        cert.note = Some("reconstructed metric is degenerate".into());
        return numeric(c, cert);
    }
    let frame = param.frame_exact(&exact);
    let metric = PseudoMetric::diagonal(&diag);
    let check = l.change_of_basis(&frame).and_then(|lf| {
        let e = einstein_check(&lf, &metric)?;
        let o = obstruction_dims(&lf, &metric)?;
        Ok((e, o))
    });
    cert.exact = Some(exact);
    match check {
        Ok((e, o)) => match e.verdict {
            EinsteinVerdict::Einstein(lambda) => {
                let lambda = lambda.as_rational().cloned().expect("rational data");
                cert.obstruction_inequality = Some(o.inequality_holds);
                cert.obstruction_consistent = Some(!o.inequality_holds || lambda.is_zero());
                cert.lambda = Some(lambda.clone());
                Candidate {
                    status: Status::EinsteinCertified(lambda),
                    certification: Some(cert),
                    ..c.clone()
                }
            }
            EinsteinVerdict::NotEinstein => {
                cert.note = Some("exact check failed on the reconstructed values".into());
                numeric(c, cert)
            }
        },
        Err(e) => {
            cert.note = Some(format!("{e}"));
            numeric(c, cert)
        }
    }
}
