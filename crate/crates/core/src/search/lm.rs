//! Levenberg–Marquardt on a residual map with central-difference Jacobians.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::{max_abs, NewtonConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Jacobian of `f` at `x` with respect to the coordinates in `free`.
pub fn jacobian(f: &impl Fn(&[f64]) -> Vec<f64>, x: &[f64], free: &[usize], m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(m, free.len());
    let mut y = x.to_vec();
    for (c, &i) in free.iter().enumerate() {
        let h = 1e-7 * x[i].abs().max(1.0);
        y[i] = x[i] + h;
        let up = f(&y);
        y[i] = x[i] - h;
        let down = f(&y);
        y[i] = x[i];
        for r in 0..m {
            j[(r, c)] = (up[r] - down[r]) / (2.0 * h);
        }
    }
    j
}

fn cost(r: &[f64]) -> f64 {
    if r.iter().any(|v| !v.is_finite()) {
        f64::INFINITY
    } else {
        r.iter().map(|v| v * v).sum()
    }
}

/// Minimizes |f(x)|² over the `free` coordinates starting at `x0`.
pub fn levenberg_marquardt(
    f: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    free: &[usize],
    config: &NewtonConfig,
) -> LmOutcome {
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let m = r.len();
    let mut c = cost(&r);
    let mut mu = config.damping;
    let mut iterations = 0;
    let mut stalled = 0;
    while iterations < config.max_iter && c.is_finite() && max_abs(&r) > config.residual_tol {
        iterations += 1;
        let j = jacobian(&f, &x, free, m);
        let rv = DVector::from_column_slice(&r);
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * rv;
        let mut accepted = false;
        for _ in 0..12 {
            let mut damped = a.clone();
            for d in 0..free.len() {
                damped[(d, d)] += mu * (a[(d, d)] + 1.0);
            }
            let Some(step) = damped.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = x.clone();
            for (k, &i) in free.iter().enumerate() {
                trial[i] += step[k];
            }
            let rt = f(&trial);
            let ct = cost(&rt);
            if ct < c {
                stalled = if c - ct <= 1e-10 * c { stalled + 1 } else { 0 };
                x = trial;
                r = rt;
                c = ct;
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted || stalled >= 10 {
            break;
        }
    }
    LmOutcome {
        residual: max_abs(&r),
        x,
        iterations,
    }
}
