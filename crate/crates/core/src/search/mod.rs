//! Numeric hunt for diagonal Einstein metrics in unit-triangular frames, with
//! exact certification of the solutions found.

mod certify;
mod lm;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::metric::{bracket_table, ricci_generic};
use crate::scalar::{Arith, Scalar, Q};

pub use certify::{best_rational, certify, refine, Certification};
pub use lm::{jacobian as jac, levenberg_marquardt, LmOutcome};

/// Unknowns of a diagonal metric in a unit lower-triangular coframe change:
/// e^a = f^a + Σ_{b<a} P_ab f^b, equivalently f_b = e_b + Σ_{a>b} P_ab e_a,
/// together with the diagonal values g(f_k, f_k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    n: usize,
    entries: Vec<(usize, usize)>,
}

pub fn parametrize(l: &LieAlgebra) -> Parametrization {
    Parametrization::new(l.dim())
}

impl Parametrization {
    pub fn new(n: usize) -> Self {
        let entries = (0..n).flat_map(|a| (0..a).map(move |b| (a, b))).collect();
        Parametrization { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// (a, b) positions of the frame unknowns, a > b, 0-based.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn frame_unknowns(&self) -> usize {
        self.entries.len()
    }

    pub fn unknowns(&self) -> usize {
        self.entries.len() + self.n
    }

    /// `p{a}{b}` for frame entries and `g{k}` for diagonal values, 1-based.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.entries.iter().map(|(a, b)| format!("p{}_{}", a + 1, b + 1)).collect();
        out.extend((0..self.n).map(|k| format!("g{}", k + 1)));
        out
    }

    /// The coframe matrix (row a: e^a in the f^b) as floats, row-major.
    pub fn frame(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            m[k * n + k] = 1.0;
        }
        for (t, (a, b)) in self.entries.iter().enumerate() {
            m[a * n + b] = x[t];
        }
        m
    }

    pub fn frame_exact(&self, x: &[Q]) -> Matrix {
        let mut m = Matrix::identity(self.n);
        for (t, (a, b)) in self.entries.iter().enumerate() {
            m[(*a, *b)] = Scalar::Rational(x[t].clone());
        }
        m
    }

    pub fn diagonal<'a, T>(&self, x: &'a [T]) -> &'a [T] {
        &x[self.entries.len()..]
    }

    /// Unknown vector for a given coframe matrix and diagonal.
    pub fn pack(&self, frame: &Matrix, diag: &[Scalar]) -> Option<Vec<Q>> {
        let mut out: Vec<Q> = self
            .entries
            .iter()
            .map(|(a, b)| frame[(*a, *b)].as_rational().cloned())
            .collect::<Option<_>>()?;
        for d in diag {
            out.push(d.as_rational()?.clone());
        }
        Some(out)
    }
}

/// Ricci tensor and Einstein residuals of the parametrized metric.
#[derive(Clone, Debug)]
pub struct ResidualSystem {
    param: Parametrization,
    exact: Vec<Scalar>,
    bracket: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// Ric(f_i, f_j) for i < j, row by row.
    pub off_diagonal: Vec<f64>,
    /// Ric_kk g_{k+1,k+1} − Ric_{k+1,k+1} g_kk.
    pub proportionality: Vec<f64>,
    /// max − min of Ric_kk / g_kk.
    pub ratio_spread: f64,
    pub max_abs: f64,
}

/// The bracket table in the frame whose coframe change is `frame` (row a:
/// e^a in the f^b), from the bracket table `br` in the e-frame.
fn bracket_in_frame<T: Arith>(n: usize, br: &[T], frame: &[T]) -> Vec<T> {
    // [f_i, f_j] = Σ frame[a][i] frame[b][j] [e_a, e_b]; then to f-coordinates
    // by forward substitution, the frame being unit lower triangular.
    let mut out = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![T::zero(); n];
            for a in i..n {
                let fa = &frame[a * n + i];
                if fa.is_zero() {
                    continue;
                }
                for b in j..n {
                    let fb = &frame[b * n + j];
                    if fb.is_zero() {
                        continue;
                    }
                    let w = fa.times(fb);
                    for c in 0..n {
                        let x = &br[(a * n + b) * n + c];
                        if !x.is_zero() {
                            v[c] = v[c].plus(&w.times(x));
                        }
                    }
                }
            }
            for c in 0..n {
                let mut acc = v[c].clone();
                for d in 0..c {
                    let m = &frame[c * n + d];
                    if !m.is_zero() && !out[(i * n + j) * n + d].is_zero() {
                        acc = acc.minus(&m.times(&out[(i * n + j) * n + d]));
                    }
                }
                out[(j * n + i) * n + c] = acc.negated();
                out[(i * n + j) * n + c] = acc;
            }
        }
    }
    out
}

fn residual_vector<T: Arith>(n: usize, ric: &[T], diag: &[T]) -> Vec<T> {
    let mut r = Vec::with_capacity(n * (n - 1) / 2 + n.saturating_sub(1));
    for i in 0..n {
        for j in i + 1..n {
            r.push(ric[i * n + j].clone());
        }
    }
    for k in 0..n.saturating_sub(1) {
        r.push(ric[k * n + k].times(&diag[k + 1]).minus(&ric[(k + 1) * n + k + 1].times(&diag[k])));
    }
    r
}

impl ResidualSystem {
    pub fn new(l: &LieAlgebra) -> Self {
        let exact = bracket_table(l);
        let bracket = exact
            .iter()
            .map(|x| x.to_f64().expect("rational structure constants"))
            .collect();
        ResidualSystem {
            param: parametrize(l),
            exact,
            bracket,
        }
    }

    pub fn parametrization(&self) -> &Parametrization {
        &self.param
    }

    /// Ric in the f-frame, row-major; `None` when some diagonal value is zero.
    pub fn ricci(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = self.param.n;
        let diag = self.param.diagonal(x);
        if diag.iter().any(|d| *d == 0.0 || !d.is_finite()) {
            return None;
        }
        let frame = self.param.frame(x);
        let br = bracket_in_frame(n, &self.bracket, &frame);
        let mut g = vec![0.0; n * n];
        let mut ginv = vec![0.0; n * n];
        for k in 0..n {
            g[k * n + k] = diag[k];
            ginv[k * n + k] = 1.0 / diag[k];
        }
        Some(ricci_generic(n, &br, &g, &ginv))
    }

    /// The n(n−1)/2 off-diagonal entries followed by n−1 proportionality
    /// equations; non-finite when the metric is singular.
    pub fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let n = self.param.n;
        match self.ricci(x) {
            Some(ric) => residual_vector(n, &ric, self.param.diagonal(x)),
            None => vec![f64::INFINITY; n * (n - 1) / 2 + n - 1],
        }
    }

    pub fn report(&self, x: &[f64]) -> ResidualReport {
        let n = self.param.n;
        let r = self.residuals(x);
        let m = n * (n - 1) / 2;
        let ratios: Vec<f64> = match self.ricci(x) {
            Some(ric) => (0..n).map(|k| ric[k * n + k] / self.param.diagonal(x)[k]).collect(),
            None => vec![f64::NAN],
        };
        let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        ResidualReport {
            max_abs: max_abs(&r),
            off_diagonal: r[..m].to_vec(),
            proportionality: r[m..].to_vec(),
            ratio_spread: spread,
        }
    }

    /// Exact residuals at a rational point.
    pub fn residuals_exact(&self, x: &[Q]) -> Vec<Scalar> {
        let n = self.param.n;
        let frame = self.param.frame_exact(x);
        let flat: Vec<Scalar> = (0..n * n).map(|t| frame[(t / n, t % n)].clone()).collect();
        let br = bracket_in_frame(n, &self.exact, &flat);
        let diag: Vec<Scalar> = self.param.diagonal(x).iter().map(|d| Scalar::Rational(d.clone())).collect();
        let mut g = vec![Scalar::zero(); n * n];
        let mut ginv = vec![Scalar::zero(); n * n];
        for k in 0..n {
            g[k * n + k] = diag[k].clone();
            ginv[k * n + k] = diag[k].inv().expect("nonzero diagonal");
        }
        let ric = ricci_generic(n, &br, &g, &ginv);
        residual_vector(n, &ric, &diag)
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonConfig {
    pub max_iter: usize,
    pub damping: f64,
    pub residual_tol: f64,
    /// Newton steps with exactly evaluated residuals applied to converged
    /// points before rounding back to floats.
    pub polish_steps: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            max_iter: 200,
            damping: 1e-3,
            residual_tol: 1e-10,
            polish_steps: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionConfig {
    pub max_denominator_bits: u32,
    /// Exact refinement steps before reconstruction.
    pub refine_steps: usize,
    /// Candidates with a larger float residual are reconstructed unrefined.
    pub refine_gate: f64,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            max_denominator_bits: 64,
            refine_steps: 12,
            refine_gate: 1e-9,
        }
    }
}

/// Where the multi-start initial points are drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum StartRegion {
    /// Frame unknowns uniform in [−2, 2]; |g_kk| uniform in [1/4, 4] with the
    /// sign pattern.
    Uniform,
    /// Each unknown uniform in x ± radius·max(1, |x|).
    Around { point: Vec<f64>, radius: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub signs: Vec<i8>,
    pub seeds: Vec<u64>,
    pub newton: NewtonConfig,
    pub reconstruction: ReconstructionConfig,
    /// Relative threshold of the two discard rules.
    pub degeneracy_tol: f64,
    pub start: StartRegion,
    /// Unknowns held at their start values (a gauge or sparsity pattern).
    /// The last diagonal value is always held.
    pub pinned: Vec<usize>,
}

impl SearchConfig {
    pub fn new(signs: Vec<i8>, seeds: Vec<u64>) -> Self {
        SearchConfig {
            signs,
            seeds,
            newton: NewtonConfig::default(),
            reconstruction: ReconstructionConfig::default(),
            degeneracy_tol: 1e-8,
            start: StartRegion::Uniform,
            pinned: Vec::new(),
        }
    }

    pub fn validate(&self, n: usize) -> crate::Result<()> {
        if self.signs.len() != n {
            return Err(crate::Error::Dimension {
                expected: n,
                found: self.signs.len(),
            });
        }
        let unknowns = Parametrization::new(n).unknowns();
        if self.pinned.iter().any(|&i| i >= unknowns) {
            return Err(crate::Error::Precondition("pinned unknown out of range".into()));
        }
        if let StartRegion::Around { point, .. } = &self.start {
            if point.len() != unknowns {
                return Err(crate::Error::Dimension {
                    expected: unknowns,
                    found: point.len(),
                });
            }
        }
        if self.signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(crate::Error::Precondition("signs must be +1 or -1".into()));
        }
        let positive = [self.newton.damping, self.newton.residual_tol, self.degeneracy_tol];
        if positive.iter().any(|t| !(*t > 0.0)) {
            return Err(crate::Error::Precondition("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    /// Isotropic f_k or vanishing Ricci diagonal entry.
    Degenerate,
    NonEinstein,
    EinsteinNumeric,
    EinsteinCertified(Q),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub seed: u64,
    /// Frame unknowns in [`Parametrization::entries`] order.
    pub p: Vec<f64>,
    pub diag: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub status: Status,
    /// Unknowns that were held fixed, including the last diagonal value.
    pub pinned: Vec<usize>,
    pub certification: Option<Certification>,
}

impl Candidate {
    pub fn unknowns(&self) -> Vec<f64> {
        let mut x = self.p.clone();
        x.extend_from_slice(&self.diag);
        x
    }

    pub fn free(&self) -> Vec<usize> {
        (0..self.p.len() + self.diag.len()).filter(|i| !self.pinned.contains(i)).collect()
    }
}

fn pinned_set(config: &SearchConfig, param: &Parametrization) -> Vec<usize> {
    let mut pins = config.pinned.clone();
    pins.push(param.unknowns() - 1);
    pins.sort_unstable();
    pins.dedup();
    pins
}

fn draw_start(config: &SearchConfig, param: &Parametrization, seed: u64) -> Vec<f64> {
    let pins = pinned_set(config, param);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let n = param.dim();
    match &config.start {
        // Pinned unknowns start at 0 (frame) or at their sign (diagonal).
        StartRegion::Uniform => {
            let split = param.frame_unknowns();
            let mut x: Vec<f64> = (0..split)
                .map(|i| if pins.contains(&i) { 0.0 } else { 4.0 * unit() - 2.0 })
                .collect();
            for k in 0..n {
                let mag = if pins.contains(&(split + k)) { 1.0 } else { 0.25 + 3.75 * unit() };
                x.push(f64::from(config.signs[k]) * mag);
            }
            x
        }
        StartRegion::Around { point, radius } => point
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if pins.contains(&i) {
                    *v
                } else {
                    v + radius * v.abs().max(1.0) * (2.0 * unit() - 1.0)
                }
            })
            .collect(),
    }
}

/// Classifies a converged point by the discard rules and the residual.
pub fn classify(system: &ResidualSystem, x: &[f64], config: &SearchConfig) -> (Status, f64) {
    let n = system.param.dim();
    let residual = max_abs(&system.residuals(x));
    let Some(ric) = system.ricci(x) else {
        return (Status::Degenerate, residual);
    };
    let diag = system.param.diagonal(x);
    let dmax = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let rmax = (0..n).fold(0.0f64, |m, k| m.max(ric[k * n + k].abs()));
    let tol = config.degeneracy_tol;
    let isotropic = diag.iter().any(|d| d.abs() < tol * dmax);
    let flat_entry = (0..n).any(|k| ric[k * n + k].abs() < tol * rmax.max(1.0));
    let wrong_signs = diag.iter().zip(&config.signs).any(|(d, s)| d * f64::from(*s) < 0.0);
    if isotropic || flat_entry {
        (Status::Degenerate, residual)
    } else if residual <= config.newton.residual_tol && residual.is_finite() && !wrong_signs {
        (Status::EinsteinNumeric, residual)
    } else {
        (Status::NonEinstein, residual)
    }
}

/// One multi-start path. The last diagonal value is pinned (metrics are
/// determined up to scale).
pub fn solve_seed(system: &ResidualSystem, config: &SearchConfig, seed: u64) -> Candidate {
    let param = &system.param;
    let x0 = draw_start(config, param, seed);
    let pinned = pinned_set(config, param);
    let free: Vec<usize> = (0..param.unknowns()).filter(|i| !pinned.contains(i)).collect();
    let mut out = levenberg_marquardt(|x| system.residuals(x), &x0, &free, &config.newton);
    let (mut status, mut residual) = classify(system, &out.x, config);
    if status == Status::EinsteinNumeric && config.newton.polish_steps > 0 {
        let mut exact: Vec<Q> = out.x.iter().map(|v| Q::from_float(*v).unwrap_or_default()).collect();
        refine(system, &mut exact, &free, config.newton.polish_steps, 0.0);
        let polished: Vec<f64> = exact.iter().map(crate::scalar::rational::to_f64).collect();
        let (s, r) = classify(system, &polished, config);
        if s == Status::EinsteinNumeric {
            (status, residual) = (s, r);
            out.x = polished;
        }
    }
    let split = param.frame_unknowns();
    Candidate {
        seed,
        p: out.x[..split].to_vec(),
        diag: out.x[split..].to_vec(),
        residual,
        iterations: out.iterations,
        status,
        pinned,
        certification: None,
    }
}

/// All seeds in order; empty when the iteration budget is zero.
pub fn solve(l: &LieAlgebra, config: &SearchConfig) -> crate::Result<Vec<Candidate>> {
    config.validate(l.dim())?;
    if config.newton.max_iter == 0 {
        return Ok(Vec::new());
    }
    let system = ResidualSystem::new(l);
    Ok(config.seeds.iter().map(|&s| solve_seed(&system, config, s)).collect())
}

/// Solves and certifies every numerically Einstein candidate.
pub fn search(l: &LieAlgebra, config: &SearchConfig) -> crate::Result<Vec<Candidate>> {
    let system = ResidualSystem::new(l);
    Ok(solve(l, config)?
        .into_iter()
        .map(|c| {
            if c.status == Status::EinsteinNumeric {
                certify(l, &system, &c, &config.reconstruction)
            } else {
                c
            }
        })
        .collect())
}
