//! Parallel drivers over the core search.

use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::search::{search, Candidate, ResidualSystem, SearchConfig, StartRegion};
use nilgeom_core::{Scalar, Q};
use rayon::prelude::*;

use crate::{Error, Result};

pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder.build().map_err(|e| Error::Input(e.to_string()))
}

/// [`search`] with one task per seed on a pool of `threads` workers;
/// candidates come back in seed order.
pub fn search_parallel(l: &LieAlgebra, config: &SearchConfig, threads: Option<usize>) -> Result<Vec<Candidate>> {
    pool(threads)?.install(|| search_seeds(l, config))
}

/// [`search`] with one task per seed on the current rayon pool.
pub fn search_seeds(l: &LieAlgebra, config: &SearchConfig) -> Result<Vec<Candidate>> {
    config.validate(l.dim())?;
    let runs: Vec<Result<Vec<Candidate>>> = config
        .seeds
        .par_iter()
        .map(|&s| {
            let one = SearchConfig {
                seeds: vec![s],
                ..config.clone()
            };
            Ok(search(l, &one)?)
        })
        .collect();
    let mut out = Vec::with_capacity(config.seeds.len());
    for r in runs {
        out.extend(r?);
    }
    Ok(out)
}

/// Exact unknowns of the unit lower-triangular `coframe` with diagonal metric
/// `diag`.
pub fn exact_point(l: &LieAlgebra, coframe: &Matrix, diag: &[Scalar]) -> Result<Vec<Q>> {
    ResidualSystem::new(l)
        .parametrization()
        .pack(coframe, diag)
        .ok_or_else(|| Error::Input("coframe must be unit lower triangular and all entries rational".into()))
}

/// Restricts `config` to a box of relative `radius` around `point`, holding
/// the frame entries that vanish there.
pub fn around(l: &LieAlgebra, config: &mut SearchConfig, point: &[Q], radius: f64) {
    let values: Vec<f64> = point.iter().map(|x| Scalar::Rational(x.clone()).to_f64().unwrap_or(f64::NAN)).collect();
    let frame = ResidualSystem::new(l).parametrization().frame_unknowns();
    config.pinned = (0..frame).filter(|&i| values[i] == 0.0).collect();
    config.start = StartRegion::Around { point: values, radius };
}
