//! The reproduction checklist: a manifest of named checks, each computing an
//! observed value that must equal the expected one exactly.

use std::collections::BTreeMap;
use std::time::Instant;

use nilgeom_core::exterior::{format_form, parse_form, KForm};
use nilgeom_core::g2star::{induce, stability_class};
use nilgeom_core::generic::{lemma_suite, Method};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::metric::{einstein_check, ricci, riemann, EinsteinVerdict, PseudoMetric, RicciMode};
use nilgeom_core::search::{SearchConfig, Status};
use nilgeom_core::Scalar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{load_algebra, parse_list, parse_matrix, parse_seeds, parse_signs};
use crate::json::{parse_q, rational};
use crate::report::class_name;
use crate::runner::{around, exact_point, pool, search_seeds};
use crate::{Error, Result};

pub const MANIFEST: &str = include_str!("../data/manifest.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub description: String,
    pub kind: String,
    #[serde(default)]
    pub args: BTreeMap<String, String>,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproCheck {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub verdict: Verdict,
    pub runtime_ms: u64,
}

impl Manifest {
    pub fn builtin() -> Self {
        serde_json::from_str(MANIFEST).expect("bundled manifest")
    }

    pub fn find(&self, id: &str) -> Option<&CheckSpec> {
        self.checks.iter().find(|c| c.id == id || c.aliases.iter().any(|a| a == id))
    }

    /// Checks with the given ids (or aliases), in manifest order.
    pub fn select(&self, ids: &[String]) -> Result<Vec<CheckSpec>> {
        for id in ids {
            if self.find(id).is_none() {
                return Err(Error::Input(format!("unknown check {id:?}")));
            }
        }
        Ok(self
            .checks
            .iter()
            .filter(|c| ids.iter().any(|id| self.find(id).map(|f| f.id == c.id).unwrap_or(false)))
            .cloned()
            .collect())
    }
}

/// Runs `checks` on a pool of `threads` workers (all cores when `None`);
/// results come back in input order.
pub fn run_checks(checks: &[CheckSpec], threads: Option<usize>) -> Result<Vec<ReproCheck>> {
    Ok(pool(threads)?.install(|| checks.par_iter().map(run_check).collect()))
}

pub fn run_check(spec: &CheckSpec) -> ReproCheck {
    let start = Instant::now();
    let outcome = observe(spec).and_then(|obs| Ok((canonical(&spec.kind, &spec.expected)?, obs)));
    let (expected, observed, verdict) = match outcome {
        Ok((expected, observed)) => {
            let v = if expected == observed { Verdict::Pass } else { Verdict::Fail };
            (expected, observed, v)
        }
        Err(e) => (spec.expected.clone(), format!("error: {e}"), Verdict::Fail),
    };
    ReproCheck {
        id: spec.id.clone(),
        description: spec.description.clone(),
        expected,
        observed,
        verdict,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

fn arg<'a>(spec: &'a CheckSpec, key: &str) -> Result<&'a str> {
    spec.args
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Input(format!("check {} needs argument {key:?}", spec.id)))
}

fn form_arg(spec: &CheckSpec, key: &str, dim: usize) -> Result<KForm> {
    Ok(parse_form(arg(spec, key)?, dim, None)?)
}

fn q_text(s: &Scalar) -> String {
    match s.as_rational() {
        Some(x) => rational(x),
        None => format!("{s:?}"),
    }
}

fn matrix_text(m: &Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(q_text).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn metric_arg(spec: &CheckSpec) -> Result<PseudoMetric> {
    if let Some(d) = spec.args.get("diag") {
        Ok(PseudoMetric::diagonal(&parse_list(d)?))
    } else {
        Ok(PseudoMetric::new(parse_matrix(arg(spec, "gram")?)?)?)
    }
}

/// The algebra, rewritten in `coframe` when given.
fn algebra_arg(spec: &CheckSpec) -> Result<LieAlgebra> {
    let l = load_algebra(arg(spec, "algebra")?)?;
    match spec.args.get("coframe") {
        Some(c) => Ok(l.change_of_basis(&parse_matrix(c)?)?),
        None => Ok(l),
    }
}

/// Normal form of an expected value, so that formatting differences in the
/// manifest do not matter.
pub fn canonical(kind: &str, text: &str) -> Result<String> {
    Ok(match kind {
        "ricci-lambda" | "gram-trace" | "signature-trace" | "torsion-norm" | "search-neighborhood" => {
            match text {
                "not-einstein" | "none" => text.into(),
                t => rational(&parse_q(t)?),
            }
        }
        "torsion" | "d-star-phi" | "star-d-star-phi" => {
            let dim = 7;
            format_form(&parse_form(text, dim, None)?, &[])
        }
        "frame-metric" | "ricci-frame" => {
            let m = match text.strip_prefix("diag:") {
                Some(d) => Matrix::diagonal(&parse_list(d)?),
                None => parse_matrix(text)?,
            };
            matrix_text(&m)
        }
        "curvature" => {
            let mut entries = text
                .split_whitespace()
                .map(|t| {
                    let (k, v) = t.split_once('=').ok_or_else(|| Error::Input(format!("bad entry {t:?}")))?;
                    Ok(format!("{k}={}", rational(&parse_q(v)?)))
                })
                .collect::<Result<Vec<_>>>()?;
            entries.sort();
            entries.join(" ")
        }
        _ => text.trim().into(),
    })
}

fn observe(spec: &CheckSpec) -> Result<String> {
    match spec.kind.as_str() {
        "ricci-lambda" => {
            let l = algebra_arg(spec)?;
            let g = metric_arg(spec)?;
            let mode = match spec.args.get("mode").map(String::as_str) {
                Some("nilpotent") => RicciMode::Nilpotent,
                _ => RicciMode::General,
            };
            let ric = ricci(&l, &g, mode)?;
            let lambda = ric[(0, 0)].div(&g.gram()[(0, 0)])?;
            Ok(if ric == g.gram().scale(&lambda) { q_text(&lambda) } else { "not-einstein".into() })
        }
        "gram-trace" => {
            let d = parse_list(arg(spec, "diag")?)?;
            Ok(q_text(&d.iter().fold(Scalar::zero(), |a, x| a.add(x))))
        }
        "signature-trace" => {
            let d = parse_list(arg(spec, "diag")?)?;
            let s: i64 = d.iter().map(|x| if x.is_negative_rational() { -1 } else { 1 }).sum();
            Ok(s.to_string())
        }
        "derived-minus-center" => {
            let r = load_algebra(arg(spec, "algebra")?)?.structure_report();
            Ok((r.derived.dim() as i64 - r.center.dim() as i64).to_string())
        }
        "lemma-suite" => {
            let l = load_algebra(arg(spec, "algebra")?)?;
            let method = match arg(spec, "method")? {
                "expand" => Method::Expand,
                _ => Method::Randomized,
            };
            let seed = arg(spec, "seed")?.parse().map_err(|_| Error::Input("bad seed".into()))?;
            let r = lemma_suite(&l, method, seed)?;
            let failed: Vec<&str> = r
                .checks
                .iter()
                .filter(|c| c.holds != Some(true))
                .map(|c| c.name.as_str())
                .collect();
            Ok(if failed.is_empty() { "all-hold".into() } else { format!("failed: {}", failed.join(", ")) })
        }
        "closed-form" => {
            let l = load_algebra(arg(spec, "algebra")?)?;
            let phi = form_arg(spec, "phi", l.dim())?;
            Ok(if l.d(&phi).is_zero() { "closed" } else { "not-closed" }.into())
        }
        "orbit-class" => Ok(class_name(stability_class(&form_arg(spec, "phi", 7)?)?).into()),
        "frame-metric" => {
            let s = induce(&form_arg(spec, "phi", 7)?)?;
            Ok(matrix_text(s.metric().in_frame(&parse_matrix(arg(spec, "coframe")?)?).gram()))
        }
        "torsion" | "torsion-norm" | "harmonic" | "closed-harmonic" | "scal-cross-check" | "d-star-phi"
        | "star-d-star-phi" | "einstein-verdict" | "ricci-frame" => {
            let l = load_algebra(arg(spec, "algebra")?)?;
            let s = induce(&form_arg(spec, "phi", l.dim())?)?;
            match spec.kind.as_str() {
                "torsion" => Ok(format_form(&s.torsion_closed(&l)?, &[])),
                "torsion-norm" => {
                    let t = s.torsion_closed(&l)?;
                    Ok(q_text(&s.inner(&t, &t)?))
                }
                "harmonic" => {
                    let h = s.harmonic_report(&l)?;
                    Ok(format!("closed={} coclosed={} harmonic={}", h.closed, h.coclosed, h.harmonic))
                }
                "closed-harmonic" => {
                    let h = s.harmonic_report(&l)?;
                    if !(h.closed && h.harmonic) {
                        return Ok("not closed and harmonic".into());
                    }
                    let tau = s.torsion_closed(&l)?;
                    let dtau = if l.d(&tau).is_zero() { "0" } else { "nonzero" };
                    Ok(format!("scal={} dtau={dtau}", q_text(&s.scal_from_torsion(&l)?)))
                }
                "scal-cross-check" => {
                    let a = s.scal_from_torsion(&l)?;
                    let b = einstein_check(&l, s.metric())?.scal;
                    Ok(if a == b { format!("equal:{}", q_text(&a)) } else { format!("differ:{}/{}", q_text(&a), q_text(&b)) })
                }
                "d-star-phi" => Ok(format_form(&l.d(&s.star_phi()), &[])),
                "star-d-star-phi" => Ok(format_form(&s.star(&l.d(&s.star_phi())), &[])),
                "einstein-verdict" => {
                    let e = einstein_check(&l, s.metric())?;
                    Ok(match e.verdict {
                        EinsteinVerdict::Einstein(lambda) => format!("einstein:{}", q_text(&lambda)),
                        EinsteinVerdict::NotEinstein => format!("not-einstein scal={}", q_text(&e.scal)),
                    })
                }
                _ => {
                    let frame = parse_matrix(arg(spec, "coframe")?)?;
                    let ric = ricci(&l, s.metric(), RicciMode::General)?;
                    Ok(matrix_text(&frame.transpose().mul(&ric).mul(&frame)))
                }
            }
        }
        "curvature" => {
            let l = algebra_arg(spec)?;
            let r = riemann(&l, &metric_arg(spec)?)?;
            let mut entries: Vec<String> = r
                .independent_nonzero()
                .into_iter()
                .map(|((i, j, k, m), v)| format!("R{}{}{}{}={}", i + 1, j + 1, k + 1, m + 1, q_text(&v)))
                .collect();
            entries.sort();
            Ok(entries.join(" "))
        }
        "search-neighborhood" => search_neighborhood(spec),
        "search-nonzero-lambda" => {
            let l = load_algebra(arg(spec, "algebra")?)?;
            let config = SearchConfig::new(parse_signs(arg(spec, "signs")?)?, parse_seeds(arg(spec, "seeds")?)?);
            let bad: Vec<String> = search_seeds(&l, &config)?
                .iter()
                .filter_map(|c| match &c.status {
                    Status::EinsteinCertified(lambda) if *lambda != nilgeom_core::Q::from_integer(0.into()) => {
                        Some(format!("seed {}: {}", c.seed, rational(lambda)))
                    }
                    _ => None,
                })
                .collect();
            Ok(if bad.is_empty() { "none".into() } else { bad.join("; ") })
        }
        other => Err(Error::Input(format!("unknown check kind {other:?}"))),
    }
}

/// Multi-start search around the point given by `coframe` and `diag`, with
/// its zero frame entries held fixed. Observes the common certified λ.
fn search_neighborhood(spec: &CheckSpec) -> Result<String> {
    let l = load_algebra(arg(spec, "algebra")?)?;
    let diag = parse_list(arg(spec, "diag")?)?;
    let exact = exact_point(&l, &parse_matrix(arg(spec, "coframe")?)?, &diag)?;
    let radius: f64 = arg(spec, "radius")?.parse().map_err(|_| Error::Input("bad radius".into()))?;
    let signs = diag.iter().map(|d| if d.is_negative_rational() { -1 } else { 1 }).collect();
    let mut config = SearchConfig::new(signs, parse_seeds(arg(spec, "seeds")?)?);
    config.newton.residual_tol = 1e-13;
    around(&l, &mut config, &exact, radius);
    let mut lambdas: Vec<String> = search_seeds(&l, &config)?
        .iter()
        .map(|c| match &c.status {
            Status::EinsteinCertified(lambda) if c.certification.as_ref().and_then(|x| x.exact.as_ref()) == Some(&exact) => {
                rational(lambda)
            }
            other => format!("seed {}: {:?}", c.seed, other),
        })
        .collect();
    lambdas.dedup();
    Ok(if lambdas.len() == 1 { lambdas.remove(0) } else { lambdas.join("; ") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parses_and_ids_are_unique() {
        let m = Manifest::builtin();
        let mut ids: Vec<&str> = m.checks.iter().flat_map(|c| std::iter::once(c.id.as_str()).chain(c.aliases.iter().map(String::as_str))).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        for c in &m.checks {
            canonical(&c.kind, &c.expected).unwrap();
        }
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(Manifest::builtin().select(&["no-such-check".into()]).is_err());
    }
}
