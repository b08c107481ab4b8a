//! JSON reports emitted by the CLI.

use nilgeom_core::g2star::{G2StarStructure, OrbitClass};
use nilgeom_core::generic::{Certificate, LemmaReport};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::metric::{EinsteinReport, EinsteinVerdict, PseudoMetric};
use nilgeom_core::search::{Candidate, Status};
use serde::{Deserialize, Serialize};

use crate::json::{form, matrix, rational, scalar, FormJson, MatrixJson, ScalarJson};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub structure: String,
    pub dim: usize,
    pub nilpotent: bool,
    pub step: Option<usize>,
    pub unimodular: bool,
    pub killing_zero: bool,
    pub nice_basis: bool,
    pub derived_dim: usize,
    pub center_dim: usize,
    pub lower_central_series: Vec<usize>,
}

impl AlgebraReport {
    pub fn of(l: &LieAlgebra) -> Self {
        let s = l.structure_report();
        AlgebraReport {
            structure: l.structure_text(),
            dim: l.dim(),
            nilpotent: s.nilpotent,
            step: s.step,
            unimodular: s.unimodular,
            killing_zero: s.killing_zero,
            nice_basis: l.is_nice_basis(),
            derived_dim: s.derived.dim(),
            center_dim: s.center.dim(),
            lower_central_series: s.lower_central_series,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub gram: MatrixJson,
    /// (#positive, #negative).
    pub signature: (usize, usize),
    pub ricci: MatrixJson,
    pub lambda: Option<ScalarJson>,
    pub scal: ScalarJson,
}

impl MetricReport {
    pub fn of(g: &PseudoMetric, e: &EinsteinReport) -> Self {
        MetricReport {
            gram: matrix(g.gram()),
            signature: g.signature(),
            ricci: matrix(&e.ricci),
            lambda: match &e.verdict {
                EinsteinVerdict::Einstein(l) => Some(scalar(l)),
                EinsteinVerdict::NotEinstein => None,
            },
            scal: scalar(&e.scal),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionJson {
    pub tau0: ScalarJson,
    pub tau1: FormJson,
    pub tau2: FormJson,
    pub tau3: FormJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Report {
    pub stable: bool,
    pub class: String,
    pub gram: Option<MatrixJson>,
    pub vol_coefficient: Option<ScalarJson>,
    pub star_phi: Option<FormJson>,
    pub closed: Option<bool>,
    pub coclosed: Option<bool>,
    pub harmonic: Option<bool>,
    pub torsion: Option<TorsionJson>,
    pub scal: Option<ScalarJson>,
}

pub fn class_name(c: OrbitClass) -> &'static str {
    match c {
        OrbitClass::PositiveDefinite => "positive-definite",
        OrbitClass::Indefinite => "indefinite",
        OrbitClass::Degenerate => "degenerate",
    }
}

impl G2Report {
    pub fn unstable() -> Self {
        G2Report {
            stable: false,
            class: class_name(OrbitClass::Degenerate).into(),
            gram: None,
            vol_coefficient: None,
            star_phi: None,
            closed: None,
            coclosed: None,
            harmonic: None,
            torsion: None,
            scal: None,
        }
    }

    /// The pointwise data of `s`; with an algebra, also torsion and harmonicity.
    pub fn of(s: &G2StarStructure, l: Option<&LieAlgebra>) -> Result<Self> {
        let mut r = G2Report {
            stable: true,
            class: class_name(s.orbit_class()).into(),
            gram: Some(matrix(s.metric().gram())),
            vol_coefficient: Some(scalar(s.volume_coefficient())),
            star_phi: Some(form(&s.star_phi(), &[])),
            ..G2Report::unstable()
        };
        if let Some(l) = l {
            let h = s.harmonic_report(l)?;
            let t = s.torsion_forms(l)?;
            r.closed = Some(h.closed);
            r.coclosed = Some(h.coclosed);
            r.harmonic = Some(h.harmonic);
            r.torsion = Some(TorsionJson {
                tau0: scalar(&t.tau0),
                tau1: form(&t.tau1, &[]),
                tau2: form(&t.tau2, &[]),
                tau3: form(&t.tau3, &[]),
            });
            if h.closed {
                r.scal = Some(scalar(&s.scal_from_torsion(l)?));
            }
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum CertificateJson {
    Expand {
        terms: usize,
    },
    Randomized {
        seed: u64,
        points: usize,
        degree_bound: u32,
        sample_bits: u32,
        /// log₂ of the false-zero bound; null when the bound is 0 (constant
        /// polynomial).
        failure_log2: Option<f64>,
        witness: Option<Vec<String>>,
    },
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Expanded { terms } => CertificateJson::Expand { terms: *terms },
            Certificate::Randomized {
                seed,
                points,
                degree_bound,
                sample_bits,
                failure_log2,
                witness,
            } => CertificateJson::Randomized {
                seed: *seed,
                points: *points,
                degree_bound: *degree_bound,
                sample_bits: *sample_bits,
                failure_log2: failure_log2.is_finite().then_some(*failure_log2),
                witness: witness.as_ref().map(|w| w.iter().map(rational).collect()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheckJson {
    pub name: String,
    pub applicable: bool,
    pub holds: Option<bool>,
    pub certificate: Option<CertificateJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReportJson {
    pub parameters: Vec<String>,
    pub family: String,
    pub bmatrix: MatrixJson,
    pub degenerate_family: bool,
    pub all_hold: bool,
    pub checks: Vec<LemmaCheckJson>,
}

impl LemmaReportJson {
    pub fn of(r: &LemmaReport) -> Self {
        LemmaReportJson {
            parameters: r.family.names().to_vec(),
            family: r.family.display(),
            bmatrix: matrix(&r.bmatrix),
            degenerate_family: r.degenerate_family,
            all_hold: r.all_hold(),
            checks: r
                .checks
                .iter()
                .map(|c| LemmaCheckJson {
                    name: c.name.clone(),
                    applicable: c.applicable,
                    holds: c.holds,
                    certificate: c.certificate.as_ref().map(CertificateJson::from),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub seed: u64,
    pub status: String,
    pub lambda: Option<String>,
    pub residual: f64,
    pub iterations: usize,
    pub p: Vec<f64>,
    pub diag: Vec<f64>,
    pub labels: Vec<String>,
    /// Reconstructed values of all unknowns, in `labels` order.
    pub exact: Option<Vec<String>>,
    pub obstruction_consistent: Option<bool>,
    pub note: Option<String>,
}

pub fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Degenerate => "degenerate",
        Status::NonEinstein => "non-einstein",
        Status::EinsteinNumeric => "einstein-numeric",
        Status::EinsteinCertified(_) => "einstein-certified",
    }
}

impl CandidateJson {
    pub fn of(c: &Candidate, labels: &[String]) -> Self {
        let cert = c.certification.as_ref();
        CandidateJson {
            seed: c.seed,
            status: status_name(&c.status).into(),
            lambda: match &c.status {
                Status::EinsteinCertified(l) => Some(rational(l)),
                _ => None,
            },
            residual: c.residual,
            iterations: c.iterations,
            p: c.p.clone(),
            diag: c.diag.clone(),
            labels: labels.to_vec(),
            exact: cert.and_then(|c| c.exact.as_ref()).map(|v| v.iter().map(rational).collect()),
            obstruction_consistent: cert.and_then(|c| c.obstruction_consistent),
            note: cert.and_then(|c| c.note.clone()),
        }
    }
}
