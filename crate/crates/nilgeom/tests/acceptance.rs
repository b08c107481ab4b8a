//! One PASS/FAIL line per acceptance criterion (run without the libtest
//! harness so the lines always print). Criteria known to be
//! unattainable are listed in `KNOWN_RED`; the test fails if the observed red
//! set differs from it in either direction.

use std::time::{Duration, Instant};

use nilgeom::repro::{run_checks, Manifest, ReproCheck, Verdict};
use nilgeom_core::catalog::{self, form};
use nilgeom_core::exterior::{subsets, HodgeStar, KForm, Vector};
use nilgeom_core::g2star::induce;
use nilgeom_core::generic::{closed_form_space, lemma_suite, Certificate, Method};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::metric::{einstein_check, ricci, riemann, PseudoMetric, RicciMode};
use nilgeom_core::scalar::{q, Q};
use nilgeom_core::Scalar;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

/// The sum of the Gram diagonal is about -1.502, not -1; the sign trace of an
/// orthonormal frame is -1 and is checked separately by the manifest.
const KNOWN_RED: [usize; 1] = [2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn checks(ids: &[&str]) -> Vec<ReproCheck> {
    let m = Manifest::builtin();
    let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
    run_checks(&m.select(&ids).unwrap(), Some(1)).unwrap()
}

fn from_checks(ids: &[&str]) -> Outcome {
    let results = checks(ids);
    let failed: Vec<String> = results
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .map(|r| format!("{}: expected {}, observed {}", r.id, r.expected, r.observed))
        .collect();
    Outcome {
        pass: failed.is_empty() && results.len() == ids.len(),
        detail: if failed.is_empty() { format!("{} checks", results.len()) } else { failed.join("; ") },
    }
}

fn einstein_constant() -> Outcome {
    from_checks(&["einstein-constant", "einstein-constant-nilpotent"])
}

fn trace_identity() -> Outcome {
    from_checks(&["gram-trace"])
}

fn lemma_suite_on_g() -> Outcome {
    let r = lemma_suite(&catalog::einstein_algebra(), Method::Randomized, 2024).unwrap();
    let mut bad: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.applicable || c.holds != Some(true))
        .map(|c| c.name.clone())
        .collect();
    let minors: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("det")).collect();
    for m in &minors {
        if !matches!(m.certificate, Some(Certificate::Randomized { witness: None, .. })) {
            bad.push(format!("{}: no randomized certificate", m.name));
        }
    }
    if r.family.dimension() != 18 || minors.len() != 2 {
        bad.push(format!("{} parameters, {} minors", r.family.dimension(), minors.len()));
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("{} identities hold", r.checks.len()) } else { bad.join("; ") },
    }
}

fn closed_structure_on_g() -> Outcome {
    from_checks(&["closed-phi", "closed-phi-class", "closed-phi-frame"])
}

fn harmonic_example_on_g() -> Outcome {
    from_checks(&[
        "closed-phi-torsion",
        "closed-phi-torsion-norm",
        "closed-phi-harmonic",
        "closed-phi-ricci",
        "closed-phi-not-einstein",
    ])
}

fn ricci_flat_example_on_n() -> Outcome {
    from_checks(&[
        "closed-psi-d-star",
        "closed-psi-star-d-star",
        "closed-psi-harmonic",
        "closed-psi-ricci-flat",
        "closed-psi-curvature",
    ])
}

/// Closed stable forms on g near the catalog form, moved in a few random
/// parameters of the closed family.
fn closed_deformations(count: usize) -> Vec<KForm> {
    let l = catalog::einstein_algebra();
    let family = closed_form_space(&l, 3);
    let base = family.coordinates_of(&form(catalog::CLOSED_PHI)).unwrap();
    let mut runner = TestRunner::deterministic();
    let shifts = prop::collection::vec((0u8..3, -3i64..=3, 1i64..=3), base.len());
    let mut out = Vec::new();
    while out.len() < count {
        let draw = shifts.new_tree(&mut runner).unwrap().current();
        let point: Vec<Q> = base
            .iter()
            .zip(draw)
            .map(|(b, (pick, n, d))| if pick == 0 { b + q(n, d) } else { b.clone() })
            .collect();
        let phi = family.specialize(&point);
        if induce(&phi).is_ok() {
            out.push(phi);
        }
    }
    out
}

fn scal_cross_check() -> Outcome {
    let base = from_checks(&["scal-cross-check-g", "scal-cross-check-n"]);
    let l = catalog::einstein_algebra();
    let mut bad = Vec::new();
    let forms = closed_deformations(8);
    for (i, phi) in forms.iter().enumerate() {
        let s = induce(phi).unwrap();
        let a = s.scal_from_torsion(&l).unwrap();
        let b = einstein_check(&l, s.metric()).unwrap().scal;
        if a != b {
            bad.push(format!("deformation {i}: {a:?} vs {b:?}"));
        }
    }
    Outcome {
        pass: base.pass && bad.is_empty(),
        detail: format!("{}; {} random closed structures{}", base.detail, forms.len(), if bad.is_empty() { String::new() } else { format!(": {}", bad.join("; ")) }),
    }
}

fn closed_harmonic_property() -> Outcome {
    let base = from_checks(&["closed-harmonic-g", "closed-harmonic-n"]);
    let l = catalog::einstein_algebra();
    let mut bad = Vec::new();
    let mut harmonic = 0;
    for (i, phi) in closed_deformations(8).iter().enumerate() {
        let s = induce(phi).unwrap();
        if !s.harmonic_report(&l).unwrap().harmonic {
            continue;
        }
        harmonic += 1;
        let tau = s.torsion_closed(&l).unwrap();
        if !l.d(&tau).is_zero() || !s.scal_from_torsion(&l).unwrap().is_zero() {
            bad.push(format!("deformation {i}"));
        }
    }
    Outcome {
        pass: base.pass && bad.is_empty() && harmonic > 0,
        detail: format!("{}; {harmonic} harmonic deformations{}", base.detail, if bad.is_empty() { String::new() } else { format!(", violated by {}", bad.join(", ")) }),
    }
}

fn search_replication() -> Outcome {
    from_checks(&["search-neighborhood", "search-nice-algebra"])
}

fn form_strategy(k: usize) -> impl Strategy<Value = KForm> {
    let count = subsets(7, k).len();
    prop::collection::vec((0..count, -4i64..=4), 0..8).prop_map(move |terms| {
        let masks = subsets(7, k);
        terms.into_iter().fold(KForm::zero(7, k), |acc, (i, c)| {
            acc.add(&KForm::from_masks(7, k, [(masks[i], Scalar::int(c))]))
        })
    })
}

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

/// Mᵀ diag(±s²) M for unit lower-triangular M, four negative signs and three
/// positive; also returns Π s.
fn signature_metric() -> impl Strategy<Value = (Matrix, Scalar)> {
    (
        prop::collection::vec(rational(), 21),
        prop::collection::vec(1i64..=4, 7),
        Just([-1i64, -1, -1, -1, 1, 1, 1]).prop_shuffle(),
    )
        .prop_map(|(entries, s, signs)| {
            let mut m = Matrix::identity(7);
            let mut it = entries.into_iter();
            for a in 0..7 {
                for b in 0..a {
                    m[(a, b)] = Scalar::Rational(it.next().unwrap());
                }
            }
            let d = Matrix::diagonal(&(0..7).map(|i| Scalar::int(signs[i] * s[i] * s[i])).collect::<Vec<_>>());
            let vol = s.iter().fold(Scalar::one(), |acc, x| acc.mul(&Scalar::int(*x)));
            (m.transpose().mul(&d).mul(&m), vol)
        })
}

fn summary<T: std::fmt::Debug>(e: TestError<T>) -> String {
    let text = format!("{e}");
    text.chars().take(300).collect()
}

fn runner() -> TestRunner {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(200)
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn property_suites() -> Outcome {
    let algebras: Vec<LieAlgebra> = vec![catalog::einstein_algebra(), catalog::ricci_flat_algebra()];
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let pick = 0usize..2;

    record(
        "d squared",
        runner()
            .run(&(form_strategy(1), form_strategy(2), form_strategy(3), pick.clone()), |(a, b, c, w)| {
                for f in [&a, &b, &c] {
                    prop_assert!(algebras[w].d(&algebras[w].d(f)).is_zero());
                }
                Ok(())
            })
            .map_err(summary),
    );
    record(
        "star star",
        runner()
            .run(&(signature_metric(), (0usize..=7).prop_flat_map(form_strategy)), |((gram, vol), a)| {
                let star = HodgeStar::from_metric(&gram, vol).unwrap();
                prop_assert_eq!(star.star(&star.star(&a)), a);
                Ok(())
            })
            .map_err(summary),
    );
    record(
        "wedge and contraction",
        runner()
            .run(
                &(form_strategy(3), form_strategy(2), prop::collection::vec(rational(), 7)),
                |(a, b, v)| {
                    let v = Vector::new(v.into_iter().map(Scalar::Rational).collect());
                    let lhs = a.wedge(&b).unwrap().contract(&v).unwrap();
                    let rhs = a.contract(&v).unwrap().wedge(&b).unwrap().sub(&a.wedge(&b.contract(&v).unwrap()).unwrap());
                    prop_assert_eq!(lhs, rhs);
                    // degrees 3 and 2: the product commutes
                    prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
                    prop_assert!(a.contract(&v).unwrap().contract(&v).unwrap().is_zero());
                    Ok(())
                },
            )
            .map_err(summary),
    );
    record(
        "curvature symmetries",
        runner()
            .run(&(signature_metric(), pick.clone()), |((gram, _), w)| {
                let r = riemann(&algebras[w], &PseudoMetric::new(gram).unwrap()).unwrap();
                prop_assert!(r.has_symmetries());
                Ok(())
            })
            .map_err(summary),
    );
    record(
        "ricci modes",
        runner()
            .run(&(signature_metric(), pick), |((gram, _), w)| {
                let g = PseudoMetric::new(gram).unwrap();
                let general = ricci(&algebras[w], &g, RicciMode::General).unwrap();
                prop_assert_eq!(ricci(&algebras[w], &g, RicciMode::Nilpotent).unwrap(), general);
                Ok(())
            })
            .map_err(summary),
    );
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() { "5 suites x 200 cases".into() } else { failures.join("; ") },
    }
}

fn main() {
    let criteria: Vec<(usize, &str, Duration, fn() -> Outcome)> = vec![
        (1, "Einstein constant in both Ricci modes", Duration::from_secs(5), einstein_constant),
        (2, "Gram diagonal sums to -1", Duration::from_secs(1), trace_identity),
        (3, "identity suite for generic closed 3-forms", Duration::from_secs(60), lemma_suite_on_g),
        (4, "closed indefinite G2* form on g", Duration::from_secs(5), closed_structure_on_g),
        (5, "closed harmonic example on g", Duration::from_secs(10), harmonic_example_on_g),
        (6, "Ricci-flat non-flat example on n", Duration::from_secs(10), ricci_flat_example_on_n),
        (7, "scalar curvature from torsion", Duration::from_secs(600), scal_cross_check),
        (8, "closed harmonic implies scal = 0 and d tau = 0", Duration::from_secs(600), closed_harmonic_property),
        (9, "search replication", Duration::from_secs(600), search_replication),
        (10, "property suites", Duration::from_secs(120), property_suites),
    ];
    let mut red = Vec::new();
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= limit;
        println!(
            "criterion {n:>2} {}: {name} ({} ms, limit {} s): {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_millis(),
            limit.as_secs(),
            outcome.detail
        );
        if !pass {
            red.push(n);
        }
    }
    if red != KNOWN_RED {
        eprintln!("red criteria {red:?} differ from the known set {KNOWN_RED:?}");
        std::process::exit(1);
    }
    println!("red criteria match the known set {KNOWN_RED:?}");
}
