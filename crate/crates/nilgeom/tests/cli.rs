use std::io::Write;

use nilgeom::cli::run;
use nilgeom::report::{CandidateJson, G2Report, LemmaReportJson, MetricReport};

const LAMBDA: &str = "48661191875666868481/659081523200000000000";
const EINSTEIN_FRAME: &str = "1,0,0,0,0,0,0; 0,1,0,0,0,0,0; 0,-26/51,1,0,0,0,0; 0,-2300/2601,-26/51,1,0,0,0; \
                              0,0,-2300/2601,46/51,1,0,0; 0,0,0,-2300/2601,0,1,0; 0,0,0,0,0,-50/51,1";
const EINSTEIN_DIAG: &str = "71639296000000000/168377826559400929, -1946720000000/2015993900449, \
                             -2116000000/6975757441, 21160000/24137569, -115000/250563, -600/289, 1";

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("nilgeom").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn harmonic_example_on_n() {
    let n = data("n.alg");
    let phi = "e123+1/2*e257+e167+e347-e456";
    let (code, text) = cli(&["g2", "harmonic", "--algebra", &n, "--phi", phi]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("closed=true coclosed=false harmonic=true"), "{text}");

    let (code, text) = cli(&["--json", "g2", "harmonic", "--algebra", &n, "--phi", phi]);
    assert_eq!(code, 0);
    let r: G2Report = serde_json::from_str(&text).unwrap();
    assert_eq!((r.closed, r.coclosed, r.harmonic), (Some(true), Some(false), Some(true)));
    assert_eq!(r.class, "indefinite");
}

#[test]
fn reproduce_by_alias_and_exit_codes() {
    let manifest = nilgeom::repro::Manifest::builtin();
    let aliased = manifest.checks.iter().find(|c| c.kind == "ricci-lambda" && !c.aliases.is_empty()).unwrap();
    let (code, text) = cli(&["paper", "reproduce", "--check", &aliased.aliases[0]]);
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("PASS") && text.contains(LAMBDA), "{text}");

    let (code, text) = cli(&["paper", "reproduce", "--check", "gram-trace"]);
    assert_eq!(code, 1, "{text}");
    assert!(text.starts_with("FAIL"));

    assert_eq!(cli(&["paper", "reproduce", "--check", "no-such-check"]).0, 2);
    assert_eq!(cli(&["paper", "reproduce"]).0, 2);
    let (code, text) = cli(&["paper", "reproduce", "--list"]);
    assert_eq!(code, 0);
    assert!(text.lines().count() > 20);
}

#[test]
fn usage_errors_exit_with_two() {
    let (code, text) = cli(&["--bogus"]);
    assert_eq!(code, 2);
    assert!(text.contains("Usage"), "{text}");
    assert_eq!(cli(&[]).0, 2);
    assert_eq!(cli(&["metric", "ricci", "--algebra", "0,0,12"]).0, 2);
    assert_eq!(cli(&["algebra", "check", "0,0,12,34"]).0, 2);
    assert_eq!(cli(&["algebra", "check", "/no/such/file"]).0, 2);
    assert_eq!(cli(&["g2", "induce", "--phi", "e12 + x"]).0, 2);
    assert_eq!(cli(&["search", "einstein", "--algebra", "0,0,12", "--signs", "+,-"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn algebra_check_reads_files_with_comments() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# the Einstein algebra\n0,0,12,13,\n14,15+23,16+23+24").unwrap();
    let path = f.path().to_str().unwrap();
    let (code, text) = cli(&["algebra", "check", path]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("nilpotent: yes, 6-step"), "{text}");
    let (code, text) = cli(&["--json", "algebra", "check", path]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["dim"], 7);
    assert_eq!(v["report"]["derived_dim"].as_u64().unwrap() - v["report"]["center_dim"].as_u64().unwrap(), 4);
}

#[test]
fn metric_commands() {
    let g = data("g.alg");
    let base = ["--algebra", g.as_str(), "--coframe", EINSTEIN_FRAME, "--diag", EINSTEIN_DIAG];
    for mode in ["general", "nilpotent"] {
        let mut args = vec!["--json", "metric", "einstein"];
        args.extend(base);
        args.extend(["--mode", mode]);
        let (code, text) = cli(&args);
        assert_eq!(code, 0, "{text}");
        let r: MetricReport = serde_json::from_str(&text).unwrap();
        assert_eq!(r.lambda, Some(nilgeom::json::ScalarJson::Rational(LAMBDA.into())));
        assert_eq!(r.signature, (3, 4));
    }
    let (code, text) = cli(&["metric", "einstein", "--algebra", &g, "--diag", "-1,-1,-1,-1,1,1,1"]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("einstein: no"));
    let (code, _) = cli(&["metric", "ricci", "--algebra", &g, "--diag", "-1,-1,-1,-1,1,1,1"]);
    assert_eq!(code, 0);
}

#[test]
fn g2_induce_and_torsion() {
    let phi = "e137 + 2*e156 - 2*e157 + e235 - e237 + e246 + e345";
    let (code, text) = cli(&["--json", "g2", "induce", "--phi", phi]);
    assert_eq!(code, 0);
    let r: G2Report = serde_json::from_str(&text).unwrap();
    assert!(r.stable && r.closed.is_none());
    let (code, text) = cli(&["g2", "induce", "--phi", "e123"]);
    assert_eq!(code, 1);
    assert!(text.contains("stable: no"));
    let (code, text) = cli(&["g2", "torsion", "--algebra", &data("g.alg"), "--phi", phi]);
    assert_eq!(code, 0);
    assert!(text.contains("tau2: -5/2*e12 + 3/2*e13 - e14 - e15 + e23"), "{text}");
    assert!(text.contains("scal: 0"), "{text}");
}

#[test]
fn lemmas_verify() {
    let (code, text) = cli(&["--json", "--method", "randomized", "--seed", "2024", "lemmas", "verify", "--algebra", &data("g.alg")]);
    assert_eq!(code, 0, "{text}");
    let r: LemmaReportJson = serde_json::from_str(&text).unwrap();
    assert!(r.all_hold);
    assert_eq!(r.parameters.len(), 18);
    let (code, text) = cli(&["lemmas", "verify", "--algebra", &data("n.alg")]);
    assert_eq!(code, 0);
    assert!(text.contains("not applicable"));
}

#[test]
fn search_einstein_reports_candidates() {
    let g = data("g.alg");
    let (code, text) = cli(&["--json", "search", "einstein", "--algebra", &g, "--signs", "+,-,-,+,-,-,+", "--seeds", "0..4", "--max-iter", "0"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Vec<CandidateJson>>(&text).unwrap(), vec![]);

    let (code, text) = cli(&[
        "--json", "--tol", "1e-13", "search", "einstein", "--algebra", &g, "--signs", "+,-,-,+,-,-,+", "--seeds", "0..2",
        "--around-coframe", EINSTEIN_FRAME, "--around-diag", EINSTEIN_DIAG, "--threads", "2",
    ]);
    assert_eq!(code, 0, "{text}");
    let found: Vec<CandidateJson> = serde_json::from_str(&text).unwrap();
    assert_eq!(found.iter().map(|c| c.seed).collect::<Vec<_>>(), vec![0, 1]);
    for c in &found {
        assert_eq!(c.status, "einstein-certified");
        assert_eq!(c.lambda.as_deref(), Some(LAMBDA));
        assert_eq!(c.labels.len(), 28);
        assert_eq!(c.exact.as_ref().unwrap()[2], "-26/51");
    }
}
