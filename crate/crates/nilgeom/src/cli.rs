//! The `nilgeom` command line.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilgeom_core::exterior::{format_form, parse_form};
use nilgeom_core::g2star::{induce, stability_class, OrbitClass};
use nilgeom_core::generic::{lemma_suite, Method};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::metric::{einstein_check, ricci, EinsteinVerdict, PseudoMetric, RicciMode};
use nilgeom_core::search::{SearchConfig, Status};
use nilgeom_core::Scalar;
use serde::Serialize;

use crate::io::{load_algebra, parse_list, parse_matrix, parse_seeds, parse_signs, AlgebraDocument};
use crate::json::rational;
use crate::report::{class_name, status_name, AlgebraReport, CandidateJson, G2Report, LemmaReportJson, MetricReport};
use crate::repro::{run_checks, Manifest, Verdict};
use crate::runner::{around, exact_point, search_parallel};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "nilgeom", version, about = "Exact geometry of left-invariant structures on nilpotent Lie algebras")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Random seed for randomized identity testing.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Residual tolerance of the numeric search.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Identity-testing method.
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Expand,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    Nilpotent,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie algebra structure.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Curvature of left-invariant metrics.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// G₂*-structures from 3-forms.
    #[command(subcommand)]
    G2(G2Cmd),
    /// Identities for generic closed 3-forms.
    #[command(subcommand)]
    Lemmas(LemmasCmd),
    /// Numeric search for Einstein metrics.
    #[command(subcommand)]
    Search(SearchCmd),
    /// The reproduction checklist.
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Validate an algebra and report its structure.
    Check {
        /// Algebra file or inline structure equations.
        algebra: String,
    },
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long)]
    pub algebra: String,
    /// Gram matrix: rows separated by `;`.
    #[arg(long, conflicts_with = "diag", required_unless_present = "diag")]
    pub gram: Option<String>,
    /// Diagonal Gram matrix.
    #[arg(long, allow_hyphen_values = true)]
    pub diag: Option<String>,
    /// Coframe the metric is given in: row p expresses e^p in the new covectors.
    #[arg(long)]
    pub coframe: Option<String>,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
}

#[derive(Debug, Subcommand)]
pub enum MetricCmd {
    /// Ricci tensor.
    Ricci(MetricArgs),
    /// Einstein test; exit 1 when the metric is not Einstein.
    Einstein(MetricArgs),
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long)]
    pub algebra: String,
    /// 3-form literal such as "e123 + 1/2*e257".
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
}

#[derive(Debug, Subcommand)]
pub enum G2Cmd {
    /// Induced metric, orientation and Hodge dual; exit 1 for unstable forms.
    Induce {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Torsion forms.
    Torsion(FormArgs),
    /// Closed, coclosed and harmonic flags; exit 1 unless harmonic.
    Harmonic(FormArgs),
}

#[derive(Debug, Subcommand)]
pub enum LemmasCmd {
    /// Run the identity suite on the generic closed 3-form.
    Verify {
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub algebra: String,
    /// Sign pattern of the diagonal metric, e.g. "-,-,-,-,+,+,+".
    #[arg(long, allow_hyphen_values = true)]
    pub signs: String,
    /// Seeds: "a..b", "a..=b" or a list.
    #[arg(long, default_value = "0..16")]
    pub seeds: String,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Start near this unit lower-triangular coframe (needs --around-diag).
    #[arg(long, requires = "around_diag")]
    pub around_coframe: Option<String>,
    #[arg(long, requires = "around_coframe", allow_hyphen_values = true)]
    pub around_diag: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    pub radius: f64,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SearchCmd {
    /// Multi-start search; certified candidates carry exact values.
    Einstein(SearchArgs),
}

#[derive(Debug, Subcommand)]
pub enum PaperCmd {
    /// Run checks from the manifest; exit 1 if any fails.
    Reproduce {
        #[arg(long, conflicts_with = "check", required_unless_present_any = ["check", "list"])]
        all: bool,
        /// Check id or alias; may be repeated.
        #[arg(long)]
        check: Vec<String>,
        /// List the checks without running them.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn q_text(s: &Scalar) -> String {
    match s.as_rational() {
        Some(x) => rational(x),
        None => format!("{s:?}"),
    }
}

fn matrix_lines(m: &nilgeom_core::linalg::Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]", r.iter().map(q_text).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Algebra(AlgebraCmd::Check { algebra }) => algebra_check(cli, algebra, out),
        Command::Metric(MetricCmd::Ricci(a)) => metric(cli, a, false, out),
        Command::Metric(MetricCmd::Einstein(a)) => metric(cli, a, true, out),
        Command::G2(G2Cmd::Induce { phi }) => g2_induce(cli, phi, out),
        Command::G2(G2Cmd::Torsion(a)) => g2_torsion(cli, a, out),
        Command::G2(G2Cmd::Harmonic(a)) => g2_harmonic(cli, a, out),
        Command::Lemmas(LemmasCmd::Verify { algebra }) => lemmas(cli, algebra, out),
        Command::Search(SearchCmd::Einstein(a)) => search_einstein(cli, a, out),
        Command::Paper(PaperCmd::Reproduce { all, check, list, threads }) => reproduce(cli, *all, check, *list, *threads, out),
    }
}

fn algebra_check(cli: &Cli, arg: &str, out: &mut dyn Write) -> Result<i32> {
    let l = load_algebra(arg)?;
    let r = AlgebraReport::of(&l);
    if cli.json {
        #[derive(Serialize)]
        struct Doc {
            algebra: AlgebraDocument,
            report: AlgebraReport,
        }
        emit(out, &Doc { algebra: AlgebraDocument::of(&l), report: r })?;
    } else {
        writeln!(out, "algebra: {}", r.structure)?;
        writeln!(out, "dimension: {}", r.dim)?;
        match r.step {
            Some(s) if r.nilpotent => writeln!(out, "nilpotent: yes, {s}-step")?,
            _ => writeln!(out, "nilpotent: no")?,
        }
        writeln!(out, "lower central series dims: {:?}", r.lower_central_series)?;
        writeln!(out, "derived algebra dim: {}", r.derived_dim)?;
        writeln!(out, "center dim: {}", r.center_dim)?;
        writeln!(out, "unimodular: {}", r.unimodular)?;
        writeln!(out, "Killing form zero: {}", r.killing_zero)?;
        writeln!(out, "nice basis: {}", r.nice_basis)?;
    }
    Ok(0)
}

fn metric_of(a: &MetricArgs, dim: usize) -> Result<PseudoMetric> {
    let g = match (&a.gram, &a.diag) {
        (Some(m), _) => PseudoMetric::new(parse_matrix(m)?)?,
        (None, Some(d)) => PseudoMetric::diagonal(&parse_list(d)?),
        (None, None) => return Err(Error::Input("--gram or --diag is required".into())),
    };
    if g.dim() != dim {
        return Err(Error::Input(format!("metric of size {} for a {dim}-dimensional algebra", g.dim())));
    }
    Ok(g)
}

fn algebra_in_frame(algebra: &str, coframe: Option<&String>) -> Result<LieAlgebra> {
    let l = load_algebra(algebra)?;
    match coframe {
        Some(c) => Ok(l.change_of_basis(&parse_matrix(c)?)?),
        None => Ok(l),
    }
}

fn metric(cli: &Cli, a: &MetricArgs, einstein: bool, out: &mut dyn Write) -> Result<i32> {
    let l = algebra_in_frame(&a.algebra, a.coframe.as_ref())?;
    let g = metric_of(a, l.dim())?;
    let mode = match a.mode {
        ModeArg::General => RicciMode::General,
        ModeArg::Nilpotent => RicciMode::Nilpotent,
    };
    let mut report = einstein_check(&l, &g)?;
    if mode == RicciMode::Nilpotent {
        report.ricci = ricci(&l, &g, mode)?;
    }
    let is_einstein = matches!(report.verdict, EinsteinVerdict::Einstein(_));
    if cli.json {
        emit(out, &MetricReport::of(&g, &report))?;
    } else {
        let (p, n) = g.signature();
        writeln!(out, "signature: ({p}, {n})")?;
        writeln!(out, "ricci:\n{}", matrix_lines(&report.ricci))?;
        writeln!(out, "scal: {}", q_text(&report.scal))?;
        match &report.verdict {
            EinsteinVerdict::Einstein(lambda) => writeln!(out, "einstein: yes, lambda = {}", q_text(lambda))?,
            EinsteinVerdict::NotEinstein => writeln!(out, "einstein: no")?,
        }
    }
    Ok(if einstein { code(is_einstein) } else { 0 })
}

fn g2_induce(cli: &Cli, phi: &str, out: &mut dyn Write) -> Result<i32> {
    let phi = parse_form(phi, 7, Some(3))?;
    if stability_class(&phi)? == OrbitClass::Degenerate {
        if cli.json {
            emit(out, &G2Report::unstable())?;
        } else {
            writeln!(out, "stable: no")?;
        }
        return Ok(1);
    }
    let s = induce(&phi)?;
    if cli.json {
        emit(out, &G2Report::of(&s, None)?)?;
    } else {
        writeln!(out, "stable: yes")?;
        writeln!(out, "class: {}", class_name(s.orbit_class()))?;
        writeln!(out, "metric:\n{}", matrix_lines(s.metric().gram()))?;
        writeln!(out, "volume coefficient: {}", q_text(s.volume_coefficient()))?;
        writeln!(out, "star phi: {}", format_form(&s.star_phi(), &[]))?;
    }
    Ok(0)
}

fn structure(a: &FormArgs) -> Result<(LieAlgebra, nilgeom_core::g2star::G2StarStructure)> {
    let l = load_algebra(&a.algebra)?;
    let s = induce(&parse_form(&a.phi, l.dim(), Some(3))?)?;
    Ok((l, s))
}

fn g2_torsion(cli: &Cli, a: &FormArgs, out: &mut dyn Write) -> Result<i32> {
    let (l, s) = structure(a)?;
    let report = G2Report::of(&s, Some(&l))?;
    if cli.json {
        emit(out, &report)?;
    } else {
        let t = s.torsion_forms(&l)?;
        writeln!(out, "tau0: {}", q_text(&t.tau0))?;
        writeln!(out, "tau1: {}", format_form(&t.tau1, &[]))?;
        writeln!(out, "tau2: {}", format_form(&t.tau2, &[]))?;
        writeln!(out, "tau3: {}", format_form(&t.tau3, &[]))?;
        writeln!(out, "closed: {}", report.closed == Some(true))?;
        if report.closed == Some(true) {
            writeln!(out, "scal: {}", q_text(&s.scal_from_torsion(&l)?))?;
        }
    }
    Ok(0)
}

fn g2_harmonic(cli: &Cli, a: &FormArgs, out: &mut dyn Write) -> Result<i32> {
    let (l, s) = structure(a)?;
    let h = s.harmonic_report(&l)?;
    if cli.json {
        emit(out, &G2Report::of(&s, Some(&l))?)?;
    } else {
        writeln!(out, "closed={} coclosed={} harmonic={}", h.closed, h.coclosed, h.harmonic)?;
        writeln!(out, "d star phi: {}", format_form(&l.d(&s.star_phi()), &[]))?;
        writeln!(out, "laplacian phi: {}", format_form(&h.laplacian_phi, &[]))?;
    }
    Ok(code(h.harmonic))
}

fn lemmas(cli: &Cli, algebra: &str, out: &mut dyn Write) -> Result<i32> {
    let l = load_algebra(algebra)?;
    let method = match cli.method {
        Some(MethodArg::Expand) => Method::Expand,
        _ => Method::Randomized,
    };
    let r = lemma_suite(&l, method, cli.seed.unwrap_or(0))?;
    if cli.json {
        emit(out, &LemmaReportJson::of(&r))?;
    } else {
        writeln!(out, "closed 3-forms: {} parameters", r.family.dimension())?;
        writeln!(out, "degenerate family: {}", r.degenerate_family)?;
        for c in &r.checks {
            let state = match (c.applicable, c.holds) {
                (false, _) => "not applicable",
                (true, Some(true)) => "holds",
                (true, Some(false)) => "FAILS",
                (true, None) => "undecided",
            };
            writeln!(out, "{}: {state}", c.name)?;
        }
    }
    Ok(code(r.all_hold()))
}

fn search_einstein(cli: &Cli, a: &SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let l = load_algebra(&a.algebra)?;
    let mut config = SearchConfig::new(parse_signs(&a.signs)?, parse_seeds(&a.seeds)?);
    if let Some(t) = cli.tol {
        config.newton.residual_tol = t;
    }
    if let Some(m) = a.max_iter {
        config.newton.max_iter = m;
    }
    if let (Some(c), Some(d)) = (&a.around_coframe, &a.around_diag) {
        let point = exact_point(&l, &parse_matrix(c)?, &parse_list(d)?)?;
        around(&l, &mut config, &point, a.radius);
    }
    let found = search_parallel(&l, &config, a.threads)?;
    let labels = nilgeom_core::search::parametrize(&l).labels();
    if cli.json {
        let docs: Vec<CandidateJson> = found.iter().map(|c| CandidateJson::of(c, &labels)).collect();
        emit(out, &docs)?;
    } else {
        for c in &found {
            let extra = match &c.status {
                Status::EinsteinCertified(lambda) => format!(" lambda = {}", rational(lambda)),
                _ => String::new(),
            };
            writeln!(
                out,
                "seed {}: {} (residual {:.3e}, {} iterations){extra}",
                c.seed,
                status_name(&c.status),
                c.residual,
                c.iterations
            )?;
        }
    }
    Ok(0)
}

fn reproduce(cli: &Cli, all: bool, ids: &[String], list: bool, threads: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let manifest = Manifest::builtin();
    let checks = if all || (list && ids.is_empty()) { manifest.checks.clone() } else { manifest.select(ids)? };
    if list {
        for c in &checks {
            writeln!(out, "{}: {}", c.id, c.description)?;
        }
        return Ok(0);
    }
    let results = run_checks(&checks, threads)?;
    if cli.json {
        emit(out, &results)?;
    } else {
        for r in &results {
            let v = if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
            writeln!(out, "{v} {} ({} ms): {}", r.id, r.runtime_ms, r.description)?;
            if r.verdict == Verdict::Fail {
                writeln!(out, "    expected: {}\n    observed: {}", r.expected, r.observed)?;
            } else {
                writeln!(out, "    {}", r.observed)?;
            }
        }
    }
    Ok(code(results.iter().all(|r| r.verdict == Verdict::Pass)))
}
