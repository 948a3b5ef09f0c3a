//! Batch front door for the regularity analyzer.
//!
//! Four commands cover the workflow:
//!
//! * `classify` parses spectrum spec files (JSON) and emits one report
//!   document per spec with the symbolic verdicts, witnesses and the
//!   implication-consistency audit.
//! * `probe` additionally cross-validates every verdict on finite
//!   truncations and exports the probe curves as CSV.
//! * `report` merges previously written JSON report documents into a
//!   summary table.
//! * `demo-suite` runs the built-in corpus end to end. With a fixed seed
//!   the emitted bytes are identical across runs.
//!
//! Exit codes: 0 success, 1 internal inconsistency or a verdict/probe
//! disagreement, 2 input error, 3 capability error (probing a spectrum
//! with no point families). Output files are written atomically (temp
//! file plus rename) so interrupted runs never leave partial reports.

use clap::{Args, Parser, Subcommand, ValueEnum};
use semiflow_core::classifier::{
    full_report, CheckStatus, ClassifierError, ClassifyOptions, ConsistencyCheck, ExtReal,
    RegularityReport, Verdict, VerdictKind, Witness,
};
use semiflow_core::corpus;
use semiflow_core::spectrum::SpectrumSpec;
use semiflow_core::verifier::{
    cross_validate, samples_to_csv, Agreement, ProbeConfig, ProbeResult, VerifierError,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const FORMAT_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 42;

// ── command line surface ────────────────────────────────────────────────────

#[derive(Parser)]
#[command(name = "semiflow", version, about = "Regularity analysis for semigroups \
generated by diagonalizable operators: symbolic classification plus numerical \
cross-validation on finite truncations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify spectrum spec files symbolically
    Classify(ClassifyArgs),
    /// Classify and cross-validate on finite truncations
    Probe(ProbeArgs),
    /// Merge previously written JSON report documents into a summary table
    Report(ReportArgs),
    /// Run the built-in corpus end to end (classification, probes, summary)
    DemoSuite(DemoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for output files; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report rendering
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Spectrum spec files (JSON)
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Gevrey orders to classify (comma separated, each >= 1)
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct ProbeOverrides {
    /// Truncation sizes (comma separated)
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Largest time used by the growth probe
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Continuity modulus step sizes (comma separated)
    #[arg(long, value_delimiter = ',')]
    h: Option<Vec<f64>>,
    /// Agreement tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for similarity transforms and probe vectors
    /// (default: SEMIFLOW_SEED env var, else 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Condition number of the twisted eigenbasis (1 = diagonal)
    #[arg(long)]
    kappa: Option<f64>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Spectrum spec files (JSON)
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Gevrey orders to classify (comma separated, each >= 1)
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[command(flatten)]
    overrides: ProbeOverrides,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Previously written JSON report documents
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DemoArgs {
    /// Gevrey orders to classify (comma separated, each >= 1)
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[command(flatten)]
    overrides: ProbeOverrides,
    #[command(flatten)]
    output: OutputArgs,
}

// ── failures and exit codes ─────────────────────────────────────────────────

/// A terminal failure, ranked by the exit-code contract. When several specs
/// fail, the highest-priority code wins: input errors dominate (they make
/// the other answers moot), then capability errors, then inconsistencies.
#[derive(Debug)]
enum Failure {
    /// Exit 1: the classifier's implication audit failed or a probe
    /// disagreed with a verdict.
    Inconsistent(String),
    /// Exit 2: unreadable or unparseable input, bad parameter.
    Input(String),
    /// Exit 3: the request cannot be served for this spectrum shape.
    Capability(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Inconsistent(_) => 1,
            Failure::Input(_) => 2,
            Failure::Capability(_) => 3,
        }
    }

    /// Lower rank = reported first when failures from several specs compete.
    fn rank(&self) -> u8 {
        match self {
            Failure::Input(_) => 0,
            Failure::Capability(_) => 1,
            Failure::Inconsistent(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Inconsistent(m) | Failure::Input(m) | Failure::Capability(m) => {
                write!(f, "{m}")
            }
        }
    }
}

fn classifier_failure(e: ClassifierError) -> Failure {
    match e {
        ClassifierError::Parameter(_) => Failure::Input(e.to_string()),
        ClassifierError::Inconsistent { .. } => Failure::Inconsistent(e.to_string()),
    }
}

fn verifier_failure(e: VerifierError) -> Failure {
    match e {
        VerifierError::Classifier(c) => classifier_failure(c),
        VerifierError::Opcalc(o) => Failure::Capability(o.to_string()),
    }
}

// ── report documents ────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct GeneratorInfo {
    name: String,
    version: String,
}

impl Default for GeneratorInfo {
    fn default() -> Self {
        GeneratorInfo {
            name: "semiflow".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ProbesSection {
    max_dimension: usize,
    agreements: Vec<Agreement>,
    results: Vec<ProbeResult>,
}

#[derive(Serialize, Deserialize)]
struct Environment {
    betas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeConfig>,
}

/// The versioned per-spec report document. Field order is part of the
/// schema: downstream parsers and the byte-identical determinism contract
/// both rely on it.
#[derive(Serialize, Deserialize)]
struct ReportDoc {
    format_version: u32,
    generator: GeneratorInfo,
    label: String,
    spec_echo: SpectrumSpec,
    spectral_bound: ExtReal,
    verdicts: Vec<Verdict>,
    consistency: Vec<ConsistencyCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probes: Option<ProbesSection>,
    environment: Environment,
}

impl ReportDoc {
    fn new(
        spec: &SpectrumSpec,
        report: RegularityReport,
        probes: Option<ProbesSection>,
        betas: &[f64],
        probe_cfg: Option<&ProbeConfig>,
    ) -> Self {
        ReportDoc {
            format_version: FORMAT_VERSION,
            generator: GeneratorInfo::default(),
            label: report.label.clone(),
            spec_echo: spec.clone(),
            spectral_bound: report.spectral_bound,
            verdicts: report.verdicts,
            consistency: report.consistency,
            probes,
            environment: Environment {
                betas: betas.to_vec(),
                probe: probe_cfg.cloned(),
            },
        }
    }

    fn consistency_failures(&self) -> usize {
        self.consistency
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }

    fn agreement_failures(&self) -> Option<usize> {
        self.probes.as_ref().map(|p| {
            p.agreements
                .iter()
                .filter(|a| a.status == CheckStatus::Fail)
                .count()
        })
    }
}

// ── rendering ───────────────────────────────────────────────────────────────

/// Snake-case name of a serde-renamed unit enum value, reused so that the
/// text rendering and the JSON schema can never drift apart.
fn serde_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Params { omega, a, b, t0, beta } => {
            let mut parts = Vec::new();
            for (name, v) in [("omega", omega), ("a", a), ("b", b), ("t0", t0), ("beta", beta)] {
                if let Some(v) = v {
                    parts.push(format!("{name}={v}"));
                }
            }
            format!("[{}]", parts.join(", "))
        }
        Witness::Counterexample { point, description } => match point {
            Some(p) => format!("counterexample at ({}, {}): {}", p.re, p.im, description),
            None => format!("counterexample: {description}"),
        },
    }
}

fn render_text(doc: &ReportDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "report (format {}) — {} {}\n",
        doc.format_version, doc.generator.name, doc.generator.version
    ));
    out.push_str(&format!("spec: {}\n", doc.label));
    out.push_str(&format!(
        "spectral bound: {}\n\nverdicts\n",
        serde_json::to_value(doc.spectral_bound)
            .map(|v| v.to_string())
            .unwrap_or_default()
    ));
    for v in &doc.verdicts {
        let mut name = serde_name(&v.kind);
        if let Some(beta) = v.beta {
            name.push_str(&format!(" (beta={beta})"));
        }
        let mut line = format!("  {:<40} {:<13}", name, serde_name(&v.answer));
        if let Some(w) = &v.witness {
            line.push(' ');
            line.push_str(&witness_text(w));
        }
        if !v.note.is_empty() {
            line.push_str(&format!("  ({})", v.note));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str("\nconsistency\n");
    for c in &doc.consistency {
        let mut line = format!("  [{:<7}] {}", serde_name(&c.status), c.name);
        if !c.detail.is_empty() {
            line.push_str(&format!(": {}", c.detail));
        }
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(p) = &doc.probes {
        out.push_str(&format!("\nprobes (max dimension {})\n", p.max_dimension));
        for a in &p.agreements {
            out.push_str(&format!(
                "  [{:<7}] {}: {}\n",
                serde_name(&a.status),
                a.name,
                a.detail
            ));
        }
        for r in &p.results {
            out.push_str(&format!(
                "  probe {:<28} {:<13} {} ({} samples)\n",
                r.name,
                serde_name(&r.verdict),
                r.detail,
                r.samples.len()
            ));
        }
    }
    out.push_str("\nenvironment\n");
    out.push_str(&format!(
        "  betas = {:?}\n",
        doc.environment.betas
    ));
    if let Some(cfg) = &doc.environment.probe {
        out.push_str(&format!(
            "  seed = {}, kappa = {}, t_ref = {}, t_max = {}, tolerance = {:e}\n",
            cfg.seed, cfg.kappa, cfg.t_ref, cfg.t_max, cfg.tolerance
        ));
        out.push_str(&format!(
            "  h = {:?}, N = {:?}, r = {:?}\n",
            cfg.h_schedule, cfg.n_schedule, cfg.r_schedule
        ));
    }
    out
}

fn render_doc(doc: &ReportDoc, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(doc),
    }
}

// ── summary table ───────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct SummaryRow {
    label: String,
    generates: String,
    immediate_norm_continuity: String,
    eventual_differentiability: String,
    immediate_differentiability: String,
    analytic: String,
    compact_operator: String,
    immediately_compact_semigroup: String,
    consistency_failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agreement_failures: Option<usize>,
}

fn tri_of(doc: &ReportDoc, kind: VerdictKind) -> String {
    doc.verdicts
        .iter()
        .find(|v| v.kind == kind)
        .map(|v| serde_name(&v.answer))
        .unwrap_or_else(|| "-".to_string())
}

fn summary_rows(docs: &[ReportDoc]) -> Vec<SummaryRow> {
    docs.iter()
        .map(|d| SummaryRow {
            label: d.label.clone(),
            generates: tri_of(d, VerdictKind::Generates),
            immediate_norm_continuity: tri_of(d, VerdictKind::ImmediateNormContinuity),
            eventual_differentiability: tri_of(d, VerdictKind::EventualDifferentiability),
            immediate_differentiability: tri_of(d, VerdictKind::ImmediateDifferentiability),
            analytic: tri_of(d, VerdictKind::Analytic),
            compact_operator: tri_of(d, VerdictKind::CompactOperator),
            immediately_compact_semigroup: tri_of(d, VerdictKind::ImmediatelyCompactSemigroup),
            consistency_failures: d.consistency_failures(),
            agreement_failures: d.agreement_failures(),
        })
        .collect()
}

fn render_summary(rows: &[SummaryRow], format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Summary<'a> {
                format_version: u32,
                generator: GeneratorInfo,
                rows: &'a [SummaryRow],
            }
            let mut s = serde_json::to_string_pretty(&Summary {
                format_version: FORMAT_VERSION,
                generator: GeneratorInfo::default(),
                rows,
            })
            .expect("summaries always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let headers = [
                "label", "gen", "imm_nc", "ev_diff", "imm_diff", "analytic", "cpt_op",
                "imm_cpt_sg", "checks", "probes",
            ];
            let cells: Vec<[String; 10]> = rows
                .iter()
                .map(|r| {
                    [
                        r.label.clone(),
                        r.generates.clone(),
                        r.immediate_norm_continuity.clone(),
                        r.eventual_differentiability.clone(),
                        r.immediate_differentiability.clone(),
                        r.analytic.clone(),
                        r.compact_operator.clone(),
                        r.immediately_compact_semigroup.clone(),
                        if r.consistency_failures == 0 {
                            "ok".to_string()
                        } else {
                            format!("{} FAIL", r.consistency_failures)
                        },
                        match r.agreement_failures {
                            None => "-".to_string(),
                            Some(0) => "ok".to_string(),
                            Some(k) => format!("{k} FAIL"),
                        },
                    ]
                })
                .collect();
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row.iter()) {
                    *w = (*w).max(c.len());
                }
            }
            let mut out = String::new();
            let mut line = String::new();
            for (h, w) in headers.iter().zip(&widths) {
                line.push_str(&format!("{h:<w$}  "));
            }
            out.push_str(line.trim_end());
            out.push('\n');
            for row in &cells {
                let mut line = String::new();
                for (c, w) in row.iter().zip(&widths) {
                    line.push_str(&format!("{c:<w$}  "));
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
    }
}

// ── file plumbing ───────────────────────────────────────────────────────────

fn read_spec(path: &Path) -> Result<SpectrumSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::Input(format!("{}: file not found", path.display()))
        } else {
            Failure::Input(format!("{}: {e}", path.display()))
        }
    })?;
    SpectrumSpec::parse(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes atomically: the content lands in a temp file in the target
/// directory, then a rename publishes it.
fn write_atomic(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let tmp = dir.join(format!(".{name}.tmp"));
    let target = dir.join(name);
    std::fs::write(&tmp, content).map_err(|e| Failure::Input(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, &target)
        .map_err(|e| Failure::Input(format!("{}: {e}", target.display())))?;
    Ok(())
}

/// Stable file stem for a spec: its label when present, the input stem
/// otherwise, de-duplicated in input order.
fn file_stem(label: &str, path: Option<&Path>, used: &mut Vec<String>) -> String {
    let raw = if label.is_empty() {
        path.and_then(|p| p.file_stem())
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "spec".to_string())
    } else {
        label.to_string()
    };
    let mut base: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if base.is_empty() {
        base.push_str("spec");
    }
    let mut candidate = base.clone();
    let mut k = 1usize;
    while used.contains(&candidate) {
        k += 1;
        candidate = format!("{base}_{k}");
    }
    used.push(candidate.clone());
    candidate
}

/// One output artifact: file name (when writing to a directory) plus bytes.
struct Artifact {
    name: String,
    content: String,
}

fn emit(artifacts: &[Artifact], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            for a in artifacts {
                write_atomic(dir, &a.name, &a.content)?;
            }
            Ok(())
        }
        None => {
            let mut stdout = String::new();
            for a in artifacts {
                stdout.push_str(&a.content);
                if !a.content.ends_with('\n') {
                    stdout.push('\n');
                }
            }
            print!("{stdout}");
            Ok(())
        }
    }
}

// ── configuration resolution ────────────────────────────────────────────────

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SEMIFLOW_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Input(format!("SEMIFLOW_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn probe_config(o: &ProbeOverrides) -> Result<ProbeConfig, Failure> {
    let mut cfg = ProbeConfig::default();
    cfg.seed = resolve_seed(o.seed)?;
    if let Some(n) = &o.n {
        if n.is_empty() || n.contains(&0) {
            return Err(Failure::Input("--N needs positive truncation sizes".into()));
        }
        cfg.n_schedule = n.clone();
    }
    if let Some(t) = o.t_max {
        if !(t > 0.0) {
            return Err(Failure::Input(format!("--t-max must be positive, got {t}")));
        }
        cfg.t_max = t;
    }
    if let Some(h) = &o.h {
        if h.is_empty() || h.iter().any(|x| !(*x > 0.0)) {
            return Err(Failure::Input("--h needs positive step sizes".into()));
        }
        cfg.h_schedule = h.clone();
    }
    if let Some(tol) = o.tol {
        if !(tol > 0.0) {
            return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
        }
        cfg.tolerance = tol;
    }
    if let Some(k) = o.kappa {
        if !(k >= 1.0) {
            return Err(Failure::Input(format!("--kappa must be >= 1, got {k}")));
        }
        cfg.kappa = k;
        cfg.mapping_kappa = k;
    }
    Ok(cfg)
}

fn classify_options(beta: &Option<Vec<f64>>) -> ClassifyOptions {
    match beta {
        Some(betas) => ClassifyOptions { betas: betas.clone() },
        None => ClassifyOptions::default(),
    }
}

// ── per-spec work ───────────────────────────────────────────────────────────

fn classify_one(spec: &SpectrumSpec, opts: &ClassifyOptions) -> Result<ReportDoc, Failure> {
    let report = full_report(spec, opts).map_err(classifier_failure)?;
    Ok(ReportDoc::new(spec, report, None, &opts.betas, None))
}

fn probe_one(
    spec: &SpectrumSpec,
    opts: &ClassifyOptions,
    cfg: &ProbeConfig,
) -> Result<ReportDoc, Failure> {
    if spec.finite.is_empty() && spec.tails.is_empty() {
        return Err(Failure::Capability(format!(
            "{}: probes require point spectra (finite points or tail families)",
            if spec.label.is_empty() { "spec" } else { &spec.label }
        )));
    }
    let report = full_report(spec, opts).map_err(classifier_failure)?;
    let verification = cross_validate(spec, cfg).map_err(verifier_failure)?;
    if !verification.all_ok() {
        let failed: Vec<&str> = verification
            .agreements
            .iter()
            .filter(|a| a.status == CheckStatus::Fail)
            .map(|a| a.name.as_str())
            .collect();
        return Err(Failure::Inconsistent(format!(
            "{}: probes disagree with the classifier on: {}",
            report.label,
            failed.join(", ")
        )));
    }
    let probes = ProbesSection {
        max_dimension: verification.max_dimension,
        agreements: verification.agreements,
        results: verification.probes,
    };
    Ok(ReportDoc::new(spec, report, Some(probes), &opts.betas, Some(cfg)))
}

fn curves_csv(doc: &ReportDoc) -> Option<String> {
    let probes = doc.probes.as_ref()?;
    let samples: Vec<_> = probes
        .results
        .iter()
        .flat_map(|r| r.samples.iter().cloned())
        .collect();
    if samples.is_empty() {
        return None;
    }
    Some(samples_to_csv(&samples))
}

/// Runs `work` over the specs concurrently, preserving input order, and
/// keeps the highest-priority failure when several specs fail.
fn run_parallel<T: Send>(
    specs: &[SpectrumSpec],
    work: impl Fn(&SpectrumSpec) -> Result<T, Failure> + Sync,
) -> Vec<Result<T, Failure>> {
    let mut results: Vec<Option<Result<T, Failure>>> = Vec::new();
    results.resize_with(specs.len(), || None);
    std::thread::scope(|scope| {
        for (slot, spec) in results.iter_mut().zip(specs.iter()) {
            let work = &work;
            scope.spawn(move || {
                *slot = Some(work(spec));
            });
        }
    });
    results.into_iter().map(|r| r.expect("worker completed")).collect()
}

/// Collapses per-spec failures: every non-dominant diagnostic is printed
/// here, the dominant one is returned and printed once by main, and its
/// code decides the exit status.
fn collect<T>(results: Vec<Result<T, Failure>>) -> Result<Vec<T>, Failure> {
    let mut oks = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(v) => oks.push(v),
            Err(f) => failures.push(f),
        }
    }
    if failures.is_empty() {
        return Ok(oks);
    }
    let dominant = failures
        .iter()
        .enumerate()
        .min_by_key(|(i, f)| (f.rank(), *i))
        .map(|(i, _)| i)
        .expect("nonempty");
    let kept = failures.remove(dominant);
    for f in &failures {
        eprintln!("error: {f}");
    }
    Err(kept)
}

// ── commands ────────────────────────────────────────────────────────────────

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Failure> {
    let opts = classify_options(&args.beta);
    let specs = collect(args.inputs.iter().map(|p| read_spec(p)).collect())?;
    let docs = collect(run_parallel(&specs, |spec| classify_one(spec, &opts)))?;

    let mut used = Vec::new();
    let mut artifacts = Vec::new();
    for (doc, path) in docs.iter().zip(&args.inputs) {
        let stem = file_stem(&doc.label, Some(path), &mut used);
        let ext = match args.output.format {
            Format::Json => "report.json",
            Format::Text => "report.txt",
        };
        artifacts.push(Artifact {
            name: format!("{stem}.{ext}"),
            content: render_doc(doc, args.output.format),
        });
    }
    emit(&artifacts, args.output.out.as_deref())
}

fn cmd_probe(args: &ProbeArgs) -> Result<(), Failure> {
    let opts = classify_options(&args.beta);
    let cfg = probe_config(&args.overrides)?;
    let specs = collect(args.inputs.iter().map(|p| read_spec(p)).collect())?;
    let docs = collect(run_parallel(&specs, |spec| probe_one(spec, &opts, &cfg)))?;

    let mut used = Vec::new();
    let mut artifacts = Vec::new();
    for (doc, path) in docs.iter().zip(&args.inputs) {
        let stem = file_stem(&doc.label, Some(path), &mut used);
        let ext = match args.output.format {
            Format::Json => "report.json",
            Format::Text => "report.txt",
        };
        artifacts.push(Artifact {
            name: format!("{stem}.{ext}"),
            content: render_doc(doc, args.output.format),
        });
        if let Some(csv) = curves_csv(doc) {
            artifacts.push(Artifact {
                name: format!("{stem}.curves.csv"),
                content: csv,
            });
        }
    }
    emit(&artifacts, args.output.out.as_deref())
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let docs = collect(
        args.inputs
            .iter()
            .map(|path| {
                std::fs::read_to_string(path)
                    .map_err(|e| {
                        if e.kind() == std::io::ErrorKind::NotFound {
                            Failure::Input(format!("{}: file not found", path.display()))
                        } else {
                            Failure::Input(format!("{}: {e}", path.display()))
                        }
                    })
                    .and_then(|text| {
                        serde_json::from_str::<ReportDoc>(&text).map_err(|e| {
                            Failure::Input(format!(
                                "{}: not a report document: {e}",
                                path.display()
                            ))
                        })
                    })
            })
            .collect(),
    )?;
    let rows = summary_rows(&docs);
    let content = render_summary(&rows, args.output.format);
    let name = match args.output.format {
        Format::Json => "summary.json",
        Format::Text => "summary.txt",
    };
    emit(
        &[Artifact { name: name.to_string(), content }],
        args.output.out.as_deref(),
    )?;
    // a merged summary over inconsistent runs must still flag them
    if rows.iter().any(|r| r.consistency_failures > 0)
        || rows.iter().any(|r| r.agreement_failures.unwrap_or(0) > 0)
    {
        return Err(Failure::Inconsistent(
            "summary contains failed checks".to_string(),
        ));
    }
    Ok(())
}

fn cmd_demo_suite(args: &DemoArgs) -> Result<(), Failure> {
    let opts = classify_options(&args.beta);
    let cfg = probe_config(&args.overrides)?;
    let specs = corpus::demo_specs();
    let docs = collect(run_parallel(&specs, |spec| {
        // region-only corpus entries are classified but not probed; their
        // documents simply omit the probes section
        if spec.finite.is_empty() && spec.tails.is_empty() {
            classify_one(spec, &opts)
        } else {
            probe_one(spec, &opts, &cfg)
        }
    }))?;

    let mut used = Vec::new();
    let mut artifacts = Vec::new();
    for doc in &docs {
        let stem = file_stem(&doc.label, None, &mut used);
        let ext = match args.output.format {
            Format::Json => "report.json",
            Format::Text => "report.txt",
        };
        artifacts.push(Artifact {
            name: format!("{stem}.{ext}"),
            content: render_doc(doc, args.output.format),
        });
        if let Some(csv) = curves_csv(doc) {
            artifacts.push(Artifact {
                name: format!("{stem}.curves.csv"),
                content: csv,
            });
        }
    }
    let rows = summary_rows(&docs);
    let name = match args.output.format {
        Format::Json => "summary.json",
        Format::Text => "summary.txt",
    };
    artifacts.push(Artifact {
        name: name.to_string(),
        content: render_summary(&rows, args.output.format),
    });
    emit(&artifacts, args.output.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Probe(args) => cmd_probe(args),
        Command::Report(args) => cmd_report(args),
        Command::DemoSuite(args) => cmd_demo_suite(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
