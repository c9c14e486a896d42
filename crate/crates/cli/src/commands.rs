use std::fs;
use std::path::{Path, PathBuf};

use landmark_core::eval::{
    balanced_k_median, classify_points, clustering_distance, embed_kmeans_baseline, min_sum,
    verify_stability, verify_structure, BaselineParams, ObjectiveKind, StabilityVerdict,
    StructureReport, VerifyOutcome,
};
use landmark_core::gen::{
    generate, generate_adversarial, read_bundle, write_bundle, AdversarialKind, Instance,
    InstanceSpec,
};
use landmark_core::metric::io::{
    parse_labels_csv, parse_matrix_csv, parse_pairs_tsv, write_labels_csv, write_matrix_csv,
};
use landmark_core::metric::{
    check_metric, ingest_similarity, CheckMode, MetricReport, SymmetrizePolicy,
};
use landmark_core::report::{
    finite, ClusteringArtifact, MetricsReport, Provenance, StructureFlags, SweepArtifact,
};
use landmark_core::{
    assign_remainder, build_landmark_table, cluster_min_sum, enumerate_thresholds,
    landmark_count_for, sample_landmarks, stop_bound_from, sweep, threshold_from_opt,
    CandidateMode, Clustering, DistanceSource, Error, Metric, MetricMatrix, Result,
    StabilityParams,
};
use log::warn;
use serde::Serialize;

use crate::args::*;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => run_generate(&a),
        Command::Cluster(a) => run_cluster(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Baseline(a) => run_baseline(&a),
        Command::Evaluate(a) => run_evaluate(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Ingest(a) => run_ingest(&a),
    }
}

fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(path: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(path, &text)
}

fn load_matrix(path: &Path, format: InputFormat) -> Result<MetricMatrix> {
    let format = match format {
        InputFormat::Auto if path.is_dir() => InputFormat::Bundle,
        InputFormat::Auto if path.extension().is_some_and(|e| e == "tsv") => InputFormat::Pairs,
        InputFormat::Auto => InputFormat::Matrix,
        f => f,
    };
    match format {
        InputFormat::Bundle => Ok(read_bundle(path)?.matrix()),
        InputFormat::Pairs => {
            let file = parse_pairs_tsv(&read(path)?)?;
            ingest_similarity(file.len(), &file.pairs, SymmetrizePolicy::default())
        }
        _ => parse_matrix_csv(&read(path)?),
    }
}

fn open_source(input: &InputArgs, budget: Option<u64>) -> Result<DistanceSource> {
    let matrix = load_matrix(&input.input, input.input_format)?;
    Ok(match budget {
        Some(b) => DistanceSource::with_budget(matrix, b),
        None => DistanceSource::new(matrix),
    })
}

fn stability_params(s: &StabilityArgs) -> Result<Option<StabilityParams>> {
    match (s.alpha, s.epsilon) {
        (Some(alpha), Some(epsilon)) => StabilityParams::new(alpha, epsilon, s.delta).map(Some),
        (None, None) => Ok(None),
        _ => Err(param("--alpha and --epsilon must be given together")),
    }
}

fn landmark_count(
    explicit: Option<usize>,
    params: Option<&StabilityParams>,
    k: usize,
    n: usize,
) -> Result<usize> {
    match (explicit, params) {
        (Some(count), _) => Ok(count),
        (None, Some(p)) => landmark_count_for(p, k, n),
        (None, None) => Err(param(
            "pass --landmarks, or --alpha and --epsilon to derive it",
        )),
    }
}

fn log_warnings(c: &Clustering) {
    for w in c.warnings() {
        warn!("{w}");
    }
}

fn report_queries(enabled: bool, source: &DistanceSource) {
    if enabled {
        eprintln!("queries_issued: {}", source.queries_issued());
    }
}

fn emit_clustering(
    path: Option<&Path>,
    format: OutputFormat,
    artifact: &ClusteringArtifact,
) -> Result<()> {
    match format {
        OutputFormat::Json => emit_json(path, artifact),
        OutputFormat::Labels => emit(path, &write_labels_csv(&artifact.clustering)),
    }
}

#[derive(Serialize)]
struct GenerateSummary {
    #[serde(flatten)]
    provenance: Provenance,
    bundle: PathBuf,
    n: usize,
    k: usize,
    opt: f64,
    avg_weight: f64,
    bad_points: usize,
    stability: Option<StabilityParams>,
    ideal_threshold: Option<f64>,
}

fn run_generate(a: &GenerateArgs) -> Result<()> {
    let seed = a.seed.seed;
    let instance: Instance = match &a.adversarial {
        Some(kind) => {
            let kind: AdversarialKind = kind.parse()?;
            let n = a.n.ok_or_else(|| param("--adversarial needs --n"))?;
            let k = a.k.ok_or_else(|| param("--adversarial needs --k"))?;
            generate_adversarial(kind, n, k, seed)?
        }
        None => {
            let mut spec = InstanceSpec::new(a.sizes.clone(), a.theta, seed);
            spec.separation_factor = a.separation_factor;
            spec.bad_fraction = a.bad_fraction;
            spec.embed_dim = a.embed_dim;
            spec.alpha = a.alpha;
            spec.delta = a.delta;
            generate(&spec)?
        }
    };
    write_bundle(&instance, &a.output)?;
    emit_json(
        None,
        &GenerateSummary {
            provenance: Provenance::new(Some(seed), a)?,
            bundle: a.output.clone(),
            n: instance.n(),
            k: instance.k(),
            opt: instance.opt,
            avg_weight: instance.avg_weight(),
            bad_points: instance.bad_points.len(),
            stability: instance.stability,
            ideal_threshold: instance.ideal_threshold(),
        },
    )
}

fn run_cluster(a: &ClusterArgs) -> Result<()> {
    let source = open_source(&a.input, a.budget)?;
    let n = source.len();
    let params = stability_params(&a.stability)?;
    let threshold = match (a.threshold, a.opt) {
        (Some(t), None) => t,
        (None, Some(opt)) => {
            let p = params
                .as_ref()
                .ok_or_else(|| param("--opt needs --alpha and --epsilon"))?;
            threshold_from_opt(p, opt, n)?
        }
        _ => return Err(param("give exactly one of --threshold and --opt")),
    };
    let n_prime = landmark_count(a.landmarks, params.as_ref(), a.k, n)?;
    let landmarks = sample_landmarks(n, n_prime, a.seed.seed)?;
    let table = build_landmark_table(&source, &landmarks)?;
    let mut clustering = cluster_min_sum(&table, a.k, threshold)?;
    if a.assign_remainder {
        clustering = assign_remainder(&clustering, &table)?;
    }
    log_warnings(&clustering);
    report_queries(a.report_queries, &source);
    let artifact = ClusteringArtifact {
        provenance: Provenance::new(Some(a.seed.seed), a)?,
        clustering,
        threshold: Some(threshold),
        landmarks,
        queries_issued: source.queries_issued(),
    };
    emit_clustering(a.output.as_deref(), a.format, &artifact)
}

fn run_sweep(a: &SweepArgs) -> Result<()> {
    let source = open_source(&a.input, a.budget)?;
    let n = source.len();
    let params = stability_params(&a.stability)?;
    let stop_bound = match (a.stop_bound, params.as_ref()) {
        (Some(b), _) => b,
        (None, Some(p)) => stop_bound_from(p, n)?,
        (None, None) => {
            return Err(param(
                "pass --stop-bound, or --alpha and --epsilon to derive it",
            ))
        }
    };
    let n_prime = landmark_count(a.landmarks, params.as_ref(), a.k, n)?;
    let landmarks = sample_landmarks(n, n_prime, a.seed.seed)?;
    let table = build_landmark_table(&source, &landmarks)?;
    let mode = match a.geometric {
        Some(ratio) => CandidateMode::Geometric { ratio },
        None => CandidateMode::Exact,
    };
    let mut candidates = enumerate_thresholds(&table, n, mode)?;
    if let Some(max) = a.max_threshold {
        candidates = candidates.up_to(max);
    }
    let result = sweep(&table, a.k, &candidates, stop_bound)?;
    for w in &result.warnings {
        warn!("{w}");
    }
    report_queries(a.report_queries, &source);
    let provenance = Provenance::new(Some(a.seed.seed), a)?;
    match a.format {
        OutputFormat::Labels => emit(a.output.as_deref(), &write_labels_csv(&result.clustering)),
        OutputFormat::Json => emit_json(
            a.output.as_deref(),
            &SweepArtifact {
                provenance,
                stop_bound,
                candidate_count: candidates.len(),
                landmarks,
                queries_issued: source.queries_issued(),
                result,
            },
        ),
    }
}

fn run_baseline(a: &BaselineArgs) -> Result<()> {
    let source = open_source(&a.input, a.budget)?;
    let params = BaselineParams {
        d_landmarks: a.landmarks,
        k: a.k,
        seed: a.seed.seed,
        max_iters: a.max_iters,
    };
    let clustering = embed_kmeans_baseline(&source, &params)?;
    log_warnings(&clustering);
    report_queries(a.report_queries, &source);
    let artifact = ClusteringArtifact {
        provenance: Provenance::new(Some(a.seed.seed), a)?,
        clustering,
        threshold: None,
        landmarks: Vec::new(),
        queries_issued: source.queries_issued(),
    };
    emit_clustering(a.output.as_deref(), a.format, &artifact)
}

/// Reads a clustering from a JSON artifact, bare clustering JSON or labels CSV.
/// Also returns the recorded query count when there is one.
fn read_clustering(path: &Path) -> Result<(Clustering, Option<u64>)> {
    let text = read(path)?;
    if !text.trim_start().starts_with('{') {
        return Ok((parse_labels_csv(&text)?, None));
    }
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let queries = value.get("queries_issued").and_then(|q| q.as_u64());
    let inner = value
        .get("clustering")
        .or_else(|| value.pointer("/result/clustering"))
        .unwrap_or(&value)
        .clone();
    Ok((serde_json::from_value(inner)?, queries))
}

#[derive(Serialize)]
struct EvaluateArtifact {
    #[serde(flatten)]
    provenance: Provenance,
    n: usize,
    #[serde(flatten)]
    metrics: MetricsReport,
    /// `(b_observed + epsilon n) / n` when structure was checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    dist_bound: Option<f64>,
}

fn run_evaluate(a: &EvaluateArgs) -> Result<()> {
    let (clustering, queries_issued) = read_clustering(&a.clustering)?;
    let reference = a
        .labels
        .as_deref()
        .map(read_clustering)
        .transpose()?
        .map(|r| r.0);
    let matrix = a
        .input
        .as_deref()
        .map(|p| load_matrix(p, a.input_format))
        .transpose()?;
    let params = stability_params(&a.stability)?;

    if let Some(r) = &reference {
        if clustering.unassigned() != r.unassigned() {
            return Err(Error::Domain(format!(
                "clustering leaves {} points unassigned and the reference {}; \
                 rerun with --assign-remainder to compare",
                clustering.unassigned().len(),
                r.unassigned().len()
            )));
        }
    }
    let dist_to_target = reference
        .as_ref()
        .map(|r| clustering_distance(&clustering, r))
        .transpose()?;
    let (phi, psi) = match &matrix {
        Some(m) => (
            finite(min_sum(&clustering, m)?.value),
            finite(balanced_k_median(&clustering, m)?.value),
        ),
        None => (None, None),
    };
    let mut structure = None;
    let mut b_observed = None;
    let mut dist_bound = None;
    if let Some(p) = params {
        let (Some(m), Some(r)) = (&matrix, &reference) else {
            return Err(param("--alpha and --epsilon need --input and --labels"));
        };
        let report = classify_points(m, r, &p)?;
        let outcome = verify_structure(&report, m)?;
        let n = m.len() as f64;
        dist_bound = Some((report.b_observed as f64 + p.epsilon * n) / n);
        b_observed = Some(report.b_observed);
        structure = Some(StructureFlags::from(&outcome));
    }
    emit_json(
        a.output.as_deref(),
        &EvaluateArtifact {
            provenance: Provenance::new(None, a)?,
            n: clustering.n(),
            metrics: MetricsReport {
                phi,
                psi,
                dist_to_target,
                b_observed,
                structure,
                queries_issued,
            },
            dist_bound,
        },
    )
}

#[derive(Serialize)]
struct VerifyArtifact {
    #[serde(flatten)]
    provenance: Provenance,
    params: StabilityParams,
    structure_ok: bool,
    outcome: VerifyOutcome,
    report: StructureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<StabilityVerdict>,
}

fn run_verify(a: &VerifyArgs) -> Result<()> {
    let instance = read_bundle(&a.input)?;
    let declared = instance.stability;
    let alpha = a.stability.alpha.or(declared.map(|p| p.alpha));
    let epsilon = a.stability.epsilon.or(declared.map(|p| p.epsilon));
    let (Some(alpha), Some(epsilon)) = (alpha, epsilon) else {
        return Err(param(
            "bundle declares no parameters; pass --alpha and --epsilon",
        ));
    };
    let params = StabilityParams::new(alpha, epsilon, a.stability.delta)?;
    let matrix = instance.matrix();
    let report = classify_points(&matrix, &instance.target, &params)?;
    let outcome = verify_structure(&report, &matrix)?;
    let stability = if a.exhaustive {
        let objective: ObjectiveKind = a.objective.parse()?;
        Some(verify_stability(
            &matrix,
            instance.k(),
            alpha,
            epsilon.min(1.0),
            objective,
            &instance.target,
            a.brute_cap,
        )?)
    } else {
        None
    };
    emit_json(
        a.output.as_deref(),
        &VerifyArtifact {
            provenance: Provenance::new(None, a)?,
            params,
            structure_ok: outcome.all_ok(),
            outcome,
            report,
            stability,
        },
    )
}

#[derive(Serialize)]
struct IngestSummary {
    #[serde(flatten)]
    provenance: Provenance,
    n: usize,
    pairs: usize,
    infinite_entries: usize,
    triples_examined: u64,
    violating_triples: usize,
    violation_rate: f64,
}

fn run_ingest(a: &IngestArgs) -> Result<()> {
    let file = parse_pairs_tsv(&read(&a.input)?)?;
    let policy: SymmetrizePolicy = a.symmetrize.parse()?;
    let matrix = ingest_similarity(file.len(), &file.pairs, policy)?;
    fs::write(&a.output, write_matrix_csv(&matrix))?;
    if let Some(ids) = &a.ids {
        let mut text = file.ids.join("\n");
        text.push('\n');
        fs::write(ids, text)?;
    }
    let mode = match a.check_triples {
        0 => CheckMode::Exhaustive,
        triples => CheckMode::Sampled {
            triples,
            seed: a.seed.seed,
        },
    };
    let check: MetricReport = check_metric(&matrix, mode);
    let infinite_entries = matrix.entries().iter().filter(|d| d.is_infinite()).count();
    if !check.is_clean() {
        warn!(
            "{} of {} sampled triples violate the triangle inequality",
            check.violations.len(),
            check.triples_examined
        );
    }
    emit_json(
        None,
        &IngestSummary {
            provenance: Provenance::new(Some(a.seed.seed), a)?,
            n: matrix.len(),
            pairs: file.pairs.len(),
            infinite_entries,
            triples_examined: check.triples_examined,
            violating_triples: check.violations.len(),
            violation_rate: check.violation_rate(),
        },
    )
}
