//! Command implementations.

use crate::fileio::{open_input, write_atomic};
use crate::{Command, FormatArg};
use anyhow::{anyhow, bail, Context, Result};
use dgaclass_core::dataset::LabeledDataset;
use dgaclass_core::domains::{self, SuffixDatabase};
use dgaclass_core::features::{self, FeatureSetSelection, FeatureVector};
use dgaclass_core::forest::{self, ForestMode, ForestModel, HyperParams};
use dgaclass_core::selection::{self, RfeBackend, SelectionReport};
use dgaclass_core::synthdga::{self, FamilySpec};
use dgaclass_core::{evalharness, tuning};
use rayon::prelude::*;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// Lines buffered per classify batch; bounds memory in streaming mode.
const CLASSIFY_CHUNK: usize = 1024;

pub fn run(command: Command, seed: u64) -> Result<()> {
    match command {
        Command::Gen { out, per_family, families } => gen(&out, per_family, families, seed),
        Command::Extract { data, selection, out } => extract(&data, &selection, &out),
        Command::Select { data, method, out_dir, k_neighbors, folds, clusters } => {
            select(&data, &method, &out_dir, k_neighbors, folds, clusters, seed)
        }
        Command::Tune { data, selection, mode, trials, folds, out_log, out_params } => tune(
            &data,
            &selection,
            mode.into(),
            trials,
            folds,
            &out_log,
            &out_params,
            seed,
        ),
        Command::Train { data, selection, params, mode, out } => {
            train(&data, &selection, params, mode.into(), &out, seed)
        }
        Command::Eval { data, selection, params, mode, repetitions, folds, out_dir } => eval(
            &data,
            &selection,
            params,
            mode.into(),
            repetitions,
            folds,
            &out_dir,
            seed,
        ),
        Command::Classify { model, input, out, top_k, format } => {
            classify(&model, &input, out, top_k, format)
        }
        Command::Bench { model, data, samples, batch, parallel, out } => {
            bench(&model, data, samples, batch, parallel, out, seed)
        }
    }
}

fn load_dataset(path: &Path) -> Result<LabeledDataset> {
    let reader = BufReader::new(open_input(path)?);
    LabeledDataset::read_csv(reader).with_context(|| format!("reading dataset {}", path.display()))
}

/// A named catalog selection, or a selection-report file.
fn resolve_selection(arg: &str) -> Result<FeatureSetSelection> {
    if let Some(named) = FeatureSetSelection::named(arg) {
        return Ok(named);
    }
    let path = Path::new(arg);
    if path.exists() {
        let report = SelectionReport::load(open_input(path)?)
            .with_context(|| format!("reading selection report {arg}"))?;
        return FeatureSetSelection::from_ids(&report.method, &report.selected_ids)
            .map_err(|e| anyhow!("selection report {arg}: {e}"));
    }
    bail!("unknown selection {arg:?}: not a built-in name and not a file")
}

fn load_params(path: Option<PathBuf>) -> Result<HyperParams> {
    match path {
        None => Ok(HyperParams::default()),
        Some(p) => {
            let hp: HyperParams = serde_json::from_reader(open_input(&p)?)
                .with_context(|| format!("parsing hyperparameters {}", p.display()))?;
            hp.validate().map_err(|e| anyhow!("{e}"))?;
            Ok(hp)
        }
    }
}

fn gen(out: &Path, per_family: usize, families: Option<PathBuf>, seed: u64) -> Result<()> {
    let specs: Vec<FamilySpec> = match families {
        None => synthdga::pinned_families(),
        Some(p) => serde_json::from_reader(open_input(&p)?)
            .with_context(|| format!("parsing family specs {}", p.display()))?,
    };
    let dataset = synthdga::build_corpus(&specs, per_family, seed)?;
    write_atomic(out, |w| Ok(dataset.write_csv(w)?))?;
    eprintln!(
        "wrote {} domains, {} classes to {}",
        dataset.len(),
        dataset.n_classes(),
        out.display()
    );
    Ok(())
}

fn parse_all(
    dataset: &LabeledDataset,
    db: &SuffixDatabase,
) -> Result<Vec<dgaclass_core::ParsedDomain>> {
    dataset
        .domains()
        .par_iter()
        .map(|d| domains::parse(d, db).map_err(|e| anyhow!("{e}")))
        .collect()
}

fn extract(data: &Path, selection_arg: &str, out: &Path) -> Result<()> {
    let dataset = load_dataset(data)?;
    let selection = resolve_selection(selection_arg)?;
    let db = SuffixDatabase::bundled();
    let parsed = parse_all(&dataset, &db)?;
    let rows: Result<Vec<FeatureVector>> = parsed
        .par_iter()
        .map(|d| features::extract(d, &selection).map_err(|e| anyhow!("{e}")))
        .collect();
    let rows = rows?;
    let labels: Vec<String> = dataset
        .labels()
        .iter()
        .map(|&l| dataset.class_names()[l].clone())
        .collect();
    write_atomic(out, |w| {
        Ok(features::write_feature_csv(w, &selection, &rows, Some(&labels))?)
    })?;
    eprintln!("wrote {} rows x {} features to {}", rows.len(), selection.len(), out.display());
    Ok(())
}

fn save_report(dir: &Path, report: &SelectionReport) -> Result<()> {
    let path = dir.join(format!("{}.json", report.method));
    write_atomic(&path, |w| Ok(report.save(w)?))?;
    eprintln!("{}: {} of {} features", report.method, report.selected_ids.len(), report.feature_ids.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn select(
    data: &Path,
    method: &str,
    out_dir: &Path,
    k_neighbors: usize,
    folds: usize,
    clusters: Option<usize>,
    seed: u64,
) -> Result<()> {
    let dataset = load_dataset(data)?;
    let union = FeatureSetSelection::named("union").expect("built-in");
    let db = SuffixDatabase::bundled();
    let (matrix, _) = features::extract_matrix(&dataset, &db, &union)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    match method {
        "pipeline" => {
            let output = selection::run_pipeline(&matrix, k_neighbors, folds, clusters, seed)?;
            for report in &output.reports {
                save_report(out_dir, report)?;
            }
        }
        "variance-mi" => save_report(out_dir, &selection::drop_degenerate(&matrix)?)?,
        "relieff" => save_report(out_dir, &selection::relieff(&matrix, k_neighbors)?)?,
        "multisurf" => save_report(out_dir, &selection::multisurf(&matrix)?)?,
        "rfe-mdi" => save_report(out_dir, &selection::rfe(&matrix, RfeBackend::Mdi, folds, seed)?)?,
        "rfe-pi" => save_report(out_dir, &selection::rfe(&matrix, RfeBackend::Pi, folds, seed)?)?,
        other => bail!("unknown selection method {other:?}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn tune(
    data: &Path,
    selection_arg: &str,
    mode: ForestMode,
    trials: usize,
    folds: usize,
    out_log: &Path,
    out_params: &Path,
    seed: u64,
) -> Result<()> {
    let dataset = load_dataset(data)?;
    let selection = resolve_selection(selection_arg)?;
    let db = SuffixDatabase::bundled();
    let (matrix, _) = features::extract_matrix(&dataset, &db, &selection)?;
    let space = tuning::SearchSpace::default();
    let (best, log) = tuning::random_search(&matrix, &space, mode, trials, folds, seed)?;
    write_atomic(out_log, |w| Ok(tuning::write_trial_log_csv(w, &log)?))?;
    write_atomic(out_params, |w| {
        serde_json::to_writer_pretty(&mut *w, &best.hyperparams)?;
        Ok(())
    })?;
    eprintln!(
        "best trial {} of {}: macro-F1 {:.5} -> {}",
        best.index,
        log.len(),
        best.mean_f1,
        out_params.display()
    );
    Ok(())
}

fn train(
    data: &Path,
    selection_arg: &str,
    params: Option<PathBuf>,
    mode: ForestMode,
    out: &Path,
    seed: u64,
) -> Result<()> {
    let dataset = load_dataset(data)?;
    let selection = resolve_selection(selection_arg)?;
    let hp = load_params(params)?;
    let db = SuffixDatabase::bundled();
    let (matrix, _) = features::extract_matrix(&dataset, &db, &selection)?;
    let mut model = forest::train(&matrix, &hp, mode, seed)?;
    model.selection_name = selection.name().to_string();
    write_atomic(out, |w| Ok(model.save(w)?))?;
    eprintln!(
        "trained {mode} model: {} classes, {} trees, {} features -> {}",
        model.n_classes(),
        model.n_trees(),
        model.n_features(),
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn eval(
    data: &Path,
    selection_arg: &str,
    params: Option<PathBuf>,
    mode: ForestMode,
    repetitions: usize,
    folds: usize,
    out_dir: &Path,
    seed: u64,
) -> Result<()> {
    let dataset = load_dataset(data)?;
    let selection = resolve_selection(selection_arg)?;
    let hp = load_params(params)?;
    let db = SuffixDatabase::bundled();
    let plan = evalharness::CVPlan::new(repetitions, folds, seed);
    let report = evalharness::cross_validate(&dataset, &db, &selection, &hp, mode, &plan)?;

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    write_atomic(&out_dir.join("metrics.csv"), |w| {
        Ok(evalharness::write_metrics_csv(w, &report)?)
    })?;
    write_atomic(&out_dir.join("confusion.csv"), |w| {
        Ok(evalharness::write_confusion_csv(w, &report)?)
    })?;
    write_atomic(&out_dir.join("timing.csv"), |w| {
        Ok(evalharness::write_timing_csv(w, &report)?)
    })?;
    for warning in &report.metrics.warnings {
        eprintln!("warning: {warning}");
    }
    eprintln!(
        "macro-F1 {:.5} precision {:.5} recall {:.5} -> {}",
        report.metrics.macro_f1,
        report.metrics.macro_precision,
        report.metrics.macro_recall,
        out_dir.display()
    );
    Ok(())
}

/// One classify output line.
struct LineResult {
    domain: String,
    status: &'static str,
    class: String,
    probability: Option<f64>,
    explanation: Vec<(String, f64, f64)>, // id, value, weight
}

impl LineResult {
    fn soft_failure(domain: String, status: &'static str) -> Self {
        LineResult { domain, status, class: String::new(), probability: None, explanation: Vec::new() }
    }

    fn to_csv(&self) -> String {
        // Rejected input lines can contain anything; quote the echoed
        // field when it would break the CSV shape.
        let domain = if self.domain.contains([',', '"']) {
            format!("\"{}\"", self.domain.replace('"', "\"\""))
        } else {
            self.domain.clone()
        };
        let prob = self.probability.map_or(String::new(), |p| format!("{p:.6}"));
        let expl = self
            .explanation
            .iter()
            .map(|(id, value, weight)| format!("{id}={value:.4}({weight:.4})"))
            .collect::<Vec<_>>()
            .join(";");
        format!("{domain},{},{},{},{}", self.status, self.class, prob, expl)
    }

    fn to_jsonl(&self) -> String {
        let explanation: Vec<serde_json::Value> = self
            .explanation
            .iter()
            .map(|(id, value, weight)| {
                serde_json::json!({ "feature": id, "value": value, "weight": weight })
            })
            .collect();
        serde_json::json!({
            "domain": self.domain,
            "status": self.status,
            "class": if self.class.is_empty() { serde_json::Value::Null } else { self.class.clone().into() },
            "probability": self.probability,
            "explanation": explanation,
        })
        .to_string()
    }
}

fn classify_line(
    raw: &str,
    model: &ForestModel,
    selection: &FeatureSetSelection,
    db: &SuffixDatabase,
    top_k: usize,
) -> LineResult {
    let sanitized = domains::sanitize(raw.trim());
    if !domains::validate(&sanitized) {
        return LineResult::soft_failure(sanitized, "invalid-domain");
    }
    let parsed = match domains::parse(&sanitized, db) {
        Ok(p) => p,
        Err(_) => return LineResult::soft_failure(sanitized, "bare-suffix"),
    };
    let vector = match features::extract(&parsed, selection) {
        Ok(v) => v,
        Err(_) => return LineResult::soft_failure(sanitized, "extraction-failed"),
    };
    match model.explain(vector.values(), top_k) {
        Ok(ex) => {
            let values: std::collections::HashMap<&String, f64> =
                ex.feature_values.iter().map(|(id, v)| (id, *v)).collect();
            let explanation = ex
                .attributions
                .iter()
                .map(|(id, weight)| (id.clone(), values[id], *weight))
                .collect();
            LineResult {
                domain: sanitized,
                status: "ok",
                class: ex.class_name,
                probability: Some(ex.probabilities[ex.predicted]),
                explanation,
            }
        }
        Err(_) => LineResult::soft_failure(sanitized, "prediction-failed"),
    }
}

fn classify(
    model_path: &Path,
    input: &str,
    out: Option<PathBuf>,
    top_k: usize,
    format: FormatArg,
) -> Result<()> {
    let model = ForestModel::load(open_input(model_path)?)
        .map_err(|e| anyhow!("loading model {}: {e}", model_path.display()))?;
    let selection = FeatureSetSelection::from_ids(&model.selection_name, &model.feature_ids)
        .map_err(|e| anyhow!("model selection: {e}"))?;
    let db = SuffixDatabase::bundled();

    let reader: Box<dyn BufRead> = if input == "-" {
        Box::new(BufReader::new(std::io::stdin()))
    } else {
        Box::new(BufReader::new(open_input(Path::new(input))?))
    };
    let stdout = std::io::stdout();
    let mut writer: Box<dyn Write> = match &out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(stdout.lock()),
    };

    // Streaming: buffer one bounded chunk, classify it in parallel, emit
    // results in input order. Input is one domain per line; dataset-style
    // CSV works too (first column is used, a `domain,...` header skipped).
    let mut lines = reader.lines();
    let mut first_line = true;
    let mut exhausted = false;
    while !exhausted {
        let mut chunk = Vec::with_capacity(CLASSIFY_CHUNK);
        while chunk.len() < CLASSIFY_CHUNK {
            let Some(line) = lines.next() else {
                exhausted = true;
                break;
            };
            let line = line.context("reading input")?;
            let field = line.split(',').next().unwrap_or("").trim();
            let is_header = first_line && field == "domain";
            first_line = false;
            if !is_header && !field.is_empty() {
                chunk.push(field.to_string());
            }
        }
        let results: Vec<LineResult> = chunk
            .par_iter()
            .map(|l| classify_line(l, &model, &selection, &db, top_k))
            .collect();
        for r in &results {
            let line = match format {
                FormatArg::Csv => r.to_csv(),
                FormatArg::Jsonl => r.to_jsonl(),
            };
            writeln!(writer, "{line}")?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn bench(
    model_path: &Path,
    data: Option<PathBuf>,
    samples: usize,
    batch: usize,
    parallel: bool,
    out: Option<PathBuf>,
    seed: u64,
) -> Result<()> {
    let model = ForestModel::load(open_input(model_path)?)
        .map_err(|e| anyhow!("loading model {}: {e}", model_path.display()))?;
    let selection = FeatureSetSelection::from_ids(&model.selection_name, &model.feature_ids)
        .map_err(|e| anyhow!("model selection: {e}"))?;
    let db = SuffixDatabase::bundled();

    let domains_list: Vec<String> = match data {
        Some(path) => load_dataset(&path)?.domains().to_vec(),
        None => {
            let per_family = samples.div_ceil(5).max(10);
            let mut all = synthdga::pinned_corpus(per_family, seed)?.domains().to_vec();
            all.truncate(samples);
            all
        }
    };

    let report =
        evalharness::bench_throughput(&model, &selection, &db, &domains_list, batch, parallel)?;

    let verdict = if report.within_budget { "PASS" } else { "FAIL" };
    println!(
        "samples,{}\nmean_us_per_sample,{:.3}\nmax_us_per_sample,{:.3}\nsamples_per_second,{:.1}\nbudget_us,{:.0}\nbudget_check,{verdict}",
        report.samples,
        report.mean_us_per_sample,
        report.max_us_per_sample,
        report.samples_per_second,
        report.budget_us,
    );
    if let Some(rate) = report.parallel_samples_per_second {
        println!("parallel_samples_per_second,{rate:.1}");
    }
    if let Some(path) = out {
        write_atomic(&path, |w| {
            writeln!(w, "samples,mean_us_per_sample,max_us_per_sample,samples_per_second,budget_us,within_budget,parallel_samples_per_second")?;
            writeln!(
                w,
                "{},{:.3},{:.3},{:.1},{:.0},{},{}",
                report.samples,
                report.mean_us_per_sample,
                report.max_us_per_sample,
                report.samples_per_second,
                report.budget_us,
                report.within_budget,
                report
                    .parallel_samples_per_second
                    .map_or(String::new(), |r| format!("{r:.1}"))
            )?;
            Ok(())
        })?;
    }
    Ok(())
}
