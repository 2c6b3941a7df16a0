use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::Serialize;
use textlier::baselines::{fit_baseline, ScorerKind};
use textlier::config::RunConfig;
use textlier::corpus::{
    embed_document, inject_outliers, read_raw_corpus, write_embeddings_to, write_raw_corpus, EmbeddedDocument,
    HashEmbedder, Label, Partition, Source,
};
use textlier::eval::{evaluate_documents, EvalReport};
use textlier::pipeline::{split_for, train_pipeline, PipelineModel};
use textlier::Error;

use crate::args::{BaselineArg, Command, PartitionArg, Provider, SharedArgs, TrainTuning};
use crate::error::{CliError, CliResult, WithPath};
use crate::output::Outputs;
use crate::settings::{read_embedding_file, CommandRecord, Settings};

pub fn execute(shared: &SharedArgs, command: &Command) -> CliResult<()> {
    match command {
        Command::Embed { inputs, provider, output } => embed(shared, inputs, *provider, output),
        Command::Inject { normal, outliers, n, output } => inject(shared, normal, outliers, *n, output),
        Command::Split { embeddings } => split(shared, embeddings),
        Command::Train { embeddings, output, tuning } => train(shared, embeddings, output, tuning),
        Command::Score { checkpoint, embeddings, output } => score(shared, checkpoint, embeddings, output),
        Command::Eval { checkpoint, embeddings, partition, output } => {
            eval(shared, checkpoint, embeddings, *partition, output)
        }
        Command::Baseline { scorer, embeddings, partition, output } => {
            baseline(shared, *scorer, embeddings, *partition, output.as_deref())
        }
    }
}

fn out_path(shared: &SharedArgs, name: impl AsRef<Path>) -> PathBuf {
    shared.out_dir.join(name)
}

fn record<I: Serialize>(outputs: &mut Outputs, shared: &SharedArgs, command: &str, inputs: I, run: &RunConfig) {
    let text = CommandRecord { command, inputs, run }.to_json();
    outputs.add(out_path(shared, format!("{command}.config.json")), text);
}

fn embedding_bytes(docs: &[EmbeddedDocument]) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_embeddings_to(&mut buf, docs)?;
    Ok(buf)
}

fn finish(outputs: Outputs) -> CliResult<()> {
    for path in outputs.commit()? {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn embed(shared: &SharedArgs, inputs: &[PathBuf], provider: Provider, output: &Path) -> CliResult<()> {
    let mut settings = Settings::load(shared)?;
    let docs = match provider {
        Provider::Hash => {
            let embedder = HashEmbedder::new(settings.run.embed_dim);
            let mut docs = Vec::new();
            for path in inputs {
                for raw in read_raw_corpus(path, Source::NormalCorpus).at(path)? {
                    docs.push(embed_document(&raw, &embedder, settings.run.max_sent).at(path)?);
                }
            }
            docs
        }
        Provider::File => {
            let mut docs = Vec::new();
            for path in inputs {
                docs.extend(settings.read_embeddings(path)?);
            }
            docs
        }
    };
    let mut ids = HashSet::new();
    if let Some(d) = docs.iter().find(|d| !ids.insert(d.id.as_str())) {
        return Err(Error::Format(format!("duplicate document id {:?} across inputs", d.id)).into());
    }
    if docs.is_empty() {
        return Err(Error::Format("inputs contain no documents".into()).into());
    }
    let run = settings.resolve()?;
    let sentences: usize = docs.iter().map(|d| d.sentence_count()).sum();
    let truncated = docs.iter().filter(|d| d.sentence_count() > run.max_sent).count();
    if truncated > 0 {
        log::info!("{truncated} documents exceed max_sent {} and will be truncated on load", run.max_sent);
    }

    let mut outputs = Outputs::new();
    outputs.add(out_path(shared, output), embedding_bytes(&docs)?);
    #[derive(Serialize)]
    struct Inputs<'a> {
        inputs: &'a [PathBuf],
        provider: &'a str,
    }
    let provider = match provider {
        Provider::Hash => "hash",
        Provider::File => "file",
    };
    record(&mut outputs, shared, "embed", Inputs { inputs, provider }, &run);
    finish(outputs)?;
    println!("embedded {} documents, {sentences} sentences", docs.len());
    Ok(())
}

fn inject(shared: &SharedArgs, normal: &Path, outliers: &Path, n: Option<usize>, output: &Path) -> CliResult<()> {
    let mut settings = Settings::load(shared)?;
    if let Some(n) = n {
        settings.run.n_inject = n;
    }
    let run = settings.resolve()?;
    let normal_docs = read_raw_corpus(normal, Source::NormalCorpus).at(normal)?;
    let pool = read_raw_corpus(outliers, Source::OutlierCorpus).at(outliers)?;
    let mixed = inject_outliers(&normal_docs, &pool, run.n_inject, run.stage_seed("inject"))?;
    let mut buf = Vec::new();
    write_raw_corpus(&mut buf, &mixed)?;

    let mut outputs = Outputs::new();
    outputs.add(out_path(shared, output), buf);
    #[derive(Serialize)]
    struct Inputs<'a> {
        normal: &'a Path,
        outliers: &'a Path,
    }
    record(&mut outputs, shared, "inject", Inputs { normal, outliers }, &run);
    finish(outputs)?;
    println!("wrote {} documents ({} injected outliers)", mixed.len(), run.n_inject);
    Ok(())
}

#[derive(Serialize)]
struct EmbeddingInput<'a> {
    embeddings: &'a Path,
}

fn split(shared: &SharedArgs, embeddings: &Path) -> CliResult<()> {
    let mut settings = Settings::load(shared)?;
    let docs = settings.read_embeddings(embeddings)?;
    let run = settings.resolve()?;
    let split = split_for(&docs, &run)?;
    let mut outputs = Outputs::new();
    for p in [Partition::Train, Partition::Validation, Partition::Test] {
        let part = split.get(p);
        outputs.add(out_path(shared, format!("{}.jsonl", p.name())), embedding_bytes(part)?);
        let outliers = part.iter().filter(|d| d.label.is_outlier()).count();
        println!("{}: {} documents, {outliers} outliers", p.name(), part.len());
    }
    record(&mut outputs, shared, "split", EmbeddingInput { embeddings }, &run);
    finish(outputs)
}

fn apply_tuning(run: &mut RunConfig, t: &TrainTuning) {
    let ae = &mut run.autoencoder;
    if let Some(v) = t.epochs {
        ae.epochs = v;
    }
    if let Some(v) = t.batch_size {
        ae.batch_size = v;
    }
    if let Some(v) = t.latent_dim {
        ae.latent_dim = v;
    }
    if let Some(v) = t.learning_rate {
        ae.optimizer.learning_rate = v;
    }
    if t.masked_loss {
        ae.masked_loss = true;
    }
    let clf = &mut run.classifier;
    if let Some(v) = t.lambda {
        clf.lambda = v;
    }
    if let Some(v) = t.threshold {
        clf.threshold = v;
    }
    if let Some(v) = t.classifier_epochs {
        clf.epochs = v;
    }
}

fn train(shared: &SharedArgs, embeddings: &Path, output: &Path, tuning: &TrainTuning) -> CliResult<()> {
    let mut settings = Settings::load(shared)?;
    let docs = settings.read_embeddings(embeddings)?;
    apply_tuning(&mut settings.run, tuning);
    let run = settings.resolve()?;
    let (model, split) = train_pipeline::<f64>(&docs, &run)?;

    let mut outputs = Outputs::new();
    outputs.add(out_path(shared, output), model.to_checkpoint_text());
    record(&mut outputs, shared, "train", EmbeddingInput { embeddings }, &model.run);
    finish(outputs)?;
    let log = &model.autoencoder.training_log;
    let outliers = split.train.iter().filter(|d| d.label.is_outlier()).count();
    println!("trained on {} documents ({outliers} outliers)", split.train.len());
    if let (Some(first), Some(last)) = (log.first(), log.last()) {
        println!("autoencoder loss {first:.6e} -> {last:.6e} over {} epochs", log.len());
    }
    let s = &model.classifier.summary;
    println!("classifier loss {:.6e} -> {:.6e}, gradient norm {:.3e}", s.initial_loss, s.final_loss, s.final_grad_norm);
    Ok(())
}

fn reject_run_flags(shared: &SharedArgs, command: &str) -> CliResult<()> {
    let given = [
        ("--seed", shared.seed.is_some()),
        ("--config", shared.config.is_some()),
        ("--max-sent", shared.max_sent.is_some()),
        ("--embed-dim", shared.embed_dim.is_some()),
    ];
    match given.iter().find(|(_, set)| *set) {
        Some((flag, _)) => Err(CliError::usage(format!("{command}: {flag} is fixed by the checkpoint"))),
        None => Ok(()),
    }
}

fn load_checkpoint(path: &Path) -> CliResult<PipelineModel<f64>> {
    let text = std::fs::read_to_string(path).at(path)?;
    PipelineModel::from_checkpoint_text(&text).at(path)
}

/// Reads documents shaped for `model`.
fn load_for_model(model: &PipelineModel<f64>, path: &Path) -> CliResult<Vec<EmbeddedDocument>> {
    let (header, docs) = read_embedding_file(path, Some(model.run.max_sent))?;
    if header.embed_dim != model.run.embed_dim {
        return Err(CliError::File {
            path: path.to_path_buf(),
            source: Error::Format(format!(
                "file has embed_dim {}, checkpoint expects {}",
                header.embed_dim, model.run.embed_dim
            )),
        });
    }
    Ok(docs)
}

#[derive(Serialize)]
struct ScoreLine<'a> {
    id: &'a str,
    score: f64,
    scorer: ScorerKind,
    probability: f64,
    predicted: Label,
    label: Label,
}

fn jsonl<S: Serialize>(rows: impl IntoIterator<Item = S>) -> Vec<u8> {
    let mut buf = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut buf, &row).expect("row serialises");
        buf.push(b'\n');
    }
    buf
}

#[derive(Serialize)]
struct CheckpointInputs<'a> {
    checkpoint: &'a Path,
    embeddings: &'a Path,
}

fn score(shared: &SharedArgs, checkpoint: &Path, embeddings: &Path, output: &Path) -> CliResult<()> {
    reject_run_flags(shared, "score")?;
    let model = load_checkpoint(checkpoint)?;
    let docs = load_for_model(&model, embeddings)?;
    let predictions = model.predict_batch(&docs)?;
    let rows = docs.iter().zip(&predictions).map(|(d, p)| ScoreLine {
        id: &d.id,
        score: p.features.recon_error,
        scorer: ScorerKind::AeRecon,
        probability: p.probability,
        predicted: p.label,
        label: d.label,
    });
    let mut outputs = Outputs::new();
    outputs.add(out_path(shared, output), jsonl(rows));
    record(&mut outputs, shared, "score", CheckpointInputs { checkpoint, embeddings }, &model.run);
    finish(outputs)?;
    let flagged = predictions.iter().filter(|p| p.label.is_outlier()).count();
    println!("scored {} documents, {flagged} predicted outliers", docs.len());
    Ok(())
}

fn partition_name(p: PartitionArg) -> &'static str {
    match p {
        PartitionArg::Train => "train",
        PartitionArg::Validation => "validation",
        PartitionArg::Test => "test",
        PartitionArg::All => "all",
    }
}

fn select(docs: &[EmbeddedDocument], run: &RunConfig, p: PartitionArg) -> CliResult<Vec<EmbeddedDocument>> {
    let part = match p {
        PartitionArg::Train => Partition::Train,
        PartitionArg::Validation => Partition::Validation,
        PartitionArg::Test => Partition::Test,
        PartitionArg::All => return Ok(docs.to_vec()),
    };
    Ok(split_for(docs, run)?.get(part).to_vec())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    scorer: ScorerKind,
    partition: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    report: &'a EvalReport,
}

fn add_report(outputs: &mut Outputs, shared: &SharedArgs, stem: &str, file: &ReportFile) -> String {
    let mut json = serde_json::to_string_pretty(file).expect("report serialises");
    json.push('\n');
    outputs.add(out_path(shared, format!("{stem}.json")), json);
    let table = file.report.to_table(file.partition);
    outputs.add(out_path(shared, format!("{stem}.txt")), table.clone());
    table
}

fn eval(shared: &SharedArgs, checkpoint: &Path, embeddings: &Path, p: PartitionArg, stem: &str) -> CliResult<()> {
    reject_run_flags(shared, "eval")?;
    let model = load_checkpoint(checkpoint)?;
    let docs = load_for_model(&model, embeddings)?;
    let selected = select(&docs, &model.run, p)?;
    let report = evaluate_documents(&model, &selected)?;
    let mut outputs = Outputs::new();
    let file = ReportFile { scorer: ScorerKind::AeRecon, partition: partition_name(p), threshold: None, report: &report };
    let table = add_report(&mut outputs, shared, stem, &file);
    record(&mut outputs, shared, "eval", CheckpointInputs { checkpoint, embeddings }, &model.run);
    finish(outputs)?;
    print!("{table}");
    Ok(())
}

#[derive(Serialize)]
struct BaselineLine<'a> {
    id: &'a str,
    score: f64,
    scorer: ScorerKind,
    predicted: Label,
    label: Label,
    partition: &'a str,
}

fn baseline(
    shared: &SharedArgs,
    scorer: BaselineArg,
    embeddings: &Path,
    p: PartitionArg,
    stem: Option<&str>,
) -> CliResult<()> {
    let mut settings = Settings::load(shared)?;
    let docs = settings.read_embeddings(embeddings)?;
    let run = settings.resolve()?;
    let kind = match scorer {
        BaselineArg::Mahalanobis => ScorerKind::Mahalanobis,
        BaselineArg::Pca => ScorerKind::PcaRecon,
    };
    let split = split_for(&docs, &run)?;
    let model = fit_baseline::<f64>(kind, &split.train, &run.baseline)?;

    let mut partition_of: HashMap<&str, &str> = HashMap::new();
    for part in [Partition::Train, Partition::Validation, Partition::Test] {
        for d in split.get(part) {
            partition_of.insert(d.id.as_str(), part.name());
        }
    }
    let mut rows = Vec::with_capacity(docs.len());
    for d in &docs {
        let score = model.score(d)?;
        if !score.is_finite() {
            return Err(Error::NonFinite(format!("baseline score of {:?}", d.id)).into());
        }
        let predicted = if score > model.threshold { Label::Outlier } else { Label::Normal };
        rows.push(BaselineLine { id: &d.id, score, scorer: kind, predicted, label: d.label, partition: partition_of[d.id.as_str()] });
    }
    let selected = select(&docs, &run, p)?;
    let labels: Vec<Label> = selected.iter().map(|d| d.label).collect();
    let predicted = selected.iter().map(|d| model.predict(d)).collect::<textlier::Result<Vec<_>>>()?;
    let report = EvalReport::from_predictions(&labels, &predicted)?;

    let stem = stem.map_or_else(|| format!("baseline-{}", kind.name()), str::to_string);
    let mut outputs = Outputs::new();
    outputs.add(out_path(shared, format!("{stem}.scores.jsonl")), jsonl(rows));
    let file =
        ReportFile { scorer: kind, partition: partition_name(p), threshold: Some(model.threshold), report: &report };
    let table = add_report(&mut outputs, shared, &format!("{stem}.report"), &file);
    record(&mut outputs, shared, "baseline", EmbeddingInput { embeddings }, &run);
    finish(outputs)?;
    print!("{table}");
    Ok(())
}
