use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use textlier::corpus::write_embeddings;
use textlier::synthetic::{generate, SyntheticSpec};

fn textlier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textlier")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map(|it| it.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn hash_embedding_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(
        tmp.path(),
        "corpus.jsonl",
        "{\"id\":\"a\",\"text\":\"The cat sat. It purred!\"}\n{\"id\":\"b\",\"text\":\"Rain again today.\",\"source\":\"outlier_corpus\"}\n",
    );
    let out = tmp.path().join("out");
    let args = ["embed", "--input", s(&corpus), "--embed-dim", "12", "--max-sent", "4", "--out-dir", s(&out)];
    let first = textlier(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8_lossy(&first.stdout).trim(), "embedded 2 documents, 3 sentences");
    let bytes = fs::read(out.join("embeddings.jsonl")).unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().contains("\"embed_dim\":12"));
    assert!(text.lines().nth(2).unwrap().contains("\"label\":1"));
    assert!(out.join("embed.config.json").exists());

    assert!(textlier(&args).status.success());
    assert_eq!(fs::read(out.join("embeddings.jsonl")).unwrap(), bytes);
}

#[test]
fn unknown_provider_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.txt", "one line\n");
    let out = textlier(&["embed", "--input", s(&corpus), "--provider", "sbert", "--out-dir", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn injection_counts_and_pool_limit() {
    let tmp = TempDir::new().unwrap();
    let normal = write(tmp.path(), "normal.txt", "first normal.\nsecond normal.\nthird normal.\n");
    let pool = write(tmp.path(), "pool.txt", "odd one.\nodd two.\nodd three.\n");
    let out = tmp.path().join("out");

    let ok = textlier(&["inject", "--normal", s(&normal), "--outliers", s(&pool), "--n", "2", "--out-dir", s(&out)]);
    assert!(ok.status.success());
    let text = fs::read_to_string(out.join("corpus.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.matches("outlier_corpus").count(), 2);

    let zero = textlier(&["inject", "--normal", s(&normal), "--outliers", s(&pool), "--n", "0", "--out-dir", s(&out)]);
    assert!(zero.status.success());
    let text = fs::read_to_string(out.join("corpus.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.matches("outlier_corpus").count(), 0);

    let fail = textlier(&["inject", "--normal", s(&normal), "--outliers", s(&pool), "--n", "4", "--out-dir", s(&out)]);
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn missing_input_leaves_no_outputs() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let missing = tmp.path().join("nope.jsonl");
    for args in [
        vec!["embed", "--input", s(&missing), "--out-dir", s(&out)],
        vec!["train", "--embeddings", s(&missing), "--out-dir", s(&out)],
        vec!["baseline", "--scorer", "pca", "--embeddings", s(&missing), "--out-dir", s(&out)],
    ] {
        let res = textlier(&args);
        assert_eq!(res.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&res.stderr).contains("nope.jsonl"));
        assert!(listing(&out).is_empty(), "{:?}", listing(&out));
    }
}

#[test]
fn malformed_embedding_line_reports_line_number() {
    let tmp = TempDir::new().unwrap();
    let file = write(
        tmp.path(),
        "bad.jsonl",
        "{\"format\":\"textlier-emb\",\"version\":1,\"embed_dim\":2,\"max_sent\":2}\n{\"id\":\"a\",\"label\":0,\"sentences\":[[1,2]]}\n{\"id\":\"b\",\"label\":0,\"sentences\":[[1,2,3]]}\n",
    );
    let res = textlier(&["split", "--embeddings", s(&file), "--out-dir", s(tmp.path())]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 3"));
}

#[test]
fn corrupt_checkpoint_is_a_format_error() {
    let tmp = TempDir::new().unwrap();
    let ckpt = write(tmp.path(), "model.ckpt", "textlier-checkpoint\nversion 1\nblock x 2\n1 2\n");
    let emb = write(tmp.path(), "e.jsonl", "{\"format\":\"textlier-emb\",\"version\":1,\"embed_dim\":2,\"max_sent\":2}\n{\"id\":\"a\",\"label\":0,\"sentences\":[[1,2]]}\n");
    let res = textlier(&["score", "--checkpoint", s(&ckpt), "--embeddings", s(&emb), "--out-dir", s(tmp.path())]);
    assert_eq!(res.status.code(), Some(3));
    assert!(!tmp.path().join("scores.jsonl").exists());
}

#[test]
fn small_pipeline_runs_through_every_command() {
    let tmp = TempDir::new().unwrap();
    let spec = SyntheticSpec { n_normal: 160, n_outlier: 24, ..Default::default() };
    let emb = tmp.path().join("synthetic.jsonl");
    write_embeddings(&generate(&spec, 2).unwrap(), &emb).unwrap();
    let config = write(tmp.path(), "run.json", "{\"seed\": 5, \"autoencoder\": {\"epochs\": 3}}");
    let out = tmp.path().join("out");
    let o = s(&out);

    let run = |args: &[&str]| {
        let res = textlier(args);
        assert!(res.status.success(), "{args:?}: {}", String::from_utf8_lossy(&res.stderr));
        String::from_utf8(res.stdout).unwrap()
    };
    run(&["split", "--embeddings", s(&emb), "--config", s(&config), "--out-dir", o]);
    let train_lines = fs::read_to_string(out.join("train.jsonl")).unwrap().lines().count();
    let val_lines = fs::read_to_string(out.join("validation.jsonl")).unwrap().lines().count();
    let test_lines = fs::read_to_string(out.join("test.jsonl")).unwrap().lines().count();
    assert_eq!(train_lines + val_lines + test_lines - 3, 184);

    run(&["train", "--embeddings", s(&emb), "--config", s(&config), "--seed", "6", "--epochs", "8", "--out-dir", o]);
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("train.config.json")).unwrap()).unwrap();
    assert_eq!(record["run"]["seed"], 6);
    assert_eq!(record["run"]["embed_dim"], 16);
    assert_eq!(record["run"]["autoencoder"]["epochs"], 8);
    let ckpt = out.join("model.ckpt");

    run(&["score", "--checkpoint", s(&ckpt), "--embeddings", s(&emb), "--out-dir", o]);
    let scores = fs::read_to_string(out.join("scores.jsonl")).unwrap();
    assert_eq!(scores.lines().count(), 184);
    assert!(scores.lines().all(|l| l.contains("\"scorer\":\"ae_recon\"")));

    let table = run(&["eval", "--checkpoint", s(&ckpt), "--embeddings", s(&emb), "--partition", "train", "--out-dir", o]);
    assert!(table.starts_with("Item"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["partition"], "train");
    assert_eq!(report["report"]["n_samples"].as_u64().unwrap() as usize, train_lines - 1);
    assert!(report["report"]["f1"].as_f64().unwrap() > 0.9, "{report}");

    let conflict = textlier(&["eval", "--checkpoint", s(&ckpt), "--embeddings", s(&emb), "--seed", "1", "--out-dir", o]);
    assert_eq!(conflict.status.code(), Some(2));

    for scorer in ["mahalanobis", "pca"] {
        run(&["baseline", "--scorer", scorer, "--embeddings", s(&emb), "--seed", "6", "--out-dir", o]);
    }
    let lines = fs::read_to_string(out.join("baseline-pca_recon.scores.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 184);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("baseline-mahalanobis.report.json")).unwrap()).unwrap();
    assert_eq!(report["scorer"], "mahalanobis");
    assert!(report["threshold"].as_f64().is_some());
}

#[test]
fn wrong_embed_dim_flag_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let emb = write(tmp.path(), "e.jsonl", "{\"format\":\"textlier-emb\",\"version\":1,\"embed_dim\":2,\"max_sent\":2}\n{\"id\":\"a\",\"label\":0,\"sentences\":[[1,2]]}\n");
    let res = textlier(&["embed", "--provider", "file", "--input", s(&emb), "--embed-dim", "3", "--out-dir", s(tmp.path())]);
    assert_eq!(res.status.code(), Some(3));
}
