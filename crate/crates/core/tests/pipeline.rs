use textlier::autoencoder::AeConfig;
use textlier::config::RunConfig;
use textlier::corpus::Partition;
use textlier::eval::evaluate_pipeline;
use textlier::pipeline::{train_pipeline, PipelineModel};
use textlier::synthetic::{generate, SyntheticSpec};

fn small_run() -> (Vec<textlier::corpus::EmbeddedDocument>, RunConfig) {
    let spec = SyntheticSpec { n_normal: 300, n_outlier: 40, ..Default::default() };
    let run = RunConfig {
        seed: 4,
        max_sent: spec.max_sent,
        embed_dim: spec.embed_dim,
        autoencoder: AeConfig { epochs: 15, ..Default::default() },
        ..Default::default()
    };
    (generate(&spec, 4).unwrap(), run.resolve().unwrap())
}

#[test]
fn synthetic_pipeline_separates_and_round_trips() {
    let (docs, run) = small_run();
    let (model, split) = train_pipeline::<f64>(&docs, &run).unwrap();
    let validation = evaluate_pipeline(&model, &split, Partition::Validation).unwrap();
    assert!(validation.f1 >= 0.9, "{validation:?}");
    let train = evaluate_pipeline(&model, &split, Partition::Train).unwrap();
    assert!(train.f1 >= 0.95, "{train:?}");

    let text = model.to_checkpoint_text();
    let restored = PipelineModel::<f64>::from_checkpoint_text(&text).unwrap();
    assert_eq!(restored.to_checkpoint_text(), text);
    for d in &split.test {
        let (a, b) = (model.predict(d).unwrap(), restored.predict(d).unwrap());
        assert_eq!(a.probability.to_bits(), b.probability.to_bits());
        assert_eq!(a.label, b.label);
    }

    let (again, _) = train_pipeline::<f64>(&docs, &run).unwrap();
    assert_eq!(again.to_checkpoint_text(), text);
}
