//! Run-config resolution: defaults, then the JSON config file, then flags.
//! When neither the file nor a flag sets `max_sent` or `embed_dim`, the
//! values in the input embedding header are used.

use std::path::Path;

use serde::Serialize;
use textlier::config::RunConfig;
use textlier::corpus::{read_embeddings_from, EmbeddedDocument, EmbeddingHeader};
use textlier::Error;

use crate::args::SharedArgs;
use crate::error::{CliError, CliResult, WithPath};

#[derive(Debug, Clone)]
pub struct Settings {
    pub run: RunConfig,
    max_sent_set: bool,
    embed_dim_set: bool,
}

impl Settings {
    pub fn load(shared: &SharedArgs) -> CliResult<Self> {
        let (mut run, keys) = match &shared.config {
            None => (RunConfig::default(), Vec::new()),
            Some(path) => {
                let text = std::fs::read_to_string(path).at(path)?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Format(format!("config is not valid JSON: {e}")))
                    .at(path)?;
                let keys: Vec<String> = match &value {
                    serde_json::Value::Object(m) => m.keys().cloned().collect(),
                    _ => return Err(Error::Format("config must be a JSON object".into())).at(path),
                };
                let run = serde_json::from_value(value)
                    .map_err(|e| Error::Format(format!("invalid config: {e}")))
                    .at(path)?;
                (run, keys)
            }
        };
        let has = |k: &str| keys.iter().any(|x| x == k);
        if let Some(seed) = shared.seed {
            run.seed = seed;
        }
        if let Some(m) = shared.max_sent {
            run.max_sent = m;
        }
        if let Some(d) = shared.embed_dim {
            run.embed_dim = d;
        }
        Ok(Settings {
            max_sent_set: shared.max_sent.is_some() || has("max_sent"),
            embed_dim_set: shared.embed_dim.is_some() || has("embed_dim"),
            run,
        })
    }

    /// Reads an embedding file, filling unset shape values from its header.
    /// Later files must then agree with the first.
    pub fn read_embeddings(&mut self, path: &Path) -> CliResult<Vec<EmbeddedDocument>> {
        let (header, docs) = read_embedding_file(path, self.max_sent_set.then_some(self.run.max_sent))?;
        self.adopt(&header, path)?;
        Ok(docs)
    }

    pub fn adopt(&mut self, header: &EmbeddingHeader, path: &Path) -> CliResult<()> {
        if self.embed_dim_set && header.embed_dim != self.run.embed_dim {
            return Err(CliError::File {
                path: path.to_path_buf(),
                source: Error::Format(format!(
                    "file has embed_dim {}, run is configured for {}",
                    header.embed_dim, self.run.embed_dim
                )),
            });
        }
        self.run.embed_dim = header.embed_dim;
        if !self.max_sent_set {
            self.run.max_sent = header.max_sent;
        }
        self.embed_dim_set = true;
        self.max_sent_set = true;
        Ok(())
    }

    pub fn resolve(self) -> CliResult<RunConfig> {
        Ok(self.run.resolve()?)
    }
}

/// Reads an embedding file that must contain at least one document.
pub fn read_embedding_file(
    path: &Path,
    max_sent: Option<usize>,
) -> CliResult<(EmbeddingHeader, Vec<EmbeddedDocument>)> {
    let file = std::fs::File::open(path).at(path)?;
    let (header, docs) = read_embeddings_from(std::io::BufReader::new(file), max_sent).at(path)?;
    match header {
        Some(h) if !docs.is_empty() => Ok((h, docs)),
        _ => Err(CliError::File { path: path.to_path_buf(), source: Error::Format("no documents".into()) }),
    }
}

/// What a command persists as `<command>.config.json`.
#[derive(Serialize)]
pub struct CommandRecord<'a, I: Serialize> {
    pub command: &'a str,
    pub inputs: I,
    pub run: &'a RunConfig,
}

impl<I: Serialize> CommandRecord<'_, I> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serialises");
        s.push('\n');
        s
    }
}
