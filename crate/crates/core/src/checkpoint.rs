//! Plain-text checkpoint container.
//!
//! ```text
//! textlier-checkpoint
//! version 1
//! meta <key> <single-line JSON>
//! block <name> <dim> <dim> ...
//! <values separated by spaces, 17 significant digits>
//! end
//! ```
//!
//! Values are printed as `{:.16e}`, which round-trips every `f64` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &str = "textlier-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Checkpoint {
    meta: BTreeMap<String, String>,
    blocks: Vec<Block>,
}

impl Checkpoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_meta<V: Serialize>(&mut self, key: &str, value: &V) {
        assert!(!key.contains(char::is_whitespace), "meta keys are single tokens");
        let json = serde_json::to_string(value).expect("meta value serialises");
        self.meta.insert(key.to_string(), json);
    }

    pub fn meta<V: DeserializeOwned>(&self, key: &str) -> Result<V> {
        let raw = self
            .meta
            .get(key)
            .ok_or_else(|| Error::Format(format!("checkpoint has no {key:?} entry")))?;
        serde_json::from_str(raw).map_err(|e| Error::Format(format!("checkpoint entry {key:?}: {e}")))
    }

    pub fn push_block(&mut self, name: impl Into<String>, shape: &[usize], values: Vec<f64>) {
        let name = name.into();
        assert_eq!(shape.iter().product::<usize>(), values.len(), "block {name} shape/data mismatch");
        self.blocks.push(Block { name, shape: shape.to_vec(), values });
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Result<&Block> {
        self.blocks
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| Error::Format(format!("checkpoint has no parameter block {name:?}")))
    }

    /// Block `name`, which must have exactly `shape`.
    pub fn block_with_shape(&self, name: &str, shape: &[usize]) -> Result<&[f64]> {
        let b = self.block(name)?;
        if b.shape != shape {
            return Err(Error::Format(format!(
                "block {name:?} has shape {:?}, expected {shape:?}",
                b.shape
            )));
        }
        Ok(&b.values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{CHECKPOINT_MAGIC}\nversion {CHECKPOINT_VERSION}\n");
        for (k, v) in &self.meta {
            writeln!(out, "meta {k} {v}").unwrap();
        }
        for b in &self.blocks {
            let dims: Vec<String> = b.shape.iter().map(usize::to_string).collect();
            writeln!(out, "block {} {}", b.name, dims.join(" ")).unwrap();
            let vals: Vec<String> = b.values.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", vals.join(" ")).unwrap();
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l == CHECKPOINT_MAGIC => {}
            _ => return Err(Error::Format(format!("not a checkpoint: first line must be {CHECKPOINT_MAGIC:?}"))),
        }
        match lines.next() {
            Some((_, l)) if l == format!("version {CHECKPOINT_VERSION}") => {}
            Some((n, l)) => return Err(err(n, format!("unsupported checkpoint version line {l:?}"))),
            None => return Err(Error::Format("truncated checkpoint".into())),
        }
        let mut ckpt = Checkpoint::new();
        loop {
            let Some((n, line)) = lines.next() else {
                return Err(Error::Format("truncated checkpoint: missing \"end\"".into()));
            };
            if line == "end" {
                break;
            }
            if let Some(rest) = line.strip_prefix("meta ") {
                let (key, json) = rest.split_once(' ').ok_or_else(|| err(n, "meta line needs a key and a value".into()))?;
                ckpt.meta.insert(key.to_string(), json.to_string());
            } else if let Some(rest) = line.strip_prefix("block ") {
                let mut parts = rest.split(' ');
                let name = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| err(n, "block without a name".into()))?;
                let shape = parts
                    .map(|p| p.parse::<usize>().map_err(|e| err(n, format!("bad dimension {p:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let (vn, vline) = lines.next().ok_or_else(|| err(n + 1, "missing block values".into()))?;
                let values = if vline.is_empty() {
                    Vec::new()
                } else {
                    vline
                        .split(' ')
                        .map(|v| v.parse::<f64>().map_err(|e| err(vn, format!("bad value {v:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?
                };
                if shape.iter().product::<usize>() != values.len() {
                    return Err(err(vn, format!("block {name} declares {shape:?} but has {} values", values.len())));
                }
                ckpt.blocks.push(Block { name: name.to_string(), shape, values });
            } else {
                return Err(err(n, format!("unexpected line {:?}", truncate(line))));
            }
        }
        if let Some((n, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(err(n, format!("content after \"end\": {:?}", truncate(l))));
        }
        Ok(ckpt)
    }
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(40) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}
