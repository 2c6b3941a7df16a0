//! Canonical JSON-lines files.
//!
//! Embedding file: a header object
//! `{"format":"textlier-emb","version":1,"embed_dim":D,"max_sent":M}` then one
//! `{"id":..,"label":0|1,"sentences":[[D reals]; k]}` per document holding all
//! `k ≥ 1` stored sentence vectors. Padding/truncation to `max_sent` happens
//! at load time.
//!
//! Raw corpus file: one `{"id":..,"text":..,"source":"normal_corpus"|"outlier_corpus"}`
//! per line. Plain `.txt` files are also accepted, one document per line.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{EmbeddedDocument, Label, RawDocument, Source};

pub const EMBEDDING_FORMAT: &str = "textlier-emb";
pub const EMBEDDING_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingHeader {
    pub format: String,
    pub version: u32,
    pub embed_dim: usize,
    pub max_sent: usize,
}

impl EmbeddingHeader {
    pub fn new(embed_dim: usize, max_sent: usize) -> Self {
        EmbeddingHeader { format: EMBEDDING_FORMAT.into(), version: EMBEDDING_VERSION, embed_dim, max_sent }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentLine {
    id: String,
    label: Label,
    sentences: Vec<Vec<f64>>,
}

/// Reads an embedding file using the header's `max_sent`.
pub fn read_embeddings(path: impl AsRef<Path>) -> Result<Vec<EmbeddedDocument>> {
    let file = File::open(path.as_ref())?;
    Ok(read_embeddings_from(BufReader::new(file), None)?.1)
}

/// Parses an embedding stream. `max_sent` overrides the header value. An
/// empty stream yields no header and no documents.
pub fn read_embeddings_from<R: BufRead>(
    reader: R,
    max_sent: Option<usize>,
) -> Result<(Option<EmbeddingHeader>, Vec<EmbeddedDocument>)> {
    let mut header: Option<EmbeddingHeader> = None;
    let mut docs = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let Some(h) = &header else {
            let h: EmbeddingHeader = serde_json::from_str(&line)
                .map_err(|e| Error::Parse { line: lineno, message: format!("invalid header: {e}") })?;
            if h.format != EMBEDDING_FORMAT || h.version != EMBEDDING_VERSION {
                return Err(Error::Format(format!(
                    "line {lineno}: expected {EMBEDDING_FORMAT} version {EMBEDDING_VERSION}, found {} version {}",
                    h.format, h.version
                )));
            }
            if h.embed_dim == 0 || h.max_sent == 0 {
                return Err(Error::Format(format!("line {lineno}: embed_dim and max_sent must be positive")));
            }
            header = Some(h);
            continue;
        };
        let doc: DocumentLine =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
        if doc.sentences.is_empty() {
            return Err(Error::Format(format!("line {lineno}: document {:?} has no sentences", doc.id)));
        }
        if let Some((i, s)) = doc.sentences.iter().enumerate().find(|(_, s)| s.len() != h.embed_dim) {
            return Err(Error::Format(format!(
                "line {lineno}: sentence {i} of {:?} has {} values, header says embed_dim {}",
                doc.id,
                s.len(),
                h.embed_dim
            )));
        }
        if !ids.insert(doc.id.clone()) {
            return Err(Error::Format(format!("line {lineno}: duplicate document id {:?}", doc.id)));
        }
        let m = max_sent.unwrap_or(h.max_sent);
        let embedded = EmbeddedDocument::new(doc.id, doc.label, &doc.sentences, m)
            .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
        docs.push(embedded);
    }
    Ok((header, docs))
}

/// Writes `docs` with a header taken from the first document. All documents
/// must share `embed_dim` and `max_sent`; an empty list writes an empty file.
pub fn write_embeddings(docs: &[EmbeddedDocument], path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    write_embeddings_to(&mut w, docs)?;
    w.flush()?;
    Ok(())
}

pub fn write_embeddings_to<W: Write>(mut w: W, docs: &[EmbeddedDocument]) -> Result<()> {
    let Some(first) = docs.first() else {
        return Ok(());
    };
    let header = EmbeddingHeader::new(first.embed_dim(), first.max_sent());
    if let Some(d) = docs.iter().find(|d| d.embed_dim() != header.embed_dim || d.max_sent() != header.max_sent) {
        return Err(Error::shape(format!(
            "document {:?} is {}x{}, expected {}x{}",
            d.id,
            d.max_sent(),
            d.embed_dim(),
            header.max_sent,
            header.embed_dim
        )));
    }
    serde_json::to_writer(&mut w, &header).map_err(std::io::Error::from)?;
    w.write_all(b"\n")?;
    for d in docs {
        let line = DocumentLine {
            id: d.id.clone(),
            label: d.label,
            sentences: d.sentences().map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_writer(&mut w, &line).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawLine {
    id: String,
    text: String,
    source: Option<Source>,
}

/// Reads a raw corpus. Lines without a `source` get `default_source`.
/// Files ending in `.txt` are read as one document per non-empty line with
/// ids `<file stem>-<line number>`.
pub fn read_raw_corpus(path: impl AsRef<Path>, default_source: Source) -> Result<Vec<RawDocument>> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let plain = path.extension().is_some_and(|e| e == "txt");
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut docs = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc = if plain {
            RawDocument { id: format!("{stem}-{lineno}"), text: line.trim().to_string(), source: default_source }
        } else {
            let raw: RawLine =
                serde_json::from_str(&line).map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
            RawDocument { id: raw.id, text: raw.text, source: raw.source.unwrap_or(default_source) }
        };
        if doc.text.trim().is_empty() {
            return Err(Error::Format(format!("line {lineno}: document {:?} has empty text", doc.id)));
        }
        if !ids.insert(doc.id.clone()) {
            return Err(Error::Format(format!("line {lineno}: duplicate document id {:?}", doc.id)));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_raw_corpus<W: Write>(mut w: W, docs: &[RawDocument]) -> Result<()> {
    for d in docs {
        serde_json::to_writer(&mut w, d).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
