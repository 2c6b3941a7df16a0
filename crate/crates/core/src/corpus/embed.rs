use crate::error::{Error, Result};

use super::{EmbeddedDocument, PunctuationSplitter, RawDocument, SentenceSplitter};

/// Maps one sentence to a fixed-length vector. Must be deterministic per
/// instance; implementations shared across threads must be `Sync`.
pub trait EmbeddingProvider {
    fn name(&self) -> &str;

    fn embed_dim(&self) -> usize;

    fn embed(&self, sentence: &str) -> Vec<f64>;
}

pub fn embed_document(doc: &RawDocument, provider: &dyn EmbeddingProvider, max_sent: usize) -> Result<EmbeddedDocument> {
    embed_document_with(doc, provider, &PunctuationSplitter, max_sent)
}

pub fn embed_document_with(
    doc: &RawDocument,
    provider: &dyn EmbeddingProvider,
    splitter: &dyn SentenceSplitter,
    max_sent: usize,
) -> Result<EmbeddedDocument> {
    let sentences = splitter.split(&doc.text)?;
    if sentences.is_empty() {
        return Err(Error::arg(format!("document {:?} has no sentences", doc.id)));
    }
    let dim = provider.embed_dim();
    let vectors = sentences
        .iter()
        .map(|s| {
            let v = provider.embed(s);
            if v.len() == dim {
                Ok(v)
            } else {
                Err(Error::shape(format!(
                    "provider {} returned {} values, declared {dim}",
                    provider.name(),
                    v.len()
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EmbeddedDocument::new(doc.id.clone(), doc.source.label(), &vectors, max_sent)
}
