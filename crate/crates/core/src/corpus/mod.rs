//! From raw text to labelled embedding matrices: sentence splitting, the
//! embedding provider boundary, outlier injection, stratified splits,
//! oversampling and the on-disk formats.

mod document;
mod embed;
mod format;
mod hash;
mod inject;
mod oversample;
mod sentences;
mod split;

pub use document::{EmbeddedDocument, Label, RawDocument, Source};
pub use embed::{embed_document, embed_document_with, EmbeddingProvider};
pub use format::{
    read_embeddings, read_embeddings_from, read_raw_corpus, write_embeddings, write_embeddings_to, write_raw_corpus,
    EmbeddingHeader, EMBEDDING_FORMAT, EMBEDDING_VERSION,
};
pub use hash::{hash_embed, HashEmbedder};
pub use inject::inject_outliers;
pub use oversample::oversample;
pub use sentences::{split_sentences, PunctuationSplitter, SentenceSplitter};
pub use split::{stratified_split, DatasetSplit, Partition, SplitFractions};
