use crate::rng::fnv1a;

use super::EmbeddingProvider;

/// Signed feature hashing of lowercase whitespace tokens, L2-normalised.
///
/// Bucket is `(h >> 1) mod dim` and the sign is `-1` when the low bit of the
/// 64-bit FNV-1a hash `h` is set.
pub fn hash_embed(sentence: &str, dim: usize) -> Vec<f64> {
    assert!(dim >= 1, "embedding dimension must be at least 1");
    let mut v = vec![0.0; dim];
    for token in sentence.split_whitespace() {
        let h = fnv1a(token.to_lowercase().as_bytes());
        let sign = if h & 1 == 1 { -1.0 } else { 1.0 };
        v[((h >> 1) % dim as u64) as usize] += sign;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Offline stand-in for a pretrained sentence encoder.
#[derive(Debug, Clone, Copy)]
pub struct HashEmbedder {
    pub dim: usize,
}

impl HashEmbedder {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "embedding dimension must be at least 1");
        HashEmbedder { dim }
    }
}

impl EmbeddingProvider for HashEmbedder {
    fn name(&self) -> &str {
        "hash"
    }

    fn embed_dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, sentence: &str) -> Vec<f64> {
        hash_embed(sentence, self.dim)
    }
}
