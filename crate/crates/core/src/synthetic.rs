//! Seeded synthetic corpora for tests, demos and the end-to-end check.
//!
//! Normal sentence vectors live near a random low-rank subspace: every
//! document draws a topic centre in the subspace and its sentences scatter
//! around it, plus small isotropic noise. Outlier documents come from the
//! same process with the mean shifted along a fixed unit direction
//! orthogonal to the subspace.

use rand_distr::{Distribution, StandardNormal};

use crate::corpus::{EmbeddedDocument, Label};
use crate::error::{Error, Result};
use crate::rng::{stage_rng, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_normal: usize,
    pub n_outlier: usize,
    pub embed_dim: usize,
    pub max_sent: usize,
    /// Inclusive range of sentences per document.
    pub sentences: (usize, usize),
    pub rank: usize,
    pub topic_scale: f64,
    pub sentence_scale: f64,
    pub noise: f64,
    /// Length of the outlier mean shift.
    pub shift: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_normal: 1000,
            n_outlier: 100,
            embed_dim: 16,
            max_sent: 8,
            sentences: (3, 10),
            rank: 4,
            topic_scale: 1.0,
            sentence_scale: 0.5,
            noise: 0.05,
            shift: 1.5,
        }
    }
}

fn normal_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt on random Gaussian vectors: `count` orthonormal vectors.
fn orthonormal(rng: &mut Rng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v = normal_vec(rng, dim);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

/// The subspace basis and outlier direction implied by a seed.
pub fn geometry(spec: &SyntheticSpec, seed: u64) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if spec.rank + 1 > spec.embed_dim {
        return Err(Error::arg("rank + 1 must not exceed embed_dim"));
    }
    let mut rng = stage_rng(seed, "synthetic-geometry");
    let mut vecs = orthonormal(&mut rng, spec.embed_dim, spec.rank + 1);
    let direction = vecs.pop().expect("rank + 1 vectors");
    Ok((vecs, direction))
}

/// Generated document: id, label and sentence vectors.
pub type SentenceDoc = (String, Label, Vec<Vec<f64>>);

pub fn sentence_vectors(spec: &SyntheticSpec, seed: u64) -> Result<Vec<SentenceDoc>> {
    let (lo, hi) = spec.sentences;
    if lo == 0 || hi < lo {
        return Err(Error::arg("sentence range must be 1 <= lo <= hi"));
    }
    let (basis, direction) = geometry(spec, seed)?;
    let mut rng = stage_rng(seed, "synthetic-docs");
    let mut out = Vec::with_capacity(spec.n_normal + spec.n_outlier);
    let total = spec.n_normal + spec.n_outlier;
    for i in 0..total {
        let outlier = i >= spec.n_normal;
        let (id, label) = if outlier {
            (format!("o{:05}", i - spec.n_normal), Label::Outlier)
        } else {
            (format!("n{i:05}"), Label::Normal)
        };
        let mut centre = vec![0.0; spec.embed_dim];
        for b in &basis {
            let u: f64 = StandardNormal.sample(&mut rng);
            centre.iter_mut().zip(b).for_each(|(c, x)| *c += spec.topic_scale * u * x);
        }
        if outlier {
            centre.iter_mut().zip(&direction).for_each(|(c, d)| *c += spec.shift * d);
        }
        let count = lo + (rand::Rng::random_range(&mut rng, 0..=hi - lo));
        let sentences = (0..count)
            .map(|_| {
                let mut s = centre.clone();
                for b in &basis {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    s.iter_mut().zip(b).for_each(|(x, y)| *x += spec.sentence_scale * z * y);
                }
                for x in s.iter_mut() {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    *x += spec.noise * e;
                }
                s
            })
            .collect();
        out.push((id, label, sentences));
    }
    Ok(out)
}

/// Normal documents first, then outliers.
pub fn generate(spec: &SyntheticSpec, seed: u64) -> Result<Vec<EmbeddedDocument>> {
    sentence_vectors(spec, seed)?
        .into_iter()
        .map(|(id, label, s)| EmbeddedDocument::new(id, label, &s, spec.max_sent))
        .collect()
}
