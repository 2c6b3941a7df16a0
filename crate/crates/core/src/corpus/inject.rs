use std::collections::HashSet;

use rand::seq::{index, SliceRandom};

use crate::error::{Error, Result};
use crate::rng::seeded;

use super::{RawDocument, Source};

/// Mixes `n_inject` documents drawn uniformly without replacement from
/// `outlier_pool` into `normal`, then shuffles. Sources are set by role so
/// that labelling follows: normal documents become label 0, injected ones 1.
pub fn inject_outliers(
    normal: &[RawDocument],
    outlier_pool: &[RawDocument],
    n_inject: usize,
    seed: u64,
) -> Result<Vec<RawDocument>> {
    if n_inject > outlier_pool.len() {
        return Err(Error::arg(format!(
            "cannot inject {n_inject} outliers from a pool of {}",
            outlier_pool.len()
        )));
    }
    let mut rng = seeded(seed);
    let picked = index::sample(&mut rng, outlier_pool.len(), n_inject);
    let mut out: Vec<RawDocument> = normal
        .iter()
        .map(|d| RawDocument { source: Source::NormalCorpus, ..d.clone() })
        .chain(picked.iter().map(|i| RawDocument { source: Source::OutlierCorpus, ..outlier_pool[i].clone() }))
        .collect();
    let mut seen = HashSet::new();
    if let Some(dup) = out.iter().find(|d| !seen.insert(d.id.as_str())) {
        return Err(Error::arg(format!("document id {:?} occurs more than once", dup.id)));
    }
    out.shuffle(&mut rng);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(prefix: &str, n: usize) -> Vec<RawDocument> {
        (0..n)
            .map(|i| RawDocument { id: format!("{prefix}{i}"), text: format!("text {i}."), source: Source::NormalCorpus })
            .collect()
    }

    #[test]
    fn injects_exact_count() {
        let out = inject_outliers(&docs("n", 50), &docs("o", 30), 12, 4).unwrap();
        assert_eq!(out.len(), 62);
        let outliers: Vec<_> = out.iter().filter(|d| d.source == Source::OutlierCorpus).collect();
        assert_eq!(outliers.len(), 12);
        assert!(outliers.iter().all(|d| d.id.starts_with('o')));
    }

    #[test]
    fn zero_injection_is_a_permutation() {
        let normal = docs("n", 20);
        let mut out = inject_outliers(&normal, &docs("o", 3), 0, 9).unwrap();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        let mut expected = normal.clone();
        expected.sort_by(|a, b| a.id.cmp(&b.id));
        assert_eq!(out, expected);
    }

    #[test]
    fn seeded_and_bounded() {
        let a = inject_outliers(&docs("n", 20), &docs("o", 10), 5, 1).unwrap();
        assert_eq!(a, inject_outliers(&docs("n", 20), &docs("o", 10), 5, 1).unwrap());
        assert!(inject_outliers(&docs("n", 2), &docs("o", 3), 4, 1).is_err());
        assert!(inject_outliers(&docs("x", 2), &docs("x", 3), 2, 1).is_err());
    }
}
