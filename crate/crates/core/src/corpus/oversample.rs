use rand::seq::{IndexedRandom, SliceRandom};

use crate::error::{Error, Result};
use crate::rng::seeded;

use super::Label;

/// Random oversampling: minority items are duplicated, sampled uniformly with
/// replacement, until both classes have the majority count. The result is
/// shuffled.
pub fn oversample<I: Clone>(items: &[(I, Label)], seed: u64) -> Result<Vec<(I, Label)>> {
    let outliers = items.iter().filter(|(_, l)| l.is_outlier()).count();
    let normals = items.len() - outliers;
    if outliers == 0 || normals == 0 {
        return Err(Error::arg("oversampling needs both classes present"));
    }
    let minority_label = if outliers < normals { Label::Outlier } else { Label::Normal };
    let minority: Vec<&(I, Label)> = items.iter().filter(|(_, l)| *l == minority_label).collect();
    let deficit = outliers.abs_diff(normals);
    let mut rng = seeded(seed);
    let mut out = items.to_vec();
    for _ in 0..deficit {
        out.push((*minority.choose(&mut rng).expect("minority is non-empty")).clone());
    }
    out.shuffle(&mut rng);
    Ok(out)
}
