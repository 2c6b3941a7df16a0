use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;

use super::{EmbeddedDocument, Label};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions { train: 0.7, validation: 0.15, test: 0.15 }
    }
}

impl SplitFractions {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self> {
        let f = SplitFractions { train, validation, test };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = self.as_array();
        if parts.iter().any(|&p| !(0.0..=1.0).contains(&p) || !p.is_finite()) {
            return Err(Error::arg(format!("split fractions must lie in [0, 1], got {parts:?}")));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!("split fractions must sum to 1, got {sum}")));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.train, self.validation, self.test]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Validation,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Validation, Partition::Test];

    pub fn name(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Validation => "validation",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Partition::Train),
            "validation" | "val" => Ok(Partition::Validation),
            "test" => Ok(Partition::Test),
            other => Err(Error::arg(format!("unknown partition {other:?} (train, validation, test)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: Vec<EmbeddedDocument>,
    pub validation: Vec<EmbeddedDocument>,
    pub test: Vec<EmbeddedDocument>,
    pub seed: u64,
    pub fractions: SplitFractions,
}

impl DatasetSplit {
    pub fn get(&self, p: Partition) -> &[EmbeddedDocument] {
        match p {
            Partition::Train => &self.train,
            Partition::Validation => &self.validation,
            Partition::Test => &self.test,
        }
    }
}

/// Per-class allocation by largest remainder, then every partition with a
/// non-zero fraction is topped up to at least one item.
fn allocate(n: usize, fractions: [f64; 3], class: Label) -> Result<[usize; 3]> {
    let active = fractions.iter().filter(|&&f| f > 0.0).count();
    if n < active {
        return Err(Error::Stratification(format!(
            "class {} has {n} documents but {active} partitions need at least one each",
            class.as_u8()
        )));
    }
    let exact: Vec<f64> = fractions.iter().map(|f| f * n as f64).collect();
    let mut counts = [0usize; 3];
    for (c, e) in counts.iter_mut().zip(&exact) {
        *c = e.floor() as usize;
    }
    let mut by_remainder: Vec<usize> = (0..3).filter(|&i| fractions[i] > 0.0).collect();
    by_remainder.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    let mut left = n - counts.iter().sum::<usize>();
    for &i in by_remainder.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    for i in 0..3 {
        if fractions[i] > 0.0 && counts[i] == 0 {
            let donor = (0..3).max_by_key(|&j| (counts[j], std::cmp::Reverse(j))).expect("three partitions");
            counts[donor] -= 1;
            counts[i] += 1;
        }
    }
    Ok(counts)
}

/// Stratified three-way split: each class is shuffled and divided by the
/// fractions independently, then each partition is shuffled.
pub fn stratified_split(docs: &[EmbeddedDocument], fractions: SplitFractions, seed: u64) -> Result<DatasetSplit> {
    fractions.validate()?;
    let mut rng = seeded(seed);
    let mut parts: [Vec<EmbeddedDocument>; 3] = Default::default();
    for class in [Label::Normal, Label::Outlier] {
        let mut members: Vec<&EmbeddedDocument> = docs.iter().filter(|d| d.label == class).collect();
        if members.is_empty() {
            continue;
        }
        members.shuffle(&mut rng);
        let counts = allocate(members.len(), fractions.as_array(), class)?;
        let mut rest = members.as_slice();
        for (part, &count) in parts.iter_mut().zip(&counts) {
            let (take, tail) = rest.split_at(count);
            part.extend(take.iter().map(|&d| d.clone()));
            rest = tail;
        }
    }
    for part in parts.iter_mut() {
        part.shuffle(&mut rng);
    }
    let [train, validation, test] = parts;
    Ok(DatasetSplit { train, validation, test, seed, fractions })
}
