use serde::{Deserialize, Serialize};

use super::loss::Loss;
use crate::error::{Error, Result};

/// An ordered collection of losses sharing one parameter dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset<L> {
    dim: usize,
    items: Vec<L>,
}

impl<L: Loss> Dataset<L> {
    /// Builds a non-empty dataset, taking the dimension from the first item.
    pub fn new(items: Vec<L>) -> Result<Self> {
        let dim = items
            .first()
            .map(Loss::dim)
            .ok_or_else(|| Error::invalid("dataset", "no records"))?;
        Self::with_dim(dim, items)
    }

    /// Builds a possibly empty dataset of the given dimension.
    pub fn with_dim(dim: usize, items: Vec<L>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("d", "dimension must be positive"));
        }
        if let Some(bad) = items.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
        }
        Ok(Self { dim, items })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[L] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, L> {
        self.items.iter()
    }

    pub fn into_items(self) -> Vec<L> {
        self.items
    }
}

impl<L: Loss + Clone> Dataset<L> {
    /// The neighbor obtained by replacing record `index` with `replacement`.
    pub fn neighbor(&self, index: usize, replacement: L) -> Result<Self> {
        if index >= self.items.len() {
            return Err(Error::invalid("index", format!("{index} out of range for n = {}", self.len())));
        }
        if replacement.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: replacement.dim() });
        }
        let mut items = self.items.clone();
        items[index] = replacement;
        Ok(Self { dim: self.dim, items })
    }
}

impl<L: PartialEq> Dataset<L> {
    /// Index of the single differing record, `None` for identical datasets, or an error
    /// when the datasets are not neighbors.
    pub fn differing_index(&self, other: &Self) -> Result<Option<usize>> {
        if self.dim != other.dim {
            return Err(Error::NotNeighbors(format!("dimensions {} and {}", self.dim, other.dim)));
        }
        if self.items.len() != other.items.len() {
            return Err(Error::NotNeighbors(format!(
                "sizes {} and {}",
                self.items.len(),
                other.items.len()
            )));
        }
        let diffs: Vec<usize> =
            (0..self.items.len()).filter(|&i| self.items[i] != other.items[i]).collect();
        match diffs.as_slice() {
            [] => Ok(None),
            [i] => Ok(Some(*i)),
            many => Err(Error::NotNeighbors(format!("{} records differ", many.len()))),
        }
    }
}

impl<'a, L> IntoIterator for &'a Dataset<L> {
    type Item = &'a L;
    type IntoIter = std::slice::Iter<'a, L>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Losses paired with real weights, as consumed by a weighted optimization oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedDataset<L> {
    dim: usize,
    items: Vec<(L, f64)>,
}

impl<L: Loss> WeightedDataset<L> {
    pub fn new(dim: usize, items: Vec<(L, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("d", "dimension must be positive"));
        }
        for (l, p) in &items {
            if l.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: l.dim() });
            }
            if !p.is_finite() {
                return Err(Error::invalid("weight", format!("non-finite weight {p}")));
            }
        }
        Ok(Self { dim, items })
    }

    /// Every record with weight one.
    pub fn unit(data: &Dataset<L>) -> Self
    where
        L: Clone,
    {
        Self { dim: data.dim(), items: data.iter().cloned().map(|l| (l, 1.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(L, f64)] {
        &self.items
    }

    pub fn push(&mut self, loss: L, weight: f64) -> Result<()> {
        if loss.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: loss.dim() });
        }
        self.items.push((loss, weight));
        Ok(())
    }
}
