use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonzero entries sorted by feature id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
    dim: usize,
}

impl SparseVector {
    /// Builds from `(id, value)` pairs; repeated ids are summed and zeros
    /// dropped.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> = pairs.into_iter().collect();
        if let Some(&(id, _)) = entries.iter().find(|(id, _)| *id >= dim) {
            return Err(Error::invalid(format!("feature id {id} outside dimension {dim}")));
        }
        if entries.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid("non-finite feature value"));
        }
        entries.sort_by_key(|&(id, _)| id);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (id, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == id => last.1 += v,
                _ => merged.push((id, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0.0);
        Ok(SparseVector { entries: merged, dim })
    }

    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::from_pairs(values.len(), values.iter().copied().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, id: usize) -> f64 {
        self.entries
            .binary_search_by_key(&id, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            d[i] = v;
        }
        d
    }

    /// Renumbers features through `perm` (old id -> new id).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::from_pairs(self.dim, self.entries.iter().map(|&(i, v)| (perm[i], v)))
    }
}
