use crate::error::{Error, Result};

/// Sequence of outcome indices, one per scheduled time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistoryString {
    pub outcomes: Vec<usize>,
}

impl HistoryString {
    pub fn new(outcomes: Vec<usize>) -> Self {
        Self { outcomes }
    }

    /// Every history over `shape`, last time varying fastest.
    pub fn all(shape: &[usize]) -> Vec<HistoryString> {
        let total: usize = shape.iter().product();
        (0..total)
            .map(|flat| HistoryString::new(unflatten(shape, flat)))
            .collect()
    }
}

pub(crate) fn unflatten(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; shape.len()];
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
    out
}

pub(crate) fn flatten(shape: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

/// Dense real table over history strings, row-major with the last time fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryTable {
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl HistoryTable {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let total: usize = shape.iter().product();
        if shape.is_empty() || shape.contains(&0) || total != values.len() {
            return Err(Error::Arity {
                expected: format!("{total} entries for shape {shape:?}"),
                found: values.len(),
            });
        }
        Ok(Self { shape, values })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let total = shape.iter().product();
        Self {
            shape,
            values: vec![0.0; total],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Number of times.
    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.shape.len());
        self.values[flatten(&self.shape, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let k = flatten(&self.shape, idx);
        self.values[k] = v;
    }

    pub fn add(&mut self, idx: &[usize], v: f64) {
        let k = flatten(&self.shape, idx);
        self.values[k] += v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (unflatten(&self.shape, k), v))
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sum out every axis not listed in `keep` (kept axes stay in the given order).
    pub fn marginal(&self, keep: &[usize]) -> Result<HistoryTable> {
        if keep.iter().any(|&a| a >= self.arity()) || keep.is_empty() {
            return Err(Error::Arity {
                expected: format!("axes below {}", self.arity()),
                found: keep.iter().copied().max().unwrap_or(0),
            });
        }
        let shape: Vec<usize> = keep.iter().map(|&a| self.shape[a]).collect();
        let mut out = HistoryTable::zeros(shape);
        for (idx, v) in self.iter() {
            let sub: Vec<usize> = keep.iter().map(|&a| idx[a]).collect();
            out.add(&sub, v);
        }
        Ok(out)
    }

    /// Single-axis marginal as a vector.
    pub fn marginal_vec(&self, axis: usize) -> Result<Vec<f64>> {
        Ok(self.marginal(&[axis])?.values)
    }

    pub fn max_abs_diff(&self, other: &HistoryTable) -> f64 {
        assert_eq!(self.shape, other.shape, "table shapes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Regroup outcomes axis by axis through `maps[k][n] = new index` (coarse graining).
    pub fn regroup(&self, maps: &[Vec<usize>], new_shape: Vec<usize>) -> HistoryTable {
        let mut out = HistoryTable::zeros(new_shape);
        for (idx, v) in self.iter() {
            let sub: Vec<usize> = idx.iter().enumerate().map(|(k, &n)| maps[k][n]).collect();
            out.add(&sub, v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        let shape = [2, 3, 4];
        for flat in 0..24 {
            assert_eq!(flatten(&shape, &unflatten(&shape, flat)), flat);
        }
        assert_eq!(unflatten(&shape, 23), vec![1, 2, 3]);
    }

    #[test]
    fn marginals() {
        let t = HistoryTable::new(vec![2, 2], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.marginal_vec(0).unwrap(), vec![0.1 + 0.2, 0.3 + 0.4]);
        assert_eq!(t.marginal_vec(1).unwrap(), vec![0.1 + 0.3, 0.2 + 0.4]);
        let swapped = t.marginal(&[1, 0]).unwrap();
        assert_eq!(swapped.get(&[0, 1]), 0.3);
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(HistoryTable::new(vec![2, 2], vec![0.0; 3]).is_err());
    }

    #[test]
    fn all_histories_ordered() {
        let hs = HistoryString::all(&[2, 2]);
        assert_eq!(hs[1].outcomes, vec![0, 1]);
        assert_eq!(hs.len(), 4);
    }
}
