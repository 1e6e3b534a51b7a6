use crate::error::{Error, Result};

/// Binary-labeled sample with a flat row-major feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    xs: Vec<f64>,
    ys: Vec<u8>,
}

impl Dataset {
    /// Build a dataset from flattened features (`dim` values per point) and
    /// labels. Labels must be 0 or 1 and features finite.
    pub fn new(dim: usize, xs: Vec<f64>, ys: Vec<u8>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidData("feature dimension must be ≥ 1".into()));
        }
        if xs.len() != dim * ys.len() {
            return Err(Error::InvalidData(format!(
                "{} feature values but {} points of dimension {dim}",
                xs.len(),
                ys.len()
            )));
        }
        if let Some(v) = xs.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite feature value {v}")));
        }
        if let Some(y) = ys.iter().find(|&&y| y > 1) {
            return Err(Error::InvalidData(format!("label {y} outside {{0, 1}}")));
        }
        Ok(Dataset { dim, xs, ys })
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Dataset {
            dim,
            xs: Vec::with_capacity(dim * n),
            ys: Vec::with_capacity(n),
        }
    }

    /// Append a point; the caller guarantees `x.len() == dim` and `y ≤ 1`.
    pub fn push(&mut self, x: &[f64], y: u8) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert!(y <= 1);
        self.xs.extend_from_slice(x);
        self.ys.push(y);
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> u8 {
        self.ys[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.ys
    }

    pub fn features(&self) -> &[f64] {
        &self.xs
    }

    /// Copy out the points with indices in `range`.
    pub fn subset(&self, range: std::ops::Range<usize>) -> Dataset {
        Dataset {
            dim: self.dim,
            xs: self.xs[range.start * self.dim..range.end * self.dim].to_vec(),
            ys: self.ys[range.clone()].to_vec(),
        }
    }

    /// Reorder points by the given permutation of indices.
    pub fn permuted(&self, order: &[usize]) -> Dataset {
        debug_assert_eq!(order.len(), self.len());
        let mut out = Dataset::with_capacity(self.dim, self.len());
        for &i in order {
            out.push(self.row(i), self.label(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_labels() {
        assert!(Dataset::new(0, vec![], vec![]).is_err());
        assert!(Dataset::new(2, vec![0.0, 1.0, 2.0], vec![0, 1]).is_err());
        assert!(Dataset::new(1, vec![0.0, 1.0], vec![0, 2]).is_err());
        assert!(Dataset::new(1, vec![f64::NAN], vec![0]).is_err());
    }

    #[test]
    fn rows_and_subsets() {
        let d = Dataset::new(2, vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5], vec![1, 0, 1]).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.row(1), &[0.2, 0.3]);
        let tail = d.subset(1..3);
        assert_eq!(tail.len(), 2);
        assert_eq!(tail.row(0), &[0.2, 0.3]);
        assert_eq!(tail.labels(), &[0, 1]);
        let rev = d.permuted(&[2, 1, 0]);
        assert_eq!(rev.row(0), &[0.4, 0.5]);
        assert_eq!(rev.labels(), &[1, 0, 1]);
    }
}
