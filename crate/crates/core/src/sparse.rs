//! Row-compressed real operators on a configuration basis.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Assemble from per-row entry lists. Duplicate columns are summed,
    /// exact zeros dropped and columns sorted within each row.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        assert_eq!(rows.len(), dim, "one entry list per row");
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                assert!(c < dim, "column {c} out of range {dim}");
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != 0.0 {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            values,
        }
    }

    /// Assemble rows in parallel; `row` must depend only on its index.
    pub fn par_from_fn<F>(dim: usize, row: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, f64)> + Sync + Send,
    {
        let rows: Vec<Vec<(usize, f64)>> = (0..dim).into_par_iter().map(row).collect();
        Self::from_rows(dim, rows)
    }

    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows = vec![Vec::new(); dim];
        for &(i, j, v) in triplets {
            rows[i].push((j, v));
        }
        Self::from_rows(dim, rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_rows(dim, (0..dim).map(|i| vec![(i, 1.0)]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        let body = |(i, yi): (usize, &mut f64)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        };
        if self.dim >= 4096 {
            y.par_iter_mut().enumerate().for_each(body);
        } else {
            y.iter_mut().enumerate().for_each(body);
        }
    }

    /// `⟨x|A|x⟩` for a real vector.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        (0..self.dim)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * x[j]).sum::<f64>())
            .sum()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v));
        }
        Self::from_rows(self.dim, rows)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.linear_combination(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.linear_combination(1.0, other, -1.0)
    }

    fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.dim, other.dim);
        let rows = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .map(|(j, v)| (j, a * v))
                    .chain(other.row(i).map(|(j, v)| (j, b * v)))
                    .collect()
            })
            .collect();
        Self::from_rows(self.dim, rows)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::par_from_fn(self.dim, |i| {
            let mut acc = Vec::new();
            for (k, a) in self.row(i) {
                acc.extend(other.row(k).map(|(j, b)| (j, a * b)));
            }
            acc
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entry of `AB − BA`.
    pub fn commutator_max_entry(&self, other: &Self) -> f64 {
        self.matmul(other).sub(&other.matmul(self)).max_abs()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        self.sub(&self.transpose()).max_abs()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    /// `Q^T A Q` for a dense column block `Q`.
    pub fn project(&self, q: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(q.nrows(), self.dim);
        let aq_cols: Vec<DVector<f64>> = (0..q.ncols())
            .into_par_iter()
            .map(|c| {
                let col: Vec<f64> = q.column(c).iter().copied().collect();
                DVector::from_vec(self.mul_vec(&col))
            })
            .collect();
        let aq = DMatrix::from_columns(&aq_cols);
        q.transpose() * aq
    }

    /// Plain-text export: header `dim nnz`, then one `i j value` line per
    /// stored entry.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.dim, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i} {j} {v:e}")?;
        }
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty triplet file".into()))??;
        let mut parts = header.split_whitespace();
        let parse_usize = |s: Option<&str>| -> Result<usize> {
            s.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Config(format!("bad triplet header `{header}`")))
        };
        let dim = parse_usize(parts.next())?;
        let nnz = parse_usize(parts.next())?;
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Config(format!("bad triplet line `{line}`"));
            if fields.len() != 3 {
                return Err(bad());
            }
            let i: usize = fields[0].parse().map_err(|_| bad())?;
            let j: usize = fields[1].parse().map_err(|_| bad())?;
            let v: f64 = fields[2].parse().map_err(|_| bad())?;
            if i >= dim || j >= dim {
                return Err(bad());
            }
            triplets.push((i, j, v));
        }
        if triplets.len() != nnz {
            return Err(Error::Config(format!(
                "header announces {nnz} entries, found {}",
                triplets.len()
            )));
        }
        Ok(Self::from_triplets(dim, &triplets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseOperator {
        SparseOperator::from_triplets(
            3,
            &[(0, 0, 1.0), (0, 2, 0.5), (2, 0, 0.5), (1, 1, -2.0), (1, 1, 1.0)],
        )
    }

    #[test]
    fn assembly_merges_duplicates() {
        let a = sample();
        assert_eq!(a.nnz(), 4);
        assert_eq!(a.get(1, 1), -1.0);
        assert_eq!(a.get(1, 2), 0.0);
        assert_eq!(a.max_asymmetry(), 0.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![1.5, -1.0, 0.5]);
        assert_eq!(a.expectation(&[1.0, 0.0, 1.0]), 2.0);
    }

    #[test]
    fn products_match_dense() {
        let a = sample();
        let b = SparseOperator::from_triplets(3, &[(0, 1, 1.0), (1, 0, 1.0), (2, 2, 3.0)]);
        let dense = a.to_dense() * b.to_dense() - b.to_dense() * a.to_dense();
        let sparse = a.matmul(&b).sub(&b.matmul(&a)).to_dense();
        assert!((dense - sparse).amax() < 1e-15);
        assert!(a.commutator_max_entry(&SparseOperator::identity(3)) == 0.0);
    }

    #[test]
    fn triplet_text_round_trip() {
        let a = sample();
        let mut buf = Vec::new();
        a.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("3 4\n"));
        let b = SparseOperator::read_triplets(&buf[..]).unwrap();
        assert_eq!(a, b);
        assert!(SparseOperator::read_triplets("2 1\n0 5 1.0\n".as_bytes()).is_err());
    }
}
