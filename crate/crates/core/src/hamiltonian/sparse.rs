//! Real sparse operators in compressed-row form.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::ops::{AddAssign, Mul};

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dimension above which [`SparseOperator::to_dense`] refuses.
pub const DENSE_DIM_CAP: usize = 20_000;

/// Real square matrix in CSR layout with sorted, deduplicated columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> SparseOperator {
        SparseOperator {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> SparseOperator {
        SparseOperator::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> SparseOperator {
        SparseOperator::from_rows(diag.len(), |r, out| out.push((r, diag[r])))
    }

    /// Builds row by row. `fill(r, out)` appends `(col, value)` pairs for
    /// row `r`; duplicates are summed and exact zeros dropped.
    pub fn from_rows<F>(dim: usize, fill: F) -> SparseOperator
    where
        F: Fn(usize, &mut Vec<(usize, f64)>) + Sync,
    {
        let rows: Vec<Vec<(usize, f64)>> = (0..dim)
            .into_par_iter()
            .map_init(Vec::new, |scratch, r| {
                scratch.clear();
                fill(r, scratch);
                normalize_row(scratch)
            })
            .collect();
        SparseOperator::from_row_lists(dim, rows)
    }

    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Result<SparseOperator> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for &(r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::InvalidInput(format!(
                    "triplet ({r}, {c}) outside dimension {dim}"
                )));
            }
            rows[r].push((c, v));
        }
        let rows = rows.into_iter().map(|mut r| normalize_row(&mut r)).collect();
        Ok(SparseOperator::from_row_lists(dim, rows))
    }

    fn from_row_lists(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> SparseOperator {
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(col, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_rc - A_cr|`.
    pub fn asymmetry(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    /// `y = A x`.
    pub fn apply<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + Send + Sync + Zero + AddAssign + Mul<f64, Output = T>,
    {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.par_iter_mut().enumerate().for_each(|(r, yr)| {
            let mut acc = T::zero();
            for (c, v) in self.row(r) {
                acc += x[c] * v;
            }
            *yr = acc;
        });
    }

    pub fn apply_vec<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + Send + Sync + Zero + AddAssign + Mul<f64, Output = T>,
    {
        let mut y = vec![T::zero(); self.dim];
        self.apply(x, &mut y);
        y
    }

    pub fn scaled(&self, s: f64) -> SparseOperator {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SparseOperator, s: f64) -> Result<SparseOperator> {
        self.check_dim(other)?;
        Ok(SparseOperator::from_rows(self.dim, |r, out| {
            out.extend(self.row(r));
            out.extend(other.row(r).map(|(c, v)| (c, s * v)));
        }))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        Ok(SparseOperator::from_rows(self.dim, |r, out| {
            for (k, a) in self.row(r) {
                out.extend(other.row(k).map(|(c, b)| (c, a * b)));
            }
        }))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.matmul(other)?.add_scaled(&other.matmul(self)?, -1.0)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.dim > DENSE_DIM_CAP {
            return Err(Error::Capacity(format!(
                "dense form of dimension {} exceeds cap {DENSE_DIM_CAP}",
                self.dim
            )));
        }
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        Ok(m)
    }

    /// Submatrix on the given sorted basis indices.
    pub fn restrict(&self, basis: &[usize]) -> SparseOperator {
        let position: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        SparseOperator::from_rows(basis.len(), |i, out| {
            for (c, v) in self.row(basis[i]) {
                if let Some(&j) = position.get(&c) {
                    out.push((j, v));
                }
            }
        })
    }

    fn check_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::InvalidInput(format!(
                "dimension mismatch {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Little-endian binary dump: `u64 dim, u64 nnz`, then `nnz` records of
    /// `(u64 row, u64 col, f64 value)`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.nnz() as u64).to_le_bytes())?;
        for (r, c, v) in self.triplets() {
            w.write_all(&(r as u64).to_le_bytes())?;
            w.write_all(&(c as u64).to_le_bytes())?;
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<SparseOperator> {
        let mut word = [0u8; 8];
        let mut next = |r: &mut R| -> Result<[u8; 8]> {
            r.read_exact(&mut word)
                .map_err(|e| Error::Parse(format!("truncated operator dump: {e}")))?;
            Ok(word)
        };
        let dim = u64::from_le_bytes(next(&mut r)?) as usize;
        let nnz = u64::from_le_bytes(next(&mut r)?) as usize;
        let mut triplets = Vec::with_capacity(nnz.min(1 << 24));
        for _ in 0..nnz {
            let row = u64::from_le_bytes(next(&mut r)?) as usize;
            let col = u64::from_le_bytes(next(&mut r)?) as usize;
            let val = f64::from_le_bytes(next(&mut r)?);
            triplets.push((row, col, val));
        }
        SparseOperator::from_triplets(dim, &triplets)
    }

    /// Text form: a `dim nnz` header line, then one `row col value` line per
    /// entry with round-trip float formatting.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.dim, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(w, "{r} {c} {v:?}")?;
        }
        w.flush()
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<SparseOperator> {
        let mut lines = r.lines();
        let parse_err = |m: &str| Error::Parse(m.to_string());
        let header = lines
            .next()
            .ok_or_else(|| parse_err("empty operator text"))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut h = header.split_whitespace();
        let dim: usize = h
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err("bad dim"))?;
        let nnz: usize = h
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err("bad nnz"))?;
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut t = line.split_whitespace();
            let row = t.next().and_then(|x| x.parse().ok());
            let col = t.next().and_then(|x| x.parse().ok());
            let val = t.next().and_then(|x| x.parse().ok());
            match (row, col, val) {
                (Some(r), Some(c), Some(v)) => triplets.push((r, c, v)),
                _ => return Err(Error::Parse(format!("bad triplet line `{line}`"))),
            }
        }
        if triplets.len() != nnz {
            return Err(Error::Parse(format!(
                "header says {nnz} entries, found {}",
                triplets.len()
            )));
        }
        SparseOperator::from_triplets(dim, &triplets)
    }
}

fn normalize_row(row: &mut Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    row.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| v != 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseOperator {
        SparseOperator::from_triplets(3, &[(0, 0, 1.0), (0, 2, 0.5), (2, 0, 0.5), (1, 1, -2.0), (0, 0, 1.0)]).unwrap()
    }

    #[test]
    fn duplicates_sum() {
        let a = sample();
        assert_eq!(a.get(0, 0), 2.0);
        assert_eq!(a.nnz(), 4);
        assert_eq!(a.asymmetry(), 0.0);
    }

    #[test]
    fn matvec_and_product() {
        let a = sample();
        assert_eq!(a.apply_vec(&[1.0, 1.0, 1.0]), vec![2.5, -2.0, 0.5]);
        let sq = a.matmul(&a).unwrap();
        let dense = a.to_dense().unwrap();
        let want = &dense * &dense;
        assert_eq!(sq.to_dense().unwrap(), want);
        assert_eq!(a.commutator(&a).unwrap().nnz(), 0);
    }

    #[test]
    fn binary_and_text_roundtrip() {
        let a = sample();
        let mut buf = Vec::new();
        a.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 24 * a.nnz());
        assert_eq!(SparseOperator::read_binary(&buf[..]).unwrap(), a);
        let mut text = Vec::new();
        a.write_text(&mut text).unwrap();
        assert_eq!(SparseOperator::read_text(&text[..]).unwrap(), a);
        assert!(SparseOperator::read_binary(&buf[..20]).is_err());
    }

    #[test]
    fn restriction() {
        let a = sample();
        let r = a.restrict(&[0, 2]);
        assert_eq!(
            r.to_dense().unwrap(),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 0.0])
        );
    }
}
