//! Kernel extraction and low-lying spectra, block by block.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::blocks::{gershgorin_floor, BlockDecomposition};
use super::lanczos::{lowest_eigenpairs, LanczosConfig};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::hamiltonian::SparseOperator;

/// Numerical settings shared by the solvers.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Eigenvalues below this count as zero.
    pub kernel_tol: f64,
    /// The first eigenvalue above the kernel must be at least this multiple
    /// of `kernel_tol`.
    pub gap_ratio: f64,
    /// Blocks up to this size are diagonalized densely.
    pub dense_block_cap: usize,
    pub lanczos: LanczosConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            kernel_tol: 1e-9,
            gap_ratio: 10.0,
            dense_block_cap: 10_000,
            lanczos: LanczosConfig::default(),
        }
    }
}

/// Kernel of a positive semidefinite operator.
#[derive(Clone, Debug)]
pub struct GroundSpace {
    /// Orthonormal kernel vectors in the full space.
    pub vectors: Vec<StateVector>,
    /// Smallest eigenvalue above the kernel.
    pub gap: f64,
    /// Largest kernel eigenvalue found (numerical zero).
    pub kernel_max: f64,
    pub blocks: usize,
    pub largest_block: usize,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.vectors.len()
    }

    /// Norm of the projection of `state` onto the kernel.
    pub fn projection_norm(&self, state: &StateVector) -> f64 {
        self.vectors.iter().map(|g| g.dot(state).powi(2)).sum::<f64>().sqrt()
    }

    /// Orthogonal projection of `state` onto the kernel.
    pub fn project(&self, state: &StateVector) -> StateVector {
        let mut out = vec![0.0; state.dim()];
        for g in &self.vectors {
            let c = g.dot(state);
            for (o, a) in out.iter_mut().zip(g.amplitudes()) {
                *o += c * a;
            }
        }
        StateVector::from_amplitudes(state.sites(), out)
    }
}

/// Lowest eigenvalues with diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSlice {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

struct BlockPairs {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    iterations: usize,
}

fn residual(op: &SparseOperator, value: f64, v: &[f64]) -> f64 {
    let hv = op.apply_vec(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Eigenpairs of one block: all of them if dense, else the lowest ones up to
/// and including the first above `above`.
fn solve_block(op: &SparseOperator, block: &[usize], above: f64, k: usize, cfg: &SolverConfig) -> Result<BlockPairs> {
    if let [i] = block {
        return Ok(BlockPairs {
            values: vec![op.get(*i, *i)],
            vectors: vec![vec![1.0]],
            residuals: vec![0.0],
            iterations: 0,
        });
    }
    let sub = op.restrict(block);
    if block.len() <= cfg.dense_block_cap {
        let eig = SymmetricEigen::new(sub.to_dense()?);
        let mut order: Vec<usize> = (0..block.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut out = BlockPairs {
            values: Vec::new(),
            vectors: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
        };
        for &i in order.iter().take(k) {
            let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            out.residuals.push(residual(&sub, eig.eigenvalues[i], &v));
            out.values.push(eig.eigenvalues[i]);
            out.vectors.push(v);
        }
        return Ok(out);
    }
    let pairs = lowest_eigenpairs(|x, y| sub.apply(x, y), block.len(), k, |v| v > above, &cfg.lanczos)?;
    Ok(BlockPairs {
        values: pairs.iter().map(|p| p.value).collect(),
        residuals: pairs.iter().map(|p| p.residual).collect(),
        iterations: pairs.iter().map(|p| p.iterations).sum(),
        vectors: pairs.into_iter().map(|p| p.vector).collect(),
    })
}

fn embed(dim: usize, block: &[usize], v: &[f64], n_sites: usize) -> StateVector {
    let mut full = vec![0.0; dim];
    for (&i, &x) in block.iter().zip(v) {
        full[i] = x;
    }
    StateVector::from_amplitudes(n_sites, full)
}

fn sites_of(dim: usize) -> usize {
    let mut n = 0;
    let mut d = 1;
    while d < dim {
        d *= 6;
        n += 1;
    }
    if d == dim {
        n
    } else {
        0
    }
}

/// Kernel of `op` with the default settings.
pub fn ground_space(op: &SparseOperator, tol: f64) -> Result<GroundSpace> {
    ground_space_with(
        op,
        &SolverConfig {
            kernel_tol: tol,
            ..SolverConfig::default()
        },
    )
}

/// Kernel of `op`: every eigenvector with eigenvalue below `kernel_tol`.
/// Fails when the lowest eigenvalue above the kernel sits below
/// `gap_ratio * kernel_tol`.
pub fn ground_space_with(op: &SparseOperator, cfg: &SolverConfig) -> Result<GroundSpace> {
    let dim = op.dim();
    let n_sites = sites_of(dim);
    let decomposition = BlockDecomposition::of(op);
    let mut vectors = Vec::new();
    let mut gap = f64::INFINITY;
    let mut kernel_max = 0.0f64;
    for block in decomposition.blocks() {
        let floor = gershgorin_floor(op, block);
        if floor > cfg.kernel_tol && floor >= gap {
            continue;
        }
        let pairs = solve_block(op, block, cfg.kernel_tol, block.len(), cfg)?;
        for (value, v) in pairs.values.iter().zip(&pairs.vectors) {
            if *value < cfg.kernel_tol {
                kernel_max = kernel_max.max(value.abs());
                vectors.push(embed(dim, block, v, n_sites));
            } else {
                gap = gap.min(*value);
                break;
            }
        }
    }
    if gap < cfg.gap_ratio * cfg.kernel_tol {
        return Err(Error::AmbiguousKernel(format!(
            "{} kernel vectors, but the next eigenvalue {gap:e} is within {}x of the tolerance {:e}",
            vectors.len(),
            cfg.gap_ratio,
            cfg.kernel_tol
        )));
    }
    Ok(GroundSpace {
        vectors,
        gap,
        kernel_max,
        blocks: decomposition.len(),
        largest_block: decomposition.largest(),
    })
}

/// The `k` smallest eigenvalues (with eigenvectors when `with_vectors`).
pub fn low_spectrum(op: &SparseOperator, k: usize, with_vectors: bool, cfg: &SolverConfig) -> Result<SpectrumSlice> {
    if k > op.dim() {
        return Err(Error::InvalidInput(format!(
            "asked for {k} eigenvalues of a {}-dimensional operator",
            op.dim()
        )));
    }
    let dim = op.dim();
    let decomposition = BlockDecomposition::of(op);
    let mut all: Vec<(f64, f64, Option<Vec<f64>>)> = Vec::new();
    let mut iterations = 0;
    for block in decomposition.blocks() {
        if all.len() >= k {
            let kth = all[k - 1].0;
            if gershgorin_floor(op, block) > kth {
                continue;
            }
        }
        let pairs = solve_block(op, block, f64::INFINITY, k.min(block.len()), cfg)?;
        iterations += pairs.iterations;
        for ((value, res), v) in pairs.values.into_iter().zip(pairs.residuals).zip(pairs.vectors) {
            let full = with_vectors.then(|| embed(dim, block, &v, 0).into_amplitudes());
            all.push((value, res, full));
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all.truncate(k);
    }
    let residuals = all.iter().map(|p| p.1).collect();
    let eigenvalues = all.iter().map(|p| p.0).collect();
    let eigenvectors = with_vectors.then(|| all.into_iter().map(|p| p.2.expect("vectors kept")).collect());
    Ok(SpectrumSlice {
        eigenvalues,
        eigenvectors,
        residuals,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity_spectrum() {
        let op = SparseOperator::identity(50).scaled(3.0);
        let s = low_spectrum(&op, 4, false, &SolverConfig::default()).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0; 4]);
    }

    #[test]
    fn kernel_and_gap() {
        let op = SparseOperator::from_diagonal(&[0.0, 2.0, 0.0, 5.0]);
        let g = ground_space(&op, 1e-9).unwrap();
        assert_eq!(g.degeneracy(), 2);
        assert_eq!(g.gap, 2.0);
    }

    #[test]
    fn ambiguous_kernel_rejected() {
        let op = SparseOperator::from_diagonal(&[0.0, 5e-9, 1.0]);
        assert!(matches!(ground_space(&op, 1e-9), Err(Error::AmbiguousKernel(_))));
    }

    #[test]
    fn lanczos_blocks_agree_with_dense() {
        // a 2x2 block [[1,-1],[-1,1]] repeated on a ring of 30 sites
        let n = 30;
        let mut t = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            t.push((i, i, 1.0));
            t.push((j, j, 1.0));
            t.push((i, j, -1.0));
            t.push((j, i, -1.0));
        }
        let op = SparseOperator::from_triplets(n, &t).unwrap();
        let dense = ground_space(&op, 1e-9).unwrap();
        let cfg = SolverConfig {
            dense_block_cap: 4,
            ..SolverConfig::default()
        };
        let iterative = ground_space_with(&op, &cfg).unwrap();
        assert_eq!(dense.degeneracy(), 1);
        assert_eq!(iterative.degeneracy(), 1);
        assert!((dense.gap - iterative.gap).abs() < 1e-8);
    }
}
