//! Real-time evolution `exp(-i H t)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::blocks::BlockDecomposition;
use super::lanczos::krylov_expm;
use super::state::ComplexState;
use crate::error::{Error, Result};
use crate::hamiltonian::SparseOperator;

const KRYLOV_DIM: usize = 40;
const KRYLOV_STEP_TOL: f64 = 1e-9;

enum BlockPropagator {
    Single {
        index: usize,
        energy: f64,
    },
    Dense {
        indices: Vec<usize>,
        energies: DVector<f64>,
        vectors: DMatrix<f64>,
    },
    Krylov {
        indices: Vec<usize>,
        op: SparseOperator,
    },
}

/// Reusable propagator: each invariant block is diagonalized once (dense) or
/// stepped by Krylov when larger than the dense cap.
pub struct Propagator {
    dim: usize,
    blocks: Vec<BlockPropagator>,
}

impl Propagator {
    pub fn new(op: &SparseOperator, dense_block_cap: usize) -> Result<Propagator> {
        let decomposition = BlockDecomposition::of(op);
        let mut blocks = Vec::with_capacity(decomposition.len());
        for block in decomposition.blocks() {
            blocks.push(match block.as_slice() {
                [i] => BlockPropagator::Single {
                    index: *i,
                    energy: op.get(*i, *i),
                },
                _ if block.len() <= dense_block_cap => {
                    let eig = SymmetricEigen::new(op.restrict(block).to_dense()?);
                    BlockPropagator::Dense {
                        indices: block.clone(),
                        energies: eig.eigenvalues,
                        vectors: eig.eigenvectors,
                    }
                }
                _ => BlockPropagator::Krylov {
                    indices: block.clone(),
                    op: op.restrict(block),
                },
            });
        }
        Ok(Propagator { dim: op.dim(), blocks })
    }

    /// `exp(-i H t) |state>`.
    pub fn evolve(&self, state: &ComplexState, t: f64) -> Result<ComplexState> {
        let psi = state.amplitudes();
        if psi.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "state of dimension {} for a propagator of dimension {}",
                psi.len(),
                self.dim
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for block in &self.blocks {
            match block {
                BlockPropagator::Single { index, energy } => {
                    out[*index] = psi[*index] * Complex64::new(0.0, -energy * t).exp();
                }
                BlockPropagator::Dense {
                    indices,
                    energies,
                    vectors,
                } => {
                    if indices.iter().all(|&i| psi[i] == Complex64::new(0.0, 0.0)) {
                        continue;
                    }
                    let m = indices.len();
                    // coefficients in the eigenbasis, phased
                    let mut c = vec![Complex64::new(0.0, 0.0); m];
                    for (k, ck) in c.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (row, &i) in indices.iter().enumerate() {
                            acc += psi[i] * vectors[(row, k)];
                        }
                        *ck = acc * Complex64::new(0.0, -energies[k] * t).exp();
                    }
                    for (row, &i) in indices.iter().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (k, ck) in c.iter().enumerate() {
                            acc += ck * vectors[(row, k)];
                        }
                        out[i] = acc;
                    }
                }
                BlockPropagator::Krylov { indices, op } => {
                    let local: Vec<Complex64> = indices.iter().map(|&i| psi[i]).collect();
                    if local.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                        continue;
                    }
                    let evolved = krylov_expm(|x, y| op.apply(x, y), &local, t, KRYLOV_DIM, KRYLOV_STEP_TOL)?;
                    for (&i, z) in indices.iter().zip(evolved) {
                        out[i] = z;
                    }
                }
            }
        }
        Ok(ComplexState::from_amplitudes(state.sites(), out))
    }
}

/// One-shot `exp(-i H t) |state>` with dense blocks up to `10^4`.
pub fn time_evolve(op: &SparseOperator, state: &ComplexState, t: f64) -> Result<ComplexState> {
    Propagator::new(op, 10_000)?.evolve(state, t)
}
