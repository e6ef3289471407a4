//! Splitting an operator into invariant blocks.

use super::super::hamiltonian::SparseOperator;

/// Basis index sets closed under the operator's off-diagonal couplings.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    blocks: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl BlockDecomposition {
    /// Connected components of the graph with an edge per nonzero
    /// off-diagonal entry. Blocks are sorted by their smallest index.
    pub fn of(op: &SparseOperator) -> BlockDecomposition {
        let dim = op.dim();
        let mut parent: Vec<usize> = (0..dim).collect();
        for (r, c, _) in op.triplets() {
            if r != c {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut slot = vec![usize::MAX; dim];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..dim {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[root]].push(i);
        }
        BlockDecomposition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Gershgorin lower bound on the spectrum of a block.
pub(crate) fn gershgorin_floor(op: &SparseOperator, block: &[usize]) -> f64 {
    block
        .iter()
        .map(|&r| {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (c, v) in op.row(r) {
                if c == r {
                    diag = v;
                } else {
                    off += v.abs();
                }
            }
            diag - off
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        let op = SparseOperator::from_triplets(5, &[(0, 3, 1.0), (3, 0, 1.0), (1, 1, 2.0), (2, 4, 0.5), (4, 2, 0.5)])
            .unwrap();
        let d = BlockDecomposition::of(&op);
        assert_eq!(d.blocks(), &[vec![0, 3], vec![1], vec![2, 4]]);
        assert_eq!(gershgorin_floor(&op, &[1]), 2.0);
    }
}
