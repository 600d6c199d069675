//! Ground truth for the engines: the integer matrix-tree theorem, the
//! rational complement spanning-tree determinant, brute-force enumeration,
//! and random instance generators.
//!
//! The Kirchhoff count never touches rational arithmetic, so it stays an
//! independent check on both engines and on [`cst_matrix_count`].

mod generate;
mod matrix;

use num_traits::{One, Zero};
use thiserror::Error;

pub use generate::{
    all_labeled_trees, prufer_decode, prufer_encode, random_labeled_tree, random_labeled_tree_with,
    random_qt_graph, random_qt_graph_with, CentShape,
};
pub use matrix::{
    cent_reduced_matrix, complement_spanning_tree_matrix, twin_block, IntMatrix, RatMatrix,
};

use crate::arith::{big_pow, BigInt};
use crate::graph::{Graph, Problem};

/// Largest graph [`enumerate_count`] accepts.
pub const ENUMERATE_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration is limited to {max} vertices, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("determinant {0} does not scale to an integer count")]
    NotInteger(String),
}

/// Spanning trees by the matrix-tree theorem on the integer Laplacian.
pub fn kirchhoff_count(g: &Graph) -> BigInt {
    if g.vertex_count() <= 1 {
        return BigInt::one();
    }
    IntMatrix::laplacian_minor(g).det()
}

/// `n^(n-2) det(A)` for the complement spanning-tree matrix `A` of `K_n - H`.
pub fn cst_matrix_count(p: &Problem) -> Result<BigInt, OracleError> {
    let det = complement_spanning_tree_matrix(p).det();
    let n = p.n();
    if n == 1 {
        return Ok(BigInt::one());
    }
    let scaled =
        crate::arith::ExactRational::from_integer(big_pow(&BigInt::from(n), n as u64 - 2)) * det;
    if scaled.is_integer() {
        Ok(scaled.numer().clone())
    } else {
        Err(OracleError::NotInteger(scaled.to_string()))
    }
}

/// Spanning trees by exhaustive search over acyclic edge subsets.
pub fn enumerate_count(g: &Graph) -> Result<BigInt, OracleError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > ENUMERATE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            got: n,
            max: ENUMERATE_MAX_VERTICES,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u - 1, v - 1)).collect();
    let mut forest = RollbackForest::new(n);
    let mut count = 0u64;
    extend(&edges, 0, n - 1, &mut forest, &mut count);
    Ok(BigInt::from(count))
}

fn extend(
    edges: &[(usize, usize)],
    from: usize,
    missing: usize,
    forest: &mut RollbackForest,
    count: &mut u64,
) {
    if missing == 0 {
        *count += 1;
        return;
    }
    if edges.len() - from < missing {
        return;
    }
    let (u, v) = edges[from];
    if forest.union(u, v) {
        extend(edges, from + 1, missing - 1, forest, count);
        forest.rollback();
    }
    extend(edges, from + 1, missing, forest, count);
}

/// Union-find with union by size and undo.
struct RollbackForest {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackForest {
    fn new(n: usize) -> Self {
        RollbackForest {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(b);
        true
    }

    fn rollback(&mut self) {
        let b = self.history.pop().expect("nothing to undo");
        let a = self.parent[b];
        self.size[a] -= self.size[b];
        self.parent[b] = b;
    }
}

/// One-line check used by tests: all three oracles on the same problem.
pub fn all_oracles_agree(p: &Problem) -> Result<BigInt, String> {
    let g = crate::graph::complement_in_host(p);
    let k = kirchhoff_count(&g);
    let c = cst_matrix_count(p).map_err(|e| e.to_string())?;
    if k != c {
        return Err(format!("kirchhoff {k} != cst-matrix {c}"));
    }
    if g.vertex_count() <= ENUMERATE_MAX_VERTICES {
        let e = enumerate_count(&g).map_err(|e| e.to_string())?;
        if e != k {
            return Err(format!("kirchhoff {k} != enumerate {e}"));
        }
    }
    if k < BigInt::zero() {
        return Err(format!("negative count {k}"));
    }
    Ok(k)
}
