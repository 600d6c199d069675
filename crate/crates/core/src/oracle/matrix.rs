use num_traits::{One, Zero};

use crate::arith::{BigInt, ExactRational};
use crate::graph::{Graph, Problem};
use crate::qt::CentTree;

/// Dense square matrix of big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(size: usize) -> Self {
        IntMatrix {
            size,
            data: vec![BigInt::zero(); size * size],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let size = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == size),
            "matrix must be square"
        );
        IntMatrix {
            size,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.size + j] = v;
    }

    /// Laplacian of `g` with the last row and column deleted.
    pub fn laplacian_minor(g: &Graph) -> Self {
        let m = g.vertex_count().saturating_sub(1);
        let mut out = IntMatrix::zeros(m);
        for u in 1..=m {
            out.set(u - 1, u - 1, BigInt::from(g.degree(u)));
            for &v in g.neighbors(u) {
                if v <= m {
                    out.set(u - 1, v - 1, BigInt::from(-1));
                }
            }
        }
        out
    }

    /// Determinant by Bareiss fraction-free elimination; every division is exact.
    pub fn det(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = !sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let lead = a[i * n + k].clone();
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &pivot - &lead * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }
}

/// Dense square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    size: usize,
    data: Vec<ExactRational>,
}

impl RatMatrix {
    pub fn zeros(size: usize) -> Self {
        RatMatrix {
            size,
            data: vec![ExactRational::zero(); size * size],
        }
    }

    pub fn from_rows(rows: Vec<Vec<ExactRational>>) -> Self {
        let size = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == size),
            "matrix must be square"
        );
        RatMatrix {
            size,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactRational {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactRational) {
        self.data[i * self.size + j] = v;
    }

    /// Gaussian elimination, pivoting on the first nonzero entry of each column.
    pub fn det(&self) -> ExactRational {
        let n = self.size;
        let mut a = self.data.clone();
        let mut det = ExactRational::one();
        for k in 0..n {
            let Some(r) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
                return ExactRational::zero();
            };
            if r != k {
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det = &det * &pivot;
            for i in k + 1..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let factor = a[i * n + k].checked_div(&pivot).expect("pivot is nonzero");
                for j in k + 1..n {
                    let v = &a[i * n + j] - &(&factor * &a[k * n + j]);
                    a[i * n + j] = v;
                }
                a[i * n + k] = ExactRational::zero();
            }
        }
        det
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        RatMatrix {
            size: m.size,
            data: m
                .data
                .iter()
                .map(|v| ExactRational::from_integer(v.clone()))
                .collect(),
        }
    }
}

/// Complement spanning-tree matrix of `K_n - H`: `1 - d_i/n` on the diagonal
/// (`d_i` the degree in `H`), `1/n` where `H` has an edge, zero elsewhere.
pub fn complement_spanning_tree_matrix(p: &Problem) -> RatMatrix {
    let n = p.n();
    let b = ExactRational::new(1, n as i64).expect("n >= 1");
    let mut a = RatMatrix::zeros(n);
    for i in 1..=n {
        let d = ExactRational::from_integer(p.h_degree(i));
        a.set(i - 1, i - 1, ExactRational::one() - &d * &b);
    }
    for (u, v) in p.h().edges() {
        a.set(u - 1, v - 1, b.clone());
        a.set(v - 1, u - 1, b.clone());
    }
    a
}

/// The `size x size` twin block: `diag` on the diagonal, `off` elsewhere.
pub fn twin_block(size: usize, diag: &ExactRational, off: &ExactRational) -> RatMatrix {
    let mut m = RatMatrix::zeros(size);
    for i in 0..size {
        for j in 0..size {
            m.set(i, j, if i == j { diag.clone() } else { off.clone() });
        }
    }
    m
}

/// The node-level reduced matrix of a cent-tree in label order: diagonal
/// `(a_i + (p_i - 1) b) / p_i`, and `b` between every ancestor-descendant pair.
pub fn cent_reduced_matrix(ct: &CentTree, n: usize) -> RatMatrix {
    let k = ct.node_count();
    let b = ExactRational::new(1, n as i64).expect("n >= 1");
    let mut m = RatMatrix::zeros(k);
    for (x, &i) in ct.order().iter().enumerate() {
        let node = ct.node(i);
        let p = node.multiplicity() as i64;
        let a = ExactRational::one() - &ExactRational::from_integer(node.degree()) * &b;
        let sigma = (a + &ExactRational::from_integer(p - 1) * &b)
            .checked_div(&ExactRational::from_integer(p))
            .expect("p >= 1");
        m.set(x, x, sigma);
        for (y, &j) in ct.order().iter().enumerate() {
            if ct.comparable(i, j) {
                m.set(x, y, b.clone());
            }
        }
    }
    m
}
