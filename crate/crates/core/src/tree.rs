//! Spanning trees of `K_n - T` for a tree `T`.
//!
//! The tree is peeled leaf layer by leaf layer; labels follow the layers, and
//! within a layer ascending vertex id. Eliminating the complement matrix in
//! label order leaves one pivot per vertex,
//!
//! ```text
//! L(i) = a_i - b^2 * sum_{j in ch(i)} 1 / L(j),   a_i = 1 - d_i b,  b = 1/n
//! ```
//!
//! where `ch(i)` are the lower-labeled neighbors, and `tau = n^(n-2) * prod L(i)`.

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{
    big_pow, product_to_integer, ArithError, BigInt, ExactRational, Field, Rationals,
};
use crate::graph::{Graph, GraphError, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("subtrahend is not a tree")]
    NotATree,
    #[error("zero pivot at st-label {label}")]
    ZeroPivot { label: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Leaf-peeling layers of a tree with the induced labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StDecomposition {
    levels: Vec<Vec<usize>>,
    label: Vec<usize>,
    order: Vec<usize>,
    ch: Vec<Vec<usize>>,
    deg: Vec<usize>,
}

impl StDecomposition {
    /// Layers `V_1..V_h`, each in ascending vertex id.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    /// st-label of vertex `v`, in `1..=k`.
    pub fn label(&self, v: usize) -> usize {
        self.label[v - 1]
    }

    /// The vertex carrying st-label `l`.
    pub fn vertex_at(&self, l: usize) -> usize {
        self.order[l - 1]
    }

    /// Vertices in label order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Neighbors of `v` with a smaller label, ascending by label.
    pub fn ch(&self, v: usize) -> &[usize] {
        &self.ch[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v - 1]
    }
}

pub fn st_decompose(t: &Graph) -> Result<StDecomposition, TreeError> {
    if !t.is_tree() {
        return Err(TreeError::NotATree);
    }
    let k = t.vertex_count();
    let deg: Vec<usize> = t.vertices().map(|v| t.degree(v)).collect();
    let mut remaining = deg.clone();
    let mut removed = vec![false; k];
    let mut queued = vec![false; k];

    let mut level: Vec<usize> = t.vertices().filter(|&v| deg[v - 1] <= 1).collect();
    for &v in &level {
        queued[v - 1] = true;
    }
    let mut levels = Vec::new();
    let mut order = Vec::with_capacity(k);
    while !level.is_empty() {
        for &v in &level {
            removed[v - 1] = true;
        }
        let mut next = Vec::new();
        for &v in &level {
            for &w in t.neighbors(v) {
                if removed[w - 1] {
                    continue;
                }
                remaining[w - 1] -= 1;
                if remaining[w - 1] <= 1 && !queued[w - 1] {
                    queued[w - 1] = true;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        order.extend_from_slice(&level);
        levels.push(std::mem::replace(&mut level, next));
    }
    debug_assert_eq!(order.len(), k);

    let mut label = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        label[v - 1] = i + 1;
    }
    let ch = t
        .vertices()
        .map(|v| {
            let mut lower: Vec<usize> = t
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| label[w - 1] < label[v - 1])
                .collect();
            lower.sort_unstable_by_key(|&w| label[w - 1]);
            lower
        })
        .collect();

    Ok(StDecomposition {
        levels,
        label,
        order,
        ch,
        deg,
    })
}

/// `L` values indexed by st-label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StFunctionValues {
    values: Vec<ExactRational>,
}

impl StFunctionValues {
    /// All values in label order.
    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn at_label(&self, l: usize) -> &ExactRational {
        &self.values[l - 1]
    }
}

/// Evaluates the st-function over any field, in label order.
pub fn st_function_in<F: Field>(
    d: &StDecomposition,
    n: usize,
    field: &F,
) -> Result<Vec<F::Elem>, TreeError> {
    let one = field.one();
    let b = field
        .div(&one, &field.int(n as u64))
        .ok_or(ArithError::DivisionByZero)?;
    let b2 = field.mul(&b, &b);
    let mut values: Vec<F::Elem> = Vec::with_capacity(d.vertex_count());
    for &v in d.order() {
        let a = field.sub(&one, &field.mul(&field.int(d.degree(v) as u64), &b));
        let kids = d.ch(v);
        if kids.is_empty() {
            values.push(a);
            continue;
        }
        let mut inv_sum = field.zero();
        for &j in kids {
            let lj = &values[d.label(j) - 1];
            let inv = field
                .div(&one, lj)
                .ok_or(TreeError::ZeroPivot { label: d.label(j) })?;
            inv_sum = field.add(&inv_sum, &inv);
        }
        values.push(field.sub(&a, &field.mul(&b2, &inv_sum)));
    }
    Ok(values)
}

pub fn st_function(d: &StDecomposition, n: usize) -> Result<StFunctionValues, TreeError> {
    if n < d.vertex_count() {
        return Err(GraphError::TooLarge {
            k: d.vertex_count(),
            n,
        }
        .into());
    }
    st_function_in(d, n, &Rationals).map(|values| StFunctionValues { values })
}

pub fn count_kn_minus_tree(p: &Problem) -> Result<BigInt, TreeError> {
    let d = st_decompose(p.h())?;
    let l = st_function(&d, p.n())?;
    // n = 1 forces k = 1 and the single value 1.
    let scale = big_pow(&BigInt::from(p.n()), p.n().saturating_sub(2) as u64);
    let tau = product_to_integer(l.values(), &scale)?;
    debug_assert!(!tau.is_zero() || l.values().iter().any(|x| x.is_zero()));
    Ok(tau)
}

/// `base^exp` by squaring inside `field`.
pub(crate) fn field_pow<F: Field>(field: &F, base: &F::Elem, mut exp: u64) -> F::Elem {
    let mut acc = field.one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = field.mul(&acc, &sq);
        }
        exp >>= 1;
        if exp > 0 {
            sq = field.mul(&sq, &sq);
        }
    }
    acc
}

/// `tau(K_n - T)` computed in `field`; over a prime field this is `tau mod p`.
pub fn count_kn_minus_tree_in<F: Field>(p: &Problem, field: &F) -> Result<F::Elem, TreeError> {
    let d = st_decompose(p.h())?;
    let values = st_function_in(&d, p.n(), field)?;
    let scale = field_pow(
        field,
        &field.int(p.n() as u64),
        p.n().saturating_sub(2) as u64,
    );
    Ok(values.iter().fold(scale, |acc, x| field.mul(&acc, x)))
}
