//! Spanning trees of `K_n - Q` for a connected quasi-threshold graph `Q`.
//!
//! `Q` is decomposed into its cent-tree: the root holds the universal vertices
//! of `Q`, and each connected component of the remainder hangs below it as a
//! subtree built the same way. Vertices sharing a node are twins, and two
//! vertices are adjacent exactly when their nodes are equal or comparable.
//!
//! Per node `i` with `p_i` members of degree `d_i` and `b = 1/n`:
//!
//! ```text
//! a_i   = 1 - d_i b
//! s_i   = (a_i - (1 - p_i) b) / p_i
//! a'_i  = s_i                                  (leaf)
//!       = s_i + sum_{internal children j} (s_j - 2b)
//! b'_i  = b                                    (leaf)
//!       = b - s_i
//! phi_i = a'_i - sum_{children j} b'_j^2 / phi_j
//! tau   = n^(n+k-p-2) * prod_i p_i (n - d_i - 1)^(p_i - 1) phi_i
//! ```

use std::collections::VecDeque;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{
    big_pow, pow_n, product_to_integer, ArithError, BigInt, ExactRational, Field, Rationals,
};
use crate::graph::{Graph, GraphError, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QtError {
    #[error("the empty graph has no cent-tree")]
    Empty,
    #[error("graph has {components} components; count each subtrahend component with an oracle")]
    Disconnected { components: usize },
    #[error("not quasi-threshold: induced subgraph on {witness:?} has no universal vertex")]
    NotQuasiThreshold { witness: Vec<usize> },
    #[error("zero pivot at node label {label}")]
    ZeroPivot { label: usize },
    #[error("a complete split graph needs a nonempty clique")]
    EmptyClique,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentNode {
    members: Vec<usize>,
    degree: usize,
    parent: Option<usize>,
    children: Vec<usize>,
}

impl CentNode {
    /// Member vertices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    /// Degree in `Q` shared by every member.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    pub fn children(&self) -> &[usize] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Cent-tree of a connected QT-graph.
///
/// Nodes are indexed `0..k` in creation order (breadth first, root `0`), so
/// every parent index is below its children's. Labels `1..=k` order nodes by
/// height, then by index, which puts every child before its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentTree {
    nodes: Vec<CentNode>,
    levels: Vec<Vec<usize>>,
    label: Vec<usize>,
    order: Vec<usize>,
    vertex_count: usize,
}

impl CentTree {
    pub fn nodes(&self) -> &[CentNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &CentNode {
        &self.nodes[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Node indices grouped by height, leaves first.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn label(&self, node: usize) -> usize {
        self.label[node]
    }

    /// Node indices in label order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Strict ancestors of `node`, nearest first.
    pub fn ancestors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(self.nodes[node].parent, move |&i| self.nodes[i].parent)
    }

    pub fn is_ancestor(&self, anc: usize, node: usize) -> bool {
        self.ancestors(node).any(|a| a == anc)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i != j && (self.is_ancestor(i, j) || self.is_ancestor(j, i))
    }

    /// Node index of every vertex.
    pub fn node_of_vertices(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertex_count];
        for (i, node) in self.nodes.iter().enumerate() {
            for &v in &node.members {
                out[v - 1] = i;
            }
        }
        out
    }

    /// The graph this cent-tree describes.
    pub fn expand(&self) -> Graph {
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for (x, &u) in node.members.iter().enumerate() {
                for &v in &node.members[x + 1..] {
                    edges.push((u, v));
                }
            }
            for a in self.ancestors(i) {
                for &u in &node.members {
                    for &v in &self.nodes[a].members {
                        edges.push((u, v));
                    }
                }
            }
        }
        Graph::from_edges(self.vertex_count, &edges).expect("cent-tree expansion is simple")
    }

    /// Checks the structural invariants of a cent-tree against `q`.
    pub fn validate(&self, q: &Graph) -> Result<(), String> {
        let mut seen = vec![false; q.vertex_count()];
        for node in &self.nodes {
            if node.members.is_empty() {
                return Err("empty node".into());
            }
            for &v in &node.members {
                if std::mem::replace(&mut seen[v - 1], true) {
                    return Err(format!("vertex {v} in two nodes"));
                }
            }
        }
        if seen.iter().any(|s| !s) || self.vertex_count != q.vertex_count() {
            return Err("nodes do not cover the vertex set".into());
        }
        if self.nodes[0].parent.is_some() {
            return Err("root has a parent".into());
        }
        let mass = |i: usize| self.nodes[i].multiplicity();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.len() == 1 {
                return Err(format!("node {i} has a single child"));
            }
            let mut descendants = 0;
            let mut stack = node.children.clone();
            while let Some(c) = stack.pop() {
                descendants += mass(c);
                stack.extend_from_slice(&self.nodes[c].children);
            }
            let ancestors: usize = self.ancestors(i).map(mass).sum();
            let expected = node.multiplicity() - 1 + ancestors + descendants;
            if node.degree != expected {
                return Err(format!("node {i}: degree {} != {expected}", node.degree));
            }
            let closed = |v: usize| {
                let mut n = q.neighbors(v).to_vec();
                n.push(v);
                n.sort_unstable();
                n
            };
            let first = closed(node.members[0]);
            if node.members.iter().any(|&v| closed(v) != first) {
                return Err(format!("node {i}: members are not twins"));
            }
        }
        if &self.expand() != q {
            return Err("expansion differs from the input graph".into());
        }
        Ok(())
    }
}

pub fn recognize_and_build_cent_tree(q: &Graph) -> Result<CentTree, QtError> {
    let p = q.vertex_count();
    if p == 0 {
        return Err(QtError::Empty);
    }
    let components = q.components().len();
    if components > 1 {
        return Err(QtError::Disconnected { components });
    }

    let deg: Vec<usize> = q.vertices().map(|v| q.degree(v)).collect();
    // mark[v] == epoch: v is in the remainder being split; epoch + 1: already visited.
    let mut mark = vec![0u64; p];
    let mut epoch = 0u64;
    let mut nodes: Vec<CentNode> = Vec::new();
    let mut queue: VecDeque<(Vec<usize>, Option<usize>, usize)> =
        VecDeque::from([(q.vertices().collect(), None, 0)]);

    while let Some((comp, parent, above)) = queue.pop_front() {
        // Members are adjacent to all `above` ancestor vertices and to nothing
        // else outside `comp`, so their in-component degree is deg - above.
        let size = comp.len();
        let (mut cent, rest): (Vec<usize>, Vec<usize>) =
            comp.iter().partition(|&&v| deg[v - 1] - above == size - 1);
        if cent.is_empty() {
            let mut witness = comp;
            witness.sort_unstable();
            return Err(QtError::NotQuasiThreshold { witness });
        }
        cent.sort_unstable();
        let id = nodes.len();
        nodes.push(CentNode {
            degree: deg[cent[0] - 1],
            members: cent,
            parent,
            children: Vec::new(),
        });
        if let Some(par) = parent {
            nodes[par].children.push(id);
        }
        if rest.is_empty() {
            continue;
        }

        epoch += 2;
        for &v in &rest {
            mark[v - 1] = epoch;
        }
        let below = above + nodes[id].members.len();
        for &s in &rest {
            if mark[s - 1] != epoch {
                continue;
            }
            mark[s - 1] = epoch + 1;
            let mut sub = vec![s];
            let mut i = 0;
            while i < sub.len() {
                let u = sub[i];
                i += 1;
                for &w in q.neighbors(u) {
                    if mark[w - 1] == epoch {
                        mark[w - 1] = epoch + 1;
                        sub.push(w);
                    }
                }
            }
            queue.push_back((sub, Some(id), below));
        }
    }

    let k = nodes.len();
    let mut height = vec![0usize; k];
    for i in (0..k).rev() {
        if let Some(par) = nodes[i].parent {
            height[par] = height[par].max(height[i] + 1);
        }
    }
    let h = height[0] + 1;
    let mut levels = vec![Vec::new(); h];
    for (i, &ht) in height.iter().enumerate() {
        levels[ht].push(i);
    }
    let order: Vec<usize> = levels.concat();
    let mut label = vec![0; k];
    for (pos, &i) in order.iter().enumerate() {
        label[i] = pos + 1;
    }
    let ct = CentTree {
        nodes,
        levels,
        label,
        order,
        vertex_count: p,
    };
    debug_assert!(ct.nodes.iter().all(|n| n.children.len() != 1));
    Ok(ct)
}

/// Per-node values of the cent-function recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentRow<E> {
    pub sigma: E,
    pub a_prime: E,
    pub b_prime: E,
    pub phi: E,
}

/// Cent-function values indexed by node label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentFunctionValues {
    rows: Vec<CentRow<ExactRational>>,
}

impl CentFunctionValues {
    pub fn rows(&self) -> &[CentRow<ExactRational>] {
        &self.rows
    }

    pub fn at_label(&self, l: usize) -> &CentRow<ExactRational> {
        &self.rows[l - 1]
    }

    pub fn phis(&self) -> impl Iterator<Item = &ExactRational> {
        self.rows.iter().map(|r| &r.phi)
    }
}

pub fn cent_function_in<F: Field>(
    ct: &CentTree,
    n: usize,
    field: &F,
) -> Result<Vec<CentRow<F::Elem>>, QtError> {
    let one = field.one();
    let b = field
        .div(&one, &field.int(n as u64))
        .ok_or(ArithError::DivisionByZero)?;
    let two_b = field.add(&b, &b);
    let mut rows: Vec<CentRow<F::Elem>> = Vec::with_capacity(ct.node_count());
    for &i in ct.order() {
        let node = ct.node(i);
        let p = node.multiplicity() as u64;
        let a = field.sub(&one, &field.mul(&field.int(node.degree() as u64), &b));
        let shifted = field.add(&a, &field.mul(&field.int(p - 1), &b));
        let sigma = field
            .div(&shifted, &field.int(p))
            .ok_or(ArithError::DivisionByZero)?;
        if node.is_leaf() {
            rows.push(CentRow {
                a_prime: sigma.clone(),
                b_prime: b.clone(),
                phi: sigma.clone(),
                sigma,
            });
            continue;
        }
        let mut a_prime = sigma.clone();
        let mut phi_sub = field.zero();
        for &c in node.children() {
            let child = &rows[ct.label(c) - 1];
            if !ct.node(c).is_leaf() {
                a_prime = field.add(&a_prime, &field.sub(&child.sigma, &two_b));
            }
            let sq = field.mul(&child.b_prime, &child.b_prime);
            let term = field
                .div(&sq, &child.phi)
                .ok_or(QtError::ZeroPivot { label: ct.label(c) })?;
            phi_sub = field.add(&phi_sub, &term);
        }
        rows.push(CentRow {
            phi: field.sub(&a_prime, &phi_sub),
            b_prime: field.sub(&b, &sigma),
            a_prime,
            sigma,
        });
    }
    Ok(rows)
}

pub fn cent_function(ct: &CentTree, n: usize) -> Result<CentFunctionValues, QtError> {
    if n < ct.vertex_count() {
        return Err(GraphError::TooLarge {
            k: ct.vertex_count(),
            n,
        }
        .into());
    }
    cent_function_in(ct, n, &Rationals).map(|rows| CentFunctionValues { rows })
}

fn n_exponent(n: usize, ct: &CentTree) -> i64 {
    n as i64 + ct.node_count() as i64 - ct.vertex_count() as i64 - 2
}

pub fn count_kn_minus_qt(problem: &Problem) -> Result<BigInt, QtError> {
    let ct = recognize_and_build_cent_tree(problem.h())?;
    let n = problem.n();
    let values = cent_function(&ct, n)?;
    let mut factors = vec![pow_n(n as u64, n_exponent(n, &ct))];
    for (&i, row) in ct.order().iter().zip(values.rows()) {
        let node = ct.node(i);
        let p = node.multiplicity();
        let twins = big_pow(&BigInt::from(n - node.degree() - 1), p as u64 - 1);
        factors.push(ExactRational::from_integer(twins * p));
        factors.push(row.phi.clone());
    }
    Ok(product_to_integer(&factors, &BigInt::from(1))?)
}

/// `tau(K_n - Q)` computed in `field`.
pub fn count_kn_minus_qt_in<F: Field>(problem: &Problem, field: &F) -> Result<F::Elem, QtError> {
    let ct = recognize_and_build_cent_tree(problem.h())?;
    let n = problem.n();
    let rows = cent_function_in(&ct, n, field)?;
    let e = n_exponent(n, &ct);
    let nf = field.int(n as u64);
    let mut acc = crate::tree::field_pow(field, &nf, e.unsigned_abs());
    if e < 0 {
        acc = field
            .div(&field.one(), &acc)
            .ok_or(ArithError::DivisionByZero)?;
    }
    for (&i, row) in ct.order().iter().zip(&rows) {
        let node = ct.node(i);
        let p = node.multiplicity() as u64;
        let base = field.int((n - node.degree() - 1) as u64);
        let twins = crate::tree::field_pow(field, &base, p - 1);
        acc = field.mul(&acc, &field.mul(&field.int(p), &twins));
        acc = field.mul(&acc, &row.phi);
    }
    Ok(acc)
}

/// `(|K|, |S|)` when `g` is a complete split graph with a nonempty clique.
/// `|S| = 0` means `g` is complete.
pub fn csplit_parts(g: &Graph) -> Option<(usize, usize)> {
    let p = g.vertex_count();
    if p == 0 {
        return None;
    }
    let clique = g.vertices().filter(|&v| g.degree(v) == p - 1).count();
    let stable_ok = g
        .vertices()
        .all(|v| g.degree(v) == p - 1 || g.degree(v) == clique);
    (clique >= 1 && stable_ok).then_some((clique, p - clique))
}

/// Closed form for `K_n` minus a complete split graph; `stable = 0` is the
/// complete graph and goes through [`count_kn_minus_qt`].
pub fn count_kn_minus_csplit(n: usize, clique: usize, stable: usize) -> Result<BigInt, QtError> {
    if clique == 0 {
        return Err(QtError::EmptyClique);
    }
    let p = clique + stable;
    if p > n {
        return Err(GraphError::TooLarge { k: p, n }.into());
    }
    if stable == 0 {
        return count_kn_minus_qt(&Problem::new(n, Graph::complete(clique))?);
    }
    if n == p {
        return Ok(BigInt::zero());
    }
    let big = |v: usize| BigInt::from(v);
    Ok(big_pow(&big(n), (n - p - 1) as u64)
        * big_pow(&big(n - clique), (stable - 1) as u64)
        * big_pow(&big(n - p), clique as u64))
}
