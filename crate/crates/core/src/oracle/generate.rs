use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Decodes a Prüfer sequence over `1..=k` (length `k - 2`) into its tree.
pub fn prufer_decode(seq: &[usize], k: usize) -> Graph {
    assert!(k >= 1);
    if k == 1 {
        return Graph::empty(1);
    }
    assert_eq!(seq.len(), k - 2, "sequence length must be k - 2");
    let mut degree = vec![1usize; k + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    // `ptr` walks forward; `leaf` may jump back when a smaller vertex frees up.
    let mut ptr = (1..=k).find(|&v| degree[v] == 1).expect("a leaf exists");
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf, s));
        degree[s] -= 1;
        degree[leaf] = 0;
        if degree[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    let last = (1..=k)
        .rev()
        .find(|&v| degree[v] == 1 && v != leaf)
        .expect("two vertices remain");
    edges.push((leaf, last));
    Graph::from_edges(k, &edges).expect("decoded tree is simple")
}

/// Prüfer sequence of a labeled tree.
pub fn prufer_encode(t: &Graph) -> Vec<usize> {
    assert!(t.is_tree());
    let k = t.vertex_count();
    if k <= 2 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = std::iter::once(0)
        .chain(t.vertices().map(|v| t.degree(v)))
        .collect();
    let mut removed = vec![false; k + 1];
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = t
        .vertices()
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut seq = Vec::with_capacity(k - 2);
    while seq.len() < k - 2 {
        let std::cmp::Reverse(leaf) = heap.pop().expect("tree has a leaf");
        removed[leaf] = true;
        let nb = *t
            .neighbors(leaf)
            .iter()
            .find(|&&w| !removed[w])
            .expect("leaf has a live neighbor");
        seq.push(nb);
        degree[nb] -= 1;
        if degree[nb] == 1 {
            heap.push(std::cmp::Reverse(nb));
        }
    }
    seq
}

/// Every labeled tree on `k` vertices, in Prüfer-sequence order.
pub fn all_labeled_trees(k: usize) -> impl Iterator<Item = Graph> {
    assert!(k >= 1);
    let len = k.saturating_sub(2);
    let total = if k <= 2 {
        1
    } else {
        (k as u64).pow(len as u32)
    };
    (0..total).map(move |mut idx| {
        let mut seq = vec![0; len];
        for s in seq.iter_mut().rev() {
            *s = (idx % k as u64) as usize + 1;
            idx /= k as u64;
        }
        prufer_decode(&seq, k)
    })
}

/// Uniform random labeled tree on `k` vertices.
pub fn random_labeled_tree(k: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_labeled_tree_with(k, &mut rng)
}

pub fn random_labeled_tree_with<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Graph {
    assert!(k >= 1);
    let seq: Vec<usize> = (0..k.saturating_sub(2))
        .map(|_| rng.gen_range(1..=k))
        .collect();
    prufer_decode(&seq, k)
}

/// A rooted tree shape with node multiplicities; node `0` is the root and
/// parents always precede their children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentShape {
    pub parent: Vec<Option<usize>>,
    pub multiplicity: Vec<usize>,
}

impl CentShape {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.multiplicity.iter().sum()
    }

    /// Draws a shape with at most `max_nodes` nodes in which every internal
    /// node has at least two children, with multiplicities in `1..=max_multiplicity`.
    pub fn random<R: Rng + ?Sized>(max_nodes: usize, max_multiplicity: usize, rng: &mut R) -> Self {
        Self::grow(max_nodes, max_multiplicity, 0.15, rng)
    }

    /// Like [`CentShape::random`] but keeps splitting leaves until the shape
    /// has `nodes` or `nodes - 1` nodes.
    pub fn random_sized<R: Rng + ?Sized>(
        nodes: usize,
        max_multiplicity: usize,
        rng: &mut R,
    ) -> Self {
        Self::grow(nodes, max_multiplicity, 0.0, rng)
    }

    fn grow<R: Rng + ?Sized>(
        max_nodes: usize,
        max_multiplicity: usize,
        stop: f64,
        rng: &mut R,
    ) -> Self {
        assert!(max_nodes >= 1 && max_multiplicity >= 1);
        let mut parent = vec![None];
        let mut leaves = vec![0usize];
        while parent.len() + 2 <= max_nodes && !rng.gen_bool(stop) {
            let at = rng.gen_range(0..leaves.len());
            let node = leaves.swap_remove(at);
            let room = max_nodes - parent.len();
            let kids = rng.gen_range(2..=room.min(4));
            for _ in 0..kids {
                leaves.push(parent.len());
                parent.push(Some(node));
            }
        }
        let multiplicity = (0..parent.len())
            .map(|_| rng.gen_range(1..=max_multiplicity))
            .collect();
        CentShape {
            parent,
            multiplicity,
        }
    }

    /// The QT-graph of this shape; node `i` gets the vertices `ids[offset_i..]`.
    pub fn expand_with(&self, ids: &[usize]) -> Graph {
        let p = self.vertex_count();
        assert_eq!(ids.len(), p);
        let mut members = Vec::with_capacity(self.node_count());
        let mut next = 0;
        for &m in &self.multiplicity {
            members.push(&ids[next..next + m]);
            next += m;
        }
        let mut edges = Vec::new();
        for i in 0..self.node_count() {
            for (x, &u) in members[i].iter().enumerate() {
                for &v in &members[i][x + 1..] {
                    edges.push((u, v));
                }
            }
            let mut anc = self.parent[i];
            while let Some(a) = anc {
                for &u in members[i] {
                    for &v in members[a] {
                        edges.push((u, v));
                    }
                }
                anc = self.parent[a];
            }
        }
        Graph::from_edges(p, &edges).expect("shape expansion is simple")
    }

    pub fn expand(&self) -> Graph {
        let ids: Vec<usize> = (1..=self.vertex_count()).collect();
        self.expand_with(&ids)
    }
}

/// A connected QT-graph drawn from a random cent-tree shape, with vertex ids shuffled.
pub fn random_qt_graph(max_nodes: usize, max_multiplicity: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_qt_graph_with(max_nodes, max_multiplicity, &mut rng).1
}

pub fn random_qt_graph_with<R: Rng + ?Sized>(
    max_nodes: usize,
    max_multiplicity: usize,
    rng: &mut R,
) -> (CentShape, Graph) {
    let shape = CentShape::random(max_nodes, max_multiplicity, rng);
    let mut ids: Vec<usize> = (1..=shape.vertex_count()).collect();
    ids.shuffle(rng);
    let g = shape.expand_with(&ids);
    (shape, g)
}
