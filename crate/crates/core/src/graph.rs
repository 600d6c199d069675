//! Simple undirected graphs on vertices `1..=k`, the edge-list format, and
//! the host problem `K_n - H`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: header must be \"k m\" with k >= 1")]
    BadHeader { line: usize },
    #[error("line {line}: expected \"u v\"")]
    BadEdgeLine { line: usize },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {vertex} outside 1..={k}")]
    OutOfRange {
        line: usize,
        vertex: usize,
        k: usize,
    },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("subtrahend has {k} vertices but the host is K_{n}")]
    TooLarge { k: usize, n: usize },
    #[error("host size must be at least 1")]
    EmptyHost,
}

/// An undirected simple graph with sorted neighbor lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// `k` isolated vertices.
    pub fn empty(k: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); k],
            edge_count: 0,
        }
    }

    /// Builds a graph from 1-indexed edges, rejecting loops, repeats and
    /// out-of-range endpoints. Errors report the edge's 1-based position as `line`.
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); k];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 1;
            for w in [u, v] {
                if w == 0 || w > k {
                    return Err(GraphError::OutOfRange { line, vertex: w, k });
                }
            }
            if u == v {
                return Err(GraphError::Loop { line, vertex: u });
            }
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        let mut g = Graph {
            adj,
            edge_count: edges.len(),
        };
        for list in &mut g.adj {
            list.sort_unstable();
        }
        if let Some(line) = g.first_duplicate(edges) {
            let (u, v) = edges[line - 1];
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
        Ok(g)
    }

    fn first_duplicate(&self, edges: &[(usize, usize)]) -> Option<usize> {
        if self.adj.iter().all(|l| l.windows(2).all(|w| w[0] != w[1])) {
            return None;
        }
        let mut seen = std::collections::HashSet::new();
        edges
            .iter()
            .position(|&(u, v)| !seen.insert((u.min(v), u.max(v))))
            .map(|i| i + 1)
    }

    pub fn complete(k: usize) -> Self {
        let edges: Vec<_> = (1..=k)
            .flat_map(|u| (u + 1..=k).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(k, &edges).expect("complete graph is simple")
    }

    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|u| (u, u + 1)).collect();
        Graph::from_edges(k, &edges).expect("path is simple")
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "a cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..k).map(|u| (u, u + 1)).collect();
        edges.push((1, k));
        Graph::from_edges(k, &edges).expect("cycle is simple")
    }

    /// Star with center `k` and leaves `1..k`.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|u| (u, k)).collect();
        Graph::from_edges(k, &edges).expect("star is simple")
    }

    /// Complete split graph: clique on `1..=clique`, stable set on the rest,
    /// every clique vertex joined to every stable vertex.
    pub fn complete_split(clique: usize, stable: usize) -> Self {
        let p = clique + stable;
        let edges: Vec<_> = (1..=clique)
            .flat_map(|u| (u + 1..=p).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(p, &edges).expect("c-split graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u - 1].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.vertex_count();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s - 1] {
                continue;
            }
            seen[s - 1] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if !seen[v - 1] {
                        seen[v - 1] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as disconnected; a single vertex is connected.
    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0 && self.edge_count + 1 == self.vertex_count() && self.is_connected()
    }

    /// Renames vertex `v` to `perm[v - 1]`; `perm` must be a permutation of `1..=k`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.vertex_count());
        let edges: Vec<_> = self
            .edges()
            .map(|(u, v)| (perm[u - 1], perm[v - 1]))
            .collect();
        Graph::from_edges(self.vertex_count(), &edges).expect("relabel needs a permutation")
    }

    /// Subgraph induced by `keep` (any order), renumbered `1..=keep.len()` in that order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![0usize; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v - 1] = i + 1;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| pos[u - 1] != 0 && pos[v - 1] != 0)
            .map(|(u, v)| (pos[u - 1], pos[v - 1]))
            .collect();
        Graph::from_edges(keep.len(), &edges).expect("induced subgraph is simple")
    }

    /// Drops isolated vertices. `K_n - H` only depends on the edges of `H`.
    pub fn without_isolated(&self) -> Graph {
        let keep: Vec<_> = self.vertices().filter(|&v| self.degree(v) > 0).collect();
        self.induced(&keep)
    }

    /// Serializes in the edge-list format; the inverse of [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(k={}, edges=[", self.vertex_count())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Parses `"k m"` followed by `m` lines `"u v"`. Blank lines are skipped and
/// errors carry the 1-based line number of the offending line.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(GraphError::BadHeader { line: 1 })?;
    let (k, m) = parse_pair(header).ok_or(GraphError::BadHeader { line: header_line })?;
    if k == 0 {
        return Err(GraphError::BadHeader { line: header_line });
    }

    let mut edges = Vec::with_capacity(m);
    let mut line_of = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = parse_pair(l).ok_or(GraphError::BadEdgeLine { line })?;
        edges.push((u, v));
        line_of.push(line);
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    // from_edges numbers edges from 1; translate back to file lines.
    Graph::from_edges(k, &edges).map_err(|e| match e {
        GraphError::Loop { line, vertex } => GraphError::Loop {
            line: line_of[line - 1],
            vertex,
        },
        GraphError::DuplicateEdge { line, u, v } => GraphError::DuplicateEdge {
            line: line_of[line - 1],
            u,
            v,
        },
        GraphError::OutOfRange { line, vertex, k } => GraphError::OutOfRange {
            line: line_of[line - 1],
            vertex,
            k,
        },
        other => other,
    })
}

/// The graph `K_n - H`, with `H` placed on host vertices `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    n: usize,
    h: Graph,
}

impl Problem {
    pub fn new(n: usize, h: Graph) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyHost);
        }
        if h.vertex_count() > n {
            return Err(GraphError::TooLarge {
                k: h.vertex_count(),
                n,
            });
        }
        Ok(Problem { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &Graph {
        &self.h
    }

    /// Degree of host vertex `v` in `H` (zero outside `H`).
    pub fn h_degree(&self, v: usize) -> usize {
        if v <= self.h.vertex_count() {
            self.h.degree(v)
        } else {
            0
        }
    }
}

/// Materializes `K_n - H` on vertices `1..=n`.
pub fn complement_in_host(p: &Problem) -> Graph {
    let n = p.n();
    let k = p.h().vertex_count();
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if u > k || v > k || !p.h().has_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("complement is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let p3 = parse_edge_list("3 2\n1 2\n2 3").unwrap();
        assert_eq!(p3, Graph::path(3));
        let single = parse_edge_list("1 0").unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
        assert_eq!(
            parse_edge_list("2 1\n1 1"),
            Err(GraphError::Loop { line: 2, vertex: 1 })
        );
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(parse_edge_list(""), Err(GraphError::BadHeader { line: 1 }));
        assert_eq!(
            parse_edge_list("0 0"),
            Err(GraphError::BadHeader { line: 1 })
        );
        assert_eq!(parse_edge_list("3"), Err(GraphError::BadHeader { line: 1 }));
        assert_eq!(
            parse_edge_list("3 2\n1 2\n\n2 1"),
            Err(GraphError::DuplicateEdge {
                line: 4,
                u: 2,
                v: 1
            })
        );
        assert_eq!(
            parse_edge_list("3 1\n1 4"),
            Err(GraphError::OutOfRange {
                line: 2,
                vertex: 4,
                k: 3
            })
        );
        assert_eq!(
            parse_edge_list("3 1\n1 x"),
            Err(GraphError::BadEdgeLine { line: 2 })
        );
        assert_eq!(
            parse_edge_list("3 2\n1 2"),
            Err(GraphError::EdgeCountMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn tree_and_connectivity() {
        assert!(Graph::path(3).is_tree());
        assert!(!Graph::cycle(4).is_tree());
        let two_edges = Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(!two_edges.is_tree());
        assert!(!two_edges.is_connected());
        assert!(Graph::complete(3).is_connected());
        assert!(!Graph::empty(2).is_connected());
        assert!(Graph::path(5).is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(Graph::empty(1).is_tree());
    }

    #[test]
    fn complements() {
        let p = Problem::new(3, Graph::from_edges(2, &[(1, 2)]).unwrap()).unwrap();
        let c = complement_in_host(&p);
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(1, 3), (2, 3)]);

        let p = Problem::new(4, Graph::complete(4)).unwrap();
        assert_eq!(complement_in_host(&p).edge_count(), 0);

        let p = Problem::new(4, Graph::path(3)).unwrap();
        assert_eq!(
            complement_in_host(&p).edges().collect::<Vec<_>>(),
            vec![(1, 3), (1, 4), (2, 4), (3, 4)]
        );
        assert_eq!(
            Problem::new(2, Graph::path(3)),
            Err(GraphError::TooLarge { k: 3, n: 2 })
        );
    }

    #[test]
    fn strips_isolated_vertices() {
        let g = Graph::from_edges(5, &[(2, 4), (4, 5)]).unwrap();
        assert_eq!(g.without_isolated(), Graph::path(3));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|k| {
            proptest::collection::vec(any::<bool>(), k * (k - 1) / 2).prop_map(move |bits| {
                let pairs = (1..=k).flat_map(|u| (u + 1..=k).map(move |v| (u, v)));
                let edges: Vec<_> = pairs
                    .zip(bits)
                    .filter(|(_, b)| *b)
                    .map(|(e, _)| e)
                    .collect();
                Graph::from_edges(k, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_round_trips(g in arb_graph()) {
            prop_assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
        }

        #[test]
        fn complement_degrees_sum(g in arb_graph(), extra in 0usize..3) {
            let n = g.vertex_count() + extra;
            let p = Problem::new(n, g.clone()).unwrap();
            let c = complement_in_host(&p);
            for v in 1..=n {
                prop_assert_eq!(p.h_degree(v) + c.degree(v), n - 1);
            }
            // complementing twice within the first k vertices gives g back
            let k = g.vertex_count();
            let back = complement_in_host(&Problem::new(k, c.induced(&(1..=k).collect::<Vec<_>>())).unwrap());
            prop_assert_eq!(back, g);
        }
    }
}
