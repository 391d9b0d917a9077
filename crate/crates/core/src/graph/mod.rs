//! Undirected simple graphs, random-graph generators and topology metrics.

mod edgelist;
pub mod generate;
mod metrics;
mod model;

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list, ParsedEdgeList};
pub use metrics::{metrics, GraphMetrics};
pub use model::{Family, FamilyKind, ModelSpec};

use crate::error::{Error, Result};

/// An undirected simple graph on nodes `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. The adjacency lists
/// are a derived view kept alongside for traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, silently dropping duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, edges).map(|(g, _)| g)
    }

    /// Builds a graph and reports how many duplicate edges were dropped.
    pub(crate) fn build<I>(n: usize, edges: I) -> Result<(Graph, usize)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::domain("a graph needs at least one node"));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at node {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        let duplicates = before - list.len();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &list {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
        }
        Ok((
            Graph {
                n,
                edges: list,
                adjacency,
            },
            duplicates,
        ))
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Self::from_edges(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Result<Graph> {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::domain("a cycle needs at least three nodes"));
        }
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star with one hub (node 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Graph> {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Disjoint union; the nodes of `other` are shifted by `self.node_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_edges(self.n + other.n, edges).expect("union of valid graphs is valid")
    }

    /// Dense row-major 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for &(u, v) in &self.edges {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_and_orientation_collapse() {
        let (g, dups) = Graph::build(3, [(0, 1), (1, 0), (2, 1), (0, 1)]).unwrap();
        assert_eq!(dups, 2);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(Error::Domain(_))));
        assert!(matches!(Graph::from_edges(3, [(0, 3)]), Err(Error::Domain(_))));
        assert!(Graph::empty(0).is_err());
    }

    #[test]
    fn standard_graphs() {
        assert_eq!(Graph::complete(10).unwrap().edge_count(), 45);
        assert_eq!(Graph::cycle(4).unwrap().degrees(), vec![2; 4]);
        assert_eq!(Graph::star(5).unwrap().degrees(), vec![5, 1, 1, 1, 1, 1]);
        let two = Graph::complete(3).unwrap().disjoint_union(&Graph::complete(3).unwrap());
        assert_eq!(two.node_count(), 6);
        assert_eq!(two.edges()[3], (3, 4));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::path(4).unwrap();
        let a = g.adjacency_matrix();
        for i in 0..4 {
            assert_eq!(a[i * 4 + i], 0.0);
            for j in 0..4 {
                assert_eq!(a[i * 4 + j], a[j * 4 + i]);
            }
        }
        assert_eq!(a.iter().sum::<f64>(), 6.0);
    }
}
