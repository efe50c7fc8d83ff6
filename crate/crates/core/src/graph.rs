//! Immutable undirected sparse graph in CSR form, plus the two operators
//! derived from it: the self-looped symmetric-normalized adjacency used by
//! the convolution layers and the normalized Laplacian used for spectral
//! analysis.

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Undirected simple graph. Neighbor lists are sorted, deduplicated and
/// symmetric; self-loops are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
}

/// Connected-component labeling with contiguous ids 0..num_components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_id: Vec<usize>,
    pub num_components: usize,
}

impl ComponentLabeling {
    /// Node count of each component, indexed by component id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_components];
        for &c in &self.component_id {
            sizes[c] += 1;
        }
        sizes
    }
}

impl Graph {
    /// Build from an edge list. Duplicate edges and self-loops are dropped;
    /// every surviving edge is stored in both directions.
    pub fn from_edge_list(edges: &[(usize, usize)], num_nodes: usize) -> Result<Self> {
        for &(src, dst) in edges {
            if src >= num_nodes || dst >= num_nodes {
                return Err(Error::EdgeOutOfRange {
                    src,
                    dst,
                    num_nodes,
                });
            }
        }
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
        for &(src, dst) in edges {
            if src == dst {
                continue;
            }
            adjacency[src].push(dst);
            adjacency[dst].push(src);
        }
        let mut row_offsets = Vec::with_capacity(num_nodes + 1);
        let mut col_indices = Vec::new();
        row_offsets.push(0);
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
            neighbors.dedup();
            col_indices.extend_from_slice(neighbors);
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            num_nodes,
            row_offsets,
            col_indices,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.col_indices.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[node]..self.row_offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.row_offsets[node + 1] - self.row_offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_nodes).map(|i| self.degree(i)).collect()
    }

    /// BFS labeling of connected components.
    pub fn connected_components(&self) -> ComponentLabeling {
        const UNVISITED: usize = usize::MAX;
        let mut component_id = vec![UNVISITED; self.num_nodes];
        let mut num_components = 0;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.num_nodes {
            if component_id[start] != UNVISITED {
                continue;
            }
            component_id[start] = num_components;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if component_id[v] == UNVISITED {
                        component_id[v] = num_components;
                        queue.push_back(v);
                    }
                }
            }
            num_components += 1;
        }
        ComponentLabeling {
            component_id,
            num_components,
        }
    }

    /// Self-looped symmetric-normalized adjacency: entry (i, j) is
    /// 1/sqrt((deg(i)+1)(deg(j)+1)) for each edge and for the diagonal.
    pub fn normalized_adjacency(&self) -> SparseMatrix {
        let n = self.num_nodes;
        let entry = |i: usize, j: usize| {
            1.0 / (((self.degree(i) + 1) * (self.degree(j) + 1)) as f64).sqrt()
        };
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::with_capacity(self.col_indices.len() + n);
        let mut values = Vec::with_capacity(self.col_indices.len() + n);
        row_offsets.push(0);
        for i in 0..n {
            let mut diagonal_written = false;
            for &j in self.neighbors(i) {
                if !diagonal_written && j > i {
                    col_indices.push(i);
                    values.push(entry(i, i));
                    diagonal_written = true;
                }
                col_indices.push(j);
                values.push(entry(i, j));
            }
            if !diagonal_written {
                col_indices.push(i);
                values.push(entry(i, i));
            }
            row_offsets.push(col_indices.len());
        }
        SparseMatrix::from_csr_unchecked(n, n, row_offsets, col_indices, values)
    }

    /// Normalized Laplacian without self-loops: diagonal 1 for nodes with
    /// degree >= 1, off-diagonal (i, j) = -1/sqrt(deg(i) deg(j)) per edge.
    /// Rows and columns of isolated nodes are entirely zero, so every
    /// component (including singletons) contributes one zero eigenvalue.
    pub fn normalized_laplacian(&self) -> SparseMatrix {
        let n = self.num_nodes;
        let entry = |i: usize, j: usize| -1.0 / ((self.degree(i) * self.degree(j)) as f64).sqrt();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..n {
            if self.degree(i) > 0 {
                let mut diagonal_written = false;
                for &j in self.neighbors(i) {
                    if !diagonal_written && j > i {
                        col_indices.push(i);
                        values.push(1.0);
                        diagonal_written = true;
                    }
                    col_indices.push(j);
                    values.push(entry(i, j));
                }
                if !diagonal_written {
                    col_indices.push(i);
                    values.push(1.0);
                }
            }
            row_offsets.push(col_indices.len());
        }
        SparseMatrix::from_csr_unchecked(n, n, row_offsets, col_indices, values)
    }

    /// Relabel nodes: node i of the original becomes `perm[i]`. Test helper
    /// for permutation-invariance properties.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.num_nodes {
            return Err(Error::DimensionMismatch {
                context: "permutation length",
                expected: self.num_nodes,
                actual: perm.len(),
            });
        }
        let mut edges = Vec::with_capacity(self.col_indices.len() / 2);
        for i in 0..self.num_nodes {
            for &j in self.neighbors(i) {
                if i < j {
                    edges.push((perm[i], perm[j]));
                }
            }
        }
        Graph::from_edge_list(&edges, self.num_nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_symmetrizes_and_dedups() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 0), (1, 2)], 3).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn empty_edge_list() {
        let g = Graph::from_edge_list(&[], 2).unwrap();
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.connected_components().num_components, 2);
    }

    #[test]
    fn self_loops_dropped() {
        let g = Graph::from_edge_list(&[(0, 0), (0, 1)], 2).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        let err = Graph::from_edge_list(&[(0, 5)], 3).unwrap_err();
        match err {
            Error::EdgeOutOfRange {
                src,
                dst,
                num_nodes,
            } => {
                assert_eq!((src, dst, num_nodes), (0, 5, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 2), (2, 0), (3, 4)], 6).unwrap();
        let sum: usize = g.degrees().iter().sum();
        assert_eq!(sum, 2 * g.num_edges());
    }

    #[test]
    fn components_on_two_triangles() {
        let g =
            Graph::from_edge_list(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 6).unwrap();
        let labeling = g.connected_components();
        assert_eq!(labeling.num_components, 2);
        assert_eq!(labeling.component_id[0], labeling.component_id[2]);
        assert_ne!(labeling.component_id[0], labeling.component_id[3]);
        assert_eq!(labeling.sizes(), vec![3, 3]);
    }

    #[test]
    fn normalized_adjacency_single_edge() {
        let g = Graph::from_edge_list(&[(0, 1)], 2).unwrap();
        let a_hat = g.normalized_adjacency();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a_hat.get(i, j) - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn normalized_adjacency_isolated_node() {
        let g = Graph::from_edge_list(&[], 1).unwrap();
        let a_hat = g.normalized_adjacency();
        assert_eq!(a_hat.get(0, 0), 1.0);
    }

    #[test]
    fn normalized_adjacency_triangle() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 2), (2, 0)], 3).unwrap();
        let a_hat = g.normalized_adjacency();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a_hat.get(i, j) - 1.0 / 3.0).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn normalized_laplacian_single_edge() {
        let g = Graph::from_edge_list(&[(0, 1)], 2).unwrap();
        let lap = g.normalized_laplacian();
        assert_eq!(lap.get(0, 0), 1.0);
        assert_eq!(lap.get(1, 1), 1.0);
        assert_eq!(lap.get(0, 1), -1.0);
        assert_eq!(lap.get(1, 0), -1.0);
    }

    #[test]
    fn normalized_laplacian_isolated_row_is_zero() {
        let g = Graph::from_edge_list(&[(0, 1)], 3).unwrap();
        let lap = g.normalized_laplacian();
        for j in 0..3 {
            assert_eq!(lap.get(2, j), 0.0);
            assert_eq!(lap.get(j, 2), 0.0);
        }
    }

    #[test]
    fn normalized_matrices_are_symmetric() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], 5).unwrap();
        assert!(g.normalized_adjacency().max_asymmetry() == 0.0);
        assert!(g.normalized_laplacian().max_asymmetry() == 0.0);
    }
}
