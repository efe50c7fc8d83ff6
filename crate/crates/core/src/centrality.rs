//! Local reaching centrality: for node i, the mean inverse BFS distance to
//! every node it can reach, scaled by 1/(N-1). Isolated nodes score 0 and
//! a full-graph hub (distance 1 to everyone) scores 1.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rayon::prelude::*;
use std::collections::VecDeque;

/// Distance sentinel for nodes outside the source's component.
pub const UNREACHABLE: u32 = u32::MAX;

/// Unweighted shortest-path distances from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceVector {
    pub distances: Vec<u32>,
}

impl DistanceVector {
    pub fn is_reachable(&self, node: usize) -> bool {
        self.distances[node] != UNREACHABLE
    }
}

/// Per-node centrality values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub scores: Vec<f64>,
}

impl CentralityScores {
    pub fn zeros(num_nodes: usize) -> Self {
        Self {
            scores: vec![0.0; num_nodes],
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CentralityOptions {
    /// Normalize by the node's component size instead of the global node
    /// count. Off by default: with a global N, nodes stuck in small
    /// components score low, which is exactly the "limited information
    /// flow" signal the combined selection policy wants.
    pub component_local_n: bool,
    /// Truncate each BFS at this radius; contributions beyond it are
    /// dropped from the sum.
    pub max_radius: Option<u32>,
}

/// BFS distances from `source`, optionally truncated at `max_radius`.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<DistanceVector> {
    bfs_distances_bounded(g, source, None)
}

pub fn bfs_distances_bounded(
    g: &Graph,
    source: usize,
    max_radius: Option<u32>,
) -> Result<DistanceVector> {
    let n = g.num_nodes();
    if source >= n {
        return Err(Error::NodeOutOfRange {
            index: source,
            num_nodes: n,
        });
    }
    let mut distances = vec![UNREACHABLE; n];
    distances[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = distances[u] + 1;
        if let Some(radius) = max_radius {
            if next > radius {
                continue;
            }
        }
        for &v in g.neighbors(u) {
            if distances[v] == UNREACHABLE {
                distances[v] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(DistanceVector { distances })
}

/// Local reaching centrality of every node, one BFS per source. Sources
/// fan out across worker threads; the output is identical for any thread
/// count because each score is a pure function of the immutable graph.
pub fn local_reaching_centrality(g: &Graph) -> Result<CentralityScores> {
    local_reaching_centrality_with(g, &CentralityOptions::default())
}

pub fn local_reaching_centrality_with(
    g: &Graph,
    opts: &CentralityOptions,
) -> Result<CentralityScores> {
    let n = g.num_nodes();
    if n < 2 {
        return Err(Error::TooFewNodes { num_nodes: n });
    }
    let denominators: Vec<f64> = if opts.component_local_n {
        let labeling = g.connected_components();
        let sizes = labeling.sizes();
        labeling
            .component_id
            .iter()
            .map(|&c| (sizes[c] as f64) - 1.0)
            .collect()
    } else {
        vec![(n as f64) - 1.0; n]
    };

    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|source| {
            let denom = denominators[source];
            if denom <= 0.0 {
                return 0.0;
            }
            let dist = bfs_distances_bounded(g, source, opts.max_radius).expect("source in range");
            let sum: f64 = dist
                .distances
                .iter()
                .filter(|&&d| d != UNREACHABLE && d > 0)
                .map(|&d| 1.0 / d as f64)
                .sum();
            sum / denom
        })
        .collect();
    Ok(CentralityScores { scores })
}
