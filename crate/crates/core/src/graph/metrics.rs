use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Classical topology summary of a graph.
///
/// Path statistics only count pairs of nodes joined by some path, so a
/// disconnected graph is summarized by its within-component distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub diameter: usize,
    pub clustering_coefficient: f64,
    pub average_path_length: f64,
}

pub fn metrics(g: &Graph) -> GraphMetrics {
    let n = g.node_count();
    let (diameter, average_path_length) = path_statistics(g);
    GraphMetrics {
        node_count: n,
        edge_count: g.edge_count(),
        average_degree: 2.0 * g.edge_count() as f64 / n as f64,
        diameter,
        clustering_coefficient: average_clustering(g),
        average_path_length,
    }
}

/// Mean of the local clustering coefficients, counting nodes of degree < 2 as 0.
fn average_clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    let mut mark = vec![false; n];
    let mut total = 0.0;
    for v in 0..n {
        let neighbors = g.neighbors(v);
        let k = neighbors.len();
        if k < 2 {
            continue;
        }
        for &u in neighbors {
            mark[u] = true;
        }
        // each triangle through v is seen from both of its other corners
        let links: usize = neighbors
            .iter()
            .map(|&u| g.neighbors(u).iter().filter(|&&w| mark[w]).count())
            .sum();
        for &u in neighbors {
            mark[u] = false;
        }
        total += links as f64 / (k * (k - 1)) as f64;
    }
    total / n as f64
}

/// Largest finite distance and mean finite distance over ordered pairs.
fn path_statistics(g: &Graph) -> (usize, f64) {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut diameter = 0;
    let mut sum = 0u64;
    let mut pairs = 0u64;
    for source in 0..n {
        dist.fill(usize::MAX);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = d + 1;
                    sum += (d + 1) as u64;
                    pairs += 1;
                    diameter = diameter.max(d + 1);
                    queue.push_back(w);
                }
            }
        }
    }
    let apl = if pairs == 0 {
        0.0
    } else {
        sum as f64 / pairs as f64
    };
    (diameter, apl)
}
