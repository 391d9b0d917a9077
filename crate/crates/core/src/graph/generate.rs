//! Random-graph generators: Erdős–Rényi, preferential attachment (scale-free)
//! and Watts–Strogatz (small-world).
//!
//! Each generator comes in two forms: one taking a seed and one taking a
//! caller-owned generator.

use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Erdős–Rényi `G(n, p)`: every pair is an edge independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    erdos_renyi_with(n, p, &mut rng_from_seed(seed))
}

pub fn erdos_renyi_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::domain("a graph needs at least one node"));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential-attachment growth.
///
/// Starts from `n0` isolated nodes. Each new node links to `m1` distinct
/// existing nodes; node `i` is chosen with probability proportional to
/// `(degree(i) + 1)^exponent`. The offset keeps zero-degree seed nodes
/// reachable. The final graph has `(n - n0) * m1` edges.
pub fn scale_free(n: usize, exponent: f64, m1: usize, n0: usize, seed: u64) -> Result<Graph> {
    scale_free_with(n, exponent, m1, n0, &mut rng_from_seed(seed))
}

pub fn scale_free_with<R: Rng + ?Sized>(
    n: usize,
    exponent: f64,
    m1: usize,
    n0: usize,
    rng: &mut R,
) -> Result<Graph> {
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(Error::domain(format!(
            "scaling exponent {exponent} must be finite and nonnegative"
        )));
    }
    if m1 == 0 {
        return Err(Error::domain("each new node needs at least one edge"));
    }
    if m1 > n0 {
        return Err(Error::domain(format!(
            "edges per new node m1 = {m1} exceeds seed node count n0 = {n0}"
        )));
    }
    if n <= n0 {
        return Err(Error::domain(format!(
            "node count {n} must exceed seed node count {n0}"
        )));
    }

    let weight = |degree: usize| ((degree + 1) as f64).powf(exponent);
    let mut degree = vec![0usize; n];
    let mut tree = Fenwick::new(n);
    for i in 0..n0 {
        tree.set(i, weight(0));
    }
    let mut edges = Vec::with_capacity((n - n0) * m1);
    let mut chosen = Vec::with_capacity(m1);
    for new in n0..n {
        chosen.clear();
        while chosen.len() < m1 {
            let target = tree.sample(rng);
            // removed nodes hold exactly zero weight, but prefix sums can
            // carry rounding residue; redraw in that case
            if tree.weight(target) == 0.0 {
                continue;
            }
            chosen.push(target);
            tree.set(target, 0.0);
        }
        for &target in &chosen {
            edges.push((target, new));
            degree[target] += 1;
            tree.set(target, weight(degree[target]));
        }
        degree[new] = m1;
        tree.set(new, weight(m1));
    }
    Graph::from_edges(n, edges)
}

/// Watts–Strogatz small world.
///
/// A ring lattice where each node links to its `k / 2` nearest neighbors on
/// each side is rewired lap by lap: first every edge to the nearest clockwise
/// neighbor, then to the second nearest, and so on. Each lattice edge is
/// considered once and, with probability `rewire`, its far endpoint is moved
/// to a uniformly random node, avoiding self-loops and duplicate edges. A
/// rejected target is redrawn; after `n` rejected draws the edge stays put.
pub fn small_world(n: usize, k: usize, rewire: f64, seed: u64) -> Result<Graph> {
    small_world_with(n, k, rewire, &mut rng_from_seed(seed))
}

pub fn small_world_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rewire: f64,
    rng: &mut R,
) -> Result<Graph> {
    if !(0.0..=1.0).contains(&rewire) {
        return Err(Error::domain(format!(
            "rewiring probability {rewire} outside [0, 1]"
        )));
    }
    if !k.is_multiple_of(2) || k == 0 {
        return Err(Error::domain(format!("neighbor count k = {k} must be even and positive")));
    }
    if k >= n {
        return Err(Error::domain(format!(
            "neighbor count k = {k} must be smaller than n = {n}"
        )));
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(k + 4); n];
    for u in 0..n {
        for offset in 1..=k / 2 {
            let v = (u + offset) % n;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }

    for offset in 1..=k / 2 {
        for u in 0..n {
            let v = (u + offset) % n;
            if rng.random::<f64>() >= rewire {
                continue;
            }
            let mut target = None;
            for _ in 0..n {
                let w = rng.random_range(0..n);
                if w != u && !adjacency[u].contains(&w) {
                    target = Some(w);
                    break;
                }
            }
            if let Some(w) = target {
                remove(&mut adjacency[u], v);
                remove(&mut adjacency[v], u);
                adjacency[u].push(w);
                adjacency[w].push(u);
            }
        }
    }

    let edges = adjacency
        .iter()
        .enumerate()
        .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::from_edges(n, edges)
}

fn remove(list: &mut Vec<usize>, value: usize) {
    let pos = list
        .iter()
        .position(|&x| x == value)
        .expect("lattice edge present before rewiring");
    list.swap_remove(pos);
}

/// Binary indexed tree over nonnegative weights for cumulative-weight inversion.
struct Fenwick {
    tree: Vec<f64>,
    weights: Vec<f64>,
    top: usize,
}

impl Fenwick {
    fn new(len: usize) -> Self {
        let top = if len == 0 { 0 } else { 1 << (usize::BITS - 1 - len.leading_zeros()) };
        Fenwick {
            tree: vec![0.0; len + 1],
            weights: vec![0.0; len],
            top,
        }
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    fn set(&mut self, i: usize, w: f64) {
        let delta = w - self.weights[i];
        self.weights[i] = w;
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] += delta;
            j += j & j.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut sum = 0.0;
        let mut j = self.tree.len() - 1;
        while j > 0 {
            sum += self.tree[j];
            j &= j - 1;
        }
        sum
    }

    /// Smallest index whose inclusive prefix sum exceeds `u * total`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut remaining = rng.random::<f64>() * self.total();
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= remaining {
                remaining -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos.min(self.weights.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metrics;

    #[test]
    fn er_degenerate_probabilities() {
        assert_eq!(erdos_renyi(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 1).unwrap().edge_count(), 45);
        assert!(erdos_renyi(10, 1.5, 1).is_err());
        assert!(erdos_renyi(10, -0.1, 1).is_err());
    }

    #[test]
    fn er_is_deterministic_per_seed() {
        assert_eq!(erdos_renyi(50, 0.3, 9).unwrap(), erdos_renyi(50, 0.3, 9).unwrap());
        assert_ne!(erdos_renyi(50, 0.3, 9).unwrap(), erdos_renyi(50, 0.3, 10).unwrap());
    }

    #[test]
    fn scale_free_counts() {
        let tree = scale_free(5, 1.0, 1, 1, 3).unwrap();
        assert_eq!(tree.edge_count(), 4);

        let g = scale_free(500, 1.0, 2, 2, 3).unwrap();
        assert_eq!(g.edge_count(), (500 - 2) * 2);
        // every grown node has at least m1 edges
        assert!(g.degrees()[2..].iter().all(|&d| d >= 2));
    }

    #[test]
    fn scale_free_domain_errors() {
        assert!(scale_free(10, 1.0, 3, 2, 0).is_err());
        assert!(scale_free(2, 1.0, 1, 2, 0).is_err());
        assert!(scale_free(10, -1.0, 1, 1, 0).is_err());
        assert!(scale_free(10, 1.0, 0, 1, 0).is_err());
    }

    #[test]
    fn m1_one_gives_a_connected_tree() {
        for seed in 0..20 {
            let g = scale_free(40, 1.5, 1, 1, seed).unwrap();
            assert_eq!(g.edge_count(), 39);
            // every node after the seed hangs off an older node
            assert!((1..40).all(|v| g.neighbors(v)[0] < v));
            assert!(metrics(&g).clustering_coefficient == 0.0);
        }
    }

    #[test]
    fn small_world_ring_without_rewiring() {
        let g = small_world(20, 4, 0.0, 5).unwrap();
        assert_eq!(g.degrees(), vec![4; 20]);
        for u in 0..20 {
            assert!(g.has_edge(u, (u + 1) % 20));
            assert!(g.has_edge(u, (u + 2) % 20));
        }
    }

    #[test]
    fn small_world_preserves_edge_count() {
        for seed in 0..30 {
            for &p in &[0.0, 0.1, 0.5, 1.0] {
                assert_eq!(small_world(20, 4, p, seed).unwrap().edge_count(), 40);
            }
        }
    }

    #[test]
    fn small_world_domain_errors() {
        assert!(small_world(20, 3, 0.1, 0).is_err());
        assert!(small_world(20, 20, 0.1, 0).is_err());
        assert!(small_world(20, 0, 0.1, 0).is_err());
        assert!(small_world(20, 4, 1.1, 0).is_err());
    }

    #[test]
    fn fenwick_inversion_matches_linear_scan() {
        let mut tree = Fenwick::new(7);
        let w = [0.5, 0.0, 2.0, 1.0, 0.25, 0.0, 3.0];
        for (i, &x) in w.iter().enumerate() {
            tree.set(i, x);
        }
        assert!((tree.total() - 6.75).abs() < 1e-15);
        let mut rng = rng_from_seed(1);
        let mut counts = [0usize; 7];
        for _ in 0..67_500 {
            counts[tree.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        assert_eq!(counts[5], 0);
        for (i, &x) in w.iter().enumerate() {
            let expected = 67_500.0 * x / 6.75;
            assert!((counts[i] as f64 - expected).abs() < 4.0 * expected.sqrt() + 1.0);
        }
    }
}
