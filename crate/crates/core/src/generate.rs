//! Synthetic graph families for benchmarks and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

/// Erdős–Rényi G(n, p), undirected.
pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n, false);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

/// A Hamiltonian path through a random vertex order, plus G(n, p) noise.
/// Has a simple path on every k <= n vertices.
pub fn hampath<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = random(n, p, rng);
    for w in order.windows(2) {
        g.add_edge(w[0], w[1]).expect("valid edge");
    }
    g
}

/// Grid with `cols` columns filled row by row until `n` vertices exist.
pub fn grid(n: usize, cols: usize) -> Graph {
    let cols = cols.max(1);
    let mut g = Graph::new(n, false);
    for v in 0..n {
        if v % cols + 1 < cols && v + 1 < n {
            g.add_edge(v, v + 1).expect("valid edge");
        }
        if v + cols < n {
            g.add_edge(v, v + cols).expect("valid edge");
        }
    }
    g
}

/// Grid on `n` vertices with roughly square shape.
pub fn square_grid(n: usize) -> Graph {
    let cols = (n as f64).sqrt().ceil() as usize;
    grid(n, cols)
}
