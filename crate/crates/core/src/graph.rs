//! Simple graphs, paths, and the plain-text graph file format.
//!
//! Vertices are `0..n` in the API. The file format and all user-facing
//! output number them `1..=n`.
//!
//! File format: `#` starts a comment line, the first data line is
//! `n m directed|undirected`, followed by `m` lines `u v` with 1-based
//! endpoints and `u != v`. Duplicate edges are ignored.

use std::fmt;

use crate::error::{parameter, Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    matrix: Vec<bool>,
    out: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("directed", &self.directed)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize, directed: bool) -> Self {
        Graph {
            n,
            directed,
            matrix: vec![false; n * n],
            out: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n, directed);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n, false);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_arc(u, v);
                g.insert_arc(v, u);
            }
        }
        g
    }

    /// The path 0 - 1 - ... - (n-1).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n, false);
        for u in 1..n {
            g.insert_arc(u - 1, u);
            g.insert_arc(u, u - 1);
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new(leaves + 1, false);
        for v in 1..=leaves {
            g.insert_arc(0, v);
            g.insert_arc(v, 0);
        }
        g
    }

    fn insert_arc(&mut self, u: usize, v: usize) -> bool {
        let slot = &mut self.matrix[u * self.n + v];
        if *slot {
            return false;
        }
        *slot = true;
        let list = &mut self.out[u];
        let pos = list.partition_point(|&w| w < v);
        list.insert(pos, v);
        true
    }

    /// Adds the edge (arc, for directed graphs) `u -> v`. Returns `false`
    /// if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(parameter(format!("edge ({u}, {v}) out of range for n={}", self.n)));
        }
        if u == v {
            return Err(parameter(format!("self-loop at vertex {u}")));
        }
        let added = self.insert_arc(u, v);
        if !self.directed {
            self.insert_arc(v, u);
        }
        Ok(added)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Whether the adjacency matrix has `A[u][v] = 1`.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.matrix[u * self.n + v]
    }

    /// Out-neighbours of `u` in ascending order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Number of arcs, counting both orientations of an undirected edge.
    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Number of edges as written in the graph file.
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.arc_count()
        } else {
            self.arc_count() / 2
        }
    }

    /// Edges in ascending order; undirected edges once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.out[u]
                .iter()
                .copied()
                .filter(move |&v| self.directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Subgraph induced by the vertices with `keep[v]`, renumbered in
    /// ascending order. Also returns the new-to-old vertex map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        assert_eq!(keep.len(), self.n);
        let old: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = Graph::new(old.len(), self.directed);
        for (i, &u) in old.iter().enumerate() {
            for &v in &self.out[u] {
                if keep[v] {
                    g.insert_arc(i, new_id[v]);
                }
            }
        }
        (g, old)
    }

    /// Parses the graph file format.
    pub fn parse(text: &str) -> Result<Graph> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(hline, format!("expected `n m directed|undirected`, got `{header}`")));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| perr(hline, format!("bad vertex count `{}`", fields[0])))?;
        let m: usize = fields[1]
            .parse()
            .map_err(|_| perr(hline, format!("bad edge count `{}`", fields[1])))?;
        let directed = match fields[2] {
            "directed" => true,
            "undirected" => false,
            other => return Err(perr(hline, format!("expected directed or undirected, got `{other}`"))),
        };

        let mut g = Graph::new(n, directed);
        let mut seen = 0;
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(perr(lineno, format!("expected `u v`, got `{line}`")));
            }
            let endpoint = |s: &str| -> Result<usize> {
                let x: usize = s.parse().map_err(|_| perr(lineno, format!("bad vertex `{s}`")))?;
                if x == 0 || x > n {
                    return Err(perr(lineno, format!("vertex {x} outside 1..={n}")));
                }
                Ok(x - 1)
            };
            let (u, v) = (endpoint(parts[0])?, endpoint(parts[1])?);
            if u == v {
                return Err(perr(lineno, format!("self-loop at vertex {}", u + 1)));
            }
            seen += 1;
            if seen > m {
                return Err(perr(lineno, format!("more than the declared {m} edges")));
            }
            g.add_edge(u, v)?;
        }
        if seen != m {
            return Err(perr(hline, format!("declared {m} edges, found {seen}")));
        }
        Ok(g)
    }

    /// Serializes in the graph file format.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {}\n",
            self.n,
            self.edge_count(),
            if self.directed { "directed" } else { "undirected" }
        );
        for (u, v) in self.edges() {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }
}

/// An ordered sequence of vertices (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based vertex ids for display.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        f.write_str(&ids.join(" "))
    }
}

/// Checks that `path` is a simple path on exactly `k` vertices of `g`.
pub fn verify_path(g: &Graph, path: &Path, k: usize) -> bool {
    let vs = path.vertices();
    if vs.len() != k || vs.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for &v in vs {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    vs.windows(2).all(|w| g.has_edge(w[0], w[1]))
}
