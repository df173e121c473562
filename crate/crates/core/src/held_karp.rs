//! Exact k-vertex path search by dynamic programming over vertex subsets.

use crate::error::{parameter, unsupported, Result};
use crate::graph::{Graph, Path};

/// Largest graph accepted; the table has `2^n` entries of one word each.
pub const MAX_VERTICES: usize = 25;

/// A simple path on exactly `k` vertices, if one exists.
///
/// `reach[S]` holds the set of vertices `v` such that some path visits
/// exactly the vertices of `S` and ends at `v`. Only subsets of size at most
/// `k` are expanded.
pub fn held_karp_path(g: &Graph, k: usize) -> Result<Option<Path>> {
    let n = g.n();
    if k == 0 {
        return Err(parameter("k must be positive"));
    }
    if n > MAX_VERTICES {
        return Err(unsupported(format!(
            "subset dynamic program limited to {MAX_VERTICES} vertices, got {n}"
        )));
    }
    if k > n {
        return Ok(None);
    }
    let mut reach = vec![0u32; 1 << n];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    for mask in 1usize..(1 << n) {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if size == k {
            return Ok(Some(reconstruct(g, &reach, mask, ends.trailing_zeros() as usize)));
        }
        let mut rest = ends;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for &w in g.neighbors(u) {
                if mask >> w & 1 == 0 {
                    reach[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    Ok(None)
}

fn reconstruct(g: &Graph, reach: &[u32], mut mask: usize, mut end: usize) -> Path {
    let mut rev = vec![end];
    while mask.count_ones() > 1 {
        let prev = mask & !(1 << end);
        let mut cands = reach[prev];
        let mut found = None;
        while cands != 0 {
            let u = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if g.has_edge(u, end) {
                found = Some(u);
                break;
            }
        }
        end = found.expect("a predecessor exists for every reachable state");
        mask = prev;
        rev.push(end);
    }
    rev.reverse();
    Path(rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_path;

    #[test]
    fn path_graph() {
        let g = Graph::path(4);
        let p = held_karp_path(&g, 4).unwrap().unwrap();
        assert!(p.0 == vec![0, 1, 2, 3] || p.0 == vec![3, 2, 1, 0]);
        assert!(held_karp_path(&g, 5).unwrap().is_none());
    }

    #[test]
    fn star_has_no_four_path() {
        let g = Graph::star(3);
        assert!(held_karp_path(&g, 4).unwrap().is_none());
        assert!(verify_path(&g, &held_karp_path(&g, 3).unwrap().unwrap(), 3));
    }

    #[test]
    fn directed_respects_orientation() {
        let g = Graph::from_edges(3, true, &[(0, 1), (2, 1)]).unwrap();
        assert!(held_karp_path(&g, 3).unwrap().is_none());
        let g = Graph::from_edges(3, true, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(held_karp_path(&g, 3).unwrap().unwrap().0, vec![2, 0, 1]);
    }

    #[test]
    fn limits() {
        assert!(held_karp_path(&Graph::new(26, false), 2).is_err());
        assert!(held_karp_path(&Graph::path(3), 0).is_err());
        assert_eq!(held_karp_path(&Graph::new(1, false), 1).unwrap(), Some(Path(vec![0])));
    }
}
