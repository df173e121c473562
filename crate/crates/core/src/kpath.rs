//! Detection and construction of simple paths on `k` vertices.
//!
//! The k-walk polynomial of a graph is `1^T B^{k-1} x` with
//! `B[i][j] = A[i][j] x_i`; its monomials are exactly the k-vertex walks,
//! and the multilinear ones are the simple paths. A trial evaluates a
//! randomized version of it over GF(2^l)[Z_2^k] layer by layer:
//!
//! ```text
//! z0[i] = W0 + v_i
//! zc[i] = (W0 + v_i) * sum_{j : A[i][j] = 1} y(i, j, c) * z(c-1)[j]
//! ```
//!
//! with `v_i` uniform in Z_2^k and `y(i, j, c)` uniform nonzero field
//! elements. The trial answers yes iff `sum_i z(k-1)[i]` is nonzero, which
//! can only happen if a simple k-vertex path exists.

use num_traits::{CheckedAdd, CheckedMul, Zero};
use rand::Rng;

use crate::algebra::MAX_K;
use crate::circuit::{Circuit, CircuitBuilder, GateId};
use crate::error::{parameter, unsupported, Error, Result};
use crate::gf2e::FieldSpec;
use crate::graph::{Graph, Path};
use crate::held_karp::{self, held_karp_path};
use crate::rng::RngStream;

/// Default number of detection trials.
pub const DEFAULT_TRIALS: usize = 64;

/// Full restarts of the extraction procedure after the first attempt.
pub const EXTRACTION_RETRIES: usize = 5;

/// Group indices per tile in the trial kernel.
const TILE: usize = 2048;

/// Outcome of [`detect`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    /// Trials run, including the successful one.
    pub trials_used: usize,
    pub seed: u64,
}

/// Evaluates the k-walk polynomial at the point `x` with the same layered
/// recurrence the randomized trial uses. Overflow is reported as an error.
///
/// With `x = 1` everywhere this counts the k-vertex walks of `g`.
pub fn walk_polynomial_value<T>(g: &Graph, k: usize, x: &[T]) -> Result<T>
where
    T: Clone + Zero + CheckedAdd + CheckedMul,
{
    if k == 0 {
        return Err(parameter("k must be positive"));
    }
    if x.len() != g.n() {
        return Err(parameter(format!("need {} values, got {}", g.n(), x.len())));
    }
    let overflow = || unsupported("walk polynomial value overflows the integer type");
    let mut cur: Vec<T> = x.to_vec();
    for _ in 1..k {
        let mut next = Vec::with_capacity(g.n());
        for (i, xi) in x.iter().enumerate() {
            let mut acc = T::zero();
            for &j in g.neighbors(i) {
                acc = acc.checked_add(&cur[j]).ok_or_else(overflow)?;
            }
            next.push(xi.checked_mul(&acc).ok_or_else(overflow)?);
        }
        cur = next;
    }
    cur.iter()
        .try_fold(T::zero(), |s, v| s.checked_add(v))
        .ok_or_else(overflow)
}

/// Arithmetic circuit for the k-walk polynomial, with `O(k(n + m))` gates.
/// `None` when the polynomial is identically zero (no k-vertex walk), since
/// a scalar-free circuit cannot express the constant 0.
pub fn walk_circuit(g: &Graph, k: usize) -> Result<Option<Circuit>> {
    if k == 0 {
        return Err(parameter("k must be positive"));
    }
    let mut b = CircuitBuilder::new().with_num_vars(g.n());
    let inputs: Vec<GateId> = (0..g.n()).map(|i| b.input(i)).collect();
    let mut layer: Vec<Option<GateId>> = inputs.iter().copied().map(Some).collect();
    for _ in 1..k {
        let mut next = Vec::with_capacity(g.n());
        for (i, &input) in inputs.iter().enumerate() {
            let parts: Vec<GateId> = g.neighbors(i).iter().filter_map(|&j| layer[j]).collect();
            next.push(if parts.is_empty() {
                None
            } else {
                let sum = b.add(&parts);
                Some(b.mul(input, sum))
            });
        }
        layer = next;
    }
    let tops: Vec<GateId> = layer.into_iter().flatten().collect();
    if tops.is_empty() {
        return Ok(None);
    }
    let out = b.add(&tops);
    b.finish(out).map(Some)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(parameter("k must be positive"));
    }
    if k > MAX_K as usize {
        return Err(unsupported(format!(
            "k={k} exceeds the group algebra limit of {MAX_K} (2^k coefficients per element)"
        )));
    }
    Ok(())
}

/// One randomized trial. `true` certifies a simple path on `k` vertices;
/// when one exists, `true` comes up with probability above 1/5.
pub fn detect_trial(g: &Graph, k: usize, rng: &RngStream) -> Result<bool> {
    check_k(k)?;
    if k > g.n() {
        return Ok(false);
    }
    let spec = FieldSpec::for_k(k)?;
    // k <= MAX_K keeps ell <= 8, so coefficients fit in a byte
    let rows = spec.byte_rows().expect("field for k <= MAX_K has byte rows");

    let n = g.n();
    let len = 1usize << k;
    let mut vrng = rng.child("vectors", 0);
    let v: Vec<usize> = (0..n).map(|_| vrng.gen_range(0..len)).collect();

    let mut cur = vec![0u8; n * len];
    for (i, z) in cur.chunks_exact_mut(len).enumerate() {
        z[0] ^= 1;
        z[v[i]] ^= 1;
    }
    let mut next = vec![0u8; n * len];
    let mut yrng = rng.child("edge-weights", 0);
    let mut weights = Vec::with_capacity(g.arc_count());
    let tile = len.min(TILE);

    for _layer in 1..k {
        weights.clear();
        for i in 0..n {
            for _ in g.neighbors(i) {
                weights.push(spec.random_nonzero(&mut yrng).bits() as usize);
            }
        }
        // the sums are pointwise in the group index, so they can be done
        // one cache-sized tile at a time
        for start in (0..len).step_by(tile) {
            let mut w = weights.iter();
            for i in 0..n {
                let acc = &mut next[i * len + start..][..tile];
                acc.fill(0);
                for (&j, &y) in g.neighbors(i).iter().zip(&mut w) {
                    let row = &rows[y];
                    let src = &cur[j * len + start..][..tile];
                    for (a, &s) in acc.iter_mut().zip(src) {
                        *a ^= row[s as usize];
                    }
                }
            }
        }
        // multiply by W0 + v_i in place: both coefficients of the pair
        // {h, h + v_i} become their sum
        for (i, z) in next.chunks_exact_mut(len).enumerate() {
            let vi = v[i];
            if vi == 0 {
                z.fill(0);
                continue;
            }
            let high = 1usize << (usize::BITS - 1 - vi.leading_zeros());
            for h in (0..len).filter(|h| h & high == 0) {
                let x = z[h] ^ z[h ^ vi];
                z[h] = x;
                z[h ^ vi] = x;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }

    let mut total = vec![0u8; len];
    for z in cur.chunks_exact(len) {
        for (t, &x) in total.iter_mut().zip(z) {
            *t ^= x;
        }
    }
    Ok(total.iter().any(|&x| x != 0))
}

/// Runs up to `trials` independent trials derived from `root`, stopping at
/// the first yes.
pub fn detect_with_stream(g: &Graph, k: usize, trials: usize, root: &RngStream) -> Result<Decision> {
    if trials == 0 {
        return Err(parameter("trials must be positive"));
    }
    check_k(k)?;
    let decision = |answer, trials_used| Decision { answer, trials_used, seed: root.seed() };
    if k > g.n() {
        return Ok(decision(false, 0));
    }
    if k == 1 {
        return Ok(decision(true, 0));
    }
    for t in 0..trials {
        if detect_trial(g, k, &root.child("detect", t as u64))? {
            return Ok(decision(true, t + 1));
        }
    }
    Ok(decision(false, trials))
}

/// Does `g` have a simple path on `k` vertices? A yes is always correct; a
/// no is wrong with probability at most (4/5)^trials.
pub fn detect(g: &Graph, k: usize, trials: usize, seed: u64) -> Result<Decision> {
    detect_with_stream(g, k, trials, &RngStream::new(seed))
}

/// Trials per tentative vertex removal: max(32, ceil(8 log2 n)).
pub fn inner_trials(n: usize) -> usize {
    let log = (n.max(1) as f64).log2();
    32.max((8.0 * log).ceil() as usize)
}

/// Finds a simple path on `k` vertices.
///
/// After a positive detection, vertices are tentatively deleted in
/// ascending order; a deletion is kept when the smaller graph still tests
/// positive. The surviving vertices (usually exactly `k`) are ordered by
/// the subset dynamic program. `Ok(None)` means detection answered no.
pub fn find(g: &Graph, k: usize, seed: u64) -> Result<Option<Path>> {
    find_with_trials(g, k, DEFAULT_TRIALS, seed)
}

/// [`find`] with `trials` for the initial detection.
pub fn find_with_trials(g: &Graph, k: usize, trials: usize, seed: u64) -> Result<Option<Path>> {
    if trials == 0 {
        return Err(parameter("trials must be positive"));
    }
    check_k(k)?;
    if k > g.n() {
        return Ok(None);
    }
    if k == 1 {
        return Ok(Some(Path(vec![0])));
    }
    let root = RngStream::new(seed);
    if !detect_with_stream(g, k, trials, &root)?.answer {
        return Ok(None);
    }
    let t_inner = inner_trials(g.n());
    for attempt in 0..=EXTRACTION_RETRIES {
        let stream = root.child("extract", attempt as u64);
        let alive = prune(g, k, t_inner, &stream)?;
        let (remnant, ids) = g.induced(&alive);
        if remnant.n() > held_karp::MAX_VERTICES {
            continue;
        }
        if let Some(p) = held_karp_path(&remnant, k)? {
            return Ok(Some(Path(p.0.into_iter().map(|v| ids[v]).collect())));
        }
    }
    Err(Error::ExtractionFailed { attempts: EXTRACTION_RETRIES + 1 })
}

/// One pass of vertex deletion. Every kept deletion is certified, so the
/// returned vertex set always still contains a k-vertex path.
fn prune(g: &Graph, k: usize, trials: usize, stream: &RngStream) -> Result<Vec<bool>> {
    let mut alive = vec![true; g.n()];
    let mut count = g.n();
    for v in 0..g.n() {
        if count == k {
            break;
        }
        alive[v] = false;
        let (sub, _) = g.induced(&alive);
        if detect_with_stream(&sub, k, trials, &stream.child("remove", v as u64))?.answer {
            count -= 1;
        } else {
            alive[v] = true;
        }
    }
    Ok(alive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElem, GroupVector};
    use crate::generate;
    use crate::graph::verify_path;

    /// The trial recurrence written with the general group-algebra type,
    /// drawing randomness in the same order as the kernel.
    fn reference_trial(g: &Graph, k: usize, rng: &RngStream) -> bool {
        let spec = FieldSpec::for_k(k).unwrap();
        let kk = k as u32;
        let mut vrng = rng.child("vectors", 0);
        let v: Vec<GroupVector> = (0..g.n()).map(|_| GroupVector(vrng.gen_range(0..1u64 << k))).collect();
        let mut z: Vec<AlgebraElem> =
            v.iter().map(|&vi| AlgebraElem::one_plus_basis(kk, vi, &spec).unwrap()).collect();
        let mut yrng = rng.child("edge-weights", 0);
        for _ in 1..k {
            let mut next = Vec::with_capacity(g.n());
            for (i, &vi) in v.iter().enumerate() {
                let mut acc = AlgebraElem::zero(kk, &spec).unwrap();
                for &j in g.neighbors(i) {
                    let y = spec.random_nonzero(&mut yrng);
                    acc.add_assign(&z[j].scalar_mul(y)).unwrap();
                }
                next.push(acc.mul(&AlgebraElem::one_plus_basis(kk, vi, &spec).unwrap()).unwrap());
            }
            z = next;
        }
        let mut total = AlgebraElem::zero(kk, &spec).unwrap();
        for zi in &z {
            total.add_assign(zi).unwrap();
        }
        !total.is_zero()
    }

    #[test]
    fn kernel_matches_group_algebra_evaluation() {
        let mut rng = RngStream::new(77);
        let mut yes = 0;
        for case in 0..300u64 {
            let n = rng.gen_range(2..=9);
            let directed = case % 3 == 0;
            let mut g = generate::random(n, rng.gen_range(0.2..0.8), &mut rng);
            if directed {
                let arcs: Vec<(usize, usize)> = g.edges().collect();
                g = Graph::new(n, true);
                for (u, v) in arcs {
                    if rng.gen_bool(0.5) { g.add_edge(u, v) } else { g.add_edge(v, u) }.unwrap();
                }
            }
            let k = rng.gen_range(2..=n.min(7));
            let stream = RngStream::new(case);
            let fast = detect_trial(&g, k, &stream).unwrap();
            assert_eq!(fast, reference_trial(&g, k, &stream), "case {case}");
            yes += usize::from(fast);
        }
        assert!(yes > 30);
    }

    fn rate(g: &Graph, k: usize, seeds: u64) -> f64 {
        let hits = (0..seeds)
            .filter(|&s| detect_trial(g, k, &RngStream::new(s)).unwrap())
            .count();
        hits as f64 / seeds as f64
    }

    #[test]
    fn triangle_rate() {
        assert!(rate(&Graph::complete(3), 3, 1000) >= 0.2);
    }

    #[test]
    fn star_never_has_four_path() {
        let g = Graph::star(3);
        assert_eq!(rate(&g, 4, 500), 0.0);
        assert!(!detect(&g, 4, 64, 1).unwrap().answer);
        assert_eq!(find(&g, 4, 1).unwrap(), None);
    }

    #[test]
    fn path_graph_rates() {
        let g = Graph::path(4);
        assert!(rate(&g, 4, 1000) >= 0.2);
        assert_eq!(rate(&g, 5, 100), 0.0);
    }

    #[test]
    fn empty_graph_and_edge_cases() {
        let g = Graph::new(5, false);
        assert!(!detect(&g, 2, 16, 0).unwrap().answer);
        assert!(detect(&g, 1, 16, 0).unwrap().answer);
        assert!(detect(&g, 0, 16, 0).is_err());
        assert!(detect(&g, 2, 0, 0).is_err());
        assert!(detect_trial(&g, 0, &RngStream::new(0)).is_err());
        assert!(!detect_trial(&g, 6, &RngStream::new(0)).unwrap());
        assert_eq!(find(&g, 1, 0).unwrap(), Some(Path(vec![0])));
        assert!(detect(&Graph::complete(40), 31, 1, 0).is_err());
    }

    #[test]
    fn detect_is_deterministic() {
        let g = Graph::path(6);
        let a = detect(&g, 5, 64, 42).unwrap();
        assert_eq!(a, detect(&g, 5, 64, 42).unwrap());
        assert!(a.answer);
        assert_eq!(a.seed, 42);
    }

    #[test]
    fn directed_orientation_matters() {
        // 0 -> 1 <- 2: no directed 3-path
        let g = Graph::from_edges(3, true, &[(0, 1), (2, 1)]).unwrap();
        assert!(!detect(&g, 3, 64, 0).unwrap().answer);
        let g = Graph::from_edges(3, true, &[(0, 1), (1, 2)]).unwrap();
        assert!(detect(&g, 3, 64, 0).unwrap().answer);
        assert_eq!(find(&g, 3, 0).unwrap(), Some(Path(vec![0, 1, 2])));
    }

    #[test]
    fn find_examples() {
        let p = find(&Graph::path(4), 4, 3).unwrap().unwrap();
        assert!(p.0 == vec![0, 1, 2, 3] || p.0 == vec![3, 2, 1, 0]);
        let tri = Graph::complete(3);
        let p = find(&tri, 3, 3).unwrap().unwrap();
        assert!(verify_path(&tri, &p, 3));
    }

    #[test]
    fn find_on_larger_graph() {
        let g = Graph::path(10);
        for k in 2..=10 {
            let p = find(&g, k, 5).unwrap().unwrap();
            assert!(verify_path(&g, &p, k), "k={k} {p:?}");
        }
    }

    #[test]
    fn walk_counts() {
        let k3 = Graph::complete(3);
        assert_eq!(walk_polynomial_value(&k3, 3, &[1u64; 3]).unwrap(), 12);
        assert_eq!(walk_polynomial_value(&Graph::path(2), 2, &[1u32; 2]).unwrap(), 2);
        let g = Graph::star(4);
        assert_eq!(walk_polynomial_value(&g, 1, &[1u8; 5]).unwrap(), 5);
        assert!(walk_polynomial_value(&Graph::complete(10), 10, &[1u8; 10]).is_err());
        assert!(walk_polynomial_value(&k3, 0, &[1u8; 3]).is_err());
    }

    #[test]
    fn walk_polynomial_at_integer_point() {
        // P_2 on the path 0-1: x0*x1 + x1*x0
        let g = Graph::path(2);
        assert_eq!(walk_polynomial_value(&g, 2, &[3i64, 5]).unwrap(), 30);
    }

    #[test]
    fn walk_circuit_shape() {
        let g = Graph::complete(3);
        let c = walk_circuit(&g, 3).unwrap().unwrap();
        assert_eq!(c.degree().unwrap(), 3);
        assert_eq!(c.num_vars(), 3);
        assert!(walk_circuit(&Graph::new(3, false), 2).unwrap().is_none());
        assert_eq!(walk_circuit(&Graph::new(3, false), 1).unwrap().unwrap().degree().unwrap(), 1);
    }

    #[test]
    fn inner_trial_counts() {
        assert_eq!(inner_trials(1), 32);
        assert_eq!(inner_trials(12), 32);
        assert_eq!(inner_trials(16), 32);
        assert_eq!(inner_trials(17), 33);
        assert_eq!(inner_trials(1024), 80);
    }
}
