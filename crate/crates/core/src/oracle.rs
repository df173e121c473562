//! Slow, exact reference computations used to check the randomized code.
//!
//! Nothing here shares an evaluation path with the detectors: paths are
//! found by depth-first enumeration, walks are counted with row-vector
//! products against the adjacency matrix, and circuits are expanded
//! symbolically.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{CheckedAdd, CheckedMul, One, Zero};

use crate::circuit::{Circuit, Gate, GateId};
use crate::error::{unsupported, Result};
use crate::graph::{Graph, Path};

/// Bounds enforced by [`expand_circuit`].
pub const EXPAND_MAX_VARS: usize = 10;
pub const EXPAND_MAX_DEGREE: usize = 6;

/// Cap on intermediate term counts in [`expand_weighted_parity`].
pub const WEIGHTED_MAX_TERMS: usize = 200_000;

/// Depth-first search for a simple path on `k` vertices.
pub fn brute_force_kpath(g: &Graph, k: usize) -> Option<Path> {
    if k == 0 || k > g.n() {
        return None;
    }
    let mut visited = vec![false; g.n()];
    let mut stack = Vec::with_capacity(k);
    for start in 0..g.n() {
        if dfs(g, k, start, &mut visited, &mut stack) {
            return Some(Path(stack));
        }
    }
    None
}

fn dfs(g: &Graph, k: usize, v: usize, visited: &mut [bool], stack: &mut Vec<usize>) -> bool {
    visited[v] = true;
    stack.push(v);
    if stack.len() == k {
        return true;
    }
    for w in 0..g.n() {
        if !visited[w] && g.has_edge(v, w) && dfs(g, k, w, visited, stack) {
            return true;
        }
    }
    visited[v] = false;
    stack.pop();
    false
}

/// `1^T A^{k-1} 1` by left multiplication with row vectors; `None` on overflow.
pub fn count_k_walks_in<T>(g: &Graph, k: usize) -> Option<T>
where
    T: Clone + Zero + One + CheckedAdd + CheckedMul,
{
    if k == 0 {
        return Some(T::zero());
    }
    let n = g.n();
    let mut row = vec![T::one(); n];
    for _ in 1..k {
        let mut next = vec![T::zero(); n];
        for (j, slot) in next.iter_mut().enumerate() {
            for (i, r) in row.iter().enumerate() {
                if g.has_edge(i, j) {
                    *slot = slot.checked_add(r)?;
                }
            }
        }
        row = next;
    }
    row.iter().try_fold(T::zero(), |s, x| s.checked_add(x))
}

/// Number of k-vertex walks.
pub fn count_k_walks(g: &Graph, k: usize) -> Result<crate::WalkCount> {
    count_k_walks_in(g, k).ok_or_else(|| unsupported("walk count overflows"))
}

/// GF(2) rank of a family of bit vectors, by elimination.
pub fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A term `coefficient * prod x_i^{e_i}` of an integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    /// Variable index (0-based) to positive exponent.
    pub exponents: BTreeMap<usize, u32>,
    pub coefficient: u64,
}

impl Monomial {
    pub fn is_multilinear(&self) -> bool {
        self.exponents.values().all(|&e| e == 1)
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }
}

type IntPoly = BTreeMap<Vec<u32>, u64>;

/// Full sum-product expansion of the circuit over the integers. Terms that
/// cancel do not appear (they cannot, as circuits have no scalars).
pub fn expand_circuit(c: &Circuit) -> Result<Vec<Monomial>> {
    let degree = c.degree()?;
    if c.num_vars() > EXPAND_MAX_VARS || degree > EXPAND_MAX_DEGREE {
        return Err(unsupported(format!(
            "expansion limited to {EXPAND_MAX_VARS} variables and degree {EXPAND_MAX_DEGREE}"
        )));
    }
    let n = c.num_vars();
    let overflow = || unsupported("coefficient overflow");
    let mut polys: Vec<Option<IntPoly>> = vec![None; c.size()];
    for g in eval_order(c) {
        let p = match &c.gates()[g] {
            Gate::Input(v) => {
                let mut e = vec![0; n];
                e[*v] = 1;
                IntPoly::from([(e, 1)])
            }
            Gate::Add(children) => {
                let mut acc = IntPoly::new();
                for &ch in children {
                    for (e, &co) in polys[ch].as_ref().expect("children first") {
                        let slot = acc.entry(e.clone()).or_insert(0);
                        *slot = slot.checked_add(co).ok_or_else(overflow)?;
                    }
                }
                acc
            }
            Gate::Mul(children) => {
                let a = polys[children[0]].as_ref().expect("children first");
                let b = polys[children[1]].as_ref().expect("children first");
                let mut acc = IntPoly::new();
                for (ea, &ca) in a {
                    for (eb, &cb) in b {
                        let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                        let co = ca.checked_mul(cb).ok_or_else(overflow)?;
                        let slot = acc.entry(e).or_insert(0);
                        *slot = slot.checked_add(co).ok_or_else(overflow)?;
                    }
                }
                acc
            }
        };
        polys[g] = Some(p);
    }
    let out = polys[c.output()].take().expect("output evaluated");
    Ok(out
        .into_iter()
        .filter(|(_, co)| *co != 0)
        .map(|(e, coefficient)| Monomial {
            exponents: e
                .into_iter()
                .enumerate()
                .filter(|(_, x)| *x > 0)
                .collect(),
            coefficient,
        })
        .collect())
}

/// Whether the integer expansion has a multilinear term of degree at most `k`.
pub fn has_multilinear_term(c: &Circuit, k: usize) -> Result<bool> {
    Ok(expand_circuit(c)?
        .iter()
        .any(|m| m.is_multilinear() && m.degree() as usize <= k))
}

/// A term of the weighted expansion: multilinear in the variables, with a
/// monomial in the multiplication-gate weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedTerm {
    /// Bitmask of the variables present.
    pub vars: u64,
    /// Exponent of each multiplication gate's weight, indexed by gate id.
    pub weights: Vec<u8>,
}

/// Expansion of the circuit with every multiplication gate scaled by its
/// own formal weight variable, reduced mod 2, keeping only terms that are
/// multilinear in the circuit variables and of degree at most `max_degree`
/// (all other terms vanish in the group algebra anyway).
///
/// The randomized detector can succeed exactly when this set is nonempty.
pub fn expand_weighted_parity(c: &Circuit, max_degree: usize) -> Result<BTreeSet<WeightedTerm>> {
    c.validate()?;
    if c.num_vars() > 64 {
        return Err(unsupported("weighted expansion limited to 64 variables"));
    }
    let size = c.size();
    let mut polys: Vec<Option<BTreeSet<WeightedTerm>>> = vec![None; size];
    for g in eval_order(c) {
        let p = match &c.gates()[g] {
            Gate::Input(v) => BTreeSet::from([WeightedTerm { vars: 1 << v, weights: vec![0; size] }]),
            Gate::Add(children) => {
                let mut acc = BTreeSet::new();
                for &ch in children {
                    for t in polys[ch].as_ref().expect("children first") {
                        toggle(&mut acc, t.clone());
                    }
                }
                acc
            }
            Gate::Mul(children) => {
                let a = polys[children[0]].as_ref().expect("children first");
                let b = polys[children[1]].as_ref().expect("children first");
                let mut acc = BTreeSet::new();
                for ta in a {
                    for tb in b {
                        if ta.vars & tb.vars != 0 {
                            continue;
                        }
                        let vars = ta.vars | tb.vars;
                        if vars.count_ones() as usize > max_degree {
                            continue;
                        }
                        let mut weights: Vec<u8> =
                            ta.weights.iter().zip(&tb.weights).map(|(x, y)| x + y).collect();
                        weights[g] += 1;
                        toggle(&mut acc, WeightedTerm { vars, weights });
                    }
                }
                if acc.len() > WEIGHTED_MAX_TERMS {
                    return Err(unsupported("weighted expansion too large"));
                }
                acc
            }
        };
        polys[g] = Some(p);
    }
    let out = polys[c.output()].take().expect("output evaluated");
    Ok(out
        .into_iter()
        .filter(|t| t.vars.count_ones() as usize <= max_degree)
        .collect())
}

fn toggle(set: &mut BTreeSet<WeightedTerm>, t: WeightedTerm) {
    if !set.remove(&t) {
        set.insert(t);
    }
}

// Children before parents, restricted to gates the output depends on.
fn eval_order(c: &Circuit) -> Vec<GateId> {
    let mut order = Vec::new();
    let mut state = vec![0u8; c.size()];
    let mut stack = vec![(c.output(), false)];
    while let Some((g, expanded)) = stack.pop() {
        if expanded {
            if state[g] != 2 {
                state[g] = 2;
                order.push(g);
            }
            continue;
        }
        if state[g] != 0 {
            continue;
        }
        state[g] = 1;
        stack.push((g, true));
        for &ch in c.gates()[g].children() {
            if state[ch] == 0 {
                stack.push((ch, false));
            }
        }
    }
    order
}
