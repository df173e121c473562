//! The group algebra F[Z_2^k] over F = GF(2^l).
//!
//! An element is a dense vector of `2^k` field coefficients indexed by the
//! group element's bitmask. The group operation on indices is xor, so the
//! convolution product is `c[g] = sum_h a[h] * b[h ^ g]`.

use std::fmt;

use num_traits::{PrimInt, Unsigned, WrappingAdd, WrappingMul, WrappingSub};

use crate::error::{parameter, unsupported, Result};
use crate::gf2e::{FieldElem, FieldSpec};

/// Largest group dimension for dense elements (2^30 coefficients).
pub const MAX_K: u32 = 30;

/// Below this dimension [`AlgebraElem::mul`] uses the quadratic convolution.
pub const NAIVE_MUL_MAX_K: u32 = 2;

/// Unsigned integer words with wraparound arithmetic, used for the
/// transform-based multiplication.
pub trait WrapWord:
    PrimInt + Unsigned + WrappingAdd + WrappingSub + WrappingMul + fmt::Debug
{
}

impl<T> WrapWord for T where
    T: PrimInt + Unsigned + WrappingAdd + WrappingSub + WrappingMul + fmt::Debug
{
}

/// An element of Z_2^k, stored as a bitmask (bit i is coordinate i).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupVector(pub u64);

impl GroupVector {
    /// The identity W0.
    pub const IDENTITY: GroupVector = GroupVector(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn op(self, other: GroupVector) -> GroupVector {
        GroupVector(self.0 ^ other.0)
    }

    pub fn fits(self, k: u32) -> bool {
        k >= 64 || self.0 >> k == 0
    }
}

impl fmt::Debug for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:b}]", self.0)
    }
}

/// In-place unnormalized Walsh–Hadamard transform with wraparound arithmetic.
/// Applying it twice multiplies every entry by `data.len()`.
pub fn walsh_hadamard<W: WrapWord>(data: &mut [W]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a.wrapping_add(&b);
                *y = a.wrapping_sub(&b);
            }
        }
        half *= 2;
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElem {
    k: u32,
    spec: FieldSpec,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for AlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = f.debug_map();
        for (g, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            terms.entry(&GroupVector(g as u64), c);
        }
        terms.finish()
    }
}

fn check_k(k: u32) -> Result<()> {
    if k > MAX_K {
        return Err(unsupported(format!("group dimension k={k} exceeds {MAX_K}")));
    }
    Ok(())
}

impl AlgebraElem {
    pub fn zero(k: u32, spec: &FieldSpec) -> Result<Self> {
        check_k(k)?;
        Ok(AlgebraElem {
            k,
            spec: spec.clone(),
            coeffs: vec![FieldElem::ZERO; 1 << k],
        })
    }

    pub fn one(k: u32, spec: &FieldSpec) -> Result<Self> {
        Self::basis(k, GroupVector::IDENTITY, spec)
    }

    /// The group element `v` itself, with coefficient 1.
    pub fn basis(k: u32, v: GroupVector, spec: &FieldSpec) -> Result<Self> {
        if !v.fits(k) {
            return Err(parameter(format!("{v:?} is not in Z_2^{k}")));
        }
        let mut e = Self::zero(k, spec)?;
        e.coeffs[v.0 as usize] = FieldElem::ONE;
        Ok(e)
    }

    /// `W0 + v`, the value substituted for a variable.
    pub fn one_plus_basis(k: u32, v: GroupVector, spec: &FieldSpec) -> Result<Self> {
        let mut e = Self::basis(k, v, spec)?;
        e.coeffs[0] = spec.add(e.coeffs[0], FieldElem::ONE);
        Ok(e)
    }

    pub fn from_coeffs(k: u32, spec: &FieldSpec, coeffs: Vec<FieldElem>) -> Result<Self> {
        check_k(k)?;
        if coeffs.len() != 1 << k {
            return Err(parameter(format!(
                "expected {} coefficients, got {}",
                1u64 << k,
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !spec.contains(**c)) {
            return Err(parameter(format!("{bad:?} is not in GF(2^{})", spec.ell())));
        }
        Ok(AlgebraElem { k, spec: spec.clone(), coeffs })
    }

    /// Sum over all vectors of Z_2^k, each with coefficient 1.
    pub fn all_ones(k: u32, spec: &FieldSpec) -> Result<Self> {
        Self::from_coeffs(k, spec, vec![FieldElem::ONE; 1 << k])
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, g: GroupVector) -> FieldElem {
        self.coeffs[g.0 as usize]
    }

    pub fn set_coeff(&mut self, g: GroupVector, c: FieldElem) {
        debug_assert!(self.spec.contains(c));
        self.coeffs[g.0 as usize] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// If every coefficient equals the same value `c`, returns `c`.
    pub fn uniform_coeff(&self) -> Option<FieldElem> {
        let first = self.coeffs[0];
        self.coeffs.iter().all(|&c| c == first).then_some(first)
    }

    fn check_compatible(&self, other: &AlgebraElem) -> Result<()> {
        if self.k != other.k || self.spec != other.spec {
            return Err(parameter(format!(
                "operands live in different algebras (k={} vs k={}, {:?} vs {:?})",
                self.k, other.k, self.spec, other.spec
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElem) -> Result<AlgebraElem> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &AlgebraElem) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = FieldElem::new(a.bits() ^ b.bits());
        }
        Ok(())
    }

    pub fn scalar_mul(&self, c: FieldElem) -> AlgebraElem {
        let row = self.spec.mul_row(c);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| FieldElem::new(row[a.bits() as usize]))
            .collect();
        AlgebraElem { k: self.k, spec: self.spec.clone(), coeffs }
    }

    /// Convolution by definition, O(4^k) field operations.
    pub fn mul_naive(&self, other: &AlgebraElem) -> Result<AlgebraElem> {
        self.check_compatible(other)?;
        let mut out = vec![FieldElem::ZERO; self.coeffs.len()];
        for (h, &ah) in self.coeffs.iter().enumerate() {
            if ah.is_zero() {
                continue;
            }
            for (g, slot) in out.iter_mut().enumerate() {
                let p = self.spec.mul(ah, other.coeffs[h ^ g]);
                *slot = self.spec.add(*slot, p);
            }
        }
        Ok(AlgebraElem { k: self.k, spec: self.spec.clone(), coeffs: out })
    }

    /// Product through the Walsh–Hadamard transform, using [`crate::TransformWord`] words.
    pub fn mul_fast(&self, other: &AlgebraElem) -> Result<AlgebraElem> {
        self.mul_fast_with::<crate::TransformWord>(other)
    }

    /// Product through the Walsh–Hadamard transform over wraparound words `W`.
    ///
    /// Each GF(2) coefficient slot of the entries is lifted to a 0/1 integer
    /// vector and transformed. Entries are multiplied pointwise as integer
    /// polynomials and transformed back. The exact result is `2^k` times the
    /// integer convolution, so bit `k` of the wrapped word is the parity of
    /// each coefficient. The resulting GF(2) polynomials are then reduced
    /// modulo the field modulus. Requires `k + 2 <= W::BITS`.
    pub fn mul_fast_with<W: WrapWord>(&self, other: &AlgebraElem) -> Result<AlgebraElem> {
        self.check_compatible(other)?;
        let bits = W::zero().count_zeros();
        if self.k + 2 > bits {
            return Err(unsupported(format!(
                "k={} needs at least {} bit words, have {bits}",
                self.k,
                self.k + 2
            )));
        }
        let len = self.coeffs.len();
        let ell = self.spec.ell() as usize;
        let lift = |e: &AlgebraElem| {
            let mut slots = vec![W::zero(); ell * len];
            for (s, slot) in slots.chunks_exact_mut(len).enumerate() {
                for (x, c) in slot.iter_mut().zip(&e.coeffs) {
                    if c.bits() >> s & 1 == 1 {
                        *x = W::one();
                    }
                }
                walsh_hadamard(slot);
            }
            slots
        };
        let a = lift(self);
        let b = if std::ptr::eq(self, other) { a.clone() } else { lift(other) };

        let prod_slots = 2 * ell - 1;
        let mut prod = vec![W::zero(); prod_slots * len];
        for s in 0..ell {
            let a_s = &a[s * len..(s + 1) * len];
            for r in 0..ell {
                let b_r = &b[r * len..(r + 1) * len];
                let t = s + r;
                let out = &mut prod[t * len..(t + 1) * len];
                for ((o, x), y) in out.iter_mut().zip(a_s).zip(b_r) {
                    *o = o.wrapping_add(&x.wrapping_mul(y));
                }
            }
        }

        let mut poly = vec![0u64; len];
        for (t, slot) in prod.chunks_exact_mut(len).enumerate() {
            walsh_hadamard(slot);
            let k = self.k as usize;
            for (p, w) in poly.iter_mut().zip(slot.iter()) {
                if (*w >> k) & W::one() == W::one() {
                    *p |= 1 << t;
                }
            }
        }
        let coeffs = poly.into_iter().map(|p| self.spec.reduce(p)).collect();
        Ok(AlgebraElem { k: self.k, spec: self.spec.clone(), coeffs })
    }

    /// Product, picking the quadratic convolution for tiny `k`.
    pub fn mul(&self, other: &AlgebraElem) -> Result<AlgebraElem> {
        if self.k <= NAIVE_MUL_MAX_K {
            self.mul_naive(other)
        } else {
            self.mul_fast(other)
        }
    }

    /// `self * (W0 + v)` in O(2^k): `c[g] = a[g] + a[g ^ v]`.
    pub fn mul_one_plus_basis(&self, v: GroupVector) -> Result<AlgebraElem> {
        if !v.fits(self.k) {
            return Err(parameter(format!("{v:?} is not in Z_2^{}", self.k)));
        }
        let v = v.0 as usize;
        let coeffs = (0..self.coeffs.len())
            .map(|g| FieldElem::new(self.coeffs[g].bits() ^ self.coeffs[g ^ v].bits()))
            .collect();
        Ok(AlgebraElem { k: self.k, spec: self.spec.clone(), coeffs })
    }

    /// `prod_j (W0 + v_j)`. Zero when the vectors are linearly dependent over
    /// GF(2); otherwise the sum of every vector in their span.
    pub fn elem_product(vs: &[GroupVector], k: u32, spec: &FieldSpec) -> Result<AlgebraElem> {
        let mut acc = Self::one(k, spec)?;
        for &v in vs {
            acc = acc.mul_one_plus_basis(v)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_elem(k: u32, spec: &FieldSpec, rng: &mut RngStream) -> AlgebraElem {
        let coeffs = (0..1usize << k).map(|_| spec.random(rng)).collect();
        AlgebraElem::from_coeffs(k, spec, coeffs).unwrap()
    }

    // GF(2) rank by Gaussian elimination, independent of the algebra code.
    fn gf2_rank(vs: &[u64]) -> usize {
        let mut rows: Vec<u64> = vs.to_vec();
        let mut rank = 0;
        for bit in 0..64 {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> bit & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    fn span(vs: &[u64]) -> Vec<bool> {
        let mut seen = vec![false; 1 << 6];
        for subset in 0u32..1 << vs.len() {
            let mut x = 0;
            for (i, v) in vs.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    x ^= v;
                }
            }
            seen[x as usize] = true;
        }
        seen
    }

    #[test]
    fn identities() {
        let spec = FieldSpec::standard(4).unwrap();
        let mut rng = RngStream::new(5);
        for k in 1..=5 {
            let one = AlgebraElem::one(k, &spec).unwrap();
            let zero = AlgebraElem::zero(k, &spec).unwrap();
            assert_eq!(one, AlgebraElem::basis(k, GroupVector::IDENTITY, &spec).unwrap());
            assert!(zero.is_zero());
            assert!(!one.is_zero());
            let e = random_elem(k, &spec, &mut rng);
            assert_eq!(zero.add(&e).unwrap(), e);
            assert!(e.add(&e).unwrap().is_zero());
            assert_eq!(one.mul_naive(&e).unwrap(), e);
            assert_eq!(one.mul_fast(&e).unwrap(), e);
            assert_eq!(e.scalar_mul(FieldElem::ONE), e);
            assert!(e.scalar_mul(FieldElem::ZERO).is_zero());
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let spec = FieldSpec::standard(3).unwrap();
        let a = AlgebraElem::one(2, &spec).unwrap();
        let b = AlgebraElem::one(3, &spec).unwrap();
        let c = AlgebraElem::one(2, &FieldSpec::standard(4).unwrap()).unwrap();
        assert!(a.add(&b).is_err());
        assert!(a.mul_naive(&b).is_err());
        assert!(a.mul_fast(&c).is_err());
        assert!(AlgebraElem::basis(2, GroupVector(4), &spec).is_err());
        assert!(AlgebraElem::zero(MAX_K + 1, &spec).is_err());
    }

    #[test]
    fn squares_of_one_plus_v_vanish() {
        let spec = FieldSpec::standard(3).unwrap();
        for k in 1..=4 {
            for v in 0..1u64 << k {
                let e = AlgebraElem::one_plus_basis(k, GroupVector(v), &spec).unwrap();
                assert!(e.mul_naive(&e).unwrap().is_zero());
                assert!(e.mul_fast(&e).unwrap().is_zero());
                let bv = AlgebraElem::basis(k, GroupVector(v), &spec).unwrap();
                assert_eq!(bv.mul_naive(&bv).unwrap(), AlgebraElem::one(k, &spec).unwrap());
            }
        }
    }

    #[test]
    fn group_law_on_basis() {
        let spec = FieldSpec::standard(5).unwrap();
        let k = 4;
        for u in 0..16 {
            for v in 0..16 {
                let bu = AlgebraElem::basis(k, GroupVector(u), &spec).unwrap();
                let bv = AlgebraElem::basis(k, GroupVector(v), &spec).unwrap();
                let expect = AlgebraElem::basis(k, GroupVector(u ^ v), &spec).unwrap();
                assert_eq!(bu.mul_fast(&bv).unwrap(), expect);
            }
        }
    }

    #[test]
    fn fast_matches_naive() {
        let mut rng = RngStream::new(17);
        for k in 1..=8 {
            for ell in [3, 6, 9] {
                let spec = FieldSpec::standard(ell).unwrap();
                for _ in 0..10 {
                    let a = random_elem(k, &spec, &mut rng);
                    let b = random_elem(k, &spec, &mut rng);
                    let naive = a.mul_naive(&b).unwrap();
                    assert_eq!(a.mul_fast(&b).unwrap(), naive, "k={k} ell={ell}");
                    assert_eq!(a.mul_fast_with::<u64>(&b).unwrap(), naive);
                    assert_eq!(a.mul_fast_with::<u16>(&b).unwrap(), naive);
                    assert_eq!(a.mul(&b).unwrap(), naive);
                }
            }
        }
    }

    #[test]
    fn narrow_words_are_rejected() {
        let spec = FieldSpec::standard(3).unwrap();
        let a = AlgebraElem::one(7, &spec).unwrap();
        assert!(a.mul_fast_with::<u8>(&a).is_err());
        assert!(a.mul_fast_with::<u16>(&a).is_ok());
        let b = AlgebraElem::one(6, &spec).unwrap();
        assert!(b.mul_fast_with::<u8>(&b).is_ok());
    }

    #[test]
    fn sparse_product_matches_convolution() {
        let spec = FieldSpec::standard(4).unwrap();
        let mut rng = RngStream::new(8);
        for k in 1..=6 {
            let a = random_elem(k, &spec, &mut rng);
            let v = GroupVector(rng.gen_range(0..1u64 << k));
            let w = AlgebraElem::one_plus_basis(k, v, &spec).unwrap();
            assert_eq!(a.mul_one_plus_basis(v).unwrap(), a.mul_naive(&w).unwrap());
        }
    }

    #[test]
    fn elem_product_examples() {
        let spec = FieldSpec::standard(4).unwrap();
        for k in 1..=6u32 {
            let basis: Vec<_> = (0..k).map(|i| GroupVector(1 << i)).collect();
            let p = AlgebraElem::elem_product(&basis, k, &spec).unwrap();
            assert_eq!(p, AlgebraElem::all_ones(k, &spec).unwrap());
            assert_eq!(p.uniform_coeff(), Some(FieldElem::ONE));

            let v = GroupVector((1 << k) - 1);
            assert!(AlgebraElem::elem_product(&[v, v], k, &spec).unwrap().is_zero());
        }
    }

    #[test]
    fn elem_product_exhaustive_small_k() {
        let spec = FieldSpec::standard(3).unwrap();
        for k in 1..=3u32 {
            let q = 1u64 << k;
            for len in 0..=(k as usize + 1) {
                for code in 0..q.pow(len as u32) {
                    let vs: Vec<u64> = (0..len).map(|i| code / q.pow(i as u32) % q).collect();
                    let gv: Vec<_> = vs.iter().map(|&v| GroupVector(v)).collect();
                    let p = AlgebraElem::elem_product(&gv, k, &spec).unwrap();
                    let independent = gf2_rank(&vs) == len;
                    assert_eq!(!p.is_zero(), independent, "vs={vs:?}");
                    if independent {
                        let sp = span(&vs);
                        for g in 0..q {
                            let expect = if sp[g as usize] { FieldElem::ONE } else { FieldElem::ZERO };
                            assert_eq!(p.coeff(GroupVector(g)), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn elem_product_sampled_k4() {
        let spec = FieldSpec::standard(3).unwrap();
        let mut rng = RngStream::new(44);
        for _ in 0..10_000 {
            let len = rng.gen_range(0..=5);
            let vs: Vec<u64> = (0..len).map(|_| rng.gen_range(0..16)).collect();
            let gv: Vec<_> = vs.iter().map(|&v| GroupVector(v)).collect();
            let p = AlgebraElem::elem_product(&gv, 4, &spec).unwrap();
            assert_eq!(!p.is_zero(), gf2_rank(&vs) == len);
        }
    }

    #[test]
    fn walsh_hadamard_is_self_inverse_up_to_scale() {
        let mut rng = RngStream::new(1);
        let orig: Vec<u32> = (0..64).map(|_| rng.gen_range(0..1000)).collect();
        let mut x = orig.clone();
        walsh_hadamard(&mut x);
        walsh_hadamard(&mut x);
        let scaled: Vec<u32> = orig.iter().map(|v| v * 64).collect();
        assert_eq!(x, scaled);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(k in 1u32..=6, ell in 1u32..=9, seed: u64) {
            let spec = FieldSpec::standard(ell).unwrap();
            let mut rng = RngStream::new(seed);
            let a = random_elem(k, &spec, &mut rng);
            let b = random_elem(k, &spec, &mut rng);
            let c = random_elem(k, &spec, &mut rng);
            let ab = a.mul_naive(&b).unwrap();
            prop_assert_eq!(&ab, &b.mul_naive(&a).unwrap());
            prop_assert_eq!(ab.mul_naive(&c).unwrap(), a.mul_naive(&b.mul_naive(&c).unwrap()).unwrap());
            let lhs = a.mul_naive(&b.add(&c).unwrap()).unwrap();
            let rhs = ab.add(&a.mul_naive(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let s = spec.random(&mut rng);
            prop_assert_eq!(
                b.add(&c).unwrap().scalar_mul(s),
                b.scalar_mul(s).add(&c.scalar_mul(s)).unwrap()
            );
        }

        #[test]
        fn fast_equals_naive(k in 1u32..=10, ell in 3u32..=8, seed: u64) {
            let spec = FieldSpec::standard(ell).unwrap();
            let mut rng = RngStream::new(seed);
            let a = random_elem(k, &spec, &mut rng);
            let b = random_elem(k, &spec, &mut rng);
            prop_assert_eq!(a.mul_fast(&b).unwrap(), a.mul_naive(&b).unwrap());
        }
    }
}
