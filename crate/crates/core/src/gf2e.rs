//! Arithmetic in GF(2^l).
//!
//! Elements are polynomials over GF(2) of degree below `l`, packed into the
//! low `l` bits of an integer (bit `i` is the coefficient of `x^i`).
//! Multiplication is carry-less multiplication followed by reduction
//! modulo a fixed irreducible polynomial. For `l <= TABLE_MAX_ELL` a full
//! multiplication table is built once per modulus and shared.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{parameter, unsupported, Result};

/// Largest supported extension degree.
pub const MAX_ELL: u32 = 16;

/// Extension degrees up to this value get a precomputed multiplication table.
pub const TABLE_MAX_ELL: u32 = 10;

/// Largest `k` accepted by [`FieldSpec::for_k`].
pub const MAX_K_FOR_FIELD: usize = 62;

/// Low-weight irreducible polynomials, indexed by degree (entries 0..=2 unused
/// by [`FieldSpec::for_k`]; degree 2 is x^2+x+1).
const MODULI: [u32; 17] = [
    0,
    0b11,      // x + 1
    0b111,     // x^2 + x + 1
    0xb,       // x^3 + x + 1
    0x13,      // x^4 + x + 1
    0x25,      // x^5 + x^2 + 1
    0x43,      // x^6 + x + 1
    0x83,      // x^7 + x + 1
    0x11b,     // x^8 + x^4 + x^3 + x + 1
    0x211,     // x^9 + x^4 + 1
    0x409,     // x^10 + x^3 + 1
    0x805,     // x^11 + x^2 + 1
    0x1009,    // x^12 + x^3 + 1
    0x201b,    // x^13 + x^4 + x^3 + x + 1
    0x4021,    // x^14 + x^5 + 1
    0x8003,    // x^15 + x + 1
    0x1002b,   // x^16 + x^5 + x^3 + x + 1
];

/// The table modulus for extension degree `ell` (1..=16).
pub fn standard_modulus(ell: u32) -> Option<u32> {
    (1..=MAX_ELL).contains(&ell).then(|| MODULI[ell as usize])
}

/// A field element; only meaningful together with its [`FieldSpec`].
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub const fn new(bits: u16) -> Self {
        FieldElem(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for i in (0..16).rev() {
            if self.0 >> i & 1 == 1 {
                if !first {
                    f.write_str("+")?;
                }
                first = false;
                match i {
                    0 => f.write_str("1")?,
                    1 => f.write_str("x")?,
                    _ => write!(f, "x^{i}")?,
                }
            }
        }
        Ok(())
    }
}

/// Degree of a GF(2) polynomial; `None` for the zero polynomial.
pub fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

/// Carry-less product of two GF(2) polynomials.
pub fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = u64::from(a);
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Remainder of `p` modulo the nonzero polynomial `m`.
pub fn poly_rem(mut p: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("division by the zero polynomial");
    while let Some(dp) = poly_degree(p) {
        if dp < dm {
            break;
        }
        p ^= m << (dp - dm);
    }
    p
}

/// Whether the degree-`ell` polynomial `poly` is irreducible over GF(2),
/// decided by trial division by every polynomial of degree 1..=ell/2.
pub fn is_irreducible(poly: u32, ell: u32) -> Result<bool> {
    if ell == 0 || ell > MAX_ELL {
        return Err(unsupported(format!(
            "irreducibility check by trial division needs 1 <= ell <= {MAX_ELL}, got {ell}"
        )));
    }
    if poly_degree(u64::from(poly)) != Some(ell) {
        return Err(parameter(format!("polynomial {poly:#x} does not have degree {ell}")));
    }
    let p = u64::from(poly);
    for divisor in 2u64..(1u64 << (ell / 2 + 1)) {
        if poly_rem(p, divisor) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

type MulTable = Arc<[u16]>;

/// Multiplication table rows padded to 256 entries, for fields with ell <= 8.
pub type ByteRows = Arc<[[u8; 256]]>;

#[derive(Clone)]
struct Tables {
    wide: MulTable,
    bytes: Option<ByteRows>,
}

fn table_cache() -> &'static Mutex<HashMap<(u32, u32), Tables>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Tables>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn shared_tables(ell: u32, modulus: u32) -> Tables {
    let mut cache = table_cache().lock().unwrap_or_else(|e| e.into_inner());
    cache
        .entry((ell, modulus))
        .or_insert_with(|| {
            let size = 1usize << ell;
            let mut table = vec![0u16; size * size];
            for a in 0..size {
                for b in a..size {
                    let p = mul_shift_xor(a as u16, b as u16, ell, modulus);
                    table[(a << ell) | b] = p;
                    table[(b << ell) | a] = p;
                }
            }
            let bytes = (ell <= 8).then(|| {
                (0..size)
                    .map(|a| {
                        let mut row = [0u8; 256];
                        for (b, slot) in row.iter_mut().take(size).enumerate() {
                            *slot = table[(a << ell) | b] as u8;
                        }
                        row
                    })
                    .collect()
            });
            Tables { wide: table.into(), bytes }
        })
        .clone()
}

fn mul_shift_xor(a: u16, b: u16, ell: u32, modulus: u32) -> u16 {
    let top = 1u32 << ell;
    let mut a = u32::from(a);
    let mut b = b;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc as u16
}

/// The field GF(2^ell) together with its defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    ell: u32,
    modulus: u32,
    table: Option<MulTable>,
    byte_rows: Option<ByteRows>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("ell", &self.ell)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl FieldSpec {
    /// GF(2^ell) defined by `modulus`, which must be irreducible of degree
    /// exactly `ell`.
    pub fn new(ell: u32, modulus: u32) -> Result<Self> {
        if ell == 0 || ell > MAX_ELL {
            return Err(unsupported(format!("field degree must be in 1..={MAX_ELL}, got {ell}")));
        }
        if modulus & 1 == 0 {
            return Err(parameter(format!("modulus {modulus:#x} has zero constant term")));
        }
        if !is_irreducible(modulus, ell)? {
            return Err(parameter(format!("modulus {modulus:#x} is reducible")));
        }
        let tables = (ell <= TABLE_MAX_ELL).then(|| shared_tables(ell, modulus));
        Ok(FieldSpec {
            ell,
            modulus,
            byte_rows: tables.as_ref().and_then(|t| t.bytes.clone()),
            table: tables.map(|t| t.wide),
        })
    }

    /// GF(2^ell) with the table modulus for `ell`.
    pub fn standard(ell: u32) -> Result<Self> {
        let modulus = standard_modulus(ell)
            .ok_or_else(|| unsupported(format!("field degree must be in 1..={MAX_ELL}, got {ell}")))?;
        Self::new(ell, modulus)
    }

    /// The field used for k-term detection: ell = 3 + ceil(log2 k), so
    /// that k / |F| <= 1/8.
    pub fn for_k(k: usize) -> Result<Self> {
        if !(1..=MAX_K_FOR_FIELD).contains(&k) {
            return Err(parameter(format!("k must be in 1..={MAX_K_FOR_FIELD}, got {k}")));
        }
        Self::standard(3 + ceil_log2(k))
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^ell.
    pub fn order(&self) -> u32 {
        1 << self.ell
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        u32::from(a.0) < self.order()
    }

    pub fn elem(&self, bits: u16) -> Result<FieldElem> {
        let a = FieldElem(bits);
        if self.contains(a) {
            Ok(a)
        } else {
            Err(parameter(format!("{bits:#x} is not an element of GF(2^{})", self.ell)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(|b| FieldElem(b as u16))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.table {
            Some(t) => FieldElem(t[(usize::from(a.0) << self.ell) | usize::from(b.0)]),
            None => self.mul_reference(a, b),
        }
    }

    /// Shift-and-xor multiplication with eager reduction; never uses the table.
    pub fn mul_reference(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(mul_shift_xor(a.0, b.0, self.ell, self.modulus))
    }

    /// Row `a` of the multiplication table: `row[b] = a * b`.
    pub fn mul_row(&self, a: FieldElem) -> std::borrow::Cow<'_, [u16]> {
        let size = self.order() as usize;
        match &self.table {
            Some(t) => {
                let start = usize::from(a.0) << self.ell;
                std::borrow::Cow::Borrowed(&t[start..start + size])
            }
            None => std::borrow::Cow::Owned(
                (0..size).map(|b| self.mul_reference(a, FieldElem(b as u16)).0).collect(),
            ),
        }
    }

    /// For ell <= 8: `rows[a][b] = a * b`, each row padded to 256 entries.
    pub fn byte_rows(&self) -> Option<&[[u8; 256]]> {
        self.byte_rows.as_deref()
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^ell - 2); `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (!a.is_zero()).then(|| self.pow(a, u64::from(self.order()) - 2))
    }

    /// Reduce an arbitrary GF(2) polynomial into the field.
    pub fn reduce(&self, p: u64) -> FieldElem {
        FieldElem(poly_rem(p, u64::from(self.modulus)) as u16)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.order()) as u16)
    }

    /// Uniform over the 2^ell - 1 nonzero elements, by rejection sampling of
    /// ell-bit masks.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let mask = self.order() - 1;
        loop {
            let bits = rng.next_u32() & mask;
            if bits != 0 {
                return FieldElem(bits as u16);
            }
        }
    }
}

/// ceil(log2 k) for k >= 1.
pub fn ceil_log2(k: usize) -> u32 {
    assert!(k >= 1);
    usize::BITS - (k - 1).leading_zeros()
}
