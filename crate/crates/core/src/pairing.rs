//! Natural-number coding: the pairing map `(m, n) = (m + n)^2 + m`, finite
//! sequence codes, and the [`Index`] newtype used for every algebra and
//! profile index.
//!
//! Iterating the pairing map to code sequences squares the code at every
//! step, so sequence codes use a self-delimiting binary concatenation
//! instead: a leading `1` bit followed by the Elias gamma code of `a + 1`
//! for every entry `a`. Every natural number decodes to at most one
//! sequence, and numbers that decode to nothing are simply invalid codes.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// The pairing map on small arguments, `(m + n)^2 + m`.
pub const fn pair_u32(m: u32, n: u32) -> u64 {
    let s = m as u64 + n as u64;
    s * s + m as u64
}

/// The pairing map on 64-bit arguments, `None` on `u128` overflow.
pub fn pair_u64(m: u64, n: u64) -> Option<u128> {
    let s = m as u128 + n as u128;
    s.checked_mul(s)?.checked_add(m as u128)
}

/// Inverse of [`pair_u64`]; `None` when `k` is not in the range of the map.
pub fn unpair_u128(k: u128) -> Option<(u64, u64)> {
    let s = isqrt_u128(k);
    let m = k - s * s;
    if m > s {
        return None;
    }
    let n = s - m;
    Some((m.to_u64()?, n.to_u64()?))
}

fn isqrt_u128(k: u128) -> u128 {
    if k < 2 {
        return k;
    }
    // Newton iteration from above
    let mut x = 1u128 << ((128 - k.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + k / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// The pairing map on arbitrary naturals.
pub fn pair(m: &BigUint, n: &BigUint) -> BigUint {
    let s = m + n;
    &s * &s + m
}

/// Inverse of [`pair`]; `None` when `k` is not a pair code.
pub fn unpair(k: &BigUint) -> Option<(BigUint, BigUint)> {
    let s = k.sqrt();
    let m = k - &s * &s;
    if m > s {
        return None;
    }
    let n = &s - &m;
    Some((m, n))
}

/// Codes a finite sequence of naturals.
pub fn encode_seq<'a, I>(items: I) -> BigUint
where
    I: IntoIterator<Item = &'a BigUint>,
{
    let mut bits: Vec<u8> = Vec::with_capacity(64);
    bits.push(1);
    for a in items {
        let w = a + 1u32;
        let digits = w.to_radix_be(2);
        bits.extend(core::iter::repeat_n(0, digits.len() - 1));
        bits.extend_from_slice(&digits);
    }
    BigUint::from_radix_be(&bits, 2).expect("binary digits")
}

/// Decodes a sequence code produced by [`encode_seq`].
pub fn decode_seq(code: &BigUint) -> Option<Vec<BigUint>> {
    if code.is_zero() {
        return None;
    }
    let bits = code.to_radix_be(2);
    let mut out = Vec::new();
    let mut pos = 1;
    while pos < bits.len() {
        let mut zeros = 0;
        while pos < bits.len() && bits[pos] == 0 {
            zeros += 1;
            pos += 1;
        }
        let end = pos + zeros + 1;
        if end > bits.len() {
            return None;
        }
        let w = BigUint::from_radix_be(&bits[pos..end], 2)?;
        out.push(w - 1u32);
        pos = end;
    }
    Some(out)
}

/// A natural number naming an algebra element or a profile.
///
/// Every natural is a meaningful index: codes that do not decode to a well
/// formed object denote the designated default (the empty set for algebra
/// indexes, the default profile for profile indexes).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Index(BigUint);

impl Index {
    pub fn new(n: BigUint) -> Self {
        Index(n)
    }

    pub fn zero() -> Self {
        Index(BigUint::zero())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// Number of binary digits in the code.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl From<u64> for Index {
    fn from(n: u64) -> Self {
        Index(BigUint::from(n))
    }
}

impl From<BigUint> for Index {
    fn from(n: BigUint) -> Self {
        Index(n)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.bits() <= 64 {
            write!(f, "Index({})", self.0)
        } else {
            write!(f, "Index(<{} bits>)", self.0.bits())
        }
    }
}

impl FromStr for Index {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s.trim()).map(Index)
    }
}
