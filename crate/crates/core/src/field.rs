//! Arithmetic in the prime field GF(q).

use crate::error::{Error, Result};

/// Largest modulus accepted. Residues are stored as `u32`, products are
/// formed in `u64`.
pub const MAX_MODULUS: u64 = u16::MAX as u64;

/// A prime field GF(q). Residues are plain `u32` values in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    q: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q: q as u32 })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    /// Checks that `v` is a canonical residue.
    pub fn residue(self, v: u64) -> Result<u32> {
        if v < self.q as u64 {
            Ok(v as u32)
        } else {
            Err(Error::OutOfRange {
                value: v,
                q: self.q,
            })
        }
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat: a^(q-2).
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a % self.q, self.q as u64 - 2))
    }
}

/// `(a + b) mod q`.
pub fn field_add(a: u32, b: u32, q: u32) -> u32 {
    Field { q }.add(a, b)
}

/// `a^{-1} mod q`. The modulus is assumed prime.
pub fn field_inv(a: u32, q: u32) -> Result<u32> {
    Field { q }.inv(a)
}
