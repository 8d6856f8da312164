//! Arithmetic in GF(2^8) with the reduction polynomial x^8 + x^4 + x^3 + x^2 + 1.
//!
//! Multiplication goes through log/antilog tables built once on first use.
//! The bulk helpers ([`xor_block_acc`], [`mul_block_acc`]) are the only
//! kernels the coding paths use; everything above them is expressed in terms
//! of these two.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Reduction polynomial, including the x^8 term.
pub const POLYNOMIAL: u16 = 0x11D;

/// Primitive element used to build the tables and to pick evaluation points.
pub const GENERATOR: u8 = 0x02;

/// One byte of GF(2^8).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf(pub u8);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse. Zero has none.
    pub fn inv(self) -> Result<Gf> {
        if self.0 == 0 {
            return Err(Error::Domain("inverse of zero in GF(2^8)".into()));
        }
        Ok(Gf(TABLES.inverse[self.0 as usize]))
    }

    /// `self` raised to a non-negative integer power (`0^0 = 1`).
    pub fn pow(self, exp: usize) -> Gf {
        if exp == 0 {
            return Gf::ONE;
        }
        if self.0 == 0 {
            return Gf::ZERO;
        }
        let log = TABLES.log[self.0 as usize] as usize;
        Gf(TABLES.antilog[(log * exp) % 255])
    }

    /// `GENERATOR^exp`.
    pub fn exp(exp: usize) -> Gf {
        Gf(TABLES.antilog[exp % 255])
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:02x}", self.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02x}", self.0)
    }
}

impl From<u8> for Gf {
    fn from(v: u8) -> Self {
        Gf(v)
    }
}

impl Add for Gf {
    type Output = Gf;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf {
    #[inline]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

impl Sub for Gf {
    type Output = Gf;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl Mul for Gf {
    type Output = Gf;
    #[inline]
    fn mul(self, rhs: Gf) -> Gf {
        Gf(mul(self.0, rhs.0))
    }
}

impl MulAssign for Gf {
    #[inline]
    fn mul_assign(&mut self, rhs: Gf) {
        self.0 = mul(self.0, rhs.0);
    }
}

impl std::iter::Sum for Gf {
    fn sum<I: Iterator<Item = Gf>>(iter: I) -> Gf {
        iter.fold(Gf::ZERO, |a, b| a + b)
    }
}

/// Log, antilog and inverse tables for [`POLYNOMIAL`].
pub struct FieldTables {
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    pub log: [u8; 256],
    /// `antilog[i] = GENERATOR^i`, doubled so that a sum of two logs never wraps.
    pub antilog: [u8; 510],
    /// `inverse[a]` for nonzero `a`; `inverse[0]` is unused.
    pub inverse: [u8; 256],
}

impl FieldTables {
    fn build(poly: u16) -> FieldTables {
        let mut log = [0u8; 256];
        let mut antilog = [0u8; 510];
        let mut x: u16 = 1;
        for i in 0..255 {
            antilog[i] = x as u8;
            antilog[i + 255] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & 0x100 != 0 {
                x ^= poly;
            }
        }
        let mut inverse = [0u8; 256];
        for a in 1..256usize {
            inverse[a] = antilog[(255 - log[a] as usize) % 255];
        }
        FieldTables { log, antilog, inverse }
    }
}

static TABLES: LazyLock<FieldTables> = LazyLock::new(|| FieldTables::build(POLYNOMIAL));

/// Full 256x256 product table, one row per coefficient, for the block kernels.
static MUL_TABLE: LazyLock<Box<[[u8; 256]; 256]>> = LazyLock::new(|| {
    let mut t = Box::new([[0u8; 256]; 256]);
    for a in 0..256 {
        for b in 0..256 {
            t[a][b] = mul(a as u8, b as u8);
        }
    }
    t
});

pub fn tables() -> &'static FieldTables {
    &TABLES
}

#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    let t = &*TABLES;
    t.antilog[t.log[a as usize] as usize + t.log[b as usize] as usize]
}

pub fn inv(a: u8) -> Result<u8> {
    Gf(a).inv().map(|g| g.0)
}

fn check_len(dst: &[u8], src: &[u8]) -> Result<()> {
    if dst.len() != src.len() {
        return Err(Error::Contract(format!("block length mismatch: {} vs {}", dst.len(), src.len())));
    }
    Ok(())
}

/// `dst ^= src`, bytewise.
pub fn xor_block_acc(dst: &mut [u8], src: &[u8]) -> Result<()> {
    check_len(dst, src)?;
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
    Ok(())
}

/// `dst ^= coeff * src`, bytewise.
pub fn mul_block_acc(dst: &mut [u8], coeff: Gf, src: &[u8]) -> Result<()> {
    check_len(dst, src)?;
    match coeff.0 {
        0 => {}
        1 => {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= *s;
            }
        }
        c => {
            let row = &MUL_TABLE[c as usize];
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= row[*s as usize];
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Carry-less multiply followed by reduction; shares nothing with the tables.
    fn mul_bitwise(a: u8, b: u8) -> u8 {
        let mut acc: u16 = 0;
        for i in 0..8 {
            if b >> i & 1 == 1 {
                acc ^= (a as u16) << i;
            }
        }
        for bit in (8..16).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= POLYNOMIAL << (bit - 8);
            }
        }
        acc as u8
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(0x57, 0x57), 0);
        assert_eq!(add(0x57, 0x83), 0xD4);
        for a in 0..=255u8 {
            assert_eq!(add(a, 0), a);
        }
    }

    #[test]
    fn mul_matches_bitwise_oracle_everywhere() {
        assert_eq!(mul_bitwise(0x02, 0x80), 0x1D);
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(mul(a, b), mul_bitwise(a, b), "{a} * {b}");
            }
        }
        assert_eq!(mul(0x02, 0x80), 0x1D);
    }

    #[test]
    fn identities() {
        for a in 0..=255u8 {
            assert_eq!(mul(a, 1), a);
            assert_eq!(mul(a, 0), 0);
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inv(1).unwrap(), 1);
        let brute = (1..=255u8).find(|&c| mul_bitwise(2, c) == 1).unwrap();
        assert_eq!(brute, 0x8E);
        assert_eq!(inv(0x02).unwrap(), 0x8E);
        assert!(matches!(inv(0), Err(Error::Domain(_))));
        for a in 1..=255u8 {
            assert_eq!(inv(inv(a).unwrap()).unwrap(), a);
            assert_eq!(mul(a, inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn table_invariants() {
        let t = tables();
        for a in 1..=255usize {
            assert_eq!(t.antilog[t.log[a] as usize] as usize, a);
        }
    }

    #[test]
    fn pow_agrees_with_repeated_mul() {
        for a in 0..=255u8 {
            let mut acc = Gf::ONE;
            for e in 0..20 {
                assert_eq!(Gf(a).pow(e), acc);
                acc *= Gf(a);
            }
        }
    }

    #[test]
    fn block_examples() {
        let mut dst = vec![0x01, 0x02];
        xor_block_acc(&mut dst, &[0x03, 0x04]).unwrap();
        assert_eq!(dst, vec![0x02, 0x06]);

        let src = vec![7u8, 9, 200];
        let mut d = src.clone();
        xor_block_acc(&mut d, &src).unwrap();
        assert_eq!(d, vec![0; 3]);
        let mut d = src.clone();
        xor_block_acc(&mut d, &[0; 3]).unwrap();
        assert_eq!(d, src);

        let mut d = vec![0x00];
        mul_block_acc(&mut d, Gf(0x02), &[0x80]).unwrap();
        assert_eq!(d, vec![0x1D]);

        let mut d = src.clone();
        mul_block_acc(&mut d, Gf::ZERO, &[1, 2, 3]).unwrap();
        assert_eq!(d, src);

        let mut a = src.clone();
        let mut b = src.clone();
        mul_block_acc(&mut a, Gf::ONE, &[5, 6, 7]).unwrap();
        xor_block_acc(&mut b, &[5, 6, 7]).unwrap();
        assert_eq!(a, b);

        assert!(matches!(xor_block_acc(&mut [0u8; 2], &[0u8; 3]), Err(Error::Contract(_))));
        assert!(matches!(mul_block_acc(&mut [0u8; 2], Gf(3), &[0u8; 3]), Err(Error::Contract(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn field_axioms(a: u8, b: u8, c: u8) {
            let (a, b, c) = (Gf(a), Gf(b), Gf(c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + a, Gf::ZERO);
            prop_assert_eq!(a * Gf::ONE, a);
        }
    }

    proptest! {
        #[test]
        fn block_acc_is_linear(
            dst in proptest::collection::vec(any::<u8>(), 32),
            a in proptest::collection::vec(any::<u8>(), 32),
            b in proptest::collection::vec(any::<u8>(), 32),
            c: u8,
        ) {
            let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let mut lhs = dst.clone();
            mul_block_acc(&mut lhs, Gf(c), &ab).unwrap();
            let mut rhs = dst.clone();
            mul_block_acc(&mut rhs, Gf(c), &a).unwrap();
            mul_block_acc(&mut rhs, Gf(c), &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
