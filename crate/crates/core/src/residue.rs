//! Residues of the cyclic group `Z_n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Canonical representative of `value mod modulus`, always in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces an arbitrary signed integer into `Z_modulus`.
    ///
    /// # Panics
    /// Panics if `modulus == 0`.
    pub fn new(value: i128, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn check(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues from different groups: Z_{} and Z_{}",
            self.modulus, other.modulus
        );
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Residue::new(self.value as i128 + rhs.value as i128, self.modulus)
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        Residue::new(self.value as i128 - rhs.value as i128, self.modulus)
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        Residue::new(self.value as i128 * rhs.value as i128, self.modulus)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Self {
        Residue::new(-(self.value as i128), self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `x mod n` in `[0, n)` for any signed `x`.
pub fn reduce(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// `(a - b) mod n` for entries already in `[0, n)`.
#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, n: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
