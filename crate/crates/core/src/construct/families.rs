//! The three direct families of reduced DCA(4, n+1; n).
//!
//! Each family fills a `n × 3` reduced array `(a, b(a), c(a))` piecewise:
//! on each interval of the row index every column advances by a constant
//! step, and the start values are chosen so the pieces interleave into
//! permutations whose pairwise differences are `Z_n \ {0}` plus `n/2`.
//! All piecewise formulas are evaluated in `i128` and reduced once.

use std::ops::RangeInclusive;

use crate::array::{ArrayKind, Form, ResidueArray};
use crate::residue::{gcd, reduce};

use super::ConstructError;

fn bad(cond: impl Into<String>) -> ConstructError {
    ConstructError::BadParams(cond.into())
}

fn reduced_dca(n: u64, a: Vec<u32>, b: Vec<u32>, c: Vec<u32>) -> ResidueArray {
    ResidueArray::from_columns(ArrayKind::Dca, Form::Reduced, n as u32, 0, 4, &[a, b, c])
        .expect("family rows are residues of the right count")
}

fn check_order_fits(n: u64) -> Result<(), ConstructError> {
    if n > u32::MAX as u64 {
        return Err(bad(format!("order {n} does not fit in 32 bits")));
    }
    Ok(())
}

/// Parameters of the order-`2m` family with odd `m` and even multiplier `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OddFamilyParams {
    pub m: u64,
    pub f: u64,
    /// Generator index when the pair came from [`params_odd`].
    pub i: Option<u64>,
}

impl OddFamilyParams {
    pub fn order(&self) -> u64 {
        2 * self.m
    }

    /// Checks `gcd(f,2m) = 2`, `gcd(f+2,2m) = 2`, `f²+f+1 ≡ m (mod 2m)` and
    /// `m+3 ≤ f ≤ 2m-4`, naming the first one that fails.
    pub fn validate(&self) -> Result<(), ConstructError> {
        let (m, f) = (self.m, self.f);
        if m == 0 {
            return Err(bad("m must be positive"));
        }
        let n = 2 * m;
        let g = gcd(f, n);
        if g != 2 {
            return Err(bad(format!("gcd(f, 2m) = gcd({f}, {n}) = {g}, expected 2")));
        }
        let g = gcd(f + 2, n);
        if g != 2 {
            return Err(bad(format!("gcd(f+2, 2m) = gcd({}, {n}) = {g}, expected 2", f + 2)));
        }
        let fi = f as i128;
        let lhs = reduce(fi * fi + fi + 1, n);
        if lhs != m % n {
            return Err(bad(format!(
                "f^2+f+1 = {lhs} (mod {n}), expected m = {m}"
            )));
        }
        if f < m + 3 || f + 4 > n {
            return Err(bad(format!("need m+3 <= f <= 2m-4, got m={m}, f={f}")));
        }
        check_order_fits(n)?;
        // Consequences of the hypotheses used by the interval argument.
        assert_eq!(gcd(f, m), 1);
        assert_eq!(gcd(f + 1, m), 1);
        assert_eq!(gcd(f - 1, m), 1);
        assert_eq!(gcd(2 * f + 1, m), 1);
        assert_eq!((m as u128 * f as u128) % n as u128, 0);
        Ok(())
    }
}

/// `m = 2(2i²+7i+6)+1` and `f = m+3+2i` for `i ≢ 2 (mod 3)`.
pub fn params_odd(i: u64) -> Result<OddFamilyParams, ConstructError> {
    if i % 3 == 2 {
        return Err(ConstructError::BadIndex(format!(
            "i = {i} is 2 mod 3; gcd(f+2, 2m) would be divisible by 3"
        )));
    }
    let k = 2 * i * i + 7 * i + 6;
    let m = 2 * k + 1;
    Ok(OddFamilyParams {
        m,
        f: m + 3 + 2 * i,
        i: Some(i),
    })
}

/// Inverse of [`params_odd`] on orders: the index `i` with `2m = order`, if
/// any (including excluded indices).
pub fn odd_index_for_order(order: u64) -> Option<u64> {
    if order % 2 != 0 {
        return None;
    }
    // m = 4i² + 14i + 13  =>  i = (sqrt(16m - 12) - 14) / 8
    let m = order / 2;
    if m < 13 {
        return None;
    }
    let disc = 16 * m - 12;
    let s = disc.isqrt();
    if s * s != disc || s < 14 || (s - 14) % 8 != 0 {
        return None;
    }
    Some((s - 14) / 8)
}

/// The four row intervals `[0, m+f]`, `[m+f+1, m-1]`, `[m, m-f-1]`,
/// `[m-f, 2m-1]` with endpoints reduced mod `2m`.
pub fn odd_intervals(m: u64, f: u64) -> [RangeInclusive<u64>; 4] {
    let n = 2 * m;
    let r1 = reduce(m as i128 + f as i128, n);
    let r2 = reduce(m as i128 - f as i128, n);
    [0..=r1, r1 + 1..=m - 1, m..=r2 - 1, r2..=n - 1]
}

/// Reduced DCA(4, 2m+1; 2m) for odd `m`.
pub fn construct_odd(m: u64, f: u64) -> Result<ResidueArray, ConstructError> {
    let p = OddFamilyParams { m, f, i: None };
    p.validate()?;
    let n = 2 * m;
    let iv = odd_intervals(m, f);
    assert!(
        *iv[0].end() >= 3 && *iv[0].end() + 4 <= m && *iv[3].start() >= m + 4 && *iv[3].start() + 3 <= n,
        "interval endpoints out of the expected windows"
    );
    let (mi, fi) = (m as i128, f as i128);
    let mut cols = (Vec::new(), Vec::new(), Vec::new());
    for a in 0..n {
        let ai = a as i128;
        let piece = iv.iter().position(|r| r.contains(&a)).expect("intervals cover Z_2m");
        let b = match piece {
            0 | 1 => ai * fi + mi,
            _ => (ai + 1) * fi + mi - 1,
        };
        let c = match piece {
            0 => -(ai - 1) * (fi + 1) - 2,
            1 => -(ai - 1) * (fi + 1) + mi - 2,
            2 => -ai * (fi + 1) + mi,
            _ => -ai * (fi + 1),
        };
        cols.0.push(a as u32);
        cols.1.push(reduce(b, n) as u32);
        cols.2.push(reduce(c, n) as u32);
    }
    Ok(reduced_dca(n, cols.0, cols.1, cols.2))
}

/// Parameters of the order-`4m` family, `m = 4k+2`, `f = 2m-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourMFamilyParams {
    pub k: u64,
    pub m: u64,
    pub f: u64,
}

impl FourMFamilyParams {
    pub fn from_index(k: u64) -> Result<Self, ConstructError> {
        if k % 3 == 1 {
            return Err(ConstructError::BadIndex(format!(
                "k = {k} is 1 mod 3; 3 divides 2k+1 = {}",
                2 * k + 1
            )));
        }
        let m = 4 * k + 2;
        Ok(Self { k, m, f: 2 * m - 2 })
    }

    pub fn order(&self) -> u64 {
        4 * self.m
    }
}

/// Checks `m ≡ 2 (mod 4)`, `gcd(f,4m) = 2`, `gcd(f-1,4m) = 1` and
/// `f²+f-2 ≡ 2m (mod 4m)`.
fn validate_4m(m: u64, f: u64) -> Result<(), ConstructError> {
    if m % 4 != 2 {
        return Err(bad(format!("m = {m} is not 2 mod 4")));
    }
    if f == 0 {
        return Err(bad("f must be a natural number"));
    }
    let n = 4 * m;
    let g = gcd(f, n);
    if g != 2 {
        return Err(bad(format!("gcd(f, 4m) = gcd({f}, {n}) = {g}, expected 2")));
    }
    let g = gcd(f - 1, n);
    if g != 1 {
        return Err(bad(format!("gcd(f-1, 4m) = gcd({}, {n}) = {g}, expected 1", f - 1)));
    }
    let fi = f as i128;
    let lhs = reduce(fi * fi + fi - 2, n);
    if lhs != 2 * m {
        return Err(bad(format!("f^2+f-2 = {lhs} (mod {n}), expected 2m = {}", 2 * m)));
    }
    check_order_fits(n)?;
    let (mi, n_i) = (m as i128, n as i128);
    let g_of = |x: i128| gcd(reduce(x, n), n);
    assert_eq!(g_of(2 * mi + 2 - fi), 4);
    assert_eq!(g_of(2 * mi - fi + 1), 1);
    assert_eq!(g_of(2 * mi - 2 * fi + 2), 2);
    assert_eq!((mi * fi).rem_euclid(n_i), 2 * mi);
    Ok(())
}

/// Reduced DCA(4, 16k+9; 16k+8) with `m = 4k+2`, `f = 2m-2`.
pub fn construct_4m(k: u64) -> Result<ResidueArray, ConstructError> {
    let p = FourMFamilyParams::from_index(k)?;
    construct_4m_general(p.m, p.f)
}

/// Reduced DCA(4, 4m+1; 4m) for any `(m, f)` meeting the family's
/// conditions.
pub fn construct_4m_general(m: u64, f: u64) -> Result<ResidueArray, ConstructError> {
    validate_4m(m, f)?;
    let n = 4 * m;
    let (mi, fi) = (m as i128, f as i128);
    let step = 2 * mi - fi + 2;
    let mut cols = (Vec::new(), Vec::new(), Vec::new());
    for a in 0..n {
        let ai = a as i128;
        let (b, c) = match a / m {
            0 => ((ai + 1) * fi - 1, (ai + 1) * step - 1),
            1 => ((ai + 1) * fi - 1, ai * step - mi),
            2 => (ai * fi, (ai + 1) * step + mi - 1),
            _ => (ai * fi, ai * step),
        };
        cols.0.push(a as u32);
        cols.1.push(reduce(b, n) as u32);
        cols.2.push(reduce(c, n) as u32);
    }
    Ok(reduced_dca(n, cols.0, cols.1, cols.2))
}

/// Odd `μ ≥ 1`; the order is `6μ+4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SixMuFamilyParams {
    pub mu: u64,
}

impl SixMuFamilyParams {
    pub fn new(mu: u64) -> Result<Self, ConstructError> {
        if mu == 0 || mu % 2 == 0 {
            return Err(bad(format!("mu = {mu} must be an odd positive integer")));
        }
        check_order_fits(6 * mu + 4)?;
        Ok(Self { mu })
    }

    pub fn order(&self) -> u64 {
        6 * self.mu + 4
    }
}

/// Reduced DCA(4, 6μ+5; 6μ+4) for odd `μ`. Rows are indexed by `α`; the
/// first column is a permutation of `Z_n` but not the identity.
pub fn construct_6mu(mu: u64) -> Result<ResidueArray, ConstructError> {
    let p = SixMuFamilyParams::new(mu)?;
    let n = p.order();
    let u = mu as i128;
    let mut cols = (Vec::new(), Vec::new(), Vec::new());
    for alpha in 0..n {
        let x = alpha as i128;
        let a = if x < u {
            3 * x + 3 * u + 4
        } else if x <= 2 * u {
            3 * x + 2
        } else if x <= 3 * u + 1 {
            3 * x + 3 * u + 4
        } else if x <= 4 * u + 2 {
            3 * x + 3 * u + 3
        } else if x <= 5 * u + 2 {
            3 * x + 1
        } else {
            3 * x + 3 * u + 3
        };
        let b = 3 * x * (u + 1) + 2 * u + if x <= 3 * u + 1 { 2 } else { 1 };
        let c = x * (3 * u + 4) + 5 * u + 4;
        cols.0.push(reduce(a, n) as u32);
        cols.1.push(reduce(b, n) as u32);
        cols.2.push(reduce(c, n) as u32);
    }
    Ok(reduced_dca(n, cols.0, cols.1, cols.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_dca;

    #[test]
    fn params_odd_values() {
        assert_eq!(params_odd(0).unwrap(), OddFamilyParams { m: 13, f: 16, i: Some(0) });
        assert_eq!(params_odd(4).unwrap().order(), 266);
        assert!(matches!(params_odd(2), Err(ConstructError::BadIndex(_))));
        for i in (0..40).filter(|i| i % 3 != 2) {
            params_odd(i).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn odd_index_inversion() {
        for i in 0..30 {
            let m = 2 * (2 * i * i + 7 * i + 6) + 1;
            assert_eq!(odd_index_for_order(2 * m), Some(i));
        }
        assert_eq!(odd_index_for_order(28), None);
        assert_eq!(odd_index_for_order(24), None);
    }

    #[test]
    fn odd_intervals_m13() {
        assert_eq!(odd_intervals(13, 16), [0..=3, 4..=12, 13..=22, 23..=25]);
    }

    #[test]
    fn odd_interval_partition() {
        for i in (0..20).filter(|i| i % 3 != 2) {
            let p = params_odd(i).unwrap();
            let iv = odd_intervals(p.m, p.f);
            let mut next = 0;
            for r in &iv {
                assert_eq!(*r.start(), next);
                assert!(r.start() <= r.end());
                next = r.end() + 1;
            }
            assert_eq!(next, 2 * p.m);
            let r1 = *iv[0].end();
            let r2 = *iv[3].start();
            assert!((3..=p.m - 4).contains(&r1));
            assert!((p.m + 4..=2 * p.m - 3).contains(&r2));
        }
    }

    #[test]
    fn odd_rejections_name_the_condition() {
        let e = construct_odd(13, 15).unwrap_err();
        assert!(matches!(&e, ConstructError::BadParams(s) if s.contains("gcd(f, 2m)")), "{e}");
        // 42 = 16 + 26 passes every congruence but is out of range.
        let e = construct_odd(13, 42).unwrap_err();
        assert!(matches!(&e, ConstructError::BadParams(s) if s.contains("m+3 <= f")), "{e}");
        let e = construct_odd(13, 18).unwrap_err();
        assert!(matches!(&e, ConstructError::BadParams(_)));
    }

    #[test]
    fn four_m_small() {
        let a = construct_4m(0).unwrap();
        assert_eq!(a.order(), 8);
        assert_eq!(a.column(1), vec![1, 3, 5, 7, 0, 2, 4, 6]);
        assert_eq!(a.column(2), vec![3, 7, 6, 2, 5, 1, 0, 4]);
        assert!(verify_dca(&a, true).unwrap().passed());
        assert_eq!(construct_4m(2).unwrap().order(), 40);
        assert!(matches!(construct_4m(1), Err(ConstructError::BadIndex(_))));
        assert!(matches!(construct_4m_general(4, 6), Err(ConstructError::BadParams(_))));
    }

    #[test]
    fn six_mu_small() {
        let a = construct_6mu(1).unwrap();
        assert_eq!(a.row(0), &[7, 4, 9]);
        assert_ne!(a.column(0), (0..10).collect::<Vec<_>>());
        assert!(verify_dca(&a, true).unwrap().passed());
        assert_eq!(construct_6mu(5).unwrap().order(), 34);
        assert!(matches!(construct_6mu(2), Err(ConstructError::BadParams(_))));
        assert!(matches!(construct_6mu(0), Err(ConstructError::BadParams(_))));
    }
}
