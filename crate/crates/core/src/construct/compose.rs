//! Prime-field difference matrices and the composition combinators.

use crate::array::{ArrayKind, Form, ResidueArray};
use crate::residue::{is_prime, sub_mod};
use crate::verify::{verify_dca, verify_dm, verify_hdm};

use super::ConstructError;

fn invalid(msg: impl Into<String>) -> ConstructError {
    ConstructError::IngredientInvalid(msg.into())
}

fn same_k(a: &ResidueArray, b: &ResidueArray) -> Result<(), ConstructError> {
    if a.k() != b.k() {
        return Err(ConstructError::MismatchedK {
            left: a.k(),
            right: b.k(),
        });
    }
    Ok(())
}

/// Checks a DM(n,k;1) ingredient through the independent verifier.
fn require_dm1(a: &ResidueArray, what: &str) -> Result<(), ConstructError> {
    if a.kind() != ArrayKind::Dm {
        return Err(invalid(format!("{what} is a {}, expected a DM", a.kind())));
    }
    let r = verify_dm(a).map_err(|e| invalid(format!("{what}: {e}")))?;
    if !r.passed() {
        return Err(invalid(format!(
            "{what} fails DM verification: {}",
            r.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    if r.lambda != Some(1) {
        return Err(invalid(format!(
            "{what} has lambda={}, expected 1",
            r.lambda.unwrap_or(0)
        )));
    }
    Ok(())
}

fn require_hdm1(a: &ResidueArray) -> Result<(), ConstructError> {
    if a.kind() != ArrayKind::Hdm {
        return Err(invalid(format!("HDM ingredient is a {}", a.kind())));
    }
    let r = verify_hdm(a).map_err(|e| invalid(format!("HDM ingredient: {e}")))?;
    if !r.passed() || r.lambda != Some(1) {
        return Err(invalid(format!(
            "HDM ingredient fails verification: {}",
            r.witness.map(|w| w.to_string()).unwrap_or_else(|| "lambda != 1".into())
        )));
    }
    Ok(())
}

/// Full-form DCA ingredient that passes strict verification.
fn require_strict_dca(a: &ResidueArray, what: &str) -> Result<ResidueArray, ConstructError> {
    if a.kind() != ArrayKind::Dca {
        return Err(invalid(format!("{what} is a {}, expected a DCA", a.kind())));
    }
    let r = verify_dca(a, true).map_err(|e| invalid(format!("{what}: {e}")))?;
    if !r.passed() {
        return Err(invalid(format!(
            "{what} fails strict verification: {}",
            r.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    Ok(a.full_dca()?)
}

/// Cyclic DM(p, k; 1) from the multiplication table of `Z_p`:
/// `q(i,j) = i·(j+1)` for `j < k-1`, last column zero, zero row last.
pub fn dm_prime(p: u32, k: usize) -> Result<ResidueArray, ConstructError> {
    if !is_prime(p as u64) {
        return Err(ConstructError::NotPrime(p));
    }
    if k > p as usize {
        return Err(ConstructError::TooManyColumns { k, p });
    }
    if k == 0 {
        return Err(ConstructError::BadParams("k must be positive".into()));
    }
    let mut entries = Vec::with_capacity(p as usize * k);
    for i in (1..p).chain(std::iter::once(0)) {
        for j in 0..k {
            let v = if j + 1 < k {
                (i as u64 * (j as u64 + 1) % p as u64) as u32
            } else {
                0
            };
            entries.push(v);
        }
    }
    Ok(ResidueArray::new(ArrayKind::Dm, Form::Full, p, 0, k, entries)?)
}

/// Fills the hole of a cyclic HDM(k, n; h) with a DCA(k, h+1; h) satisfying
/// P1 and P2, giving a full DCA(k, n+1; n).
///
/// The HDM rows are shifted so their last entry is zero, then the hole
/// array's rows follow with every entry multiplied by `u = n/h`, which maps
/// `Z_h` onto the hole subgroup. The hole's repeated difference `h/2` lands
/// on `n/2`.
pub fn insert_hole(
    hdm: &ResidueArray,
    dca_hole: &ResidueArray,
) -> Result<ResidueArray, ConstructError> {
    same_k(hdm, dca_hole)?;
    require_hdm1(hdm)?;
    if dca_hole.order() != hdm.hole() {
        return Err(invalid(format!(
            "hole array has order {}, the HDM hole has order {}",
            dca_hole.order(),
            hdm.hole()
        )));
    }
    let hole = require_strict_dca(dca_hole, "hole DCA")?.normalized();
    let n = hdm.order();
    let u = n / hdm.hole();
    let w = hdm.width();
    let mut entries = Vec::with_capacity((n as usize + 1) * w);
    for i in 0..hdm.rows() {
        let row = hdm.row(i);
        let last = row[w - 1];
        entries.extend(row.iter().map(|&v| sub_mod(v, last, n)));
    }
    entries.extend(hole.entries().iter().map(|&v| v * u));
    Ok(ResidueArray::new(ArrayKind::Dca, Form::Full, n, 0, hdm.k(), entries)?)
}

/// Product of a cyclic HDM(k, n; h) with a cyclic DM(n', k; 1): a cyclic
/// HDM(k, nn'; hn') with entries `a(i,j) + n·b(i',j) mod nn'`, rows ordered
/// with `i` varying fastest.
pub fn hdm_product(hdm: &ResidueArray, dm: &ResidueArray) -> Result<ResidueArray, ConstructError> {
    same_k(hdm, dm)?;
    require_hdm1(hdm)?;
    require_dm1(dm, "DM ingredient")?;
    let n = hdm.order() as u64;
    let big = n * dm.order() as u64;
    if big > u32::MAX as u64 {
        return Err(ConstructError::BadParams(format!("product order {big} is too large")));
    }
    let mut entries = Vec::with_capacity(hdm.rows() * dm.rows() * hdm.width());
    for i2 in 0..dm.rows() {
        for i in 0..hdm.rows() {
            for (&a, &b) in hdm.row(i).iter().zip(dm.row(i2)) {
                entries.push(((a as u64 + n * b as u64) % big) as u32);
            }
        }
    }
    Ok(ResidueArray::new(
        ArrayKind::Hdm,
        Form::Full,
        big as u32,
        hdm.hole() * dm.order(),
        hdm.k(),
        entries,
    )?)
}

/// Product of a cyclic DM(n, k; 1), a cyclic DM(n', k; 1) and a cyclic
/// DCA(k, n'+1; n') with P1 and P2: a cyclic DCA(k, nn'+1; nn').
///
/// Row `r = i + i'·n` is `a(i,j) + b(i',j)·n` unless `i = n-1`, in which case
/// it is `c(i',j)·n`; the last row is `c(n',j)·n = 0`. The first DM and the
/// DCA must be normalized (zero last row and last column).
pub fn dca_product(
    dm_a: &ResidueArray,
    dm_b: &ResidueArray,
    dca_b: &ResidueArray,
) -> Result<ResidueArray, ConstructError> {
    same_k(dm_a, dm_b)?;
    same_k(dm_a, dca_b)?;
    require_dm1(dm_a, "first DM")?;
    if !dm_a.is_normalized() {
        return Err(invalid("first DM must have a zero last row and last column"));
    }
    require_dm1(dm_b, "second DM")?;
    if dca_b.order() != dm_b.order() {
        return Err(invalid(format!(
            "DCA has order {}, second DM has order {}",
            dca_b.order(),
            dm_b.order()
        )));
    }
    let c = require_strict_dca(dca_b, "DCA ingredient")?;
    if !c.is_normalized() {
        return Err(invalid("DCA ingredient must have a zero last row and last column"));
    }
    let n = dm_a.order() as u64;
    let n2 = dm_b.order() as u64;
    let big = n * n2;
    if big > u32::MAX as u64 {
        return Err(ConstructError::BadParams(format!("product order {big} is too large")));
    }
    let w = dm_a.width();
    let mut entries = Vec::with_capacity((big as usize + 1) * w);
    for r in 0..big as usize {
        let (i, i2) = (r % n as usize, r / n as usize);
        for j in 0..w {
            let v = if i as u64 != n - 1 {
                dm_a.get(i, j) as u64 + dm_b.get(i2, j) as u64 * n
            } else {
                c.get(i2, j) as u64 * n
            };
            entries.push((v % big) as u32);
        }
    }
    entries.extend(c.row(n2 as usize).iter().map(|&v| ((v as u64 * n) % big) as u32));
    Ok(ResidueArray::new(ArrayKind::Dca, Form::Full, big as u32, 0, w, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::example_b;

    #[test]
    fn dm_prime_shapes_and_errors() {
        let a = dm_prime(5, 4).unwrap();
        assert_eq!(a.rows(), 5);
        assert!(a.is_normalized());
        assert_eq!(a.row(0), &[1, 2, 3, 0]);
        let r = verify_dm(&a).unwrap();
        assert!(r.passed());
        assert_eq!(r.lambda, Some(1));
        assert_eq!(dm_prime(6, 4), Err(ConstructError::NotPrime(6)));
        assert_eq!(dm_prime(3, 4), Err(ConstructError::TooManyColumns { k: 4, p: 3 }));
    }

    #[test]
    fn dm_prime_range() {
        for p in (5..=97).filter(|&p| is_prime(p as u64)) {
            for k in 2..=(p as usize).min(6) {
                let r = verify_dm(&dm_prime(p, k).unwrap()).unwrap();
                assert!(r.passed() && r.lambda == Some(1), "p={p} k={k}");
            }
        }
    }

    fn dm_of(n: u32, rows: &[[u32; 2]]) -> ResidueArray {
        ResidueArray::new(
            ArrayKind::Dm,
            Form::Full,
            n,
            0,
            2,
            rows.iter().flatten().copied().collect(),
        )
        .unwrap()
    }

    fn dca_2_7_6() -> ResidueArray {
        ResidueArray::from_columns(
            ArrayKind::Dca,
            Form::Full,
            6,
            0,
            2,
            &[vec![0, 1, 2, 3, 4, 5, 0], vec![0; 7]],
        )
        .unwrap()
    }

    #[test]
    fn dca_product_k2() {
        let dm_a = dm_of(5, &[[1, 0], [2, 0], [3, 0], [4, 0], [0, 0]]);
        let dm_b = dm_of(6, &[[0, 0], [1, 0], [2, 0], [3, 0], [4, 0], [5, 0]]);
        let q = dca_product(&dm_a, &dm_b, &dca_2_7_6()).unwrap();
        assert_eq!(q.order(), 30);
        assert_eq!(q.rows(), 31);
        let r = verify_dca(&q, true).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn dca_product_rejects_unnormalized_dm() {
        let dm_a = dm_of(5, &[[0, 0], [1, 0], [2, 0], [3, 0], [4, 0]]);
        let dm_b = dm_of(6, &[[0, 0], [1, 0], [2, 0], [3, 0], [4, 0], [5, 0]]);
        assert!(matches!(
            dca_product(&dm_a, &dm_b, &dca_2_7_6()),
            Err(ConstructError::IngredientInvalid(_))
        ));
    }

    #[test]
    fn no_cyclic_dm_of_order_six_with_three_columns() {
        // Normalizing the last column to zero forces column 0 to be a
        // permutation, so fix it to the identity and try every column 1.
        let mut found = 0;
        let mut perm: Vec<u32> = (0..6).collect();
        let mut c = [0usize; 6];
        let mut check = |p: &[u32]| {
            let mut seen = [false; 6];
            for (i, &v) in p.iter().enumerate() {
                seen[sub_mod(v, i as u32, 6) as usize] = true;
            }
            if seen.iter().all(|&s| s) {
                found += 1;
            }
        };
        // Heap's algorithm over all 720 permutations.
        check(&perm);
        let mut i = 0;
        while i < 6 {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                check(&perm);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(found, 0);
    }

    #[test]
    fn mismatched_k() {
        let dm = dm_prime(7, 3).unwrap();
        let hdm = ResidueArray::new(ArrayKind::Hdm, Form::Full, 4, 2, 2, vec![1, 0, 3, 0]).unwrap();
        assert_eq!(
            hdm_product(&hdm, &dm),
            Err(ConstructError::MismatchedK { left: 2, right: 3 })
        );
        assert_eq!(
            insert_hole(&hdm, &example_b()),
            Err(ConstructError::MismatchedK { left: 2, right: 4 })
        );
    }

    #[test]
    fn product_rejects_lambda_two() {
        let hdm = ResidueArray::new(ArrayKind::Hdm, Form::Full, 4, 2, 2, vec![1, 0, 3, 0]).unwrap();
        let dm2 = dm_of(3, &[[1, 0], [2, 0], [0, 0], [1, 0], [2, 0], [0, 0]]);
        assert!(verify_dm(&dm2).unwrap().passed());
        assert!(matches!(
            hdm_product(&hdm, &dm2),
            Err(ConstructError::IngredientInvalid(_))
        ));
    }

    #[test]
    fn small_product_and_hole() {
        // HDM(2,4;2) x DM(3,2;1) = HDM(2,12;6).
        let hdm = ResidueArray::new(ArrayKind::Hdm, Form::Full, 4, 2, 2, vec![1, 0, 3, 0]).unwrap();
        let p = hdm_product(&hdm, &dm_prime(3, 2).unwrap()).unwrap();
        assert_eq!((p.order(), p.hole(), p.rows()), (12, 6, 6));
        assert!(verify_hdm(&p).unwrap().passed());
        // Fill the hole with the k=2 DCA(2,7;6).
        let q = insert_hole(&p, &dca_2_7_6()).unwrap();
        assert!(verify_dca(&q, true).unwrap().passed());
    }
}
