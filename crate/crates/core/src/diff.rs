//! Difference multisets between two columns.

use std::ops::RangeInclusive;

use crate::array::{ArrayError, ResidueArray};
use crate::residue::sub_mod;

/// Multiplicity of every residue `d` among `q(i,j) - q(i,j')` over a row range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffMultiset {
    modulus: u32,
    counts: Vec<u32>,
    total: usize,
}

impl DiffMultiset {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn count(&self, d: u32) -> u32 {
        self.counts[d as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Residues with multiplicity zero, ascending.
    pub fn missing(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.modulus).filter(|&d| self.count(d) == 0)
    }

    /// Residues occurring more than once, ascending.
    pub fn repeated(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.modulus).filter(|&d| self.count(d) > 1)
    }
}

/// Counts `A[i,j] - A[i,j'] mod n` for `i` in `rows`.
pub fn diff_multiset(
    a: &ResidueArray,
    j: usize,
    j2: usize,
    rows: RangeInclusive<usize>,
) -> Result<DiffMultiset, ArrayError> {
    let w = a.width();
    if j >= w || j2 >= w {
        return Err(ArrayError::IndexOutOfRange(format!(
            "column pair ({j},{j2}) in an array of width {w}"
        )));
    }
    if j == j2 {
        return Err(ArrayError::InvalidPair(j));
    }
    if *rows.end() >= a.rows() {
        return Err(ArrayError::IndexOutOfRange(format!(
            "rows {}..={} in an array with {} rows",
            rows.start(),
            rows.end(),
            a.rows()
        )));
    }
    let n = a.order();
    let mut counts = vec![0u32; n as usize];
    let mut total = 0;
    for i in rows {
        counts[sub_mod(a.get(i, j), a.get(i, j2), n) as usize] += 1;
        total += 1;
    }
    Ok(DiffMultiset {
        modulus: n,
        counts,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{example_b, ArrayKind, Form};
    use proptest::prelude::*;

    #[test]
    fn b_column_one_minus_zero() {
        let d = diff_multiset(&example_b(), 1, 0, 0..=5).unwrap();
        assert_eq!(d.counts(), &[0, 1, 1, 2, 1, 1]);
        assert_eq!(d.total(), 6);
        assert_eq!(d.missing().collect::<Vec<_>>(), vec![0]);
        assert_eq!(d.repeated().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn against_zero_column_gives_the_column() {
        let b = example_b();
        for j in 0..3 {
            let d = diff_multiset(&b, j, 3, 0..=6).unwrap();
            assert_eq!(d.total(), 7);
            let mut expect = vec![0u32; 6];
            for v in b.column(j) {
                expect[v as usize] += 1;
            }
            assert_eq!(d.counts(), expect.as_slice());
        }
    }

    #[test]
    fn rejects_bad_indices() {
        let b = example_b();
        assert_eq!(diff_multiset(&b, 2, 2, 0..=5), Err(ArrayError::InvalidPair(2)));
        assert!(matches!(
            diff_multiset(&b, 0, 4, 0..=5),
            Err(ArrayError::IndexOutOfRange(_))
        ));
        assert!(matches!(
            diff_multiset(&b, 0, 1, 0..=7),
            Err(ArrayError::IndexOutOfRange(_))
        ));
    }

    proptest! {
        #[test]
        fn total_is_range_length(
            n in 2u32..20,
            seed in proptest::collection::vec(0u32..1000, 60),
            lo in 0usize..10,
            len in 0usize..10,
        ) {
            let rows = n as usize;
            let entries: Vec<u32> = seed.iter().take(rows * 3).map(|v| v % n).collect();
            prop_assume!(entries.len() == rows * 3);
            let a = ResidueArray::new(ArrayKind::Dm, Form::Full, n, 0, 3, entries).unwrap();
            let lo = lo.min(rows - 1);
            let hi = (lo + len).min(rows - 1);
            let d = diff_multiset(&a, 0, 2, lo..=hi).unwrap();
            prop_assert_eq!(d.total(), hi - lo + 1);
            prop_assert_eq!(d.counts().iter().sum::<u32>() as usize, hi - lo + 1);
        }
    }
}
