//! Tabulated arrays for the small orders found by computer search.

use crate::array::{ArrayKind, Form, ResidueArray};

use super::ConstructError;

/// Orders with a stored third column.
pub const TABLE_ORDERS: [u32; 9] = [6, 24, 28, 32, 36, 44, 48, 52, 54];

const COL_24: [u32; 24] = [
    2, 0, 3, 1, 14, 21, 20, 19, 23, 15, 6, 18, 16, 10, 17, 8, 11, 22, 5, 13, 4, 9, 7, 12,
];
const COL_28: [u32; 28] = [
    2, 0, 3, 1, 11, 16, 22, 25, 20, 23, 4, 8, 21, 5, 18, 10, 19, 13, 24, 27, 7, 26, 15, 9, 6, 14,
    17, 12,
];
const COL_32: [u32; 32] = [
    2, 0, 3, 6, 1, 13, 22, 30, 21, 25, 28, 26, 7, 5, 23, 20, 12, 10, 24, 17, 31, 15, 29, 27, 11,
    14, 4, 9, 8, 19, 18, 16,
];
const COL_36: [u32; 36] = [
    5, 35, 13, 20, 11, 9, 1, 31, 10, 2, 30, 33, 4, 34, 32, 25, 28, 16, 27, 22, 3, 29, 19, 24, 18,
    15, 6, 23, 17, 7, 0, 8, 14, 12, 21, 26,
];
const COL_44: [u32; 44] = [
    39, 13, 26, 21, 35, 3, 17, 16, 40, 28, 38, 25, 6, 10, 34, 5, 18, 30, 43, 15, 19, 36, 7, 24,
    32, 14, 4, 0, 31, 12, 2, 9, 23, 37, 11, 42, 41, 29, 20, 1, 33, 27, 8, 22,
];
const COL_48: [u32; 48] = [
    5, 41, 23, 40, 1, 39, 34, 25, 28, 8, 4, 9, 21, 30, 43, 18, 12, 2, 42, 45, 32, 37, 33, 0, 26,
    15, 13, 22, 10, 35, 44, 7, 36, 16, 27, 19, 46, 38, 3, 47, 31, 29, 17, 14, 11, 24, 20, 6,
];
const COL_52: [u32; 52] = [
    18, 12, 50, 37, 16, 6, 45, 4, 31, 34, 47, 21, 29, 2, 5, 22, 38, 3, 39, 27, 0, 15, 51, 7, 28,
    24, 42, 40, 48, 32, 9, 26, 20, 11, 1, 41, 19, 35, 43, 13, 49, 33, 14, 17, 46, 8, 36, 23, 10,
    30, 25, 44,
];
const COL_54: [u32; 54] = [
    6, 5, 31, 27, 20, 38, 19, 4, 30, 51, 3, 52, 49, 14, 48, 23, 41, 12, 25, 0, 32, 40, 21, 50, 9,
    45, 16, 1, 46, 11, 28, 42, 47, 35, 39, 2, 22, 13, 34, 33, 24, 44, 15, 53, 7, 17, 37, 36, 26,
    18, 10, 43, 29, 8,
];

/// Stored third column for a searched order.
pub fn table_third_column(order: u32) -> Option<&'static [u32]> {
    Some(match order {
        6 => &[3, 0, 4, 1, 5, 2],
        24 => &COL_24,
        28 => &COL_28,
        32 => &COL_32,
        36 => &COL_36,
        44 => &COL_44,
        48 => &COL_48,
        52 => &COL_52,
        54 => &COL_54,
        _ => return None,
    })
}

/// `[1, 3, ..., n-1, 0, 2, ..., n-2]`: the odd residues, then the even ones
/// starting from 0. Paired with the identity column its differences are
/// `1..=n/2` followed by `n/2..n-1`.
pub fn odd_even_column(n: u32) -> Vec<u32> {
    (0..n)
        .map(|i| if i < n / 2 { 2 * i + 1 } else { 2 * (i - n / 2) })
        .collect()
}

/// Reduced DCA(4, n+1; n) from the stored tables.
pub fn construct_from_table(order: u32) -> Result<ResidueArray, ConstructError> {
    let third = table_third_column(order).ok_or(ConstructError::UnknownOrder(order))?;
    let cols = [(0..order).collect(), odd_even_column(order), third.to_vec()];
    Ok(ResidueArray::from_columns(ArrayKind::Dca, Form::Reduced, order, 0, 4, &cols)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_dca;

    #[test]
    fn order_six_is_b() {
        let a = construct_from_table(6).unwrap();
        assert_eq!(a.column(1), vec![1, 3, 5, 0, 2, 4]);
        assert_eq!(a.to_full().unwrap(), crate::array::example_b());
    }

    #[test]
    fn stored_columns_are_permutations() {
        for &n in &TABLE_ORDERS {
            let mut c = table_third_column(n).unwrap().to_vec();
            assert_eq!(c.len(), n as usize);
            c.sort_unstable();
            assert_eq!(c, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn table_ends() {
        let a = construct_from_table(24).unwrap();
        assert_eq!(&a.column(2)[..6], &[2, 0, 3, 1, 14, 21]);
        let a = construct_from_table(54).unwrap();
        assert_eq!(&a.column(2)[50..], &[10, 43, 29, 8]);
        assert_eq!(construct_from_table(26), Err(ConstructError::UnknownOrder(26)));
    }

    #[test]
    fn all_tables_strict() {
        for &n in &TABLE_ORDERS {
            let r = verify_dca(&construct_from_table(n).unwrap(), true).unwrap();
            assert!(r.passed(), "order {n}: {}", r.to_text());
        }
    }
}
