//! The rectangular residue array shared by DM, HDM and DCA.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArrayKind {
    #[serde(rename = "DM")]
    Dm,
    #[serde(rename = "HDM")]
    Hdm,
    #[serde(rename = "DCA")]
    Dca,
}

impl fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArrayKind::Dm => "DM",
            ArrayKind::Hdm => "HDM",
            ArrayKind::Dca => "DCA",
        })
    }
}

/// `Reduced` drops the all-zero last row and last column of a DCA.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Full,
    Reduced,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Full => "full",
            Form::Reduced => "reduced",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("array needs at least one column")]
    NoColumns,
    #[error("{len} entries do not fill rows of width {width}")]
    Ragged { len: usize, width: usize },
    #[error("entry {value} at ({row},{col}) is not a residue mod {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u64,
        order: u32,
    },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("bad hole: {0}")]
    BadHole(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("column pair ({0},{0}) is not a pair of distinct columns")]
    InvalidPair(usize),
    #[error("last row and last column are not all zero")]
    NotNormalized,
    #[error("operation needs a {expected} array, got {actual}")]
    WrongForm { expected: String, actual: String },
}

/// Row-major grid of residues mod `order` plus the metadata that says how to
/// read it.
///
/// `k` is the design's column count. A reduced DCA stores `k - 1` columns and
/// `n` rows; every other array stores all `k` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueArray {
    kind: ArrayKind,
    form: Form,
    order: u32,
    hole: u32,
    k: usize,
    rows: usize,
    entries: Vec<u32>,
}

impl ResidueArray {
    /// Builds an array from row-major entries and checks the structural
    /// invariants for its kind and form. Difference properties are left to
    /// the verifiers.
    pub fn new(
        kind: ArrayKind,
        form: Form,
        order: u32,
        hole: u32,
        k: usize,
        entries: Vec<u32>,
    ) -> Result<Self, ArrayError> {
        if order == 0 {
            return Err(ArrayError::ZeroOrder);
        }
        let width = match form {
            Form::Full => k,
            Form::Reduced => k.saturating_sub(1),
        };
        if width == 0 {
            return Err(ArrayError::NoColumns);
        }
        if entries.len() % width != 0 {
            return Err(ArrayError::Ragged {
                len: entries.len(),
                width,
            });
        }
        let rows = entries.len() / width;
        if let Some(pos) = entries.iter().position(|&v| v >= order) {
            return Err(ArrayError::EntryOutOfRange {
                row: pos / width,
                col: pos % width,
                value: entries[pos] as u64,
                order,
            });
        }
        let n = order as usize;
        match (kind, form) {
            (ArrayKind::Dca, Form::Full) if rows != n + 1 => {
                return Err(ArrayError::BadShape(format!(
                    "full DCA over Z_{n} needs {} rows, got {rows}",
                    n + 1
                )))
            }
            (ArrayKind::Dca, Form::Reduced) if rows != n => {
                return Err(ArrayError::BadShape(format!(
                    "reduced DCA over Z_{n} needs {n} rows, got {rows}"
                )))
            }
            (ArrayKind::Dm | ArrayKind::Hdm, Form::Reduced) => {
                return Err(ArrayError::WrongForm {
                    expected: "full".into(),
                    actual: format!("reduced {kind}"),
                })
            }
            (ArrayKind::Dm, Form::Full) if rows == 0 || rows % n != 0 => {
                return Err(ArrayError::BadShape(format!(
                    "DM over Z_{n} needs a positive multiple of {n} rows, got {rows}"
                )))
            }
            _ => {}
        }
        match kind {
            ArrayKind::Hdm => {
                if hole == 0 || hole >= order || order % hole != 0 {
                    return Err(ArrayError::BadHole(format!(
                        "hole of order {hole} is not a proper subgroup order of Z_{order}"
                    )));
                }
                let free = n - hole as usize;
                if rows == 0 || rows % free != 0 {
                    return Err(ArrayError::BadShape(format!(
                        "HDM({k},{n};{hole}) needs a positive multiple of {free} rows, got {rows}"
                    )));
                }
            }
            _ if hole != 0 => {
                return Err(ArrayError::BadHole(format!("{kind} arrays carry no hole")));
            }
            _ => {}
        }
        Ok(Self {
            kind,
            form,
            order,
            hole,
            k,
            rows,
            entries,
        })
    }

    /// Builds an array from its columns.
    pub fn from_columns(
        kind: ArrayKind,
        form: Form,
        order: u32,
        hole: u32,
        k: usize,
        columns: &[Vec<u32>],
    ) -> Result<Self, ArrayError> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(ArrayError::BadShape("columns differ in length".into()));
        }
        let mut entries = Vec::with_capacity(rows * columns.len());
        for i in 0..rows {
            entries.extend(columns.iter().map(|c| c[i]));
        }
        Self::new(kind, form, order, hole, k, entries)
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn hole(&self) -> u32 {
        self.hole
    }

    /// Design column count.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of stored columns.
    pub fn width(&self) -> usize {
        match self.form {
            Form::Full => self.k,
            Form::Reduced => self.k - 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.width() + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        let w = self.width();
        &self.entries[row * w..(row + 1) * w]
    }

    pub fn column(&self, col: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    /// Rows per group element: `rows / n` for a DM, `rows / (n - h)` for an
    /// HDM. Covering arrays have no fixed index.
    pub fn lambda(&self) -> Option<usize> {
        match self.kind {
            ArrayKind::Dm => Some(self.rows / self.order as usize),
            ArrayKind::Hdm => Some(self.rows / (self.order - self.hole) as usize),
            ArrayKind::Dca => None,
        }
    }

    /// Generator `u = n / h` of the hole subgroup `{0, u, 2u, ...}`.
    pub fn hole_step(&self) -> Option<u32> {
        (self.hole > 0).then(|| self.order / self.hole)
    }

    /// True when the last stored row and last stored column are all zero.
    pub fn is_normalized(&self) -> bool {
        let w = self.width();
        self.row(self.rows - 1).iter().all(|&v| v == 0)
            && (0..self.rows).all(|i| self.get(i, w - 1) == 0)
    }

    /// Same array re-labelled with another kind (shape rules re-checked).
    pub fn with_kind(&self, kind: ArrayKind, hole: u32) -> Result<Self, ArrayError> {
        Self::new(kind, self.form, self.order, hole, self.k, self.entries.clone())
    }

    /// Subtracts each row's last entry from that row, then each column's
    /// last entry from that column. Differences within a row are unchanged
    /// and each column-pair difference multiset is translated by a constant,
    /// so coverage properties survive; afterwards the last row and column are
    /// zero. A reduced DCA is already normalized and comes back unchanged.
    pub fn normalized(&self) -> Self {
        if self.kind == ArrayKind::Dca && self.form == Form::Reduced {
            return self.clone();
        }
        let w = self.width();
        let n = self.order;
        let mut entries = self.entries.clone();
        for row in entries.chunks_mut(w) {
            let last = row[w - 1];
            for v in row.iter_mut() {
                *v = crate::residue::sub_mod(*v, last, n);
            }
        }
        let last_row: Vec<u32> = entries[(self.rows - 1) * w..].to_vec();
        for row in entries.chunks_mut(w) {
            for (v, &s) in row.iter_mut().zip(&last_row) {
                *v = crate::residue::sub_mod(*v, s, n);
            }
        }
        Self {
            entries,
            ..self.clone()
        }
    }

    /// Drops the all-zero last row and column of a full DCA.
    pub fn to_reduced(&self) -> Result<Self, ArrayError> {
        if self.kind != ArrayKind::Dca || self.form != Form::Full {
            return Err(ArrayError::WrongForm {
                expected: "full DCA".into(),
                actual: format!("{} {}", self.form, self.kind),
            });
        }
        if !self.is_normalized() {
            return Err(ArrayError::NotNormalized);
        }
        let w = self.k;
        let entries = self.entries[..(self.rows - 1) * w]
            .chunks(w)
            .flat_map(|r| r[..w - 1].iter().copied())
            .collect();
        Self::new(ArrayKind::Dca, Form::Reduced, self.order, 0, self.k, entries)
    }

    /// Appends an all-zero column and an all-zero row to a reduced DCA.
    pub fn to_full(&self) -> Result<Self, ArrayError> {
        if self.form != Form::Reduced {
            return Err(ArrayError::WrongForm {
                expected: "reduced DCA".into(),
                actual: format!("{} {}", self.form, self.kind),
            });
        }
        let mut entries = Vec::with_capacity((self.rows + 1) * self.k);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.push(0);
        }
        entries.extend(std::iter::repeat(0).take(self.k));
        Self::new(ArrayKind::Dca, Form::Full, self.order, 0, self.k, entries)
    }

    /// Full form of a DCA, whichever form it is stored in.
    pub fn full_dca(&self) -> Result<Self, ArrayError> {
        match self.form {
            Form::Full => Ok(self.clone()),
            Form::Reduced => self.to_full(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_b() -> ResidueArray {
        ResidueArray::from_columns(
            ArrayKind::Dca,
            Form::Full,
            6,
            0,
            4,
            &[
                vec![0, 1, 2, 3, 4, 5, 0],
                vec![1, 3, 5, 0, 2, 4, 0],
                vec![3, 0, 4, 1, 5, 2, 0],
                vec![0; 7],
            ],
        )
        .unwrap()
    }

    #[test]
    fn reduce_b() {
        let b = example_b();
        let r = b.to_reduced().unwrap();
        assert_eq!(r.rows(), 6);
        assert_eq!(r.width(), 3);
        assert_eq!(r.column(0), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(r.column(1), vec![1, 3, 5, 0, 2, 4]);
        assert_eq!(r.column(2), vec![3, 0, 4, 1, 5, 2]);
        assert_eq!(r.to_full().unwrap(), b);
        assert_eq!(r.to_full().unwrap().to_reduced().unwrap(), r);
    }

    #[test]
    fn nonzero_last_column_is_not_normalized() {
        let mut e = example_b().entries().to_vec();
        e[3] = 2;
        let a = ResidueArray::new(ArrayKind::Dca, Form::Full, 6, 0, 4, e).unwrap();
        assert_eq!(a.to_reduced(), Err(ArrayError::NotNormalized));
        assert!(a.normalized().is_normalized());
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            ResidueArray::new(ArrayKind::Dca, Form::Full, 0, 0, 4, vec![]),
            Err(ArrayError::ZeroOrder)
        );
        assert!(matches!(
            ResidueArray::new(ArrayKind::Dm, Form::Full, 3, 0, 2, vec![0, 6, 1, 1, 0, 0]),
            Err(ArrayError::EntryOutOfRange { value: 6, .. })
        ));
        assert!(matches!(
            ResidueArray::new(ArrayKind::Dca, Form::Full, 6, 0, 4, vec![0; 24]),
            Err(ArrayError::BadShape(_))
        ));
        assert!(matches!(
            ResidueArray::new(ArrayKind::Hdm, Form::Full, 10, 3, 4, vec![0; 28]),
            Err(ArrayError::BadHole(_))
        ));
        assert!(matches!(
            ResidueArray::new(ArrayKind::Dm, Form::Reduced, 5, 0, 3, vec![0; 10]),
            Err(ArrayError::WrongForm { .. })
        ));
    }

    #[test]
    fn lambda_and_hole_step() {
        let dm = ResidueArray::new(ArrayKind::Dm, Form::Full, 1, 0, 3, vec![0; 6]).unwrap();
        assert_eq!(dm.lambda(), Some(2));
        let hdm = ResidueArray::new(ArrayKind::Hdm, Form::Full, 10, 2, 2, vec![1; 16]).unwrap();
        assert_eq!(hdm.lambda(), Some(1));
        assert_eq!(hdm.hole_step(), Some(5));
    }
}

#[cfg(test)]
pub(crate) use tests::example_b;
