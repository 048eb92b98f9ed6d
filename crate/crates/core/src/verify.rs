//! Verifiers for difference matrices, holey difference matrices and
//! difference covering arrays.
//!
//! Everything here is plain per-pair counting through
//! [`diff_multiset`](crate::diff::diff_multiset); no construction formula is
//! reused, so the verifiers serve as the oracle for every constructor and
//! search in the crate.
//!
//! Column pairs are visited as `(j, j')` with `j > j'` in lexicographic order
//! (`(1,0), (2,0), (2,1), (3,0), ...`) and the difference is
//! `q(i,j) - q(i,j')`. The first failing pair and residue become the witness.

use serde::Serialize;
use thiserror::Error;

use crate::array::{ArrayError, ArrayKind, ResidueArray};
use crate::diff::{diff_multiset, DiffMultiset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("bad hole: {0}")]
    BadHole(String),
    #[error("strict verification needs an even order (got n={0}); odd orders cannot satisfy P1 and P2")]
    OddOrderStrict(u32),
    #[error("expected a {expected} array, got {actual}")]
    WrongKind { expected: ArrayKind, actual: ArrayKind },
    #[error(transparent)]
    Array(#[from] ArrayError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// What went wrong, located as precisely as the check allows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn pair_count(pair: (usize, usize), residue: u32, expected: u32, actual: u32) -> Self {
        Self {
            pair: Some(pair),
            residue: Some(residue),
            expected: Some(expected),
            actual: Some(actual),
            ..Self::default()
        }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if let Some((a, b)) = self.pair {
            parts.push(format!("pair=({a},{b})"));
        }
        if let Some(c) = self.column {
            parts.push(format!("column={c}"));
        }
        if let Some(r) = self.row {
            parts.push(format!("row={r}"));
        }
        if let Some(d) = self.residue {
            parts.push(format!("d={d}"));
        }
        if let Some(e) = self.expected {
            parts.push(format!("expected={e}"));
        }
        if let Some(a) = self.actual {
            parts.push(format!("actual={a}"));
        }
        if let Some(n) = &self.note {
            parts.push(n.clone());
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: &str, witness: Option<Witness>) -> Self {
        Self {
            name: name.to_string(),
            pass: witness.is_none(),
            witness,
        }
    }
}

/// Outcome of a verification: pass iff every check passes; `witness` is the
/// witness of the first failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
}

impl VerificationReport {
    pub fn from_checks(checks: Vec<Check>) -> Self {
        let witness = checks.iter().find(|c| !c.pass).and_then(|c| c.witness.clone());
        let verdict = if checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            verdict,
            checks,
            witness,
            lambda: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    /// One line per check, `PASS`/`FAIL` then the name and witness.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "verdict={}",
            if self.passed() { "pass" } else { "fail" }
        );
        if let Some(l) = self.lambda {
            s.push_str(&format!(" lambda={l}"));
        }
        s.push('\n');
        for c in &self.checks {
            s.push_str(if c.pass { "PASS " } else { "FAIL " });
            s.push_str(&c.name);
            if let Some(w) = &c.witness {
                s.push_str(&format!(" [{w}]"));
            }
            s.push('\n');
        }
        s
    }
}

/// Column pairs `(j, j')`, `j > j'`, in witness order.
pub fn column_pairs(width: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..width).flat_map(|j| (0..j).map(move |j2| (j, j2)))
}

fn pair_diffs(
    a: &ResidueArray,
    (j, j2): (usize, usize),
    last_row: usize,
) -> Result<DiffMultiset, VerifyError> {
    Ok(diff_multiset(a, j, j2, 0..=last_row)?)
}

/// First residue whose count exceeds `expected(d)`, otherwise the first one
/// falling short.
fn exact_count_witness(
    pair: (usize, usize),
    diffs: &DiffMultiset,
    expected: impl Fn(u32) -> u32,
) -> Option<Witness> {
    let n = diffs.modulus();
    (0..n)
        .find(|&d| diffs.count(d) > expected(d))
        .or_else(|| (0..n).find(|&d| diffs.count(d) < expected(d)))
        .map(|d| Witness::pair_count(pair, d, expected(d), diffs.count(d)))
}

/// Every column pair's differences hit each residue exactly `λ = rows/n`
/// times.
pub fn verify_dm(a: &ResidueArray) -> Result<VerificationReport, VerifyError> {
    let n = a.order() as usize;
    if a.rows() == 0 || a.rows() % n != 0 {
        return Err(VerifyError::BadShape(format!(
            "{} rows is not a positive multiple of n={n}",
            a.rows()
        )));
    }
    let lambda = (a.rows() / n) as u32;
    let mut witness = None;
    for pair in column_pairs(a.width()) {
        let diffs = pair_diffs(a, pair, a.rows() - 1)?;
        witness = exact_count_witness(pair, &diffs, |_| lambda);
        if witness.is_some() {
            break;
        }
    }
    let mut report = VerificationReport::from_checks(vec![Check::new("dm_differences", witness)]);
    report.lambda = Some(lambda as usize);
    Ok(report)
}

/// Every column pair's differences hit each element of `G \ H` exactly `λ`
/// times and no element of the hole `H = {0, u, 2u, ...}`, `u = n/h`.
///
/// Two consequences for the row-normalized array (last column zero) are
/// reported separately: no row holds two zeros, and hole elements never
/// appear outside the last column.
pub fn verify_hdm(a: &ResidueArray) -> Result<VerificationReport, VerifyError> {
    let n = a.order();
    let h = a.hole();
    if h == 0 || h >= n || n % h != 0 {
        return Err(VerifyError::BadHole(format!(
            "h={h} is not a proper divisor of n={n}"
        )));
    }
    let free = (n - h) as usize;
    if a.rows() == 0 || a.rows() % free != 0 {
        return Err(VerifyError::BadShape(format!(
            "{} rows is not a positive multiple of n-h={free}",
            a.rows()
        )));
    }
    let u = n / h;
    let lambda = (a.rows() / free) as u32;
    let in_hole = |d: u32| d % u == 0;

    let mut diff_witness = None;
    for pair in column_pairs(a.width()) {
        let diffs = pair_diffs(a, pair, a.rows() - 1)?;
        diff_witness =
            exact_count_witness(pair, &diffs, |d| if in_hole(d) { 0 } else { lambda });
        if diff_witness.is_some() {
            break;
        }
    }

    let w = a.width();
    let shifted: Vec<Vec<u32>> = (0..a.rows())
        .map(|i| {
            let last = a.get(i, w - 1);
            a.row(i)
                .iter()
                .map(|&v| crate::residue::sub_mod(v, last, n))
                .collect()
        })
        .collect();
    let zero_witness = shifted.iter().enumerate().find_map(|(i, row)| {
        let zeros = row.iter().filter(|&&v| v == 0).count() as u32;
        (zeros > 1).then(|| Witness {
            row: Some(i),
            residue: Some(0),
            expected: Some(1),
            actual: Some(zeros),
            ..Witness::default()
        })
    });
    let hole_witness = shifted.iter().enumerate().find_map(|(i, row)| {
        row[..w - 1].iter().position(|&v| in_hole(v)).map(|j| Witness {
            row: Some(i),
            column: Some(j),
            residue: Some(row[j]),
            note: Some("hole element outside the last column".into()),
            ..Witness::default()
        })
    });

    let mut report = VerificationReport::from_checks(vec![
        Check::new("hdm_differences", diff_witness),
        Check::new("no_row_with_two_zeros", zero_witness),
        Check::new("hole_entries_absent", hole_witness),
    ]);
    report.lambda = Some(lambda as usize);
    Ok(report)
}

/// Coverage: every column pair's differences over all rows contain every
/// residue at least once.
///
/// With `strict`, also checks on the normalized full form (last row and last
/// column shifted to zero):
///
/// - `p1_zero_twice`: 0 occurs at least twice in every column;
/// - `p2_profile`: for pairs not involving the last column, the differences
///   over rows `0..n-1` are `Z_n \ {0}` plus one repeat;
/// - `repeated_difference_is_half`: that repeat is `n/2`.
///
/// Reduced input is read as rows `0..n-1` of its full form.
pub fn verify_dca(a: &ResidueArray, strict: bool) -> Result<VerificationReport, VerifyError> {
    if a.kind() != ArrayKind::Dca {
        return Err(VerifyError::WrongKind {
            expected: ArrayKind::Dca,
            actual: a.kind(),
        });
    }
    let full = a.full_dca()?;
    let n = full.order();
    if strict && n % 2 == 1 {
        return Err(VerifyError::OddOrderStrict(n));
    }
    let k = full.width();

    let mut cover_witness = None;
    for pair in column_pairs(k) {
        let diffs = pair_diffs(&full, pair, full.rows() - 1)?;
        let missing = diffs.missing().next();
        if let Some(d) = missing {
            cover_witness = Some(Witness::pair_count(pair, d, 1, 0));
            break;
        }
    }
    let mut checks = vec![Check::new("coverage", cover_witness)];
    if !strict {
        return Ok(VerificationReport::from_checks(checks));
    }

    let norm = full.normalized();
    let p1 = (0..k).find_map(|j| {
        let zeros = (0..norm.rows()).filter(|&i| norm.get(i, j) == 0).count() as u32;
        (zeros < 2).then(|| Witness {
            column: Some(j),
            residue: Some(0),
            expected: Some(2),
            actual: Some(zeros),
            ..Witness::default()
        })
    });
    checks.push(Check::new("p1_zero_twice", p1));

    let half = n / 2;
    let mut p2 = None;
    let mut half_witness = None;
    for pair in column_pairs(k - 1) {
        let diffs = pair_diffs(&norm, pair, n as usize - 1)?;
        let missing = diffs.missing().find(|&d| d != 0);
        if diffs.count(0) > 0 {
            p2 = Some(Witness::pair_count(pair, 0, 0, diffs.count(0)));
        } else if let Some(d) = missing {
            p2 = Some(Witness::pair_count(pair, d, 1, 0));
        }
        if p2.is_some() {
            break;
        }
        if half_witness.is_none() {
            half_witness = diffs
                .repeated()
                .find(|&d| d != half)
                .map(|d| Witness::pair_count(pair, d, 1, diffs.count(d)));
        }
    }
    // The half check is only meaningful once every off-pair has the P2 shape.
    if p2.is_some() {
        half_witness = None;
    }
    checks.push(Check::new("p2_profile", p2));
    checks.push(Check::new("repeated_difference_is_half", half_witness));
    Ok(VerificationReport::from_checks(checks))
}

/// Column-count bound for cyclic DCA(k+1, 2p+1; 2p) with P1 and P2: `k` may
/// not exceed `p + 1`, and with `p_even` set and `p` even the bound is
/// strict. Returns `true` when the parameters are not excluded.
pub fn check_column_bound(k: usize, p: usize, p_even: bool) -> bool {
    if p < 2 {
        return false;
    }
    if p_even && p % 2 == 0 {
        k < p + 1
    } else {
        k <= p + 1
    }
}

/// Dispatches on the array's kind. `strict` only affects DCAs.
pub fn verify_any(a: &ResidueArray, strict: bool) -> Result<VerificationReport, VerifyError> {
    match a.kind() {
        ArrayKind::Dm => verify_dm(a),
        ArrayKind::Hdm => verify_hdm(a),
        ArrayKind::Dca => verify_dca(a, strict),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{example_b, Form};

    fn b_as_dm() -> ResidueArray {
        let b = example_b();
        ResidueArray::new(ArrayKind::Dm, Form::Full, 6, 0, 4, b.entries()[..24].to_vec()).unwrap()
    }

    #[test]
    fn b_is_not_a_dm() {
        let r = verify_dm(&b_as_dm()).unwrap();
        assert!(!r.passed());
        assert_eq!(r.lambda, Some(1));
        assert_eq!(r.witness, Some(Witness::pair_count((1, 0), 3, 1, 2)));
    }

    #[test]
    fn dm_shape_errors() {
        let b = example_b();
        assert!(matches!(verify_dm(&b), Err(VerifyError::BadShape(_))));
    }

    #[test]
    fn trivial_group_dm() {
        let a = ResidueArray::new(ArrayKind::Dm, Form::Full, 1, 0, 5, vec![0; 5]).unwrap();
        let r = verify_dm(&a).unwrap();
        assert!(r.passed());
        assert_eq!(r.lambda, Some(1));
    }

    #[test]
    fn b_strict_passes() {
        let r = verify_dca(&example_b(), true).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let reduced = example_b().to_reduced().unwrap();
        assert!(verify_dca(&reduced, true).unwrap().passed());
    }

    #[test]
    fn coverage_mutation_witness() {
        let mut e = example_b().entries().to_vec();
        e[1] = 2; // row 0, column 1: 1 -> 2
        let a = ResidueArray::new(ArrayKind::Dca, Form::Full, 6, 0, 4, e).unwrap();
        let r = verify_dca(&a, true).unwrap();
        assert!(!r.passed());
        let c = r.check("coverage").unwrap();
        assert_eq!(c.witness, Some(Witness::pair_count((1, 0), 1, 1, 0)));
        assert_eq!(r.witness, c.witness);
        assert!(!verify_dca(&a, false).unwrap().passed());
    }

    #[test]
    fn odd_order_strict_is_an_error() {
        let a = ResidueArray::new(ArrayKind::Dca, Form::Full, 3, 0, 2, vec![0, 0, 1, 0, 2, 0, 0, 0])
            .unwrap();
        assert_eq!(verify_dca(&a, true), Err(VerifyError::OddOrderStrict(3)));
        // Coverage alone is fine for odd orders.
        assert!(verify_dca(&a, false).unwrap().passed());
    }

    #[test]
    fn unnormalized_input_is_accepted() {
        // Add a constant to a column and to a row: still the same design.
        let b = example_b();
        let mut e = b.entries().to_vec();
        for i in 0..7 {
            e[i * 4 + 2] = (e[i * 4 + 2] + 4) % 6;
        }
        for v in &mut e[8..12] {
            *v = (*v + 1) % 6;
        }
        let a = ResidueArray::new(ArrayKind::Dca, Form::Full, 6, 0, 4, e).unwrap();
        assert!(!a.is_normalized());
        assert!(verify_dca(&a, true).unwrap().passed());
    }

    #[test]
    fn hdm_hole_difference_is_named() {
        // Two rows over Z_4 with hole {0,2}: differences must be {1,3}.
        let good = ResidueArray::new(ArrayKind::Hdm, Form::Full, 4, 2, 2, vec![1, 0, 3, 0]).unwrap();
        assert!(verify_hdm(&good).unwrap().passed());
        let bad = ResidueArray::new(ArrayKind::Hdm, Form::Full, 4, 2, 2, vec![2, 0, 3, 0]).unwrap();
        let r = verify_hdm(&bad).unwrap();
        assert!(!r.passed());
        assert_eq!(
            r.check("hdm_differences").unwrap().witness,
            Some(Witness::pair_count((1, 0), 2, 0, 1))
        );
        assert!(!r.check("hole_entries_absent").unwrap().pass);
    }

    #[test]
    fn hdm_bad_hole() {
        let a = ResidueArray::new(ArrayKind::Dca, Form::Full, 6, 0, 4, example_b().entries().to_vec())
            .unwrap();
        assert!(matches!(verify_hdm(&a), Err(VerifyError::BadHole(_))));
    }

    #[test]
    fn column_bound() {
        assert!(check_column_bound(4, 3, false));
        assert!(!check_column_bound(5, 3, false));
        assert!(check_column_bound(4, 4, true));
        assert!(!check_column_bound(5, 4, true));
        assert!(check_column_bound(5, 4, false));
        assert!(!check_column_bound(2, 1, false));
    }

    #[test]
    fn report_json_shape() {
        let r = verify_dca(&example_b(), true).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["checks"].as_array().unwrap().len(), 4);
        assert!(v["checks"][0]["witness"].is_null());
    }
}
