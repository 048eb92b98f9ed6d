//! Latin squares derived from reduced DCAs.
//!
//! Column `s` of a reduced DCA gives the square `L_s(i,j) = q(i,s) + j`.
//! Two such squares superimpose to every ordered pair of symbols once,
//! except that the diagonal is missing and the pairs `(x, x+n/2)` appear
//! twice; that is what "nearly orthogonal" means here.

use serde::Serialize;
use thiserror::Error;

use crate::array::{ArrayError, Form, ResidueArray};
use crate::format::{content_lines, header_fields, parse_row, write_rows, FormatError};
use crate::residue::sub_mod;
use crate::verify::{Check, VerificationReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("grid has {len} cells, expected {order}x{order}")]
    BadSize { len: usize, order: u32 },
    #[error("not a Latin square: symbol {symbol} repeats in {line} {index}")]
    NotLatin { line: &'static str, index: usize, symbol: u32 },
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("need an even order, got {0}")]
    OddOrder(u32),
    #[error("bad ordering: {0}")]
    BadOrdering(String),
    #[error("need at least two squares")]
    TooFewSquares,
    #[error(transparent)]
    Array(#[from] ArrayError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    order: u32,
    grid: Vec<u32>,
}

impl LatinSquare {
    /// Validates that every row and column is a permutation of `Z_n`.
    pub fn new(order: u32, grid: Vec<u32>) -> Result<Self, LatinError> {
        if order == 0 {
            return Err(LatinError::ZeroOrder);
        }
        let n = order as usize;
        if grid.len() != n * n {
            return Err(LatinError::BadSize { len: grid.len(), order });
        }
        let sq = Self { order, grid };
        sq.check_latin()?;
        Ok(sq)
    }

    fn check_latin(&self) -> Result<(), LatinError> {
        let n = self.order as usize;
        for (line, by_row) in [("row", true), ("column", false)] {
            for a in 0..n {
                let mut seen = vec![false; n];
                for b in 0..n {
                    let v = if by_row { self.get(a, b) } else { self.get(b, a) };
                    if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
                        return Err(LatinError::NotLatin { line, index: a, symbol: v });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.grid[i * self.order as usize + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let n = self.order as usize;
        &self.grid[i * n..(i + 1) * n]
    }

    /// The square with its columns permuted: new column `j` is old column
    /// `ordering[j]`.
    pub fn reorder_columns(&self, ordering: &[usize]) -> Result<Self, LatinError> {
        check_ordering(ordering, self.order)?;
        let n = self.order as usize;
        let mut grid = Vec::with_capacity(n * n);
        for i in 0..n {
            grid.extend(ordering.iter().map(|&j| self.get(i, j)));
        }
        Ok(Self { order: self.order, grid })
    }
}

/// `L_s(i,j) = q(i,s) + j mod n` from a reduced DCA (a normalized full one is
/// reduced first).
pub fn latin_from_dca(dca: &ResidueArray, s: usize) -> Result<LatinSquare, LatinError> {
    let reduced = match dca.form() {
        Form::Reduced => dca.clone(),
        Form::Full => dca.to_reduced()?,
    };
    if s >= reduced.width() {
        return Err(LatinError::IndexOutOfRange(format!(
            "column {s} of a {}-column reduced array",
            reduced.width()
        )));
    }
    let n = reduced.order();
    let mut grid = Vec::with_capacity((n as usize).pow(2));
    for i in 0..n as usize {
        let q = reduced.get(i, s);
        grid.extend((0..n).map(|j| (q + j) % n));
    }
    LatinSquare::new(n, grid)
}

/// All squares `L_0, ..., L_{k-2}` of a DCA.
pub fn latin_squares_from_dca(dca: &ResidueArray) -> Result<Vec<LatinSquare>, LatinError> {
    let w = match dca.form() {
        Form::Reduced => dca.width(),
        Form::Full => dca.width() - 1,
    };
    (0..w).map(|s| latin_from_dca(dca, s)).collect()
}

/// Multiplicities of the superimposed pairs `(A(i,j), B(i,j))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProfile {
    order: u32,
    counts: Vec<u32>,
}

impl PairProfile {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn count(&self, a: u32, b: u32) -> u32 {
        self.counts[(a * self.order + b) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Diagonal empty, `(x, x+n/2)` twice, every other pair once.
    pub fn is_half_shift_profile(&self) -> bool {
        let n = self.order;
        if n % 2 != 0 {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| {
                let want = match sub_mod(b, a, n) {
                    0 => 0,
                    d if d == n / 2 => 2,
                    _ => 1,
                };
                self.count(a, b) == want
            })
        })
    }
}

pub fn superimpose(a: &LatinSquare, b: &LatinSquare) -> Result<PairProfile, LatinError> {
    if a.order != b.order {
        return Err(LatinError::OrderMismatch(a.order, b.order));
    }
    let n = a.order;
    let mut counts = vec![0u32; (n as usize).pow(2)];
    for (&x, &y) in a.grid.iter().zip(&b.grid) {
        counts[(x * n + y) as usize] += 1;
    }
    Ok(PairProfile { order: n, counts })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orthogonality {
    Orthogonal,
    NearlyOrthogonal,
    PseudoOrthogonal,
    None,
}

impl Orthogonality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Orthogonality::Orthogonal => "orthogonal",
            Orthogonality::NearlyOrthogonal => "nearly-orthogonal",
            Orthogonality::PseudoOrthogonal => "pseudo-orthogonal",
            Orthogonality::None => "none",
        }
    }
}

/// Strongest relation that holds; nearly orthogonal implies pseudo-orthogonal.
pub fn classify_profile(p: &PairProfile) -> Orthogonality {
    let n = p.order;
    if p.counts.iter().all(|&c| c == 1) {
        return Orthogonality::Orthogonal;
    }
    let pseudo = (0..n).all(|a| {
        let (mut zeros, mut twos) = (0, 0);
        for b in 0..n {
            match p.count(a, b) {
                0 => zeros += 1,
                1 => {}
                2 => twos += 1,
                _ => return false,
            }
        }
        zeros == 1 && twos == 1
    });
    if !pseudo {
        Orthogonality::None
    } else if (0..n).all(|a| p.count(a, a) == 0) {
        Orthogonality::NearlyOrthogonal
    } else {
        Orthogonality::PseudoOrthogonal
    }
}

pub fn classify_pair(a: &LatinSquare, b: &LatinSquare) -> Result<Orthogonality, LatinError> {
    Ok(classify_profile(&superimpose(a, b)?))
}

/// One check per unordered pair `(s, t)`, `s < t`; passes iff every pair is
/// nearly orthogonal.
pub fn mnols_set_check(squares: &[LatinSquare]) -> Result<VerificationReport, LatinError> {
    if squares.len() < 2 {
        return Err(LatinError::TooFewSquares);
    }
    let mut checks = Vec::new();
    for t in 1..squares.len() {
        for s in 0..t {
            let class = classify_pair(&squares[s], &squares[t])?;
            let witness = (class != Orthogonality::NearlyOrthogonal).then(|| Witness {
                pair: Some((s, t)),
                note: Some(format!("classified as {}", class.as_str())),
                ..Witness::default()
            });
            checks.push(Check::new(&format!("nearly_orthogonal({s},{t})"), witness));
        }
    }
    Ok(VerificationReport::from_checks(checks))
}

/// `0, 1, n-1, 2, n-2, ..., n/2`.
pub fn williams_order(n: u32) -> Result<Vec<usize>, LatinError> {
    if n == 0 || n % 2 != 0 {
        return Err(LatinError::OddOrder(n));
    }
    let n = n as usize;
    let mut out = Vec::with_capacity(n);
    out.push(0);
    for t in 1..=n / 2 {
        out.push(t);
        if t != n - t {
            out.push(n - t);
        }
    }
    Ok(out)
}

/// Whether the successive differences of `ordering` are `Z_n \ {0}`, each
/// once.
pub fn differences_cover(ordering: &[usize], n: u32) -> bool {
    let mut seen = vec![false; n as usize];
    seen[0] = true;
    for w in ordering.windows(2) {
        let d = sub_mod(w[1] as u32 % n, w[0] as u32 % n, n) as usize;
        if std::mem::replace(&mut seen[d], true) {
            return false;
        }
    }
    seen.iter().all(|&s| s) && ordering.len() == n as usize
}

fn check_ordering(ordering: &[usize], n: u32) -> Result<(), LatinError> {
    if ordering.len() != n as usize {
        return Err(LatinError::BadOrdering(format!(
            "{} positions for order {n}",
            ordering.len()
        )));
    }
    let mut seen = vec![false; n as usize];
    for &j in ordering {
        if j >= n as usize || std::mem::replace(&mut seen[j], true) {
            return Err(LatinError::BadOrdering(format!("{j} is repeated or out of range")));
        }
    }
    Ok(())
}

/// Counts the horizontally adjacent pairs after reordering the columns; passes
/// iff each ordered pair of distinct symbols appears exactly once.
pub fn check_row_complete(
    l: &LatinSquare,
    ordering: Option<&[usize]>,
) -> Result<VerificationReport, LatinError> {
    let n = l.order as usize;
    let identity: Vec<usize> = (0..n).collect();
    let ordering = ordering.unwrap_or(&identity);
    check_ordering(ordering, l.order)?;
    let mut counts = vec![0u32; n * n];
    for i in 0..n {
        for w in ordering.windows(2) {
            counts[l.get(i, w[0]) as usize * n + l.get(i, w[1]) as usize] += 1;
        }
    }
    let witness = (0..n * n)
        .find(|&p| counts[p] != u32::from(p / n != p % n))
        .map(|p| Witness {
            expected: Some(u32::from(p / n != p % n)),
            actual: Some(counts[p]),
            note: Some(format!("adjacent pair ({},{})", p / n, p % n)),
            ..Witness::default()
        });
    Ok(VerificationReport::from_checks(vec![Check::new("row_complete", witness)]))
}

/// Text form: header `kind=LS n=<order>`, then one row per line.
pub fn write_latin(l: &LatinSquare) -> String {
    let mut out = format!("kind=LS n={}\n", l.order);
    write_rows(&mut out, (0..l.order as usize).map(|i| l.row(i)));
    out
}

pub fn read_latin(text: &str) -> Result<LatinSquare, FormatError> {
    let perr = |line, msg: String| FormatError::Parse { line, msg };
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header".into()))?;
    let mut order = None;
    for (key, value) in header_fields(hl, header)? {
        match (key, value) {
            ("kind", "LS") => {}
            ("kind", other) => return Err(perr(hl, format!("expected kind=LS, got `{other}`"))),
            ("n", v) => {
                order = Some(v.parse::<u32>().map_err(|_| perr(hl, format!("bad order `{v}`")))?)
            }
            (other, _) => return Err(perr(hl, format!("unknown header field `{other}`"))),
        }
    }
    let n = order.ok_or_else(|| perr(hl, "header lacks `n=`".into()))?;
    let mut grid = Vec::new();
    let mut last = hl;
    for (ln, line) in lines {
        grid.extend(parse_row(ln, line, n as usize)?);
        last = ln;
    }
    LatinSquare::new(n, grid).map_err(|e| perr(last, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::example_b;
    use proptest::prelude::*;

    fn b_squares() -> Vec<LatinSquare> {
        latin_squares_from_dca(&example_b()).unwrap()
    }

    #[test]
    fn squares_of_b() {
        let sq = b_squares();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq[0].get(2, 3), 5);
        assert_eq!(sq[2].row(0), &[3, 4, 5, 0, 1, 2]);
        assert!(matches!(latin_from_dca(&example_b(), 3), Err(LatinError::IndexOutOfRange(_))));
    }

    #[test]
    fn rejects_non_latin() {
        assert!(matches!(
            LatinSquare::new(2, vec![0, 1, 0, 1]),
            Err(LatinError::NotLatin { line: "column", .. })
        ));
        assert!(LatinSquare::new(2, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn superimpose_profiles() {
        let sq = b_squares();
        let same = superimpose(&sq[0], &sq[0]).unwrap();
        assert!((0..6).all(|x| same.count(x, x) == 6));
        assert_eq!(classify_profile(&same), Orthogonality::None);

        let p = superimpose(&sq[0], &sq[1]).unwrap();
        assert_eq!(p.total(), 36);
        assert!(p.is_half_shift_profile());
        assert_eq!(p.count(1, 4), 2);
        assert_eq!(classify_profile(&p), Orthogonality::NearlyOrthogonal);

        let eight = latin_from_dca(&crate::construct::construct_4m(0).unwrap(), 0).unwrap();
        assert_eq!(superimpose(&sq[0], &eight), Err(LatinError::OrderMismatch(6, 8)));
    }

    #[test]
    fn orthogonal_and_pseudo() {
        let cayley = |mult: u32| {
            LatinSquare::new(5, (0..5).flat_map(|i| (0..5).map(move |j| (i + mult * j) % 5)).collect())
                .unwrap()
        };
        assert_eq!(classify_pair(&cayley(1), &cayley(2)).unwrap(), Orthogonality::Orthogonal);

        // Pairs (x, x+4) doubled and (x, x) once: pseudo but not nearly.
        let sq = b_squares();
        let shifted = LatinSquare::new(
            6,
            (0..6).flat_map(|i| (0..6).map(move |j| (sq_b1(i) + j + 1) % 6)).collect(),
        )
        .unwrap();
        assert_eq!(classify_pair(&sq[0], &shifted).unwrap(), Orthogonality::PseudoOrthogonal);
    }

    fn sq_b1(i: u32) -> u32 {
        [1, 3, 5, 0, 2, 4][i as usize]
    }

    #[test]
    fn mnols_of_b() {
        let sq = b_squares();
        let r = mnols_set_check(&sq).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks.len(), 3);
        let r = mnols_set_check(&[sq[0].clone(), sq[0].clone()]).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witness.unwrap().pair, Some((0, 1)));
        assert_eq!(mnols_set_check(&sq[..1]), Err(LatinError::TooFewSquares));
    }

    #[test]
    fn williams() {
        assert_eq!(williams_order(6).unwrap(), vec![0, 1, 5, 2, 4, 3]);
        assert_eq!(williams_order(2).unwrap(), vec![0, 1]);
        assert_eq!(williams_order(5), Err(LatinError::OddOrder(5)));
        for n in (2..=400).step_by(2) {
            assert!(differences_cover(&williams_order(n).unwrap(), n), "n={n}");
        }
    }

    #[test]
    fn row_completeness() {
        let sq = b_squares();
        let w = williams_order(6).unwrap();
        for l in &sq {
            assert!(check_row_complete(l, Some(&w)).unwrap().passed());
        }
        let r = check_row_complete(&sq[0], None).unwrap();
        assert!(!r.passed());
        assert!(matches!(
            check_row_complete(&sq[0], Some(&[0, 1, 2, 3, 4, 4])),
            Err(LatinError::BadOrdering(_))
        ));
        let re = sq[0].reorder_columns(&w).unwrap();
        assert!(check_row_complete(&re, None).unwrap().passed());
    }

    #[test]
    fn text_round_trip() {
        let l = &b_squares()[2];
        let text = write_latin(l);
        assert!(text.starts_with("kind=LS n=6\n3 4 5 0 1 2\n"));
        assert_eq!(&read_latin(&text).unwrap(), l);
        assert!(read_latin("kind=LS n=2\n0 1\n0 1\n").is_err());
        assert!(read_latin("kind=DCA n=2\n0 1\n1 0\n").is_err());
    }

    fn cyclic_square(offsets: &[u32]) -> LatinSquare {
        let n = offsets.len() as u32;
        LatinSquare::new(n, offsets.iter().flat_map(|&q| (0..n).map(move |j| (q + j) % n)).collect())
            .unwrap()
    }

    fn perm_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn row_complete_iff_differences_cover(
            (offsets, sigma) in (1usize..=6)
                .prop_map(|h| 2 * h)
                .prop_flat_map(|n| (perm_of(n), perm_of(n)))
        ) {
            let n = offsets.len() as u32;
            let offsets: Vec<u32> = offsets.into_iter().map(|x| x as u32).collect();
            let l = cyclic_square(&offsets);
            let direct = check_row_complete(&l, Some(&sigma)).unwrap().passed();
            prop_assert_eq!(direct, differences_cover(&sigma, n));
        }

        #[test]
        fn profile_total_is_n_squared(
            (a, b) in (1usize..=8).prop_flat_map(|n| (perm_of(n), perm_of(n)))
        ) {
            let a: Vec<u32> = a.into_iter().map(|x| x as u32).collect();
            let b: Vec<u32> = b.into_iter().map(|x| x as u32).collect();
            let p = superimpose(&cyclic_square(&a), &cyclic_square(&b)).unwrap();
            prop_assert_eq!(p.total(), (a.len() * a.len()) as u64);
        }

        #[test]
        fn family_squares_have_half_shift_profile(mu in (0u64..6).prop_map(|x| 2 * x + 1), s in 0usize..3, t in 0usize..3) {
            prop_assume!(s != t);
            let dca = crate::construct::construct_6mu(mu).unwrap();
            let p = superimpose(&latin_from_dca(&dca, s).unwrap(), &latin_from_dca(&dca, t).unwrap()).unwrap();
            prop_assert!(p.is_half_shift_profile());
        }
    }
}
