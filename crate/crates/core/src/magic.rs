//! Square arrays, their broken diagonals, and Margossian magic squares.
//!
//! Indices are 0-based throughout. For an `n × n` array `a`:
//!
//! * right diagonal `j` is `a[i][(i + j) mod n]`, `i = 0..n`;
//! * left diagonal `j` is `a[i][(j - 2 - i) mod n]`, `i = 0..n`.
//!
//! With these conventions right diagonal 0 is the main diagonal and left
//! diagonal 1 is the secondary diagonal. For even `n`, right diagonals with
//! even index and left diagonals with odd index are called *good*; the `n`
//! good diagonals partition the cells.

use std::collections::HashSet;
use std::fmt;

use crate::report::{Check, LineFamily, Report, Witness};
use crate::{Error, Result};

/// Cells of the `j`-th line of some family in a square of order `n`.
pub(crate) type LineCells = fn(usize, usize) -> Result<Vec<(usize, usize)>>;

/// An `n × n` array of pairwise distinct integers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareArray {
    n: usize,
    entries: Vec<i64>,
}

impl SquareArray {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parameter("square must have at least one row".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Parameter(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        Self::from_row_major(n, rows.into_iter().flatten().collect())
    }

    pub fn from_row_major(n: usize, entries: Vec<i64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Parameter(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut seen = HashSet::with_capacity(entries.len());
        for &x in &entries {
            if !seen.insert(x) {
                return Err(Error::Parameter(format!("entry {x} repeated")));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn values_at(&self, cells: &[(usize, usize)]) -> Vec<i64> {
        cells.iter().map(|&(i, j)| self.get(i, j)).collect()
    }
}

impl fmt::Display for SquareArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.n {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A normal pandiagonal magic square with its magic constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicSquare {
    base: SquareArray,
    magic_constant: i64,
}

impl MagicSquare {
    pub fn square(&self) -> &SquareArray {
        &self.base
    }

    pub fn magic_constant(&self) -> i64 {
        self.magic_constant
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn into_square(self) -> SquareArray {
        self.base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagonalKind {
    Right,
    Left,
}

/// A broken diagonal, named by direction and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Diagonal {
    pub kind: DiagonalKind,
    pub index: usize,
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DiagonalKind::Right => write!(f, "r{}", self.index),
            DiagonalKind::Left => write!(f, "l{}", self.index),
        }
    }
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if j >= n {
        return Err(Error::Parameter(format!(
            "diagonal index {j} out of range for order {n}"
        )));
    }
    Ok(())
}

pub fn right_diagonal_cells(n: usize, j: usize) -> Result<Vec<(usize, usize)>> {
    check_index(n, j)?;
    Ok((0..n).map(|i| (i, (i + j) % n)).collect())
}

pub fn left_diagonal_cells(n: usize, j: usize) -> Result<Vec<(usize, usize)>> {
    check_index(n, j)?;
    // (j - 2 - i) mod n, kept non-negative.
    Ok((0..n).map(|i| (i, (j + 2 * n - 2 - i) % n)).collect())
}

pub fn diagonal_cells(n: usize, d: Diagonal) -> Result<Vec<(usize, usize)>> {
    match d.kind {
        DiagonalKind::Right => right_diagonal_cells(n, d.index),
        DiagonalKind::Left => left_diagonal_cells(n, d.index),
    }
}

pub fn right_diagonal(a: &SquareArray, j: usize) -> Result<Vec<i64>> {
    Ok(a.values_at(&right_diagonal_cells(a.n, j)?))
}

pub fn left_diagonal(a: &SquareArray, j: usize) -> Result<Vec<i64>> {
    Ok(a.values_at(&left_diagonal_cells(a.n, j)?))
}

/// The good diagonals of an even order: `r0, r2, ..., l1, l3, ...`.
pub fn good_diagonal_ids(n: usize) -> Result<Vec<Diagonal>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "good diagonals need even order, got {n}"
        )));
    }
    let right = (0..n).step_by(2).map(|index| Diagonal {
        kind: DiagonalKind::Right,
        index,
    });
    let left = (1..n).step_by(2).map(|index| Diagonal {
        kind: DiagonalKind::Left,
        index,
    });
    Ok(right.chain(left).collect())
}

/// Values along each good diagonal of `a`, in [`good_diagonal_ids`] order.
pub fn good_diagonals(a: &SquareArray) -> Result<Vec<(Diagonal, Vec<i64>)>> {
    good_diagonal_ids(a.n)?
        .into_iter()
        .map(|d| Ok((d, a.values_at(&diagonal_cells(a.n, d)?))))
        .collect()
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("order must be even, got {n}")));
    }
    Ok(())
}

fn check_doubly_even(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::Parameter(format!(
            "order must be a positive multiple of 4, got {n}"
        )));
    }
    Ok(())
}

/// The conjugate of cell `(i, j)`: `((i + n/2) mod n, (j + n/2) mod n)`.
pub fn conjugate_cell(n: usize, i: usize, j: usize) -> Result<(usize, usize)> {
    check_even(n)?;
    if i >= n || j >= n {
        return Err(Error::Parameter(format!(
            "cell ({i}, {j}) out of range for order {n}"
        )));
    }
    let h = n / 2;
    Ok(((i + h) % n, (j + h) % n))
}

/// Graeco-Latin square over `Z_n × Z_n`. Entry `[i][j]` (0-based) is the
/// pair `((n/2)(i+1) + (j+1), (i+1) + (n/2)(j+1)) mod n`.
pub fn graeco_latin(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    check_doubly_even(n)?;
    let h = n / 2;
    Ok((1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| ((h * i + j) % n, (i + h * j) % n))
                .collect()
        })
        .collect())
}

/// Fixes `[0, n/2)` and reverses `[n/2, n)`.
pub fn margossian_pi(n: usize, x: usize) -> Result<usize> {
    check_even(n)?;
    if x >= n {
        return Err(Error::Parameter(format!("{x} is not in [0, {n})")));
    }
    Ok(if x < n / 2 { x } else { 3 * n / 2 - 1 - x })
}

/// Margossian magic square of order `n ≡ 0 (mod 4)`: the Graeco-Latin square
/// with each pair `(x, y)` replaced by `n·π(x) + π(y) + 1`.
pub fn margossian_square(n: usize) -> Result<MagicSquare> {
    check_doubly_even(n)?;
    let pi: Vec<usize> = (0..n).map(|x| margossian_pi(n, x)).collect::<Result<_>>()?;
    let entries = graeco_latin(n)?
        .into_iter()
        .flatten()
        .map(|(x, y)| (n * pi[x] + pi[y] + 1) as i64)
        .collect();
    let base = SquareArray::from_row_major(n, entries)
        .map_err(|e| Error::Internal(format!("margossian square of order {n}: {e}")))?;
    let report = is_margossian(&base);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "margossian square of order {n} failed verification:\n{report}"
        )));
    }
    Ok(MagicSquare {
        base,
        magic_constant: magic_constant(n),
    })
}

/// `n(n² + 1) / 2`.
pub fn magic_constant(n: usize) -> i64 {
    let n = n as i64;
    n * (n * n + 1) / 2
}

/// Check normality, all row, column and broken-diagonal sums, and (for even
/// orders) that every conjugate pair sums to `n² + 1`.
pub fn is_margossian(m: &SquareArray) -> Report {
    let n = m.n;
    let nn = (n * n) as i64;
    let target = magic_constant(n);
    let mut report = Report::new();

    let mut normal: Vec<Witness> = m
        .entries
        .iter()
        .filter(|&&x| !(1..=nn).contains(&x))
        .map(|x| Witness::Point(x.to_string()))
        .collect();
    normal.sort_by_key(|a| a.to_string());
    report.record(Check::Normal, normal);

    let line_check = |family: LineFamily, lines: Vec<Vec<i64>>| -> Vec<Witness> {
        lines
            .into_iter()
            .enumerate()
            .filter_map(|(index, line)| {
                let sum: i64 = line.iter().sum();
                (sum != target).then_some(Witness::Line {
                    family,
                    index,
                    sum,
                    expected: target,
                })
            })
            .collect()
    };
    let all = |f: LineCells| -> Vec<Vec<i64>> {
        (0..n)
            .map(|j| m.values_at(&f(n, j).expect("index in range")))
            .collect()
    };
    report.record(Check::RowSums, line_check(LineFamily::Row, m.rows()));
    report.record(
        Check::ColumnSums,
        line_check(LineFamily::Column, (0..n).map(|j| m.column(j)).collect()),
    );
    report.record(
        Check::RightDiagonalSums,
        line_check(LineFamily::RightDiagonal, all(right_diagonal_cells)),
    );
    report.record(
        Check::LeftDiagonalSums,
        line_check(LineFamily::LeftDiagonal, all(left_diagonal_cells)),
    );

    let mut conj = Vec::new();
    if !n.is_multiple_of(2) {
        conj.push(Witness::Message(format!(
            "order {n} is odd, conjugates undefined"
        )));
    } else {
        for i in 0..n / 2 {
            for j in 0..n {
                let (ci, cj) = conjugate_cell(n, i, j).expect("even order");
                let sum = m.get(i, j) + m.get(ci, cj);
                if sum != nn + 1 {
                    conj.push(Witness::CellPair {
                        first: (i, j),
                        second: (ci, cj),
                        sum,
                        expected: nn + 1,
                    });
                }
            }
        }
    }
    report.record(Check::ConjugateSums, conj);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn diagonals_of_m4() {
        let m = fixtures::margossian_4();
        assert_eq!(right_diagonal(&m, 0).unwrap(), vec![11, 16, 6, 1]);
        assert_eq!(right_diagonal(&m, 2).unwrap(), vec![7, 4, 10, 13]);
        assert_eq!(left_diagonal(&m, 1).unwrap(), vec![14, 9, 3, 8]);
        assert_eq!(left_diagonal(&m, 3).unwrap(), vec![2, 5, 15, 12]);
        assert!(right_diagonal(&m, 4).is_err());
        assert!(left_diagonal(&m, 4).is_err());
    }

    #[test]
    fn main_diagonal_and_order_one() {
        let a = SquareArray::new(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        assert_eq!(right_diagonal(&a, 0).unwrap(), vec![1, 5, 9]);
        let one = SquareArray::new(vec![vec![42]]).unwrap();
        assert_eq!(left_diagonal(&one, 0).unwrap(), vec![42]);
        assert_eq!(right_diagonal(&one, 0).unwrap(), vec![42]);
    }

    #[test]
    fn good_diagonal_ids_for_four() {
        let ids: Vec<String> = good_diagonal_ids(4)
            .unwrap()
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(ids, ["r0", "r2", "l1", "l3"]);
        assert!(good_diagonal_ids(5).is_err());
        let odd = SquareArray::new(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        assert!(good_diagonals(&odd).is_err());
    }

    #[test]
    fn good_diagonals_partition_cells() {
        for n in [2, 4, 6, 8] {
            let mut hits = vec![vec![0; n]; n];
            for d in good_diagonal_ids(n).unwrap() {
                for (i, j) in diagonal_cells(n, d).unwrap() {
                    hits[i][j] += 1;
                }
            }
            assert!(hits.iter().flatten().all(|&h| h == 1), "n = {n}");
        }
    }

    #[test]
    fn every_cell_on_one_right_and_one_left_diagonal() {
        for n in 1..=9 {
            let mut right = vec![vec![0; n]; n];
            let mut left = vec![vec![0; n]; n];
            for j in 0..n {
                for (a, b) in right_diagonal_cells(n, j).unwrap() {
                    right[a][b] += 1;
                }
                for (a, b) in left_diagonal_cells(n, j).unwrap() {
                    left[a][b] += 1;
                }
            }
            assert!(right.iter().flatten().all(|&h| h == 1));
            assert!(left.iter().flatten().all(|&h| h == 1));
        }
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_cell(4, 0, 0).unwrap(), (2, 2));
        assert_eq!(conjugate_cell(8, 1, 3).unwrap(), (5, 7));
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = conjugate_cell(6, i, j).unwrap();
                assert_eq!(conjugate_cell(6, a, b).unwrap(), (i, j));
            }
        }
        assert!(conjugate_cell(5, 0, 0).is_err());
        assert!(conjugate_cell(4, 4, 0).is_err());
    }

    #[test]
    fn graeco_latin_entries() {
        assert_eq!(graeco_latin(4).unwrap()[0][0], (3, 3));
        assert_eq!(graeco_latin(8).unwrap()[0][0], (5, 5));
        // First row of the order-4 square: 33 01 13 21.
        assert_eq!(
            graeco_latin(4).unwrap()[0],
            vec![(3, 3), (0, 1), (1, 3), (2, 1)]
        );
        for n in [4, 8, 12] {
            let pairs: HashSet<_> = graeco_latin(n).unwrap().into_iter().flatten().collect();
            assert_eq!(pairs.len(), n * n);
        }
        assert!(graeco_latin(6).is_err());
        assert!(graeco_latin(0).is_err());
    }

    #[test]
    fn pi_values() {
        let p: Vec<usize> = (0..4).map(|x| margossian_pi(4, x).unwrap()).collect();
        assert_eq!(p, vec![0, 1, 3, 2]);
        assert_eq!(margossian_pi(8, 5).unwrap(), 6);
        assert!(margossian_pi(8, 8).is_err());
        for n in [4, 8, 12, 16] {
            for x in 0..n {
                assert_eq!(margossian_pi(n, margossian_pi(n, x).unwrap()).unwrap(), x);
            }
        }
    }

    #[test]
    fn margossian_goldens() {
        assert_eq!(
            margossian_square(4).unwrap().square(),
            &fixtures::margossian_4()
        );
        assert_eq!(
            margossian_square(8).unwrap().square(),
            &fixtures::margossian_8()
        );
        let m4 = margossian_square(4).unwrap();
        assert_eq!(m4.magic_constant(), 34);
        assert_eq!(m4.square().row(0).iter().sum::<i64>(), 34);
        assert!(margossian_square(6).is_err());
        assert!(margossian_square(2).is_err());
    }

    #[test]
    fn margossian_properties_through_twenty() {
        for n in [4, 8, 12, 16, 20] {
            let m = margossian_square(n).unwrap();
            let mut e = m.square().entries().to_vec();
            e.sort_unstable();
            assert_eq!(e, (1..=(n * n) as i64).collect::<Vec<_>>());
            assert!(is_margossian(m.square()).passed());
        }
    }

    #[test]
    fn is_margossian_reports_swap() {
        assert!(is_margossian(&fixtures::margossian_8()).passed());
        let mut rows = fixtures::margossian_4().rows();
        // (0,1) and (0,2) hold 2 and 7; swap keeps the row sum but breaks columns and diagonals.
        rows[0].swap(1, 2);
        let bad = SquareArray::new(rows).unwrap();
        let r = is_margossian(&bad);
        assert!(r.failed(Check::ColumnSums));
        assert!(r.failed(Check::RightDiagonalSums));
        assert!(!r.failed(Check::RowSums));
    }

    /// Brute-force an order-4 normal magic square (rows, columns, two main
    /// diagonals) that is not Margossian.
    fn brute_force_plain_magic_4() -> SquareArray {
        fn go(cells: &mut Vec<i64>, used: &mut [bool; 17], out: &mut Option<Vec<i64>>) {
            if out.is_some() {
                return;
            }
            let k = cells.len();
            if k == 16 {
                let d1: i64 = (0..4).map(|i| cells[i * 4 + i]).sum();
                let d2: i64 = (0..4).map(|i| cells[i * 4 + 3 - i]).sum();
                if d1 == 34 && d2 == 34 {
                    let sq = SquareArray::from_row_major(4, cells.clone()).unwrap();
                    if !is_margossian(&sq).passed() {
                        *out = Some(cells.clone());
                    }
                }
                return;
            }
            for x in 1..=16 {
                if used[x as usize] {
                    continue;
                }
                cells.push(x);
                let (r, c) = (k / 4, k % 4);
                let row_ok = c != 3 || cells[r * 4..r * 4 + 4].iter().sum::<i64>() == 34;
                let col_ok = r != 3 || (0..4).map(|i| cells[i * 4 + c]).sum::<i64>() == 34;
                if row_ok && col_ok {
                    used[x as usize] = true;
                    go(cells, used, out);
                    used[x as usize] = false;
                }
                cells.pop();
            }
        }
        let mut out = None;
        go(&mut Vec::new(), &mut [false; 17], &mut out);
        SquareArray::from_row_major(4, out.expect("order-4 magic squares exist")).unwrap()
    }

    #[test]
    fn plain_magic_square_is_not_margossian() {
        let sq = brute_force_plain_magic_4();
        let r = is_margossian(&sq);
        assert!(!r.failed(Check::Normal));
        assert!(!r.failed(Check::RowSums));
        assert!(!r.failed(Check::ColumnSums));
        assert!(
            r.failed(Check::ConjugateSums)
                || r.failed(Check::RightDiagonalSums)
                || r.failed(Check::LeftDiagonalSums)
        );
    }
}
