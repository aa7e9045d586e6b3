//! Shiftable `(n², n; 3)` Heffter spaces from Margossian squares, `n ≡ 0 (mod 4)`.
//!
//! A flip mask `F` selects half of the cells of the square. Subtracting
//! `n² + 1` from every masked entry turns the entry set `[1, n²]` into a
//! half-set of `[-n², n²]` (because `F` is closed under conjugation and
//! conjugates sum to `n² + 1`). A line `S` of the square then sums to
//! `n(n²+1)/2 - |S ∩ F|·(n²+1)`, which is zero exactly when `|S ∩ F| = n/2`.
//!
//! Two masks are used depending on the parity of `n/4`:
//!
//! * `n/4` even: every row, column and broken diagonal meets `F` in `n/2`
//!   cells; rows, columns and right diagonals form the resolution.
//! * `n/4` odd: rows, columns and the good diagonals meet `F` in `n/2` cells;
//!   rows, columns and good diagonals form the resolution.

use std::collections::HashMap;
use std::fmt;

use crate::magic::{
    conjugate_cell, diagonal_cells, good_diagonal_ids, left_diagonal_cells, margossian_square,
    right_diagonal_cells, LineCells, MagicSquare, SquareArray,
};
use crate::report::{Check, Report, Witness};
use crate::space::{is_half_set, HeffterSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaskCase {
    /// `n/4` even.
    Case1,
    /// `n/4` odd.
    Case2,
}

impl MaskCase {
    pub fn for_order(n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(4) {
            return Err(Error::Parameter(format!(
                "order must be a positive multiple of 4, got {n}"
            )));
        }
        Ok(if (n / 4).is_multiple_of(2) {
            MaskCase::Case1
        } else {
            MaskCase::Case2
        })
    }
}

/// Positional cell mask of an `n × n` square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlipMask {
    n: usize,
    cells: Vec<bool>,
    case: MaskCase,
}

impl FlipMask {
    /// Wrap an arbitrary row-major cell pattern. Use [`FlipMask::verify`] to
    /// check it against the conditions of its case.
    pub fn new(n: usize, cells: Vec<bool>) -> Result<Self> {
        let case = MaskCase::for_order(n)?;
        if cells.len() != n * n {
            return Err(Error::Parameter(format!(
                "expected {} mask cells, got {}",
                n * n,
                cells.len()
            )));
        }
        Ok(Self { n, cells, case })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn case(&self) -> MaskCase {
        self.case
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    fn count_in(&self, cells: &[(usize, usize)]) -> usize {
        cells.iter().filter(|&&(i, j)| self.get(i, j)).count()
    }

    /// Conjugate closure, plus `n/2` masked cells on every row, column and
    /// the diagonals required by the case.
    pub fn verify(&self) -> Report {
        let n = self.n;
        let mut report = Report::new();
        let mut closure = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (ci, cj) = conjugate_cell(n, i, j).expect("even order");
                if self.get(i, j) != self.get(ci, cj) {
                    closure.push(Witness::Message(format!(
                        "cell ({i}, {j}) and its conjugate ({ci}, {cj}) differ"
                    )));
                }
            }
        }
        report.record(Check::MaskConjugateClosure, closure);

        let mut lines: Vec<(String, Vec<(usize, usize)>)> = Vec::new();
        for i in 0..n {
            lines.push((format!("row {i}"), (0..n).map(|j| (i, j)).collect()));
        }
        for j in 0..n {
            lines.push((format!("column {j}"), (0..n).map(|i| (i, j)).collect()));
        }
        match self.case {
            MaskCase::Case1 => {
                for j in 0..n {
                    lines.push((
                        format!("right diagonal {j}"),
                        right_diagonal_cells(n, j).unwrap(),
                    ));
                    lines.push((
                        format!("left diagonal {j}"),
                        left_diagonal_cells(n, j).unwrap(),
                    ));
                }
            }
            MaskCase::Case2 => {
                for d in good_diagonal_ids(n).unwrap() {
                    lines.push((format!("good diagonal {d}"), diagonal_cells(n, d).unwrap()));
                }
            }
        }
        let counts = lines
            .into_iter()
            .filter_map(|(what, cells)| {
                let found = self.count_in(&cells);
                (found != n / 2).then_some(Witness::Count {
                    what,
                    expected: n / 2,
                    found,
                })
            })
            .collect();
        report.record(Check::MaskLineCounts, counts);
        report
    }
}

/// `•` for masked cells, `∘` otherwise.
impl fmt::Display for FlipMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|j| if self.get(i, j) { "•" } else { "∘" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The flip mask of order `n ≡ 0 (mod 4)`, verified before return.
pub fn flip_mask(n: usize) -> Result<FlipMask> {
    let case = MaskCase::for_order(n)?;
    let q = n / 4;
    let h = n / 2;
    let mut cells = Vec::with_capacity(n * n);
    // 1-based coordinates to match the defining intervals.
    for i in 1..=n {
        for j in 1..=n {
            let masked = match case {
                MaskCase::Case1 => {
                    if i % 2 == 1 {
                        (q + 1..=h).contains(&j) || (3 * q + 1..=n).contains(&j)
                    } else {
                        (1..=q).contains(&j) || (h + 1..=3 * q).contains(&j)
                    }
                }
                MaskCase::Case2 => {
                    let left_half_row = (i <= h && i % 2 == 0) || (i > h && i % 2 == 1);
                    if j <= h {
                        left_half_row
                    } else {
                        !left_half_row
                    }
                }
            };
            cells.push(masked);
        }
    }
    let mask = FlipMask { n, cells, case };
    let report = mask.verify();
    if !report.passed() {
        return Err(Error::Internal(format!(
            "flip mask of order {n}:\n{report}"
        )));
    }
    Ok(mask)
}

/// Subtract `n² + 1` from every masked entry. The result's entries are
/// checked to form a half-set of `[-n², n²]`.
pub fn sign_flip(m: &MagicSquare, f: &FlipMask) -> Result<SquareArray> {
    let n = m.n();
    if f.n != n {
        return Err(Error::Parameter(format!(
            "square of order {n} with mask of order {}",
            f.n
        )));
    }
    let shift = (n * n + 1) as i64;
    let sq = m.square();
    let entries: Vec<i64> = (0..n * n)
        .map(|c| {
            let x = sq.entries()[c];
            if f.cells[c] {
                x - shift
            } else {
                x
            }
        })
        .collect();
    if !is_half_set(&entries, n * n) {
        return Err(Error::Internal(format!(
            "sign flip of order {n} does not yield a half-set"
        )));
    }
    SquareArray::from_row_major(n, entries).map_err(|e| Error::Internal(e.to_string()))
}

/// Which diagonal family completes the rows and columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagonalFamily {
    Right,
    Left,
    Good,
    /// Right and left diagonals together (odd orders only).
    All,
}

/// Partitions of the entries of `a` into rows, columns and the requested
/// diagonal family, in that order. Mutual orthogonality is checked.
pub fn array_resolutions(a: &SquareArray, family: DiagonalFamily) -> Result<Vec<Vec<Vec<i64>>>> {
    let n = a.n();
    let rows = a.rows();
    let cols: Vec<Vec<i64>> = (0..n).map(|j| a.column(j)).collect();
    let diag = |f: LineCells| -> Vec<Vec<i64>> {
        (0..n).map(|j| a.values_at(&f(n, j).unwrap())).collect()
    };
    let mut out = vec![rows, cols];
    match family {
        DiagonalFamily::Right => out.push(diag(right_diagonal_cells)),
        DiagonalFamily::Left => out.push(diag(left_diagonal_cells)),
        DiagonalFamily::Good => {
            if !n.is_multiple_of(2) {
                return Err(Error::Parameter(format!(
                    "good diagonals need even order, got {n}"
                )));
            }
            out.push(
                good_diagonal_ids(n)?
                    .into_iter()
                    .map(|d| a.values_at(&diagonal_cells(n, d).unwrap()))
                    .collect(),
            );
        }
        DiagonalFamily::All => {
            if n.is_multiple_of(2) {
                return Err(Error::Parameter(format!(
                    "right and left diagonals together need odd order, got {n}"
                )));
            }
            out.push(diag(right_diagonal_cells));
            out.push(diag(left_diagonal_cells));
        }
    }
    for x in 0..out.len() {
        for y in x + 1..out.len() {
            if let Some(common) = first_overlap(&out[x], &out[y]) {
                return Err(Error::Internal(format!(
                    "partitions {x} and {y} share {common:?} in one block pair"
                )));
            }
        }
    }
    Ok(out)
}

fn first_overlap(p: &[Vec<i64>], q: &[Vec<i64>]) -> Option<Vec<i64>> {
    let owner: HashMap<i64, usize> = q
        .iter()
        .enumerate()
        .flat_map(|(j, b)| b.iter().map(move |&x| (x, j)))
        .collect();
    for block in p {
        let mut seen: HashMap<usize, i64> = HashMap::new();
        for &x in block {
            if let Some(&prev) = seen.get(&owner[&x]) {
                return Some(vec![prev, x]);
            }
            seen.insert(owner[&x], x);
        }
    }
    None
}

/// Every intermediate of the construction, for inspection and golden tests.
#[derive(Debug, Clone)]
pub struct NetConstruction {
    pub square: MagicSquare,
    pub mask: FlipMask,
    pub flipped: SquareArray,
    pub family: DiagonalFamily,
    pub space: HeffterSpace,
}

/// Run the full construction of order `n ≡ 0 (mod 4)`, keeping intermediates.
pub fn heffter_net_construction(n: usize) -> Result<NetConstruction> {
    let case = MaskCase::for_order(n)?;
    let square = margossian_square(n)?;
    let mask = flip_mask(n)?;
    let flipped = sign_flip(&square, &mask)?;
    let family = net_family(case);
    let classes = array_resolutions(&flipped, family)?;
    let space = HeffterSpace::from_raw(n * n, n, classes, true)
        .map_err(|e| Error::Internal(e.to_string()))?;
    let report = space.validate(true);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "net of order {n} failed validation:\n{report}"
        )));
    }
    Ok(NetConstruction {
        square,
        mask,
        flipped,
        family,
        space,
    })
}

fn net_family(case: MaskCase) -> DiagonalFamily {
    match case {
        MaskCase::Case1 => DiagonalFamily::Right,
        MaskCase::Case2 => DiagonalFamily::Good,
    }
}

/// Read a sign-flipped square of order `n ≡ 0 (mod 4)` as an unvalidated
/// `(n², n; 3)` space: rows, columns, then the diagonal family the
/// construction uses for that order.
pub fn net_space_from_array(a: &SquareArray) -> Result<HeffterSpace> {
    let n = a.n();
    let family = net_family(MaskCase::for_order(n)?);
    let classes = array_resolutions(a, family)?;
    HeffterSpace::from_raw(n * n, n, classes, true)
}

/// Shiftable `(n², n; 3)` Heffter space for `n ≡ 0 (mod 4)`.
pub fn heffter_net(n: usize) -> Result<HeffterSpace> {
    heffter_net_construction(n).map(|c| c.space)
}
