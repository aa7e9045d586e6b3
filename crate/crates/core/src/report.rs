//! Structured validation reports.
//!
//! Every validator in this crate runs all of its checks and records, per
//! check, the witnesses that violate it. A check passes iff it has no
//! witnesses.

use std::fmt;

/// The invariant a [`CheckResult`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// Point set is a half-set of `[-v, v]`.
    HalfSet,
    /// All classes share one point set.
    CommonPointSet,
    /// Each class partitions the point set.
    Partition,
    /// Every block sums to zero.
    ZeroSum,
    /// Every block has the declared size.
    BlockSize,
    /// Number of classes and blocks per class match the parameters.
    ClassCount,
    /// No block repeated across classes (only allowed for block size 1).
    DistinctBlocks,
    /// Blocks from distinct classes share at most one point.
    Orthogonality,
    /// Block size is even (shiftable spaces only).
    EvenBlockSize,
    /// Each block has exactly half positive elements (shiftable spaces only).
    PositiveHalf,
    /// Entries are exactly `[1, n^2]`.
    Normal,
    /// Every row sums to the magic constant.
    RowSums,
    /// Every column sums to the magic constant.
    ColumnSums,
    /// Every right diagonal sums to the magic constant.
    RightDiagonalSums,
    /// Every left diagonal sums to the magic constant.
    LeftDiagonalSums,
    /// Every conjugate pair sums to `n^2 + 1`.
    ConjugateSums,
    /// A flip mask contains the conjugate of each of its cells.
    MaskConjugateClosure,
    /// A flip mask meets each constrained line in exactly `n/2` cells.
    MaskLineCounts,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::HalfSet => "half-set",
            Check::CommonPointSet => "common point set",
            Check::Partition => "partition",
            Check::ZeroSum => "zero-sum",
            Check::BlockSize => "block size",
            Check::ClassCount => "class count",
            Check::DistinctBlocks => "distinct blocks",
            Check::Orthogonality => "orthogonality",
            Check::EvenBlockSize => "even block size",
            Check::PositiveHalf => "half positive",
            Check::Normal => "normal entries",
            Check::RowSums => "row sums",
            Check::ColumnSums => "column sums",
            Check::RightDiagonalSums => "right diagonal sums",
            Check::LeftDiagonalSums => "left diagonal sums",
            Check::ConjugateSums => "conjugate sums",
            Check::MaskConjugateClosure => "mask conjugate closure",
            Check::MaskLineCounts => "mask line counts",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which line family of a square a [`Witness::Line`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineFamily {
    Row,
    Column,
    RightDiagonal,
    LeftDiagonal,
}

impl fmt::Display for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineFamily::Row => "row",
            LineFamily::Column => "column",
            LineFamily::RightDiagonal => "right diagonal",
            LineFamily::LeftDiagonal => "left diagonal",
        })
    }
}

/// Evidence for a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A single offending point.
    Point(String),
    /// A block, addressed by class and position within the class.
    Block {
        class: usize,
        block: usize,
        elements: Vec<String>,
    },
    /// Two blocks sharing more than they are allowed to.
    BlockPair {
        first: (usize, usize),
        second: (usize, usize),
        common: Vec<String>,
    },
    /// A count that differs from what the parameters demand.
    Count {
        what: String,
        expected: usize,
        found: usize,
    },
    /// A line of a square with the wrong sum.
    Line {
        family: LineFamily,
        index: usize,
        sum: i64,
        expected: i64,
    },
    /// A pair of cells (0-based) whose values violate a pair condition.
    CellPair {
        first: (usize, usize),
        second: (usize, usize),
        sum: i64,
        expected: i64,
    },
    /// Free-form description.
    Message(String),
}

impl Witness {
    pub(crate) fn block<T: ToString>(class: usize, block: usize, elements: &[T]) -> Self {
        Witness::Block {
            class,
            block,
            elements: elements.iter().map(ToString::to_string).collect(),
        }
    }
}

fn join(items: &[String]) -> String {
    items.join(", ")
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Block {
                class,
                block,
                elements,
            } => write!(f, "class {class} block {block} {{{}}}", join(elements)),
            Witness::BlockPair {
                first,
                second,
                common,
            } => write!(
                f,
                "class {} block {} and class {} block {} share {{{}}}",
                first.0,
                first.1,
                second.0,
                second.1,
                join(common)
            ),
            Witness::Count {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected}, found {found}"),
            Witness::Line {
                family,
                index,
                sum,
                expected,
            } => write!(f, "{family} {index} sums to {sum}, expected {expected}"),
            Witness::CellPair {
                first,
                second,
                sum,
                expected,
            } => write!(
                f,
                "cells ({}, {}) and ({}, {}) sum to {sum}, expected {expected}",
                first.0, first.1, second.0, second.1
            ),
            Witness::Message(m) => f.write_str(m),
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check: Check,
    pub witnesses: Vec<Witness>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Full result of a validator: one entry per check, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&mut self, check: Check, witnesses: Vec<Witness>) {
        self.results.push(CheckResult { check, witnesses });
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn get(&self, check: Check) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.check == check)
    }

    /// `true` iff `check` was run and failed.
    pub fn failed(&self, check: Check) -> bool {
        self.get(check).is_some_and(|r| !r.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    /// Convert into a `Result`, wrapping a failing report in [`crate::Error::Invalid`].
    pub fn into_result(self) -> crate::Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self))
        }
    }
}

/// One line per check, `PASS <name>` or `FAIL <name>` followed by indented witnesses.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            if r.passed() {
                writeln!(f, "PASS {}", r.check)?;
            } else {
                writeln!(f, "FAIL {}", r.check)?;
                for w in &r.witnesses {
                    writeln!(f, "  {w}")?;
                }
            }
        }
        Ok(())
    }
}
