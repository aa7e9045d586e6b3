//! Blocks, Heffter systems and spaces, plain resolvable spaces, and the
//! checks that decide whether a candidate satisfies each definition.
//!
//! Containers here are permissive: constructors only enforce what is needed
//! to represent the object (block well-formedness, size limits, canonical
//! ordering). Whether a container is actually a Heffter space is answered by
//! [`HeffterSpace::validate`], which reports every violated property with a
//! witness instead of stopping at the first one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use crate::report::{Check, Report, Witness};
use crate::{Error, Result};

/// Largest accepted `v`. Keeps every sum of points well inside `i64`.
pub const MAX_V: usize = 1 << 30;

fn check_v(v: usize) -> Result<()> {
    if v == 0 || v > MAX_V {
        return Err(Error::Parameter(format!("v must be in [1, 2^30], got {v}")));
    }
    Ok(())
}

/// A finite set of distinct nonzero integers, no element together with its
/// negation, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<i64>);

impl Block {
    pub fn new<I: IntoIterator<Item = i64>>(elements: I) -> Result<Self> {
        let mut e: Vec<i64> = elements.into_iter().collect();
        if e.is_empty() {
            return Err(Error::Block("empty block".into()));
        }
        e.sort_unstable();
        let mut mags = BTreeSet::new();
        for (i, &x) in e.iter().enumerate() {
            if x == 0 {
                return Err(Error::Block("0 is not allowed".into()));
            }
            if x.unsigned_abs() > MAX_V as u64 {
                return Err(Error::Block(format!("{x} exceeds 2^30 in magnitude")));
            }
            if i > 0 && e[i - 1] == x {
                return Err(Error::Block(format!("{x} repeated")));
            }
            if !mags.insert(x.abs()) {
                return Err(Error::Block(format!("both {x} and {} present", -x)));
            }
        }
        Ok(Block(e))
    }

    pub fn elements(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn positives(&self) -> usize {
        self.0.iter().filter(|&&x| x > 0).count()
    }

    pub fn is_zero_sum(&self) -> bool {
        is_zero_sum(&self.0)
    }

    pub fn negatives(&self) -> usize {
        self.0.len() - self.positives()
    }

    pub fn negated(&self) -> Block {
        let mut e: Vec<i64> = self.0.iter().map(|x| -x).collect();
        e.reverse();
        Block(e)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// `true` iff `elements` sum to zero. Accepts any list so that candidates
/// outside the [`Block`] invariants (such as `{1, -1}`) can be tested too.
pub fn is_zero_sum(elements: &[i64]) -> bool {
    elements.iter().map(|&x| x as i128).sum::<i128>() == 0
}

/// `true` iff `points` is a half-set of `[-v, v]`: `v` points, no zero, and
/// each magnitude in `[1, v]` present exactly once.
pub fn is_half_set(points: &[i64], v: usize) -> bool {
    half_set_violations(points.iter().copied(), v).is_empty()
}

fn half_set_violations<I: IntoIterator<Item = i64>>(points: I, v: usize) -> Vec<Witness> {
    let mut seen: HashMap<u64, i64> = HashMap::new();
    let mut out = Vec::new();
    let mut count = 0usize;
    for x in points {
        count += 1;
        let m = x.unsigned_abs();
        if x == 0 || m > v as u64 {
            out.push(Witness::Point(x.to_string()));
            continue;
        }
        if let Some(prev) = seen.insert(m, x) {
            out.push(Witness::Message(format!(
                "magnitude {m} appears as {prev} and {x}"
            )));
        }
    }
    if count != v {
        out.push(Witness::Count {
            what: "points".into(),
            expected: v,
            found: count,
        });
    }
    for m in 1..=v as u64 {
        if !seen.contains_key(&m) {
            out.push(Witness::Message(format!("magnitude {m} missing")));
        }
    }
    out
}

/// Pairs `(i, j, common)` with `|p[i] ∩ q[j]| >= 2`. Both inputs are assumed
/// to be partitions of a common set.
fn intersection_conflicts<T: Clone + Eq + Hash + Ord>(
    p: &[Vec<T>],
    q: &[Vec<T>],
) -> Vec<(usize, usize, Vec<T>)> {
    let mut owner: HashMap<&T, usize> = HashMap::new();
    for (j, b) in q.iter().enumerate() {
        for x in b {
            owner.insert(x, j);
        }
    }
    let mut out = Vec::new();
    for (i, a) in p.iter().enumerate() {
        let mut hits: HashMap<usize, Vec<T>> = HashMap::new();
        for x in a {
            if let Some(&j) = owner.get(x) {
                hits.entry(j).or_default().push(x.clone());
            }
        }
        let mut bad: Vec<(usize, Vec<T>)> = hits.into_iter().filter(|(_, c)| c.len() > 1).collect();
        bad.sort();
        for (j, mut c) in bad {
            c.sort();
            out.push((i, j, c));
        }
    }
    out
}

/// First point that keeps `p` and `q` from being partitions of one set.
fn common_partition_defect<T: Clone + Eq + Hash + Ord + fmt::Display>(
    p: &[Vec<T>],
    q: &[Vec<T>],
) -> Option<String> {
    let collect = |blocks: &[Vec<T>]| -> std::result::Result<BTreeSet<T>, String> {
        let mut s = BTreeSet::new();
        for b in blocks {
            for x in b {
                if !s.insert(x.clone()) {
                    return Err(format!("{x} (covered twice)"));
                }
            }
        }
        Ok(s)
    };
    let sp = match collect(p) {
        Ok(s) => s,
        Err(e) => return Some(e),
    };
    let sq = match collect(q) {
        Ok(s) => s,
        Err(e) => return Some(e),
    };
    sp.symmetric_difference(&sq)
        .next()
        .map(|x| format!("{x} (in only one partition)"))
}

/// `true` iff every block of `p` meets every block of `q` in at most one point.
///
/// Fails with [`Error::NotPartition`] when `p` and `q` are not partitions of
/// one common point set.
pub fn partitions_orthogonal(p: &[Block], q: &[Block]) -> Result<bool> {
    let p: Vec<Vec<i64>> = p.iter().map(|b| b.0.clone()).collect();
    let q: Vec<Vec<i64>> = q.iter().map(|b| b.0.clone()).collect();
    if let Some(point) = common_partition_defect(&p, &q) {
        return Err(Error::NotPartition(point));
    }
    Ok(intersection_conflicts(&p, &q).is_empty())
}

/// Existence predicate for `(nk, k; 2)` Heffter spaces over the integers.
///
/// Without `shiftable`: `nk ≡ 0` or `3 (mod 4)`. With `shiftable`: `k` even
/// and `nk ≡ 0 (mod 4)`. This is a predicate only: it checks the congruence
/// and does not enforce `n >= k`, which any two orthogonal partitions into
/// `n` blocks of size `k` also need.
pub fn feasible_r2(n: u64, k: u64, shiftable: bool) -> bool {
    let nk = (n as u128 * k as u128) % 4;
    if shiftable {
        k.is_multiple_of(2) && nk == 0
    } else {
        nk == 0 || nk == 3
    }
}

/// One parallel class: a candidate partition of a half-set of `[-v, v]` into
/// zero-sum blocks of size `k`. Blocks are kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeffterSystem {
    v: usize,
    k: usize,
    blocks: Vec<Block>,
}

impl HeffterSystem {
    pub fn new(v: usize, k: usize, mut blocks: Vec<Block>) -> Result<Self> {
        check_v(v)?;
        if k == 0 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        blocks.sort();
        Ok(Self { v, k, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn points(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.iter().flat_map(|b| b.0.iter().copied())
    }

    /// Validate as a `(v, k; 1)` Heffter space.
    pub fn validate(&self, require_shiftable: bool) -> Report {
        HeffterSpace {
            v: self.v,
            k: self.k,
            classes: vec![self.clone()],
            shiftable: false,
        }
        .validate(require_shiftable)
    }

    fn raw(&self) -> Vec<Vec<i64>> {
        self.blocks.iter().map(|b| b.0.clone()).collect()
    }
}

/// `r` candidate Heffter systems on a common half-set, in resolution order.
///
/// Equality compares canonical forms: blocks sorted within each class, class
/// order as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeffterSpace {
    v: usize,
    k: usize,
    classes: Vec<HeffterSystem>,
    shiftable: bool,
}

impl HeffterSpace {
    pub fn new(v: usize, k: usize, classes: Vec<Vec<Block>>, shiftable: bool) -> Result<Self> {
        check_v(v)?;
        if classes.is_empty() {
            return Err(Error::Parameter("a space needs at least one class".into()));
        }
        let classes = classes
            .into_iter()
            .map(|c| HeffterSystem::new(v, k, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            v,
            k,
            classes,
            shiftable,
        })
    }

    /// Build from raw integer blocks.
    pub fn from_raw(
        v: usize,
        k: usize,
        classes: Vec<Vec<Vec<i64>>>,
        shiftable: bool,
    ) -> Result<Self> {
        let classes = classes
            .into_iter()
            .map(|c| c.into_iter().map(Block::new).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(v, k, classes, shiftable)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn is_shiftable(&self) -> bool {
        self.shiftable
    }

    pub fn classes(&self) -> &[HeffterSystem] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &HeffterSystem {
        &self.classes[i]
    }

    /// The point set of the first class, sorted.
    pub fn points(&self) -> Vec<i64> {
        let mut p: Vec<i64> = self.classes[0].points().collect();
        p.sort_unstable();
        p
    }

    /// Raw blocks, class by class.
    pub fn to_raw(&self) -> Vec<Vec<Vec<i64>>> {
        self.classes.iter().map(HeffterSystem::raw).collect()
    }

    /// The space obtained by negating every point. Negation maps Heffter
    /// spaces to Heffter spaces of the same parameters and preserves shiftability
    /// when `k` is even.
    pub fn negated(&self) -> HeffterSpace {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let mut blocks: Vec<Block> = c.blocks.iter().map(Block::negated).collect();
                blocks.sort();
                HeffterSystem {
                    blocks,
                    ..c.clone()
                }
            })
            .collect();
        HeffterSpace {
            classes,
            ..self.clone()
        }
    }

    /// Same blocks, classes possibly permuted.
    pub fn equivalent_up_to_class_order(&self, other: &HeffterSpace) -> bool {
        let mut a: Vec<_> = self.to_raw();
        let mut b: Vec<_> = other.to_raw();
        a.sort();
        b.sort();
        self.v == other.v && self.k == other.k && a == b
    }

    /// Run every check of the definition. Shiftability is checked when
    /// `require_shiftable` is set or the space carries the shiftable flag.
    pub fn validate(&self, require_shiftable: bool) -> Report {
        let mut report = Report::new();
        let (v, k) = (self.v, self.k);
        let raw = self.to_raw();

        let mut sizes = Vec::new();
        for (c, class) in raw.iter().enumerate() {
            for (b, block) in class.iter().enumerate() {
                if block.len() != k {
                    sizes.push(Witness::block(c, b, block));
                }
            }
        }
        report.record(Check::BlockSize, sizes);

        let mut counts = Vec::new();
        if v % k != 0 {
            counts.push(Witness::Message(format!("k = {k} does not divide v = {v}")));
        }
        for (c, class) in raw.iter().enumerate() {
            if class.len() != v / k {
                counts.push(Witness::Count {
                    what: format!("blocks in class {c}"),
                    expected: v / k,
                    found: class.len(),
                });
            }
        }
        report.record(Check::ClassCount, counts);

        report.record(
            Check::HalfSet,
            half_set_violations(self.classes[0].points(), v),
        );

        let mut partition = Vec::new();
        for (c, class) in self.classes.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for x in class.points() {
                if !seen.insert(x) {
                    partition.push(Witness::Message(format!(
                        "point {x} covered twice in class {c}"
                    )));
                }
            }
        }
        report.record(Check::Partition, partition);

        let base: BTreeSet<i64> = self.classes[0].points().collect();
        let mut common = Vec::new();
        for (c, class) in self.classes.iter().enumerate().skip(1) {
            let here: BTreeSet<i64> = class.points().collect();
            for x in here.symmetric_difference(&base) {
                common.push(Witness::Message(format!(
                    "point {x} differs between class 0 and class {c}"
                )));
            }
        }
        report.record(Check::CommonPointSet, common);

        let mut zero = Vec::new();
        for (c, class) in raw.iter().enumerate() {
            for (b, block) in class.iter().enumerate() {
                if block.iter().sum::<i64>() != 0 {
                    zero.push(Witness::block(c, b, block));
                }
            }
        }
        report.record(Check::ZeroSum, zero);

        report.record(Check::DistinctBlocks, repeated_blocks(&raw, k));
        report.record(Check::Orthogonality, orthogonality_witnesses(&raw));

        if require_shiftable || self.shiftable {
            let even = if k % 2 == 0 {
                vec![]
            } else {
                vec![Witness::Message(format!("k = {k} is odd"))]
            };
            report.record(Check::EvenBlockSize, even);
            let mut half = Vec::new();
            for (c, class) in self.classes.iter().enumerate() {
                for (b, block) in class.blocks.iter().enumerate() {
                    if 2 * block.positives() != k {
                        half.push(Witness::block(c, b, block.elements()));
                    }
                }
            }
            report.record(Check::PositiveHalf, half);
        }
        report
    }
}

fn repeated_blocks<T: Clone + Ord + Hash + fmt::Display>(
    classes: &[Vec<Vec<T>>],
    k: usize,
) -> Vec<Witness> {
    if k <= 1 {
        return Vec::new();
    }
    let mut first: HashMap<Vec<T>, (usize, usize)> = HashMap::new();
    let mut out = Vec::new();
    for (c, class) in classes.iter().enumerate() {
        for (b, block) in class.iter().enumerate() {
            let mut key = block.clone();
            key.sort();
            if let Some(&prev) = first.get(&key) {
                out.push(Witness::BlockPair {
                    first: prev,
                    second: (c, b),
                    common: key.iter().map(ToString::to_string).collect(),
                });
            } else {
                first.insert(key, (c, b));
            }
        }
    }
    out
}

fn orthogonality_witnesses<T: Clone + Eq + Hash + Ord + fmt::Display>(
    classes: &[Vec<Vec<T>>],
) -> Vec<Witness> {
    let mut out = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            for (i, j, common) in intersection_conflicts(&classes[a], &classes[b]) {
                out.push(Witness::BlockPair {
                    first: (a, i),
                    second: (b, j),
                    common: common.iter().map(ToString::to_string).collect(),
                });
            }
        }
    }
    out
}

/// Matrix display of two orthogonal systems: cell `(i, j)` holds the common
/// element of block `i` of the first system and block `j` of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeffterArrayView {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<Option<i64>>>,
}

impl HeffterArrayView {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<i64> {
        self.cells[i][j]
    }

    pub fn cells(&self) -> &[Vec<Option<i64>>] {
        &self.cells
    }

    pub fn row_elements(&self, i: usize) -> Vec<i64> {
        let mut r: Vec<i64> = self.cells[i].iter().flatten().copied().collect();
        r.sort_unstable();
        r
    }

    pub fn col_elements(&self, j: usize) -> Vec<i64> {
        let mut c: Vec<i64> = self.cells.iter().filter_map(|row| row[j]).collect();
        c.sort_unstable();
        c
    }

    pub fn filled(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }
}

/// Display two orthogonal systems on one point set as a Heffter array.
pub fn extract_heffter_array(a: &HeffterSystem, b: &HeffterSystem) -> Result<HeffterArrayView> {
    let (pa, pb) = (a.raw(), b.raw());
    if let Some(point) = common_partition_defect(&pa, &pb) {
        return Err(Error::NotPartition(point));
    }
    if let Some((i, j, common)) = intersection_conflicts(&pa, &pb).into_iter().next() {
        let s = |v: &[i64]| v.iter().map(ToString::to_string).collect();
        return Err(Error::NotOrthogonal {
            first: s(&pa[i]),
            second: s(&pb[j]),
            common: s(&common),
        });
    }
    let mut owner = HashMap::new();
    for (j, block) in pb.iter().enumerate() {
        for &x in block {
            owner.insert(x, j);
        }
    }
    let mut cells = vec![vec![None; pb.len()]; pa.len()];
    for (i, block) in pa.iter().enumerate() {
        for &x in block {
            cells[i][owner[&x]] = Some(x);
        }
    }
    Ok(HeffterArrayView {
        rows: pa.len(),
        cols: pb.len(),
        cells,
    })
}

/// A Heffter space with every point reduced into `Z_{2v+1}` (`[0, 2v]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSpace {
    pub modulus: u64,
    pub v: usize,
    pub k: usize,
    pub r: usize,
    /// Blocks in the same order (and element order) as the integer space.
    pub classes: Vec<Vec<Vec<u64>>>,
}

/// Reduce a valid space modulo `2v + 1`.
pub fn to_cyclic(h: &HeffterSpace) -> Result<CyclicSpace> {
    h.validate(false).into_result()?;
    let modulus = 2 * h.v as u64 + 1;
    let m = modulus as i64;
    let classes = h
        .to_raw()
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|b| b.into_iter().map(|x| x.rem_euclid(m) as u64).collect())
                .collect()
        })
        .collect();
    Ok(CyclicSpace {
        modulus,
        v: h.v,
        k: h.k,
        r: h.r(),
        classes,
    })
}

/// Ordering key for opaque point labels: integer labels by value, then the
/// rest lexicographically.
fn label_key(label: &str) -> (bool, i128, &str) {
    match label.parse::<i128>() {
        Ok(n) => (false, n, label),
        Err(_) => (true, 0, label),
    }
}

/// A resolvable configuration on opaquely labelled points: `r` partitions of
/// `w` points into blocks of size `n`. Not required to be valid.
///
/// Points are kept in canonical label order and blocks are stored as sorted
/// indices into that order, so [`PlainSpace::relabeled`] is a pure renaming.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlainSpace {
    n: usize,
    points: Vec<String>,
    classes: Vec<Vec<Vec<usize>>>,
}

impl PlainSpace {
    /// Build from labelled blocks. Fails on duplicate point labels or on a
    /// block mentioning an unknown label.
    pub fn new(points: Vec<String>, n: usize, classes: Vec<Vec<Vec<String>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("block size must be positive".into()));
        }
        if classes.is_empty() {
            return Err(Error::Parameter("a space needs at least one class".into()));
        }
        let mut points = points;
        points.sort_by(|a, b| label_key(a).cmp(&label_key(b)));
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::Parameter(format!("duplicate point label {p:?}")));
            }
        }
        let classes = classes
            .into_iter()
            .map(|class| {
                let mut class = class
                    .into_iter()
                    .map(|block| {
                        let mut b = block
                            .iter()
                            .map(|l| {
                                index.get(l).copied().ok_or_else(|| {
                                    Error::NotPartition(format!("{l:?} (unknown label)"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        b.sort_unstable();
                        Ok(b)
                    })
                    .collect::<Result<Vec<_>>>()?;
                class.sort();
                Ok(class)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, points, classes })
    }

    /// Build on points `[0, w-1]` directly from index blocks.
    pub fn from_indices(w: usize, n: usize, classes: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let points = (0..w).map(|i| i.to_string()).collect();
        let classes = classes
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|b| b.into_iter().map(|i| i.to_string()).collect())
                    .collect()
            })
            .collect();
        Self::new(points, n, classes)
    }

    pub fn w(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    /// Blocks as indices into the canonical point order.
    pub fn index_classes(&self) -> &[Vec<Vec<usize>>] {
        &self.classes
    }

    pub fn label_classes(&self) -> Vec<Vec<Vec<String>>> {
        self.classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|b| b.iter().map(|&i| self.points[i].clone()).collect())
                    .collect()
            })
            .collect()
    }

    /// `true` iff the labels are exactly `"0", "1", ..., "w-1"`.
    pub fn is_canonically_labeled(&self) -> bool {
        self.points
            .iter()
            .enumerate()
            .all(|(i, p)| *p == i.to_string())
    }

    /// Rename the points to `[0, w-1]` following the canonical label order.
    pub fn relabeled(&self) -> PlainSpace {
        PlainSpace {
            n: self.n,
            points: (0..self.w()).map(|i| i.to_string()).collect(),
            classes: self.classes.clone(),
        }
    }

    pub fn validate(&self) -> Report {
        validate_plain_space(self)
    }
}

/// Check every resolvable-configuration property of `s`.
pub fn validate_plain_space(s: &PlainSpace) -> Report {
    let mut report = Report::new();
    let (w, n) = (s.w(), s.n);
    let labels = |b: &[usize]| -> Vec<String> { b.iter().map(|&i| s.points[i].clone()).collect() };

    let mut sizes = Vec::new();
    for (c, class) in s.classes.iter().enumerate() {
        for (b, block) in class.iter().enumerate() {
            if block.len() != n {
                sizes.push(Witness::Block {
                    class: c,
                    block: b,
                    elements: labels(block),
                });
            }
        }
    }
    report.record(Check::BlockSize, sizes);

    let mut counts = Vec::new();
    if w % n != 0 {
        counts.push(Witness::Message(format!("n = {n} does not divide w = {w}")));
    }
    for (c, class) in s.classes.iter().enumerate() {
        if class.len() != w / n {
            counts.push(Witness::Count {
                what: format!("blocks in class {c}"),
                expected: w / n,
                found: class.len(),
            });
        }
    }
    report.record(Check::ClassCount, counts);

    let mut partition = Vec::new();
    for (c, class) in s.classes.iter().enumerate() {
        let mut hits = vec![0usize; w];
        for &i in class.iter().flatten() {
            hits[i] += 1;
        }
        for (i, &h) in hits.iter().enumerate() {
            if h != 1 {
                partition.push(Witness::Message(format!(
                    "point {} covered {h} times in class {c}",
                    s.points[i]
                )));
            }
        }
    }
    report.record(Check::Partition, partition);

    let relabel = |ws: Vec<Witness>| -> Vec<Witness> {
        ws.into_iter()
            .map(|wit| match wit {
                Witness::BlockPair {
                    first,
                    second,
                    common,
                } => Witness::BlockPair {
                    first,
                    second,
                    common: common
                        .iter()
                        .map(|i| s.points[i.parse::<usize>().unwrap()].clone())
                        .collect(),
                },
                other => other,
            })
            .collect()
    };
    report.record(
        Check::DistinctBlocks,
        relabel(repeated_blocks(&s.classes, n)),
    );
    report.record(
        Check::Orthogonality,
        relabel(orthogonality_witnesses(&s.classes)),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn blocks(raw: &[&[i64]]) -> Vec<Block> {
        raw.iter()
            .map(|b| Block::new(b.iter().copied()).unwrap())
            .collect()
    }

    #[test]
    fn block_rejects_malformed_input() {
        assert!(Block::new([]).is_err());
        assert!(Block::new([1, 0]).is_err());
        assert!(Block::new([1, 2, 1]).is_err());
        assert!(Block::new([3, -3]).is_err());
        assert_eq!(Block::new([4, -2, 1]).unwrap().elements(), &[-2, 1, 4]);
    }

    #[test]
    fn half_set_examples() {
        assert!(is_half_set(&[1, 4, -2, -3], 4));
        assert!(is_half_set(
            &[2, 4, 6, 9, 10, 11, 12, 15, 17, 19, -1, -3, -5, -7, -8, -13, -14, -16, -18, -20],
            20
        ));
        assert!(!is_half_set(&[1, -1, 2, -3], 4));
        assert!(!is_half_set(&[1, 2, 3], 4));
        assert!(!is_half_set(&[1, 2, 3, 5], 4));
        assert!(!is_half_set(&[0, 1, 2, 3], 4));
    }

    #[test]
    fn zero_sum_examples() {
        assert!(is_zero_sum(
            Block::new([-1, 2, 17, -18]).unwrap().elements()
        ));
        // {1, -1} is not a half-set block, but the predicate is defined on any list.
        assert!(is_zero_sum(&[1, -1]));
        assert!(!is_zero_sum(&[1, 2, 3]));
        assert!(Block::new([5, -3, -2]).unwrap().is_zero_sum());
    }

    #[test]
    fn orthogonality_examples() {
        let h = fixtures::example_20();
        let p1 = h.class(0).blocks();
        let p2 = h.class(1).blocks();
        assert!(partitions_orthogonal(p1, p2).unwrap());
        assert!(!partitions_orthogonal(p1, p1).unwrap());
        let singles = blocks(&[&[1], &[-2], &[3]]);
        assert!(partitions_orthogonal(&singles, &singles).unwrap());
    }

    #[test]
    fn orthogonality_rejects_different_point_sets() {
        let p = blocks(&[&[1, -2], &[3, 4]]);
        let q = blocks(&[&[1, 3], &[-2, 5]]);
        match partitions_orthogonal(&p, &q) {
            Err(Error::NotPartition(point)) => assert!(point.contains('4') || point.contains('5')),
            other => panic!("unexpected {other:?}"),
        }
        let dup = blocks(&[&[1, -2], &[1, 3]]);
        assert!(matches!(
            partitions_orthogonal(&dup, &dup),
            Err(Error::NotPartition(_))
        ));
    }

    #[test]
    fn feasible_r2_examples() {
        assert!(feasible_r2(5, 4, true));
        assert!(!feasible_r2(3, 3, false));
        assert!(feasible_r2(1, 3, false));
        assert!(!feasible_r2(1, 3, true));
        assert!(!feasible_r2(3, 2, true));
        assert!(feasible_r2(2, 2, true));
    }

    #[test]
    fn heffter_array_of_example_20() {
        let h = fixtures::example_20();
        // Blocks are stored sorted; P1 first block {-18,-1,2,17}, P2 first block {-14,-1,6,9}.
        let view = extract_heffter_array(h.class(0), h.class(1)).unwrap();
        assert_eq!(view.rows(), 5);
        assert_eq!(view.cols(), 5);
        let row = h
            .class(0)
            .blocks()
            .iter()
            .position(|b| b.elements() == [-18, -1, 2, 17])
            .unwrap();
        let col = h
            .class(1)
            .blocks()
            .iter()
            .position(|b| b.elements() == [-14, -1, 6, 9])
            .unwrap();
        assert_eq!(view.cell(row, col), Some(-1));
        assert_eq!(view.filled(), 20);

        let view = extract_heffter_array(h.class(0), h.class(2)).unwrap();
        let row = h
            .class(0)
            .blocks()
            .iter()
            .position(|b| b.elements() == [-8, -5, 4, 9])
            .unwrap();
        let col = h
            .class(2)
            .blocks()
            .iter()
            .position(|b| b.elements() == [-20, -1, 10, 11])
            .unwrap();
        assert_eq!(view.cell(row, col), None);
    }

    #[test]
    fn heffter_array_of_singletons_is_diagonal() {
        let s = HeffterSystem::new(3, 1, blocks(&[&[1], &[-2], &[3]])).unwrap();
        let view = extract_heffter_array(&s, &s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(view.cell(i, j).is_some(), i == j);
            }
        }
    }

    #[test]
    fn heffter_array_rejects_non_orthogonal() {
        let h = fixtures::example_20();
        assert!(matches!(
            extract_heffter_array(h.class(0), h.class(0)),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn cyclic_view() {
        let s = HeffterSpace::from_raw(4, 4, vec![vec![vec![1, 4, -2, -3]]], true).unwrap();
        let c = to_cyclic(&s).unwrap();
        assert_eq!(c.modulus, 9);
        let mut b = c.classes[0][0].clone();
        b.sort();
        assert_eq!(b, vec![1, 4, 6, 7]);
        assert_eq!(b.iter().sum::<u64>() % 9, 0);

        let h = fixtures::example_20();
        let c = to_cyclic(&h).unwrap();
        assert_eq!((c.v, c.k, c.r), (20, 4, 3));
        let first = h
            .class(0)
            .blocks()
            .iter()
            .position(|b| b.elements() == [-18, -1, 2, 17])
            .unwrap();
        let mut b = c.classes[0][first].clone();
        b.sort();
        assert_eq!(b, vec![2, 17, 23, 40]);
        for class in &c.classes {
            for block in class {
                assert_eq!(block.iter().sum::<u64>() % 41, 0);
            }
        }
    }

    #[test]
    fn cyclic_view_rejects_invalid() {
        let s = HeffterSpace::from_raw(4, 4, vec![vec![vec![1, 4, 2, -3]]], false).unwrap();
        assert!(matches!(to_cyclic(&s), Err(Error::Invalid(_))));
    }

    #[test]
    fn validate_flags_sign_flip_with_zero_sum_witness() {
        let h = fixtures::example_20();
        let mut raw = h.to_raw();
        let pos = raw[0]
            .iter()
            .position(|b| b == &vec![-18, -1, 2, 17])
            .unwrap();
        raw[0][pos] = vec![-18, 1, 2, 17];
        let bad = HeffterSpace::from_raw(20, 4, raw, true).unwrap();
        let report = bad.validate(true);
        assert!(!report.passed());
        let zs = report.get(Check::ZeroSum).unwrap();
        assert_eq!(zs.witnesses.len(), 1);
        match &zs.witnesses[0] {
            Witness::Block {
                class, elements, ..
            } => {
                assert_eq!(*class, 0);
                assert_eq!(elements, &["-18", "1", "2", "17"]);
            }
            w => panic!("unexpected witness {w}"),
        }
    }

    #[test]
    fn validate_reports_shape_errors() {
        let s = HeffterSpace::from_raw(6, 4, vec![vec![vec![1, 2, -3], vec![4, 5, -6, -3]]], true)
            .unwrap();
        let r = s.validate(true);
        assert!(r.failed(Check::BlockSize));
        assert!(r.failed(Check::ClassCount));
        assert!(r.failed(Check::Partition));
        assert!(r.failed(Check::HalfSet));
    }

    #[test]
    fn validate_detects_orthogonality_and_odd_k() {
        let class = vec![vec![1, 2, -3], vec![-4, -5, -6]];
        let s = HeffterSpace::from_raw(6, 3, vec![class.clone(), class], false).unwrap();
        let r = s.validate(true);
        assert!(r.failed(Check::Orthogonality));
        assert!(r.failed(Check::DistinctBlocks));
        assert!(r.failed(Check::EvenBlockSize));
        assert!(r.failed(Check::ZeroSum));
        assert!(!s
            .validate(false)
            .results
            .iter()
            .any(|c| c.check == Check::EvenBlockSize));
    }

    #[test]
    fn rejects_oversized_v() {
        assert!(HeffterSystem::new(MAX_V + 1, 1, vec![]).is_err());
        assert!(HeffterSystem::new(0, 1, vec![]).is_err());
    }

    #[test]
    fn plain_space_examples() {
        let k4 = PlainSpace::from_indices(
            4,
            2,
            vec![
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0, 2], vec![1, 3]],
                vec![vec![0, 3], vec![1, 2]],
            ],
        )
        .unwrap();
        assert!(k4.validate().passed());

        let trivial = PlainSpace::from_indices(2, 1, vec![vec![vec![0], vec![1]]; 3]).unwrap();
        assert!(trivial.validate().passed());

        let same = PlainSpace::from_indices(4, 2, vec![vec![vec![0, 1], vec![2, 3]]; 2]).unwrap();
        let r = same.validate();
        assert!(r.failed(Check::Orthogonality));
        match &r.get(Check::Orthogonality).unwrap().witnesses[0] {
            Witness::BlockPair { common, .. } => assert_eq!(common, &["0", "1"]),
            w => panic!("unexpected witness {w}"),
        }
    }

    #[test]
    fn plain_space_labels_sort_naturally() {
        let s = PlainSpace::new(
            vec!["10".into(), "2".into(), "b".into(), "a".into()],
            2,
            vec![vec![
                vec!["10".into(), "a".into()],
                vec!["2".into(), "b".into()],
            ]],
        )
        .unwrap();
        assert_eq!(s.points(), ["2", "10", "a", "b"]);
        assert!(!s.is_canonically_labeled());
        let r = s.relabeled();
        assert!(r.is_canonically_labeled());
        assert_eq!(r.index_classes()[0], vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn plain_space_rejects_unknown_labels() {
        let e = PlainSpace::new(vec!["a".into()], 1, vec![vec![vec!["b".into()]]]);
        assert!(matches!(e, Err(Error::NotPartition(_))));
    }

    #[test]
    fn negation_preserves_validity() {
        for h in [fixtures::example_20(), fixtures::example_24()] {
            let n = h.negated();
            assert!(n.validate(true).passed());
            assert_ne!(n, h);
            assert_eq!(n.negated(), h);
        }
    }
}
