//! Exact backtracking search for small shiftable `(v, k; r)` Heffter spaces.
//!
//! The search fills class 0 first. Each new block contains the smallest
//! uncovered magnitude, and the sign of a magnitude is chosen when it is
//! first placed (class 0 covers every magnitude, so all signs are fixed once
//! class 0 is complete). Classes 1.. are then partitions of the fixed
//! half-set. Orthogonality is enforced through a co-occurrence table: a point
//! may not join a block that already holds a point it has shared a block
//! with. Within a class that never triggers, since blocks are disjoint.
//!
//! Symmetry breaking:
//! * magnitude 1 is positive (global negation maps solutions to solutions);
//! * blocks of a class are generated in order of their smallest magnitude;
//! * for classes 1.., the block through magnitude 1 has a strictly
//!   increasing second magnitude from class to class (classes 1.. are
//!   interchangeable, and two such blocks cannot share their second point).
//!
//! The search is sequential and deterministic: identical problems explore
//! identical trees.

use std::time::{Duration, Instant};

use crate::space::HeffterSpace;
use crate::{Error, Result};

/// Largest `v` the search accepts (points are kept in 128-bit masks).
pub const MAX_SEARCH_V: usize = 128;

/// Wall-clock budget is checked every this many nodes.
const CLOCK_INTERVAL: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first solution.
    FirstSolution,
    /// Keep going until this many solutions are counted or the tree is exhausted.
    CountUpTo(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    pub v: usize,
    pub k: usize,
    pub r: usize,
    pub time_budget: Duration,
    pub node_limit: Option<u64>,
    pub mode: SearchMode,
}

impl SearchProblem {
    /// First-solution search with a 60 s budget and no node limit.
    pub fn new(v: usize, k: usize, r: usize) -> Result<Self> {
        let p = Self {
            v,
            k,
            r,
            time_budget: Duration::from_secs(60),
            node_limit: None,
            mode: SearchMode::FirstSolution,
        };
        p.check()?;
        Ok(p)
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_node_limit(mut self, limit: Option<u64>) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn check(&self) -> Result<()> {
        let (v, k, r) = (self.v, self.k, self.r);
        if v == 0 || v > MAX_SEARCH_V {
            return Err(Error::Parameter(format!(
                "search needs 1 <= v <= {MAX_SEARCH_V}, got {v}"
            )));
        }
        if k < 2 || k % 2 != 0 {
            return Err(Error::Parameter(format!(
                "shiftable spaces need even k >= 2, got {k}"
            )));
        }
        if v % k != 0 {
            return Err(Error::Parameter(format!("k = {k} does not divide v = {v}")));
        }
        if r == 0 {
            return Err(Error::Parameter("r must be positive".into()));
        }
        if let SearchMode::CountUpTo(0) = self.mode {
            return Err(Error::Parameter(
                "solution count limit must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNoSolution,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// First solution in search order.
    pub solution: Option<HeffterSpace>,
    /// Solutions seen (at most 1 in first-solution mode).
    pub solutions: u64,
    pub nodes_explored: u64,
    /// Largest number of blocks placed simultaneously.
    pub max_depth: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct Searcher<'a> {
    problem: &'a SearchProblem,
    full: u128,
    /// +1 / -1 per magnitude index, 0 while unassigned.
    sign: Vec<i8>,
    /// Magnitudes that already share a block with each magnitude.
    adj: Vec<u128>,
    classes: Vec<Vec<u128>>,
    depth: usize,
    max_depth: usize,
    nodes: u64,
    solutions: u64,
    /// Masks and signs of the first solution.
    first: Option<(Vec<Vec<u128>>, Vec<i8>)>,
    budget_hit: bool,
    start: Instant,
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Partial block under construction.
#[derive(Clone, Copy)]
struct Partial {
    mask: u128,
    last: usize,
    pos_left: usize,
    neg_left: usize,
    sum: i64,
    /// Points still allowed to join: uncovered in this class and not yet
    /// paired with any member.
    avail: u128,
}

impl<'a> Searcher<'a> {
    fn new(problem: &'a SearchProblem) -> Self {
        let v = problem.v;
        Self {
            problem,
            full: if v == 128 {
                u128::MAX
            } else {
                (1u128 << v) - 1
            },
            sign: vec![0; v],
            adj: vec![0; v],
            classes: vec![Vec::new(); problem.r],
            depth: 0,
            max_depth: 0,
            nodes: 0,
            solutions: 0,
            first: None,
            budget_hit: false,
            start: Instant::now(),
        }
    }

    fn tick(&mut self) -> Flow {
        self.nodes += 1;
        if let Some(limit) = self.problem.node_limit {
            if self.nodes > limit {
                self.budget_hit = true;
                return Flow::Stop;
            }
        }
        if self.nodes.is_multiple_of(CLOCK_INTERVAL)
            && self.start.elapsed() >= self.problem.time_budget
        {
            self.budget_hit = true;
            return Flow::Stop;
        }
        Flow::Continue
    }

    fn fill_class(&mut self, class: usize, covered: u128) -> Flow {
        if covered == self.full {
            if class + 1 == self.problem.r {
                return self.record_solution();
            }
            return self.fill_class(class + 1, 0);
        }
        let x = (!covered & self.full).trailing_zeros() as usize;
        let free = !covered & self.full & !(1u128 << x) & !self.adj[x];
        let half = self.problem.k / 2;
        // Magnitude 1 is fixed positive; later classes use fixed signs.
        let signs: &[i8] = if (class == 0 && x == 0) || (class > 0 && self.sign[x] > 0) {
            &[1]
        } else if class > 0 {
            &[-1]
        } else {
            &[1, -1]
        };
        for &s in signs {
            if class == 0 {
                self.sign[x] = s;
            }
            let m = (x + 1) as i64;
            let start = Partial {
                mask: 1u128 << x,
                last: x,
                pos_left: if s > 0 { half - 1 } else { half },
                neg_left: if s < 0 { half - 1 } else { half },
                sum: s as i64 * m,
                avail: free,
            };
            let flow = self.extend(class, covered, start);
            if class == 0 {
                self.sign[x] = 0;
            }
            if flow == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Smallest admissible second magnitude for the block through magnitude 1
    /// in `class`.
    fn second_floor(&self, class: usize) -> usize {
        if class < 2 {
            return 0;
        }
        let prev = self.classes[class - 1][0];
        bits(prev).nth(1).map_or(0, |i| i + 1)
    }

    fn extend(&mut self, class: usize, covered: u128, p: Partial) -> Flow {
        if self.tick() == Flow::Stop {
            return Flow::Stop;
        }
        let v = self.problem.v;
        let remaining = p.pos_left + p.neg_left;
        if remaining == 0 {
            return self.commit(class, covered, p.mask);
        }
        let mut cand = p.avail & !((1u128 << (p.last + 1)) - 1);
        if p.mask == 1 {
            let floor = self.second_floor(class);
            if floor > 0 {
                cand &= !((1u128 << floor) - 1);
            }
        }
        if remaining == 1 {
            let need = -p.sum;
            let ok_sign = if p.pos_left == 1 { need > 0 } else { need < 0 };
            let idx = need.unsigned_abs() as usize;
            if !ok_sign || idx == 0 || idx > v {
                return Flow::Continue;
            }
            let idx = idx - 1;
            if cand >> idx & 1 == 0 {
                return Flow::Continue;
            }
            let s: i8 = if need > 0 { 1 } else { -1 };
            if class > 0 && self.sign[idx] != s {
                return Flow::Continue;
            }
            return self.place(class, covered, p, idx, s);
        }
        for idx in bits(cand) {
            let m = (idx + 1) as i64;
            let options: &[i8] = if class == 0 {
                &[1, -1]
            } else if self.sign[idx] > 0 {
                &[1]
            } else {
                &[-1]
            };
            for &s in options {
                if (s > 0 && p.pos_left == 0) || (s < 0 && p.neg_left == 0) {
                    continue;
                }
                let (pl, nl) = if s > 0 {
                    (p.pos_left - 1, p.neg_left)
                } else {
                    (p.pos_left, p.neg_left - 1)
                };
                let sum = p.sum + s as i64 * m;
                // Remaining magnitudes lie in [m+1, v].
                let (lo_mag, hi_mag) = (m + 1, v as i64);
                let lo = sum + pl as i64 * lo_mag - nl as i64 * hi_mag;
                let hi = sum + pl as i64 * hi_mag - nl as i64 * lo_mag;
                if lo > 0 || hi < 0 {
                    continue;
                }
                if self.place(class, covered, p, idx, s) == Flow::Stop {
                    return Flow::Stop;
                }
            }
        }
        Flow::Continue
    }

    fn place(&mut self, class: usize, covered: u128, p: Partial, idx: usize, s: i8) -> Flow {
        if class == 0 {
            self.sign[idx] = s;
        }
        let next = Partial {
            mask: p.mask | 1u128 << idx,
            last: idx,
            pos_left: p.pos_left - usize::from(s > 0),
            neg_left: p.neg_left - usize::from(s < 0),
            sum: p.sum + s as i64 * (idx + 1) as i64,
            avail: p.avail & !self.adj[idx] & !(1u128 << idx),
        };
        let flow = self.extend(class, covered, next);
        if class == 0 {
            self.sign[idx] = 0;
        }
        flow
    }

    fn commit(&mut self, class: usize, covered: u128, block: u128) -> Flow {
        for b in bits(block) {
            self.adj[b] |= block & !(1u128 << b);
        }
        self.classes[class].push(block);
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        let flow = self.fill_class(class, covered | block);
        self.depth -= 1;
        self.classes[class].pop();
        for b in bits(block) {
            self.adj[b] &= !(block & !(1u128 << b));
        }
        flow
    }

    fn record_solution(&mut self) -> Flow {
        debug_assert!(self.classes.iter().flatten().all(|&b| {
            bits(b)
                .map(|i| self.sign[i] as i64 * (i + 1) as i64)
                .sum::<i64>()
                == 0
        }));
        self.solutions += 1;
        if self.first.is_none() {
            self.first = Some((self.classes.clone(), self.sign.clone()));
        }
        match self.problem.mode {
            SearchMode::FirstSolution => Flow::Stop,
            SearchMode::CountUpTo(limit) if self.solutions >= limit => Flow::Stop,
            SearchMode::CountUpTo(_) => Flow::Continue,
        }
    }

    fn to_space(&self, classes: &[Vec<u128>], signs: &[i8]) -> Result<HeffterSpace> {
        let raw = classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&b| bits(b).map(|i| signs[i] as i64 * (i + 1) as i64).collect())
                    .collect()
            })
            .collect();
        HeffterSpace::from_raw(self.problem.v, self.problem.k, raw, true)
    }
}

/// Search for a shiftable `(v, k; r)` Heffter space.
pub fn search_heffter_space(problem: &SearchProblem) -> Result<SearchOutcome> {
    problem.check()?;
    let mut s = Searcher::new(problem);
    s.fill_class(0, 0);
    let elapsed = s.start.elapsed();
    let solution = match &s.first {
        Some((classes, signs)) => {
            let space = s.to_space(classes, signs)?;
            let report = space.validate(true);
            if !report.passed() {
                return Err(Error::Internal(format!(
                    "search produced an invalid space:\n{report}"
                )));
            }
            Some(space)
        }
        None => None,
    };
    let status = if solution.is_some() {
        SearchStatus::Found
    } else if s.budget_hit {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::ExhaustedNoSolution
    };
    Ok(SearchOutcome {
        status,
        solution,
        solutions: s.solutions,
        nodes_explored: s.nodes,
        max_depth: s.max_depth,
        elapsed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Check;

    /// Independent enumeration: all shiftable `(v, k)` systems on half-sets
    /// containing +1, as sorted lists of sorted blocks.
    fn brute_force_systems(v: i64, k: usize) -> Vec<Vec<Vec<i64>>> {
        fn partitions(
            points: &[i64],
            k: usize,
            out: &mut Vec<Vec<Vec<i64>>>,
            acc: &mut Vec<Vec<i64>>,
        ) {
            if points.is_empty() {
                out.push(acc.clone());
                return;
            }
            let first = points[0];
            let rest = &points[1..];
            // All (k-1)-subsets of rest.
            let n = rest.len();
            let mut idx: Vec<usize> = (0..k - 1).collect();
            if k - 1 > n {
                return;
            }
            loop {
                let mut block: Vec<i64> = idx.iter().map(|&i| rest[i]).collect();
                block.push(first);
                block.sort();
                let pos = block.iter().filter(|&&x| x > 0).count();
                if block.iter().sum::<i64>() == 0 && 2 * pos == k {
                    let remaining: Vec<i64> = rest
                        .iter()
                        .copied()
                        .filter(|x| !block.contains(x))
                        .collect();
                    acc.push(block);
                    partitions(&remaining, k, out, acc);
                    acc.pop();
                }
                // next combination
                let mut i = k - 1;
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    if idx[i] < n - (k - 1) + i {
                        idx[i] += 1;
                        for j in i + 1..k - 1 {
                            idx[j] = idx[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        return;
                    }
                }
            }
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << (v - 1)) {
            let mut pts: Vec<i64> = vec![1];
            for m in 2..=v {
                pts.push(if mask >> (m - 2) & 1 == 1 { -m } else { m });
            }
            // Order by magnitude so "first" is the smallest magnitude.
            pts.sort_by_key(|x| x.abs());
            partitions(&pts, k, &mut out, &mut Vec::new());
        }
        for p in &mut out {
            p.sort();
        }
        out
    }

    fn orthogonal(p: &[Vec<i64>], q: &[Vec<i64>]) -> bool {
        p.iter().all(|a| {
            q.iter()
                .all(|b| a.iter().filter(|x| b.contains(x)).count() <= 1)
        })
    }

    fn same_points(p: &[Vec<i64>], q: &[Vec<i64>]) -> bool {
        let mut a: Vec<i64> = p.concat();
        let mut b: Vec<i64> = q.concat();
        a.sort();
        b.sort();
        a == b
    }

    fn count(v: usize, k: usize, r: usize) -> SearchOutcome {
        let p = SearchProblem::new(v, k, r)
            .unwrap()
            .with_mode(SearchMode::CountUpTo(u64::MAX));
        search_heffter_space(&p).unwrap()
    }

    #[test]
    fn finds_four_four_one() {
        let out = search_heffter_space(&SearchProblem::new(4, 4, 1).unwrap()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let s = out.solution.unwrap();
        assert_eq!(s.to_raw(), vec![vec![vec![-3, -2, 1, 4]]]);
        assert!(s.validate(true).passed());
    }

    #[test]
    fn finds_sixteen_four_two() {
        let out = search_heffter_space(&SearchProblem::new(16, 4, 2).unwrap()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let s = out.solution.unwrap();
        assert_eq!((s.v(), s.k(), s.r()), (16, 4, 2));
        assert!(s.validate(true).passed());
    }

    #[test]
    fn counts_match_brute_force() {
        for v in [4i64, 8, 12] {
            let systems = brute_force_systems(v, 4);
            assert_eq!(
                count(v as usize, 4, 1).solutions,
                systems.len() as u64,
                "v = {v}"
            );
        }
        // Ordered orthogonal pairs on a common half-set.
        let systems = brute_force_systems(8, 4);
        let pairs = systems
            .iter()
            .flat_map(|p| systems.iter().map(move |q| (p, q)))
            .filter(|(p, q)| same_points(p, q) && orthogonal(p, q))
            .count();
        // Two orthogonal partitions into v/k blocks of size k need v/k >= k.
        assert_eq!(pairs, 0);
        let out = count(8, 4, 2);
        assert_eq!(out.solutions, 0);
        assert_eq!(out.status, SearchStatus::ExhaustedNoSolution);
    }

    #[test]
    fn counted_solutions_are_valid_and_first_matches() {
        let first = search_heffter_space(&SearchProblem::new(16, 4, 2).unwrap()).unwrap();
        let p = SearchProblem::new(16, 4, 2)
            .unwrap()
            .with_mode(SearchMode::CountUpTo(50));
        let some = search_heffter_space(&p).unwrap();
        assert_eq!(some.status, SearchStatus::Found);
        assert_eq!(some.solutions, 50);
        assert_eq!(some.solution, first.solution);
    }

    #[test]
    fn exhausts_when_no_solution() {
        // Blocks {a, -b} with a = b are impossible, so no shiftable (v, 2) system exists.
        let out = search_heffter_space(&SearchProblem::new(4, 2, 1).unwrap()).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNoSolution);
        assert!(out.solution.is_none());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SearchProblem::new(6, 4, 1).is_err());
        assert!(SearchProblem::new(9, 3, 1).is_err());
        assert!(SearchProblem::new(8, 4, 0).is_err());
        assert!(SearchProblem::new(256, 4, 1).is_err());
        let p = SearchProblem::new(8, 4, 1)
            .unwrap()
            .with_mode(SearchMode::CountUpTo(0));
        assert!(search_heffter_space(&p).is_err());
    }

    #[test]
    fn node_limit_reports_budget() {
        let p = SearchProblem::new(20, 4, 3)
            .unwrap()
            .with_node_limit(Some(1000));
        let out = search_heffter_space(&p).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert!(out.max_depth > 0);
        assert_eq!(out.nodes_explored, 1001);
    }

    #[test]
    fn deterministic() {
        let p = SearchProblem::new(16, 4, 3).unwrap();
        let a = search_heffter_space(&p).unwrap();
        let b = search_heffter_space(&p).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.nodes_explored, b.nodes_explored);
        if let Some(s) = a.solution {
            assert!(!s.validate(true).failed(Check::Orthogonality));
        }
    }

    #[test]
    fn larger_budget_keeps_found_result() {
        let small = SearchProblem::new(16, 4, 3)
            .unwrap()
            .with_budget(Duration::from_secs(5));
        let large = small.clone().with_budget(Duration::from_secs(50));
        let a = search_heffter_space(&small).unwrap();
        let b = search_heffter_space(&large).unwrap();
        assert_eq!(a.status, SearchStatus::Found);
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn finds_twenty_four_three() {
        let out = search_heffter_space(&SearchProblem::new(20, 4, 3).unwrap()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert!(out.solution.unwrap().validate(true).passed());
    }

    #[test]
    fn later_classes_respect_fixed_signs() {
        let p = SearchProblem::new(16, 4, 3)
            .unwrap()
            .with_mode(SearchMode::CountUpTo(200));
        let out = search_heffter_space(&p).unwrap();
        assert_eq!(out.solutions, 200);
        assert!(out.solution.unwrap().validate(true).passed());
    }
}
