//! Distance-weighted cost matrices over the surviving candidates, optimal
//! assignment via shortest augmenting paths, and Murty-style partitioning
//! for ranked enumeration of complete linkings.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::frame::{CandidateMatrix, Linking, ProofFrame, VertexId};

/// A square or rectangular cost grid; `None` cells are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostGrid {
    pub row_ids: Vec<VertexId>,
    pub col_ids: Vec<VertexId>,
    cells: Vec<Option<u64>>,
}

impl CostGrid {
    pub fn new(
        row_ids: Vec<VertexId>,
        col_ids: Vec<VertexId>,
        cells: Vec<Option<u64>>,
    ) -> CostGrid {
        assert_eq!(cells.len(), row_ids.len() * col_ids.len());
        CostGrid {
            row_ids,
            col_ids,
            cells,
        }
    }

    /// Grid with anonymous 1-based row ids and row-count-offset col ids.
    pub fn from_rows(rows: Vec<Vec<Option<u64>>>) -> CostGrid {
        let n = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == m), "ragged cost matrix");
        CostGrid {
            row_ids: (1..=n).collect(),
            col_ids: (n + 1..=n + m).collect(),
            cells: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<u64> {
        self.cells[row * self.cols() + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Option<u64>) {
        let cols = self.cols();
        self.cells[row * cols + col] = value;
    }
}

impl fmt::Display for CostGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                if c > 0 {
                    write!(f, " ")?;
                }
                match self.get(r, c) {
                    Some(w) => write!(f, "{w}")?,
                    None => write!(f, "inf")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Per-atom-name cost blocks of a frame.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    pub blocks: Vec<(String, CostGrid)>,
}

impl CostMatrix {
    /// Block-diagonal composite: cross-block cells are infinite.
    pub fn composite(&self) -> CostGrid {
        let mut row_ids = Vec::new();
        let mut col_ids = Vec::new();
        for (_, g) in &self.blocks {
            row_ids.extend_from_slice(&g.row_ids);
            col_ids.extend_from_slice(&g.col_ids);
        }
        let mut grid = CostGrid {
            cells: vec![None; row_ids.len() * col_ids.len()],
            row_ids,
            col_ids,
        };
        let mut row_base = 0;
        let mut col_base = 0;
        for (_, g) in &self.blocks {
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    grid.set(row_base + r, col_base + c, g.get(r, c));
                }
            }
            row_base += g.rows();
            col_base += g.cols();
        }
        grid
    }
}

/// Distance-weighted costs over the candidate matrix: admissible cells get
/// the position gap of the two occurrences, pruned cells are infinite.
pub fn cost_matrix(frame: &ProofFrame, cands: &CandidateMatrix) -> CostMatrix {
    let mut blocks = Vec::new();
    for block in &cands.blocks {
        let mut cells = Vec::with_capacity(block.neg.len() * block.pos.len());
        for (r, neg) in block.neg.iter().enumerate() {
            for (c, pos) in block.pos.iter().enumerate() {
                if block.get(r, c) {
                    let np = frame.position(neg.id).expect("negative occurrence");
                    let pp = frame.position(pos.id).expect("positive occurrence");
                    cells.push(Some(np.abs_diff(pp) as u64));
                } else {
                    cells.push(None);
                }
            }
        }
        blocks.push((
            block.name.clone(),
            CostGrid {
                row_ids: block.neg.iter().map(|o| o.id).collect(),
                col_ids: block.pos.iter().map(|o| o.id).collect(),
                cells,
            },
        ));
    }
    CostMatrix { blocks }
}

/// A complete matching with its total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedLinking {
    pub linking: Linking,
    pub weight: u64,
}

/// Errors from the assignment routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignError {
    NotSquare { rows: usize, cols: usize },
}

impl fmt::Display for AssignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignError::NotSquare { rows, cols } => {
                write!(f, "cost matrix is {rows}x{cols}, not square")
            }
        }
    }
}

impl std::error::Error for AssignError {}

// Shortest-augmenting-path assignment with potentials. Returns the matched
// column per row, or None when no finite perfect matching exists.
fn solve_assignment(grid: &CostGrid) -> Option<(u64, Vec<usize>)> {
    let n = grid.rows();
    if n == 0 {
        return Some((0, Vec::new()));
    }
    const UNSET: usize = usize::MAX;
    // 1-based with a virtual column 0, per the classic formulation;
    // unreachable columns keep `minv[j] == None` so infeasibility is caught
    // instead of fabricating huge potentials.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut matched_row = vec![UNSET; n + 1]; // p[j]: row matched to column j
    let mut way = vec![0usize; n + 1];
    for i in 0..n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<i128>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta: Option<i128> = None;
            let mut j1 = UNSET;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(cost) = grid.get(i0, j - 1) {
                    let cur = cost as i128 - u[i0 + 1] - v[j];
                    if minv[j].is_none_or(|m| cur < m) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(m) = minv[j] {
                    if delta.is_none_or(|d| m < d) {
                        delta = Some(m);
                        j1 = j;
                    }
                }
            }
            let Some(delta) = delta else {
                return None; // no augmenting path: infeasible
            };
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j] + 1] += delta;
                    v[j] -= delta;
                } else if let Some(m) = minv[j] {
                    minv[j] = Some(m - delta);
                }
            }
            j0 = j1;
            if matched_row[j0] == UNSET {
                break;
            }
        }
        // augment along the alternating path
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![UNSET; n];
    for j in 1..=n {
        assignment[matched_row[j]] = j - 1;
    }
    let mut total: u64 = 0;
    for (r, &c) in assignment.iter().enumerate() {
        total += grid.get(r, c)?;
    }
    Some((total, assignment))
}

fn ranked(grid: &CostGrid, weight: u64, assignment: &[usize]) -> RankedLinking {
    let linking = Linking::from_pairs(
        assignment
            .iter()
            .enumerate()
            .map(|(r, &c)| (grid.row_ids[r], grid.col_ids[c])),
    );
    RankedLinking { linking, weight }
}

/// Minimum-weight perfect matching, or `None` when every matching is
/// infinite.
pub fn hungarian(grid: &CostGrid) -> Result<Option<RankedLinking>, AssignError> {
    if !grid.is_square() {
        return Err(AssignError::NotSquare {
            rows: grid.rows(),
            cols: grid.cols(),
        });
    }
    Ok(solve_assignment(grid).map(|(w, a)| ranked(grid, w, &a)))
}

// A Murty subproblem: a forced partial assignment plus forbidden cells.
// The ordering is only there to satisfy the heap; entries tie-break on the
// solution pairs before the subproblem is ever compared.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Subproblem {
    forced: Vec<(usize, usize)>,
    forbidden: BTreeSet<(usize, usize)>,
}

impl Subproblem {
    // Solve the reduced problem; the returned assignment covers all rows.
    fn solve(&self, grid: &CostGrid) -> Option<(u64, Vec<usize>)> {
        let n = grid.rows();
        let forced_rows: BTreeSet<usize> = self.forced.iter().map(|&(r, _)| r).collect();
        let forced_cols: BTreeSet<usize> = self.forced.iter().map(|&(_, c)| c).collect();
        let mut base: u64 = 0;
        for &(r, c) in &self.forced {
            base += grid.get(r, c)?;
        }
        let sub_rows: Vec<usize> = (0..n).filter(|r| !forced_rows.contains(r)).collect();
        let sub_cols: Vec<usize> = (0..n).filter(|c| !forced_cols.contains(c)).collect();
        let mut cells = Vec::with_capacity(sub_rows.len() * sub_cols.len());
        for &r in &sub_rows {
            for &c in &sub_cols {
                if self.forbidden.contains(&(r, c)) {
                    cells.push(None);
                } else {
                    cells.push(grid.get(r, c));
                }
            }
        }
        let sub = CostGrid {
            row_ids: sub_rows.clone(),
            col_ids: sub_cols.clone(),
            cells,
        };
        let (w, a) = solve_assignment(&sub)?;
        let mut assignment = vec![usize::MAX; n];
        for &(r, c) in &self.forced {
            assignment[r] = c;
        }
        for (i, &j) in a.iter().enumerate() {
            assignment[sub_rows[i]] = sub_cols[j];
        }
        Some((base + w, assignment))
    }

    // The lexicographically smallest assignment among this subproblem's
    // optima, fixed row by row. Keeps ranked output deterministic under
    // weight ties.
    fn solve_lex_min(&self, grid: &CostGrid) -> Option<(u64, Vec<usize>)> {
        let (best, _) = self.solve(grid)?;
        let n = grid.rows();
        let mut fixed = self.clone();
        for r in 0..n {
            if fixed.forced.iter().any(|&(fr, _)| fr == r) {
                continue;
            }
            let taken: BTreeSet<usize> = fixed.forced.iter().map(|&(_, c)| c).collect();
            for c in 0..n {
                if taken.contains(&c)
                    || fixed.forbidden.contains(&(r, c))
                    || grid.get(r, c).is_none()
                {
                    continue;
                }
                let mut trial = fixed.clone();
                trial.forced.push((r, c));
                if trial.solve(grid).is_some_and(|(w, _)| w == best) {
                    fixed = trial;
                    break;
                }
            }
        }
        fixed.solve(grid).map(|(w, a)| {
            debug_assert_eq!(w, best);
            (w, a)
        })
    }
}

/// Up to `k` distinct finite-weight matchings in non-decreasing weight
/// order, ties broken by lexicographic pair order.
pub fn murty_kbest(grid: &CostGrid, k: usize) -> Result<Vec<RankedLinking>, AssignError> {
    if !grid.is_square() {
        return Err(AssignError::NotSquare {
            rows: grid.rows(),
            cols: grid.cols(),
        });
    }
    let mut out = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    // heap of (weight, assignment pairs) for deterministic tie-breaking
    type Entry = (u64, Vec<(usize, usize)>, Subproblem);
    let mut heap: BinaryHeap<Reverse<Entry>> = BinaryHeap::new();
    let root = Subproblem {
        forced: Vec::new(),
        forbidden: BTreeSet::new(),
    };
    if let Some((w, a)) = root.solve_lex_min(grid) {
        let pairs: Vec<(usize, usize)> = a.iter().enumerate().map(|(r, &c)| (r, c)).collect();
        heap.push(Reverse((w, pairs, root)));
    }
    while let Some(Reverse((weight, pairs, sub))) = heap.pop() {
        let assignment: Vec<usize> = pairs.iter().map(|&(_, c)| c).collect();
        out.push(ranked(grid, weight, &assignment));
        if out.len() == k {
            break;
        }
        // Partition the remaining space around this solution.
        let forced_rows: BTreeSet<usize> = sub.forced.iter().map(|&(r, _)| r).collect();
        let free_pairs: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(r, _)| !forced_rows.contains(&r))
            .collect();
        let mut forced = sub.forced.clone();
        for (i, &pair) in free_pairs.iter().enumerate() {
            let mut forbidden = sub.forbidden.clone();
            forbidden.insert(pair);
            let child = Subproblem {
                forced: forced.clone(),
                forbidden,
            };
            if let Some((w, a)) = child.solve_lex_min(grid) {
                let child_pairs: Vec<(usize, usize)> =
                    a.iter().enumerate().map(|(r, &c)| (r, c)).collect();
                heap.push(Reverse((w, child_pairs, child)));
            }
            if i + 1 < free_pairs.len() {
                forced.push(pair);
            }
        }
    }
    Ok(out)
}

/// Total distance weight of a complete linking under the frame's positions.
pub fn linking_weight(frame: &ProofFrame, linking: &Linking) -> u64 {
    linking
        .iter()
        .map(|l| {
            let n = frame.position(l.neg).expect("negative occurrence");
            let p = frame.position(l.pos).expect("positive occurrence");
            n.abs_diff(p) as u64
        })
        .sum()
}
