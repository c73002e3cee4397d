//! Sequence-matching router.
//!
//! The current and goal configurations are aligned with a unit-cost edit
//! distance. The first contiguous block of mismatches in the alignment becomes
//! one span replacement on the current configuration; if splicing it in would
//! leave a junction without a graph edge, the span grows over neighbouring
//! matches and junctions are patched with shortest paths. Replacing the whole
//! configuration by the goal always works, so every action strictly reduces
//! the distance to the goal.

use alloc::vec::Vec;

use crate::configuration::{reverse, simplify, tunnels_paired, validate, Configuration};
use crate::graph::{SpatialGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    Match { a: usize, b: usize },
    Substitute { a: usize, b: usize },
    Delete { a: usize },
    Insert { b: usize },
}

impl EditOp {
    pub fn is_match(&self) -> bool {
        matches!(self, EditOp::Match { .. })
    }

    /// Elements consumed from the current (`a`) and goal (`b`) sequences.
    fn advance(&self) -> (usize, usize) {
        match self {
            EditOp::Match { .. } | EditOp::Substitute { .. } => (1, 1),
            EditOp::Delete { .. } => (1, 0),
            EditOp::Insert { .. } => (0, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub distance: usize,
    pub ops: Vec<EditOp>,
}

/// Full `(|a|+1) × (|b|+1)` edit-distance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    cols: usize,
    cells: Vec<u32>,
}

impl DpTable {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.cols + j] as usize
    }

    pub fn rows(&self) -> usize {
        self.cells.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Levenshtein distance with unit costs, keeping the table for [`backtrace`].
pub fn edit_distance(a: &[VertexId], b: &[VertexId]) -> (usize, DpTable) {
    let cols = b.len() + 1;
    let mut cells = alloc::vec![0u32; (a.len() + 1) * cols];
    for j in 0..cols {
        cells[j] = j as u32;
    }
    for i in 1..=a.len() {
        let row = i * cols;
        let prev = row - cols;
        cells[row] = i as u32;
        for j in 1..cols {
            let sub = cells[prev + j - 1] + u32::from(a[i - 1] != b[j - 1]);
            let del = cells[prev + j] + 1;
            let ins = cells[row + j - 1] + 1;
            cells[row + j] = sub.min(del).min(ins);
        }
    }
    let table = DpTable { cols, cells };
    (table.get(a.len(), b.len()), table)
}

/// Two-row distance without the table.
pub fn distance(a: &[VertexId], b: &[VertexId]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = alloc::vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(x != y)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// One optimal alignment. Walking back from the last cell, each step prefers
/// Match, then Substitute, Delete, Insert.
pub fn backtrace(table: &DpTable, a: &[VertexId], b: &[VertexId]) -> Alignment {
    let (mut i, mut j) = (a.len(), b.len());
    let mut ops = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = table.get(i, j);
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] && table.get(i - 1, j - 1) == here {
            ops.push(EditOp::Match { a: i - 1, b: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && table.get(i - 1, j - 1) + 1 == here {
            ops.push(EditOp::Substitute { a: i - 1, b: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && table.get(i - 1, j) + 1 == here {
            ops.push(EditOp::Delete { a: i - 1 });
            i -= 1;
        } else {
            ops.push(EditOp::Insert { b: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    Alignment { distance: table.get(a.len(), b.len()), ops }
}

/// Distance to `goal` read in either direction.
pub fn bidirectional_distance(current: &Configuration, goal: &Configuration) -> usize {
    let fwd = distance(current.as_slice(), goal.as_slice());
    if fwd == 0 {
        return 0;
    }
    let rev = reverse(goal);
    fwd.min(distance(current.as_slice(), rev.as_slice()))
}

/// Picks the reading direction of `goal` closest to `current`.
///
/// On a tie the lexicographically smaller of `goal` and its reverse wins, so
/// a goal and its reverse always orient identically.
pub fn orient_goal(current: &Configuration, goal: &Configuration) -> (Configuration, usize) {
    let rev = reverse(goal);
    let fwd_d = distance(current.as_slice(), goal.as_slice());
    let rev_d = distance(current.as_slice(), rev.as_slice());
    if fwd_d < rev_d || (fwd_d == rev_d && goal.as_slice() <= rev.as_slice()) {
        (goal.clone(), fwd_d)
    } else {
        (rev, rev_d)
    }
}

/// Replace `current[span_start..span_end]` with `replacement`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingAction {
    pub span_start: usize,
    pub span_end: usize,
    pub replacement: Vec<VertexId>,
    pub expected_distance_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanOutcome {
    Done,
    Next { action: RoutingAction, oriented_goal: Configuration },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RouterError {
    #[error("current configuration is invalid at index {0}")]
    InvalidCurrent(usize),
    #[error("goal configuration is invalid at index {0}")]
    InvalidGoal(usize),
    #[error("NoProgress: no valid action reduces the distance {0}")]
    NoProgress(usize),
    #[error("SpanOutOfRange: span {start}..{end} on a configuration of length {len}")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
}

/// Applies `action` to `c`, collapsing repeated consecutive vertices.
pub fn project(c: &Configuration, action: &RoutingAction) -> Result<Configuration, RouterError> {
    let s = c.as_slice();
    if action.span_start > action.span_end || action.span_end > s.len() {
        return Err(RouterError::SpanOutOfRange { start: action.span_start, end: action.span_end, len: s.len() });
    }
    Ok(splice(s, action.span_start, action.span_end, &action.replacement))
}

fn splice(s: &[VertexId], start: usize, end: usize, replacement: &[VertexId]) -> Configuration {
    let mut out = Vec::with_capacity(s.len() - (end - start) + replacement.len());
    out.extend_from_slice(&s[..start]);
    out.extend_from_slice(replacement);
    out.extend_from_slice(&s[end..]);
    Configuration::new(out).dedup()
}

struct Planner<'a> {
    current: &'a Configuration,
    goal: &'a Configuration,
    g: &'a SpatialGraph,
    distance: usize,
    // an already simplified goal must also be approached after simplification
    check_simplified: bool,
    // a goal with whole tunnel traversals keeps them whole on the way
    check_paired: bool,
}

impl Planner<'_> {
    fn accept(&self, start: usize, end: usize, replacement: &[VertexId]) -> Option<RoutingAction> {
        let projected = splice(self.current.as_slice(), start, end, replacement);
        if projected.is_empty() || validate(&projected, self.g).is_err() {
            return None;
        }
        if self.check_paired && !tunnels_paired(&projected, self.g) {
            return None;
        }
        let after = bidirectional_distance(&projected, self.goal);
        if after >= self.distance {
            return None;
        }
        if self.check_simplified && bidirectional_distance(&simplify(&projected), self.goal) >= self.distance {
            return None;
        }
        Some(RoutingAction { span_start: start, span_end: end, replacement: replacement.to_vec(), expected_distance_after: after })
    }

    /// `replacement` with shortest-path fragments added where it meets the
    /// retained parts of the current configuration without an edge.
    fn bridged(&self, start: usize, end: usize, replacement: &[VertexId]) -> Option<Vec<VertexId>> {
        let s = self.current.as_slice();
        let left = start.checked_sub(1).map(|i| s[i]);
        let right = s.get(end).copied();
        let interior = |u: VertexId, v: VertexId| -> Option<Vec<VertexId>> {
            if u == v || self.g.adjacent(u, v) {
                return Some(Vec::new());
            }
            let p = self.g.shortest_path(u, v).ok()?;
            Some(p[1..p.len() - 1].to_vec())
        };
        let mut out = Vec::new();
        match (replacement.first(), replacement.last()) {
            (Some(&first), Some(&last)) => {
                if let Some(l) = left {
                    out.extend(interior(l, first)?);
                }
                out.extend_from_slice(replacement);
                if let Some(r) = right {
                    out.extend(interior(last, r)?);
                }
            }
            _ => match (left, right) {
                (Some(l), Some(r)) => out.extend(interior(l, r)?),
                _ => return None,
            },
        }
        (out.as_slice() != replacement).then_some(out)
    }

    fn try_range(&self, apos: &[usize], bpos: &[usize], oriented: &[VertexId], lo: usize, hi: usize) -> Option<RoutingAction> {
        let (start, end) = (apos[lo], apos[hi]);
        let replacement = &oriented[bpos[lo]..bpos[hi]];
        self.accept(start, end, replacement)
            .or_else(|| self.bridged(start, end, replacement).and_then(|r| self.accept(start, end, &r)))
    }
}

/// The next routing move from `current` toward `goal` (either direction).
pub fn next_action(current: &Configuration, goal: &Configuration, g: &SpatialGraph) -> Result<PlanOutcome, RouterError> {
    validate(current, g).map_err(RouterError::InvalidCurrent)?;
    validate(goal, g).map_err(RouterError::InvalidGoal)?;
    let (oriented, d) = orient_goal(current, goal);
    if d == 0 {
        return Ok(PlanOutcome::Done);
    }
    let (a, b) = (current.as_slice(), oriented.as_slice());
    let (_, table) = edit_distance(a, b);
    let alignment = backtrace(&table, a, b);
    let ops = &alignment.ops;

    let mut apos = Vec::with_capacity(ops.len() + 1);
    let mut bpos = Vec::with_capacity(ops.len() + 1);
    let (mut i, mut j) = (0, 0);
    for op in ops {
        apos.push(i);
        bpos.push(j);
        let (da, db) = op.advance();
        i += da;
        j += db;
    }
    apos.push(i);
    bpos.push(j);

    let n = ops.len();
    let r0 = ops.iter().position(|op| !op.is_match()).expect("nonzero distance has a mismatch");
    let r1 = ops[r0..].iter().position(EditOp::is_match).map_or(n, |k| r0 + k);

    let planner = Planner {
        current,
        goal,
        g,
        distance: d,
        check_simplified: simplify(goal) == *goal,
        check_paired: tunnels_paired(goal, g),
    };
    let found = |lo, hi| planner.try_range(&apos, &bpos, b, lo, hi);

    let (mut lo, mut hi) = (r0, r1);
    let mut action = found(lo, hi);
    while action.is_none() && (lo > 0 || hi < n) {
        if lo > 0 {
            lo -= 1;
            action = found(lo, hi);
            if action.is_some() {
                break;
            }
        }
        if hi < n {
            hi += 1;
            action = found(lo, hi);
        }
    }
    match action {
        Some(action) => Ok(PlanOutcome::Next { action, oriented_goal: oriented }),
        None => Err(RouterError::NoProgress(d)),
    }
}
