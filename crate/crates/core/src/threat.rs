//! Threat sets, dangerous-edge classification and C4 detection.
//!
//! For an edge `a = {a1, a2}` the threats are the edges `{b1, b2}` with
//! `b1 ∈ N_M(a1)` and `b2 ∈ N_M(a2)`, excluding `a` itself. Ownership of
//! `b` plays no role in membership. If Maker owns `a` and any threat, he
//! owns a 4-cycle (or the threat touches an endpoint of `a`, which only
//! happens when the threat is itself a Maker edge).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{iter_bits, test_bit, Board, Edge, EdgeId, Owner};
use crate::params::GameParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreatClass {
    NotDangerous,
    DirectlyDeactivated,
    IndirectlyDeactivated,
    Active,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThreatStats {
    pub edge: Edge,
    /// `|T_e|`
    pub total: usize,
    /// `|T_e ∩ B|`
    pub covered: usize,
    /// `|T_e \ B|`, Maker-owned threats included.
    pub uncovered: usize,
    pub class: ThreatClass,
}

/// Literal enumeration of `N_M(a1) × N_M(a2)` into unordered pairs, minus `a`.
pub fn threats_of_oracle(board: &Board, a: Edge) -> BTreeSet<Edge> {
    let (a1, a2) = a.endpoints();
    let left: Vec<usize> = board.maker_neighbors(a1).collect();
    let right: Vec<usize> = board.maker_neighbors(a2).collect();
    let mut out = BTreeSet::new();
    for &b1 in &left {
        for &b2 in &right {
            if b1 != b2 {
                out.insert(board.edge_unchecked(b1, b2));
            }
        }
    }
    out.remove(&a);
    out
}

/// `|T_a|` from set sizes: with `k = |N_M(a1) ∩ N_M(a2)|`,
/// `|A|·|B| − k − C(k,2) − [a ∈ M]`.
///
/// Ordered pairs with `b1 = b2` contribute `k`; a pair of common neighbors
/// appears in both orders (`C(k,2)`); `a` appears once exactly when
/// `a2 ∈ N_M(a1)`.
#[inline]
pub fn threat_count_fast(board: &Board, a: Edge) -> usize {
    let (a1, a2) = a.endpoints();
    let (da, db) = (board.maker_deg(a1), board.maker_deg(a2));
    if da == 0 || db == 0 {
        return 0;
    }
    let k = board.common_maker_neighbors(a1, a2);
    let in_m = usize::from(board.has_maker_edge(a1, a2));
    da * db - k - k * k.saturating_sub(1) / 2 - in_m
}

/// Visits each threat of `a` once, in no particular order.
fn for_each_threat(board: &Board, a: Edge, mut f: impl FnMut(usize, usize)) {
    let (a1, a2) = a.endpoints();
    let row1 = board.maker_row(a1);
    let row2 = board.maker_row(a2);
    for b1 in iter_bits(row1) {
        // (b1, b2) and (b2, b1) name the same edge when both are common
        // neighbors; keep the ordering with b1 < b2.
        let b1_common = test_bit(row2, b1);
        for b2 in iter_bits(row2) {
            if b1 == b2 {
                continue;
            }
            if b1_common && b2 < b1 && test_bit(row1, b2) {
                continue;
            }
            if (b1 == a2 && b2 == a1) || (b1 == a1 && b2 == a2) {
                continue;
            }
            f(b1, b2);
        }
    }
}

/// `|T_a \ B|`: threats not owned by Breaker.
pub fn uncovered_threat_count(board: &Board, a: Edge) -> usize {
    let mut c = 0;
    for_each_threat(board, a, |x, y| {
        if board.owner_of(x, y) != Owner::Breaker {
            c += 1;
        }
    });
    c
}

/// Unclaimed threats of `a` in ascending id order.
pub fn unclaimed_threats(board: &Board, a: Edge) -> Vec<Edge> {
    let mut v = Vec::new();
    for_each_threat(board, a, |x, y| {
        if board.owner_of(x, y) == Owner::Unclaimed {
            v.push(board.edge_unchecked(x, y));
        }
    });
    v.sort_unstable();
    v
}

fn class_from(
    board: &Board,
    a: Edge,
    total: usize,
    uncovered: impl FnOnce() -> usize,
    params: &GameParams,
) -> ThreatClass {
    if (total as f64) < params.danger_threshold() {
        ThreatClass::NotDangerous
    } else if board.owner(a.id) == Owner::Breaker {
        ThreatClass::DirectlyDeactivated
    } else if uncovered() <= params.q {
        ThreatClass::IndirectlyDeactivated
    } else {
        ThreatClass::Active
    }
}

pub fn classify(board: &Board, a: Edge, params: &GameParams) -> ThreatClass {
    let total = threat_count_fast(board, a);
    class_from(board, a, total, || uncovered_threat_count(board, a), params)
}

pub fn threat_stats(board: &Board, a: Edge, params: &GameParams) -> ThreatStats {
    let total = threat_count_fast(board, a);
    let uncovered = uncovered_threat_count(board, a);
    ThreatStats {
        edge: a,
        total,
        covered: total - uncovered,
        uncovered,
        class: class_from(board, a, total, || uncovered, params),
    }
}

/// `D` split into `D_d`, `D_i`, `D_a`; every list is in ascending id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DangerPartition {
    pub dangerous: Vec<EdgeId>,
    pub direct: Vec<EdgeId>,
    pub indirect: Vec<EdgeId>,
    pub active: Vec<EdgeId>,
}

pub fn dangerous_partition(board: &Board, params: &GameParams) -> DangerPartition {
    let n = board.n();
    let threshold = params.danger_threshold();
    let mut part = DangerPartition::default();
    let mut id = 0u32;
    for u in 0..n {
        let du = board.maker_deg(u);
        for v in u + 1..n {
            let eid = EdgeId(id);
            id += 1;
            // |T| <= deg(u) deg(v)
            if ((du * board.maker_deg(v)) as f64) < threshold {
                continue;
            }
            let e = board.edge_unchecked(u, v);
            match classify(board, e, params) {
                ThreatClass::NotDangerous => continue,
                ThreatClass::DirectlyDeactivated => part.direct.push(eid),
                ThreatClass::IndirectlyDeactivated => part.indirect.push(eid),
                ThreatClass::Active => part.active.push(eid),
            }
            part.dangerous.push(eid);
        }
    }
    part
}

/// Some Maker path `x - a - b - y` on four distinct vertices for the pair
/// `{x, y}`, returned as the cycle `[x, a, b, y]`.
pub fn closing_path(board: &Board, x: usize, y: usize) -> Option<[usize; 4]> {
    for a in board.maker_neighbors(x) {
        if a == y {
            continue;
        }
        for b in board.maker_neighbors(y) {
            if b != x && b != a && board.has_maker_edge(a, b) {
                return Some([x, a, b, y]);
            }
        }
    }
    None
}

/// Whether adding `e` to Maker's graph closes a 4-cycle through `e`.
pub fn completes_c4(board: &Board, e: Edge) -> bool {
    let (x, y) = e.endpoints();
    closing_path(board, x, y).is_some()
}

/// Whether Maker's graph contains a 4-cycle: two vertices with at least
/// two common Maker neighbors.
pub fn contains_c4(board: &Board) -> bool {
    find_c4(board).is_some()
}

/// A Maker 4-cycle `[u, a, v, b]` if one exists.
pub fn find_c4(board: &Board) -> Option<[usize; 4]> {
    let n = board.n();
    for u in 0..n {
        if board.maker_deg(u) < 2 {
            continue;
        }
        for v in u + 1..n {
            if board.maker_deg(v) < 2 || board.common_maker_neighbors(u, v) < 2 {
                continue;
            }
            let common: Vec<u64> = board.maker_row(u).iter().zip(board.maker_row(v)).map(|(p, q)| p & q).collect();
            let mut it = iter_bits(&common);
            let (a, b) = (it.next()?, it.next()?);
            return Some([u, a, v, b]);
        }
    }
    None
}

/// Exhaustive 4-vertex-subset scan for a Maker 4-cycle, for small boards.
pub fn c4_exhaustive_scan(board: &Board) -> bool {
    let n = board.n();
    let m = |a: usize, b: usize| board.owner_of(a, b) == Owner::Maker;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    // The three distinct 4-cycles on {a,b,c,d}.
                    if (m(a, b) && m(b, c) && m(c, d) && m(d, a))
                        || (m(a, b) && m(b, d) && m(d, c) && m(c, a))
                        || (m(a, c) && m(c, b) && m(b, d) && m(d, a))
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Some unclaimed edge that closes a Maker 4-cycle, smallest id first.
/// Scans every Maker edge as the middle of a path of length three.
pub fn closing_edge_scan(board: &Board) -> Option<Edge> {
    let n = board.n();
    let mut best: Option<Edge> = None;
    for &mid in board.maker_edges() {
        let (a, b) = crate::graph::ordered_pair(mid.index(), n);
        for x in board.maker_neighbors(a) {
            if x == b {
                continue;
            }
            for y in board.maker_neighbors(b) {
                if y == a || y == x || board.owner_of(x, y) != Owner::Unclaimed {
                    continue;
                }
                let e = board.edge_unchecked(x, y);
                if best.is_none_or(|cur| e.id < cur.id) {
                    best = Some(e);
                }
            }
        }
    }
    best
}

/// Incremental record of edges that would close a Maker 4-cycle.
///
/// Fed from the board's Maker edge log; every path of length three through
/// a newly seen Maker edge is inspected once, so the work per Maker edge is
/// `O(d^2)` for maximum Maker degree `d`.
#[derive(Clone, Debug, Default)]
pub struct ClosingEdges {
    seen: usize,
    marked: Vec<u64>,
    stack: Vec<u32>,
}

impl ClosingEdges {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, board: &Board, x: usize, y: usize) {
        if x == y || board.owner_of(x, y) != Owner::Unclaimed {
            return;
        }
        let id = board.edge_unchecked(x, y).id.index();
        let (w, bit) = (id / 64, 1u64 << (id % 64));
        if self.marked[w] & bit == 0 {
            self.marked[w] |= bit;
            self.stack.push(id as u32);
        }
    }

    pub fn sync(&mut self, board: &Board) {
        if self.marked.is_empty() {
            self.marked = vec![0; board.edge_count().div_ceil(64)];
        }
        let n = board.n();
        while self.seen < board.maker_edge_count() {
            let id = board.maker_edges()[self.seen];
            self.seen += 1;
            let (a, b) = crate::graph::ordered_pair(id.index(), n);
            // new edge in the middle: x - a - b - y
            for x in board.maker_neighbors(a).filter(|&x| x != b) {
                for y in board.maker_neighbors(b).filter(|&y| y != a) {
                    self.push(board, x, y);
                }
            }
            // new edge at an end: a - b - c - y and b - a - c - y
            for (s, t) in [(a, b), (b, a)] {
                for c in board.maker_neighbors(t).filter(|&c| c != s) {
                    for y in board.maker_neighbors(c).filter(|&y| y != t && y != s) {
                        self.push(board, s, y);
                    }
                }
            }
        }
    }

    /// An unclaimed closing edge, if any. Entries that were claimed since
    /// they were recorded are dropped for good.
    pub fn find(&mut self, board: &Board) -> Option<Edge> {
        self.sync(board);
        while let Some(&top) = self.stack.last() {
            if board.owner(EdgeId(top)) == Owner::Unclaimed {
                return board.edge_from_id(top as usize).ok();
            }
            self.stack.pop();
        }
        None
    }
}
