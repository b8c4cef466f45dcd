//! Dense board over the edges of `K_n`.
//!
//! Edges are numbered in row-major pair order: `(0,1), (0,2), .., (0,n-1),
//! (1,2), ..`. The numbering is part of the transcript format, so it must
//! not change.
//!
//! Ownership takes one byte per edge. Maker adjacency is kept as one bitset
//! row per vertex so that common-neighbor counts are a popcount over
//! `n / 64` words.

use std::fmt;

use crate::error::{Error, Result};

pub const MIN_BOARD_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An edge `{u, v}` of `K_n` with `u < v`, carrying its linear id.
///
/// The derived ordering compares `(u, v)` first, which coincides with id
/// order on a fixed board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub id: EdgeId,
}

impl Edge {
    /// Canonical edge for the unordered pair `{a, b}` on `K_n`.
    pub fn new(a: usize, b: usize, n: usize) -> Result<Edge> {
        let id = edge_id(a, b, n)?;
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge { u: VertexId(u as u32), v: VertexId(v as u32), id })
    }

    pub fn from_id(id: usize, n: usize) -> Result<Edge> {
        edge_endpoints(id, n)
    }

    #[inline]
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u.index(), self.v.index())
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.u.index() == x || self.v.index() == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u.0, self.v.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Owner {
    Unclaimed = 0,
    Maker = 1,
    Breaker = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Maker,
    Breaker,
}

impl From<Player> for Owner {
    fn from(p: Player) -> Owner {
        match p {
            Player::Maker => Owner::Maker,
            Player::Breaker => Owner::Breaker,
        }
    }
}

#[inline]
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// First id of row `u`, i.e. the id of `(u, u+1)`.
#[inline]
fn row_start(u: usize, n: usize) -> usize {
    u * (2 * n - u - 1) / 2
}

/// Id for an already-ordered pair `u < v < n`. No checks.
#[inline]
pub(crate) fn ordered_id(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    row_start(u, n) + (v - u - 1)
}

pub fn edge_id(a: usize, b: usize, n: usize) -> Result<EdgeId> {
    if a == b {
        return Err(Error::InvalidEdge(format!("self-loop at vertex {a}")));
    }
    if a >= n || b >= n {
        return Err(Error::InvalidEdge(format!("pair ({a},{b}) out of range for n={n}")));
    }
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    Ok(EdgeId(ordered_id(u, v, n) as u32))
}

pub fn edge_endpoints(id: usize, n: usize) -> Result<Edge> {
    if id >= edge_count(n) {
        return Err(Error::InvalidEdge(format!("edge id {id} out of range for n={n} ({} edges)", edge_count(n))));
    }
    let (u, v) = ordered_pair(id, n);
    Ok(Edge { u: VertexId(u as u32), v: VertexId(v as u32), id: EdgeId(id as u32) })
}

/// Inverse of [`ordered_id`] for an in-range id.
pub(crate) fn ordered_pair(id: usize, n: usize) -> (usize, usize) {
    // row_start(u) <= id  <=>  u^2 - (2n-1)u + 2id >= 0, smaller root.
    let m = (2 * n - 1) as f64;
    let disc = (m * m - 8.0 * id as f64).max(0.0);
    let mut u = ((m - disc.sqrt()) / 2.0).floor() as usize;
    u = u.min(n - 2);
    while u > 0 && row_start(u, n) > id {
        u -= 1;
    }
    while u + 1 < n - 1 && row_start(u + 1, n) <= id {
        u += 1;
    }
    let v = id - row_start(u, n) + u + 1;
    (u, v)
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterates the set bits of a bitset row as vertex indices.
pub(crate) fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            }
        })
    })
}

#[inline]
pub(crate) fn test_bit(row: &[u64], x: usize) -> bool {
    (row[x / 64] >> (x % 64)) & 1 == 1
}

/// Ownership of every edge of `K_n` plus Maker adjacency and both players'
/// degrees, maintained on every claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    n: usize,
    words: usize,
    owner: Vec<Owner>,
    maker_adj: Vec<u64>,
    maker_deg: Vec<u32>,
    breaker_deg: Vec<u32>,
    maker_edges: Vec<EdgeId>,
    breaker_edge_count: usize,
}

impl Board {
    pub fn new(n: usize) -> Result<Board> {
        if n < MIN_BOARD_SIZE {
            return Err(Error::InvalidParameter(format!("board size n={n} is below the minimum {MIN_BOARD_SIZE}")));
        }
        if edge_count(n) > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("board size n={n} exceeds the 32-bit edge id range")));
        }
        let words = words_for(n);
        Ok(Board {
            n,
            words,
            owner: vec![Owner::Unclaimed; edge_count(n)],
            maker_adj: vec![0; n * words],
            maker_deg: vec![0; n],
            breaker_deg: vec![0; n],
            maker_edges: Vec::new(),
            breaker_edge_count: 0,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.owner.len()
    }

    pub fn edge(&self, a: usize, b: usize) -> Result<Edge> {
        Edge::new(a, b, self.n)
    }

    pub fn edge_from_id(&self, id: usize) -> Result<Edge> {
        edge_endpoints(id, self.n)
    }

    /// Edge for an in-range pair of distinct vertices, without validation.
    #[inline]
    pub(crate) fn edge_unchecked(&self, a: usize, b: usize) -> Edge {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u: VertexId(u as u32), v: VertexId(v as u32), id: EdgeId(ordered_id(u, v, self.n) as u32) }
    }

    #[inline]
    pub(crate) fn edge_unchecked_id(&self, id: EdgeId) -> Edge {
        let (u, v) = ordered_pair(id.index(), self.n);
        Edge { u: VertexId(u as u32), v: VertexId(v as u32), id }
    }

    #[inline]
    pub fn owner(&self, e: EdgeId) -> Owner {
        self.owner[e.index()]
    }

    /// Owner of `{a, b}` for distinct in-range vertices.
    #[inline]
    pub fn owner_of(&self, a: usize, b: usize) -> Owner {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.owner[ordered_id(u, v, self.n)]
    }

    #[inline]
    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    #[inline]
    pub fn maker_deg(&self, v: usize) -> usize {
        self.maker_deg[v] as usize
    }

    #[inline]
    pub fn breaker_deg(&self, v: usize) -> usize {
        self.breaker_deg[v] as usize
    }

    #[inline]
    pub fn maker_row(&self, v: usize) -> &[u64] {
        &self.maker_adj[v * self.words..(v + 1) * self.words]
    }

    pub fn maker_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.maker_row(v))
    }

    #[inline]
    pub fn has_maker_edge(&self, a: usize, b: usize) -> bool {
        test_bit(self.maker_row(a), b)
    }

    /// `|N_M(a) ∩ N_M(b)|`.
    #[inline]
    pub fn common_maker_neighbors(&self, a: usize, b: usize) -> usize {
        self.maker_row(a).iter().zip(self.maker_row(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }

    /// Number of vertices with Maker degree at least `d`.
    pub fn maker_deg_at_least(&self, d: usize) -> usize {
        self.maker_deg.iter().filter(|&&x| x as usize >= d).count()
    }

    pub fn maker_edge_count(&self) -> usize {
        self.maker_edges.len()
    }

    pub fn breaker_edge_count(&self) -> usize {
        self.breaker_edge_count
    }

    pub fn unclaimed_count(&self) -> usize {
        self.edge_count() - self.maker_edges.len() - self.breaker_edge_count
    }

    /// Maker's edges in claim order.
    pub fn maker_edges(&self) -> &[EdgeId] {
        &self.maker_edges
    }

    pub fn unclaimed_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.owner.iter().enumerate().filter(|(_, &o)| o == Owner::Unclaimed).map(|(i, _)| EdgeId(i as u32))
    }

    pub fn claim(&mut self, player: Player, e: Edge) -> Result<()> {
        let id = e.id.index();
        if id >= self.owner.len() || e.v.index() >= self.n {
            return Err(Error::InvalidEdge(format!("{e} is not an edge of K_{}", self.n)));
        }
        match self.owner[id] {
            Owner::Unclaimed => {}
            prior => return Err(Error::IllegalMove { edge: e, owner: prior }),
        }
        let (u, v) = e.endpoints();
        self.owner[id] = player.into();
        match player {
            Player::Maker => {
                self.maker_adj[u * self.words + v / 64] |= 1 << (v % 64);
                self.maker_adj[v * self.words + u / 64] |= 1 << (u % 64);
                self.maker_deg[u] += 1;
                self.maker_deg[v] += 1;
                self.maker_edges.push(e.id);
            }
            Player::Breaker => {
                self.breaker_deg[u] += 1;
                self.breaker_deg[v] += 1;
                self.breaker_edge_count += 1;
            }
        }
        Ok(())
    }

    /// Recomputes adjacency and degrees from the owner array and reports the
    /// first disagreement with the maintained fields.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let mut maker_deg = vec![0u32; n];
        let mut breaker_deg = vec![0u32; n];
        let mut maker_adj = vec![0u64; n * self.words];
        let (mut makers, mut breakers) = (0usize, 0usize);
        for (id, &o) in self.owner.iter().enumerate() {
            let (u, v) = ordered_pair(id, n);
            match o {
                Owner::Unclaimed => {}
                Owner::Maker => {
                    maker_deg[u] += 1;
                    maker_deg[v] += 1;
                    maker_adj[u * self.words + v / 64] |= 1 << (v % 64);
                    maker_adj[v * self.words + u / 64] |= 1 << (u % 64);
                    makers += 1;
                }
                Owner::Breaker => {
                    breaker_deg[u] += 1;
                    breaker_deg[v] += 1;
                    breakers += 1;
                }
            }
        }
        if maker_deg != self.maker_deg {
            return Err("maker degrees disagree with owner array".into());
        }
        if breaker_deg != self.breaker_deg {
            return Err("breaker degrees disagree with owner array".into());
        }
        if maker_adj != self.maker_adj {
            return Err("maker adjacency disagrees with owner array".into());
        }
        if makers != self.maker_edges.len() || breakers != self.breaker_edge_count {
            return Err(format!(
                "edge counters ({}, {}) disagree with owner array ({makers}, {breakers})",
                self.maker_edges.len(),
                self.breaker_edge_count
            ));
        }
        let sum: u64 = self.maker_deg.iter().map(|&d| d as u64).sum();
        if sum != 2 * makers as u64 {
            return Err("maker degree sum is not twice the edge count".into());
        }
        for v in 0..n {
            if self.maker_row(v).iter().map(|w| w.count_ones()).sum::<u32>() != self.maker_deg[v] {
                return Err(format!("vertex {v}: adjacency size differs from degree"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate_pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    }

    #[test]
    fn edge_id_examples() {
        assert_eq!(edge_id(0, 1, 4).unwrap(), EdgeId(0));
        assert_eq!(edge_id(1, 0, 4).unwrap(), EdgeId(0));
        assert_eq!(edge_id(2, 3, 4).unwrap(), EdgeId(5));
        assert!(matches!(edge_id(2, 2, 4), Err(Error::InvalidEdge(_))));
        assert!(matches!(edge_id(0, 4, 4), Err(Error::InvalidEdge(_))));
    }

    #[test]
    fn edge_endpoints_examples() {
        let e = edge_endpoints(0, 4).unwrap();
        assert_eq!(e.endpoints(), (0, 1));
        assert_eq!(edge_endpoints(5, 4).unwrap().endpoints(), (2, 3));
        assert!(matches!(edge_endpoints(6, 4), Err(Error::InvalidEdge(_))));
    }

    #[test]
    fn numbering_matches_pair_enumeration() {
        for n in [4, 5, 7, 64, 65, 130] {
            for (i, (u, v)) in enumerate_pairs(n).into_iter().enumerate() {
                assert_eq!(edge_id(u, v, n).unwrap().index(), i);
                assert_eq!(edge_endpoints(i, n).unwrap().endpoints(), (u, v));
            }
        }
    }

    #[test]
    fn inverse_holds_at_large_n() {
        let n = 10_000;
        let total = edge_count(n);
        for id in [0, 1, n - 2, n - 1, total / 2, total - 2, total - 1] {
            let e = edge_endpoints(id, n).unwrap();
            assert_eq!(edge_id(e.u.index(), e.v.index(), n).unwrap().index(), id);
        }
    }

    #[test]
    fn new_board_examples() {
        let b = Board::new(4).unwrap();
        assert_eq!(b.edge_count(), 6);
        assert_eq!(b.unclaimed_count(), 6);
        let b = Board::new(10).unwrap();
        assert_eq!(b.unclaimed_count(), 45);
        assert!((0..10).all(|v| b.maker_deg(v) == 0));
        assert!(matches!(Board::new(3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn claim_examples() {
        let mut b = Board::new(6).unwrap();
        let e01 = b.edge(0, 1).unwrap();
        b.claim(Player::Maker, e01).unwrap();
        assert_eq!((b.maker_deg(0), b.maker_deg(1)), (1, 1));
        b.claim(Player::Maker, b.edge(0, 2).unwrap()).unwrap();
        assert_eq!(b.maker_neighbors(0).collect::<Vec<_>>(), vec![1, 2]);

        let mut b = Board::new(6).unwrap();
        b.claim(Player::Breaker, e01).unwrap();
        let err = b.claim(Player::Maker, e01).unwrap_err();
        assert_eq!(err, Error::IllegalMove { edge: e01, owner: Owner::Breaker });
        assert_eq!(b.breaker_deg(0), 1);
        b.audit().unwrap();
    }

    #[test]
    fn audit_catches_nothing_on_mixed_board() {
        let mut b = Board::new(70).unwrap();
        for (i, (u, v)) in enumerate_pairs(70).into_iter().enumerate() {
            let p = match i % 5 {
                0 => Player::Maker,
                1 | 2 => Player::Breaker,
                _ => continue,
            };
            b.claim(p, b.edge(u, v).unwrap()).unwrap();
        }
        b.audit().unwrap();
        assert_eq!(b.common_maker_neighbors(0, 1), {
            let a: Vec<_> = b.maker_neighbors(0).collect();
            b.maker_neighbors(1).filter(|x| a.contains(x)).count()
        });
    }
}
