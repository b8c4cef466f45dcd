use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::BreakerStrategy;
use crate::graph::{Board, Edge, EdgeId, Owner};
use crate::params::GameParams;
use crate::threat::{threat_count_fast, unclaimed_threats};

const REJECTION_TRIES: usize = 32;

/// `min(q, #unclaimed)` distinct unclaimed edges, uniformly at random.
pub fn breaker_random<R: Rng + ?Sized>(board: &Board, q: usize, rng: &mut R) -> Vec<Edge> {
    let want = q.min(board.unclaimed_count());
    let mut chosen: Vec<Edge> = Vec::with_capacity(want);
    let mut taken: HashSet<EdgeId> = HashSet::with_capacity(want);
    'pick: while chosen.len() < want {
        for _ in 0..REJECTION_TRIES {
            let id = EdgeId(rng.random_range(0..board.edge_count()) as u32);
            if board.owner(id) == Owner::Unclaimed && taken.insert(id) {
                chosen.push(board.edge_unchecked_id(id));
                continue 'pick;
            }
        }
        // Sparse remainder: sample the rest from an explicit list.
        let rest: Vec<EdgeId> = board.unclaimed_edges().filter(|id| !taken.contains(id)).collect();
        for i in sample(rng, rest.len(), want - chosen.len()) {
            chosen.push(board.edge_unchecked_id(rest[i]));
        }
    }
    chosen
}

/// Unclaimed edges ranked by `|T_e|` descending then id ascending; only the
/// first `k` entries are ordered.
fn top_by_threats(board: &Board, k: usize) -> Vec<(usize, Edge)> {
    let mut all: Vec<(usize, Edge)> = board
        .unclaimed_edges()
        .map(|id| {
            let e = board.edge_unchecked_id(id);
            (threat_count_fast(board, e), e)
        })
        .collect();
    let key = |a: &(usize, Edge), b: &(usize, Edge)| b.0.cmp(&a.0).then(a.1.id.cmp(&b.1.id));
    if k < all.len() {
        all.select_nth_unstable_by(k, key);
        all.truncate(k);
    }
    all.sort_unstable_by(key);
    all
}

/// Greedy deactivation: claim the edges with the most threats while they
/// are dangerous (the top edge always), then the unclaimed threats of the
/// most threatening edge left over, then fill by threat count.
pub fn breaker_deactivator(board: &Board, q: usize, params: &GameParams) -> Vec<Edge> {
    let want = q.min(board.unclaimed_count());
    if want == 0 {
        return Vec::new();
    }
    let ranked = top_by_threats(board, 2 * want + 1);
    let threshold = params.danger_threshold();
    let mut chosen: Vec<Edge> = Vec::with_capacity(want);
    for (i, &(t, e)) in ranked.iter().take(want).enumerate() {
        if i > 0 && (t as f64) < threshold {
            break;
        }
        chosen.push(e);
    }
    if chosen.len() < want {
        if let Some(&(_, r)) = ranked.get(chosen.len()) {
            for b in unclaimed_threats(board, r) {
                if chosen.len() == want {
                    break;
                }
                if !chosen.contains(&b) {
                    chosen.push(b);
                }
            }
        }
    }
    for &(_, e) in &ranked {
        if chosen.len() == want {
            break;
        }
        if !chosen.contains(&e) {
            chosen.push(e);
        }
    }
    chosen
}

/// Starves the degree strategy: claims unclaimed edges between vertices of
/// Maker degree below `d_hat` in id order, then any unclaimed edges.
pub fn breaker_degree_attack(board: &Board, q: usize, d_hat: usize) -> Vec<Edge> {
    let want = q.min(board.unclaimed_count());
    let mut chosen = Vec::with_capacity(want);
    if want == 0 {
        return chosen;
    }
    let low: Vec<usize> = (0..board.n()).filter(|&v| board.maker_deg(v) < d_hat).collect();
    'outer: for (i, &u) in low.iter().enumerate() {
        for &w in &low[i + 1..] {
            if board.owner_of(u, w) == Owner::Unclaimed {
                chosen.push(board.edge_unchecked(u, w));
                if chosen.len() == want {
                    break 'outer;
                }
            }
        }
    }
    if chosen.len() < want {
        for id in board.unclaimed_edges() {
            let e = board.edge_unchecked_id(id);
            if !chosen.contains(&e) {
                chosen.push(e);
                if chosen.len() == want {
                    break;
                }
            }
        }
    }
    chosen
}

pub struct RandomBreaker {
    rng: ChaCha8Rng,
}

impl RandomBreaker {
    pub fn new(rng: ChaCha8Rng) -> Self {
        RandomBreaker { rng }
    }
}

impl BreakerStrategy for RandomBreaker {
    fn name(&self) -> &'static str {
        "breaker:random"
    }

    fn respond(&mut self, board: &Board, q: usize) -> Vec<Edge> {
        breaker_random(board, q, &mut self.rng)
    }
}

pub struct DeactivatorBreaker {
    params: GameParams,
}

impl DeactivatorBreaker {
    pub fn new(params: GameParams) -> Self {
        DeactivatorBreaker { params }
    }
}

impl BreakerStrategy for DeactivatorBreaker {
    fn name(&self) -> &'static str {
        "breaker:deactivator"
    }

    fn respond(&mut self, board: &Board, q: usize) -> Vec<Edge> {
        breaker_deactivator(board, q, &self.params)
    }
}

pub struct DegreeAttackBreaker {
    d_hat: usize,
}

impl DegreeAttackBreaker {
    pub fn new(d_hat: usize) -> Self {
        DegreeAttackBreaker { d_hat }
    }
}

impl BreakerStrategy for DegreeAttackBreaker {
    fn name(&self) -> &'static str {
        "breaker:degree-attack"
    }

    fn respond(&mut self, board: &Board, q: usize) -> Vec<Edge> {
        breaker_degree_attack(board, q, self.d_hat)
    }
}
