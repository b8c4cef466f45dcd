//! Random boards for property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Board, Edge, Player};
use crate::threat::completes_c4;

/// Every edge independently goes to Maker with `p_maker`, to Breaker with
/// `p_breaker`, and stays unclaimed otherwise.
pub fn random_board<R: Rng + ?Sized>(n: usize, p_maker: f64, p_breaker: f64, rng: &mut R) -> Board {
    let mut board = Board::new(n).expect("board size");
    for id in 0..board.edge_count() {
        let e = board.edge_from_id(id).expect("in range");
        let x: f64 = rng.random();
        if x < p_maker {
            board.claim(Player::Maker, e).expect("fresh edge");
        } else if x < p_maker + p_breaker {
            board.claim(Player::Breaker, e).expect("fresh edge");
        }
    }
    board
}

/// Random board with densities drawn per board, so both sparse and dense
/// Maker graphs show up.
pub fn random_mixed_board<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Board {
    let pm = rng.random_range(0.0..0.6);
    let pb = rng.random_range(0.0..(1.0 - pm));
    random_board(n, pm, pb, rng)
}

/// C4-free Maker graph: edges are offered in random order and kept unless
/// they would close a 4-cycle, until `max_edges` are kept. Leftover edges go
/// to Breaker with probability `p_breaker`.
pub fn random_c4_free<R: Rng + ?Sized>(n: usize, max_edges: usize, p_breaker: f64, rng: &mut R) -> Board {
    let mut board = Board::new(n).expect("board size");
    let mut ids: Vec<usize> = (0..board.edge_count()).collect();
    ids.shuffle(rng);
    let mut rest = Vec::new();
    for id in ids {
        let e = board.edge_from_id(id).expect("in range");
        if board.maker_edge_count() < max_edges && !completes_c4(&board, e) {
            board.claim(Player::Maker, e).expect("fresh edge");
        } else {
            rest.push(e);
        }
    }
    for e in rest {
        if rng.random_bool(p_breaker) {
            board.claim(Player::Breaker, e).expect("fresh edge");
        }
    }
    board
}

/// `k` distinct random edges of `board` (any owner).
pub fn sample_edges<R: Rng + ?Sized>(board: &Board, k: usize, rng: &mut R) -> Vec<Edge> {
    let m = board.edge_count();
    rand::seq::index::sample(rng, m, k.min(m)).into_iter().map(|id| board.edge_from_id(id).expect("in range")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::seeded_rng;
    use crate::threat::{c4_exhaustive_scan, contains_c4};

    #[test]
    fn c4_free_boards_are_c4_free() {
        let mut rng = seeded_rng(3, 0);
        for _ in 0..20 {
            let b = random_c4_free(10, usize::MAX, 0.3, &mut rng);
            assert!(!contains_c4(&b) && !c4_exhaustive_scan(&b));
            b.audit().unwrap();
        }
    }

    #[test]
    fn densities_are_respected_at_the_extremes() {
        let mut rng = seeded_rng(1, 0);
        let b = random_board(9, 1.0, 0.0, &mut rng);
        assert_eq!(b.maker_edge_count(), 36);
        let b = random_board(9, 0.0, 1.0, &mut rng);
        assert_eq!(b.breaker_edge_count(), 36);
    }
}
