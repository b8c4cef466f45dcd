//! Lemma-level diagnostics on frozen boards.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Board, Owner, Player};
use crate::params::{npow, snap, GameParams};
use crate::threat::dangerous_partition;
use crate::transcript::{replay_moves, Transcript};

/// One inequality with both sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Check {
    fn le(lhs: f64, rhs: f64) -> Check {
        Check { holds: lhs <= rhs, lhs, rhs }
    }

    fn ge(lhs: f64, rhs: f64) -> Check {
        Check { holds: lhs >= rhs, lhs, rhs }
    }

    fn gt(lhs: f64, rhs: f64) -> Check {
        Check { holds: lhs > rhs, lhs, rhs }
    }

    /// `lhs - rhs` oriented so that positive means slack.
    pub fn margin(&self, upper: bool) -> f64 {
        if upper {
            self.rhs - self.lhs
        } else {
            self.lhs - self.rhs
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    /// FNV-1a over the owner array, in hex.
    pub snapshot: String,
    /// Whether the board is the one at the phase transition.
    pub canonical: bool,
    pub maker_moves: usize,
    pub b_size: usize,
    pub x_size: usize,
    pub d_size: usize,
    pub d_direct: usize,
    pub d_indirect: usize,
    pub d_active: usize,
    /// `|B| <= (c delta / 2) n^2`
    pub lemma_i: Check,
    /// `|D| >= C(ceil(beta n), 2)`
    pub lemma_ii: Check,
    /// `D \ D_d = D_i ∪ D_a`, sides are the two cardinalities.
    pub lemma_iii: Check,
    /// `|D \ D_d| >= C(ceil(beta n), 2) - (c delta / 2) n^2`
    pub lemma_iv: Check,
    /// `|B| >= |D_i| (1 - c/delta^2 - n^(-2/3))`
    pub lemma_v: Check,
    /// `|D_a| > 0`
    pub lemma_vi: Check,
    pub theorem2_ok: bool,
}

impl LemmaReport {
    pub fn flags(&self) -> [bool; 6] {
        [
            self.lemma_i.holds,
            self.lemma_ii.holds,
            self.lemma_iii.holds,
            self.lemma_iv.holds,
            self.lemma_v.holds,
            self.lemma_vi.holds,
        ]
    }
}

pub(crate) fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn choose2(k: usize) -> f64 {
    (k as f64) * (k as f64 - 1.0) / 2.0
}

/// Evaluates the six parts of the lemma on `board`. `canonical` is false;
/// callers holding the transition snapshot set it.
pub fn lemma_report(board: &Board, params: &GameParams, maker_moves: usize) -> LemmaReport {
    let n = params.n as f64;
    let part = dangerous_partition(board, params);
    let b = board.breaker_edge_count();
    let x = board.maker_deg_at_least(params.d_hat());
    let target_pairs = choose2(params.x_target());
    let breaker_cap = snap(params.c * params.delta / 2.0 * n * n);
    let not_direct = part.dangerous.len() - part.direct.len();
    let factor = 1.0 - params.c / (params.delta * params.delta) - 1.0 / npow(n, 2.0 / 3.0);

    LemmaReport {
        snapshot: format!("{:016x}", fnv1a64(board.owners().iter().map(|&o| o as u8))),
        canonical: false,
        maker_moves,
        b_size: b,
        x_size: x,
        d_size: part.dangerous.len(),
        d_direct: part.direct.len(),
        d_indirect: part.indirect.len(),
        d_active: part.active.len(),
        lemma_i: Check::le(b as f64, breaker_cap),
        lemma_ii: Check::ge(part.dangerous.len() as f64, target_pairs),
        lemma_iii: Check {
            holds: not_direct == part.indirect.len() + part.active.len(),
            lhs: not_direct as f64,
            rhs: (part.indirect.len() + part.active.len()) as f64,
        },
        lemma_iv: Check::ge(not_direct as f64, target_pairs - breaker_cap),
        lemma_v: Check::ge(b as f64, part.indirect.len() as f64 * factor),
        lemma_vi: Check::gt(part.active.len() as f64, 0.0),
        theorem2_ok: x >= params.x_target(),
    }
}

/// Board at the transition of a transcript together with the number of
/// Maker moves made before it.
pub fn transition_snapshot(t: &Transcript) -> Result<(Board, usize)> {
    let cut =
        t.moves_before_transition().ok_or_else(|| Error::NotApplicable("transcript has no phase transition".into()))?;
    let prefix = &t.moves[..cut];
    let board = replay_moves(&t.params, prefix)?;
    let maker_moves = prefix.iter().filter(|m| m.player == Player::Maker).count();
    Ok((board, maker_moves))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem2Check {
    pub pass: bool,
    pub x_size: usize,
    pub x_target: usize,
    pub maker_moves: usize,
    pub move_bound: usize,
    /// `histogram[d]` vertices of Maker degree `d`; filled on failure only.
    pub histogram: Option<Vec<usize>>,
}

pub fn degree_histogram(board: &Board) -> Vec<usize> {
    let max = (0..board.n()).map(|v| board.maker_deg(v)).max().unwrap_or(0);
    let mut h = vec![0; max + 1];
    for v in 0..board.n() {
        h[board.maker_deg(v)] += 1;
    }
    h
}

/// Checks at the transition that `|X| >= ceil(beta n)` and that Maker used
/// at most `ceil((delta/2) n^(2-alpha)) + n` moves.
pub fn theorem2_check(t: &Transcript) -> Result<Theorem2Check> {
    let (board, maker_moves) = transition_snapshot(t)?;
    let p = &t.params;
    let x_size = board.maker_deg_at_least(p.d_hat());
    let pass = x_size >= p.x_target() && maker_moves <= p.move_bound();
    Ok(Theorem2Check {
        pass,
        x_size,
        x_target: p.x_target(),
        maker_moves,
        move_bound: p.move_bound(),
        histogram: (!pass).then(|| degree_histogram(&board)),
    })
}

/// `|B| <= q * maker_moves` with one extra batch when Breaker moved first.
pub fn breaker_bookkeeping(board: &Board, q: usize, maker_moves: usize, breaker_first: bool) -> bool {
    board.breaker_edge_count() <= q * (maker_moves + breaker_first as usize)
}

/// Counts owners; a cheap consistency probe for reports.
pub fn owner_counts(board: &Board) -> [usize; 3] {
    let mut c = [0; 3];
    for &o in board.owners() {
        c[match o {
            Owner::Unclaimed => 0,
            Owner::Maker => 1,
            Owner::Breaker => 2,
        }] += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play_game, EngineConfig};
    use crate::strategy::{BreakerKind, MakerKind, StrategyConfig};
    use crate::transcript::Objective;

    #[test]
    fn empty_board_report() {
        let p = GameParams::standard(100, 0.05, 0);
        let r = lemma_report(&Board::new(100).unwrap(), &p, 0);
        assert_eq!((r.b_size, r.x_size, r.d_size, r.d_direct, r.d_indirect, r.d_active), (0, 0, 0, 0, 0, 0));
        assert!(r.lemma_i.holds && r.lemma_iii.holds);
        assert!(!r.lemma_ii.holds && !r.lemma_vi.holds);
        assert!(!r.canonical && !r.theorem2_ok);
        assert_eq!(r.lemma_i.rhs, 275.0);
        assert_eq!(r.lemma_ii.rhs, 2415.0);
    }

    #[test]
    fn no_transition_is_not_applicable() {
        let p = GameParams::with_bias(8, 1, 1.1, 0.7, 2.0 / 3.0, 0);
        let mut m = MakerKind::C4.build(&p, StrategyConfig::default());
        let mut b = BreakerKind::Random.build(&p);
        let cfg = EngineConfig { force: true, ..Default::default() };
        let rec = play_game(&p, m.as_mut(), b.as_mut(), cfg).unwrap();
        if rec.transcript.result.phase_transition_round.is_none() {
            assert!(matches!(theorem2_check(&rec.transcript), Err(Error::NotApplicable(_))));
        }
    }

    fn degree_game(p: &GameParams, kind: BreakerKind) -> crate::engine::GameRecord {
        let mut m = MakerKind::DDegree.build(p, StrategyConfig::default());
        let mut b = kind.build(p);
        let cfg = EngineConfig {
            objective: Objective::PartialMinDegree,
            force: true,
            keep_snapshot: true,
            ..Default::default()
        };
        play_game(p, m.as_mut(), b.as_mut(), cfg).unwrap()
    }

    #[test]
    fn snapshot_from_transcript_matches_engine() {
        let p = GameParams::standard(100, 0.05, 9);
        let rec = degree_game(&p, BreakerKind::DegreeAttack);
        let (board, moves) = transition_snapshot(&rec.transcript).unwrap();
        let t = rec.transition.unwrap();
        assert_eq!(Some(&board), t.snapshot.as_ref());
        assert_eq!(moves, t.maker_moves);
        let r = lemma_report(&board, &p, moves);
        assert!(breaker_bookkeeping(&board, p.q, moves, false));
        assert!(r.lemma_iii.holds);
    }

    #[test]
    fn passive_breaker_pigeonhole() {
        // q = 0 makes Breaker passive; Maker needs at most floor(n d_hat / 2) edges
        let p = GameParams::with_bias(100, 0, 1.1, 0.7, 2.0 / 3.0, 4);
        let rec = degree_game(&p, BreakerKind::Random);
        let c = theorem2_check(&rec.transcript).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.maker_moves <= 100 * p.d_hat() / 2);
        assert_eq!(owner_counts(&rec.board)[2], 0);
    }

    #[test]
    fn histogram_sums_to_n() {
        let p = GameParams::standard(100, 0.05, 1);
        let rec = degree_game(&p, BreakerKind::Random);
        assert_eq!(degree_histogram(&rec.board).iter().sum::<usize>(), 100);
    }
}
