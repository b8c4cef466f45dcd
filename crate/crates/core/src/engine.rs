//! The referee: round structure, legality, win detection and transcripts.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Board, Edge, Owner, Player};
use crate::params::{validate_params, GameParams};
use crate::strategy::{BreakerStrategy, MakerStrategy, MakerTurn, TransitionReason};
use crate::threat::closing_path;
use crate::transcript::{GameResult, Move, Objective, Transcript, Winner};

#[derive(Clone, Copy, Debug, Default)]
pub struct EngineConfig {
    pub objective: Objective,
    /// Breaker moves first in each round.
    pub breaker_first: bool,
    /// Play even when the parameters are outside the validity region.
    pub force: bool,
    /// Keep a copy of the board at the transition.
    pub keep_snapshot: bool,
}

/// The moment Maker's degree phase ended.
#[derive(Clone, Debug)]
pub struct TransitionRecord {
    pub round: u32,
    /// Maker moves made before the snapshot.
    pub maker_moves: usize,
    pub x_size: usize,
    pub reason: TransitionReason,
    /// Reported by strategies that compute the partition themselves.
    pub d_a_size: Option<usize>,
    pub fallback: bool,
    pub snapshot: Option<Board>,
}

#[derive(Clone, Debug)]
pub struct GameRecord {
    pub transcript: Transcript,
    pub transition: Option<TransitionRecord>,
    pub board: Board,
}

fn fault(who: &str, reason: String) -> Error {
    Error::StrategyFault { strategy: who.to_string(), reason }
}

struct Referee<'a> {
    params: &'a GameParams,
    board: Board,
    moves: Vec<Move>,
    maker_moves: usize,
}

impl Referee<'_> {
    fn breaker_turn(&mut self, breaker: &mut dyn BreakerStrategy, round: u32) -> Result<()> {
        let edges = breaker.respond(&self.board, self.params.q);
        if edges.len() > self.params.q {
            return Err(fault(breaker.name(), format!("claimed {} edges with bias {}", edges.len(), self.params.q)));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in edges {
            self.check_edge(breaker.name(), e)?;
            if !seen.insert(e.id) {
                return Err(fault(breaker.name(), format!("claimed {e} twice in one round")));
            }
            self.board.claim(Player::Breaker, e)?;
            self.moves.push(Move { round, player: Player::Breaker, edge: e });
        }
        Ok(())
    }

    fn check_edge(&self, who: &str, e: Edge) -> Result<()> {
        let n = self.board.n();
        let (u, v) = e.endpoints();
        if u >= v || v >= n || Edge::new(u, v, n).map(|c| c.id) != Ok(e.id) {
            return Err(fault(who, format!("{e} is not a canonical edge of K_{n}")));
        }
        match self.board.owner(e.id) {
            Owner::Unclaimed => Ok(()),
            owner => Err(fault(who, format!("{e} is already owned by {owner:?}"))),
        }
    }
}

/// Plays one game to completion.
///
/// Each round is one Maker edge followed by at most `q` Breaker edges (or
/// the reverse with `breaker_first`). The C4 game ends when a Maker claim
/// closes a 4-cycle or when Maker faces a full board; the partial minimum
/// degree game ends when Maker's degree strategy stops.
pub fn play_game(
    params: &GameParams,
    maker: &mut dyn MakerStrategy,
    breaker: &mut dyn BreakerStrategy,
    cfg: EngineConfig,
) -> Result<GameRecord> {
    if !cfg.force {
        validate_params(params).map_err(Error::InvalidParams)?;
    }
    let d_hat = params.d_hat();
    let mut referee = Referee { params, board: Board::new(params.n)?, moves: Vec::new(), maker_moves: 0 };
    let mut transition: Option<TransitionRecord> = None;
    let mut round = 0u32;

    let (winner, winning_c4) = loop {
        round += 1;
        if cfg.breaker_first {
            referee.breaker_turn(breaker, round)?;
        }

        if cfg.objective == Objective::C4 && referee.board.unclaimed_count() == 0 {
            break (Winner::Breaker, None);
        }
        let turn = maker.next_move(&referee.board)?;
        if let Some(t) = maker.take_transition() {
            debug_assert!(referee.maker_moves <= params.move_bound());
            transition = Some(TransitionRecord {
                round,
                maker_moves: referee.maker_moves,
                x_size: referee.board.maker_deg_at_least(d_hat),
                reason: t.reason,
                d_a_size: t.d_a_size,
                fallback: t.fallback,
                snapshot: cfg.keep_snapshot.then(|| referee.board.clone()),
            });
        }
        match turn {
            MakerTurn::Stop => match cfg.objective {
                Objective::PartialMinDegree => {
                    let won = referee.board.maker_deg_at_least(d_hat) >= params.x_target();
                    break (if won { Winner::Maker } else { Winner::Breaker }, None);
                }
                Objective::C4 => {
                    return Err(fault(maker.name(), "stopped during a C4 game".into()));
                }
            },
            MakerTurn::Claim(e) => {
                referee.check_edge(maker.name(), e)?;
                let (x, y) = e.endpoints();
                let cycle = match cfg.objective {
                    Objective::C4 => closing_path(&referee.board, x, y),
                    Objective::PartialMinDegree => None,
                };
                referee.board.claim(Player::Maker, e)?;
                referee.moves.push(Move { round, player: Player::Maker, edge: e });
                referee.maker_moves += 1;
                if let Some(c) = cycle {
                    break (Winner::Maker, Some(c.map(|v| v as u32)));
                }
            }
        }

        if !cfg.breaker_first {
            referee.breaker_turn(breaker, round)?;
        }
    };

    let winner = match (winner, &transition) {
        (Winner::Breaker, Some(t)) if cfg.objective == Objective::C4 && t.fallback => Winner::PreconditionFailure,
        (w, _) => w,
    };
    let result = GameResult {
        winner,
        rounds: round,
        maker_moves: referee.maker_moves,
        winning_c4,
        phase_transition_round: transition.as_ref().map(|t| t.round),
        x_size: transition.as_ref().map(|t| t.x_size),
        objective: cfg.objective,
    };
    Ok(GameRecord {
        transcript: Transcript { params: *params, moves: referee.moves, result },
        transition,
        board: referee.board,
    })
}
