//! Game transcripts and their JSON form.
//!
//! ```json
//! {"params":{"n":..,"q":..,"c":..,"delta":..,"alpha":..,"beta":..,"seed":..},
//!  "moves":[{"round":1,"player":"M","edge":[u,v]}, ..],
//!  "result":{"winner":"maker","rounds":..,"maker_moves":..,"winning_c4":[a,b,c,d]|null,
//!            "phase_transition_round":..|null,"x_size":..|null,"objective":"c4"}}
//! ```
//!
//! `objective` may be absent when reading; it then defaults to `c4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Board, Edge, Owner, Player};
use crate::params::GameParams;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Maker wins by owning a 4-cycle.
    #[default]
    C4,
    /// Maker wins by owning a graph where `ceil(beta n)` vertices reach the
    /// degree cap. The game ends when Maker's degree strategy stops.
    PartialMinDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Winner {
    Maker,
    /// Breaker wins: the board ran out (C4 game) or the degree target was
    /// missed (partial minimum degree game).
    Breaker,
    /// No active dangerous edge existed at the transition and Maker did
    /// not win.
    PreconditionFailure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub round: u32,
    pub player: Player,
    pub edge: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub winner: Winner,
    /// Rounds started, including the one in which the game was decided.
    pub rounds: u32,
    pub maker_moves: usize,
    /// Cycle order; consecutive entries (cyclically) are Maker edges.
    pub winning_c4: Option<[u32; 4]>,
    pub phase_transition_round: Option<u32>,
    /// `|X|` at the transition.
    pub x_size: Option<usize>,
    #[serde(default)]
    pub objective: Objective,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub params: GameParams,
    pub moves: Vec<Move>,
    pub result: GameResult,
}

#[derive(Serialize, Deserialize)]
struct ParamsWire {
    n: usize,
    q: usize,
    c: f64,
    delta: f64,
    alpha: f64,
    beta: f64,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct MoveWire {
    round: u32,
    player: String,
    edge: [u32; 2],
}

#[derive(Serialize, Deserialize)]
struct TranscriptWire {
    params: ParamsWire,
    moves: Vec<MoveWire>,
    result: GameResult,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        let p = &self.params;
        let wire = TranscriptWire {
            params: ParamsWire { n: p.n, q: p.q, c: p.c, delta: p.delta, alpha: p.alpha, beta: p.beta, seed: p.seed },
            moves: self
                .moves
                .iter()
                .map(|m| MoveWire {
                    round: m.round,
                    player: match m.player {
                        Player::Maker => "M".into(),
                        Player::Breaker => "B".into(),
                    },
                    edge: [m.edge.u.0, m.edge.v.0],
                })
                .collect(),
            result: self.result.clone(),
        };
        serde_json::to_string(&wire).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Transcript> {
        let wire: TranscriptWire = serde_json::from_str(s).map_err(|e| Error::Transcript(e.to_string()))?;
        let p = wire.params;
        let params = GameParams { n: p.n, q: p.q, c: p.c, delta: p.delta, alpha: p.alpha, beta: p.beta, seed: p.seed };
        let moves = wire
            .moves
            .into_iter()
            .map(|m| {
                let player = match m.player.as_str() {
                    "M" => Player::Maker,
                    "B" => Player::Breaker,
                    other => return Err(Error::Transcript(format!("unknown player `{other}`"))),
                };
                let edge = Edge::new(m.edge[0] as usize, m.edge[1] as usize, params.n)?;
                Ok(Move { round: m.round, player, edge })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transcript { params, moves, result: wire.result })
    }

    /// Maker moves made before the transition snapshot, if there was one.
    /// The snapshot sits just before the first Maker move of the transition
    /// round.
    pub fn moves_before_transition(&self) -> Option<usize> {
        let r = self.result.phase_transition_round?;
        Some(self.moves.iter().position(|m| m.player == Player::Maker && m.round >= r).unwrap_or(self.moves.len()))
    }
}

/// Applies `moves` to a fresh board, enforcing legality and the bias: one
/// Maker edge and at most `q` Breaker edges per round, rounds nondecreasing.
pub fn replay_moves(params: &GameParams, moves: &[Move]) -> Result<Board> {
    let mut board = Board::new(params.n)?;
    let mut round = 0u32;
    let (mut maker_in_round, mut breaker_in_round) = (0usize, 0usize);
    for (i, m) in moves.iter().enumerate() {
        if m.round < round || m.round == 0 {
            return Err(Error::Transcript(format!("move {i}: round {} out of order", m.round)));
        }
        if m.round > round {
            round = m.round;
            maker_in_round = 0;
            breaker_in_round = 0;
        }
        match m.player {
            Player::Maker => maker_in_round += 1,
            Player::Breaker => breaker_in_round += 1,
        }
        if maker_in_round > 1 || breaker_in_round > params.q {
            return Err(Error::Transcript(format!("move {i}: round {round} exceeds the bias")));
        }
        board.claim(m.player, m.edge)?;
    }
    Ok(board)
}

/// Replays a transcript and checks that its result is consistent with the
/// final board.
pub fn replay(t: &Transcript) -> Result<Board> {
    let board = replay_moves(&t.params, &t.moves)?;
    let maker_moves = t.moves.iter().filter(|m| m.player == Player::Maker).count();
    if maker_moves != t.result.maker_moves {
        return Err(Error::Transcript(format!(
            "result reports {} Maker moves, transcript has {maker_moves}",
            t.result.maker_moves
        )));
    }
    match (t.result.winner, t.result.winning_c4, t.result.objective) {
        (Winner::Maker, Some(cycle), _) => {
            for i in 0..4 {
                let (a, b) = (cycle[i] as usize, cycle[(i + 1) % 4] as usize);
                if a == b || a >= board.n() || b >= board.n() || board.owner_of(a, b) != Owner::Maker {
                    return Err(Error::Transcript(format!("winning cycle {cycle:?} is not Maker's")));
                }
            }
        }
        (Winner::Maker, None, Objective::C4) => {
            return Err(Error::Transcript("Maker win without a winning cycle".into()));
        }
        (_, Some(_), _) => return Err(Error::Transcript("winning cycle reported without a Maker win".into())),
        _ => {}
    }
    Ok(board)
}
