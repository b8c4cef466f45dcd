use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{MakerStrategy, MakerTurn, StrategyConfig, TieBreak, Transition, TransitionReason, TransitionRule};
use crate::error::{Error, Result};
use crate::graph::{Board, Edge, Owner};
use crate::params::GameParams;
use crate::threat::{
    closing_edge_scan, dangerous_partition, threat_count_fast, unclaimed_threats, uncovered_threat_count, ClosingEdges,
};

/// Rejection attempts before falling back to listing every eligible edge.
const REJECTION_TRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MakerPhase {
    DegreePhase,
    StrikePhase(Edge),
    FinishPhase(Edge),
}

/// Degree strategy: an unclaimed edge whose endpoints both have Maker
/// degree below `d_hat`, or `None` once there is no such edge.
pub fn maker_ddegree_move<R: Rng + ?Sized>(
    board: &Board,
    d_hat: usize,
    tie_break: TieBreak,
    rng: &mut R,
) -> Option<Edge> {
    let low: Vec<usize> = (0..board.n()).filter(|&v| board.maker_deg(v) < d_hat).collect();
    if low.len() < 2 {
        return None;
    }
    match tie_break {
        TieBreak::Lexico => {
            for (i, &u) in low.iter().enumerate() {
                for &w in &low[i + 1..] {
                    if board.owner_of(u, w) == Owner::Unclaimed {
                        return Some(board.edge_unchecked(u, w));
                    }
                }
            }
            None
        }
        TieBreak::Random => {
            // A uniform ordered pair of distinct low vertices, accepted if
            // unclaimed, is uniform over eligible edges.
            for _ in 0..REJECTION_TRIES {
                let i = rng.random_range(0..low.len());
                let mut j = rng.random_range(0..low.len() - 1);
                if j >= i {
                    j += 1;
                }
                if board.owner_of(low[i], low[j]) == Owner::Unclaimed {
                    return Some(board.edge_unchecked(low[i], low[j]));
                }
            }
            let mut eligible = Vec::new();
            for (i, &u) in low.iter().enumerate() {
                for &w in &low[i + 1..] {
                    if board.owner_of(u, w) == Owner::Unclaimed {
                        eligible.push((u, w));
                    }
                }
            }
            if eligible.is_empty() {
                return None;
            }
            let (u, w) = eligible[rng.random_range(0..eligible.len())];
            Some(board.edge_unchecked(u, w))
        }
    }
}

/// Unclaimed edge with the most threats not owned by Breaker; lowest id on
/// ties.
pub fn max_uncovered_unclaimed(board: &Board) -> Option<(Edge, usize)> {
    let mut best: Option<(Edge, usize)> = None;
    for id in board.unclaimed_edges() {
        let e = board.edge_unchecked_id(id);
        // uncovered <= total, so a total that cannot beat the incumbent is skipped
        if let Some((_, b)) = best {
            if threat_count_fast(board, e) <= b {
                continue;
            }
        }
        let u = uncovered_threat_count(board, e);
        if best.is_none_or(|(_, b)| u > b) {
            best = Some((e, u));
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MakerStep {
    pub edge: Edge,
    pub phase: MakerPhase,
    pub transition: Option<Transition>,
}

/// One turn of Maker's C4 strategy given the closing edge already found
/// (if any).
#[allow(clippy::too_many_arguments)]
pub fn maker_c4_step<R: Rng + ?Sized>(
    board: &Board,
    phase: MakerPhase,
    params: &GameParams,
    cfg: StrategyConfig,
    rng: &mut R,
    closing: Option<Edge>,
) -> Result<MakerStep> {
    if board.unclaimed_count() == 0 {
        return Err(Error::ExhaustedBoard);
    }
    if let Some(e) = closing {
        let phase = match phase {
            MakerPhase::StrikePhase(s) if is_threat_of(board, s, e) => MakerPhase::FinishPhase(e),
            p => p,
        };
        return Ok(MakerStep { edge: e, phase, transition: None });
    }
    match phase {
        MakerPhase::DegreePhase => {
            let d_hat = params.d_hat();
            let reached =
                cfg.transition == TransitionRule::TargetReached && board.maker_deg_at_least(d_hat) >= params.x_target();
            if !reached {
                if let Some(e) = maker_ddegree_move(board, d_hat, cfg.tie_break, rng) {
                    return Ok(MakerStep { edge: e, phase: MakerPhase::DegreePhase, transition: None });
                }
            }
            let reason = if reached { TransitionReason::TargetReached } else { TransitionReason::Exhausted };
            let part = dangerous_partition(board, params);
            let strike = part
                .active
                .iter()
                .map(|&id| {
                    let e = board.edge_unchecked_id(id);
                    (e, uncovered_threat_count(board, e))
                })
                .fold(None, |best: Option<(Edge, usize)>, (e, u)| match best {
                    Some((_, b)) if b >= u => best,
                    _ => Some((e, u)),
                });
            let (edge, fallback) = match strike {
                Some((e, _)) => (e, false),
                None => (fallback_edge(board)?, true),
            };
            Ok(MakerStep {
                edge,
                phase: MakerPhase::StrikePhase(edge),
                transition: Some(Transition {
                    reason,
                    d_a_size: Some(part.active.len()),
                    strike: Some(edge),
                    fallback,
                }),
            })
        }
        MakerPhase::StrikePhase(s) => {
            if let Some(&b) = unclaimed_threats(board, s).first() {
                return Ok(MakerStep { edge: b, phase: MakerPhase::FinishPhase(b), transition: None });
            }
            let e = fallback_edge(board)?;
            Ok(MakerStep { edge: e, phase: MakerPhase::StrikePhase(e), transition: None })
        }
        MakerPhase::FinishPhase(_) => {
            let e = fallback_edge(board)?;
            Ok(MakerStep { edge: e, phase: MakerPhase::StrikePhase(e), transition: None })
        }
    }
}

fn fallback_edge(board: &Board) -> Result<Edge> {
    max_uncovered_unclaimed(board).map(|(e, _)| e).ok_or(Error::ExhaustedBoard)
}

fn is_threat_of(board: &Board, a: Edge, b: Edge) -> bool {
    let (a1, a2) = a.endpoints();
    let (b1, b2) = b.endpoints();
    a != b
        && ((board.has_maker_edge(a1, b1) && board.has_maker_edge(a2, b2))
            || (board.has_maker_edge(a1, b2) && board.has_maker_edge(a2, b1)))
}

/// Stateless form of the C4 strategy; closing edges are found by a full
/// scan of Maker's paths of length three.
pub fn maker_c4_move<R: Rng + ?Sized>(
    board: &Board,
    phase: MakerPhase,
    params: &GameParams,
    cfg: StrategyConfig,
    rng: &mut R,
) -> Result<MakerStep> {
    maker_c4_step(board, phase, params, cfg, rng, closing_edge_scan(board))
}

/// `maker:ddegree`: the degree strategy alone. Stops at the transition.
pub struct DDegreeMaker {
    params: GameParams,
    cfg: StrategyConfig,
    rng: ChaCha8Rng,
    transition: Option<Transition>,
}

impl DDegreeMaker {
    pub fn new(params: GameParams, cfg: StrategyConfig, rng: ChaCha8Rng) -> Self {
        DDegreeMaker { params, cfg, rng, transition: None }
    }
}

impl MakerStrategy for DDegreeMaker {
    fn name(&self) -> &'static str {
        "maker:ddegree"
    }

    fn next_move(&mut self, board: &Board) -> Result<MakerTurn> {
        let d_hat = self.params.d_hat();
        let reason = if self.cfg.transition == TransitionRule::TargetReached
            && board.maker_deg_at_least(d_hat) >= self.params.x_target()
        {
            TransitionReason::TargetReached
        } else if let Some(e) = maker_ddegree_move(board, d_hat, self.cfg.tie_break, &mut self.rng) {
            return Ok(MakerTurn::Claim(e));
        } else {
            TransitionReason::Exhausted
        };
        self.transition = Some(Transition { reason, d_a_size: None, strike: None, fallback: false });
        Ok(MakerTurn::Stop)
    }

    fn take_transition(&mut self) -> Option<Transition> {
        self.transition.take()
    }
}

/// `maker:c4`: degree phase, strike on an active dangerous edge, finish
/// on one of its threats; any closing edge is taken as soon as it exists.
pub struct C4Maker {
    params: GameParams,
    cfg: StrategyConfig,
    rng: ChaCha8Rng,
    phase: MakerPhase,
    closing: ClosingEdges,
    transition: Option<Transition>,
}

impl C4Maker {
    pub fn new(params: GameParams, cfg: StrategyConfig, rng: ChaCha8Rng) -> Self {
        C4Maker { params, cfg, rng, phase: MakerPhase::DegreePhase, closing: ClosingEdges::new(), transition: None }
    }

    pub fn phase(&self) -> MakerPhase {
        self.phase
    }
}

impl MakerStrategy for C4Maker {
    fn name(&self) -> &'static str {
        "maker:c4"
    }

    fn next_move(&mut self, board: &Board) -> Result<MakerTurn> {
        let closing = self.closing.find(board);
        let step = maker_c4_step(board, self.phase, &self.params, self.cfg, &mut self.rng, closing)?;
        self.phase = step.phase;
        self.transition = step.transition;
        Ok(MakerTurn::Claim(step.edge))
    }

    fn take_transition(&mut self) -> Option<Transition> {
        self.transition.take()
    }
}
