//! Maker and Breaker strategies behind one move-selection interface.

mod breaker;
mod maker;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use breaker::{
    breaker_deactivator, breaker_degree_attack, breaker_random, DeactivatorBreaker, DegreeAttackBreaker, RandomBreaker,
};
pub use maker::{
    maker_c4_move, maker_c4_step, maker_ddegree_move, max_uncovered_unclaimed, C4Maker, DDegreeMaker, MakerPhase,
    MakerStep,
};

use crate::error::{Error, Result};
use crate::graph::{Board, Edge};
use crate::params::GameParams;
use crate::transcript::Objective;

/// How Maker chooses among edges eligible under the degree strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lowest edge id.
    Lexico,
    /// Uniform over eligible edges, seeded.
    #[default]
    Random,
}

impl FromStr for TieBreak {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lexico" => Ok(TieBreak::Lexico),
            "random" => Ok(TieBreak::Random),
            _ => Err(Error::InvalidParameter(format!("unknown tie-break mode `{s}`"))),
        }
    }
}

/// When the degree phase ends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TransitionRule {
    /// At the first Maker turn where at least `ceil(beta n)` vertices have
    /// reached the degree cap, or earlier if no eligible edge is left.
    #[default]
    TargetReached,
    /// Only once no eligible edge is left.
    Exhaustion,
}

impl FromStr for TransitionRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target" => Ok(TransitionRule::TargetReached),
            "exhaustion" => Ok(TransitionRule::Exhaustion),
            _ => Err(Error::InvalidParameter(format!("unknown transition rule `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionReason {
    TargetReached,
    Exhausted,
}

/// Emitted by a Maker strategy on the turn its degree phase ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub reason: TransitionReason,
    /// `|D_a|` on the board Maker saw, when the strategy computed it.
    pub d_a_size: Option<usize>,
    /// The edge struck at the transition, if any.
    pub strike: Option<Edge>,
    /// No active dangerous edge existed and Maker fell back to the edge
    /// with the most uncovered threats.
    pub fallback: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MakerTurn {
    Claim(Edge),
    /// The degree strategy has nothing left to claim.
    Stop,
}

pub trait MakerStrategy: Send {
    fn name(&self) -> &'static str;
    fn next_move(&mut self, board: &Board) -> Result<MakerTurn>;
    /// Returns the transition emitted by the last `next_move`, if any.
    fn take_transition(&mut self) -> Option<Transition>;
}

pub trait BreakerStrategy: Send {
    fn name(&self) -> &'static str;
    /// At most `q` distinct unclaimed edges.
    fn respond(&mut self, board: &Board, q: usize) -> Vec<Edge>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StrategyConfig {
    pub tie_break: TieBreak,
    pub transition: TransitionRule,
}

/// Maker's stream is 0 and Breaker's is 1 under the same seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MakerKind {
    C4,
    DDegree,
}

impl MakerKind {
    pub fn build(self, params: &GameParams, cfg: StrategyConfig) -> Box<dyn MakerStrategy> {
        let rng = seeded_rng(params.seed, 0);
        match self {
            MakerKind::C4 => Box::new(C4Maker::new(*params, cfg, rng)),
            MakerKind::DDegree => Box::new(DDegreeMaker::new(*params, cfg, rng)),
        }
    }

    /// The degree strategy alone plays the partial minimum degree game.
    pub fn objective(self) -> Objective {
        match self {
            MakerKind::C4 => Objective::C4,
            MakerKind::DDegree => Objective::PartialMinDegree,
        }
    }
}

impl fmt::Display for MakerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MakerKind::C4 => "maker:c4",
            MakerKind::DDegree => "maker:ddegree",
        })
    }
}

impl FromStr for MakerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("maker:").unwrap_or(s) {
            "c4" => Ok(MakerKind::C4),
            "ddegree" => Ok(MakerKind::DDegree),
            _ => Err(Error::InvalidParameter(format!("unknown maker strategy `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BreakerKind {
    Random,
    Deactivator,
    DegreeAttack,
}

impl BreakerKind {
    pub const ALL: [BreakerKind; 3] = [BreakerKind::Random, BreakerKind::Deactivator, BreakerKind::DegreeAttack];

    pub fn build(self, params: &GameParams) -> Box<dyn BreakerStrategy> {
        match self {
            BreakerKind::Random => Box::new(RandomBreaker::new(seeded_rng(params.seed, 1))),
            BreakerKind::Deactivator => Box::new(DeactivatorBreaker::new(*params)),
            BreakerKind::DegreeAttack => Box::new(DegreeAttackBreaker::new(params.d_hat())),
        }
    }
}

impl fmt::Display for BreakerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakerKind::Random => "breaker:random",
            BreakerKind::Deactivator => "breaker:deactivator",
            BreakerKind::DegreeAttack => "breaker:degree-attack",
        })
    }
}

impl FromStr for BreakerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("breaker:").unwrap_or(s) {
            "random" => Ok(BreakerKind::Random),
            "deactivator" => Ok(BreakerKind::Deactivator),
            "degree-attack" => Ok(BreakerKind::DegreeAttack),
            _ => Err(Error::InvalidParameter(format!("unknown breaker strategy `{s}`"))),
        }
    }
}
