//! Property suites behind `posc4 verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::analysis::{lemma_report, theorem2_check, LemmaReport};
use crate::engine::{play_game, EngineConfig, GameRecord};
use crate::error::{Error, Result};
use crate::gen::{random_c4_free, random_mixed_board, sample_edges};
use crate::graph::{Board, Edge, Owner};
use crate::params::{GameParams, DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_DELTA};
use crate::strategy::{seeded_rng, BreakerKind, MakerKind, StrategyConfig};
use crate::sweep::{cell_seed, Bias};
use crate::threat::{contains_c4, threat_count_fast, threat_stats, threats_of_oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Symmetry,
    Lemma26,
    Oracle,
    Lemma27,
    Theorem2,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "symmetry" => Suite::Symmetry,
            "lemma26" => Suite::Lemma26,
            "oracle" => Suite::Oracle,
            "lemma27" => Suite::Lemma27,
            "theorem2" => Suite::Theorem2,
            _ => return Err(Error::InvalidParameter(format!("unknown suite `{s}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Symmetry => "symmetry",
            Suite::Lemma26 => "lemma26",
            Suite::Oracle => "oracle",
            Suite::Lemma27 => "lemma27",
            Suite::Theorem2 => "theorem2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub c: f64,
    pub delta: f64,
    pub beta: f64,
    pub alpha: f64,
    pub breakers: Vec<BreakerKind>,
    pub force: bool,
    pub breaker_first: bool,
    pub strategy: StrategyConfig,
}

impl VerifyConfig {
    pub fn new(n: usize, reps: usize, seed: u64) -> Self {
        VerifyConfig {
            n,
            reps,
            seed,
            c: 0.05,
            delta: DEFAULT_DELTA,
            beta: DEFAULT_BETA,
            alpha: DEFAULT_ALPHA,
            breakers: BreakerKind::ALL.to_vec(),
            force: false,
            breaker_first: false,
            strategy: StrategyConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: u64,
    /// Hard assertion failures; the first few carry a witness.
    pub failures: Vec<String>,
    pub failure_count: u64,
    /// Diagnostics that are reported but never fail the suite.
    pub notes: Vec<String>,
}

const MAX_WITNESSES: usize = 20;

impl VerifyReport {
    fn new(suite: Suite) -> Self {
        VerifyReport { suite: suite.to_string(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    match suite {
        Suite::Symmetry => Ok(symmetry(cfg)),
        Suite::Lemma26 => Ok(lemma26(cfg)),
        Suite::Oracle => Ok(oracle(cfg)),
        Suite::Lemma27 => lemma27(cfg),
        Suite::Theorem2 => theorem2(cfg),
    }
}

/// Largest `n` for which symmetry is checked over all pairs.
const EXHAUSTIVE_N: usize = 16;
const SAMPLED_EDGES: usize = 80;

fn symmetry(cfg: &VerifyConfig) -> VerifyReport {
    let mut rep = VerifyReport::new(Suite::Symmetry);
    let mut rng = seeded_rng(cfg.seed, 0);
    for r in 0..cfg.reps {
        let board = random_mixed_board(cfg.n, &mut rng);
        let exhaustive = cfg.n <= EXHAUSTIVE_N;
        let edges: Vec<Edge> = if exhaustive {
            (0..board.edge_count()).map(|id| board.edge_from_id(id).unwrap()).collect()
        } else {
            sample_edges(&board, SAMPLED_EDGES, &mut rng)
        };
        let sets: Vec<BTreeSet<Edge>> = edges.iter().map(|&e| threats_of_oracle(&board, e)).collect();
        for (i, &a) in edges.iter().enumerate() {
            for (j, &e) in edges.iter().enumerate() {
                let fwd = sets[i].contains(&e);
                let back = sets[j].contains(&a);
                rep.check(fwd == back, || format!("board {r}: {e} in T{a} is {fwd}, {a} in T{e} is {back}"));
            }
            if exhaustive {
                // T_a = { e : a in T_e }
                let inverse: BTreeSet<Edge> =
                    edges.iter().zip(&sets).filter(|(_, s)| s.contains(&a)).map(|(&e, _)| e).collect();
                rep.check(inverse == sets[i], || format!("board {r}: T{a} differs from its inverse image"));
            }
        }
    }
    rep
}

fn lemma26(cfg: &VerifyConfig) -> VerifyReport {
    let mut rep = VerifyReport::new(Suite::Lemma26);
    let mut rng = seeded_rng(cfg.seed, 0);
    let (mut covered, mut inside) = (0u64, 0u64);
    for r in 0..cfg.reps {
        let cap = rng.random_range(cfg.n / 2..=cfg.n * cfg.n);
        let board = random_c4_free(cfg.n, cap, 0.2, &mut rng);
        rep.check(!contains_c4(&board), || format!("board {r}: generator produced a C4"));
        for id in 0..board.edge_count() {
            let e = board.edge_from_id(id).unwrap();
            let (u, v) = e.endpoints();
            let d = board.maker_deg(u);
            if d == 0 || board.maker_deg(v) != d {
                continue;
            }
            let t = threat_count_fast(&board, e);
            let k = board.common_maker_neighbors(u, v);
            if board.owner(e.id) == Owner::Maker {
                // e in M: one fewer, since e pairs with itself
                inside += 1;
                let want = d * d - 1 - k.min(1);
                rep.check(k <= 1 && t == want, || format!("board {r}: {e} in M, d={d}, k={k}, |T|={t}"));
            } else {
                covered += 1;
                let want = d * d - usize::from(k > 0);
                rep.check(k <= 1 && t == want, || format!("board {r}: {e}, d={d}, k={k}, |T|={t}, expected {want}"));
            }
        }
    }
    rep.notes.push(format!("{covered} equal-degree edges outside M, {inside} inside M"));
    rep
}

fn oracle(cfg: &VerifyConfig) -> VerifyReport {
    let mut rep = VerifyReport::new(Suite::Oracle);
    let mut rng = seeded_rng(cfg.seed, 0);
    let params = GameParams::standard(cfg.n, cfg.c, cfg.seed);
    for r in 0..cfg.reps {
        let board = random_mixed_board(cfg.n, &mut rng);
        oracle_board(&board, &params, r, &mut rep);
    }
    rep
}

/// Fast count, uncovered count and covered count against the oracle set,
/// for every edge of `board`.
pub fn oracle_board(board: &Board, params: &GameParams, r: usize, rep: &mut VerifyReport) {
    for id in 0..board.edge_count() {
        let e = board.edge_from_id(id).unwrap();
        let set = threats_of_oracle(board, e);
        let fast = threat_count_fast(board, e);
        let st = threat_stats(board, e, params);
        let covered = set.iter().filter(|b| board.owner(b.id) == Owner::Breaker).count();
        rep.check(
            fast == set.len() && st.total == fast && st.covered == covered && st.uncovered == fast - covered,
            || format!("board {r}: {e} fast={fast} oracle={} covered={}/{covered}", set.len(), st.covered),
        );
    }
}

/// Degree-strategy games used by the lemma27 and theorem2 suites.
pub fn degree_games(cfg: &VerifyConfig) -> Result<Vec<(BreakerKind, GameRecord)>> {
    let mut out = Vec::new();
    for &b in &cfg.breakers {
        for r in 0..cfg.reps {
            let seed = cell_seed(cfg.seed, cfg.n, Bias::Coefficient(cfg.c), MakerKind::DDegree, b, r);
            let p = GameParams::with_coefficient(cfg.n, cfg.c, cfg.delta, cfg.beta, cfg.alpha, seed);
            let mut maker = MakerKind::DDegree.build(&p, cfg.strategy);
            let mut breaker = b.build(&p);
            let ecfg = EngineConfig {
                objective: MakerKind::DDegree.objective(),
                breaker_first: cfg.breaker_first,
                force: cfg.force,
                keep_snapshot: true,
            };
            out.push((b, play_game(&p, maker.as_mut(), breaker.as_mut(), ecfg)?));
        }
    }
    Ok(out)
}

/// Canonical report for a game that reached its transition.
pub fn transition_report(rec: &GameRecord) -> Option<LemmaReport> {
    let t = rec.transition.as_ref()?;
    let mut r = lemma_report(t.snapshot.as_ref()?, &rec.transcript.params, t.maker_moves);
    r.canonical = true;
    Some(r)
}

fn lemma27(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new(Suite::Lemma27);
    let games = degree_games(cfg)?;
    let (mut active, mut v_holds) = (0usize, 0usize);
    let (mut v_margin, mut vi_margin) = (f64::INFINITY, f64::INFINITY);
    for (b, rec) in &games {
        let seed = rec.transcript.params.seed;
        let Some(r) = transition_report(rec) else {
            rep.check(false, || format!("{b} seed {seed}: no transition"));
            continue;
        };
        let snap = rec.transition.as_ref().and_then(|t| t.snapshot.as_ref()).unwrap();
        let p = &rec.transcript.params;
        for (name, c) in [("i", r.lemma_i), ("ii", r.lemma_ii), ("iii", r.lemma_iii), ("iv", r.lemma_iv)] {
            rep.check(c.holds, || format!("{b} seed {seed}: ({name}) lhs={} rhs={}", c.lhs, c.rhs));
        }
        rep.check(snap.breaker_edge_count() <= p.q * (r.maker_moves + cfg.breaker_first as usize), || {
            format!("{b} seed {seed}: |B|={} exceeds q * moves", snap.breaker_edge_count())
        });
        if r.x_size >= p.x_target() && !contains_c4(snap) {
            let x: Vec<usize> = (0..p.n).filter(|&v| snap.maker_deg(v) >= p.d_hat()).collect();
            let threshold = p.danger_threshold();
            let mut low = 0usize;
            for (i, &u) in x.iter().enumerate() {
                for &v in &x[i + 1..] {
                    if (threat_count_fast(snap, snap.edge(u, v).unwrap()) as f64) < threshold {
                        low += 1;
                    }
                }
            }
            rep.check(low == 0, || format!("{b} seed {seed}: {low} pairs inside X are not dangerous"));
        }
        active += usize::from(r.lemma_vi.holds);
        v_holds += usize::from(r.lemma_v.holds);
        v_margin = v_margin.min(r.lemma_v.margin(false));
        vi_margin = vi_margin.min(r.lemma_vi.margin(false));
    }
    let g = games.len().max(1);
    rep.notes.push(format!("(v) holds in {v_holds}/{g} runs, worst margin {v_margin:.1}"));
    rep.notes.push(format!(
        "(vi) |D_a| > 0 in {active}/{g} runs ({:.1}%), smallest |D_a| {vi_margin}",
        100.0 * active as f64 / g as f64
    ));
    Ok(rep)
}

fn theorem2(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new(Suite::Theorem2);
    let games = degree_games(cfg)?;
    let mut worst = 0usize;
    for (b, rec) in &games {
        let seed = rec.transcript.params.seed;
        match theorem2_check(&rec.transcript) {
            Ok(c) => {
                worst = worst.max(c.maker_moves);
                rep.check(c.pass, || {
                    format!(
                        "{b} seed {seed}: |X|={}/{} after {}/{} moves, degrees {:?}",
                        c.x_size, c.x_target, c.maker_moves, c.move_bound, c.histogram
                    )
                })
            }
            Err(e) => rep.check(false, || format!("{b} seed {seed}: {e}")),
        }
    }
    if let Some((_, rec)) = games.first() {
        let p = &rec.transcript.params;
        rep.notes.push(format!("most Maker moves before transition {worst}, bound {}", p.move_bound()));
    }
    Ok(rep)
}
