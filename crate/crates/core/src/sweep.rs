//! Parameter sweeps: one game per (n, bias, breaker, repetition) cell.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{fnv1a64, lemma_report};
use crate::engine::{play_game, EngineConfig, GameRecord};
use crate::error::{Error, Result};
use crate::params::{validate_params, GameParams};
use crate::strategy::{BreakerKind, MakerKind, StrategyConfig};
use crate::transcript::Winner;

/// How a cell fixes Breaker's bias.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bias {
    Coefficient(f64),
    Literal(usize),
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub ns: Vec<usize>,
    pub biases: Vec<Bias>,
    pub delta: f64,
    pub beta: f64,
    pub alpha: f64,
    pub maker: MakerKind,
    pub breakers: Vec<BreakerKind>,
    pub reps: usize,
    pub base_seed: u64,
    pub jobs: usize,
    pub force: bool,
    pub breaker_first: bool,
    pub strategy: StrategyConfig,
}

/// Column order is the CSV header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub c: f64,
    pub q: usize,
    pub seed: u64,
    pub breaker: String,
    /// `maker`, `breaker`, `precondition-failure`, `skipped` or `error`.
    pub winner: String,
    pub rounds: Option<u32>,
    pub maker_moves: Option<usize>,
    pub x_size_at_transition: Option<usize>,
    pub d_a_size_at_transition: Option<usize>,
    pub lemma_i: Option<bool>,
    pub lemma_ii: Option<bool>,
    pub lemma_iii: Option<bool>,
    pub lemma_iv: Option<bool>,
    pub lemma_v: Option<bool>,
    pub lemma_vi: Option<bool>,
}

struct Cell {
    params: GameParams,
    breaker: BreakerKind,
}

fn cell_key(n: usize, bias: Bias, maker: MakerKind, breaker: BreakerKind, rep: usize) -> String {
    let b = match bias {
        Bias::Coefficient(c) => format!("c={c}"),
        Bias::Literal(q) => format!("q={q}"),
    };
    format!("n={n};{b};{maker};{breaker};rep={rep}")
}

/// `base ^ FNV-1a-64(canonical cell string)`.
pub fn cell_seed(base: u64, n: usize, bias: Bias, maker: MakerKind, breaker: BreakerKind, rep: usize) -> u64 {
    base ^ fnv1a64(cell_key(n, bias, maker, breaker, rep).bytes())
}

fn cells(spec: &SweepSpec) -> Vec<Cell> {
    let mut out = Vec::new();
    for &n in &spec.ns {
        for &bias in &spec.biases {
            for &breaker in &spec.breakers {
                for rep in 0..spec.reps {
                    let seed = cell_seed(spec.base_seed, n, bias, spec.maker, breaker, rep);
                    let params = match bias {
                        Bias::Coefficient(c) => {
                            GameParams::with_coefficient(n, c, spec.delta, spec.beta, spec.alpha, seed)
                        }
                        Bias::Literal(q) => GameParams::with_bias(n, q, spec.delta, spec.beta, spec.alpha, seed),
                    };
                    out.push(Cell { params, breaker });
                }
            }
        }
    }
    out
}

fn blank_row(p: &GameParams, breaker: BreakerKind, winner: &str) -> SweepRow {
    SweepRow {
        n: p.n,
        c: p.c,
        q: p.q,
        seed: p.seed,
        breaker: breaker.to_string(),
        winner: winner.to_string(),
        rounds: None,
        maker_moves: None,
        x_size_at_transition: None,
        d_a_size_at_transition: None,
        lemma_i: None,
        lemma_ii: None,
        lemma_iii: None,
        lemma_iv: None,
        lemma_v: None,
        lemma_vi: None,
    }
}

fn run_cell(spec: &SweepSpec, cell: &Cell) -> SweepRow {
    let p = &cell.params;
    if !spec.force && validate_params(p).is_err() {
        return blank_row(p, cell.breaker, "skipped");
    }
    let mut maker = spec.maker.build(p, spec.strategy);
    let mut breaker = cell.breaker.build(p);
    let cfg = EngineConfig {
        objective: spec.maker.objective(),
        breaker_first: spec.breaker_first,
        force: true,
        keep_snapshot: true,
    };
    match play_game(p, maker.as_mut(), breaker.as_mut(), cfg) {
        Ok(rec) => row_from_record(&rec, cell.breaker),
        Err(_) => blank_row(p, cell.breaker, "error"),
    }
}

/// One row for a finished game; lemma flags need the transition snapshot.
pub fn row_from_record(rec: &GameRecord, breaker: BreakerKind) -> SweepRow {
    let p = &rec.transcript.params;
    let res = &rec.transcript.result;
    let mut row = blank_row(p, breaker, winner_name(res.winner));
    row.rounds = Some(res.rounds);
    row.maker_moves = Some(res.maker_moves);
    row.x_size_at_transition = res.x_size;
    if let Some(t) = &rec.transition {
        row.d_a_size_at_transition = t.d_a_size;
        if let Some(snapshot) = &t.snapshot {
            let report = lemma_report(snapshot, p, t.maker_moves);
            row.d_a_size_at_transition = Some(t.d_a_size.unwrap_or(report.d_active));
            let [i, ii, iii, iv, v, vi] = report.flags();
            row.lemma_i = Some(i);
            row.lemma_ii = Some(ii);
            row.lemma_iii = Some(iii);
            row.lemma_iv = Some(iv);
            row.lemma_v = Some(v);
            row.lemma_vi = Some(vi);
        }
    }
    row
}

pub fn winner_name(w: Winner) -> &'static str {
    match w {
        Winner::Maker => "maker",
        Winner::Breaker => "breaker",
        Winner::PreconditionFailure => "precondition-failure",
    }
}

/// Runs every cell on a pool of `spec.jobs` threads. Rows come back sorted
/// by `(n, c, q, breaker, seed)`, so the output does not depend on `jobs`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let cells = cells(spec);
    let mut rows: Vec<SweepRow> = pool.install(|| cells.par_iter().map(|c| run_cell(spec, c)).collect());
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n).then(a.c.total_cmp(&b.c)).then((a.q, &a.breaker, a.seed).cmp(&(b.q, &b.breaker, b.seed)))
    });
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json_lines<W: Write>(rows: &[SweepRow], mut out: W) -> anyhow::Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
