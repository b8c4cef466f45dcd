use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use posc4::engine::{play_game, EngineConfig};
use posc4::params::{GameParams, DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_DELTA};
use posc4::strategy::{BreakerKind, MakerKind, StrategyConfig, TieBreak, TransitionRule};
use posc4::sweep::{row_from_record, run_sweep, winner_name, write_csv, write_json_lines, Bias, SweepSpec};
use posc4::transcript::Winner;
use posc4::verify::{run_suite, Suite, VerifyConfig};
use posc4::Error;

#[derive(Parser)]
#[command(name = "posc4", version, about = "Biased Maker-Breaker C4 game on K_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game. Exit code 0 on a Maker win, 1 otherwise, 2 on error.
    Play(PlayArgs),
    /// Play a grid of games and emit one row per game.
    Sweep(SweepArgs),
    /// Run a property suite: symmetry, lemma26, oracle, lemma27, theorem2.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Shared {
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "maker:c4", value_parser = parse::<MakerKind>)]
    maker: MakerKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Play outside the validity region.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value = "random", value_parser = parse::<TieBreak>)]
    tie_break: TieBreak,
    #[arg(long)]
    breaker_first: bool,
    /// End of the degree phase: `target` or `exhaustion`.
    #[arg(long, default_value = "target", value_parser = parse::<TransitionRule>)]
    transition: TransitionRule,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Shared {
    fn strategy(&self) -> StrategyConfig {
        StrategyConfig { tie_break: self.tie_break, transition: self.transition }
    }
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "q", required_unless_present = "q")]
    c: Option<f64>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value = "breaker:random", value_parser = parse::<BreakerKind>)]
    breaker: BreakerKind,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', conflicts_with = "q", required_unless_present = "q")]
    c: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "breaker:random", value_parser = parse::<BreakerKind>)]
    breaker: Vec<BreakerKind>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "POSC4_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse::<Suite>)]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    c: f64,
    #[arg(long, value_delimiter = ',', default_value = "random,deactivator,degree-attack", value_parser = parse::<BreakerKind>)]
    breaker: Vec<BreakerKind>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    shared: Shared,
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn play(a: PlayArgs) -> anyhow::Result<ExitCode> {
    let s = &a.shared;
    let params = match (a.c, a.q) {
        (_, Some(q)) => GameParams::with_bias(a.n, q, s.delta, s.beta, s.alpha, s.seed),
        (Some(c), None) => GameParams::with_coefficient(a.n, c, s.delta, s.beta, s.alpha, s.seed),
        (None, None) => bail!("one of --c or --q is required"),
    };
    let mut maker = s.maker.build(&params, s.strategy());
    let mut breaker = a.breaker.build(&params);
    let cfg = EngineConfig {
        objective: s.maker.objective(),
        breaker_first: s.breaker_first,
        force: s.force,
        keep_snapshot: matches!(a.format, Format::Csv),
    };
    let rec = play_game(&params, maker.as_mut(), breaker.as_mut(), cfg)?;
    let r = &rec.transcript.result;
    let mut out = output(&s.out)?;
    match a.format {
        Format::Json => writeln!(out, "{}", rec.transcript.to_json())?,
        Format::Csv => write_csv(&[row_from_record(&rec, a.breaker)], &mut out)?,
        Format::Text => {
            writeln!(out, "{} vs {} on K_{} with q={}", s.maker, a.breaker, params.n, params.q)?;
            writeln!(out, "winner: {}", winner_name(r.winner))?;
            writeln!(out, "rounds: {}, maker moves: {}", r.rounds, r.maker_moves)?;
            if let Some(c) = r.winning_c4 {
                writeln!(out, "winning cycle: {} {} {} {}", c[0], c[1], c[2], c[3])?;
            }
            if let Some(t) = &rec.transition {
                writeln!(out, "transition: round {}, |X| = {} (target {})", t.round, t.x_size, params.x_target())?;
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::from(if r.winner == Winner::Maker { 0 } else { 1 }))
}

fn sweep(a: SweepArgs) -> anyhow::Result<ExitCode> {
    let s = &a.shared;
    let biases = if a.q.is_empty() {
        a.c.iter().map(|&c| Bias::Coefficient(c)).collect()
    } else {
        a.q.iter().map(|&q| Bias::Literal(q)).collect()
    };
    let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let spec = SweepSpec {
        ns: a.n,
        biases,
        delta: s.delta,
        beta: s.beta,
        alpha: s.alpha,
        maker: s.maker,
        breakers: a.breaker,
        reps: a.reps,
        base_seed: s.seed,
        jobs,
        force: s.force,
        breaker_first: s.breaker_first,
        strategy: s.strategy(),
    };
    let rows = run_sweep(&spec)?;
    let mut out = output(&s.out)?;
    match a.format {
        Format::Json => write_json_lines(&rows, &mut out)?,
        Format::Csv | Format::Text => write_csv(&rows, &mut out)?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let s = &a.shared;
    let cfg = VerifyConfig {
        n: a.n,
        reps: a.reps,
        seed: s.seed,
        c: a.c,
        delta: s.delta,
        beta: s.beta,
        alpha: s.alpha,
        breakers: a.breaker,
        force: s.force,
        breaker_first: s.breaker_first,
        strategy: s.strategy(),
    };
    let report = run_suite(a.suite, &cfg)?;
    let mut out = output(&s.out)?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
        Format::Text | Format::Csv => {
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            writeln!(out, "{}: {verdict} ({} checks, {} failures)", report.suite, report.checks, report.failure_count)?;
            for f in &report.failures {
                writeln!(out, "  failure: {f}")?;
            }
            for n in &report.notes {
                writeln!(out, "  note: {n}")?;
            }
        }
    }
    out.flush()?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Play(a) => play(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(Error::InvalidParams(v)) => {
                    eprintln!("error: invalid parameters");
                    for line in v {
                        eprintln!("  {line}");
                    }
                }
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
