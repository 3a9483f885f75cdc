use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deploylab::deployment::{analyze_game, condensation_dot, GraphKind};
use deploylab::experiments::{emit_report, run_experiment, ExperimentConfig, ExperimentKind, ReportFormat};
use deploylab::game::io::{read_game, Game, GameFile};
use deploylab::game::{support_enumeration_equilibria, symmetric_regret, PayoffOperator};
use deploylab::hedge::{find_symmetric_equilibrium, make_schedule, rescale_to_unit, ScheduleForm, SearchOptions};
use deploylab::mechanisms::{
    apply_election, apply_insurance, iterated_dominance, DominanceKind, DominanceOrder, ElectionParams, InsuranceParams,
    StagHuntSpec, ALL_ORDERS_MAX_STRATEGIES,
};
use deploylab::symmetrize::{gkt_default_options, gkt_symmetrize, normalize_bimatrix, solve_bimatrix_via_hedge};

#[derive(Parser)]
#[command(name = "deploylab", version, about = "Hedge dynamics, symmetrization and deployment-graph analysis")]
struct Cli {
    /// Base seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory; results go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report formats (comma separated). Only `experiment` writes csv and svg.
    #[arg(long, global = true, value_delimiter = ',', default_value = "json")]
    format: Vec<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Svg => ReportFormat::Svg,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Approximate an equilibrium of a bimatrix or symmetric game.
    Solve(SolveArgs),
    /// Write the symmetric embedding of a bimatrix game and run the
    /// Hedge pipeline on it.
    Symmetrize {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Deployment-graph analysis of a strategic game.
    AnalyzeGraph {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tie_tol: f64,
        /// Also write the condensation of this graph as DOT.
        #[arg(long, value_enum)]
        dot: Option<DotKind>,
    },
    /// Build and analyze a coordination mechanism on a stag hunt.
    Mechanism(MechanismArgs),
    /// Run a batch experiment.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DotKind {
    Strict,
    Ordinal,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Method::Hedge)]
    method: Method,
    #[arg(long, value_enum)]
    schedule: Option<Schedule>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    exponent: f64,
    /// Hedge iterations per attempt.
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Hedge,
    SupportEnum,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Schedule {
    Constant,
    Harmonic,
    Power,
}

impl From<Schedule> for ScheduleForm {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Constant => ScheduleForm::Constant,
            Schedule::Harmonic => ScheduleForm::Harmonic,
            Schedule::Power => ScheduleForm::Power,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MechanismType {
    Insurance,
    Election,
}

#[derive(Args)]
struct MechanismArgs {
    #[arg(long = "type", value_enum)]
    kind: MechanismType,
    #[arg(long)]
    n: usize,
    /// Adopter benefits for 1..=n adopters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    benefit: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, default_value_t = 0.1)]
    premium: f64,
    #[arg(long, default_value_t = 0.2)]
    surplus: f64,
    /// Election penalty; defaults to one more than the largest investment cost.
    #[arg(long)]
    penalty: Option<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    name: ExperimentName,
    #[arg(long)]
    trials: Option<usize>,
    /// Game size or inclusive range, e.g. `10` or `2..4`.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, value_enum)]
    schedule: Option<Schedule>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    exponent: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall time per trial.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentName {
    RandomSymmetricHedge,
    RpsRepulsion,
    GktRoundtrip,
    StagHuntSuite,
    MechanismSuite,
}

impl From<ExperimentName> for ExperimentKind {
    fn from(e: ExperimentName) -> Self {
        match e {
            ExperimentName::RandomSymmetricHedge => ExperimentKind::RandomSymmetricHedge,
            ExperimentName::RpsRepulsion => ExperimentKind::RpsRepulsion,
            ExperimentName::GktRoundtrip => ExperimentKind::GktRoundtrip,
            ExperimentName::StagHuntSuite => ExperimentKind::StagHuntSuite,
            ExperimentName::MechanismSuite => ExperimentKind::MechanismSuite,
        }
    }
}

/// Any error exits with 2; runs that complete but report failures exit with 1.
struct ConfigError(anyhow::Error);

impl From<anyhow::Error> for ConfigError {
    fn from(e: anyhow::Error) -> Self {
        ConfigError(e)
    }
}

impl From<deploylab::Error> for ConfigError {
    fn from(e: deploylab::Error) -> Self {
        ConfigError(e.into())
    }
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError(e.into())
    }
}

enum Outcome {
    Ok,
    Failures,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failures) => ExitCode::from(1),
        Err(ConfigError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> std::result::Result<Game, ConfigError> {
    Ok(read_game(path).with_context(|| format!("reading {}", path.display()))?)
}

fn run(cli: &Cli) -> std::result::Result<Outcome, ConfigError> {
    match &cli.command {
        Command::Solve(a) => solve(cli, a),
        Command::Symmetrize { game, eps, max_iters, restarts } => {
            let g = load(game)?.to_bimatrix().context("symmetrize needs a two-player game")?;
            if eps.is_nan() || *eps <= 0.0 {
                return Err(ConfigError(anyhow::anyhow!("eps must be positive")));
            }
            let (normalized, record) = normalize_bimatrix(&g);
            let gkt = gkt_symmetrize(&normalized)?;
            let embedding = json!({
                "normalization": record,
                "normalized": GameFile::from(&Game::Bimatrix(normalized)),
                "symmetric": GameFile::from(&Game::Symmetric(gkt.c.clone())),
                "a": gkt.a,
                "b": gkt.b,
            });
            let mut opts = gkt_default_options();
            opts.seed = cli.seed;
            opts.max_iters = max_iters.unwrap_or(opts.max_iters);
            opts.restarts = restarts.unwrap_or(opts.restarts);
            let r = solve_bimatrix_via_hedge(&g, *eps, &opts)?;
            let d = &r.diagnostics;
            let verdicts: serde_json::Map<String, Value> =
                d.eps_chain.iter().map(|l| (format!("{} {}", l.game, l.predicate), Value::Bool(l.holds))).collect();
            let pipeline = json!({
                "eps": eps,
                "eps_chain": d.eps_chain,
                "budget": d.budget,
                "iterations": d.iterations,
                "attempts": d.attempts,
                "found_by": d.found_by,
                "best_regret": d.best_regret,
                "recovered_pair": r.pair,
                "verdicts": verdicts,
            });
            if cli.out.is_some() {
                write_json(cli, "gkt.json", &embedding)?;
                write_json(cli, "pipeline.json", &pipeline)?;
            } else {
                write_json(cli, "symmetrize.json", &json!({ "gkt": embedding, "pipeline": pipeline }))?;
            }
            Ok(if r.pair.is_some() { Outcome::Ok } else { Outcome::Failures })
        }
        Command::AnalyzeGraph { game, tie_tol, dot } => {
            let g = load(game)?;
            let sg = g.to_strategic()?;
            let (report, graphs) = analyze_game(&sg, *tie_tol)?;
            write_json(cli, "analysis.json", &serde_json::to_value(&report)?)?;
            if let Some(kind) = dot {
                let c = graphs.condensation(match kind {
                    DotKind::Strict => GraphKind::Strict,
                    DotKind::Ordinal => GraphKind::Ordinal,
                });
                write_text(cli, "condensation.dot", &condensation_dot(&sg, c))?;
            }
            Ok(Outcome::Ok)
        }
        Command::Mechanism(a) => mechanism(cli, a),
        Command::Experiment(a) => experiment(cli, a),
    }
}

fn solve(cli: &Cli, a: &SolveArgs) -> std::result::Result<Outcome, ConfigError> {
    let game = load(&a.game)?;
    if a.eps.is_nan() || a.eps <= 0.0 {
        return Err(ConfigError(anyhow::anyhow!("eps must be positive")));
    }
    if a.method == Method::SupportEnum {
        let g = game.to_bimatrix()?;
        let k = g.rows().min(g.cols());
        let r = support_enumeration_equilibria(&g, k)?;
        write_json(cli, "solve.json", &json!({ "method": "support-enum", "result": r }))?;
        return Ok(Outcome::Ok);
    }
    let mut opts = match game {
        Game::Symmetric(_) => SearchOptions::default(),
        _ => gkt_default_options(),
    };
    opts.seed = cli.seed;
    if let Some(s) = a.schedule {
        let c = a.rate.unwrap_or(opts.schedule.c);
        opts.schedule = make_schedule(s.into(), c, a.exponent)?;
    } else if let Some(c) = a.rate {
        opts.schedule.c = c;
    }
    if let Some(m) = a.max_iters {
        opts.max_iters = m;
    }
    if let Some(r) = a.restarts {
        opts.restarts = r;
    }
    let (out, found) = match &game {
        Game::Symmetric(c) => {
            // Hedge runs on the unit-rescaled matrix; regret scales by the same factor.
            let (unit, rescale) = rescale_to_unit(c);
            let op = PayoffOperator::linear(unit)?;
            let s = find_symmetric_equilibrium(&op, a.eps * rescale.scale, &opts)?;
            let original = PayoffOperator::linear(c.clone())?;
            let regret = match &s.strategy {
                Some(x) => Some(symmetric_regret(&original, x)?),
                None => None,
            };
            let found = s.strategy.is_some();
            (json!({ "method": "hedge", "kind": "symmetric", "eps": a.eps, "regret": regret, "search": s }), found)
        }
        other => {
            let g = other.to_bimatrix().context("solve needs a two-player game")?;
            let r = solve_bimatrix_via_hedge(&g, a.eps, &opts)?;
            let found = r.pair.is_some();
            let regret = match &r.pair {
                Some((p, q)) => Some(g.regret(p, q)?),
                None => None,
            };
            (json!({ "method": "hedge", "kind": "bimatrix", "eps": a.eps, "regret": regret, "result": r }), found)
        }
    };
    write_json(cli, "solve.json", &out)?;
    Ok(if found { Outcome::Ok } else { Outcome::Failures })
}

fn mechanism(cli: &Cli, a: &MechanismArgs) -> std::result::Result<Outcome, ConfigError> {
    let spec = StagHuntSpec::new(a.n, a.benefit.clone(), a.c)?;
    let (game, params) = match a.kind {
        MechanismType::Insurance => {
            let p = InsuranceParams {
                premium: a.premium,
                surplus: a.surplus,
            };
            (apply_insurance(&spec, &p)?, json!(p))
        }
        MechanismType::Election => {
            let default = 1.0 + (0..spec.n).map(|i| spec.c - spec.benefit_for(i, 1)).fold(0.0, f64::max);
            let p = ElectionParams::new(&spec, a.penalty.unwrap_or(default))?;
            (apply_election(&spec, &p)?, json!(p))
        }
    };
    let kind = match a.kind {
        MechanismType::Insurance => DominanceKind::Strict,
        MechanismType::Election => DominanceKind::Weak,
    };
    let total: usize = game.strategy_counts().iter().sum();
    let order = if total <= ALL_ORDERS_MAX_STRATEGIES {
        DominanceOrder::AllOrders
    } else {
        DominanceOrder::Deterministic
    };
    let dominance = iterated_dominance(&game, kind, order)?;
    let (report, _) = analyze_game(&game, 0.0)?;
    let out = json!({
        "spec": spec,
        "params": params,
        "game": GameFile::from(&game),
        "analysis": { "dominance": dominance, "graph": report },
    });
    write_json(cli, "mechanism.json", &out)?;
    Ok(Outcome::Ok)
}

fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split("..").collect();
    match parts.as_slice() {
        [one] => {
            let d = one.trim().parse().context("bad dims")?;
            Ok((d, d))
        }
        [lo, hi] => Ok((lo.trim().parse().context("bad dims")?, hi.trim().parse().context("bad dims")?)),
        _ => bail!("dims must look like `10` or `2..4`"),
    }
}

fn experiment(cli: &Cli, a: &ExperimentArgs) -> std::result::Result<Outcome, ConfigError> {
    let mut c = ExperimentConfig::new(a.name.into());
    c.seed = cli.seed;
    c.out_dir = cli.out.clone();
    c.timing = a.timing;
    if let Some(t) = a.trials {
        c.trials = t;
    }
    if let Some(d) = &a.dims {
        c.dims = parse_dims(d)?;
    }
    if let Some(e) = a.eps {
        c.eps = e;
    }
    if let Some(m) = a.max_iters {
        c.max_iters = m;
    }
    if let Some(r) = a.restarts {
        c.restarts = r;
    }
    c.workers = a.workers;
    if a.schedule.is_some() || a.rate.is_some() || a.exponent.is_some() {
        let form = a.schedule.map(Into::into).unwrap_or(c.schedule.form);
        let exponent = a.exponent.unwrap_or(if c.schedule.exponent > 0.0 { c.schedule.exponent } else { 0.5 });
        c.schedule = make_schedule(form, a.rate.unwrap_or(c.schedule.c), exponent)?;
    }
    c.validate()?;
    let report = run_experiment(&c)?;
    let summary = json!({
        "experiment": c.experiment,
        "trials": report.trials,
        "successes": report.successes,
        "success_rate": report.success_rate,
        "iteration_quantiles": report.iteration_quantiles,
        "failures": report.failures,
    });
    match &cli.out {
        Some(dir) => {
            let formats: Vec<ReportFormat> = cli.format.iter().map(|f| (*f).into()).collect();
            let files = emit_report(&report, &formats, dir)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
            for f in files {
                eprintln!("wrote {}", f.display());
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
    }
    Ok(if report.failures.is_empty() { Outcome::Ok } else { Outcome::Failures })
}

fn write_json(cli: &Cli, name: &str, v: &Value) -> Result<()> {
    if cli.format.iter().any(|f| *f != Format::Json) {
        bail!("only json output is available for this command");
    }
    write_text(cli, name, &serde_json::to_string_pretty(v)?)
}

fn write_text(cli: &Cli, name: &str, text: &str) -> Result<()> {
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let p = dir.join(name);
            std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}
