//! Batch experiments and their reports.
//!
//! Trial `t` of a run draws its own seed from stream `t` of the base seed, so
//! any trial can be rerun alone with [`run_trial`].

mod generate;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deployment::{GameGraphs, MaximalityKind};
use crate::error::{invalid, Result};
use crate::game::{is_approx_equilibrium, rock_paper_scissors, EquilibriumMode, GameRef, MixedStrategy, PayoffOperator, ProfileRef};
use crate::hedge::{find_symmetric_equilibrium, rescale_to_unit, HedgeState, LearningRateSchedule, SearchOptions};
use crate::mechanisms::{
    apply_election, apply_insurance, build_stag_hunt, iterated_dominance, DominanceKind, DominanceOrder, ElectionParams,
    InsuranceParams, StagHuntSpec, A, D, X, Y,
};
use crate::rng::{dirichlet_flat, stream};
use crate::symmetrize::{gkt_default_options, solve_bimatrix_via_hedge};

pub use generate::{gen_random_game, random_stag_hunt, GameKind, GeneratedGame, MAX_MATRIX_DIM, MAX_STAG_HUNT_PLAYERS};
pub use report::{emit_report, ReportFormat};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "DEPLOYLAB_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RandomSymmetricHedge,
    RpsRepulsion,
    GktRoundtrip,
    StagHuntSuite,
    MechanismSuite,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::RandomSymmetricHedge,
        ExperimentKind::RpsRepulsion,
        ExperimentKind::GktRoundtrip,
        ExperimentKind::StagHuntSuite,
        ExperimentKind::MechanismSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RandomSymmetricHedge => "random-symmetric-hedge",
            ExperimentKind::RpsRepulsion => "rps-repulsion",
            ExperimentKind::GktRoundtrip => "gkt-roundtrip",
            ExperimentKind::StagHuntSuite => "stag-hunt-suite",
            ExperimentKind::MechanismSuite => "mechanism-suite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub trials: usize,
    /// Inclusive range of game sizes (matrix dimension or player count).
    pub dims: (usize, usize),
    pub eps: f64,
    pub seed: u64,
    pub schedule: LearningRateSchedule,
    /// Hedge iterations per attempt (per rate in `rps-repulsion`).
    pub max_iters: usize,
    pub restarts: usize,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    /// Record wall time per trial. Off by default so reports are reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        let base = Self {
            experiment,
            trials: 100,
            dims: (10, 10),
            eps: 1e-3,
            seed: 0,
            schedule: LearningRateSchedule::power(1.0, 0.5),
            max_iters: 200_000,
            restarts: 4,
            out_dir: None,
            workers: None,
            timing: false,
        };
        match experiment {
            ExperimentKind::RandomSymmetricHedge => base,
            ExperimentKind::RpsRepulsion => Self {
                trials: 10,
                dims: (3, 3),
                schedule: LearningRateSchedule::constant(0.5),
                max_iters: 1_000,
                restarts: 0,
                ..base
            },
            ExperimentKind::GktRoundtrip => {
                let g = gkt_default_options();
                Self {
                    trials: 25,
                    dims: (3, 3),
                    eps: 0.05,
                    schedule: g.schedule,
                    max_iters: g.max_iters,
                    restarts: g.restarts,
                    ..base
                }
            }
            ExperimentKind::StagHuntSuite => Self {
                trials: 200,
                dims: (2, 4),
                ..base
            },
            ExperimentKind::MechanismSuite => Self {
                trials: 20,
                dims: (2, 3),
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if !(self.eps > 0.0) {
            return Err(invalid("eps must be positive"));
        }
        if self.dims.0 == 0 || self.dims.0 > self.dims.1 {
            return Err(invalid("dims must be a nonempty range of positive sizes"));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers must be positive"));
        }
        Ok(())
    }

    /// Seed and size of trial `t`.
    pub fn trial_params(&self, trial: usize) -> (u64, usize) {
        let mut rng = stream(self.seed, trial as u64);
        let seed = rng.random::<u64>();
        let dim = rng.random_range(self.dims.0..=self.dims.1);
        (seed, dim)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub game_hash: String,
    pub success: bool,
    pub outcome: String,
    pub iterations: usize,
    pub achieved_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    /// Subsampled diagnostic curve, e.g. relative entropy against iteration.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub iteration_quantiles: Option<Quantiles>,
    pub failures: Vec<FailureRecord>,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn from_records(config: ExperimentConfig, records: Vec<TrialRecord>) -> Self {
        let trials = records.len();
        let successes = records.iter().filter(|r| r.success).count();
        let mut its: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
        its.sort_by(f64::total_cmp);
        let q = |p: f64| its[((p * its.len() as f64).ceil() as usize).clamp(1, its.len()) - 1];
        let iteration_quantiles = (!its.is_empty()).then(|| Quantiles {
            min: its[0],
            median: q(0.5),
            p90: q(0.9),
            max: its[its.len() - 1],
        });
        let failures = records
            .iter()
            .filter(|r| !r.success)
            .map(|r| FailureRecord {
                trial: r.trial,
                seed: r.seed,
                dim: r.dim,
                outcome: r.outcome.clone(),
            })
            .collect();
        Self {
            config,
            trials,
            successes,
            success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            iteration_quantiles,
            failures,
            records,
        }
    }
}

fn worker_count(config: &ExperimentConfig) -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(invalid(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(config.workers),
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
        let probe = dir.join(".deploylab-write-test");
        std::fs::write(&probe, b"")?;
        std::fs::remove_file(&probe)?;
    }
    let run = || -> Result<Vec<TrialRecord>> {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let (seed, dim) = config.trial_params(t);
                let mut r = run_trial(config, seed, dim)?;
                r.trial = t;
                Ok(r)
            })
            .collect()
    };
    let records = match worker_count(config)? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| invalid(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(ExperimentReport::from_records(config.clone(), records))
}

/// Runs one trial from its own seed and size.
pub fn run_trial(config: &ExperimentConfig, seed: u64, dim: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let mut r = match config.experiment {
        ExperimentKind::RandomSymmetricHedge => symmetric_hedge_trial(config, seed, dim)?,
        ExperimentKind::RpsRepulsion => rps_trial(config, seed)?,
        ExperimentKind::GktRoundtrip => gkt_trial(config, seed, dim)?,
        ExperimentKind::StagHuntSuite => stag_hunt_trial(seed, dim)?,
        ExperimentKind::MechanismSuite => mechanism_trial(seed, dim)?,
    };
    r.seed = seed;
    r.dim = dim;
    if config.timing {
        r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(r)
}

fn record(game_hash: String, success: bool, outcome: impl Into<String>, iterations: usize, achieved_eps: Option<f64>) -> TrialRecord {
    TrialRecord {
        trial: 0,
        seed: 0,
        dim: 0,
        game_hash,
        success,
        outcome: outcome.into(),
        iterations,
        achieved_eps,
        wall_ms: None,
        trace: Vec::new(),
    }
}

fn search_options(config: &ExperimentConfig, seed: u64) -> SearchOptions {
    SearchOptions {
        schedule: config.schedule,
        max_iters: config.max_iters,
        restarts: config.restarts,
        seed,
        check_every: 100,
    }
}

fn symmetric_hedge_trial(config: &ExperimentConfig, seed: u64, dim: usize) -> Result<TrialRecord> {
    let g = gen_random_game(GameKind::Symmetric, &[dim], seed)?;
    let GeneratedGame::Symmetric(c) = &g else { unreachable!() };
    let op = PayoffOperator::linear(c.clone())?;
    let s = find_symmetric_equilibrium(&op, config.eps, &search_options(config, seed))?;
    let outcome = match s.found_by {
        Some(kind) => serde_json::to_value(kind)?.as_str().unwrap_or_default().to_string(),
        None => format!("not-found (best regret {:.3e})", s.regret),
    };
    Ok(record(g.hash(), s.strategy.is_some(), outcome, s.iterations, Some(s.regret)))
}

/// Rock-paper-scissors mapped onto `[0, 1]`.
pub fn rescaled_rps() -> PayoffOperator {
    let (c, _) = rescale_to_unit(&rock_paper_scissors());
    PayoffOperator::linear(c).expect("square")
}

pub const RPS_RATES: [f64; 3] = [0.1, 0.5, 1.0];

/// Checks that `RE(uniform, X_k)` increases strictly for each constant rate.
fn rps_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialRecord> {
    let op = rescaled_rps();
    let x0 = MixedStrategy::normalized(dirichlet_flat(&mut stream(seed, 1), 3))?;
    let u = MixedStrategy::uniform(3);
    let mut bad = Vec::new();
    let mut trace = Vec::new();
    let every = (config.max_iters / 100).max(1);
    for &alpha in &RPS_RATES {
        let mut st = HedgeState::new(&op, &x0)?;
        let mut prev = st.relative_entropy_from(&u);
        for k in 1..=config.max_iters {
            st.step(alpha)?;
            let re = st.relative_entropy_from(&u);
            if alpha == 0.5 && k % every == 0 {
                trace.push((k, re));
            }
            if !(re > prev) {
                bad.push(format!("alpha={alpha} stalls at step {k}"));
                break;
            }
            prev = re;
        }
    }
    let hash = format!("{:016x}", seed);
    let mut r = record(
        hash,
        bad.is_empty(),
        if bad.is_empty() { "increasing".to_string() } else { bad.join("; ") },
        config.max_iters,
        None,
    );
    r.trace = trace;
    Ok(r)
}

fn gkt_trial(config: &ExperimentConfig, seed: u64, dim: usize) -> Result<TrialRecord> {
    let g = gen_random_game(GameKind::Bimatrix, &[dim, dim], seed)?;
    let GeneratedGame::Bimatrix(bm) = &g else { unreachable!() };
    let res = solve_bimatrix_via_hedge(bm, config.eps, &search_options(config, seed))?;
    let d = &res.diagnostics;
    let (success, outcome, achieved) = match &res.pair {
        Some((p, q)) => {
            let ok = is_approx_equilibrium(GameRef::Bimatrix(bm), ProfileRef::Pair(p, q), config.eps, EquilibriumMode::Bimatrix)?;
            let chain = d.eps_chain.iter().all(|l| l.holds);
            let success = ok && chain && d.zero_mass_on_verified == 0;
            (success, if success { "verified".to_string() } else { "chain check failed".to_string() }, Some(bm.regret(p, q)?))
        }
        None => (false, format!("no verified pair (best C0 regret {:.3e})", d.best_regret), None),
    };
    Ok(record(g.hash(), success, outcome, d.iterations, achieved))
}

fn all_of(n: usize, s: usize) -> Vec<usize> {
    vec![s; n]
}

fn stag_hunt_trial(seed: u64, n: usize) -> Result<TrialRecord> {
    let g = gen_random_game(GameKind::StagHunt, &[n], seed)?;
    let GeneratedGame::StagHunt(spec) = &g else { unreachable!() };
    let game = build_stag_hunt(spec)?;
    let gg = GameGraphs::new(&game, 0.0)?;
    let expected = {
        let mut v = vec![game.encode(&all_of(n, A))?, game.encode(&all_of(n, D))?];
        v.sort_unstable();
        v
    };
    let mut bad = Vec::new();
    if !gg.flags().weakly_acyclic {
        bad.push("not weakly acyclic");
    }
    if gg.maximal_states(MaximalityKind::Weak) != expected {
        bad.push("weak maximal states differ from {A^n, D^n}");
    }
    if gg.maximal_states(MaximalityKind::Strong) != expected {
        bad.push("strong maximal states differ from {A^n, D^n}");
    }
    let strict_ne = crate::deployment::pure_nash(&game, 0.0).iter().filter(|p| p.strict).count();
    if strict_ne != 2 {
        bad.push("A^n and D^n are not both strict equilibria");
    }
    Ok(verdict(g.hash(), bad))
}

fn verdict(hash: String, bad: Vec<&str>) -> TrialRecord {
    let ok = bad.is_empty();
    record(hash, ok, if ok { "ok".to_string() } else { bad.join("; ") }, 0, None)
}

/// Valid insurance parameters drawn inside the admissible margins.
pub fn random_insurance<R: Rng>(rng: &mut R, spec: &StagHuntSpec) -> InsuranceParams {
    let m = spec.min_success_margin();
    let premium = m * 0.5 * (0.05 + 0.95 * rng.random::<f64>());
    let surplus = premium + m * 0.9 * (0.05 + 0.95 * rng.random::<f64>());
    InsuranceParams { premium, surplus }
}

/// Checks both mechanism theorems on one random stag hunt.
pub fn check_mechanisms(spec: &StagHuntSpec, params: &InsuranceParams, weak_order: DominanceOrder) -> Result<Vec<&'static str>> {
    let n = spec.n;
    let mut bad = Vec::new();
    let ins = apply_insurance(spec, params)?;
    let dom = iterated_dominance(&ins, DominanceKind::Strict, DominanceOrder::Deterministic)?;
    if dom.rounds != 2 {
        bad.push("insurance: strict dominance does not take exactly 2 rounds");
    }
    if dom.surviving != vec![vec![A]; n] {
        bad.push("insurance: strict dominance does not end at A^n");
    }
    let gi = GameGraphs::new(&ins, 0.0)?;
    let an = vec![ins.encode(&all_of(n, A))?];
    if gi.maximal_states(MaximalityKind::Weak) != an || gi.maximal_states(MaximalityKind::Strong) != an {
        bad.push("insurance: A^n is not the unique maximal state");
    }
    let penalty = 1.0 + (0..n).map(|i| spec.c - spec.benefit_for(i, 1)).fold(0.0, f64::max);
    let ele = apply_election(spec, &ElectionParams::new(spec, penalty)?)?;
    let weak = iterated_dominance(&ele, DominanceKind::Weak, weak_order)?;
    let xy = vec![vec![X, Y]; n];
    if weak.outcomes.iter().any(|o| *o != xy) || weak.surviving != xy {
        bad.push("election: weak dominance does not leave exactly {X, Y}");
    }
    let ge = GameGraphs::new(&ele, 0.0)?;
    if !ge.flags().weakly_ordinally_acyclic {
        bad.push("election: not weakly ordinally acyclic");
    }
    if ge.maximal_states(MaximalityKind::Strong).iter().any(|&s| ele.decode(s).contains(&D)) {
        bad.push("election: D appears in a strongly maximal state");
    }
    let dn = ele.encode(&all_of(n, D))?;
    if !crate::deployment::pure_nash(&ele, 0.0).iter().any(|p| p.profile == dn && !p.strict) {
        bad.push("election: D^n is not a weak pure equilibrium");
    }
    Ok(bad)
}

fn mechanism_trial(seed: u64, n: usize) -> Result<TrialRecord> {
    let g = gen_random_game(GameKind::StagHunt, &[n], seed)?;
    let GeneratedGame::StagHunt(spec) = &g else { unreachable!() };
    let params = random_insurance(&mut stream(seed, 1), spec);
    let bad = check_mechanisms(spec, &params, DominanceOrder::Deterministic)?;
    Ok(verdict(g.hash(), bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig {
            trials: 4,
            ..ExperimentConfig::new(kind)
        }
    }

    #[test]
    fn config_validation() {
        let mut c = small(ExperimentKind::StagHuntSuite);
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.eps = 0.0;
        assert!(c.validate().is_err());
        c.eps = 0.1;
        c.dims = (3, 2);
        assert!(c.validate().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let c = small(ExperimentKind::MechanismSuite);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.successes, 4);
        assert_eq!(a.success_rate, 1.0);
    }

    #[test]
    fn trials_rerun_in_isolation() {
        let c = small(ExperimentKind::StagHuntSuite);
        let rep = run_experiment(&c).unwrap();
        let r = &rep.records[2];
        let again = run_trial(&c, r.seed, r.dim).unwrap();
        assert_eq!(again.game_hash, r.game_hash);
        assert_eq!(again.success, r.success);
    }

    #[test]
    fn small_experiments_succeed() {
        let mut c = small(ExperimentKind::RandomSymmetricHedge);
        c.dims = (3, 5);
        c.eps = 1e-2;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.records.len(), 4);
        assert!(r.records.iter().all(|t| t.achieved_eps.is_some()));
        let rps = run_experiment(&small(ExperimentKind::RpsRepulsion)).unwrap();
        assert_eq!(rps.successes, 4, "{:?}", rps.failures);
        assert!(!rps.records[0].trace.is_empty());
    }

    #[test]
    fn quantiles_and_rates() {
        let c = small(ExperimentKind::StagHuntSuite);
        let mut recs: Vec<TrialRecord> = (0..4).map(|i| record(String::new(), i % 2 == 0, "x", i * 10, None)).collect();
        for (i, r) in recs.iter_mut().enumerate() {
            r.trial = i;
        }
        let rep = ExperimentReport::from_records(c.clone(), recs);
        assert_eq!(rep.successes, 2);
        assert_eq!(rep.success_rate, 0.5);
        assert_eq!(rep.failures.len(), 2);
        let q = rep.iteration_quantiles.unwrap();
        assert_eq!((q.min, q.median, q.max), (0.0, 10.0, 30.0));
        let empty = ExperimentReport::from_records(c, Vec::new());
        assert!(empty.iteration_quantiles.is_none());
    }
}
