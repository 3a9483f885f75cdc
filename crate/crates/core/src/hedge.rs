//! The Hedge (multiplicative weights) map, learning-rate schedules and
//! relative-entropy diagnostics.
//!
//! `T_i(x) = x_i exp(α (Cx)_i) / Σ_j x_j exp(α (Cx)_j)`.
//!
//! Long runs keep log-weights so that iterates never leave the relative
//! interior through underflow of the normalizing sum.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::game::{max_of, min_of, payoff_vector, Matrix, MixedStrategy, PayoffOperator};

/// Step displacement (sup norm) below which a run declares a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleForm {
    Constant,
    Harmonic,
    Power,
}

/// `α_k = c` (constant), `c/(k+1)` (harmonic) or `c/(k+1)^exponent` (power).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningRateSchedule {
    pub form: ScheduleForm,
    pub c: f64,
    pub exponent: f64,
}

impl LearningRateSchedule {
    #[inline]
    pub fn alpha(&self, k: usize) -> f64 {
        let t = (k + 1) as f64;
        match self.form {
            ScheduleForm::Constant => self.c,
            ScheduleForm::Harmonic => self.c / t,
            ScheduleForm::Power => self.c / t.powf(self.exponent),
        }
    }

    /// Whether `α_k -> 0` and `Σ α_k = ∞`.
    pub fn satisfies_convergence_conditions(&self) -> bool {
        match self.form {
            ScheduleForm::Constant => false,
            ScheduleForm::Harmonic => true,
            ScheduleForm::Power => self.exponent > 0.0 && self.exponent <= 1.0,
        }
    }

    pub fn harmonic(c: f64) -> Self {
        Self {
            form: ScheduleForm::Harmonic,
            c,
            exponent: 1.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            form: ScheduleForm::Constant,
            c,
            exponent: 0.0,
        }
    }

    pub fn power(c: f64, exponent: f64) -> Self {
        Self {
            form: ScheduleForm::Power,
            c,
            exponent,
        }
    }
}

pub fn make_schedule(form: ScheduleForm, c: f64, exponent: f64) -> Result<LearningRateSchedule> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("schedule constant must be positive"));
    }
    Ok(match form {
        ScheduleForm::Power => {
            if !(exponent > 0.0 && exponent <= 1.0) {
                return Err(invalid(format!("power exponent {exponent} outside (0, 1]")));
            }
            LearningRateSchedule::power(c, exponent)
        }
        ScheduleForm::Harmonic => LearningRateSchedule::harmonic(c),
        ScheduleForm::Constant => LearningRateSchedule::constant(c),
    })
}

/// One application of the Hedge map, with exponents shifted by their maximum.
pub fn hedge_step(op: &PayoffOperator, x: &MixedStrategy, alpha: f64) -> Result<MixedStrategy> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("learning rate {alpha} must be finite and nonnegative")));
    }
    let v = payoff_vector(op, x)?;
    Ok(MixedStrategy::from_simplex_unchecked(tilt(x.weights(), &v, alpha)))
}

fn tilt(x: &[f64], v: &[f64], alpha: f64) -> Vec<f64> {
    let shift = x
        .iter()
        .zip(v)
        .filter(|(w, _)| **w > 0.0)
        .map(|(_, p)| alpha * p)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = x
        .iter()
        .zip(v)
        .map(|(xi, p)| if *xi > 0.0 { xi * (alpha * p - shift).exp() } else { 0.0 })
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|wi| *wi /= s);
    w
}

/// Kullback-Leibler divergence `Σ_{i ∈ carrier(p)} p_i ln(p_i / q_i)`.
pub fn relative_entropy(p: &MixedStrategy, q: &MixedStrategy) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut s = 0.0;
    for (i, (&a, &b)) in p.weights().iter().zip(q.weights()).enumerate() {
        if a > 0.0 {
            if b <= 0.0 {
                return Err(Error::Precondition(format!("index {i} is in carrier(p) but not carrier(q)")));
            }
            s += a * (a / b).ln();
        }
    }
    Ok(s.max(0.0))
}

/// True iff `x` is pure or its payoffs agree within `tol` on its carrier.
pub fn is_fixed_point(op: &PayoffOperator, x: &MixedStrategy, tol: f64) -> Result<bool> {
    let v = payoff_vector(op, x)?;
    Ok(carrier_spread(x.weights(), &v) <= tol)
}

fn carrier_spread(x: &[f64], v: &[f64]) -> f64 {
    let on: Vec<f64> = x.iter().zip(v).filter(|(w, _)| **w > 0.0).map(|(_, p)| *p).collect();
    max_of(&on) - min_of(&on)
}

/// Hedge iterate held as log-weights.
#[derive(Clone, Debug)]
pub struct HedgeState<'a> {
    op: &'a PayoffOperator,
    log_w: Vec<f64>,
    x: Vec<f64>,
    payoffs: Vec<f64>,
}

impl<'a> HedgeState<'a> {
    /// `x0` must be interior.
    pub fn new(op: &'a PayoffOperator, x0: &MixedStrategy) -> Result<Self> {
        if !x0.is_interior(0.0) {
            return Err(Error::Precondition("Hedge runs must start in the interior of the simplex".into()));
        }
        let payoffs = payoff_vector(op, x0)?;
        Ok(Self {
            op,
            log_w: x0.weights().iter().map(|w| w.ln()).collect(),
            x: x0.weights().to_vec(),
            payoffs,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn strategy(&self) -> MixedStrategy {
        MixedStrategy::from_simplex_unchecked(self.x.clone())
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    /// `C x` at the current iterate.
    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// `x · Cx`.
    pub fn mean_payoff(&self) -> f64 {
        self.x.iter().zip(&self.payoffs).map(|(a, b)| a * b).sum()
    }

    /// Largest gain of a pure deviation, `max_i (Cx)_i - x·Cx`.
    pub fn regret(&self) -> f64 {
        max_of(&self.payoffs) - self.mean_payoff()
    }

    /// Applies one step and returns the sup-norm displacement.
    pub fn step(&mut self, alpha: f64) -> Result<f64> {
        for (l, p) in self.log_w.iter_mut().zip(&self.payoffs) {
            *l += alpha * p;
        }
        let m = max_of(&self.log_w);
        self.log_w.iter_mut().for_each(|l| *l -= m);
        let s: f64 = self.log_w.iter().map(|l| l.exp()).sum();
        let ls = s.ln();
        let mut disp: f64 = 0.0;
        for (xi, l) in self.x.iter_mut().zip(&self.log_w) {
            let nx = (l - ls).exp();
            disp = disp.max((nx - *xi).abs());
            *xi = nx;
        }
        self.payoffs = self.op.eval(&self.x)?;
        Ok(disp)
    }

    /// `RE(reference, x)` computed from log-weights.
    pub fn relative_entropy_from(&self, reference: &MixedStrategy) -> f64 {
        let s: f64 = self.log_w.iter().map(|l| l.exp()).sum();
        let ls = s.ln();
        reference
            .weights()
            .iter()
            .zip(&self.log_w)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, l)| p * (p.ln() - (l - ls)))
            .sum::<f64>()
            .max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxIters,
    FixedPoint,
    Converged,
}

#[derive(Clone, Debug)]
pub struct HedgeOptions {
    pub max_iters: usize,
    pub reference: Option<MixedStrategy>,
    pub stop_re: Option<f64>,
    /// Keep every `record_every`-th iterate (the final one is always kept).
    pub record_every: usize,
}

impl Default for HedgeOptions {
    fn default() -> Self {
        Self {
            max_iters: DEFAULT_MAX_ITERS,
            reference: None,
            stop_re: None,
            record_every: 1,
        }
    }
}

/// Recorded orbit of a Hedge run. Entry `j` of each sequence refers to
/// iteration `iters[j]`; `rates[j]` is the learning rate applied there.
#[derive(Clone, Debug, Serialize)]
pub struct HedgeTrace {
    pub iters: Vec<usize>,
    pub iterates: Vec<MixedStrategy>,
    pub rates: Vec<f64>,
    pub payoffs: Vec<f64>,
    pub re_to_reference: Option<Vec<f64>>,
    pub stop_reason: StopReason,
    /// Number of Hedge steps taken.
    pub steps: usize,
}

impl HedgeTrace {
    pub fn last(&self) -> &MixedStrategy {
        self.iterates.last().expect("traces are never empty")
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    /// CSV with columns iter, alpha, payoff, re_to_reference, x_0..x_{n-1}.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let n = self.iterates.first().map_or(0, MixedStrategy::len);
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["iter".to_string(), "alpha".into(), "payoff".into(), "re_to_reference".into()];
        header.extend((0..n).map(|i| format!("x_{i}")));
        wr.write_record(&header)?;
        for j in 0..self.iterates.len() {
            let mut row = vec![
                self.iters[j].to_string(),
                self.rates[j].to_string(),
                self.payoffs[j].to_string(),
                self.re_to_reference.as_ref().map_or(String::new(), |r| r[j].to_string()),
            ];
            row.extend(self.iterates[j].weights().iter().map(f64::to_string));
            wr.write_record(&row)?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn run_hedge(
    op: &PayoffOperator,
    x0: &MixedStrategy,
    schedule: &LearningRateSchedule,
    opts: &HedgeOptions,
) -> Result<HedgeTrace> {
    if opts.record_every == 0 {
        return Err(invalid("record_every must be positive"));
    }
    if opts.stop_re.is_some() && opts.reference.is_none() {
        return Err(invalid("stop_re needs a reference strategy"));
    }
    if let Some(r) = &opts.reference {
        if r.len() != op.dim() {
            return Err(Error::Dimension {
                expected: op.dim(),
                got: r.len(),
            });
        }
    }
    let mut st = HedgeState::new(op, x0)?;
    let mut tr = HedgeTrace {
        iters: Vec::new(),
        iterates: Vec::new(),
        rates: Vec::new(),
        payoffs: Vec::new(),
        re_to_reference: opts.reference.as_ref().map(|_| Vec::new()),
        stop_reason: StopReason::MaxIters,
        steps: 0,
    };
    let record = |tr: &mut HedgeTrace, st: &HedgeState, k: usize, re: Option<f64>| {
        tr.iters.push(k);
        tr.iterates.push(st.strategy());
        tr.rates.push(schedule.alpha(k));
        tr.payoffs.push(st.mean_payoff());
        if let (Some(v), Some(re)) = (tr.re_to_reference.as_mut(), re) {
            v.push(re);
        }
    };
    let mut k = 0;
    loop {
        let re = opts.reference.as_ref().map(|r| st.relative_entropy_from(r));
        let converged = matches!((re, opts.stop_re), (Some(r), Some(s)) if r < s);
        if k % opts.record_every == 0 || converged || k == opts.max_iters {
            record(&mut tr, &st, k, re);
        }
        if converged {
            tr.stop_reason = StopReason::Converged;
            break;
        }
        if k == opts.max_iters {
            tr.stop_reason = StopReason::MaxIters;
            break;
        }
        let disp = st.step(schedule.alpha(k))?;
        tr.steps += 1;
        if disp < FIXED_POINT_TOL {
            tr.stop_reason = StopReason::FixedPoint;
            break;
        }
        k += 1;
    }
    Ok(tr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageWindow {
    All,
    /// The last `k` recorded iterates.
    Tail(usize),
}

/// Arithmetic mean of the recorded iterates in `window`.
pub fn average_iterates(trace: &HedgeTrace, window: AverageWindow) -> Result<MixedStrategy> {
    let len = trace.iterates.len();
    let start = match window {
        AverageWindow::All => 0,
        AverageWindow::Tail(k) => {
            if k == 0 {
                return Err(invalid("empty averaging window"));
            }
            len.saturating_sub(k)
        }
    };
    let sel = &trace.iterates[start..];
    if sel.is_empty() {
        return Err(invalid("empty averaging window"));
    }
    let n = sel[0].len();
    let mut s = vec![0.0; n];
    for x in sel {
        for (a, b) in s.iter_mut().zip(x.weights()) {
            *a += b;
        }
    }
    MixedStrategy::normalized(s)
}

/// Streaming averages of a Hedge orbit: plain, rate-weighted, and over the
/// most recent half of the run (via periodic checkpoints of the plain sum).
#[derive(Clone, Debug)]
pub struct RunningAverages {
    sum: Vec<f64>,
    count: usize,
    wsum: Vec<f64>,
    wtotal: f64,
    checkpoints: Vec<(usize, Vec<f64>)>,
}

impl RunningAverages {
    pub fn new(n: usize) -> Self {
        Self {
            sum: vec![0.0; n],
            count: 0,
            wsum: vec![0.0; n],
            wtotal: 0.0,
            checkpoints: vec![(0, vec![0.0; n])],
        }
    }

    pub fn push(&mut self, x: &[f64], alpha: f64) {
        for ((s, w), v) in self.sum.iter_mut().zip(self.wsum.iter_mut()).zip(x) {
            *s += v;
            *w += alpha * v;
        }
        self.count += 1;
        self.wtotal += alpha;
    }

    pub fn checkpoint(&mut self) {
        self.checkpoints.push((self.count, self.sum.clone()));
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn plain(&self) -> Option<MixedStrategy> {
        MixedStrategy::normalized(self.sum.clone()).ok()
    }

    pub fn weighted(&self) -> Option<MixedStrategy> {
        if self.wtotal > 0.0 {
            MixedStrategy::normalized(self.wsum.clone()).ok()
        } else {
            None
        }
    }

    /// Average since the checkpoint nearest to the midpoint of the run.
    pub fn tail_half(&self) -> Option<MixedStrategy> {
        let (c0, s0) = &self.checkpoints[self.checkpoints.len() / 2];
        if *c0 >= self.count {
            return None;
        }
        let d: Vec<f64> = self.sum.iter().zip(s0).map(|(a, b)| (a - b).max(0.0)).collect();
        MixedStrategy::normalized(d).ok()
    }
}

/// Affine map `C -> (C + shift) * scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineRescale {
    pub shift: f64,
    pub scale: f64,
}

impl AffineRescale {
    pub fn apply(&self, m: &Matrix) -> Matrix {
        m.map(|v| (v + self.shift) * self.scale)
    }
}

/// Maps a matrix onto `[0, 1]` entrywise. Equilibria and stability verdicts
/// are unchanged; payoff values are not.
pub fn rescale_to_unit(m: &Matrix) -> (Matrix, AffineRescale) {
    let (lo, hi) = (m.min(), m.max());
    let r = AffineRescale {
        shift: -lo,
        scale: if hi > lo { 1.0 / (hi - lo) } else { 1.0 },
    };
    (r.apply(m).map(|v| v.clamp(0.0, 1.0)), r)
}

/// `RE(y, T_α(x))`.
pub fn re_after_step(op: &PayoffOperator, x: &MixedStrategy, y: &MixedStrategy, alpha: f64) -> Result<f64> {
    relative_entropy(y, &hedge_step(op, x, alpha)?)
}

/// `d/dα RE(y, T_α(x)) = Σ_j x_j v_j e^{α v_j} / Σ_j x_j e^{α v_j} - y·v` with `v = Cx`.
pub fn re_derivative(op: &PayoffOperator, x: &MixedStrategy, y: &MixedStrategy, alpha: f64) -> Result<f64> {
    let v = payoff_vector(op, x)?;
    let t = tilt(x.weights(), &v, alpha);
    let num: f64 = t.iter().zip(&v).map(|(a, b)| a * b).sum();
    Ok(num - y.dot(&v))
}

#[derive(Clone, Debug, Serialize)]
pub struct SecantRow {
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    pub divided_differences: Vec<f64>,
    /// All second divided differences are at least `-1e-9`.
    pub convex: bool,
    /// All second divided differences are strictly positive.
    pub strictly_convex: bool,
    pub x_is_fixed_point: bool,
    /// `Σ_j x_j (Cx)_j²`.
    pub c_bar: f64,
    pub secant: Option<Vec<SecantRow>>,
    pub secant_holds: Option<bool>,
    /// `(x - y)·Cx`.
    pub derivative_at_zero: f64,
    /// Second-order one-sided finite difference of `RE(y, T_α(x))` at 0.
    pub derivative_at_zero_fd: f64,
}

pub const CONVEXITY_TOL: f64 = 1e-9;

/// Numerical check that `α -> RE(y, T_α(x))` is convex on `alphas` and,
/// when `secant` is set, that
/// `RE(y, T_α(x)) <= RE(y, x) - α (y - x)·Cx + α (e^α - 1) C̄`.
pub fn check_convexity_bounds(
    op: &PayoffOperator,
    x: &MixedStrategy,
    y: &MixedStrategy,
    alphas: &[f64],
    secant: bool,
) -> Result<ConvexityReport> {
    if !x.is_interior(0.0) {
        return Err(Error::Precondition("x must be interior".into()));
    }
    if alphas.iter().any(|a| !(*a > 0.0)) || alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("alphas must be positive and strictly increasing"));
    }
    if secant && !op.is_unit_bounded() {
        return Err(Error::Precondition("the secant bound needs payoffs in [0, 1]".into()));
    }
    let v = payoff_vector(op, x)?;
    let values = alphas
        .iter()
        .map(|&a| re_after_step(op, x, y, a))
        .collect::<Result<Vec<_>>>()?;
    let divided_differences: Vec<f64> = (0..alphas.len().saturating_sub(2))
        .map(|i| {
            let (a, b, c) = (alphas[i], alphas[i + 1], alphas[i + 2]);
            let s1 = (values[i + 1] - values[i]) / (b - a);
            let s2 = (values[i + 2] - values[i + 1]) / (c - b);
            (s2 - s1) / (c - a)
        })
        .collect();
    let c_bar: f64 = x.weights().iter().zip(&v).map(|(w, p)| w * p * p).sum();
    let re0 = relative_entropy(y, x)?;
    let drift: f64 = y.dot(&v) - x.dot(&v);
    let secant_rows = if secant {
        Some(
            alphas
                .iter()
                .zip(&values)
                .map(|(&a, &lhs)| SecantRow {
                    alpha: a,
                    lhs,
                    rhs: re0 - a * drift + a * (a.exp() - 1.0) * c_bar,
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let h = 1e-5;
    let f0 = re0;
    let f1 = re_after_step(op, x, y, h)?;
    let f2 = re_after_step(op, x, y, 2.0 * h)?;
    Ok(ConvexityReport {
        convex: divided_differences.iter().all(|d| *d >= -CONVEXITY_TOL),
        strictly_convex: divided_differences.iter().all(|d| *d > 0.0),
        x_is_fixed_point: carrier_spread(x.weights(), &v) == 0.0,
        secant_holds: secant_rows
            .as_ref()
            .map(|rows| rows.iter().all(|r| r.lhs <= r.rhs + 1e-12)),
        secant: secant_rows,
        alphas: alphas.to_vec(),
        values,
        divided_differences,
        c_bar,
        derivative_at_zero: -drift,
        derivative_at_zero_fd: (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h),
    })
}

/// Iterate type that produced an approximate equilibrium.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Candidate {
    Last,
    Average,
    WeightedAverage,
    TailAverage,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub schedule: LearningRateSchedule,
    /// Iterations per attempt.
    pub max_iters: usize,
    /// Extra attempts from random interior starts after the uniform start.
    pub restarts: usize,
    pub seed: u64,
    /// Averaged candidates are tested every `check_every` iterations.
    pub check_every: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            schedule: LearningRateSchedule::power(1.0, 0.5),
            max_iters: 200_000,
            restarts: 4,
            seed: 0,
            check_every: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricSearch {
    pub strategy: Option<MixedStrategy>,
    pub found_by: Option<Candidate>,
    /// Symmetric regret of `strategy`, or the smallest regret seen.
    pub regret: f64,
    pub iterations: usize,
    pub attempts: usize,
}

/// Runs Hedge until the last iterate or one of its running averages is an
/// `eps`-approximate symmetric equilibrium, restarting from seeded random
/// interior points when an attempt exhausts its budget.
pub fn find_symmetric_equilibrium(op: &PayoffOperator, eps: f64, opts: &SearchOptions) -> Result<SymmetricSearch> {
    search_with(op, eps, opts, |y| {
        let r = crate::game::symmetric_regret(op, y).unwrap_or(f64::INFINITY);
        (r <= eps).then_some(r)
    })
}

/// Shared driver: `accept` returns a score for candidates it accepts.
pub(crate) fn search_with(
    op: &PayoffOperator,
    eps: f64,
    opts: &SearchOptions,
    mut accept: impl FnMut(&MixedStrategy) -> Option<f64>,
) -> Result<SymmetricSearch> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if opts.check_every == 0 {
        return Err(invalid("check_every must be positive"));
    }
    let n = op.dim();
    let mut best = f64::INFINITY;
    let mut total = 0;
    for attempt in 0..=opts.restarts {
        let x0 = if attempt == 0 {
            MixedStrategy::uniform(n)
        } else {
            MixedStrategy::normalized(crate::rng::dirichlet_flat(&mut crate::rng::stream(opts.seed, attempt as u64), n))?
        };
        let mut st = HedgeState::new(op, &x0)?;
        let mut avg = RunningAverages::new(n);
        let mut k = 0;
        loop {
            let r = st.regret();
            best = best.min(r);
            if r <= eps {
                let y = st.strategy();
                if let Some(score) = accept(&y) {
                    return Ok(SymmetricSearch {
                        strategy: Some(y),
                        found_by: Some(Candidate::Last),
                        regret: score,
                        iterations: total + k,
                        attempts: attempt + 1,
                    });
                }
            }
            if k > 0 && k % opts.check_every == 0 {
                avg.checkpoint();
                let cands = [
                    (Candidate::Average, avg.plain()),
                    (Candidate::WeightedAverage, avg.weighted()),
                    (Candidate::TailAverage, avg.tail_half()),
                ];
                for (kind, y) in cands {
                    let Some(y) = y else { continue };
                    if let Some(score) = accept(&y) {
                        return Ok(SymmetricSearch {
                            strategy: Some(y),
                            found_by: Some(kind),
                            regret: score,
                            iterations: total + k,
                            attempts: attempt + 1,
                        });
                    }
                }
            }
            if k >= opts.max_iters {
                break;
            }
            let alpha = opts.schedule.alpha(k);
            st.step(alpha)?;
            avg.push(st.x(), alpha);
            k += 1;
        }
        total += k;
    }
    Ok(SymmetricSearch {
        strategy: None,
        found_by: None,
        regret: best,
        iterations: total,
        attempts: opts.restarts + 1,
    })
}
