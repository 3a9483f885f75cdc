//! Reduction from bimatrix games to symmetric games (Gale-Kuhn-Tucker).
//!
//! Pipeline: normalize `(A, B)` to `0 < A' <= 1`, `-1 <= B' < 0` (scale `c'`),
//! embed into the symmetric game `C`, shift and scale `C` into `(0, 1]`
//! (scale `c`), run Hedge on `C₀`, purge the candidate into a well-supported
//! symmetric equilibrium at `c c' ε`, and read off `(P, Q)`.
//! Every link of the ε-chain is re-verified with the game predicates.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::game::{
    max_of, symmetric_regret, symmetric_well_supported_gap, BimatrixGame, Matrix, MixedStrategy,
    PayoffOperator,
};
use crate::hedge::{search_with, AffineRescale, Candidate, LearningRateSchedule, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalizationRecord {
    pub shift_a: f64,
    pub shift_b: f64,
    /// `c'`.
    pub scale: f64,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
}

impl NormalizationRecord {
    pub fn is_identity(&self) -> bool {
        self.shift_a == 0.0 && self.shift_b == 0.0 && self.scale == 1.0
    }
}

fn is_normalized(g: &BimatrixGame) -> bool {
    g.a().min() > 0.0 && g.a().max() <= 1.0 && g.b().min() >= -1.0 && g.b().max() < 0.0
}

/// Shifts `A` to minimum 1 and `B` to maximum -1, then divides both by the
/// largest resulting magnitude. Already-normalized games are left as is.
pub fn normalize_bimatrix(game: &BimatrixGame) -> (BimatrixGame, NormalizationRecord) {
    let (shift_a, shift_b, scale) = if is_normalized(game) {
        (0.0, 0.0, 1.0)
    } else {
        let sa = 1.0 - game.a().min();
        let sb = -1.0 - game.b().max();
        let mag = (game.a().max() + sa).max(-(game.b().min() + sb));
        (sa, sb, 1.0 / mag)
    };
    let a = game.a().map(|v| ((v + shift_a) * scale).min(1.0));
    let b = game.b().map(|v| ((v + shift_b) * scale).max(-1.0));
    let rec = NormalizationRecord {
        shift_a,
        shift_b,
        scale,
        a_range: (a.min(), a.max()),
        b_range: (b.min(), b.max()),
    };
    (BimatrixGame::new(a, b).expect("shapes preserved"), rec)
}

/// The symmetric game `[[0, A, -1], [Bᵀ, 0, 1], [1ᵀ, -1ᵀ, 0]]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GktGame {
    #[serde(rename = "C")]
    pub c: Matrix,
    pub a: usize,
    pub b: usize,
}

pub fn gkt_symmetrize(game: &BimatrixGame) -> Result<GktGame> {
    if !(game.a().min() > 0.0) || !(game.b().max() < 0.0) {
        return Err(Error::Precondition("the symmetrization needs A > 0 and B < 0".into()));
    }
    let (a, b) = (game.rows(), game.cols());
    let n = a + b + 1;
    let c = Matrix::from_fn(n, n, |i, j| match (i < a, i < a + b, j < a, j < a + b) {
        (true, _, true, _) => 0.0,
        (true, _, false, true) => game.a().get(i, j - a),
        (true, _, false, false) => -1.0,
        (false, true, true, _) => game.b().get(j, i - a),
        (false, true, false, true) => 0.0,
        (false, true, false, false) => 1.0,
        (false, false, true, _) => 1.0,
        (false, false, false, true) => -1.0,
        (false, false, false, false) => 0.0,
    });
    Ok(GktGame { c, a, b })
}

pub type StrategyPair = (MixedStrategy, MixedStrategy);

/// `P₁ = X_a/|X_a|`, `Q₁ = Y_b/|Y_b|` and `P₂ = Y_a/|Y_a|`, `Q₂ = X_b/|X_b|`.
pub fn recover_equilibria(x_star: &MixedStrategy, y_star: &MixedStrategy, a: usize, b: usize) -> Result<(StrategyPair, StrategyPair)> {
    for s in [x_star, y_star] {
        if s.len() != a + b + 1 {
            return Err(Error::Dimension {
                expected: a + b + 1,
                got: s.len(),
            });
        }
    }
    let block = |s: &MixedStrategy, lo: usize, hi: usize, name: &str| -> Result<MixedStrategy> {
        let w = s.weights()[lo..hi].to_vec();
        if !(w.iter().sum::<f64>() > 0.0) {
            return Err(Error::ZeroMassBlock(format!("{name} block carries no mass")));
        }
        MixedStrategy::normalized(w)
    };
    let p1 = block(x_star, 0, a, "X_a")?;
    let q1 = block(y_star, a, a + b, "Y_b")?;
    let p2 = block(y_star, 0, a, "Y_a")?;
    let q2 = block(x_star, a, a + b, "X_b")?;
    Ok(((p1, q1), (p2, q2)))
}

/// Drops strategies earning less than `best - eps/2` and renormalizes.
/// Returns `None` when no mass survives.
fn purge_once(x: &[f64], payoffs: &[f64], eps: f64) -> Option<Vec<f64>> {
    let cut = max_of(payoffs) - eps / 2.0;
    let w: Vec<f64> = x
        .iter()
        .zip(payoffs)
        .map(|(xi, p)| if *p >= cut { *xi } else { 0.0 })
        .collect();
    let s: f64 = w.iter().sum();
    (s > 0.0).then(|| w.into_iter().map(|v| v / s).collect())
}

/// Symmetric mass purge iterated to a fixed point.
pub fn purge_symmetric(op: &PayoffOperator, y: &MixedStrategy, eps: f64) -> Result<Option<MixedStrategy>> {
    let mut cur = y.weights().to_vec();
    for _ in 0..=y.len() {
        let p = op.eval(&cur)?;
        let Some(next) = purge_once(&cur, &p, eps) else {
            return Ok(None);
        };
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(Some(MixedStrategy::normalized(cur)?))
}

fn purge_pair(game: &BimatrixGame, p: &MixedStrategy, q: &MixedStrategy, eps: f64) -> Option<StrategyPair> {
    let (mut pc, mut qc) = (p.weights().to_vec(), q.weights().to_vec());
    for _ in 0..=(game.rows() + game.cols()) {
        let aq = game.a().mul_vec(&qc);
        let pb = game.b().vec_mul(&pc);
        let np = purge_once(&pc, &aq, eps)?;
        let nq = purge_once(&qc, &pb, eps)?;
        if np == pc && nq == qc {
            break;
        }
        pc = np;
        qc = nq;
    }
    Some((MixedStrategy::normalized(pc).ok()?, MixedStrategy::normalized(qc).ok()?))
}

/// Converts an `eps²/8`-approximate equilibrium of a game with payoffs in
/// `[0, 1]` into an `eps`-well-supported one by purging poor strategies.
/// The output is re-verified; the returned `f64` is its well-supported gap.
pub fn approx_to_well_supported(
    game: &BimatrixGame,
    p: &MixedStrategy,
    q: &MixedStrategy,
    eps: f64,
) -> Result<(MixedStrategy, MixedStrategy, f64)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps must lie in (0, 1]"));
    }
    for m in [game.a(), game.b()] {
        if m.min() < 0.0 || m.max() > 1.0 {
            return Err(Error::Precondition("payoffs must lie in [0, 1]".into()));
        }
    }
    let r = game.regret(p, q)?;
    if r > eps * eps / 8.0 {
        return Err(Error::Precondition(format!(
            "input regret {r:e} exceeds eps^2/8 = {:e}",
            eps * eps / 8.0
        )));
    }
    let (p2, q2) = purge_pair(game, p, q, eps).ok_or_else(|| Error::Conversion("purge removed all mass".into()))?;
    let gap = game.well_supported_gap(&p2, &q2)?;
    if gap > eps {
        return Err(Error::Conversion(format!("purged profile is only {gap:e}-well-supported")));
    }
    Ok((p2, q2, gap))
}

/// Epsilons used along the reduction for a target `eps` on the original game.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonBudget {
    pub target_eps: f64,
    /// `c' ε`: well-supported level on `C` and `Ĉ`, approximation level on `(A', B')`.
    pub normalized_eps: f64,
    /// `c c' ε`: well-supported level on `C₀`.
    pub c0_eps: f64,
    /// `(c c' ε)² / 8`.
    pub c0_approx_eps: f64,
    /// `min{1/3, min A', min(-B')}`; `normalized_eps` must stay below it.
    pub constraint_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub game: &'static str,
    pub predicate: &'static str,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GktDiagnostics {
    pub normalization: NormalizationRecord,
    /// Maps `C` to `C₀ = (C + shift) * c`.
    pub c_rescale: AffineRescale,
    pub budget: EpsilonBudget,
    pub iterations: usize,
    pub attempts: usize,
    pub found_by: Option<Candidate>,
    /// Smallest symmetric regret on `C₀` seen at a last iterate.
    pub best_regret: f64,
    /// Candidates that passed the `C` well-supported check but had an empty
    /// block. Always zero when the budget constraint holds.
    pub zero_mass_on_verified: usize,
    pub eps_chain: Vec<ChainLink>,
    pub symmetric_strategy: Option<MixedStrategy>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GktSolveResult {
    pub pair: Option<StrategyPair>,
    pub diagnostics: GktDiagnostics,
}

/// Search settings used for the reduction: a slowly decaying power schedule
/// with a large constant, since `C₀` payoff differences are small.
pub fn gkt_default_options() -> SearchOptions {
    SearchOptions {
        schedule: LearningRateSchedule::power(10.0, 0.5),
        max_iters: 200_000,
        restarts: 8,
        seed: 0,
        check_every: 100,
    }
}

struct Pipeline {
    original: BimatrixGame,
    normalized: BimatrixGame,
    c: PayoffOperator,
    c_hat: PayoffOperator,
    c0: PayoffOperator,
    a: usize,
    b: usize,
    budget: EpsilonBudget,
}

struct Verified {
    pair: StrategyPair,
    y: MixedStrategy,
    chain: Vec<ChainLink>,
}

impl Pipeline {
    /// Purges `y` on `C₀`, re-verifies every link and recovers `(P, Q)`.
    /// `Err(())` flags an empty block after the `C` check passed.
    fn verify(&self, y: &MixedStrategy) -> std::result::Result<Option<Verified>, ()> {
        let bud = &self.budget;
        let Ok(Some(z)) = purge_symmetric(&self.c0, y, bud.c0_eps) else {
            return Ok(None);
        };
        let link = |game, predicate, value: f64, bound: f64| ChainLink {
            game,
            predicate,
            value,
            bound,
            holds: value <= bound,
        };
        let ws = |op: &PayoffOperator| symmetric_well_supported_gap(op, &z).unwrap_or(f64::INFINITY);
        let mut chain = vec![
            link("C0", "well-supported", ws(&self.c0), bud.c0_eps),
            link("C_hat", "well-supported", ws(&self.c_hat), bud.normalized_eps),
            link("C", "well-supported", ws(&self.c), bud.normalized_eps),
        ];
        // Rescaling by c and shifting by a constant preserve the gap ratio
        // exactly; allow for floating rounding in the unscaled checks.
        let slack = 1e-12;
        if chain.iter().any(|l| l.value > l.bound + slack) {
            return Ok(None);
        }
        let Ok(((p, q), _)) = recover_equilibria(&z, &z, self.a, self.b) else {
            return Err(());
        };
        let rn = self.normalized.regret(&p, &q).unwrap_or(f64::INFINITY);
        let ro = self.original.regret(&p, &q).unwrap_or(f64::INFINITY);
        chain.push(link("normalized", "approximate", rn, bud.normalized_eps));
        chain.push(link("original", "approximate", ro, bud.target_eps));
        if rn > bud.normalized_eps + slack || ro > bud.target_eps + slack {
            return Ok(None);
        }
        Ok(Some(Verified { pair: (p, q), y: z, chain }))
    }
}

/// Solves `(A, B)` to an `eps`-approximate equilibrium through the symmetric
/// reduction and Hedge. Returns no pair when no candidate verifies within the
/// iteration budget.
pub fn solve_bimatrix_via_hedge(game: &BimatrixGame, eps: f64, opts: &SearchOptions) -> Result<GktSolveResult> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    let (normalized, rec) = normalize_bimatrix(game);
    let constraint_bound = (1.0f64 / 3.0).min(rec.a_range.0).min(-rec.b_range.1);
    let gkt = gkt_symmetrize(&normalized)?;
    let shift = gkt.c.min().abs() + 1.0;
    let c_hat = gkt.c.map(|v| v + shift);
    let c_scale = 1.0 / c_hat.max();
    let c0 = c_hat.map(|v| v * c_scale);
    let normalized_eps = rec.scale * eps;
    let c0_eps = c_scale * normalized_eps;
    let budget = EpsilonBudget {
        target_eps: eps,
        normalized_eps,
        c0_eps,
        c0_approx_eps: c0_eps * c0_eps / 8.0,
        constraint_bound,
    };
    if !(normalized_eps < constraint_bound) {
        return Err(invalid(format!(
            "c'eps = {normalized_eps} must be below min{{1/3, min A', min(-B')}} = {constraint_bound}"
        )));
    }
    let mut diag = GktDiagnostics {
        normalization: rec,
        c_rescale: AffineRescale { shift, scale: c_scale },
        budget,
        iterations: 0,
        attempts: 0,
        found_by: None,
        best_regret: 0.0,
        zero_mass_on_verified: 0,
        eps_chain: Vec::new(),
        symmetric_strategy: None,
    };
    if game.rows() == 1 && game.cols() == 1 {
        let one = MixedStrategy::vertex(1, 0);
        return Ok(GktSolveResult {
            pair: Some((one.clone(), one)),
            diagnostics: diag,
        });
    }
    let pipe = Pipeline {
        original: game.clone(),
        normalized,
        c: PayoffOperator::linear(gkt.c.clone())?,
        c_hat: PayoffOperator::linear(c_hat)?,
        c0: PayoffOperator::linear(c0)?,
        a: gkt.a,
        b: gkt.b,
        budget,
    };
    let mut verified = None;
    let mut zero_mass = 0;
    let search = search_with(&pipe.c0, budget.c0_eps, opts, |y| match pipe.verify(y) {
        Ok(Some(v)) => {
            let r = v.chain[0].value;
            verified = Some(v);
            Some(r)
        }
        Ok(None) => None,
        Err(()) => {
            zero_mass += 1;
            None
        }
    })?;
    diag.iterations = search.iterations;
    diag.attempts = search.attempts;
    diag.found_by = search.found_by;
    diag.best_regret = search.regret;
    diag.zero_mass_on_verified = zero_mass;
    let pair = verified.map(|v| {
        diag.eps_chain = v.chain;
        diag.symmetric_strategy = Some(v.y);
        v.pair
    });
    Ok(GktSolveResult { pair, diagnostics: diag })
}

/// Well-supported gap of `(p, q)`; exposed for scaling checks.
pub fn well_supported_gap(game: &BimatrixGame, p: &MixedStrategy, q: &MixedStrategy) -> Result<f64> {
    game.well_supported_gap(p, q)
}

/// Symmetric regret on the GKT game, for diagnostics.
pub fn gkt_regret(g: &GktGame, y: &MixedStrategy) -> Result<f64> {
    symmetric_regret(&PayoffOperator::linear(g.c.clone())?, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{support_enumeration_equilibria, EquilibriumMode, GameRef, ProfileRef, is_approx_equilibrium};
    use proptest::prelude::*;

    fn pennies() -> BimatrixGame {
        BimatrixGame::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]], vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    #[test]
    fn normalization_bounds() {
        let (g, rec) = normalize_bimatrix(&pennies());
        assert!(g.a().min() > 0.0 && g.a().max() <= 1.0);
        assert!(g.b().min() >= -1.0 && g.b().max() < 0.0);
        assert_eq!(rec.shift_a, 2.0);
        assert_eq!(rec.shift_b, -2.0);
        assert_eq!(rec.scale, 1.0 / 3.0);
        let (g2, rec2) = normalize_bimatrix(&g);
        assert!(rec2.is_identity());
        assert_eq!(g2, g);
    }

    #[test]
    fn normalization_preserves_equilibria() {
        let g = BimatrixGame::from_rows(
            vec![vec![3.0, 0.0, 2.0], vec![1.0, 4.0, -1.0], vec![0.5, 2.0, 2.5]],
            vec![vec![1.0, 2.0, 0.0], vec![0.0, 3.0, 1.5], vec![2.0, -1.0, 0.5]],
        )
        .unwrap();
        let (n, _) = normalize_bimatrix(&g);
        let e1 = support_enumeration_equilibria(&g, 3).unwrap().equilibria;
        let e2 = support_enumeration_equilibria(&n, 3).unwrap().equilibria;
        assert_eq!(e1.len(), e2.len());
        for e in &e1 {
            assert!(e2.iter().any(|f| f.p.max_abs_diff(&e.p) < 1e-9 && f.q.max_abs_diff(&e.q) < 1e-9));
        }
    }

    #[test]
    fn gkt_block_layout() {
        let g = BimatrixGame::from_rows(vec![vec![1.0]], vec![vec![-1.0]]).unwrap();
        let s = gkt_symmetrize(&g).unwrap();
        assert_eq!(s.c.to_rows(), vec![vec![0.0, 1.0, -1.0], vec![-1.0, 0.0, 1.0], vec![1.0, -1.0, 0.0]]);
        assert!(gkt_symmetrize(&pennies()).is_err());
    }

    #[test]
    fn gkt_of_pennies_recovers_uniform() {
        let (n, _) = normalize_bimatrix(&pennies());
        let s = gkt_symmetrize(&n).unwrap();
        assert_eq!(s.c.rows(), 5);
        let sym = BimatrixGame::symmetric(s.c.clone()).unwrap();
        let eqs = support_enumeration_equilibria(&sym, 5).unwrap().equilibria;
        let symmetric: Vec<_> = eqs.iter().filter(|e| e.p.max_abs_diff(&e.q) < 1e-9).collect();
        assert!(!symmetric.is_empty());
        for e in symmetric {
            let ((p, q), (p2, q2)) = recover_equilibria(&e.p, &e.p, 2, 2).unwrap();
            assert_eq!((p.clone(), q.clone()), (p2, q2));
            assert!(p.max_abs_diff(&MixedStrategy::uniform(2)) < 1e-9);
            assert!(is_approx_equilibrium(GameRef::Bimatrix(&pennies()), ProfileRef::Pair(&p, &q), 1e-9, EquilibriumMode::Bimatrix).unwrap());
        }
    }

    #[test]
    fn recovery_examples() {
        let x = MixedStrategy::new(vec![0.3, 0.5, 0.2]).unwrap();
        let ((p, q), _) = recover_equilibria(&x, &x, 1, 1).unwrap();
        assert_eq!(p.weights(), &[1.0]);
        assert_eq!(q.weights(), &[1.0]);
        let bad = MixedStrategy::new(vec![0.0, 0.5, 0.5]).unwrap();
        assert!(matches!(recover_equilibria(&bad, &bad, 1, 1), Err(Error::ZeroMassBlock(_))));
    }

    #[test]
    fn purge_examples() {
        let g = BimatrixGame::from_rows(vec![vec![1.0, 0.2], vec![0.9, 0.3]], vec![vec![0.5, 0.4], vec![0.1, 0.9]]).unwrap();
        // (E0, E0) is a strict equilibrium.
        let e0 = MixedStrategy::vertex(2, 0);
        let (p, q, gap) = approx_to_well_supported(&g, &e0, &e0, 0.01).unwrap();
        assert_eq!((p.clone(), q.clone()), (e0.clone(), e0.clone()));
        assert_eq!(gap, 0.0);
        let noisy = MixedStrategy::new(vec![1.0 - 1e-6, 1e-6]).unwrap();
        let (p, _, gap) = approx_to_well_supported(&g, &noisy, &e0, 0.01).unwrap();
        assert_eq!(p, e0);
        assert!(gap <= 0.01);
        let far = MixedStrategy::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(approx_to_well_supported(&g, &far, &e0, 0.01), Err(Error::Precondition(_))));
        assert!(approx_to_well_supported(&pennies(), &e0, &e0, 0.01).is_err());
    }

    #[test]
    fn pipeline_pennies_and_stag_hunt() {
        let opts = gkt_default_options();
        let r = solve_bimatrix_via_hedge(&pennies(), 0.05, &opts).unwrap();
        let (p, q) = r.pair.expect("pennies solved");
        assert!(p.max_abs_diff(&MixedStrategy::uniform(2)) <= 0.05);
        assert!(q.max_abs_diff(&MixedStrategy::uniform(2)) <= 0.05);
        assert!(r.diagnostics.eps_chain.iter().all(|l| l.holds));
        let stag = BimatrixGame::symmetric(Matrix::from_rows(vec![vec![10.0, -1.0], vec![0.0, 0.0]]).unwrap()).unwrap();
        let r = solve_bimatrix_via_hedge(&stag, 0.05, &opts).unwrap();
        let (p, q) = r.pair.expect("stag hunt solved");
        assert!(stag.regret(&p, &q).unwrap() <= 0.05);
    }

    #[test]
    fn pipeline_trivial_and_errors() {
        let one = BimatrixGame::from_rows(vec![vec![5.0]], vec![vec![-2.0]]).unwrap();
        let r = solve_bimatrix_via_hedge(&one, 0.05, &gkt_default_options()).unwrap();
        assert_eq!(r.pair.unwrap().0.weights(), &[1.0]);
        assert!(solve_bimatrix_via_hedge(&pennies(), 2.0, &gkt_default_options()).is_err());
    }

    proptest! {
        #[test]
        fn gkt_structure(a in proptest::collection::vec(0.01f64..1.0, 6), b in proptest::collection::vec(-1.0f64..-0.01, 6)) {
            let g = BimatrixGame::new(Matrix::new(2, 3, a).unwrap(), Matrix::new(2, 3, b).unwrap()).unwrap();
            let s = gkt_symmetrize(&g).unwrap();
            let n = 6;
            for i in 0..n {
                for j in 0..n {
                    let v = s.c.get(i, j);
                    match (i, j) {
                        (i, j) if i < 2 && j < 2 => prop_assert_eq!(v, 0.0),
                        (i, j) if (2..5).contains(&i) && (2..5).contains(&j) => prop_assert_eq!(v, 0.0),
                        (i, 5) if i < 2 => prop_assert_eq!(v, -1.0),
                        (i, 5) if i < 5 => prop_assert_eq!(v, 1.0),
                        (5, j) if j < 2 => prop_assert_eq!(v, 1.0),
                        (5, j) if j < 5 => prop_assert_eq!(v, -1.0),
                        (5, 5) => prop_assert_eq!(v, 0.0),
                        (i, j) if i < 2 => prop_assert_eq!(v, g.a().get(i, j - 2)),
                        (i, j) => prop_assert_eq!(v, g.b().get(j, i - 2)),
                    }
                }
            }
            // C + Cᵀ vanishes on the diagonal blocks and the border is ±1.
            for i in 0..n {
                prop_assert_eq!(s.c.get(i, i), 0.0);
            }
        }

        #[test]
        fn exact_symmetric_equilibria_recover_exactly(d in proptest::collection::vec(0.0f64..1.0, 8)) {
            let g = BimatrixGame::new(Matrix::new(2, 2, d[..4].to_vec()).unwrap(), Matrix::new(2, 2, d[4..].to_vec()).unwrap()).unwrap();
            let (n, _) = normalize_bimatrix(&g);
            let s = gkt_symmetrize(&n).unwrap();
            let sym = BimatrixGame::symmetric(s.c.clone()).unwrap();
            for e in support_enumeration_equilibria(&sym, 5).unwrap().equilibria {
                if e.p.max_abs_diff(&e.q) > 1e-12 {
                    continue;
                }
                let ((p, q), _) = recover_equilibria(&e.p, &e.p, 2, 2).unwrap();
                prop_assert!(g.regret(&p, &q).unwrap() <= 1e-9);
            }
        }
    }
}
