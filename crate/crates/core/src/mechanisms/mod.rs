//! Stag hunts, the insurance and election coordination mechanisms, network
//! adoption games and iterated dominance.
//!
//! Strategy indices: `A = 0`, `D = 1`, then `X = 2` and (election only) `Y = 3`.

mod dominance;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::game::StrategicGame;

pub use dominance::{iterated_dominance, DominanceKind, DominanceOrder, DominanceRecord, Elimination, ALL_ORDERS_MAX_STRATEGIES};

pub const A: usize = 0;
pub const D: usize = 1;
pub const X: usize = 2;
pub const Y: usize = 3;

/// `benefit[k - 1]` is each adopter's payoff when `k` players adopt; defectors get `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagHuntSpec {
    pub n: usize,
    pub benefit: Vec<f64>,
    pub c: f64,
    /// Optional per-player benefit tables overriding `benefit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player_benefit: Option<Vec<Vec<f64>>>,
}

impl StagHuntSpec {
    pub fn new(n: usize, benefit: Vec<f64>, c: f64) -> Result<Self> {
        let s = Self {
            n,
            benefit,
            c,
            player_benefit: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn heterogeneous(player_benefit: Vec<Vec<f64>>, c: f64) -> Result<Self> {
        let n = player_benefit.len();
        let s = Self {
            n,
            benefit: player_benefit.first().cloned().unwrap_or_default(),
            c,
            player_benefit: Some(player_benefit),
        };
        s.validate()?;
        Ok(s)
    }

    fn tables(&self) -> Vec<&[f64]> {
        match &self.player_benefit {
            Some(t) => t.iter().map(Vec::as_slice).collect(),
            None => vec![self.benefit.as_slice(); self.n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid("a stag hunt needs at least two players"));
        }
        if !self.c.is_finite() {
            return Err(invalid("c must be finite"));
        }
        let tables = self.tables();
        if tables.len() != self.n {
            return Err(invalid("one benefit table per player is required"));
        }
        for (i, b) in tables.iter().enumerate() {
            if b.len() != self.n {
                return Err(invalid(format!("benefit table {i} needs {} entries", self.n)));
            }
            if b.iter().any(|v| !v.is_finite()) {
                return Err(invalid("benefits must be finite"));
            }
            if b.windows(2).any(|w| w[1] < w[0]) {
                return Err(invalid("benefit must be nondecreasing in the adopter count"));
            }
            if !(b[self.n - 1] > self.c) {
                return Err(invalid("universal adoption must beat c"));
            }
            if !(b[0] < self.c) {
                return Err(invalid("a lone adopter must earn less than c"));
            }
        }
        Ok(())
    }

    /// Payoff of an adopting `player` when `k >= 1` players adopt.
    pub fn benefit_for(&self, player: usize, k: usize) -> f64 {
        match &self.player_benefit {
            Some(t) => t[player][k - 1],
            None => self.benefit[k - 1],
        }
    }

    /// Smallest gap between universal adoption and defection.
    pub fn min_success_margin(&self) -> f64 {
        (0..self.n)
            .map(|i| self.benefit_for(i, self.n) - self.c)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds the game from per-profile adoption decisions.
fn adoption_game(spec: &StagHuntSpec, strategies: usize, f: impl Fn(&[usize], usize, f64) -> f64) -> Result<StrategicGame> {
    spec.validate()?;
    StrategicGame::from_fn(vec![strategies; spec.n], |s| (0..spec.n).map(|i| f(s, i, spec.c)).collect())
}

pub fn build_stag_hunt(spec: &StagHuntSpec) -> Result<StrategicGame> {
    adoption_game(spec, 2, |s, i, c| {
        let k = s.iter().filter(|&&v| v == A).count();
        if s[i] == A {
            spec.benefit_for(i, k)
        } else {
            c
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsuranceParams {
    pub premium: f64,
    pub surplus: f64,
}

impl InsuranceParams {
    /// Checks `0 < p < ε_r`, `p < u(Aⁿ) - c` and `c + ε_r - p < u(Aⁿ)` for every player.
    pub fn validate(&self, spec: &StagHuntSpec) -> Result<()> {
        let (p, e) = (self.premium, self.surplus);
        if !(p > 0.0 && e > 0.0) {
            return Err(invalid("premium and surplus must be positive"));
        }
        if !(p < e) {
            return Err(invalid("premium must be below the surplus"));
        }
        if !(p < spec.min_success_margin()) {
            return Err(invalid("premium must be below every adopter's success margin"));
        }
        if !(e - p < spec.min_success_margin()) {
            return Err(invalid("insured payoff must stay below universal adoption"));
        }
        Ok(())
    }
}

/// Insurance mechanism: `X` adopts with insurance and earns
/// `max(benefit(k), c + ε_r) - p`; adopters count both `A` and `X`.
pub fn apply_insurance(spec: &StagHuntSpec, params: &InsuranceParams) -> Result<StrategicGame> {
    params.validate(spec)?;
    adoption_game(spec, 3, |s, i, c| {
        let k = s.iter().filter(|&&v| v == A || v == X).count();
        match s[i] {
            A => spec.benefit_for(i, k),
            X => spec.benefit_for(i, k).max(c + params.surplus) - params.premium,
            _ => c,
        }
    })
}

/// The penalty exists to justify leaving out commitment-breaking strategies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectionParams {
    pub penalty: f64,
}

impl ElectionParams {
    /// A player's investment cost is taken as `c - benefit(1)`, the loss of adopting alone.
    pub fn new(spec: &StagHuntSpec, penalty: f64) -> Result<Self> {
        let cost = (0..spec.n)
            .map(|i| spec.c - spec.benefit_for(i, 1))
            .fold(f64::NEG_INFINITY, f64::max);
        if !(penalty > cost) {
            return Err(invalid(format!("penalty must exceed the largest investment cost {cost}")));
        }
        Ok(Self { penalty })
    }
}

/// Election mechanism. `X` votes and adopts only if everybody voted; `Y`
/// votes and adopts regardless.
pub fn apply_election(spec: &StagHuntSpec, _params: &ElectionParams) -> Result<StrategicGame> {
    adoption_game(spec, 4, |s, i, c| {
        let all_voted = s.iter().all(|&v| v == X || v == Y);
        let adopts = |v: usize| v == A || v == Y || (v == X && all_voted);
        let k = s.iter().filter(|&&v| adopts(v)).count();
        if adopts(s[i]) {
            spec.benefit_for(i, k)
        } else {
            c
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdoptionNetwork {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// `beta[i][m - 1]`: player `i`'s benefit when its adopter component has size `m`.
    pub beta: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
}

impl AdoptionNetwork {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("network needs a node"));
        }
        if self.beta.len() != self.n || self.gamma.len() != self.n {
            return Err(invalid("beta and gamma need one entry per player"));
        }
        if self.edges.iter().any(|&(a, b)| a >= self.n || b >= self.n) {
            return Err(invalid("edge endpoint out of range"));
        }
        for b in &self.beta {
            if b.len() != self.n || b.windows(2).any(|w| w[1] < w[0]) {
                return Err(invalid("beta must list n nondecreasing values"));
            }
        }
        if self.gamma.iter().any(|g| !(*g > 0.0)) {
            return Err(invalid("deployment costs must be positive"));
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// `u_i = beta_i(size of i's adopter component) - gamma_i` for adopters, 0 otherwise.
pub fn network_adoption_game(net: &AdoptionNetwork) -> Result<StrategicGame> {
    net.validate()?;
    StrategicGame::from_fn(vec![2; net.n], |s| {
        let mut parent: Vec<usize> = (0..net.n).collect();
        for &(a, b) in &net.edges {
            if s[a] == A && s[b] == A {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut size = vec![0usize; net.n];
        for v in 0..net.n {
            if s[v] == A {
                let r = find(&mut parent, v);
                size[r] += 1;
            }
        }
        (0..net.n)
            .map(|i| {
                if s[i] == A {
                    let r = find(&mut parent, i);
                    net.beta[i][size[r] - 1] - net.gamma[i]
                } else {
                    0.0
                }
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deployment::{classify_acyclicity, pure_nash, GameGraphs, MaximalityKind};
    use crate::game::{support_enumeration_equilibria, BimatrixGame, Matrix};
    use proptest::prelude::*;

    fn two_player() -> StagHuntSpec {
        StagHuntSpec::new(2, vec![-1.0, 10.0], 0.0).unwrap()
    }

    fn at(g: &StrategicGame, s: &[usize]) -> Vec<f64> {
        g.payoffs_at(g.encode(s).unwrap()).to_vec()
    }

    #[test]
    fn two_player_table() {
        let g = build_stag_hunt(&two_player()).unwrap();
        assert_eq!(at(&g, &[A, A]), vec![10.0, 10.0]);
        assert_eq!(at(&g, &[A, D]), vec![-1.0, 0.0]);
        assert_eq!(at(&g, &[D, A]), vec![0.0, -1.0]);
        assert_eq!(at(&g, &[D, D]), vec![0.0, 0.0]);
    }

    #[test]
    fn spec_validation() {
        assert!(StagHuntSpec::new(2, vec![1.0, 10.0], 0.0).is_err());
        assert!(StagHuntSpec::new(2, vec![-1.0, -0.5], 0.0).is_err());
        assert!(StagHuntSpec::new(3, vec![-1.0, 2.0, 1.0], 0.0).is_err());
        assert!(StagHuntSpec::new(2, vec![-1.0], 0.0).is_err());
    }

    #[test]
    fn three_player_nash() {
        let g = build_stag_hunt(&StagHuntSpec::new(3, vec![-1.0, 1.0, 5.0], 0.0).unwrap()).unwrap();
        assert_eq!(g.profile_count(), 8);
        let ne: Vec<Vec<usize>> = pure_nash(&g, 0.0).into_iter().map(|p| p.choices).collect();
        assert_eq!(ne, vec![vec![A, A, A], vec![D, D, D]]);
    }

    #[test]
    fn network_path_is_stag_hunt() {
        let net = AdoptionNetwork {
            n: 2,
            edges: vec![(0, 1)],
            beta: vec![vec![10.0, 20.0]; 2],
            gamma: vec![15.0; 2],
        };
        let g = network_adoption_game(&net).unwrap();
        assert_eq!(at(&g, &[A, D]), vec![-5.0, 0.0]);
        assert_eq!(at(&g, &[A, A]), vec![5.0, 5.0]);
        assert_eq!(at(&g, &[D, D]), vec![0.0, 0.0]);
        let isolated = AdoptionNetwork {
            n: 2,
            edges: vec![],
            ..net
        };
        let g = network_adoption_game(&isolated).unwrap();
        assert_eq!(at(&g, &[A, A]), vec![-5.0, -5.0]);
    }

    #[test]
    fn insurance_dominance_margins() {
        let spec = two_player();
        let params = InsuranceParams {
            premium: 0.1,
            surplus: 0.2,
        };
        let g = apply_insurance(&spec, &params).unwrap();
        for opp in [A, D, X] {
            let x = at(&g, &[X, opp])[0];
            let d = at(&g, &[D, opp])[0];
            assert!(x > d, "X must beat D against {opp}");
        }
        for opp in [A, X] {
            let a = at(&g, &[A, opp])[0];
            let x = at(&g, &[X, opp])[0];
            assert!((a - x - 0.1).abs() < 1e-12);
        }
        let ne: Vec<Vec<usize>> = pure_nash(&g, 0.0).into_iter().map(|p| p.choices).collect();
        assert_eq!(ne, vec![vec![A, A]]);
        assert!(apply_insurance(&spec, &InsuranceParams { premium: 0.3, surplus: 0.2 }).is_err());
        assert!(apply_insurance(&spec, &InsuranceParams { premium: 0.1, surplus: 20.0 }).is_err());
    }

    #[test]
    fn election_rules() {
        let spec = two_player();
        let params = ElectionParams::new(&spec, 2.0).unwrap();
        assert!(ElectionParams::new(&spec, 0.5).is_err());
        let g = apply_election(&spec, &params).unwrap();
        assert_eq!(at(&g, &[X, X]), vec![10.0, 10.0]);
        assert_eq!(at(&g, &[X, A]), vec![0.0, -1.0]);
        assert_eq!(at(&g, &[Y, X]), vec![10.0, 10.0]);
        let ne = pure_nash(&g, 0.0);
        let dn = ne.iter().find(|p| p.choices == vec![D, D]).expect("D^n stays an equilibrium");
        assert!(!dn.strict);
        let gg = GameGraphs::new(&g, 0.0).unwrap();
        assert!(gg.flags().weakly_ordinally_acyclic);
        for s in gg.maximal_states(MaximalityKind::Strong) {
            assert!(!g.decode(s).contains(&D));
        }
        let classes = gg.strong_classes();
        assert_eq!(classes.len(), 1);
        for s in [[A, A], [X, X], [Y, Y], [X, Y], [A, Y]] {
            assert!(classes[0].contains(&g.encode(&s).unwrap()));
        }
    }

    #[test]
    fn mechanisms_preserve_basis_payoffs() {
        let spec = StagHuntSpec::new(3, vec![-2.0, 0.5, 4.0], 0.0).unwrap();
        let basis = build_stag_hunt(&spec).unwrap();
        let ins = apply_insurance(&spec, &InsuranceParams { premium: 0.1, surplus: 0.3 }).unwrap();
        let ele = apply_election(&spec, &ElectionParams::new(&spec, 3.0).unwrap()).unwrap();
        let keep = vec![vec![A, D]; 3];
        assert_eq!(ins.restrict(&keep).unwrap(), basis);
        assert_eq!(ele.restrict(&keep).unwrap(), basis);
    }

    #[test]
    fn two_player_stag_hunt_has_three_oracle_equilibria() {
        let c = Matrix::from_rows(vec![vec![10.0, -1.0], vec![0.0, 0.0]]).unwrap();
        let eqs = support_enumeration_equilibria(&BimatrixGame::symmetric(c).unwrap(), 2).unwrap();
        assert_eq!(eqs.equilibria.len(), 3);
    }

    proptest! {
        #[test]
        fn stag_hunts_are_weakly_acyclic(n in 2usize..5, raw in proptest::collection::vec(0.01f64..1.0, 4), c in -1.0f64..1.0) {
            let mut incs: Vec<f64> = raw[..n].to_vec();
            incs.sort_by(f64::total_cmp);
            let lo = c - incs[0];
            let mut benefit = vec![lo];
            for k in 1..n {
                benefit.push(benefit[k - 1] + incs[k] * 2.0);
            }
            benefit[n - 1] = benefit[n - 1].max(c + 0.5);
            let spec = StagHuntSpec::new(n, benefit, c).unwrap();
            let g = build_stag_hunt(&spec).unwrap();
            let f = classify_acyclicity(&g).unwrap();
            prop_assert!(f.weakly_acyclic);
            let dn = g.encode(&vec![D; n]).unwrap();
            prop_assert!(pure_nash(&g, 0.0).iter().any(|p| p.profile == dn && p.strict));
        }
    }
}
