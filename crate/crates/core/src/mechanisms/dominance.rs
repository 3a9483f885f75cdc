use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::game::StrategicGame;

/// All-orders exploration is limited to games with this many strategies in total.
pub const ALL_ORDERS_MAX_STRATEGIES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominanceKind {
    Strict,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceOrder {
    Deterministic,
    AllOrders,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub player: usize,
    pub strategy: usize,
    pub dominated_by: usize,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceRecord {
    pub kind: DominanceKind,
    pub order: DominanceOrder,
    pub eliminations: Vec<Elimination>,
    pub rounds: usize,
    /// Surviving strategies per player under the deterministic order.
    pub surviving: Vec<Vec<usize>>,
    /// Distinct end states over every explored order.
    pub outcomes: Vec<Vec<Vec<usize>>>,
    pub order_independent: bool,
}

type Alive = Vec<Vec<bool>>;

fn survivors(alive: &Alive) -> Vec<Vec<usize>> {
    alive
        .iter()
        .map(|a| a.iter().enumerate().filter(|(_, v)| **v).map(|(i, _)| i).collect())
        .collect()
}

/// Whether `t` dominates `s` for `player` against the surviving opponents.
fn dominates(game: &StrategicGame, alive: &Alive, player: usize, t: usize, s: usize, kind: DominanceKind) -> bool {
    let mut some_strict = false;
    for p in 0..game.profile_count() {
        if game.choice(p, player) != s {
            continue;
        }
        if (0..game.player_count()).any(|j| j != player && !alive[j][game.choice(p, j)]) {
            continue;
        }
        let us = game.payoff(p, player);
        let ut = game.payoff(game.deviate(p, player, t), player);
        match kind {
            DominanceKind::Strict if ut <= us => return false,
            DominanceKind::Weak if ut < us => return false,
            _ => {}
        }
        some_strict |= ut > us;
    }
    some_strict
}

fn dominator(game: &StrategicGame, alive: &Alive, player: usize, s: usize, kind: DominanceKind) -> Option<usize> {
    (0..alive[player].len()).find(|&t| t != s && alive[player][t] && dominates(game, alive, player, t, s, kind))
}

fn all_dominated(game: &StrategicGame, alive: &Alive, kind: DominanceKind) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in alive.iter().enumerate() {
        for s in (0..a.len()).filter(|&s| a[s]) {
            if let Some(t) = dominator(game, alive, i, s, kind) {
                out.push((i, s, t));
            }
        }
    }
    out
}

/// Every strategy dominated at the start of a round is removed in that round;
/// eliminations are listed by player, then strategy index.
fn deterministic(game: &StrategicGame, kind: DominanceKind) -> (Vec<Elimination>, usize, Alive) {
    let mut alive: Alive = game.strategy_counts().iter().map(|&k| vec![true; k]).collect();
    let mut elims = Vec::new();
    let mut round = 0;
    loop {
        let found = all_dominated(game, &alive, kind);
        if found.is_empty() {
            break;
        }
        round += 1;
        for (player, strategy, dominated_by) in found {
            alive[player][strategy] = false;
            elims.push(Elimination {
                player,
                strategy,
                dominated_by,
                round,
            });
        }
    }
    (elims, round, alive)
}

fn explore(game: &StrategicGame, alive: Alive, kind: DominanceKind, seen: &mut HashSet<Alive>, ends: &mut BTreeSet<Vec<Vec<usize>>>) {
    let mut stack = vec![alive];
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        let moves = all_dominated(game, &a, kind);
        if moves.is_empty() {
            ends.insert(survivors(&a));
            continue;
        }
        for (i, s, _) in moves {
            let mut next = a.clone();
            next[i][s] = false;
            stack.push(next);
        }
    }
}

/// End states over every one-at-a-time elimination order.
fn all_orders(game: &StrategicGame, kind: DominanceKind) -> Vec<Vec<Vec<usize>>> {
    let start: Alive = game.strategy_counts().iter().map(|&k| vec![true; k]).collect();
    let first = all_dominated(game, &start, kind);
    if first.is_empty() {
        return vec![survivors(&start)];
    }
    let ends: BTreeSet<Vec<Vec<usize>>> = first
        .into_par_iter()
        .map(|(i, s, _)| {
            let mut a = start.clone();
            a[i][s] = false;
            let mut seen = HashSet::new();
            let mut ends = BTreeSet::new();
            explore(game, a, kind, &mut seen, &mut ends);
            ends
        })
        .reduce(BTreeSet::new, |mut x, y| {
            x.extend(y);
            x
        });
    ends.into_iter().collect()
}

pub fn iterated_dominance(game: &StrategicGame, kind: DominanceKind, order: DominanceOrder) -> Result<DominanceRecord> {
    let total: usize = game.strategy_counts().iter().sum();
    let (eliminations, rounds, alive) = deterministic(game, kind);
    let surviving = survivors(&alive);
    let outcomes = match order {
        DominanceOrder::AllOrders => {
            if total > ALL_ORDERS_MAX_STRATEGIES {
                return Err(invalid(format!(
                    "all-orders dominance needs at most {ALL_ORDERS_MAX_STRATEGIES} strategies, got {total}"
                )));
            }
            all_orders(game, kind)
        }
        DominanceOrder::Deterministic => vec![surviving.clone()],
    };
    let order_independent = outcomes.len() == 1 && outcomes[0] == surviving;
    Ok(DominanceRecord {
        kind,
        order,
        eliminations,
        rounds,
        surviving,
        outcomes,
        order_independent,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{apply_election, apply_insurance, ElectionParams, InsuranceParams, StagHuntSpec, A, X, Y};
    use super::*;
    use crate::game::{support_enumeration_equilibria, BimatrixGame, Matrix};
    use proptest::prelude::*;

    #[test]
    fn prisoners_dilemma_one_round() {
        let c = Matrix::from_rows(vec![vec![3.0, 0.0], vec![5.0, 1.0]]).unwrap();
        let g = StrategicGame::from_bimatrix(&BimatrixGame::symmetric(c).unwrap());
        let r = iterated_dominance(&g, DominanceKind::Strict, DominanceOrder::Deterministic).unwrap();
        assert_eq!(r.rounds, 1);
        assert_eq!(r.surviving, vec![vec![1], vec![1]]);
        let all = iterated_dominance(&g, DominanceKind::Strict, DominanceOrder::AllOrders).unwrap();
        assert!(all.order_independent);
    }

    #[test]
    fn insurance_two_rounds() {
        let spec = StagHuntSpec::new(2, vec![-1.0, 10.0], 0.0).unwrap();
        let g = apply_insurance(&spec, &InsuranceParams { premium: 0.1, surplus: 0.2 }).unwrap();
        let r = iterated_dominance(&g, DominanceKind::Strict, DominanceOrder::AllOrders).unwrap();
        assert_eq!(r.rounds, 2);
        assert_eq!(r.surviving, vec![vec![A], vec![A]]);
        assert!(r.order_independent);
        assert!(r.eliminations.iter().filter(|e| e.round == 2).all(|e| e.strategy == X && e.dominated_by == A));
    }

    #[test]
    fn election_deterministic_leaves_x_and_y() {
        let spec = StagHuntSpec::new(2, vec![-1.0, 10.0], 0.0).unwrap();
        let g = apply_election(&spec, &ElectionParams::new(&spec, 2.0).unwrap()).unwrap();
        let r = iterated_dominance(&g, DominanceKind::Weak, DominanceOrder::Deterministic).unwrap();
        assert_eq!(r.surviving, vec![vec![X, Y], vec![X, Y]]);
        assert_eq!(r.rounds, 1);
        // Removing one strategy at a time is order dependent here.
        let all = iterated_dominance(&g, DominanceKind::Weak, DominanceOrder::AllOrders).unwrap();
        assert!(all.outcomes.len() > 1);
        assert!(all.outcomes.contains(&vec![vec![X], vec![X, Y]]));
    }

    #[test]
    fn all_orders_cap() {
        let g = StrategicGame::new(vec![7, 6], vec![0.0; 84]).unwrap();
        assert!(iterated_dominance(&g, DominanceKind::Weak, DominanceOrder::AllOrders).is_err());
    }

    proptest! {
        #[test]
        fn strict_elimination_keeps_equilibrium_strategies(vals in proptest::collection::vec(-5i32..6, 18)) {
            let a = Matrix::new(3, 3, vals[..9].iter().map(|v| *v as f64).collect()).unwrap();
            let b = Matrix::new(3, 3, vals[9..].iter().map(|v| *v as f64).collect()).unwrap();
            let bg = BimatrixGame::new(a, b).unwrap();
            let g = StrategicGame::from_bimatrix(&bg);
            let r = iterated_dominance(&g, DominanceKind::Strict, DominanceOrder::AllOrders).unwrap();
            prop_assert!(r.order_independent);
            for e in support_enumeration_equilibria(&bg, 3).unwrap().equilibria {
                for el in &r.eliminations {
                    let w = if el.player == 0 { &e.p } else { &e.q };
                    prop_assert!(w.weights()[el.strategy] <= 1e-9);
                }
            }
        }
    }
}
