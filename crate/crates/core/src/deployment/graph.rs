use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::StrategicGame;

/// Default cap on the number of arcs a graph may hold.
pub const DEFAULT_ARC_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// Strictly profitable unilateral deviations.
    Strict,
    /// Deviations that are not harmful.
    Ordinal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Neutral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub target: usize,
    pub polarity: Polarity,
    pub player: usize,
}

/// Deployment graph over pure profiles in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct DeploymentGraph {
    kind: GraphKind,
    offsets: Vec<usize>,
    arcs: Vec<Arc>,
}

impl DeploymentGraph {
    /// Builds a graph from adjacency lists; mainly for tests and tools.
    pub fn from_adjacency(kind: GraphKind, adj: Vec<Vec<Arc>>) -> Result<Self> {
        let n = adj.len();
        if adj.iter().flatten().any(|a| a.target >= n) {
            return Err(Error::InvalidArgument("arc target out of range".into()));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for a in &adj {
            offsets.push(offsets.last().unwrap() + a.len());
        }
        Ok(Self {
            kind,
            offsets,
            arcs: adj.into_iter().flatten().collect(),
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn profile_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_arcs(&self, v: usize) -> &[Arc] {
        &self.arcs[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out_arcs(from).iter().any(|a| a.target == to)
    }
}

/// Builds the strict or ordinal deployment graph.
///
/// A deviation with gain `g` yields a positive arc when `g > tie_tol`; the
/// ordinal graph adds a neutral arc when `|g| <= tie_tol`.
pub fn build_graph(game: &StrategicGame, kind: GraphKind, tie_tol: f64) -> Result<DeploymentGraph> {
    build_graph_capped(game, kind, tie_tol, DEFAULT_ARC_CAP)
}

pub fn build_graph_capped(game: &StrategicGame, kind: GraphKind, tie_tol: f64, arc_cap: usize) -> Result<DeploymentGraph> {
    if !(tie_tol >= 0.0) {
        return Err(Error::InvalidArgument("tie_tol must be nonnegative".into()));
    }
    let n = game.profile_count();
    let per_profile: usize = game.strategy_counts().iter().map(|k| k - 1).sum();
    let bound = n.saturating_mul(per_profile);
    if bound > arc_cap {
        return Err(Error::Capacity(format!(
            "up to {bound} arcs exceed the cap of {arc_cap}"
        )));
    }
    let adj: Vec<Vec<Arc>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for (i, &k) in game.strategy_counts().iter().enumerate() {
                let cur = game.choice(s, i);
                let base = game.payoff(s, i);
                for t in (0..k).filter(|&t| t != cur) {
                    let s2 = game.deviate(s, i, t);
                    let gain = game.payoff(s2, i) - base;
                    let polarity = if gain > tie_tol {
                        Polarity::Positive
                    } else if kind == GraphKind::Ordinal && gain >= -tie_tol {
                        Polarity::Neutral
                    } else {
                        continue;
                    };
                    out.push(Arc {
                        target: s2,
                        polarity,
                        player: i,
                    });
                }
            }
            out
        })
        .collect();
    DeploymentGraph::from_adjacency(kind, adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BimatrixGame, Matrix};

    fn stag() -> StrategicGame {
        let c = Matrix::from_rows(vec![vec![10.0, -1.0], vec![0.0, 0.0]]).unwrap();
        StrategicGame::from_bimatrix(&BimatrixGame::symmetric(c).unwrap())
    }

    #[test]
    fn stag_hunt_strict_arcs() {
        // Profiles: 0=(A,A) 1=(A,D) 2=(D,A) 3=(D,D).
        let g = build_graph(&stag(), GraphKind::Strict, 0.0).unwrap();
        let mut arcs: Vec<(usize, usize)> = (0..4)
            .flat_map(|s| g.out_arcs(s).iter().map(move |a| (s, a.target)))
            .collect();
        arcs.sort();
        assert_eq!(arcs, vec![(1, 0), (1, 3), (2, 0), (2, 3)]);
        assert!(g.out_arcs(1).iter().all(|a| a.polarity == Polarity::Positive));
    }

    #[test]
    fn one_player_tournament() {
        let game = StrategicGame::new(vec![3], vec![1.0, 3.0, 2.0]).unwrap();
        let g = build_graph(&game, GraphKind::Strict, 0.0).unwrap();
        assert_eq!(g.arc_count(), 3);
        assert!(g.has_arc(0, 1) && g.has_arc(0, 2) && g.has_arc(2, 1));
    }

    #[test]
    fn neutral_arcs_pair_up() {
        let game = StrategicGame::new(vec![2, 2], vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 2.0, 1.0]).unwrap();
        let g = build_graph(&game, GraphKind::Ordinal, 0.0).unwrap();
        for s in 0..4 {
            for a in g.out_arcs(s) {
                if a.polarity == Polarity::Neutral {
                    assert!(g.out_arcs(a.target).iter().any(|b| b.target == s && b.polarity == Polarity::Neutral));
                }
            }
        }
        assert!(g.has_arc(0, 1) && g.has_arc(1, 0));
    }

    #[test]
    fn cap_is_enforced() {
        let game = StrategicGame::new(vec![2, 2], vec![0.0; 8]).unwrap();
        assert!(matches!(build_graph_capped(&game, GraphKind::Ordinal, 0.0, 7), Err(Error::Capacity(_))));
        assert_eq!(build_graph_capped(&game, GraphKind::Ordinal, 0.0, 8).unwrap().arc_count(), 8);
    }
}
