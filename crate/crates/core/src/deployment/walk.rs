use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{build_graph, DeploymentGraph, GraphKind};
use crate::error::Result;
use crate::game::{PureProfile, StrategicGame};
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkRecord {
    pub start: usize,
    pub end: usize,
    pub steps: usize,
    /// The walk stopped at a profile without out-arcs.
    pub absorbed: bool,
    pub visits: BTreeMap<usize, usize>,
}

/// Random walk that follows a uniformly chosen out-arc at each step.
pub fn walk_on_graph<R: Rng + ?Sized>(graph: &DeploymentGraph, start: usize, rng: &mut R, max_steps: usize) -> WalkRecord {
    let mut visits = BTreeMap::new();
    let mut cur = start;
    *visits.entry(cur).or_insert(0) += 1;
    let mut steps = 0;
    while steps < max_steps {
        let arcs = graph.out_arcs(cur);
        if arcs.is_empty() {
            break;
        }
        cur = arcs[rng.random_range(0..arcs.len())].target;
        *visits.entry(cur).or_insert(0) += 1;
        steps += 1;
    }
    WalkRecord {
        start,
        end: cur,
        steps,
        absorbed: graph.out_degree(cur) == 0,
        visits,
    }
}

pub fn better_response_walk(
    game: &StrategicGame,
    start: &PureProfile,
    kind: GraphKind,
    seed: u64,
    max_steps: usize,
) -> Result<WalkRecord> {
    let s = game.encode(&start.choices)?;
    let graph = build_graph(game, kind, 0.0)?;
    Ok(walk_on_graph(&graph, s, &mut stream(seed, 0), max_steps))
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
    fn walk_from_equilibrium_is_empty() {
        let w = better_response_walk(&stag(), &PureProfile::new(vec![0, 0]), GraphKind::Strict, 1, 100).unwrap();
        assert_eq!(w.steps, 0);
        assert!(w.absorbed);
    }

    #[test]
    fn walks_end_in_sinks() {
        for seed in 0..20 {
            let w = better_response_walk(&stag(), &PureProfile::new(vec![0, 1]), GraphKind::Strict, seed, 100).unwrap();
            assert!(w.absorbed);
            assert!(w.end == 0 || w.end == 3);
            assert_eq!(w.steps, 1);
        }
    }

    #[test]
    fn seeded_walks_repeat() {
        let g = StrategicGame::new(vec![2, 2], vec![1.0, 0.0, 2.0, 0.0, 2.0, 0.0, 0.0, 1.0]).unwrap();
        let a = better_response_walk(&g, &PureProfile::new(vec![1, 1]), GraphKind::Ordinal, 7, 50).unwrap();
        let b = better_response_walk(&g, &PureProfile::new(vec![1, 1]), GraphKind::Ordinal, 7, 50).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps, 50);
        assert_eq!(a.visits.values().sum::<usize>(), 51);
    }
}
