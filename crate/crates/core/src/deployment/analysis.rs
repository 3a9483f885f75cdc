use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{build_graph, condensation, Condensation, DeploymentGraph, GraphKind, Polarity};
use crate::error::Result;
use crate::game::StrategicGame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaximalityKind {
    /// Sinks of the strict graph.
    Weak,
    /// Sinks of the ordinal graph.
    Strong,
}

impl MaximalityKind {
    pub fn graph_kind(self) -> GraphKind {
        match self {
            MaximalityKind::Weak => GraphKind::Strict,
            MaximalityKind::Strong => GraphKind::Ordinal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NashProfile {
    pub profile: usize,
    pub choices: Vec<usize>,
    /// Every unilateral deviation is strictly harmful.
    pub strict: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AcyclicityFlags {
    pub ordinally_acyclic: bool,
    pub weakly_acyclic: bool,
    pub weakly_ordinally_acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalAnalysis {
    pub kind: MaximalityKind,
    pub maximal_states: Vec<usize>,
    /// Sink components made up entirely of pure Nash equilibria.
    pub classes: Vec<Vec<usize>>,
    pub pure_nash: Vec<usize>,
    pub flags: AcyclicityFlags,
}

/// Pure profiles where no unilateral deviation gains more than `tol`.
pub fn pure_nash(game: &StrategicGame, tol: f64) -> Vec<NashProfile> {
    (0..game.profile_count())
        .filter_map(|s| {
            let mut strict = true;
            for (i, &k) in game.strategy_counts().iter().enumerate() {
                let cur = game.choice(s, i);
                let base = game.payoff(s, i);
                for t in (0..k).filter(|&t| t != cur) {
                    let gain = game.payoff(game.deviate(s, i, t), i) - base;
                    if gain > tol {
                        return None;
                    }
                    if gain >= -tol {
                        strict = false;
                    }
                }
            }
            Some(NashProfile {
                profile: s,
                choices: game.decode(s),
                strict,
            })
        })
        .collect()
}

fn nash_mask(game: &StrategicGame, tol: f64) -> Vec<bool> {
    let mut mask = vec![false; game.profile_count()];
    for p in pure_nash(game, tol) {
        mask[p.profile] = true;
    }
    mask
}

fn sink_states(c: &Condensation) -> Vec<usize> {
    let mut v: Vec<usize> = c.sinks.iter().flat_map(|&id| c.components[id].iter().copied()).collect();
    v.sort_unstable();
    v
}

fn nash_sinks(c: &Condensation, nash: &[bool]) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = c
        .sinks
        .iter()
        .map(|&id| &c.components[id])
        .filter(|comp| comp.iter().all(|&s| nash[s]))
        .cloned()
        .collect();
    v.sort();
    v
}

/// All graphs and derived sets for one game, computed once.
#[derive(Clone, Debug)]
pub struct GameGraphs {
    pub strict: DeploymentGraph,
    pub ordinal: DeploymentGraph,
    pub strict_scc: Condensation,
    pub ordinal_scc: Condensation,
    pub nash: Vec<bool>,
    pub tie_tol: f64,
}

impl GameGraphs {
    pub fn new(game: &StrategicGame, tie_tol: f64) -> Result<Self> {
        let strict = build_graph(game, GraphKind::Strict, tie_tol)?;
        let ordinal = build_graph(game, GraphKind::Ordinal, tie_tol)?;
        let strict_scc = condensation(&strict);
        let ordinal_scc = condensation(&ordinal);
        Ok(Self {
            strict,
            ordinal,
            strict_scc,
            ordinal_scc,
            nash: nash_mask(game, tie_tol),
            tie_tol,
        })
    }

    pub fn graph(&self, kind: GraphKind) -> &DeploymentGraph {
        match kind {
            GraphKind::Strict => &self.strict,
            GraphKind::Ordinal => &self.ordinal,
        }
    }

    pub fn condensation(&self, kind: GraphKind) -> &Condensation {
        match kind {
            GraphKind::Strict => &self.strict_scc,
            GraphKind::Ordinal => &self.ordinal_scc,
        }
    }

    pub fn maximal_states(&self, kind: MaximalityKind) -> Vec<usize> {
        sink_states(self.condensation(kind.graph_kind()))
    }

    /// Strongly maximal equilibrium classes: ordinal sink components all of
    /// whose states are pure Nash equilibria.
    pub fn strong_classes(&self) -> Vec<Vec<usize>> {
        nash_sinks(&self.ordinal_scc, &self.nash)
    }

    pub fn flags(&self) -> AcyclicityFlags {
        let c = &self.ordinal_scc;
        let ordinally_acyclic = (0..self.ordinal.profile_count()).all(|v| {
            self.ordinal
                .out_arcs(v)
                .iter()
                .all(|a| a.polarity == Polarity::Neutral || c.component_of[a.target] != c.component_of[v])
        });
        let weakly_acyclic = self
            .strict_scc
            .sinks
            .iter()
            .all(|&id| matches!(self.strict_scc.components[id].as_slice(), [s] if self.nash[*s]));
        let weakly_ordinally_acyclic = c.sinks.iter().all(|&id| c.components[id].iter().all(|&s| self.nash[s]));
        AcyclicityFlags {
            ordinally_acyclic,
            weakly_acyclic,
            weakly_ordinally_acyclic,
        }
    }

    pub fn analysis(&self, kind: MaximalityKind) -> MaximalAnalysis {
        let classes = match kind {
            MaximalityKind::Weak => nash_sinks(&self.strict_scc, &self.nash),
            MaximalityKind::Strong => self.strong_classes(),
        };
        MaximalAnalysis {
            kind,
            maximal_states: self.maximal_states(kind),
            classes,
            pure_nash: (0..self.nash.len()).filter(|&s| self.nash[s]).collect(),
            flags: self.flags(),
        }
    }

    /// Ordinal potential from a topological order of the ordinal
    /// condensation; `None` unless the game is ordinally acyclic.
    pub fn ordinal_potential(&self) -> Option<Vec<i64>> {
        if !self.flags().ordinally_acyclic {
            return None;
        }
        let c = &self.ordinal_scc;
        let mut rank = vec![0i64; c.component_count()];
        for (k, id) in c.topological_order().into_iter().enumerate() {
            rank[id] = k as i64;
        }
        Some(c.component_of.iter().map(|&id| rank[id]).collect())
    }
}

pub fn maximal_states(game: &StrategicGame, kind: MaximalityKind) -> Result<MaximalAnalysis> {
    Ok(GameGraphs::new(game, 0.0)?.analysis(kind))
}

pub fn strongly_maximal_equilibrium_classes(game: &StrategicGame) -> Result<Vec<Vec<usize>>> {
    Ok(GameGraphs::new(game, 0.0)?.strong_classes())
}

pub fn classify_acyclicity(game: &StrategicGame) -> Result<AcyclicityFlags> {
    Ok(GameGraphs::new(game, 0.0)?.flags())
}

pub fn build_ordinal_potential(game: &StrategicGame) -> Result<Option<Vec<i64>>> {
    Ok(GameGraphs::new(game, 0.0)?.ordinal_potential())
}

/// Checks `u_i(s') > u_i(s)` iff `P(s') > P(s)` on every unilateral deviation.
pub fn is_ordinal_potential(game: &StrategicGame, potential: &[f64], tol: f64) -> bool {
    if potential.len() != game.profile_count() {
        return false;
    }
    (0..game.profile_count()).all(|s| {
        game.strategy_counts().iter().enumerate().all(|(i, &k)| {
            (0..k).all(|t| {
                let s2 = game.deviate(s, i, t);
                let du = game.payoff(s2, i) - game.payoff(s, i);
                let dp = potential[s2] - potential[s];
                (du > tol) == (dp > 0.0)
            })
        })
    })
}

/// Full report used by the `analyze-graph` command.
#[derive(Clone, Debug, Serialize)]
pub struct GraphReport {
    pub profiles: Vec<Vec<usize>>,
    pub pure_nash: Vec<NashProfile>,
    pub weak_maximal: Vec<usize>,
    pub strong_maximal: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub flags: AcyclicityFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<i64>>,
}

pub fn analyze_game(game: &StrategicGame, tie_tol: f64) -> Result<(GraphReport, GameGraphs)> {
    let g = GameGraphs::new(game, tie_tol)?;
    let report = GraphReport {
        profiles: (0..game.profile_count()).map(|s| game.decode(s)).collect(),
        pure_nash: pure_nash(game, tie_tol),
        weak_maximal: g.maximal_states(MaximalityKind::Weak),
        strong_maximal: g.maximal_states(MaximalityKind::Strong),
        classes: g.strong_classes(),
        flags: g.flags(),
        potential: g.ordinal_potential(),
    };
    Ok((report, g))
}

/// DOT text of a condensation; sink components are drawn doubled.
pub fn condensation_dot(game: &StrategicGame, c: &Condensation) -> String {
    let mut out = String::from("digraph condensation {\n  rankdir=LR;\n");
    for (id, comp) in c.components.iter().enumerate() {
        let label: Vec<String> = comp
            .iter()
            .map(|&s| {
                let d: Vec<String> = game.decode(s).iter().map(usize::to_string).collect();
                format!("({})", d.join(","))
            })
            .collect();
        let shape = if c.is_sink(id) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  c{id} [shape={shape}, label=\"{}\"];", label.join("\\n"));
    }
    for &(a, b) in &c.dag_arcs {
        let _ = writeln!(out, "  c{a} -> c{b};");
    }
    out.push_str("}\n");
    out
}
