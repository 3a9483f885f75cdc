//! Deployment graphs over pure profiles: strict and ordinal unilateral
//! deviation graphs, their condensations, maximal states and walks.

mod analysis;
mod graph;
mod scc;
mod walk;

pub use analysis::{
    analyze_game, build_ordinal_potential, classify_acyclicity, condensation_dot, is_ordinal_potential, maximal_states,
    pure_nash, strongly_maximal_equilibrium_classes, AcyclicityFlags, GameGraphs, GraphReport, MaximalAnalysis,
    MaximalityKind, NashProfile,
};
pub use graph::{build_graph, build_graph_capped, Arc, DeploymentGraph, GraphKind, Polarity, DEFAULT_ARC_CAP};
pub use scc::{condensation, Condensation};
pub use walk::{better_response_walk, walk_on_graph, WalkRecord};
