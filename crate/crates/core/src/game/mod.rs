//! Game representations, payoff evaluation and equilibrium predicates.

mod bimatrix;
pub mod io;
mod matrix;
mod operator;
mod strategic;
mod strategy;
mod support_enum;

pub use bimatrix::{
    is_approx_equilibrium, symmetric_regret, symmetric_well_supported_gap, BimatrixGame, EquilibriumMode, GameRef,
    ProfileRef,
};
pub use matrix::Matrix;
pub use operator::{best_response_set, is_equalizer, payoff_vector, rock_paper_scissors, PayoffFn, PayoffOperator};
pub use strategic::{reduced_game, PureProfile, StrategicGame, MAX_PROFILES};
pub use strategy::{carrier, MixedStrategy, SIMPLEX_TOL};
pub use support_enum::{support_enumeration_equilibria, Equilibrium, SupportEnumeration, ORACLE_EPS};

pub(crate) use operator::{max_of, min_of};

/// Default slack for equilibrium predicates.
pub const EQ_TOL: f64 = 1e-9;
