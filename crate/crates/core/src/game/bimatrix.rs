use serde::{Deserialize, Serialize};

use super::operator::max_of;
use super::{payoff_vector, Matrix, MixedStrategy, PayoffOperator};
use crate::error::{invalid, Error, Result};

/// Two-player game: row payoffs `A`, column payoffs `B`, both `m x n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BimatrixGame {
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(invalid(format!(
                "payoff shapes differ: {:?} vs {:?}",
                a.shape(),
                b.shape()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn from_rows(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(Matrix::from_rows(a)?, Matrix::from_rows(b)?)
    }

    /// The symmetric game `(C, Cᵀ)`.
    pub fn symmetric(c: Matrix) -> Result<Self> {
        if !c.is_square() {
            return Err(invalid("symmetric game needs a square matrix"));
        }
        let b = c.transpose();
        Ok(Self { a: c, b })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.is_square() && self.b == self.a.transpose()
    }

    /// Row player's payoff vector `AQ` and column player's `PᵀB`.
    pub fn payoff_vectors(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_dims(p, q)?;
        Ok((self.a.mul_vec(q.weights()), self.b.vec_mul(p.weights())))
    }

    fn check_dims(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<()> {
        if p.len() != self.rows() {
            return Err(Error::Dimension {
                expected: self.rows(),
                got: p.len(),
            });
        }
        if q.len() != self.cols() {
            return Err(Error::Dimension {
                expected: self.cols(),
                got: q.len(),
            });
        }
        Ok(())
    }

    /// Largest gain either player can obtain by a unilateral deviation.
    pub fn regret(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<f64> {
        let (aq, pb) = self.payoff_vectors(p, q)?;
        let r = max_of(&aq) - p.dot(&aq);
        let c = max_of(&pb) - q.dot(&pb);
        Ok(r.max(c))
    }

    /// Smallest `eps` for which `(p, q)` is eps-well-supported.
    pub fn well_supported_gap(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<f64> {
        let (aq, pb) = self.payoff_vectors(p, q)?;
        Ok(support_gap(p, &aq).max(support_gap(q, &pb)))
    }
}

/// Worst shortfall from the best payoff among strategies with positive mass.
fn support_gap(x: &MixedStrategy, payoffs: &[f64]) -> f64 {
    let best = max_of(payoffs);
    x.weights()
        .iter()
        .zip(payoffs)
        .filter(|(w, _)| **w > 0.0)
        .map(|(_, p)| best - p)
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumMode {
    Symmetric,
    Bimatrix,
    WellSupported,
}

#[derive(Clone, Copy, Debug)]
pub enum GameRef<'a> {
    Bimatrix(&'a BimatrixGame),
    /// A single-population game; linear operators stand for `(C, Cᵀ)`.
    Operator(&'a PayoffOperator),
}

#[derive(Clone, Copy, Debug)]
pub enum ProfileRef<'a> {
    Symmetric(&'a MixedStrategy),
    Pair(&'a MixedStrategy, &'a MixedStrategy),
}

/// `Y·C(Y)` shortfall from the best pure reply, for a single population.
pub fn symmetric_regret(op: &PayoffOperator, y: &MixedStrategy) -> Result<f64> {
    let p = payoff_vector(op, y)?;
    Ok(max_of(&p) - y.dot(&p))
}

pub fn symmetric_well_supported_gap(op: &PayoffOperator, y: &MixedStrategy) -> Result<f64> {
    let p = payoff_vector(op, y)?;
    Ok(support_gap(y, &p))
}

/// Approximate-equilibrium predicate.
///
/// * `Symmetric`: for all `i`, `(Y - E_i)·C(Y) >= -eps`.
/// * `Bimatrix`: neither player gains more than `eps` by deviating.
/// * `WellSupported`: every pure strategy with positive mass earns within
///   `eps` of the best pure payoff against the opponent.
///
/// Symmetric profiles against a bimatrix game are read as `(Y, Y)`.
pub fn is_approx_equilibrium(
    game: GameRef<'_>,
    profile: ProfileRef<'_>,
    eps: f64,
    mode: EquilibriumMode,
) -> Result<bool> {
    if !(eps >= 0.0) {
        return Err(invalid("eps must be nonnegative"));
    }
    let owned;
    let bim: Option<&BimatrixGame> = match game {
        GameRef::Bimatrix(g) => Some(g),
        GameRef::Operator(PayoffOperator::Linear(c)) if !matches!(profile, ProfileRef::Symmetric(_)) => {
            owned = BimatrixGame::symmetric(c.clone())?;
            Some(&owned)
        }
        GameRef::Operator(_) => None,
    };
    match (bim, profile) {
        (None, ProfileRef::Symmetric(y)) => {
            let GameRef::Operator(op) = game else { unreachable!() };
            let gap = match mode {
                EquilibriumMode::WellSupported => symmetric_well_supported_gap(op, y)?,
                _ => symmetric_regret(op, y)?,
            };
            Ok(gap <= eps)
        }
        (None, ProfileRef::Pair(..)) => Err(invalid(
            "pair profiles need a linear operator or a bimatrix game",
        )),
        (Some(g), profile) => {
            let (p, q) = match profile {
                ProfileRef::Symmetric(y) => (y, y),
                ProfileRef::Pair(p, q) => (p, q),
            };
            let gap = match mode {
                EquilibriumMode::WellSupported => g.well_supported_gap(p, q)?,
                _ => g.regret(p, q)?,
            };
            Ok(gap <= eps)
        }
    }
}
