use std::fmt;
use std::sync::Arc;

use super::{Matrix, MixedStrategy};
use crate::error::{invalid, Error, Result};

pub type PayoffFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Evaluator `X -> C(X)` of the payoff vector at a population state.
#[derive(Clone)]
pub enum PayoffOperator {
    Linear(Matrix),
    /// Continuity of `f` is assumed, not checked. Declared `bounds` are
    /// enforced on every evaluation.
    Nonlinear {
        dim: usize,
        f: PayoffFn,
        bounds: Option<(f64, f64)>,
    },
}

impl fmt::Debug for PayoffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear(m) => f.debug_tuple("Linear").field(m).finish(),
            Self::Nonlinear { dim, bounds, .. } => f
                .debug_struct("Nonlinear")
                .field("dim", dim)
                .field("bounds", bounds)
                .finish_non_exhaustive(),
        }
    }
}

impl PayoffOperator {
    pub fn linear(c: Matrix) -> Result<Self> {
        if !c.is_square() {
            return Err(invalid(format!(
                "payoff matrix must be square, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        Ok(Self::Linear(c))
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::linear(Matrix::from_rows(rows)?)
    }

    pub fn nonlinear(
        dim: usize,
        bounds: Option<(f64, f64)>,
        f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("operator dimension must be positive"));
        }
        if let Some((lo, hi)) = bounds {
            if !(lo <= hi) {
                return Err(invalid("operator bounds must satisfy lo <= hi"));
            }
        }
        Ok(Self::Nonlinear {
            dim,
            f: Arc::new(f),
            bounds,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Linear(m) => m.rows(),
            Self::Nonlinear { dim, .. } => *dim,
        }
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        match self {
            Self::Linear(m) => Some(m),
            Self::Nonlinear { .. } => None,
        }
    }

    /// Range guaranteed to contain every payoff coordinate. For matrices
    /// this is the entry range, since `CX` is a convex combination of columns.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            Self::Linear(m) => Some((m.min(), m.max())),
            Self::Nonlinear { bounds, .. } => *bounds,
        }
    }

    pub fn is_unit_bounded(&self) -> bool {
        matches!(self.bounds(), Some((lo, hi)) if lo >= 0.0 && hi <= 1.0)
    }

    pub fn negated(&self) -> Self {
        match self {
            Self::Linear(m) => Self::Linear(m.map(|v| -v)),
            Self::Nonlinear { dim, f, bounds } => {
                let f = Arc::clone(f);
                Self::Nonlinear {
                    dim: *dim,
                    f: Arc::new(move |x: &[f64]| f(x).into_iter().map(|v| -v).collect()),
                    bounds: bounds.map(|(lo, hi)| (-hi, -lo)),
                }
            }
        }
    }

    /// Evaluates at raw weights, skipping the simplex check.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: x.len(),
            });
        }
        match self {
            Self::Linear(m) => Ok(m.mul_vec(x)),
            Self::Nonlinear { f, bounds, .. } => {
                let v = f(x);
                if v.len() != n {
                    return Err(Error::Callback(format!(
                        "callback returned {} coordinates, expected {n}",
                        v.len()
                    )));
                }
                if let Some(bad) = v.iter().find(|p| !p.is_finite()) {
                    return Err(Error::Callback(format!("non-finite payoff {bad}")));
                }
                if let Some((lo, hi)) = bounds {
                    if let Some(bad) = v.iter().find(|p| **p < *lo || **p > *hi) {
                        return Err(Error::Callback(format!(
                            "payoff {bad} outside declared bounds [{lo}, {hi}]"
                        )));
                    }
                }
                Ok(v)
            }
        }
    }
}

/// `CX`.
pub fn payoff_vector(op: &PayoffOperator, x: &MixedStrategy) -> Result<Vec<f64>> {
    op.eval(x.weights())
}

/// Pure strategies whose payoff is within `tol` of the best.
pub fn best_response_set(op: &PayoffOperator, x: &MixedStrategy, tol: f64) -> Result<Vec<usize>> {
    let p = payoff_vector(op, x)?;
    Ok(near_max_indices(&p, tol))
}

pub(crate) fn near_max_indices(p: &[f64], tol: f64) -> Vec<usize> {
    let m = max_of(p);
    p.iter()
        .enumerate()
        .filter(|(_, v)| **v >= m - tol)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// True iff all payoff coordinates at `x` agree within `tol`.
pub fn is_equalizer(op: &PayoffOperator, x: &MixedStrategy, tol: f64) -> Result<bool> {
    let p = payoff_vector(op, x)?;
    Ok(max_of(&p) - min_of(&p) <= tol)
}

pub fn rock_paper_scissors() -> Matrix {
    Matrix::from_rows(vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ])
    .expect("static matrix")
}
