use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a mixed strategy.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A probability vector over a finite set of pure strategies.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidStrategy("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidStrategy(format!("weight {w} is not a probability")));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidStrategy(format!("weights sum to {s}")));
        }
        Ok(Self(weights))
    }

    /// Scales nonnegative weights with positive total onto the simplex.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidStrategy("weights must be finite and nonnegative".into()));
        }
        let s: f64 = weights.iter().sum();
        if !(s > 0.0) {
            return Err(Error::InvalidStrategy("weights have zero total mass".into()));
        }
        Self::new(weights.into_iter().map(|w| w / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform strategy needs n > 0");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        assert!(i < n, "vertex index out of range");
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        Self(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Indices carrying weight strictly above `tol`.
    pub fn carrier(&self, tol: f64) -> Vec<usize> {
        carrier(self, tol)
    }

    pub fn is_interior(&self, tol: f64) -> bool {
        self.0.iter().all(|w| *w > tol)
    }

    pub fn is_pure(&self) -> bool {
        self.0.iter().filter(|w| **w > 0.0).count() == 1
    }

    /// `(1 - t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| ((1.0 - t) * a + t * b).max(0.0))
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn squared_distance(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// Builds from weights already on the simplex up to rounding, without the
    /// sum check. Used for outputs of exact simplex-preserving maps.
    pub(crate) fn from_simplex_unchecked(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|w| *w >= 0.0));
        Self(weights)
    }
}

impl<'de> Deserialize<'de> for MixedStrategy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Vec::<f64>::deserialize(d)?;
        MixedStrategy::new(w).map_err(serde::de::Error::custom)
    }
}

pub fn carrier(x: &MixedStrategy, tol: f64) -> Vec<usize> {
    x.0.iter()
        .enumerate()
        .filter(|(_, w)| **w > tol)
        .map(|(i, _)| i)
        .collect()
}
