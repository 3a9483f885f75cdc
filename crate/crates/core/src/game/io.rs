//! JSON game files.
//!
//! ```json
//! { "kind": "bimatrix", "A": [[...]], "B": [[...]] }
//! { "kind": "symmetric", "A": [[...]] }
//! { "kind": "strategic", "strategy_counts": [2, 2], "payoffs": [[u0, u1], ...] }
//! ```
//!
//! Strategic payoffs list one payoff vector per profile in row-major order
//! (first player most significant).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BimatrixGame, Matrix, StrategicGame};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GameFile {
    Bimatrix {
        #[serde(rename = "A")]
        a: Matrix,
        #[serde(rename = "B")]
        b: Matrix,
    },
    Symmetric {
        #[serde(rename = "A")]
        a: Matrix,
        #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
        b: Option<Matrix>,
    },
    Strategic {
        strategy_counts: Vec<usize>,
        payoffs: Vec<Vec<f64>>,
    },
}

#[derive(Clone, Debug)]
pub enum Game {
    Bimatrix(BimatrixGame),
    /// Single-population game `(C, Cᵀ)`.
    Symmetric(Matrix),
    Strategic(StrategicGame),
}

impl Game {
    pub fn to_strategic(&self) -> Result<StrategicGame> {
        Ok(match self {
            Game::Bimatrix(g) => StrategicGame::from_bimatrix(g),
            Game::Symmetric(c) => StrategicGame::from_bimatrix(&BimatrixGame::symmetric(c.clone())?),
            Game::Strategic(g) => g.clone(),
        })
    }

    pub fn to_bimatrix(&self) -> Result<BimatrixGame> {
        match self {
            Game::Bimatrix(g) => Ok(g.clone()),
            Game::Symmetric(c) => BimatrixGame::symmetric(c.clone()),
            Game::Strategic(g) => {
                if g.player_count() != 2 {
                    return Err(invalid("a bimatrix game needs exactly two players"));
                }
                let (m, n) = (g.strategy_counts()[0], g.strategy_counts()[1]);
                let a = Matrix::from_fn(m, n, |i, j| g.payoff(i * n + j, 0));
                let b = Matrix::from_fn(m, n, |i, j| g.payoff(i * n + j, 1));
                BimatrixGame::new(a, b)
            }
        }
    }
}

impl TryFrom<GameFile> for Game {
    type Error = crate::Error;

    fn try_from(f: GameFile) -> Result<Self> {
        match f {
            GameFile::Bimatrix { a, b } => Ok(Game::Bimatrix(BimatrixGame::new(a, b)?)),
            GameFile::Symmetric { a, b } => {
                if !a.is_square() {
                    return Err(invalid("symmetric game needs a square matrix"));
                }
                if let Some(b) = b {
                    if b != a.transpose() {
                        return Err(invalid("symmetric game requires B = A transposed"));
                    }
                }
                Ok(Game::Symmetric(a))
            }
            GameFile::Strategic {
                strategy_counts,
                payoffs,
            } => {
                let n = strategy_counts.len();
                if let Some(bad) = payoffs.iter().position(|p| p.len() != n) {
                    return Err(invalid(format!("profile {bad} does not list {n} payoffs")));
                }
                Ok(Game::Strategic(StrategicGame::new(
                    strategy_counts,
                    payoffs.into_iter().flatten().collect(),
                )?))
            }
        }
    }
}

impl From<&Game> for GameFile {
    fn from(g: &Game) -> Self {
        match g {
            Game::Bimatrix(g) => GameFile::Bimatrix {
                a: g.a().clone(),
                b: g.b().clone(),
            },
            Game::Symmetric(c) => GameFile::Symmetric { a: c.clone(), b: None },
            Game::Strategic(g) => GameFile::from(g),
        }
    }
}

impl From<&StrategicGame> for GameFile {
    fn from(g: &StrategicGame) -> Self {
        GameFile::Strategic {
            strategy_counts: g.strategy_counts().to_vec(),
            payoffs: g.payoff_table().chunks(g.player_count()).map(<[f64]>::to_vec).collect(),
        }
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    let f: GameFile = serde_json::from_str(text)?;
    Game::try_from(f)
}

pub fn read_game(path: impl AsRef<Path>) -> Result<Game> {
    parse_game(&std::fs::read_to_string(path)?)
}

pub fn game_to_json(g: &Game) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GameFile::from(g))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_each_kind() {
        let b = parse_game(r#"{"kind":"bimatrix","A":[[1,2]],"B":[[0,1]]}"#).unwrap();
        assert!(matches!(b, Game::Bimatrix(ref g) if g.cols() == 2));
        let s = parse_game(r#"{"kind":"symmetric","A":[[10,-1],[0,0]]}"#).unwrap();
        assert!(s.to_bimatrix().unwrap().is_symmetric());
        let t = parse_game(r#"{"kind":"strategic","strategy_counts":[2,1],"payoffs":[[1,2],[3,4]]}"#).unwrap();
        let g = t.to_strategic().unwrap();
        assert_eq!(g.payoffs_at(1), &[3.0, 4.0]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_game(r#"{"kind":"symmetric","A":[[1,2]]}"#).is_err());
        assert!(parse_game(r#"{"kind":"symmetric","A":[[1,2],[3,4]],"B":[[1,2],[3,4]]}"#).is_err());
        assert!(parse_game(r#"{"kind":"strategic","strategy_counts":[2],"payoffs":[[1,2],[3]]}"#).is_err());
        assert!(parse_game(r#"{"kind":"bimatrix","A":[[1]],"B":[[1,2]]}"#).is_err());
    }

    #[test]
    fn roundtrip_through_json() {
        let t = parse_game(r#"{"kind":"strategic","strategy_counts":[2,2],"payoffs":[[1,0],[2,0],[2,0],[0,1]]}"#).unwrap();
        let again = parse_game(&game_to_json(&t).unwrap()).unwrap();
        assert_eq!(again.to_strategic().unwrap(), t.to_strategic().unwrap());
        let bm = again.to_bimatrix().unwrap();
        assert_eq!(bm.a().get(1, 0), 2.0);
        assert_eq!(bm.b().get(1, 1), 1.0);
    }
}
